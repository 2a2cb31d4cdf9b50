//! The reduced bar complex, cell by cell, and its homology.
//!
//! A chain `(β, S)` is a monomial `β` with a set `S` of marked internal
//! edges; the components of `β` cut along the unmarked edges must be normal
//! monomials of the operad. With the components `x_1, …, x_d` ordered by
//! the preorder position of their roots, `(β, S)` stands for the tensor
//! `s x_1 ⊗ … ⊗ s x_d`, each `x_k` written in its own vertex preorder. All
//! signs are Koszul signs of this convention: the differential contracts an
//! unmarked edge between components `p < q`, composes them and writes the
//! result back in normal form.

use std::collections::{BTreeSet, HashMap};

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::element::{Monomial, OperadElement};
use crate::field::{Field, Scalar};
use crate::free::{koszul_sign_odd, monomials_of_weight};
use crate::generators::GeneratorModule;
use crate::ideal::ExactReducer;
use crate::linalg::{rank, SparseVec};
use crate::rewrite::RewriteSystem;
use crate::tree::{Flat, Tag};

/// A basis chain of the bar complex: a monomial and its marked edges,
/// named by their upper vertex in preorder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarChain {
    pub tree: Monomial,
    pub marked: BTreeSet<usize>,
}

impl BarChain {
    pub fn weight(&self) -> usize {
        self.tree.weight()
    }

    /// Bar degree: the number of components.
    pub fn degree(&self) -> usize {
        self.weight() - self.marked.len()
    }

    /// Components as increasing vertex lists, ordered by their roots.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components(&self.tree.flatten(), &self.marked)
    }

    /// Unmarked internal edges.
    pub fn cutting_edges(&self) -> Vec<usize> {
        self.tree.flatten().internal_edges().filter(|e| !self.marked.contains(e)).collect()
    }
}

fn components(flat: &Flat<'_, u32>, marked: &BTreeSet<usize>) -> Vec<Vec<usize>> {
    let mut root_of = vec![0usize; flat.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for v in 0..flat.len() {
        root_of[v] = if v > 0 && marked.contains(&v) { root_of[flat.nodes[v].parent.expect("non-root")] } else { v };
        let k = *slot.entry(root_of[v]).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[k].push(v);
    }
    out
}

fn parity(gens: &GeneratorModule, flat: &Flat<'_, u32>, vertices: &[usize]) -> i32 {
    vertices.iter().map(|&v| gens.degree(*flat.nodes[v].label)).sum::<i32>().rem_euclid(2)
}

fn sign(field: Field, odd: bool) -> Scalar {
    if odd {
        field.neg(&Scalar::one())
    } else {
        Scalar::one()
    }
}

/// The bar complex of a split presentation. Normal monomials and normal
/// forms come from exact linear algebra in each cell, which for a PBW
/// presentation coincides with the rewriting basis (`S ⊆ Adm_β`).
pub struct BarComplex<'a> {
    rs: &'a RewriteSystem,
    reducer: ExactReducer<'a>,
}

impl<'a> BarComplex<'a> {
    pub fn new(rs: &'a RewriteSystem) -> Self {
        BarComplex { rs, reducer: ExactReducer::new(rs) }
    }

    pub fn rewrite_system(&self) -> &RewriteSystem {
        self.rs
    }

    pub fn is_chain(&self, c: &BarChain) -> bool {
        let flat = c.tree.flatten();
        components(&flat, &c.marked)
            .iter()
            .all(|comp| comp.len() < 2 || self.reducer.is_normal(&flat.restrict(comp).tree))
    }

    /// All chains of weight `s`, arity `r` and bar degree `d`.
    pub fn basis(&self, s: usize, r: usize, d: usize) -> Vec<BarChain> {
        if d == 0 || d > s {
            return Vec::new();
        }
        let mut out = Vec::new();
        for tree in monomials_of_weight(self.rs.gens(), s, r) {
            let edges: Vec<usize> = (1..s).collect();
            for subset in subsets(&edges, s - d) {
                let chain = BarChain { tree: tree.clone(), marked: subset.into_iter().collect() };
                if self.is_chain(&chain) {
                    out.push(chain);
                }
            }
        }
        out
    }

    /// `δ(β, S)`: a sum over the unmarked edges.
    pub fn differential(&self, c: &BarChain) -> Vec<(BarChain, Scalar)> {
        let gens = self.rs.gens();
        let field = gens.field();
        let flat = c.tree.flatten();
        let comps = components(&flat, &c.marked);
        let comp_of: Vec<usize> = {
            let mut v = vec![0; flat.len()];
            for (k, comp) in comps.iter().enumerate() {
                for &x in comp {
                    v[x] = k;
                }
            }
            v
        };
        let deg: Vec<i32> = comps.iter().map(|comp| parity(gens, &flat, comp)).collect();
        let shifted: Vec<i32> = deg.iter().map(|d| (d + 1) % 2).collect();
        let vdeg: Vec<i32> = (0..flat.len()).map(|v| gens.degree(*flat.nodes[v].label)).collect();
        let mut out: HashMap<BarChain, Scalar> = HashMap::new();
        for e in flat.internal_edges() {
            if c.marked.contains(&e) {
                continue;
            }
            let q = comp_of[e];
            let p = comp_of[flat.nodes[e].parent.expect("non-root")];
            debug_assert!(p < q);
            // Bring s x_q next to s x_p, pass δ over the first p factors and
            // merge: s x ⊗ s y ↦ (−1)^{|x|} s(x y).
            let mut odd = shifted[..p].iter().sum::<i32>() % 2 == 1;
            odd ^= shifted[q] * shifted[p + 1..q].iter().sum::<i32>() % 2 == 1;
            odd ^= deg[p] == 1;
            let mut union: Vec<usize> = comps[p].iter().chain(&comps[q]).copied().collect();
            union.sort_unstable();
            // x_p ⊗ x_q against the preorder of the merged monomial.
            let ud: Vec<i32> = union.iter().map(|&v| vdeg[v]).collect();
            let order: Vec<usize> =
                comps[p].iter().chain(&comps[q]).map(|v| union.binary_search(v).expect("member")).collect();
            odd ^= koszul_sign_odd(&ud, &order);
            let base = sign(field, odd);
            let restriction = flat.restrict(&union);
            let nf = self.reducer.reduce(&OperadElement::monomial(field, restriction.tree.clone()));
            // Component order after the merge, before re-sorting: the old
            // order with q removed and the merged block in p's slot.
            let before: Vec<usize> = (0..comps.len()).filter(|&k| k != q).collect();
            for (rho, coef) in nf.terms() {
                let (tree, tags) = flat.substitute(&union, &restriction.hanging, rho);
                let new_comp: Vec<usize> = tags
                    .iter()
                    .map(|t| match t {
                        Tag::Old(v) => comp_of[*v],
                        Tag::New(_) => p,
                    })
                    .collect();
                let nflat = tree.flatten();
                let marked: BTreeSet<usize> = nflat
                    .internal_edges()
                    .filter(|&u| new_comp[u] == new_comp[nflat.nodes[u].parent.expect("non-root")])
                    .collect();
                // New component order: by root position in the new tree.
                let mut after: Vec<usize> = Vec::new();
                for (u, &k) in new_comp.iter().enumerate() {
                    let is_root = u == 0 || !marked.contains(&u);
                    if is_root {
                        after.push(k);
                    }
                }
                let degs: Vec<i32> = before.iter().map(|&k| shifted[k]).collect();
                let reorder: Vec<usize> =
                    after.iter().map(|k| before.iter().position(|x| x == k).expect("component")).collect();
                let odd2 = koszul_sign_odd(&degs, &reorder);
                let value = field.mul(&field.mul(&base, coef), &sign(field, odd2));
                let entry = out.entry(BarChain { tree, marked }).or_insert_with(|| field.zero());
                *entry = field.add(entry, &value);
            }
        }
        let mut v: Vec<(BarChain, Scalar)> = out.into_iter().filter(|(_, c)| !num_traits::Zero::is_zero(c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Builds the cell `(s, r)` and computes its homology. Cells whose
    /// chain groups exceed `cap` are skipped.
    pub fn cell(&self, s: usize, r: usize, cap: usize) -> CellHomology {
        let field = self.rs.gens().field();
        let bases: Vec<Vec<BarChain>> = (0..=s + 1).map(|d| self.basis(s, r, d)).collect();
        let chain_dims: Vec<usize> = (1..=s).map(|d| bases[d].len()).collect();
        let mut report = CellHomology {
            weight: s,
            arity: r,
            chain_dims: chain_dims.clone(),
            ranks: vec![0; s],
            homology: vec![0; s],
            euler: chain_dims.iter().enumerate().map(|(k, n)| if k % 2 == 0 { *n as i64 } else { -(*n as i64) }).sum(),
            koszul_dim: 0,
            dual_basis_count: self.rs.dual_basis_monomials(s, r).len(),
            square_zero: true,
            skipped: false,
        };
        if chain_dims.iter().any(|&n| n > cap) {
            report.skipped = true;
            return report;
        }
        let index: Vec<HashMap<&BarChain, usize>> =
            bases.iter().map(|b| b.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();
        // images[d][i] = δ of chain i in degree d, in degree-(d−1) coordinates.
        let mut images: Vec<Vec<SparseVec>> = vec![Vec::new(); s + 1];
        for d in 2..=s {
            images[d] = bases[d]
                .iter()
                .map(|c| {
                    let mut row: SparseVec =
                        self.differential(c).into_iter().map(|(t, v)| (index[d - 1][&t], v)).collect();
                    row.sort_by_key(|e| e.0);
                    row
                })
                .collect();
        }
        for d in 3..=s {
            for row in &images[d] {
                let mut acc: HashMap<usize, Scalar> = HashMap::new();
                for (i, v) in row {
                    for (j, w) in &images[d - 1][*i] {
                        let e = acc.entry(*j).or_insert_with(|| field.zero());
                        *e = field.add(e, &field.mul(v, w));
                    }
                }
                if acc.values().any(|x| !num_traits::Zero::is_zero(x)) {
                    report.square_zero = false;
                }
            }
        }
        for d in 2..=s {
            report.ranks[d - 1] = rank(field, images[d].clone());
        }
        for d in 1..=s {
            let out_rank = report.ranks[d - 1];
            let in_rank = if d < s { report.ranks[d] } else { 0 };
            report.homology[d - 1] = chain_dims[d - 1] - out_rank - in_rank;
        }
        report.koszul_dim = chain_dims[s - 1] - report.ranks[s - 1];
        report
    }

    pub fn homology(&self, max_weight: usize, max_arity: usize, cap: usize) -> HomologyReport {
        let grid: Vec<(usize, usize)> = (1..=max_weight).flat_map(|s| (1..=max_arity).map(move |r| (s, r))).collect();
        let cells: Vec<CellHomology> = grid
            .par_iter()
            .filter(|&&(s, r)| !monomials_of_weight(self.rs.gens(), s, r).is_empty())
            .map(|&(s, r)| self.cell(s, r, cap))
            .collect();
        HomologyReport { name: self.rs.presentation().name.clone(), max_weight, max_arity, cells }
    }
}

/// All `k`-element subsets of `items`, in lexicographic order.
fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out: Vec<Vec<usize>> = subsets(&items[1..], k - 1)
        .into_iter()
        .map(|mut s| {
            s.insert(0, items[0]);
            s
        })
        .collect();
    out.extend(subsets(&items[1..], k));
    out
}

/// Homology of one cell. Index `d − 1` of each vector holds bar degree `d`.
#[derive(Clone, Debug, Serialize)]
pub struct CellHomology {
    pub weight: usize,
    pub arity: usize,
    pub chain_dims: Vec<usize>,
    /// `ranks[d − 1]` is the rank of `δ: B_d → B_{d−1}`.
    pub ranks: Vec<usize>,
    pub homology: Vec<usize>,
    pub euler: i64,
    /// `dim ker(δ: B_s → B_{s−1})`.
    pub koszul_dim: usize,
    /// Monomials with no admissible edge.
    pub dual_basis_count: usize,
    pub square_zero: bool,
    pub skipped: bool,
}

impl CellHomology {
    /// Homology vanishes off the diagonal `d = s`.
    pub fn is_diagonal(&self) -> bool {
        self.homology.iter().enumerate().all(|(k, &h)| k + 1 == self.weight || h == 0)
    }

    pub fn homology_euler(&self) -> i64 {
        self.homology.iter().enumerate().map(|(k, &h)| if k % 2 == 0 { h as i64 } else { -(h as i64) }).sum()
    }

    pub fn ok(&self) -> bool {
        !self.skipped && self.square_zero && self.is_diagonal() && self.koszul_dim == self.dual_basis_count
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub name: String,
    pub max_weight: usize,
    pub max_arity: usize,
    pub cells: Vec<CellHomology>,
}

impl HomologyReport {
    pub fn is_diagonal(&self) -> bool {
        self.cells.iter().all(|c| !c.skipped && c.square_zero && c.is_diagonal())
    }

    pub fn ok(&self) -> bool {
        self.cells.iter().all(CellHomology::ok)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin;

    fn rs(name: &str) -> RewriteSystem {
        RewriteSystem::new(&builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn com_weight_two_chains() {
        let rs = rs("com");
        let bar = BarComplex::new(&rs);
        assert_eq!(bar.basis(2, 3, 2).len(), 3);
        assert_eq!(bar.basis(2, 3, 1).len(), 1);
        assert!(bar.basis(2, 3, 3).is_empty());
    }

    #[test]
    fn degree_one_chains_have_no_differential() {
        let rs = rs("lie");
        let bar = BarComplex::new(&rs);
        for c in bar.basis(3, 4, 1) {
            assert!(bar.differential(&c).is_empty());
        }
    }

    #[test]
    fn com_cells() {
        let rs = rs("com");
        let bar = BarComplex::new(&rs);
        let c = bar.cell(2, 3, usize::MAX);
        assert_eq!(c.koszul_dim, 2);
        let c = bar.cell(3, 4, usize::MAX);
        assert!(c.square_zero && c.is_diagonal());
        assert_eq!(c.koszul_dim, 6);
        assert_eq!(c.homology_euler(), c.euler);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(&[1, 2, 3], 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(&[1, 2], 0), vec![Vec::<usize>::new()]);
    }
}
