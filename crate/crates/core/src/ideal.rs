//! Components of the ideal generated by the relations, operad dimensions
//! and the PBW certificate.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::element::{display_monomial, Monomial, OperadElement};
use crate::field::Scalar;
use crate::free::{monomials_of_weight, substitute_element};
use crate::generators::GenId;
use crate::linalg::{rank, row_echelon, Echelon, SparseVec};
use crate::order::MonomialOrder;
use crate::rewrite::RewriteSystem;
use crate::tree::Tree;

/// Spanning set of the weight-`s`, arity-`r` component of the ideal: every
/// reduced relation placed on every vertex pair of every context.
pub fn ideal_elements(rs: &RewriteSystem, s: usize, r: usize) -> Vec<OperadElement> {
    if s < 2 {
        return Vec::new();
    }
    let gens = rs.gens();
    let mut seen: HashSet<Tree<Option<GenId>>> = HashSet::new();
    let mut out = Vec::new();
    for t in monomials_of_weight(gens, s, r) {
        let flat = t.flatten();
        for e in flat.internal_edges() {
            let restriction = flat.edge_restriction(e).expect("internal edge");
            let relations = rs.relations(restriction.tree.arity());
            if relations.is_empty() {
                continue;
            }
            let parent = flat.nodes[e].parent.expect("non-root");
            let component = [parent, e];
            let key = context_key(&t, &component, restriction.tree.arity(), &restriction.hanging);
            if !seen.insert(key) {
                continue;
            }
            for rel in relations {
                out.push(substitute_element(gens, &flat, &component, &restriction.hanging, rel));
            }
        }
    }
    out
}

fn context_key(t: &Monomial, component: &[usize], k: usize, hanging: &[crate::tree::Entry]) -> Tree<Option<GenId>> {
    let lifted = t.map_labels(&mut |&g| Some(g));
    let flat = lifted.flatten();
    flat.substitute(component, hanging, &Tree::corolla(None, k)).0
}

/// Coordinates of `elems` in the basis `columns`.
pub fn coordinates(columns: &[Monomial], elems: &[OperadElement]) -> Vec<SparseVec> {
    let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    elems
        .iter()
        .map(|e| {
            let mut row: SparseVec = e.terms().map(|(m, c)| (index[m], c.clone())).collect();
            row.sort_by_key(|x| x.0);
            row
        })
        .collect()
}

/// Rank of the ideal component.
pub fn ideal_rank(rs: &RewriteSystem, s: usize, r: usize) -> usize {
    let columns = monomials_of_weight(rs.gens(), s, r);
    let rows = coordinates(&columns, &ideal_elements(rs, s, r));
    rank(rs.gens().field(), rows)
}

/// `dim P_(s)(r)`, by exact linear algebra in the free operad.
pub fn dimension(rs: &RewriteSystem, s: usize, r: usize) -> usize {
    if s == 0 {
        return usize::from(r == 1);
    }
    monomials_of_weight(rs.gens(), s, r).len() - ideal_rank(rs, s, r)
}

/// One `(weight, arity)` cell of the PBW certificate.
#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub weight: usize,
    pub arity: usize,
    pub monomials: usize,
    pub ideal_rank: usize,
    pub dimension: usize,
    pub basis_count: usize,
    /// The candidate basis monomials are independent modulo the ideal.
    pub independent: bool,
    /// A combination of basis monomials lying in the ideal, if any.
    pub witness: Option<String>,
}

impl CellReport {
    pub fn ok(&self) -> bool {
        self.independent && self.basis_count == self.dimension
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PbwReport {
    pub name: String,
    pub max_weight: usize,
    pub max_arity: usize,
    pub quadratic_basis: Vec<String>,
    pub cells: Vec<CellReport>,
}

impl PbwReport {
    pub fn is_pbw(&self) -> bool {
        self.cells.iter().all(CellReport::ok)
    }

    pub fn first_failure(&self) -> Option<&CellReport> {
        self.cells.iter().find(|c| !c.ok())
    }

    pub fn cell(&self, s: usize, r: usize) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.weight == s && c.arity == r)
    }
}

/// Checks one cell: the candidate basis monomials must be independent
/// modulo the ideal and as many as the dimension.
pub fn check_cell(rs: &RewriteSystem, s: usize, r: usize) -> CellReport {
    let gens = rs.gens();
    let all = monomials_of_weight(gens, s, r);
    let (mut columns, basis): (Vec<Monomial>, Vec<Monomial>) =
        all.iter().cloned().partition(|m| !rs.is_basis_monomial(m));
    let first_basis = columns.len();
    columns.extend(basis.iter().cloned());
    let rows = coordinates(&columns, &ideal_elements(rs, s, r));
    // Non-basis columns come first, so any echelon row pivoting on a basis
    // column is supported on basis monomials only.
    let ech = row_echelon(gens.field(), rows);
    let witness = ech.iter().find(|row| row[0].0 >= first_basis).map(|row| {
        let x = OperadElement::from_terms(gens.field(), row.iter().map(|(c, v)| (columns[*c].clone(), v.clone())));
        x.display(gens).to_string()
    });
    let dimension = all.len() - ech.len();
    CellReport {
        weight: s,
        arity: r,
        monomials: all.len(),
        ideal_rank: ech.len(),
        dimension,
        basis_count: basis.len(),
        independent: witness.is_none(),
        witness,
    }
}

/// The PBW certificate for every cell with `1 ≤ s ≤ max_weight` and
/// `1 ≤ r ≤ max_arity`. Cells are computed in parallel; the order of the
/// report does not depend on scheduling.
pub fn check_pbw(rs: &RewriteSystem, max_weight: usize, max_arity: usize) -> PbwReport {
    let grid: Vec<(usize, usize)> = (1..=max_weight).flat_map(|s| (1..=max_arity).map(move |r| (s, r))).collect();
    let cells: Vec<CellReport> = grid.par_iter().map(|&(s, r)| check_cell(rs, s, r)).collect();
    PbwReport {
        name: rs.presentation().name.clone(),
        max_weight,
        max_arity,
        quadratic_basis: rs.quadratic_basis().iter().map(|m| display_monomial(rs.gens(), m)).collect(),
        cells,
    }
}

/// Dimension table `dim P_(s)(r)` for the same grid.
pub fn dimension_table(rs: &RewriteSystem, max_weight: usize, max_arity: usize) -> Vec<(usize, usize, usize)> {
    let grid: Vec<(usize, usize)> = (1..=max_weight).flat_map(|s| (1..=max_arity).map(move |r| (s, r))).collect();
    grid.par_iter().map(|&(s, r)| (s, r, dimension(rs, s, r))).collect()
}

struct ReducerCell {
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    echelon: Echelon,
}

/// Exact normal forms modulo the ideal, cell by cell: monomials are sorted
/// ascending in the refined order and each ideal component is row reduced
/// with pivots on the smallest monomials. Normal monomials are the non-pivot
/// columns. For a PBW presentation they are exactly the basis monomials and
/// the reduction agrees with rewriting; in general this is the reduced
/// Gröbner basis of each cell, so it also serves presentations that fail
/// the PBW test.
pub struct ExactReducer<'a> {
    rs: &'a RewriteSystem,
    cells: Mutex<HashMap<(usize, usize), Arc<ReducerCell>>>,
}

impl<'a> ExactReducer<'a> {
    pub fn new(rs: &'a RewriteSystem) -> Self {
        ExactReducer { rs, cells: Mutex::new(HashMap::new()) }
    }

    fn cell(&self, s: usize, r: usize) -> Arc<ReducerCell> {
        if let Some(c) = self.cells.lock().expect("reducer cache").get(&(s, r)) {
            return c.clone();
        }
        let order = &self.rs.presentation().order;
        let mut columns = monomials_of_weight(self.rs.gens(), s, r);
        columns.sort_by(|a, b| order.refine(a, b));
        let rows = coordinates(&columns, &ideal_elements(self.rs, s, r));
        let echelon = Echelon::new(self.rs.gens().field(), rows);
        let index = columns.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let cell = Arc::new(ReducerCell { columns, index, echelon });
        self.cells.lock().expect("reducer cache").insert((s, r), cell.clone());
        cell
    }

    pub fn normal_monomials(&self, s: usize, r: usize) -> Vec<Monomial> {
        let cell = self.cell(s, r);
        cell.columns.iter().enumerate().filter(|(i, _)| !cell.echelon.is_pivot(*i)).map(|(_, m)| m.clone()).collect()
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        let s = m.weight();
        if s < 2 {
            return true;
        }
        let cell = self.cell(s, m.arity());
        !cell.echelon.is_pivot(cell.index[m])
    }

    /// The unique normal representative of `x` modulo the ideal.
    pub fn reduce(&self, x: &OperadElement) -> OperadElement {
        let field = x.field();
        let mut groups: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        let mut out = OperadElement::zero(field);
        for (m, c) in x.terms() {
            let (s, r) = (m.weight(), m.arity());
            if s < 2 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let cell = self.cell(s, r);
            groups.entry((s, r)).or_default().push((cell.index[m], c.clone()));
        }
        for ((s, r), mut v) in groups {
            let cell = self.cell(s, r);
            v.sort_by_key(|e| e.0);
            for (i, c) in cell.echelon.reduce(&v) {
                out.add_term(cell.columns[i].clone(), c);
            }
        }
        out
    }
}
