//! Koszul dual presentations and comparison of relation spans.
//!
//! The dual lives on generators `g^` of the same arities. A weight-2
//! monomial `T = w.(a ∘_i b)` pairs with its dual `T^` up to a sign `ε(T)`;
//! with the rewriting `α_i ≡ Σ_j c_ij α_j`, the orthogonal complement of the
//! relations is spanned by `ε(α_j) α_j^ + Σ_i c_ij ε(α_i) α_i^`, one element
//! per quadratic basis monomial `α_j`. The dual order is the opposite order,
//! under which the former leading monomials become the quadratic basis.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::element::{Monomial, OperadElement};
use crate::field::Scalar;
use crate::generators::{GenComb, GenId, GeneratorError, GeneratorModule};
use crate::linalg::rank;
use crate::perm::Perm;
use crate::presentation::{orbits, to_rows, Presentation, PresentationError};
use crate::rewrite::RewriteSystem;
use crate::tree::Tree;

/// Sign conventions for the dual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DualMode {
    /// The dual of the Koszul construction: generators shift up one degree.
    KDual,
    /// The classical dual of a binary operad: degrees kept, actions twisted
    /// by the sign representation. An involution on relation spans.
    Shriek,
}

impl FromStr for DualMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kdual" => Ok(DualMode::KDual),
            "shriek" => Ok(DualMode::Shriek),
            _ => Err(format!("unknown dual mode `{s}` (expected kdual or shriek)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualError {
    #[error("shriek duals need binary generators; `{name}` has arity {arity}")]
    NotBinary { name: String, arity: usize },
    #[error("the dual relations in arity {arity} are not stable under the symmetric group")]
    NotInvariant { arity: usize },
    #[error(transparent)]
    Generators(#[from] GeneratorError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// `(a, i, b, w)` with `T = w.(a ∘_i b)` for a weight-2 canonical monomial.
pub fn decompose(t: &Monomial) -> (GenId, usize, GenId, Perm) {
    let Tree::Vertex(a, ch) = t else { panic!("weight-2 monomial expected") };
    let p = ch.iter().position(|c| !c.is_leaf()).expect("weight-2 monomial expected");
    let Tree::Vertex(b, _) = &ch[p] else { unreachable!() };
    let w = Perm::new(t.leaves()).expect("well-formed");
    (*a, p + 1, *b, w)
}

/// The pairing sign `ε(T)`. In kdual mode it is the Koszul sign of pairing
/// `a ⊗ b` with `a^ ⊗ b^`, where `|a^| = |a| + 1`. In shriek mode it also
/// absorbs the sign twist of the action: `sgn(w) (−1)^{(i−1)(n_b−1) + |a|(n_b−1)}`.
pub fn pairing_sign(gens: &GeneratorModule, t: &Monomial, mode: DualMode) -> Scalar {
    let (a, i, b, w) = decompose(t);
    let da = gens.degree(a).rem_euclid(2) as usize;
    let db = gens.degree(b).rem_euclid(2) as usize;
    let odd = match mode {
        DualMode::KDual => db * (da + 1) % 2 == 1,
        DualMode::Shriek => {
            let n2 = gens.arity(b) - 1;
            (w.sign() < 0) ^ ((da * n2) % 2 == 1) ^ (((i - 1) * n2) % 2 == 1)
        }
    };
    if odd {
        gens.field().neg(&Scalar::one())
    } else {
        Scalar::one()
    }
}

/// The dual generator module: names gain a `^`, actions are transposed
/// (and negated in shriek mode).
pub fn dual_generators(gens: &GeneratorModule, mode: DualMode) -> Result<GeneratorModule, DualError> {
    let field = gens.field();
    let mut out = GeneratorModule::new(field, gens.flavor());
    for g in gens.ids() {
        let gen = gens.get(g);
        if mode == DualMode::Shriek && gen.arity != 2 {
            return Err(DualError::NotBinary { name: gen.name.clone(), arity: gen.arity });
        }
        let degree = match mode {
            DualMode::KDual => gen.degree + 1,
            DualMode::Shriek => gen.degree,
        };
        out.add_generator(&format!("{}^", gen.name), gen.arity, degree)?;
    }
    if gens.is_symmetric() {
        for g in gens.ids() {
            for k in 1..gens.arity(g) {
                // Row g of A_k: the coefficient of g in A_k(h), over all h.
                let mut comb: GenComb = Vec::new();
                for h in gens.of_arity(gens.arity(g)) {
                    for (x, c) in gens.action(h, k) {
                        if *x == g && !c.is_zero() {
                            let c = if mode == DualMode::Shriek { field.neg(c) } else { c.clone() };
                            comb.push((h, c));
                        }
                    }
                }
                out.set_action(g, k, comb)?;
            }
        }
    }
    Ok(out)
}

/// The dual presentation of a split presentation.
pub fn dual(rs: &RewriteSystem, mode: DualMode) -> Result<Presentation, DualError> {
    let p = rs.presentation();
    let gens = rs.gens();
    let field = gens.field();
    let dgens = dual_generators(gens, mode)?;
    let mut relations = Vec::new();
    let mut per_arity: BTreeMap<usize, usize> = BTreeMap::new();
    for (n, cell) in rs.cells() {
        let mut column: BTreeMap<&Monomial, OperadElement> = BTreeMap::new();
        for j in &cell.basis {
            column.insert(j, OperadElement::monomial(field, j.clone()).scale(&pairing_sign(gens, j, mode)));
        }
        for i in &cell.leading {
            let eps = pairing_sign(gens, i, mode);
            for (j, c) in rs.rewrite_of(i).expect("leading").terms() {
                column.get_mut(j).expect("basis monomial").add_term(i.clone(), field.mul(c, &eps));
            }
        }
        per_arity.insert(*n, column.len());
        relations.extend(column.into_values());
    }
    let order = p.order.opposite();
    let q = Presentation::new(&format!("{}^", p.name), dgens, order, relations)?;
    for (n, elems) in q.relation_orbits()? {
        let (_, rows) = to_rows(&elems);
        if rank(field, rows) != per_arity[&n] {
            return Err(DualError::NotInvariant { arity: n });
        }
    }
    Ok(q)
}

/// A correspondence between generator sets: generator `g` of the source
/// goes to `±h` of the target.
pub type GenMap = Vec<(GenId, bool)>;

fn map_element(dst: &GeneratorModule, x: &OperadElement, map: &GenMap) -> OperadElement {
    let field = dst.field();
    OperadElement::from_terms(
        field,
        x.terms().map(|(m, c)| {
            let negs = m.labels().into_iter().filter(|&&g| map[g as usize].1).count();
            let c = if negs % 2 == 1 { field.neg(c) } else { c.clone() };
            (m.map_labels(&mut |&g| map[g as usize].0), c)
        }),
    )
}

fn maps_actions(p: &GeneratorModule, q: &GeneratorModule, map: &GenMap) -> bool {
    if !p.is_symmetric() {
        return true;
    }
    let field = q.field();
    p.ids().all(|g| {
        (1..p.arity(g)).all(|k| {
            let (h, neg) = map[g as usize];
            let mut lhs: Vec<(GenId, Scalar)> = p
                .action(g, k)
                .iter()
                .map(|(x, c)| {
                    let (y, ny) = map[*x as usize];
                    (y, if ny != neg { field.neg(c) } else { c.clone() })
                })
                .collect();
            let mut rhs = q.action(h, k).clone();
            lhs.sort_by_key(|x| x.0);
            rhs.sort_by_key(|x| x.0);
            lhs == rhs
        })
    })
}

/// Whether the relations of `p`, carried through `map`, span the same
/// Σ-module as those of `q` in every arity.
pub fn same_relation_span(p: &Presentation, q: &Presentation, map: &GenMap) -> Result<bool, PresentationError> {
    if p.gens.field() != q.gens.field() || p.gens.flavor() != q.gens.flavor() {
        return Ok(false);
    }
    let field = q.gens.field();
    let moved: Vec<OperadElement> = p.relations.iter().map(|r| map_element(&q.gens, r, map)).collect();
    let a = orbits(&q.gens, &moved)?;
    let b = q.relation_orbits()?;
    let arities: std::collections::BTreeSet<usize> = a.keys().chain(b.keys()).copied().collect();
    for n in arities {
        let xa = a.get(&n).cloned().unwrap_or_default();
        let xb = b.get(&n).cloned().unwrap_or_default();
        let mut both = xa.clone();
        both.extend(xb.iter().cloned());
        let (_, ra) = to_rows(&xa);
        let (_, rb) = to_rows(&xb);
        let (_, rab) = to_rows(&both);
        let (ka, kb, kab) = (rank(field, ra), rank(field, rb), rank(field, rab));
        if ka != kb || ka != kab {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The identity correspondence by declaration position.
pub fn identity_map(p: &Presentation) -> GenMap {
    p.gens.ids().map(|g| (g, false)).collect()
}

/// Searches for a signed relabeling of generators (arity and degree
/// preserving, compatible with the actions) that carries the relation span
/// of `p` onto that of `q`.
pub fn find_isomorphism(p: &Presentation, q: &Presentation) -> Result<Option<GenMap>, PresentationError> {
    let (pg, qg) = (&p.gens, &q.gens);
    if pg.len() != qg.len() {
        return Ok(None);
    }
    let n = pg.len();
    let mut map: GenMap = vec![(0, false); n];
    let mut used = vec![false; n];
    fn go(
        p: &Presentation,
        q: &Presentation,
        g: usize,
        map: &mut GenMap,
        used: &mut [bool],
    ) -> Result<Option<GenMap>, PresentationError> {
        if g == map.len() {
            if maps_actions(&p.gens, &q.gens, map) && same_relation_span(p, q, map)? {
                return Ok(Some(map.clone()));
            }
            return Ok(None);
        }
        let src = p.gens.get(g as GenId);
        for h in 0..map.len() {
            let dst = q.gens.get(h as GenId);
            if used[h] || dst.arity != src.arity || dst.degree != src.degree {
                continue;
            }
            used[h] = true;
            for neg in [false, true] {
                map[g] = (h as GenId, neg);
                if let Some(found) = go(p, q, g + 1, map, used)? {
                    return Ok(Some(found));
                }
            }
            used[h] = false;
        }
        Ok(None)
    }
    go(p, q, 0, &mut map, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin;
    use crate::format::{parse, print};

    fn split(name: &str) -> RewriteSystem {
        RewriteSystem::new(&builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn decomposition_of_weight_two_monomials() {
        let p = builtin("com").unwrap();
        let m = p.gens.lookup("m").unwrap();
        let t = Tree::Vertex(m, vec![Tree::Vertex(m, vec![Tree::Leaf(1), Tree::Leaf(3)]), Tree::Leaf(2)]);
        let (a, i, b, w) = decompose(&t);
        assert_eq!((a, i, b), (m, 1, m));
        assert_eq!(w.images(), [1, 3, 2]);
    }

    #[test]
    fn com_dual_is_jacobi() {
        let d = dual(&split("com"), DualMode::Shriek).unwrap();
        let lie = builtin("lie").unwrap();
        assert!(find_isomorphism(&d, &lie).unwrap().is_some());
        assert_eq!(parse(&print(&d)).unwrap(), d);
    }

    #[test]
    fn shriek_rejects_ternary() {
        assert!(matches!(dual(&split("tot-assoc-3"), DualMode::Shriek), Err(DualError::NotBinary { .. })));
    }
}
