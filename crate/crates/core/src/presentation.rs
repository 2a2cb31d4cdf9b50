//! Quadratic presentations: generators, an order and weight-2 relations.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::element::{display_monomial, OperadElement};
use crate::free::{act, FreeError};
use crate::generators::{Flavor, GeneratorError, GeneratorModule};
use crate::linalg::{Echelon, SparseVec};
use crate::order::{MonomialOrder, OrderSpec};
use crate::perm::Perm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error(transparent)]
    Generators(#[from] GeneratorError),
    #[error(transparent)]
    Free(#[from] FreeError),
    #[error("relation {index} is not homogeneous of weight 2")]
    NotQuadratic { index: usize },
    #[error("relation {index} mixes arities")]
    MixedArity { index: usize },
    #[error("order does not match the generators: {0}")]
    Order(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub name: String,
    pub gens: GeneratorModule,
    pub order: OrderSpec,
    pub relations: Vec<OperadElement>,
}

impl Presentation {
    /// Validates the generators and relations. Relations that vanish are
    /// dropped with a warning.
    pub fn new(
        name: &str,
        gens: GeneratorModule,
        order: OrderSpec,
        relations: Vec<OperadElement>,
    ) -> Result<Self, PresentationError> {
        gens.validate()?;
        let ranks = match &order {
            OrderSpec::PathWord(o) => o.rank.len(),
            OrderSpec::Symmetrized(o) => o.origin.len(),
        };
        if ranks != gens.len() {
            return Err(PresentationError::Order(format!("{} letters for {} generators", ranks, gens.len())));
        }
        let mut kept = Vec::with_capacity(relations.len());
        for (index, rel) in relations.into_iter().enumerate() {
            if rel.is_zero() {
                log::warn!("relation {} of `{}` is zero and was dropped", index + 1, name);
                continue;
            }
            if rel.weight() != Some(2) {
                return Err(PresentationError::NotQuadratic { index: index + 1 });
            }
            if rel.arity().is_none() {
                return Err(PresentationError::MixedArity { index: index + 1 });
            }
            kept.push(rel);
        }
        Ok(Presentation { name: name.to_string(), gens, order, relations: kept })
    }

    pub fn flavor(&self) -> Flavor {
        self.gens.flavor()
    }

    pub fn order(&self) -> &dyn MonomialOrder {
        &self.order
    }

    /// Arities in which weight-2 monomials exist.
    pub fn quadratic_arities(&self) -> Vec<usize> {
        let ar = self.gens.arities();
        let mut out: Vec<usize> = ar.iter().flat_map(|a| ar.iter().map(move |b| a + b - 1)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Spanning set of the Σ-module generated by the relations, per arity.
    pub fn relation_orbits(&self) -> Result<BTreeMap<usize, Vec<OperadElement>>, PresentationError> {
        orbits(&self.gens, &self.relations)
    }

    /// Dimension of the relation module in each arity.
    pub fn relation_dims(&self) -> Result<BTreeMap<usize, usize>, PresentationError> {
        let field = self.gens.field();
        let mut out = BTreeMap::new();
        for (n, elems) in self.relation_orbits()? {
            let (_, rows) = to_rows(&elems);
            out.insert(n, Echelon::new(field, rows).rank());
        }
        Ok(out)
    }

    pub fn describe_relation(&self, index: usize) -> String {
        self.relations[index].display(&self.gens).to_string()
    }

    pub fn describe_monomial(&self, m: &crate::element::Monomial) -> String {
        display_monomial(&self.gens, m)
    }
}

/// The elements `w.x` for all `x` in `elems` and all permutations `w`
/// (only `x` itself in the nonsymmetric flavor), grouped by arity.
pub fn orbits(
    gens: &GeneratorModule,
    elems: &[OperadElement],
) -> Result<BTreeMap<usize, Vec<OperadElement>>, PresentationError> {
    let mut out: BTreeMap<usize, Vec<OperadElement>> = BTreeMap::new();
    for x in elems {
        let Some(n) = x.arity() else { continue };
        let entry = out.entry(n).or_default();
        match gens.flavor() {
            Flavor::Nonsymmetric => entry.push(x.clone()),
            Flavor::Symmetric => {
                for w in Perm::all(n) {
                    let moved = act(gens, &w, x)?;
                    if !moved.is_zero() {
                        entry.push(moved);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Coordinates of elements against their joint support (sorted structurally).
pub fn to_rows(elems: &[OperadElement]) -> (Vec<crate::element::Monomial>, Vec<SparseVec>) {
    let mut cols: Vec<crate::element::Monomial> = elems.iter().flat_map(|e| e.support().cloned()).collect();
    cols.sort();
    cols.dedup();
    let index: BTreeMap<&crate::element::Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = elems
        .iter()
        .map(|e| {
            let mut r: SparseVec = e.terms().map(|(m, c)| (index[m], c.clone())).collect();
            r.sort_by_key(|x| x.0);
            r
        })
        .collect();
    (cols, rows)
}
