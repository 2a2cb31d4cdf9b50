//! The rewrite system of a quadratic presentation and normal forms.
//!
//! In each arity the relation module is row reduced with columns sorted
//! ascending by the order, pivoting on each row's smallest monomial. The
//! pivots are the leading monomials `α_i`; each rewrites to a combination
//! of strictly larger monomials `α_j` that span the quadratic part of the
//! candidate basis.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::element::{display_monomial, Monomial, OperadElement};
use crate::free::{component_tags, monomials_of_weight, substitute_element, substitution_sign};
use crate::generators::GeneratorModule;
use crate::linalg::{Echelon, SparseVec};
use crate::order::{Comparison, MonomialOrder};
use crate::presentation::{Presentation, PresentationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("relation `{relation}` has no strict minimum: `{leading}` is not below `{other}`")]
    NoStrictMinimum { relation: String, leading: String, other: String },
    #[error("rewriting `{from}` produced `{to}`, which is not strictly larger")]
    NotIncreasing { from: String, to: String },
}

/// The weight-2 data of one arity.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticCell {
    pub arity: usize,
    /// All weight-2 monomials, ascending in the refined order.
    pub monomials: Vec<Monomial>,
    /// Leading monomials `α_i`, ascending.
    pub leading: Vec<Monomial>,
    /// Quadratic basis monomials `α_j`, ascending.
    pub basis: Vec<Monomial>,
    /// Reduced relations `α_i − Σ c_ij α_j`, one per leading monomial.
    pub relations: Vec<OperadElement>,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    presentation: Presentation,
    cells: BTreeMap<usize, QuadraticCell>,
    rewrite: HashMap<Monomial, OperadElement>,
}

impl RewriteSystem {
    /// Splits the weight-2 monomials into leading and basis monomials.
    pub fn new(p: &Presentation) -> Result<Self, RewriteError> {
        let gens = &p.gens;
        let field = gens.field();
        let orbits = p.relation_orbits()?;
        let mut cells = BTreeMap::new();
        let mut rewrite = HashMap::new();
        for n in p.quadratic_arities() {
            let mut monomials = monomials_of_weight(gens, 2, n);
            monomials.sort_by(|a, b| p.order.refine(a, b));
            let index: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let rows: Vec<SparseVec> = orbits
                .get(&n)
                .map(|elems| {
                    elems
                        .iter()
                        .map(|e| {
                            let mut r: SparseVec = e.terms().map(|(m, c)| (index[m], c.clone())).collect();
                            r.sort_by_key(|x| x.0);
                            r
                        })
                        .collect()
                })
                .unwrap_or_default();
            let ech = Echelon::new(field, rows);
            let mut leading = Vec::new();
            let mut relations = Vec::new();
            for row in ech.rows() {
                let lead = &monomials[row[0].0];
                for (col, _) in &row[1..] {
                    if p.order.compare(lead, &monomials[*col]) != Comparison::Less {
                        let rel = OperadElement::from_terms(
                            field,
                            row.iter().map(|(c, v)| (monomials[*c].clone(), v.clone())),
                        );
                        return Err(RewriteError::NoStrictMinimum {
                            relation: rel.display(gens).to_string(),
                            leading: display_monomial(gens, lead),
                            other: display_monomial(gens, &monomials[*col]),
                        });
                    }
                }
                let rhs = OperadElement::from_terms(
                    field,
                    row[1..].iter().map(|(c, v)| (monomials[*c].clone(), field.neg(v))),
                );
                let rel = OperadElement::from_terms(field, row.iter().map(|(c, v)| (monomials[*c].clone(), v.clone())));
                rewrite.insert(lead.clone(), rhs);
                leading.push(lead.clone());
                relations.push(rel);
            }
            let lead_set: HashSet<&Monomial> = leading.iter().collect();
            let basis = monomials.iter().filter(|m| !lead_set.contains(m)).cloned().collect();
            cells.insert(n, QuadraticCell { arity: n, monomials, leading, basis, relations });
        }
        Ok(RewriteSystem { presentation: p.clone(), cells, rewrite })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn gens(&self) -> &GeneratorModule {
        &self.presentation.gens
    }

    pub fn cells(&self) -> &BTreeMap<usize, QuadraticCell> {
        &self.cells
    }

    /// All quadratic basis monomials.
    pub fn quadratic_basis(&self) -> Vec<Monomial> {
        self.cells.values().flat_map(|c| c.basis.iter().cloned()).collect()
    }

    /// All leading monomials.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.cells.values().flat_map(|c| c.leading.iter().cloned()).collect()
    }

    /// The reduced relations spanning the relation module in arity `n`.
    pub fn relations(&self, n: usize) -> &[OperadElement] {
        self.cells.get(&n).map_or(&[], |c| &c.relations)
    }

    pub fn is_leading(&self, m: &Monomial) -> bool {
        self.rewrite.contains_key(m)
    }

    /// `Σ_j c_ij α_j` for a leading monomial.
    pub fn rewrite_of(&self, m: &Monomial) -> Option<&OperadElement> {
        self.rewrite.get(m)
    }

    /// Internal edges whose two-vertex restriction is a basis monomial.
    pub fn admissible_edges(&self, m: &Monomial) -> Vec<usize> {
        let flat = m.flatten();
        flat.internal_edges()
            .filter(|&e| !self.is_leading(&flat.edge_restriction(e).expect("internal edge").tree))
            .collect()
    }

    /// Membership in the candidate basis: every edge restriction is a basis
    /// monomial.
    pub fn is_basis_monomial(&self, m: &Monomial) -> bool {
        let flat = m.flatten();
        flat.internal_edges().all(|e| !self.is_leading(&flat.edge_restriction(e).expect("internal edge").tree))
    }

    /// Every edge restriction is a leading monomial (an empty admissible set).
    pub fn is_dual_basis_monomial(&self, m: &Monomial) -> bool {
        let flat = m.flatten();
        flat.internal_edges().all(|e| self.is_leading(&flat.edge_restriction(e).expect("internal edge").tree))
    }

    /// Candidate basis monomials of weight `s` and arity `r`.
    pub fn basis_monomials(&self, s: usize, r: usize) -> Vec<Monomial> {
        monomials_of_weight(self.gens(), s, r).into_iter().filter(|m| self.is_basis_monomial(m)).collect()
    }

    /// Monomials with no admissible edge.
    pub fn dual_basis_monomials(&self, s: usize, r: usize) -> Vec<Monomial> {
        monomials_of_weight(self.gens(), s, r).into_iter().filter(|m| self.is_dual_basis_monomial(m)).collect()
    }

    pub fn normal_form(&self, x: &OperadElement) -> Result<OperadElement, RewriteError> {
        Rewriter::new(self).reduce(x)
    }
}

/// Memoized normal form computation.
pub struct Rewriter<'a> {
    rs: &'a RewriteSystem,
    cache: HashMap<Monomial, OperadElement>,
    check_increasing: bool,
}

impl<'a> Rewriter<'a> {
    pub fn new(rs: &'a RewriteSystem) -> Self {
        Rewriter { rs, cache: HashMap::new(), check_increasing: false }
    }

    /// Asserts at every step that the new monomials are strictly larger.
    pub fn checking(mut self) -> Self {
        self.check_increasing = true;
        self
    }

    pub fn reduce(&mut self, x: &OperadElement) -> Result<OperadElement, RewriteError> {
        let mut out = OperadElement::zero(x.field());
        for (m, c) in x.terms() {
            let nf = self.reduce_monomial(m)?;
            out.add_scaled(c, &nf);
        }
        Ok(out)
    }

    pub fn reduce_monomial(&mut self, m: &Monomial) -> Result<OperadElement, RewriteError> {
        if let Some(v) = self.cache.get(m) {
            return Ok(v.clone());
        }
        let gens = self.rs.gens();
        let field = gens.field();
        let flat = m.flatten();
        let step = flat.internal_edges().find_map(|e| {
            let r = flat.edge_restriction(e).expect("internal edge");
            self.rs.rewrite_of(&r.tree).map(|rhs| (e, r, rhs))
        });
        let result = match step {
            None => OperadElement::monomial(field, m.clone()),
            Some((e, r, rhs)) => {
                let parent = flat.nodes[e].parent.expect("non-root");
                let component = [parent, e];
                let eps = substitution_sign(gens, m, &component_tags(flat.len(), &component));
                let replaced = substitute_element(gens, &flat, &component, &r.hanging, rhs);
                let mut acc = OperadElement::zero(field);
                for (t, c) in replaced.terms() {
                    if self.check_increasing && self.rs.presentation.order.compare(m, t) != Comparison::Less {
                        return Err(RewriteError::NotIncreasing {
                            from: display_monomial(gens, m),
                            to: display_monomial(gens, t),
                        });
                    }
                    let nf = self.reduce_monomial(t)?;
                    acc.add_scaled(&field.mul(c, &eps), &nf);
                }
                acc
            }
        };
        self.cache.insert(m.clone(), result.clone());
        Ok(result)
    }
}

/// Sorts monomials ascending in a presentation's refined order.
pub fn sort_by_order(p: &Presentation, ms: &mut [Monomial]) {
    ms.sort_by(|a, b| p.order.refine(a, b));
}

/// The restriction of `m` to its internal edge `e`.
pub fn edge_monomial(m: &Monomial, e: usize) -> Monomial {
    m.flatten().edge_restriction(e).expect("internal edge").tree
}
