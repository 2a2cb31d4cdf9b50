//! Finite linear combinations of monomials of the free operad.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::field::{Field, Scalar};
use crate::generators::{GenId, GeneratorModule};
use crate::tree::Tree;

/// A treewise tensor: a tree whose vertices carry generator ids.
pub type Monomial = Tree<GenId>;

/// Sum of the degrees of the vertex labels.
pub fn monomial_degree(gens: &GeneratorModule, m: &Monomial) -> i32 {
    m.labels().into_iter().map(|&g| gens.degree(g)).sum()
}

/// An element of the free operad. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperadElement {
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl OperadElement {
    pub fn zero(field: Field) -> Self {
        OperadElement { field, terms: BTreeMap::new() }
    }

    pub fn monomial(field: Field, m: Monomial) -> Self {
        let mut x = Self::zero(field);
        x.add_term(m, field.one());
        x
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut x = Self::zero(field);
        for (m, c) in terms {
            x.add_term(m, c);
        }
        x
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        let c = self.field.reduce(c);
        if c.is_zero() {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = f.add(e.get(), &c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &OperadElement) {
        for (m, d) in &other.terms {
            self.add_term(m.clone(), self.field.mul(c, d));
        }
    }

    pub fn add(&self, other: &OperadElement) -> OperadElement {
        let mut out = self.clone();
        out.add_scaled(&Scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &OperadElement) -> OperadElement {
        let mut out = self.clone();
        out.add_scaled(&self.field.neg(&Scalar::one()), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> OperadElement {
        OperadElement::from_terms(self.field, self.terms.iter().map(|(m, d)| (m.clone(), self.field.mul(c, d))))
    }

    pub fn neg(&self) -> OperadElement {
        self.scale(&self.field.neg(&Scalar::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Scalar)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Common arity of the terms, `None` when empty or mixed.
    pub fn arity(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Tree::arity);
        let first = it.next()?;
        it.all(|a| a == first).then_some(first)
    }

    /// Common weight of the terms, `None` when empty or mixed.
    pub fn weight(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Tree::weight);
        let first = it.next()?;
        it.all(|a| a == first).then_some(first)
    }

    pub fn display<'a>(&'a self, gens: &'a GeneratorModule) -> DisplayElement<'a> {
        DisplayElement { x: self, gens }
    }
}

/// Renders monomials with generator names.
pub fn display_monomial(gens: &GeneratorModule, m: &Monomial) -> String {
    m.map_labels(&mut |&g| gens.name(g).to_string()).to_string()
}

pub struct DisplayElement<'a> {
    x: &'a OperadElement,
    gens: &'a GeneratorModule,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_zero() {
            return write!(f, "0");
        }
        let field = self.x.field;
        for (i, (m, c)) in self.x.terms().enumerate() {
            let neg = field.is_negative_repr(c);
            let abs = if neg { field.neg(c) } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{}*", field.render(&abs))?;
            }
            write!(f, "{}", display_monomial(self.gens, m))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Flavor;

    #[test]
    fn cancellation_removes_terms() {
        let f = Field::Rational;
        let m = Tree::corolla(0, 2);
        let mut x = OperadElement::monomial(f, m.clone());
        x.add_term(m.clone(), f.from_i64(-1));
        assert!(x.is_zero());
        let y = OperadElement::from_terms(f, [(m.clone(), f.from_i64(3))]);
        assert_eq!(y.sub(&y), OperadElement::zero(f));
        assert_eq!(y.arity(), Some(2));
        assert_eq!(y.weight(), Some(1));
    }

    #[test]
    fn renders_signed_terms() {
        let mut gens = GeneratorModule::new(Field::Prime(7), Flavor::Nonsymmetric);
        let m = gens.add_generator("m", 2, 0).unwrap();
        let f = gens.field();
        let left = Tree::Vertex(m, vec![Tree::corolla(m, 2), Tree::Leaf(3)]);
        let right = Tree::Vertex(m, vec![Tree::Leaf(1), Tree::corolla(m, 2).relabel_leaves(&|l| l + 1)]);
        let x = OperadElement::from_terms(f, [(left, f.one()), (right, f.from_i64(-2))]);
        assert_eq!(x.display(&gens).to_string(), "-2*m(1,m(2,3)) + m(m(1,2),3)");
    }
}
