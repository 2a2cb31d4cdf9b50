//! Brute-force oracles shared by the integration tests.
//!
//! The ideal is rebuilt from scratch: weight 2 is the span of all
//! `w.R` for `w` in the symmetric group, and weight `s + 1` is spanned by
//! `w.(g ∘_i y)` and `w.(y ∘_i g)` over generators `g`, a basis of weight
//! `s` and pointed shuffles `w`. Ranks come from a plain exact elimination
//! written here, not from the library's linear algebra.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

use operad_pbw::element::{Monomial, OperadElement};
use operad_pbw::free::{act, compose, monomials_of_weight, pointed_shuffles};
use operad_pbw::generators::{Flavor, GeneratorModule};
use operad_pbw::perm::Perm;
use operad_pbw::presentation::Presentation;

pub type Row = BTreeMap<Monomial, BigRational>;

pub fn to_row(x: &OperadElement) -> Row {
    x.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
}

pub fn to_element(gens: &GeneratorModule, row: &Row) -> OperadElement {
    OperadElement::from_terms(gens.field(), row.iter().map(|(m, c)| (m.clone(), c.clone())))
}

fn axpy(v: &mut Row, c: &BigRational, row: &Row) {
    for (m, x) in row {
        let e = v.entry(m.clone()).or_insert_with(BigRational::zero);
        *e -= c * x;
        if e.is_zero() {
            v.remove(m);
        }
    }
}

/// Row echelon form keyed by leading (smallest) monomial.
#[derive(Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivot: HashMap<Monomial, usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Row) -> bool {
        while let Some((k, c)) = v.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            match self.pivot.get(&k) {
                Some(&p) => {
                    let row = &self.rows[p];
                    let f = c / &row[&k];
                    axpy(&mut v, &f, row);
                }
                None => {
                    self.pivot.insert(k, self.rows.len());
                    self.rows.push(v);
                    return true;
                }
            }
        }
        false
    }

    pub fn contains(&self, v: &Row) -> bool {
        let mut v = v.clone();
        loop {
            let next = v.iter().find(|(k, _)| self.pivot.contains_key(*k)).map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = next else { return v.is_empty() };
            let row = &self.rows[self.pivot[&k]];
            let f = c / &row[&k];
            axpy(&mut v, &f, row);
        }
    }
}

/// Bases of the ideal cells `I_(s)(r)` for `2 ≤ s ≤ max_weight`, `r ≤ max_arity`.
pub struct IdealOracle {
    pub gens: GeneratorModule,
    cells: BTreeMap<(usize, usize), Echelon>,
}

impl IdealOracle {
    pub fn new(p: &Presentation, max_weight: usize, max_arity: usize) -> Self {
        let gens = p.gens.clone();
        let mut cells: BTreeMap<(usize, usize), Echelon> = BTreeMap::new();
        for rel in &p.relations {
            let r = rel.arity().expect("homogeneous relation");
            if r > max_arity || max_weight < 2 {
                continue;
            }
            let cell = cells.entry((2, r)).or_default();
            let perms = match gens.flavor() {
                Flavor::Symmetric => Perm::all(r),
                Flavor::Nonsymmetric => vec![Perm::identity(r)],
            };
            for w in perms {
                cell.insert(to_row(&act(&gens, &w, rel).expect("action")));
            }
        }
        for s in 2..max_weight {
            let lower: Vec<((usize, usize), Vec<Row>)> =
                cells.range((s, 0)..(s + 1, 0)).map(|(k, e)| (*k, e.rows().to_vec())).collect();
            for ((_, n), basis) in lower {
                for g in gens.ids() {
                    let k = gens.arity(g);
                    let r = n + k - 1;
                    if r > max_arity {
                        continue;
                    }
                    let corolla = OperadElement::monomial(gens.field(), Monomial::corolla(g, k));
                    let mut new_rows = Vec::new();
                    for y in &basis {
                        let y = to_element(&gens, y);
                        for i in 1..=k {
                            for w in shuffles(&gens, k, n, i) {
                                new_rows.push(compose(&gens, &corolla, i, &y, &w).expect("composite"));
                            }
                        }
                        for i in 1..=n {
                            for w in shuffles(&gens, n, k, i) {
                                new_rows.push(compose(&gens, &y, i, &corolla, &w).expect("composite"));
                            }
                        }
                    }
                    let cell = cells.entry((s + 1, r)).or_default();
                    for x in new_rows {
                        cell.insert(to_row(&x));
                    }
                }
            }
        }
        IdealOracle { gens, cells }
    }

    pub fn rank(&self, s: usize, r: usize) -> usize {
        self.cells.get(&(s, r)).map_or(0, Echelon::rank)
    }

    pub fn dim(&self, s: usize, r: usize) -> usize {
        monomials_of_weight(&self.gens, s, r).len() - self.rank(s, r)
    }

    /// Whether `x` lies in the ideal, checked cell by cell.
    pub fn contains(&self, x: &OperadElement) -> bool {
        let mut by_cell: BTreeMap<(usize, usize), Row> = BTreeMap::new();
        for (m, c) in x.terms() {
            by_cell.entry((m.weight(), m.arity())).or_default().insert(m.clone(), c.clone());
        }
        by_cell.iter().all(|(key, row)| match self.cells.get(key) {
            Some(e) => e.contains(row),
            None => row.is_empty(),
        })
    }
}

fn shuffles(gens: &GeneratorModule, m: usize, n: usize, i: usize) -> Vec<Perm> {
    match gens.flavor() {
        Flavor::Symmetric => pointed_shuffles(m, n, i).to_vec(),
        Flavor::Nonsymmetric => vec![Perm::identity(m + n - 1)],
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}
