//! Sparse exact linear algebra: incremental row echelon forms and ranks.
//!
//! Rows are sorted `(column, value)` lists. Elimination always pivots on
//! the smallest column of a row, so a caller that sorts its columns by a
//! monomial order gets "pivot on the minimal monomial" for free.
//!
//! Ranks over `Q` use fraction-free elimination on primitive integer rows;
//! over `F_p` they use machine-word arithmetic.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{mod_inv, Field, Scalar};

pub type SparseVec = Vec<(usize, Scalar)>;

trait Arith {
    type E: Clone;
    fn normalize(&self, row: &mut Vec<(usize, Self::E)>);
    /// Eliminates the entry of `row` at index `pos` using `pivot`, whose
    /// leading column equals that entry's column.
    fn eliminate(&self, row: &[(usize, Self::E)], pos: usize, pivot: &[(usize, Self::E)]) -> Vec<(usize, Self::E)>;
}

/// `out = x*a + y*b` over sorted sparse rows, dropping zeros.
fn combine<E, F>(a: &[(usize, E)], b: &[(usize, E)], mut lin: F) -> Vec<(usize, E)>
where
    F: FnMut(Option<&E>, Option<&E>) -> Option<E>,
{
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (col, va, vb) = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, Some(&x.1), Some(&y.1))
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                (x.0, Some(&x.1), None)
            }
            (Some(x), None) => {
                i += 1;
                (x.0, Some(&x.1), None)
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, None, Some(&y.1))
            }
            (None, None) => unreachable!(),
        };
        if let Some(v) = lin(va, vb) {
            out.push((col, v));
        }
    }
    out
}

struct RationalArith;

impl Arith for RationalArith {
    type E = Scalar;

    fn normalize(&self, row: &mut Vec<(usize, Scalar)>) {
        let lead = row[0].1.clone();
        if !lead.is_one() {
            for (_, v) in row.iter_mut() {
                *v = &*v / &lead;
            }
        }
    }

    fn eliminate(&self, row: &[(usize, Scalar)], pos: usize, pivot: &[(usize, Scalar)]) -> Vec<(usize, Scalar)> {
        let f = row[pos].1.clone();
        combine(row, pivot, |a, b| {
            let v = match (a, b) {
                (Some(a), Some(b)) => a - &f * b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -(&f * b),
                (None, None) => unreachable!(),
            };
            (!v.is_zero()).then_some(v)
        })
    }
}

struct ModArith(u64);

impl Arith for ModArith {
    type E = u64;

    fn normalize(&self, row: &mut Vec<(usize, u64)>) {
        let p = self.0;
        let inv = mod_inv(row[0].1, p) as u128;
        for (_, v) in row.iter_mut() {
            *v = (*v as u128 * inv % p as u128) as u64;
        }
    }

    fn eliminate(&self, row: &[(usize, u64)], pos: usize, pivot: &[(usize, u64)]) -> Vec<(usize, u64)> {
        let p = self.0 as u128;
        let f = row[pos].1 as u128;
        combine(row, pivot, |a, b| {
            let a = a.copied().unwrap_or(0) as u128;
            let b = b.copied().unwrap_or(0) as u128;
            let v = ((a + p - f * b % p) % p) as u64;
            (v != 0).then_some(v)
        })
    }
}

/// Fraction-free elimination on integer rows kept primitive.
struct IntegerArith;

impl IntegerArith {
    fn make_primitive(row: &mut [(usize, BigInt)]) {
        let mut g = BigInt::zero();
        for (_, v) in row.iter() {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        if row[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() && !g.is_zero() {
            for (_, v) in row.iter_mut() {
                *v = &*v / &g;
            }
        }
    }
}

impl Arith for IntegerArith {
    type E = BigInt;

    fn normalize(&self, row: &mut Vec<(usize, BigInt)>) {
        Self::make_primitive(row);
    }

    fn eliminate(&self, row: &[(usize, BigInt)], pos: usize, pivot: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
        let a = &row[pos].1;
        let b = &pivot[0].1;
        let g = a.gcd(b);
        let x = b / &g;
        let y = a / &g;
        let mut out = combine(row, pivot, |ra, pb| {
            let v = match (ra, pb) {
                (Some(r), Some(q)) => &x * r - &y * q,
                (Some(r), None) => &x * r,
                (None, Some(q)) => -(&y * q),
                (None, None) => unreachable!(),
            };
            (!v.is_zero()).then_some(v)
        });
        if !out.is_empty() {
            // keep entries small; the sign of a non-pivot row is irrelevant
            let mut g = BigInt::zero();
            for (_, v) in &out {
                g = g.gcd(v);
                if g.is_one() {
                    break;
                }
            }
            if !g.is_one() {
                for (_, v) in out.iter_mut() {
                    *v = &*v / &g;
                }
            }
        }
        out
    }
}

struct Builder<A: Arith> {
    arith: A,
    rows: Vec<Vec<(usize, A::E)>>,
    pivot_of: HashMap<usize, usize>,
}

impl<A: Arith> Builder<A> {
    fn new(arith: A) -> Self {
        Builder { arith, rows: Vec::new(), pivot_of: HashMap::new() }
    }

    fn reduce(&self, mut row: Vec<(usize, A::E)>) -> Vec<(usize, A::E)> {
        let mut pos = 0;
        loop {
            while pos < row.len() && !self.pivot_of.contains_key(&row[pos].0) {
                pos += 1;
            }
            if pos == row.len() {
                return row;
            }
            let pivot = &self.rows[self.pivot_of[&row[pos].0]];
            row = self.arith.eliminate(&row, pos, pivot);
        }
    }

    fn insert(&mut self, row: Vec<(usize, A::E)>) -> Option<usize> {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return None;
        }
        self.arith.normalize(&mut row);
        let col = row[0].0;
        self.pivot_of.insert(col, self.rows.len());
        self.rows.push(row);
        Some(col)
    }
}

/// A reduced row echelon basis of a row space over a field.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    /// Computes the reduced row echelon form of the span of `rows`; pivots
    /// sit on each row's smallest column and rows are sorted by pivot.
    pub fn new(field: Field, rows: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut e = Echelon { field, rows: Vec::new(), pivot_of: HashMap::new() };
        match field {
            Field::Rational => {
                let mut b = Builder::new(RationalArith);
                for r in rows {
                    b.insert(r);
                }
                e.rows = b.rows;
            }
            Field::Prime(p) => {
                let mut b = Builder::new(ModArith(p));
                for r in rows {
                    b.insert(r.iter().map(|(c, v)| (*c, field.residue(v))).collect());
                }
                e.rows = b
                    .rows
                    .into_iter()
                    .map(|r| r.into_iter().map(|(c, v)| (c, Scalar::from_integer(BigInt::from(v)))).collect())
                    .collect();
            }
        }
        e.rows.sort_by_key(|r| r[0].0);
        e.back_substitute();
        e
    }

    fn back_substitute(&mut self) {
        let field = self.field;
        self.pivot_of = self.rows.iter().enumerate().map(|(i, r)| (r[0].0, i)).collect();
        for i in (0..self.rows.len()).rev() {
            let pcol = self.rows[i][0].0;
            let pivot = self.rows[i].clone();
            for j in 0..i {
                if let Ok(pos) = self.rows[j].binary_search_by_key(&pcol, |e| e.0) {
                    let f = self.rows[j][pos].1.clone();
                    self.rows[j] = combine(&self.rows[j], &pivot, |a, b| {
                        let v = match (a, b) {
                            (Some(a), Some(b)) => field.sub(a, &field.mul(&f, b)),
                            (Some(a), None) => a.clone(),
                            (None, Some(b)) => field.neg(&field.mul(&f, b)),
                            (None, None) => unreachable!(),
                        };
                        (!v.is_zero()).then_some(v)
                    });
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0).collect()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let field = self.field;
        let mut row = v.clone();
        let mut pos = 0;
        loop {
            while pos < row.len() && !self.pivot_of.contains_key(&row[pos].0) {
                pos += 1;
            }
            if pos == row.len() {
                return row;
            }
            let f = row[pos].1.clone();
            let pivot = &self.rows[self.pivot_of[&row[pos].0]];
            row = combine(&row, pivot, |a, b| {
                let v = match (a, b) {
                    (Some(a), Some(b)) => field.sub(a, &field.mul(&f, b)),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => field.neg(&field.mul(&f, b)),
                    (None, None) => unreachable!(),
                };
                (!v.is_zero()).then_some(v)
            });
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

fn integer_builder(rows: impl IntoIterator<Item = SparseVec>) -> Builder<IntegerArith> {
    let mut b = Builder::new(IntegerArith);
    for r in rows {
        if r.is_empty() {
            continue;
        }
        let mut l = BigInt::one();
        for (_, v) in &r {
            l = l.lcm(v.denom());
        }
        let ints = r.iter().map(|(c, v)| (*c, v.numer() * (&l / v.denom()))).collect();
        b.insert(ints);
    }
    b
}

fn modular_builder(field: Field, p: u64, rows: impl IntoIterator<Item = SparseVec>) -> Builder<ModArith> {
    let mut b = Builder::new(ModArith(p));
    for r in rows {
        b.insert(r.iter().map(|(c, v)| (*c, field.residue(v))).collect());
    }
    b
}

/// Rank of the span of `rows` over `field`.
pub fn rank(field: Field, rows: impl IntoIterator<Item = SparseVec>) -> usize {
    match field {
        Field::Rational => integer_builder(rows).rows.len(),
        Field::Prime(p) => modular_builder(field, p, rows).rows.len(),
    }
}

/// A row echelon basis of the span, not reduced, sorted by pivot column.
/// Over `Q` the rows are primitive integer vectors.
pub fn row_echelon(field: Field, rows: impl IntoIterator<Item = SparseVec>) -> Vec<SparseVec> {
    let mut out: Vec<SparseVec> = match field {
        Field::Rational => integer_builder(rows)
            .rows
            .into_iter()
            .map(|r| r.into_iter().map(|(c, v)| (c, Scalar::from_integer(v))).collect())
            .collect(),
        Field::Prime(p) => modular_builder(field, p, rows)
            .rows
            .into_iter()
            .map(|r| r.into_iter().map(|(c, v)| (c, Scalar::from_integer(BigInt::from(v)))).collect())
            .collect(),
    };
    out.sort_by_key(|r| r[0].0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_integer(n.into())
    }

    fn dense_rank_oracle(m: &[Vec<i64>]) -> usize {
        // plain Gaussian elimination on a dense rational copy
        let mut a: Vec<Vec<Scalar>> = m.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        let (rows, cols) = (a.len(), a.first().map_or(0, |r| r.len()));
        let mut r = 0;
        for c in 0..cols {
            if let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) {
                a.swap(r, p);
                for i in 0..rows {
                    if i != r && !a[i][c].is_zero() {
                        let f = &a[i][c] / &a[r][c];
                        for k in 0..cols {
                            let t = &f * &a[r][k];
                            a[i][k] -= t;
                        }
                    }
                }
                r += 1;
            }
        }
        r
    }

    fn sparse(m: &[Vec<i64>]) -> Vec<SparseVec> {
        m.iter().map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c, q(x))).collect()).collect()
    }

    #[test]
    fn ranks_agree_with_dense_elimination() {
        let m = vec![vec![1, 2, 3, 0], vec![2, 4, 6, 0], vec![0, 1, -1, 5], vec![1, 3, 2, 5]];
        let got = (
            dense_rank_oracle(&m),
            rank(Field::Rational, sparse(&m)),
            Echelon::new(Field::Rational, sparse(&m)).rank(),
            rank(Field::Prime(5), sparse(&m)),
        );
        assert_eq!(got, (2, 2, 2, 2));
    }

    #[test]
    fn rank_drops_mod_p() {
        let m = vec![vec![1, 1], vec![1, 4]];
        assert_eq!(rank(Field::Rational, sparse(&m)), 2);
        assert_eq!(rank(Field::Prime(3), sparse(&m)), 1);
    }

    #[test]
    fn echelon_is_reduced_and_pivots_on_smallest_column() {
        let m = vec![vec![0, 1, 1, 1], vec![1, 1, 0, 2]];
        let e = Echelon::new(Field::Rational, sparse(&m));
        assert_eq!(e.pivots(), vec![0, 1]);
        assert_eq!(e.rows()[0], vec![(0, q(1)), (2, q(-1)), (3, q(1))]);
        assert!(e.contains(&vec![(0, q(1)), (1, q(2)), (2, q(1)), (3, q(3))]));
        assert!(!e.contains(&vec![(2, q(1))]));
    }

    proptest::proptest! {
        #[test]
        fn sparse_rank_matches_dense(m in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 0..7)) {
            let dense = dense_rank_oracle(&m);
            proptest::prop_assert_eq!(rank(Field::Rational, sparse(&m)), dense);
            proptest::prop_assert_eq!(Echelon::new(Field::Rational, sparse(&m)).rank(), dense);
        }
    }
}
