//! Monomial orders built from path words.
//!
//! Each monomial of arity `n` yields `n` words: word `i` lists the labels on
//! the path from the root to leaf `i`, bottom to top. Words are compared by
//! length first, then letter by letter; sequences of words are compared
//! position by position. Distinct monomials can share a word sequence (for
//! instance `m(m(1,2),m(3,4))` and `m(m(1,3),m(2,4))`), so the order is
//! partial and such pairs are reported as [`Comparison::Incomparable`].

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element::Monomial;
use crate::free::{compose_monomials, monomials_of_weight, pointed_shuffles};
use crate::generators::{Flavor, GenId, GeneratorModule};
use crate::perm::Perm;
use crate::tree::Tree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl Comparison {
    pub fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            c => c,
        }
    }

    pub fn is_le(self) -> bool {
        matches!(self, Comparison::Less | Comparison::Equal)
    }
}

/// A partial order on canonical monomials of equal arity.
pub trait MonomialOrder: Send + Sync {
    fn compare(&self, a: &Monomial, b: &Monomial) -> Comparison;

    /// A total order extending [`MonomialOrder::compare`].
    fn refine(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.compare(a, b) {
            Comparison::Less => Ordering::Less,
            Comparison::Greater => Ordering::Greater,
            Comparison::Equal => Ordering::Equal,
            Comparison::Incomparable => a.cmp(b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WordOrder {
    /// Shorter words are smaller.
    Lex,
    /// Longer words are smaller.
    RevLenLex,
}

impl WordOrder {
    pub fn flip(self) -> Self {
        match self {
            WordOrder::Lex => WordOrder::RevLenLex,
            WordOrder::RevLenLex => WordOrder::Lex,
        }
    }
}

impl fmt::Display for WordOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordOrder::Lex => "lex",
            WordOrder::RevLenLex => "revlenlex",
        })
    }
}

/// The path-word sequence of a monomial.
pub fn path_words(m: &Monomial) -> Vec<Vec<GenId>> {
    let mut words = vec![Vec::new(); m.arity()];
    fn go(t: &Monomial, prefix: &mut Vec<GenId>, words: &mut [Vec<GenId>]) {
        match t {
            Tree::Leaf(i) => words[*i as usize - 1] = prefix.clone(),
            Tree::Vertex(g, ch) => {
                prefix.push(*g);
                ch.iter().for_each(|c| go(c, prefix, words));
                prefix.pop();
            }
        }
    }
    go(m, &mut Vec::new(), &mut words);
    words
}

/// Letter ranks give a total order on all generators: `rank[g]` is the
/// position of `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWordOrder {
    pub kind: WordOrder,
    pub rank: Vec<u32>,
}

impl PathWordOrder {
    /// Letters ordered by arity, then by declaration order.
    pub fn default_for(gens: &GeneratorModule, kind: WordOrder) -> Self {
        let mut ids: Vec<GenId> = gens.ids().collect();
        ids.sort_by_key(|&g| (gens.arity(g), g));
        Self::from_sequence(kind, &ids)
    }

    /// Letters ranked by their position in `seq`, which lists every
    /// generator once.
    pub fn from_sequence(kind: WordOrder, seq: &[GenId]) -> Self {
        let mut rank = vec![0u32; seq.len()];
        for (pos, &g) in seq.iter().enumerate() {
            rank[g as usize] = pos as u32;
        }
        PathWordOrder { kind, rank }
    }

    /// Generators from smallest to largest letter.
    pub fn sequence(&self) -> Vec<GenId> {
        let mut ids: Vec<GenId> = (0..self.rank.len() as GenId).collect();
        ids.sort_by_key(|&g| self.rank[g as usize]);
        ids
    }

    /// The opposite order: every comparison reversed.
    pub fn opposite(&self) -> Self {
        let n = self.rank.len() as u32;
        PathWordOrder { kind: self.kind.flip(), rank: self.rank.iter().map(|r| n - 1 - r).collect() }
    }

    pub fn compare_words(&self, a: &[GenId], b: &[GenId]) -> Ordering {
        let by_len = a.len().cmp(&b.len());
        let by_len = match self.kind {
            WordOrder::Lex => by_len,
            WordOrder::RevLenLex => by_len.reverse(),
        };
        by_len.then_with(|| {
            let ka = a.iter().map(|&g| self.rank[g as usize]);
            let kb = b.iter().map(|&g| self.rank[g as usize]);
            ka.cmp(kb)
        })
    }

    pub fn compare_sequences(&self, a: &[Vec<GenId>], b: &[Vec<GenId>]) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            match self.compare_words(x, y) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }
}

impl MonomialOrder for PathWordOrder {
    fn compare(&self, a: &Monomial, b: &Monomial) -> Comparison {
        if a == b {
            return Comparison::Equal;
        }
        match self.compare_sequences(&path_words(a), &path_words(b)) {
            Ordering::Equal => Comparison::Incomparable,
            o => Comparison::from_ordering(o),
        }
    }

    fn refine(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.compare_sequences(&path_words(a), &path_words(b)).then_with(|| a.cmp(b))
    }
}

/// The order on a symmetrized operad: generator `g_σ` stands for
/// `g(x_σ(1), …, x_σ(n))`. Two monomials are compared only when they
/// unfold to the same leaf reading, through the planar order on the
/// unfolded trees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetrizedOrder {
    pub planar: PathWordOrder,
    /// For each generator of the symmetric module: its planar generator and σ.
    pub origin: Vec<(GenId, Perm)>,
}

impl SymmetrizedOrder {
    /// The planar monomial and the leaf reading of a symmetric monomial.
    pub fn unfold(&self, m: &Monomial) -> (Monomial, Vec<u32>) {
        fn go(o: &SymmetrizedOrder, t: &Monomial) -> Monomial {
            match t {
                Tree::Leaf(i) => Tree::Leaf(*i),
                Tree::Vertex(g, ch) => {
                    let (base, sigma) = &o.origin[*g as usize];
                    let ch: Vec<Monomial> =
                        (1..=ch.len() as u32).map(|j| go(o, &ch[sigma.apply(j) as usize - 1])).collect();
                    Tree::Vertex(*base, ch)
                }
            }
        }
        let planar = go(self, m);
        let reading = planar.leaves();
        let mut pos = vec![0u32; reading.len()];
        for (k, &l) in reading.iter().enumerate() {
            pos[l as usize - 1] = k as u32 + 1;
        }
        (planar.relabel_leaves(&|l| pos[l as usize - 1]), reading)
    }
}

impl MonomialOrder for SymmetrizedOrder {
    fn compare(&self, a: &Monomial, b: &Monomial) -> Comparison {
        if a == b {
            return Comparison::Equal;
        }
        let (pa, ra) = self.unfold(a);
        let (pb, rb) = self.unfold(b);
        if ra != rb {
            return Comparison::Incomparable;
        }
        self.planar.compare(&pa, &pb)
    }

    fn refine(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (pa, ra) = self.unfold(a);
        let (pb, rb) = self.unfold(b);
        ra.cmp(&rb).then_with(|| self.planar.refine(&pa, &pb))
    }
}

/// The order attached to a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderSpec {
    PathWord(PathWordOrder),
    Symmetrized(SymmetrizedOrder),
}

impl OrderSpec {
    pub fn kind(&self) -> WordOrder {
        match self {
            OrderSpec::PathWord(o) => o.kind,
            OrderSpec::Symmetrized(o) => o.planar.kind,
        }
    }

    pub fn opposite(&self) -> OrderSpec {
        match self {
            OrderSpec::PathWord(o) => OrderSpec::PathWord(o.opposite()),
            OrderSpec::Symmetrized(o) => {
                OrderSpec::Symmetrized(SymmetrizedOrder { planar: o.planar.opposite(), origin: o.origin.clone() })
            }
        }
    }
}

impl MonomialOrder for OrderSpec {
    fn compare(&self, a: &Monomial, b: &Monomial) -> Comparison {
        match self {
            OrderSpec::PathWord(o) => o.compare(a, b),
            OrderSpec::Symmetrized(o) => o.compare(a, b),
        }
    }

    fn refine(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            OrderSpec::PathWord(o) => o.refine(a, b),
            OrderSpec::Symmetrized(o) => o.refine(a, b),
        }
    }
}

/// A failure of the compatibility axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub alpha: Monomial,
    pub alpha_prime: Monomial,
    pub beta: Monomial,
    pub beta_prime: Monomial,
    pub i: usize,
    pub shuffle: Perm,
}

/// Checks `α ≤ α′, β ≤ β′ ⇒ w.(α ∘_i β) ≤ w.(α′ ∘_i β′)` for one
/// quadruple and every pointed shuffle. Only monomial composites are
/// compared, so generators with non-monomial actions are skipped.
pub fn check_compatible(
    gens: &GeneratorModule,
    order: &dyn MonomialOrder,
    alpha: (&Monomial, &Monomial),
    beta: (&Monomial, &Monomial),
    i: usize,
) -> Vec<Violation> {
    let (m, n) = (alpha.0.arity(), beta.0.arity());
    let shuffles: Vec<Perm> = match gens.flavor() {
        Flavor::Symmetric => pointed_shuffles(m, n, i).to_vec(),
        Flavor::Nonsymmetric => vec![Perm::identity(m + n - 1)],
    };
    let mut out = Vec::new();
    for w in shuffles {
        let lhs = compose_monomials(gens, alpha.0, i, beta.0, &w);
        let rhs = compose_monomials(gens, alpha.1, i, beta.1, &w);
        let (Ok(lhs), Ok(rhs)) = (lhs, rhs) else { continue };
        if lhs.len() != 1 || rhs.len() != 1 {
            continue;
        }
        let l = lhs.support().next().expect("one term");
        let r = rhs.support().next().expect("one term");
        if !order.compare(l, r).is_le() {
            out.push(Violation {
                alpha: alpha.0.clone(),
                alpha_prime: alpha.1.clone(),
                beta: beta.0.clone(),
                beta_prime: beta.1.clone(),
                i,
                shuffle: w,
            });
        }
    }
    out
}

/// Exhaustive self-test of the compatibility axiom on all monomials with
/// at most `max_weight` vertices and `max_arity` leaves on each side.
pub fn self_test(
    gens: &GeneratorModule,
    order: &dyn MonomialOrder,
    max_weight: usize,
    max_arity: usize,
) -> Vec<Violation> {
    let mut pool: Vec<Vec<Monomial>> = vec![Vec::new(); max_arity + 1];
    for r in 1..=max_arity {
        for s in 1..=max_weight {
            pool[r].extend(monomials_of_weight(gens, s, r));
        }
    }
    let mut out = Vec::new();
    for m in 1..=max_arity {
        for n in 1..=max_arity {
            if m + n - 1 > max_arity + 1 {
                continue;
            }
            for a in &pool[m] {
                for ap in &pool[m] {
                    if !order.compare(a, ap).is_le() {
                        continue;
                    }
                    for b in &pool[n] {
                        for bp in &pool[n] {
                            if !order.compare(b, bp).is_le() {
                                continue;
                            }
                            for i in 1..=m {
                                out.extend(check_compatible(gens, order, (a, ap), (b, bp), i));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
