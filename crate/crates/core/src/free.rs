//! Operations in the free operad: canonical forms, the symmetric-group
//! action, pointed shuffles and partial composition.
//!
//! Tensor factors of a monomial are ordered by the depth-first preorder of
//! its vertices; every reordering of factors carries the Koszul sign of
//! the generator degrees.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::element::{monomial_degree, Monomial, OperadElement};
use crate::field::Scalar;
use crate::generators::{Flavor, GenId, GeneratorModule};
use crate::perm::Perm;
use crate::tree::{enumerate_labeled, Entry, Flat, Tag, Tree, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreeError {
    #[error("vertex labelled `{name}` has {found} entries but the generator has arity {expected}")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("leaves must be exactly 1..n, each once")]
    BadLeaves,
    #[error("nonsymmetric monomials must read their leaves 1..n from left to right")]
    NotPlanar,
    #[error("{perm} is not a pointed shuffle for ∘_{i} of arities {m} and {n}")]
    NotAPointedShuffle { perm: Perm, m: usize, n: usize, i: usize },
    #[error("the nonsymmetric flavor admits only the identity permutation")]
    NonsymmetricAction,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Koszul sign of reordering factors: `order[k]` is the source position of
/// the factor placed `k`-th. Returns true for a minus sign.
pub fn koszul_sign_odd(degrees: &[i32], order: &[usize]) -> bool {
    let mut odd = false;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && degrees[order[a]] % 2 != 0 && degrees[order[b]] % 2 != 0 {
                odd = !odd;
            }
        }
    }
    odd
}

fn signed(gens: &GeneratorModule, odd: bool) -> Scalar {
    let one = Scalar::one();
    if odd {
        gens.field().neg(&one)
    } else {
        one
    }
}

/// Checks that every vertex label has the arity of its generator.
pub fn check_arities(gens: &GeneratorModule, t: &Monomial) -> Result<(), FreeError> {
    match t {
        Tree::Leaf(_) => Ok(()),
        Tree::Vertex(g, ch) => {
            if gens.arity(*g) != ch.len() {
                return Err(FreeError::ArityMismatch {
                    name: gens.name(*g).to_string(),
                    expected: gens.arity(*g),
                    found: ch.len(),
                });
            }
            ch.iter().try_for_each(|c| check_arities(gens, c))
        }
    }
}

/// Rewrites a monomial with arbitrary leaf placement into canonical form.
/// Moving the entries of a vertex applies the generator action, so the
/// result may have several terms.
pub fn canonicalize(gens: &GeneratorModule, t: &Monomial) -> Result<OperadElement, FreeError> {
    check_arities(gens, t)?;
    if !t.is_well_formed() {
        return Err(FreeError::BadLeaves);
    }
    if gens.flavor() == Flavor::Nonsymmetric {
        if !t.is_planar_ordered() {
            return Err(FreeError::NotPlanar);
        }
        return Ok(OperadElement::monomial(gens.field(), t.clone()));
    }
    Ok(OperadElement::from_terms(gens.field(), canonical_terms(gens, t)))
}

fn canonical_terms(gens: &GeneratorModule, t: &Monomial) -> Vec<(Monomial, Scalar)> {
    let field = gens.field();
    let (g, children) = match t {
        Tree::Leaf(i) => return vec![(Tree::Leaf(*i), Scalar::one())],
        Tree::Vertex(g, ch) => (*g, ch),
    };
    let mut items: Vec<(u32, i32, Vec<(Monomial, Scalar)>)> =
        children.iter().map(|c| (c.min_leaf(), monomial_degree(gens, c), canonical_terms(gens, c))).collect();
    // Bubble sort the entries by minimum leaf, tracking the label combination.
    let mut labels: Vec<(GenId, Scalar)> = vec![(g, Scalar::one())];
    let mut sorted = false;
    while !sorted {
        sorted = true;
        for k in 0..items.len().saturating_sub(1) {
            if items[k].0 > items[k + 1].0 {
                sorted = false;
                let odd = items[k].1 % 2 != 0 && items[k + 1].1 % 2 != 0;
                let sign = signed(gens, odd);
                let mut next: HashMap<GenId, Scalar> = HashMap::new();
                for (l, c) in &labels {
                    for (h, d) in gens.action(*l, k + 1) {
                        let e = next.entry(*h).or_insert_with(Scalar::zero);
                        *e = field.add(e, &field.mul(&field.mul(c, d), &sign));
                    }
                }
                labels = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                labels.sort_by_key(|(h, _)| *h);
                items.swap(k, k + 1);
            }
        }
    }
    let mut out = Vec::new();
    let mut partial: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), Scalar::one())];
    for (_, _, terms) in &items {
        let mut next = Vec::with_capacity(partial.len() * terms.len());
        for (prefix, c) in &partial {
            for (m, d) in terms {
                let mut p = prefix.clone();
                p.push(m.clone());
                next.push((p, field.mul(c, d)));
            }
        }
        partial = next;
    }
    for (l, c) in &labels {
        for (ch, d) in &partial {
            out.push((Tree::Vertex(*l, ch.clone()), field.mul(c, d)));
        }
    }
    out
}

/// The right action `w.x`: leaf `i` becomes `w(i)`, then canonicalize.
pub fn act(gens: &GeneratorModule, w: &Perm, x: &OperadElement) -> Result<OperadElement, FreeError> {
    if gens.flavor() == Flavor::Nonsymmetric && !w.is_identity() {
        return Err(FreeError::NonsymmetricAction);
    }
    let mut out = OperadElement::zero(gens.field());
    for (m, c) in x.terms() {
        if m.arity() != w.len() {
            return Err(TreeError::SizeMismatch { perm: w.len(), arity: m.arity() }.into());
        }
        let moved = canonicalize(gens, &m.relabel_leaves(&|l| w.apply(l)))?;
        out.add_scaled(c, &moved);
    }
    Ok(out)
}

fn shuffle_cache() -> &'static Mutex<HashMap<(usize, usize, usize), Arc<Vec<Perm>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, usize), Arc<Vec<Perm>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Whether `w` is a pointed shuffle for `∘_i` with arities `m` and `n`:
/// the entries of both factors keep their relative order and the smallest
/// entry of the inserted block is `i`.
pub fn is_pointed_shuffle(w: &Perm, m: usize, n: usize, i: usize) -> bool {
    if w.len() != m + n - 1 || i == 0 || i > m {
        return false;
    }
    let img = w.images();
    let block = &img[i - 1..i - 1 + n];
    let outer: Vec<u32> = img[..i - 1].iter().chain(&img[i - 1 + n..]).copied().collect();
    block.windows(2).all(|p| p[0] < p[1])
        && block[0] as usize == i
        && outer.windows(2).all(|p| p[0] < p[1])
        && outer[..i - 1].iter().all(|&x| (x as usize) < i)
}

/// All pointed shuffles, by filtering the whole symmetric group.
pub fn pointed_shuffles(m: usize, n: usize, i: usize) -> Arc<Vec<Perm>> {
    if i == 0 || i > m || m == 0 || n == 0 {
        return Arc::new(Vec::new());
    }
    if let Some(v) = shuffle_cache().lock().expect("shuffle cache").get(&(m, n, i)) {
        return v.clone();
    }
    let found: Vec<Perm> = Perm::all(m + n - 1).into_iter().filter(|w| is_pointed_shuffle(w, m, n, i)).collect();
    let found = Arc::new(found);
    shuffle_cache().lock().expect("shuffle cache").insert((m, n, i), found.clone());
    found
}

/// `w.(a ∘_i b)` on monomials, without validating `w`. The factors of
/// `b` move past the factors of `a` that follow entry `i` in preorder.
pub fn compose_monomials(
    gens: &GeneratorModule,
    a: &Monomial,
    i: usize,
    b: &Monomial,
    w: &Perm,
) -> Result<OperadElement, FreeError> {
    let grafted = a.graft(i, b)?;
    let db = monomial_degree(gens, b);
    let mut odd = false;
    if db % 2 != 0 {
        let after = degree_after_leaf(gens, a, i as u32);
        odd = after % 2 != 0;
    }
    let moved = grafted.relabel_leaves(&|l| w.apply(l));
    let c = if gens.flavor() == Flavor::Nonsymmetric {
        if !moved.is_planar_ordered() {
            return Err(FreeError::NotPlanar);
        }
        OperadElement::monomial(gens.field(), moved)
    } else {
        canonicalize(gens, &moved)?
    };
    Ok(c.scale(&signed(gens, odd)))
}

/// Total degree of the vertices visited after leaf `i` in preorder.
fn degree_after_leaf(gens: &GeneratorModule, t: &Monomial, i: u32) -> i32 {
    fn go(gens: &GeneratorModule, t: &Monomial, i: u32, seen: &mut bool, acc: &mut i32) {
        match t {
            Tree::Leaf(l) => {
                if *l == i {
                    *seen = true;
                }
            }
            Tree::Vertex(g, ch) => {
                if *seen {
                    *acc += gens.degree(*g);
                }
                ch.iter().for_each(|c| go(gens, c, i, seen, acc));
            }
        }
    }
    let mut seen = false;
    let mut acc = 0;
    go(gens, t, i, &mut seen, &mut acc);
    acc
}

/// `w.(a ∘_i b)`, bilinear. In the symmetric flavor `w` must be a pointed
/// shuffle; in the nonsymmetric flavor it must be the identity.
pub fn compose(
    gens: &GeneratorModule,
    a: &OperadElement,
    i: usize,
    b: &OperadElement,
    w: &Perm,
) -> Result<OperadElement, FreeError> {
    let mut out = OperadElement::zero(gens.field());
    let (Some(m), Some(n)) = (a.arity(), b.arity()) else {
        return Ok(out);
    };
    match gens.flavor() {
        Flavor::Nonsymmetric if !w.is_identity() => return Err(FreeError::NonsymmetricAction),
        Flavor::Symmetric if !is_pointed_shuffle(w, m, n, i) => {
            return Err(FreeError::NotAPointedShuffle { perm: w.clone(), m, n, i })
        }
        _ => {}
    }
    let field = gens.field();
    for (x, c) in a.terms() {
        for (y, d) in b.terms() {
            let t = compose_monomials(gens, x, i, y, w)?;
            out.add_scaled(&field.mul(c, d), &t);
        }
    }
    Ok(out)
}

/// The canonical monomials with `s` vertices and `r` leaves, sorted.
pub fn monomials_of_weight(gens: &GeneratorModule, s: usize, r: usize) -> Vec<Monomial> {
    let labels = |k: usize| gens.of_arity(k);
    enumerate_labeled(r, s, &labels, gens.flavor() == Flavor::Nonsymmetric)
}

/// Sign relating a substituted monomial to the tensor `context ⊗ block`,
/// where the block factors are the vertices tagged `New`. The reference
/// order lists the context in its original preorder, then the block.
pub fn substitution_sign(gens: &GeneratorModule, tree: &Monomial, tags: &[Tag]) -> Scalar {
    if !gens.has_odd_degrees() {
        return Scalar::one();
    }
    let degrees: Vec<i32> = tree.labels().into_iter().map(|&g| gens.degree(g)).collect();
    let mut order: Vec<usize> = (0..tags.len()).collect();
    order.sort_by_key(|&k| match tags[k] {
        Tag::Old(j) => (0, j),
        Tag::New(j) => (1, j),
    });
    signed(gens, koszul_sign_odd(&degrees, &order))
}

/// `context ⊗ x` written in the monomial basis: the block of `flat`
/// spanned by `component` is replaced by each term of `x`, whose leaf `j`
/// receives `hanging[j-1]`.
pub fn substitute_element(
    gens: &GeneratorModule,
    flat: &Flat<'_, GenId>,
    component: &[usize],
    hanging: &[Entry],
    x: &OperadElement,
) -> OperadElement {
    let field = gens.field();
    let mut out = OperadElement::zero(field);
    for (rho, c) in x.terms() {
        let (t, tags) = flat.substitute(component, hanging, rho);
        let sign = substitution_sign(gens, &t, &tags);
        out.add_term(t, field.mul(c, &sign));
    }
    out
}

/// Tags of `tree` when the vertices in `component` form the block.
pub fn component_tags(len: usize, component: &[usize]) -> Vec<Tag> {
    (0..len)
        .map(|v| match component.iter().position(|&c| c == v) {
            Some(j) => Tag::New(j),
            None => Tag::Old(v),
        })
        .collect()
}

/// Binomial coefficient, used for counting checks.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1))
}
