//! Reduced rooted trees with labeled leaves.
//!
//! [`Tree`] is the planar (ordered-children) representation used throughout
//! the crate. A tree is *canonical* when its leaves are exactly `1..=n` and
//! the children of every vertex are sorted by the minimum leaf they lead
//! to; every reduced abstract tree has exactly one canonical planar form.
//! [`AbstractTree`] is the vertex/edge description with arbitrary vertex
//! ids, validated against the tree axioms.
//!
//! Vertices are addressed by their depth-first preorder index. Internal
//! edges are addressed by the preorder index of their upper endpoint, which
//! gives the fixed total order on internal edges.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::perm::Perm;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree<L> {
    Leaf(u32),
    Vertex(L, Vec<Tree<L>>),
}

/// An unlabeled planar tree.
pub type Shape = Tree<()>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("entry index {index} out of range for a tree of arity {arity}")]
    EntryOutOfRange { index: usize, arity: usize },
    #[error("permutation of size {perm} applied to a tree of arity {arity}")]
    SizeMismatch { perm: usize, arity: usize },
    #[error("edge {0} is not an internal edge")]
    NotInternal(usize),
    #[error("invalid tree: {0}")]
    Invalid(String),
}

impl<L> Tree<L> {
    pub fn corolla(label: L, n: usize) -> Self {
        Tree::Vertex(label, (1..=n as u32).map(Tree::Leaf).collect())
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Vertex(_, ch) => ch.iter().map(Tree::arity).sum(),
        }
    }

    /// Number of vertices.
    pub fn weight(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Vertex(_, ch) => 1 + ch.iter().map(Tree::weight).sum::<usize>(),
        }
    }

    pub fn min_leaf(&self) -> u32 {
        match self {
            Tree::Leaf(i) => *i,
            Tree::Vertex(_, ch) => ch.iter().map(Tree::min_leaf).min().unwrap_or(u32::MAX),
        }
    }

    /// Leaf labels in left-to-right order.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<u32>) {
        match self {
            Tree::Leaf(i) => out.push(*i),
            Tree::Vertex(_, ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Vertex labels in preorder.
    pub fn labels(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels<'a>(&'a self, out: &mut Vec<&'a L>) {
        if let Tree::Vertex(l, ch) = self {
            out.push(l);
            ch.iter().for_each(|c| c.collect_labels(out));
        }
    }

    pub fn root_label(&self) -> Option<&L> {
        match self {
            Tree::Leaf(_) => None,
            Tree::Vertex(l, _) => Some(l),
        }
    }

    pub fn map_labels<M>(&self, f: &mut impl FnMut(&L) -> M) -> Tree<M> {
        match self {
            Tree::Leaf(i) => Tree::Leaf(*i),
            Tree::Vertex(l, ch) => {
                let m = f(l);
                Tree::Vertex(m, ch.iter().map(|c| c.map_labels(f)).collect())
            }
        }
    }

    pub fn shape(&self) -> Shape {
        self.map_labels(&mut |_| ())
    }

    /// The vertex arities in preorder.
    pub fn vertex_arities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn go<L>(t: &Tree<L>, out: &mut Vec<usize>) {
            if let Tree::Vertex(_, ch) = t {
                out.push(ch.len());
                ch.iter().for_each(|c| go(c, out));
            }
        }
        go(self, &mut out);
        out
    }

    /// True when leaves are exactly `1..=n` and every vertex has at least
    /// one entry.
    pub fn is_well_formed(&self) -> bool {
        let mut leaves = self.leaves();
        leaves.sort_unstable();
        leaves.iter().enumerate().all(|(i, &l)| l as usize == i + 1) && self.is_reduced()
    }

    fn is_reduced(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Vertex(_, ch) => !ch.is_empty() && ch.iter().all(Tree::is_reduced),
        }
    }

    fn children_sorted(&self) -> bool {
        match self {
            Tree::Leaf(_) => true,
            Tree::Vertex(_, ch) => {
                ch.windows(2).all(|w| w[0].min_leaf() < w[1].min_leaf()) && ch.iter().all(Tree::children_sorted)
            }
        }
    }

    /// Canonical planar form: well formed, children ordered by minimum leaf.
    pub fn is_canonical(&self) -> bool {
        self.is_well_formed() && self.children_sorted()
    }

    /// Planar with the natural numbering: leaves read `1, 2, …, n`.
    pub fn is_planar_ordered(&self) -> bool {
        self.is_reduced() && self.leaves().iter().enumerate().all(|(i, &l)| l as usize == i + 1)
    }
}

impl<L: Clone> Tree<L> {
    pub fn relabel_leaves(&self, f: &impl Fn(u32) -> u32) -> Tree<L> {
        match self {
            Tree::Leaf(i) => Tree::Leaf(f(*i)),
            Tree::Vertex(l, ch) => Tree::Vertex(l.clone(), ch.iter().map(|c| c.relabel_leaves(f)).collect()),
        }
    }

    /// Replaces each leaf `i` by `subs(i)`.
    pub fn substitute_leaves(&self, subs: &mut impl FnMut(u32) -> Tree<L>) -> Tree<L> {
        match self {
            Tree::Leaf(i) => subs(*i),
            Tree::Vertex(l, ch) => Tree::Vertex(l.clone(), ch.iter().map(|c| c.substitute_leaves(subs)).collect()),
        }
    }

    /// Grafts the root of `other` onto entry `i` of `self`, with the
    /// operadic relabeling of leaves: `1..i-1` fixed, the leaves of `other`
    /// become `i..i+n-1`, the remaining leaves of `self` shift by `n-1`.
    /// No reordering of children is performed.
    pub fn graft(&self, i: usize, other: &Tree<L>) -> Result<Tree<L>, TreeError> {
        let m = self.arity();
        if i == 0 || i > m {
            return Err(TreeError::EntryOutOfRange { index: i, arity: m });
        }
        let n = other.arity() as u32;
        let i = i as u32;
        let shifted = other.relabel_leaves(&|l| l + i - 1);
        Ok(self.substitute_leaves(&mut |l| {
            if l < i {
                Tree::Leaf(l)
            } else if l == i {
                shifted.clone()
            } else {
                Tree::Leaf(l + n - 1)
            }
        }))
    }

    pub fn flatten(&self) -> Flat<'_, L> {
        let mut nodes = Vec::new();
        fn go<'a, L>(t: &'a Tree<L>, parent: Option<usize>, nodes: &mut Vec<FlatNode<'a, L>>) -> Entry {
            match t {
                Tree::Leaf(i) => Entry::Leaf(*i),
                Tree::Vertex(l, ch) => {
                    let id = nodes.len();
                    nodes.push(FlatNode { label: l, parent, entries: Vec::new(), min_leaf: t.min_leaf(), subtree: t });
                    let entries = ch.iter().map(|c| go(c, Some(id), nodes)).collect();
                    nodes[id].entries = entries;
                    Entry::Vertex(id)
                }
            }
        }
        go(self, None, &mut nodes);
        Flat { nodes, root: self }
    }
}

impl Shape {
    /// Sorts children by minimum leaf everywhere.
    pub fn sorted(&self) -> Shape {
        match self {
            Tree::Leaf(i) => Tree::Leaf(*i),
            Tree::Vertex(_, ch) => {
                let mut ch: Vec<Shape> = ch.iter().map(Shape::sorted).collect();
                ch.sort_by_key(Tree::min_leaf);
                Tree::Vertex((), ch)
            }
        }
    }
}

/// A child slot of a vertex in a flattened tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Leaf(u32),
    Vertex(usize),
}

#[derive(Debug)]
pub struct FlatNode<'a, L> {
    pub label: &'a L,
    pub parent: Option<usize>,
    pub entries: Vec<Entry>,
    pub min_leaf: u32,
    pub subtree: &'a Tree<L>,
}

/// Preorder-indexed view of a tree.
#[derive(Debug)]
pub struct Flat<'a, L> {
    pub nodes: Vec<FlatNode<'a, L>>,
    root: &'a Tree<L>,
}

/// Origin of a vertex after a substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    /// Preorder index in the original tree.
    Old(usize),
    /// Preorder index in the inserted tree.
    New(usize),
}

/// The tensor restricted to a connected set of vertices, with the entries
/// hanging off it listed in order of their minimum leaf (entry `j` of the
/// restriction is `hanging[j-1]`).
#[derive(Clone, Debug)]
pub struct Restriction<L> {
    pub tree: Tree<L>,
    pub hanging: Vec<Entry>,
}

impl<'a, L: Clone> Flat<'a, L> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Internal edges, each named by its upper vertex.
    pub fn internal_edges(&self) -> std::ops::Range<usize> {
        1..self.nodes.len().max(1)
    }

    pub fn entry_min(&self, e: Entry) -> u32 {
        match e {
            Entry::Leaf(i) => i,
            Entry::Vertex(v) => self.nodes[v].min_leaf,
        }
    }

    /// Restriction to a connected vertex set given in increasing preorder
    /// (its first element is the lowest vertex). Leaves of the restriction
    /// are named by the minimum linked leaf, then renumbered `1..k`.
    pub fn restrict(&self, component: &[usize]) -> Restriction<L> {
        let inside: BTreeSet<usize> = component.iter().copied().collect();
        let mut hanging = Vec::new();
        let raw = self.restrict_from(component[0], &inside, &mut hanging);
        hanging.sort_by_key(|&e| self.entry_min(e));
        let rank: HashMap<u32, u32> =
            hanging.iter().enumerate().map(|(j, &e)| (self.entry_min(e), j as u32 + 1)).collect();
        Restriction { tree: raw.relabel_leaves(&|l| rank[&l]), hanging }
    }

    fn restrict_from(&self, v: usize, inside: &BTreeSet<usize>, hanging: &mut Vec<Entry>) -> Tree<L> {
        let node = &self.nodes[v];
        let ch = node
            .entries
            .iter()
            .map(|&e| match e {
                Entry::Vertex(c) if inside.contains(&c) => self.restrict_from(c, inside, hanging),
                _ => {
                    hanging.push(e);
                    Tree::Leaf(self.entry_min(e))
                }
            })
            .collect();
        Tree::Vertex(node.label.clone(), ch)
    }

    /// The two-vertex restriction generated by internal edge `edge`.
    pub fn edge_restriction(&self, edge: usize) -> Result<Restriction<L>, TreeError> {
        if edge == 0 || edge >= self.nodes.len() {
            return Err(TreeError::NotInternal(edge));
        }
        let parent = self.nodes[edge].parent.expect("non-root vertex has a parent");
        Ok(self.restrict(&[parent, edge]))
    }

    /// Replaces the restriction to `component` by `replacement` (same
    /// arity), reattaching the hanging entries at its leaves. Returns the new
    /// tree and the origin of each of its vertices in preorder.
    pub fn substitute(&self, component: &[usize], hanging: &[Entry], replacement: &Tree<L>) -> (Tree<L>, Vec<Tag>) {
        let inside: BTreeSet<usize> = component.iter().copied().collect();
        let tagged = self.rebuild(0, component[0], &inside, hanging, replacement);
        let tags = tagged.labels().into_iter().map(|(_, t)| *t).collect();
        (tagged.map_labels(&mut |(l, _)| l.clone()), tags)
    }

    fn rebuild_entry(
        &self,
        e: Entry,
        root: usize,
        inside: &BTreeSet<usize>,
        hanging: &[Entry],
        replacement: &Tree<L>,
    ) -> Tree<(L, Tag)> {
        match e {
            Entry::Leaf(i) => Tree::Leaf(i),
            Entry::Vertex(v) => self.rebuild(v, root, inside, hanging, replacement),
        }
    }

    fn rebuild(
        &self,
        v: usize,
        root: usize,
        inside: &BTreeSet<usize>,
        hanging: &[Entry],
        replacement: &Tree<L>,
    ) -> Tree<(L, Tag)> {
        if v == root {
            let mut counter = 0usize;
            let tagged = replacement.map_labels(&mut |l| {
                counter += 1;
                (l.clone(), Tag::New(counter - 1))
            });
            return tagged.substitute_leaves(&mut |j| {
                self.rebuild_entry(hanging[j as usize - 1], root, inside, hanging, replacement)
            });
        }
        debug_assert!(!inside.contains(&v));
        let node = &self.nodes[v];
        Tree::Vertex(
            (node.label.clone(), Tag::Old(v)),
            node.entries.iter().map(|&e| self.rebuild_entry(e, root, inside, hanging, replacement)).collect(),
        )
    }

    pub fn tree(&self) -> &'a Tree<L> {
        self.root
    }
}

/// Restriction of `tree` to the subtree generated by internal edge `edge`
/// (named by its upper vertex in preorder).
pub fn subtree_of_edge<L: Clone>(tree: &Tree<L>, edge: usize) -> Result<Tree<L>, TreeError> {
    Ok(tree.flatten().edge_restriction(edge)?.tree)
}

/// Applies a leaf permutation and returns the canonical planar form.
pub fn apply_leaf_permutation(w: &Perm, tree: &Shape) -> Result<Shape, TreeError> {
    let n = tree.arity();
    if w.len() != n {
        return Err(TreeError::SizeMismatch { perm: w.len(), arity: n });
    }
    Ok(tree.relabel_leaves(&|l| w.apply(l)).sorted())
}

/// Set partitions of `items` into exactly `k` blocks, blocks ordered by
/// their minimum (each block is increasing).
pub(crate) fn set_partitions(items: &[u32], k: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    fn go(items: &[u32], k: usize, blocks: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        let Some((&x, rest)) = items.split_first() else {
            if blocks.len() == k {
                out.push(blocks.clone());
            }
            return;
        };
        if blocks.len() + items.len() < k {
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(x);
            go(rest, k, blocks, out);
            blocks[b].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![x]);
            go(rest, k, blocks, out);
            blocks.pop();
        }
    }
    go(items, k, &mut blocks, &mut out);
    out
}

/// Splits `items` into `k` nonempty consecutive intervals.
pub(crate) fn interval_partitions(items: &[u32], k: usize) -> Vec<Vec<Vec<u32>>> {
    let mut out = Vec::new();
    fn go(items: &[u32], k: usize, acc: &mut Vec<Vec<u32>>, out: &mut Vec<Vec<Vec<u32>>>) {
        if k == 1 {
            if !items.is_empty() {
                acc.push(items.to_vec());
                out.push(acc.clone());
                acc.pop();
            }
            return;
        }
        for cut in 1..items.len() {
            acc.push(items[..cut].to_vec());
            go(&items[cut..], k - 1, acc, out);
            acc.pop();
        }
    }
    if k > 0 {
        go(items, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Weak compositions of `total` into `parts` nonnegative summands.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Enumerates canonical labeled trees with `n` leaves and `r` vertices,
/// where a vertex with `k` entries may carry any label in `labels(k)`
/// (an empty list forbids that vertex arity). With `planar` set, the
/// leaves read `1..n` from left to right instead of being sorted by
/// minimum. Output is sorted and free of duplicates.
pub fn enumerate_labeled<L: Clone + Ord>(
    n: usize,
    r: usize,
    labels: &dyn Fn(usize) -> Vec<L>,
    planar: bool,
) -> Vec<Tree<L>> {
    let mut memo = HashMap::new();
    let mut out = enumerate_rec(n, r, labels, planar, &mut memo);
    out.sort();
    out
}

fn enumerate_rec<L: Clone + Ord>(
    n: usize,
    r: usize,
    labels: &dyn Fn(usize) -> Vec<L>,
    planar: bool,
    memo: &mut HashMap<(usize, usize), Vec<Tree<L>>>,
) -> Vec<Tree<L>> {
    if let Some(v) = memo.get(&(n, r)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if r == 0 {
        if n == 1 {
            out.push(Tree::Leaf(1));
        }
    } else {
        let items: Vec<u32> = (1..=n as u32).collect();
        for k in 1..=n {
            let labs = labels(k);
            if labs.is_empty() {
                continue;
            }
            let parts = if planar { interval_partitions(&items, k) } else { set_partitions(&items, k) };
            for blocks in parts {
                for dist in compositions(r - 1, k) {
                    if blocks.iter().zip(&dist).any(|(b, &d)| d == 0 && b.len() != 1) {
                        continue;
                    }
                    let mut options: Vec<Vec<Tree<L>>> = Vec::with_capacity(k);
                    for (b, &d) in blocks.iter().zip(&dist) {
                        let sub = enumerate_rec(b.len(), d, labels, planar, memo);
                        options.push(sub.iter().map(|t| t.relabel_leaves(&|l| b[l as usize - 1])).collect());
                    }
                    if options.iter().any(Vec::is_empty) {
                        continue;
                    }
                    let mut idx = vec![0usize; k];
                    loop {
                        let children: Vec<Tree<L>> = idx.iter().zip(&options).map(|(&i, o)| o[i].clone()).collect();
                        for l in &labs {
                            out.push(Tree::Vertex(l.clone(), children.clone()));
                        }
                        let mut pos = 0;
                        while pos < k {
                            idx[pos] += 1;
                            if idx[pos] < options[pos].len() {
                                break;
                            }
                            idx[pos] = 0;
                            pos += 1;
                        }
                        if pos == k {
                            break;
                        }
                    }
                }
            }
        }
    }
    memo.insert((n, r), out.clone());
    out
}

/// One representative per isomorphism class of reduced trees with `n`
/// leaves, `r` vertices and vertex arity at most `max_vertex_arity`.
pub fn enumerate_trees(n: usize, r: usize, max_vertex_arity: usize) -> Vec<Shape> {
    enumerate_labeled(n, r, &|k| if k <= max_vertex_arity { vec![()] } else { vec![] }, false)
}

/// Endpoint of an edge in an [`AbstractTree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Root,
    Leaf(u32),
    Vertex(u32),
}

/// A tree given by vertex ids and oriented edges `(source, target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractTree {
    pub arity: usize,
    pub edges: Vec<(Endpoint, Endpoint)>,
}

impl AbstractTree {
    /// Checks the tree axioms and reducedness.
    pub fn validate(&self) -> Result<(), TreeError> {
        let bad = |m: &str| Err(TreeError::Invalid(m.to_string()));
        let roots = self.edges.iter().filter(|e| e.1 == Endpoint::Root).count();
        if roots != 1 {
            return bad("exactly one edge must target the root");
        }
        let mut out_count: BTreeMap<Endpoint, usize> = BTreeMap::new();
        let mut vertices = BTreeSet::new();
        for &(s, t) in &self.edges {
            match s {
                Endpoint::Root => return bad("the root cannot be a source"),
                Endpoint::Leaf(i) if i == 0 || i as usize > self.arity => return bad("leaf label out of range"),
                Endpoint::Vertex(v) => {
                    vertices.insert(v);
                }
                _ => {}
            }
            match t {
                Endpoint::Leaf(_) => return bad("a leaf cannot be a target"),
                Endpoint::Vertex(v) => {
                    vertices.insert(v);
                }
                Endpoint::Root => {}
            }
            *out_count.entry(s).or_default() += 1;
        }
        for v in &vertices {
            if out_count.get(&Endpoint::Vertex(*v)) != Some(&1) {
                return bad("every vertex must be the source of exactly one edge");
            }
            if !self.edges.iter().any(|e| e.1 == Endpoint::Vertex(*v)) {
                return bad("every vertex needs at least one entry");
            }
        }
        for i in 1..=self.arity as u32 {
            if out_count.get(&Endpoint::Leaf(i)) != Some(&1) {
                return bad("every leaf must be the source of exactly one edge");
            }
        }
        let target_of: HashMap<Endpoint, Endpoint> = self.edges.iter().copied().collect();
        for v in &vertices {
            let mut cur = Endpoint::Vertex(*v);
            let mut steps = 0;
            while cur != Endpoint::Root {
                cur = target_of[&cur];
                steps += 1;
                if steps > vertices.len() + 1 {
                    return bad("vertex not connected to the root");
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.edges.iter().filter(|e| matches!(e.0, Endpoint::Vertex(_))).count()
    }

    /// The canonical planar representation.
    pub fn canonical_planar(&self) -> Result<Shape, TreeError> {
        self.validate()?;
        let mut inputs: HashMap<Endpoint, Vec<Endpoint>> = HashMap::new();
        for &(s, t) in &self.edges {
            inputs.entry(t).or_default().push(s);
        }
        fn build(e: Endpoint, inputs: &HashMap<Endpoint, Vec<Endpoint>>) -> Shape {
            match e {
                Endpoint::Leaf(i) => Tree::Leaf(i),
                _ => {
                    let mut ch: Vec<Shape> = inputs[&e].iter().map(|&c| build(c, inputs)).collect();
                    ch.sort_by_key(Tree::min_leaf);
                    Tree::Vertex((), ch)
                }
            }
        }
        let top = inputs[&Endpoint::Root][0];
        Ok(build(top, &inputs))
    }

    /// Abstract tree of a planar tree, vertex ids assigned in preorder from 1.
    pub fn from_planar<L>(tree: &Tree<L>) -> AbstractTree {
        let mut edges = Vec::new();
        let mut next = 1u32;
        fn go<L>(t: &Tree<L>, target: Endpoint, next: &mut u32, edges: &mut Vec<(Endpoint, Endpoint)>) {
            match t {
                Tree::Leaf(i) => edges.push((Endpoint::Leaf(*i), target)),
                Tree::Vertex(_, ch) => {
                    let id = Endpoint::Vertex(*next);
                    *next += 1;
                    edges.push((id, target));
                    ch.iter().for_each(|c| go(c, id, next, edges));
                }
            }
        }
        go(tree, Endpoint::Root, &mut next, &mut edges);
        AbstractTree { arity: tree.arity(), edges }
    }

    pub fn graft(&self, i: usize, other: &AbstractTree) -> Result<AbstractTree, TreeError> {
        let a = self.canonical_planar()?;
        let b = other.canonical_planar()?;
        Ok(AbstractTree::from_planar(&a.graft(i, &b)?.sorted()))
    }

    pub fn apply_leaf_permutation(&self, w: &Perm) -> Result<AbstractTree, TreeError> {
        if w.len() != self.arity {
            return Err(TreeError::SizeMismatch { perm: w.len(), arity: self.arity });
        }
        let map = |e: Endpoint| match e {
            Endpoint::Leaf(i) => Endpoint::Leaf(w.apply(i)),
            other => other,
        };
        Ok(AbstractTree { arity: self.arity, edges: self.edges.iter().map(|&(s, t)| (map(s), t)).collect() })
    }
}

impl<L: fmt::Display> fmt::Display for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(i) => write!(f, "{i}"),
            Tree::Vertex(l, ch) => {
                write!(f, "{l}(")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(ch: Vec<Shape>) -> Shape {
        Tree::Vertex((), ch)
    }
    fn l(i: u32) -> Shape {
        Tree::Leaf(i)
    }

    #[test]
    fn figure_one_composition() {
        // sigma: v1'(1, v2'(2,3)); tau: v1(v2(1,4), v3(2,3))
        let sigma = v(vec![l(1), v(vec![l(2), l(3)])]);
        let tau = v(vec![v(vec![l(1), l(4)]), v(vec![l(2), l(3)])]);
        let comp = sigma.graft(1, &tau).unwrap();
        assert_eq!(comp.weight(), 5);
        assert_eq!(comp.arity(), 6);
        let expected = v(vec![v(vec![v(vec![l(1), l(4)]), v(vec![l(2), l(3)])]), v(vec![l(5), l(6)])]);
        assert_eq!(comp, expected);
        assert!(comp.is_canonical());
    }

    #[test]
    fn graft_onto_unary_corolla_and_binary_example() {
        let tau = v(vec![v(vec![l(1), l(2)]), l(3)]);
        let unary = Shape::corolla((), 1);
        let g = unary.graft(1, &tau).unwrap();
        assert_eq!(g.weight(), tau.weight() + 1);
        let g = Shape::corolla((), 3).graft(2, &Shape::corolla((), 2)).unwrap();
        assert_eq!(g, v(vec![l(1), v(vec![l(2), l(3)]), l(4)]));
        assert!(matches!(
            Shape::corolla((), 2).graft(3, &unary),
            Err(TreeError::EntryOutOfRange { index: 3, arity: 2 })
        ));
    }

    #[test]
    fn binary_tree_counts() {
        assert_eq!(enumerate_trees(3, 2, 2).len(), 3);
        assert_eq!(enumerate_trees(1, 0, 2), vec![l(1)]);
        assert_eq!(enumerate_trees(4, 3, 2).len(), 15);
        assert_eq!(enumerate_trees(5, 4, 2).len(), 105);
        assert!(enumerate_trees(4, 1, 3).is_empty());
        // unary vertices are allowed by the arity bound: u(b(1,2)), b(u(1),2), b(1,u(2))
        assert_eq!(enumerate_trees(2, 2, 2).len(), 3);
        assert_eq!(enumerate_trees(1, 2, 1).len(), 1);
    }

    #[test]
    fn subtree_of_edge_relabels_by_minimum() {
        // left comb with 3 vertices: v(v(v(1,2),3),4); top edge is vertex 2
        let comb = v(vec![v(vec![v(vec![l(1), l(2)]), l(3)]), l(4)]);
        let sub = subtree_of_edge(&comb, 2).unwrap();
        assert_eq!(sub, v(vec![v(vec![l(1), l(2)]), l(3)]));
        let two = v(vec![l(1), v(vec![l(2), l(3)])]);
        assert_eq!(subtree_of_edge(&two, 1).unwrap(), two);
        assert_eq!(subtree_of_edge(&two, 0), Err(TreeError::NotInternal(0)));
    }

    #[test]
    fn figure_one_edge_restriction() {
        // in sigma∘_1 tau, the edge between v1 and v1' is vertex 1 in preorder
        let comp = v(vec![v(vec![v(vec![l(1), l(4)]), v(vec![l(2), l(3)])]), v(vec![l(5), l(6)])]);
        let sub = subtree_of_edge(&comp, 1).unwrap();
        // entries of v1 named by minima 1 and 2, v'2 by 5: renumbered 1,2,3
        assert_eq!(sub, v(vec![v(vec![l(1), l(2)]), l(3)]));
    }

    #[test]
    fn substitute_reattaches_hanging_entries() {
        let t = v(vec![v(vec![l(1), l(3)]), v(vec![l(2), l(4)])]);
        let flat = t.flatten();
        let r = flat.edge_restriction(1).unwrap();
        assert_eq!(r.tree, v(vec![v(vec![l(1), l(3)]), l(2)]));
        let repl = v(vec![l(1), v(vec![l(2), l(3)])]);
        let (out, tags) = flat.substitute(&[0, 1], &r.hanging, &repl);
        assert_eq!(out, v(vec![l(1), v(vec![v(vec![l(2), l(4)]), l(3)])]));
        assert_eq!(tags, vec![Tag::New(0), Tag::New(1), Tag::Old(2)]);
    }

    #[test]
    fn abstract_tree_validation() {
        use Endpoint::*;
        let ok = AbstractTree {
            arity: 3,
            edges: vec![
                (Vertex(7), Root),
                (Leaf(2), Vertex(7)),
                (Vertex(9), Vertex(7)),
                (Leaf(1), Vertex(9)),
                (Leaf(3), Vertex(9)),
            ],
        };
        assert!(ok.validate().is_ok());
        assert_eq!(ok.canonical_planar().unwrap(), v(vec![v(vec![l(1), l(3)]), l(2)]));
        let no_entry =
            AbstractTree { arity: 1, edges: vec![(Vertex(1), Root), (Vertex(2), Vertex(1)), (Leaf(1), Vertex(1))] };
        assert!(no_entry.validate().is_err());
        let two_roots = AbstractTree { arity: 1, edges: vec![(Vertex(1), Root), (Leaf(1), Root)] };
        assert!(two_roots.validate().is_err());
    }

    #[test]
    fn leaf_permutation_round_trip() {
        let t = v(vec![v(vec![l(1), l(3)]), l(2)]);
        let w = Perm::new(vec![2, 3, 1]).unwrap();
        let moved = apply_leaf_permutation(&w, &t).unwrap();
        assert_eq!(moved, v(vec![v(vec![l(1), l(2)]), l(3)]));
        assert_eq!(apply_leaf_permutation(&w.inverse(), &moved).unwrap(), t);
        assert!(apply_leaf_permutation(&Perm::identity(2), &t).is_err());
    }
}
