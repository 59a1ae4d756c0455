//! Greedy baseline: repeatedly take the cheapest edge between two exposed
//! vertices. Includes a k-d tree variant for Euclidean point sets that
//! reproduces the dense result exactly.

mod kdtree;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exact::SolverReport;
use crate::geometry::Points;
use crate::graph::{DenseGraph, Matching, ObjectiveKind};
use crate::rng::mix;

pub use kdtree::{KdTree, Neighbor};

/// How edges of exactly equal weight are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Lexicographic on the normalized pair `(i, j)`, `i < j`.
    #[default]
    ByIndex,
    /// Pseudo-random but reproducible order derived from the seed.
    Randomized { seed: u64 },
}

impl TiePolicy {
    /// Secondary sort key of the edge `{i, j}`.
    #[inline]
    pub fn key(self, i: usize, j: usize) -> (u64, usize, usize) {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        match self {
            TiePolicy::ByIndex => (0, lo, hi),
            TiePolicy::Randomized { seed } => (mix(seed, &[lo as u64, hi as u64]), lo, hi),
        }
    }
}

/// Greedy perfect matching of `graph`. Bipartite graphs only consider cross
/// pairs; sentinel edges sort last by weight and are used only as needed.
pub fn greedy_matching(graph: &DenseGraph, policy: TiePolicy) -> Matching {
    let n = graph.n();
    let mut edges: Vec<(f64, (u64, usize, usize))> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            if graph.admissible(i, j, true) {
                edges.push((graph.weight(i, j), policy.key(i, j)));
            }
        }
    }
    edges.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut exposed = vec![true; n];
    let mut pairs = Vec::with_capacity(n / 2);
    for (_, (_, i, j)) in edges {
        if exposed[i] && exposed[j] {
            exposed[i] = false;
            exposed[j] = false;
            pairs.push((i, j));
            if pairs.len() == n / 2 {
                break;
            }
        }
    }
    Matching::new(n, pairs).expect("greedy pairs are disjoint")
}

/// Greedy matching evaluated under `objective`. The construction ignores the
/// objective; only the reported value depends on it.
pub fn greedy_match(graph: &DenseGraph, objective: ObjectiveKind, policy: TiePolicy) -> Result<SolverReport> {
    let started = Instant::now();
    let m = greedy_matching(graph, policy);
    SolverReport::new(graph, m, objective, graph.n() / 2, started)
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    dist: f64,
    key: (u64, usize, usize),
    a: usize,
    x: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Reversed: BinaryHeap is a max-heap and we want the smallest edge.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.key.cmp(&self.key))
            .then(other.a.cmp(&self.a))
    }
}

/// Greedy matching under Euclidean distances, identical to
/// `greedy_matching` on the induced distance graph.
///
/// Each exposed point keeps one heap entry for its nearest exposed neighbor.
/// Entries go stale only by getting too small, so the smallest valid entry
/// is always the globally cheapest exposed edge; stale ones are re-queried.
pub fn euclidean_greedy_match(points: &Points, policy: TiePolicy) -> Result<Matching> {
    let n = points.len();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let mut tree = KdTree::new(points);
    let query = |tree: &KdTree, a: usize| -> Option<Entry> {
        tree.nearest(a, |p| policy.key(a, p)).map(|nb| Entry {
            dist: nb.dist,
            key: nb.tie,
            a,
            x: nb.index,
        })
    };
    let mut heap: BinaryHeap<Entry> = (0..n).filter_map(|a| query(&tree, a)).collect();
    let mut pairs = Vec::with_capacity(n / 2);
    while let Some(e) = heap.pop() {
        if !tree.is_alive(e.a) {
            continue;
        }
        if tree.is_alive(e.x) {
            tree.remove(e.a);
            tree.remove(e.x);
            pairs.push((e.a, e.x));
            if pairs.len() == n / 2 {
                break;
            }
        } else if let Some(fresh) = query(&tree, e.a) {
            heap.push(fresh);
        }
    }
    Matching::new(n, pairs)
}

/// Dense Euclidean distance graph of a point set.
pub fn distance_graph(points: &Points, bipartite: bool) -> Result<DenseGraph> {
    DenseGraph::from_fn(points.len(), bipartite, |i, j| points.distance(i, j))
}
