//! Maximum-cardinality matching on a filtered edge set: Hopcroft–Karp for
//! bipartite graphs, Edmonds' blossom shrinking for general graphs.
//!
//! Both accept a warm-start matching whose pairs are all admissible; the
//! result is a maximum matching of the filtered subgraph.

use std::collections::VecDeque;

use crate::graph::{DenseGraph, Matching};

const NONE: usize = usize::MAX;

/// Edge filter over a dense graph: weight window plus sentinel policy.
#[derive(Debug, Clone, Copy)]
pub struct EdgeFilter {
    pub lo: f64,
    pub hi: f64,
    pub allow_sentinel: bool,
}

impl EdgeFilter {
    pub fn window(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            allow_sentinel: false,
        }
    }

    #[inline]
    pub fn accepts(&self, graph: &DenseGraph, i: usize, j: usize) -> bool {
        if !graph.admissible(i, j, self.allow_sentinel) {
            return false;
        }
        let w = graph.weight(i, j);
        w >= self.lo && w <= self.hi
    }
}

/// Maximum-cardinality matching of the subgraph of non-sentinel edges whose
/// weight lies in the closed interval `[lo, hi]`.
pub fn max_cardinality_matching(graph: &DenseGraph, lo: f64, hi: f64) -> Matching {
    maximize(graph, EdgeFilter::window(lo, hi), None).0
}

/// Maximum matching under `filter`, warm-started from the admissible pairs of
/// `warm`. Returns the matching and the number of augmentations performed.
pub fn maximize(graph: &DenseGraph, filter: EdgeFilter, warm: Option<&Matching>) -> (Matching, usize) {
    let n = graph.n();
    let mut mate = vec![NONE; n];
    if let Some(w) = warm {
        for &(i, j) in w.pairs() {
            if filter.accepts(graph, i, j) {
                mate[i] = j;
                mate[j] = i;
            }
        }
    }
    let augmentations = if graph.is_bipartite() {
        hopcroft_karp(graph, &filter, &mut mate)
    } else {
        edmonds(graph, &filter, &mut mate)
    };
    let mates: Vec<Option<usize>> = mate.iter().map(|&m| (m != NONE).then_some(m)).collect();
    (Matching::from_mates(&mates).expect("mate array is symmetric"), augmentations)
}

fn adjacency(graph: &DenseGraph, filter: &EdgeFilter) -> Vec<Vec<usize>> {
    let n = graph.n();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if filter.accepts(graph, i, j) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

fn hopcroft_karp(graph: &DenseGraph, filter: &EdgeFilter, mate: &mut [usize]) -> usize {
    let h = graph.half();
    let adj = adjacency(graph, filter);
    let mut dist = vec![0usize; h];
    let mut augmentations = 0;
    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for l in 0..h {
            if mate[l] == NONE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let m = mate[r];
                if m == NONE {
                    found = true;
                } else if dist[m] == usize::MAX {
                    dist[m] = dist[l] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; h];
        for l in 0..h {
            if mate[l] == NONE && hk_dfs(l, &adj, mate, &mut dist, &mut it) {
                augmentations += 1;
            }
        }
    }
    augmentations
}

fn hk_dfs(l: usize, adj: &[Vec<usize>], mate: &mut [usize], dist: &mut [usize], it: &mut [usize]) -> bool {
    while it[l] < adj[l].len() {
        let r = adj[l][it[l]];
        it[l] += 1;
        let m = mate[r];
        if m == NONE || (dist[m] == dist[l] + 1 && hk_dfs(m, adj, mate, dist, it)) {
            mate[l] = r;
            mate[r] = l;
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

fn edmonds(graph: &DenseGraph, filter: &EdgeFilter, mate: &mut [usize]) -> usize {
    let n = graph.n();
    let adj = adjacency(graph, filter);
    let mut search = BlossomSearch {
        adj: &adj,
        mate,
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    let mut augmentations = 0;
    for root in 0..n {
        if search.mate[root] != NONE {
            continue;
        }
        if let Some(end) = search.find_path(root) {
            search.augment(end);
            augmentations += 1;
        }
    }
    augmentations
}

struct BlossomSearch<'a> {
    adj: &'a [Vec<usize>],
    mate: &'a mut [usize],
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl BlossomSearch<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS over alternating trees rooted at `root`; returns the free vertex
    /// ending an augmenting path, if any.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> DenseGraph {
        // Only (0,1), (1,2), (2,3) fall inside [0, 1]; the rest weigh 5.
        DenseGraph::from_fn(4, false, |i, j| if j == i + 1 { 1.0 } else { 5.0 }).unwrap()
    }

    #[test]
    fn empty_window() {
        let g = path4();
        assert!(max_cardinality_matching(&g, 2.0, 3.0).is_empty());
        assert!(max_cardinality_matching(&g, 1.0, 0.5).is_empty());
    }

    #[test]
    fn full_window_is_perfect() {
        let g = path4();
        assert!(max_cardinality_matching(&g, 0.0, f64::INFINITY).is_perfect());
    }

    #[test]
    fn path_has_cardinality_two() {
        let m = max_cardinality_matching(&path4(), 0.0, 1.0);
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
    }

    #[test]
    fn odd_cycle_with_tail_needs_blossom() {
        // Triangle 0-1-2 with pendant 2-3 and greedy warm start on (0,1)... (1,2).
        let g = DenseGraph::from_fn(6, false, |i, j| match (i, j) {
            (0, 1) | (1, 2) | (0, 2) | (2, 3) | (3, 4) | (4, 5) => 1.0,
            _ => 9.0,
        })
        .unwrap();
        let warm = Matching::new(6, [(1, 2), (3, 4)]).unwrap();
        let (m, _) = maximize(&g, EdgeFilter::window(0.0, 1.0), Some(&warm));
        assert!(m.is_perfect(), "{m:?}");
    }

    #[test]
    fn bipartite_uses_cross_edges() {
        let g = DenseGraph::from_cost_matrix(&[vec![1.0, 1.0, 9.0], vec![1.0, 9.0, 9.0], vec![9.0, 9.0, 1.0]]).unwrap();
        let m = max_cardinality_matching(&g, 0.0, 1.0);
        assert!(m.is_perfect());
        let m = max_cardinality_matching(&g, 0.0, 0.5);
        assert!(m.is_empty());
    }

    #[test]
    fn sentinels_excluded_by_default() {
        let g = DenseGraph::complete(4, false, [(0, 1, 1.0)]).unwrap();
        assert_eq!(max_cardinality_matching(&g, 0.0, f64::INFINITY).len(), 1);
        let filter = EdgeFilter {
            lo: 0.0,
            hi: f64::INFINITY,
            allow_sentinel: true,
        };
        assert!(maximize(&g, filter, None).0.is_perfect());
    }
}
