//! Dense weighted graphs, matchings and the four matching objectives.
//!
//! A [`DenseGraph`] always stores the full symmetric `n x n` weight matrix.
//! Pairs that were never given a weight are filled with a finite sentinel
//! weight (`10 * n * max_weight`) and flagged, so that every graph admits a
//! perfect matching while all arithmetic stays finite.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Multiplier applied to `n * max_weight` for sentinel edges.
pub const SENTINEL_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGraph {
    n: usize,
    weights: Vec<f64>,
    sentinel: Vec<bool>,
    bipartite: bool,
    sentinel_value: f64,
    max_weight: f64,
}

impl DenseGraph {
    /// Builds a complete graph from a (possibly partial) edge list.
    ///
    /// Missing pairs receive the sentinel weight. For bipartite graphs the
    /// left half is `0..n/2` and every listed edge must cross the halves.
    pub fn complete<I>(n: usize, bipartite: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        if n % 2 == 1 {
            return Err(Error::OddVertexCount(n));
        }
        let half = n / 2;
        let mut given: Vec<Option<f64>> = vec![None; n * n];
        for (i, j, w) in edges {
            for index in [i, j] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { i, j, weight: w });
            }
            if bipartite && (i < half) == (j < half) {
                return Err(Error::NotCrossEdge { i, j });
            }
            let (a, b) = (i.min(j), i.max(j));
            match given[a * n + b] {
                Some(prev) if prev.to_bits() != w.to_bits() => {
                    return Err(Error::ContradictoryEdge {
                        i: a,
                        j: b,
                        first: prev,
                        second: w,
                    });
                }
                _ => given[a * n + b] = Some(w),
            }
        }

        let max_weight = given.iter().flatten().fold(0.0_f64, |m, &w| m.max(w));
        let base = if max_weight > 0.0 { max_weight } else { 1.0 };
        let sentinel_value = SENTINEL_FACTOR * n as f64 * base;

        let mut weights = vec![0.0; n * n];
        let mut sentinel = vec![false; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let (w, s) = match given[i * n + j] {
                    Some(w) => (w, false),
                    None => (sentinel_value, true),
                };
                weights[i * n + j] = w;
                weights[j * n + i] = w;
                sentinel[i * n + j] = s;
                sentinel[j * n + i] = s;
            }
        }
        Ok(Self {
            n,
            weights,
            sentinel,
            bipartite,
            sentinel_value,
            max_weight,
        })
    }

    /// Complete graph whose weight for every admissible pair `i < j` is `f(i, j)`.
    pub fn from_fn<F>(n: usize, bipartite: bool, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> f64,
    {
        let half = n / 2;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if bipartite && (i < half) == (j < half) {
                    continue;
                }
                edges.push((i, j, f(i, j)));
            }
        }
        Self::complete(n, bipartite, edges)
    }

    /// Bipartite graph from an `h x h` cost matrix: row `r` is vertex `r`,
    /// column `c` is vertex `h + c`.
    pub fn from_cost_matrix(costs: &[Vec<f64>]) -> Result<Self> {
        let h = costs.len();
        if costs.iter().any(|row| row.len() != h) {
            return Err(Error::InvalidParameter("cost matrix must be square".into()));
        }
        let edges = (0..h).flat_map(|r| (0..h).map(move |c| (r, c)));
        let edges: Vec<_> = edges.map(|(r, c)| (r, h + c, costs[r][c])).collect();
        Self::complete(2 * h, true, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartite
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    #[inline]
    pub fn is_sentinel(&self, i: usize, j: usize) -> bool {
        self.sentinel[i * self.n + j]
    }

    pub fn sentinel_value(&self) -> f64 {
        self.sentinel_value
    }

    /// Largest genuine (non-sentinel) weight, or zero for an all-sentinel graph.
    pub fn max_weight(&self) -> f64 {
        self.max_weight
    }

    pub fn has_sentinels(&self) -> bool {
        (0..self.n).any(|i| ((i + 1)..self.n).any(|j| self.is_sentinel(i, j) && self.is_cross(i, j)))
    }

    /// True when `i` and `j` lie on opposite sides (always true for general graphs).
    #[inline]
    pub fn is_cross(&self, i: usize, j: usize) -> bool {
        !self.bipartite || ((i < self.n / 2) != (j < self.n / 2))
    }

    /// Whether solvers may use edge `(i, j)`.
    #[inline]
    pub fn admissible(&self, i: usize, j: usize, allow_sentinel: bool) -> bool {
        i != j && self.is_cross(i, j) && (allow_sentinel || !self.is_sentinel(i, j))
    }

    /// All admissible edges `(i, j, w)` with `i < j`, in lexicographic order.
    pub fn edges(&self, allow_sentinel: bool) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.admissible(i, j, allow_sentinel) {
                    out.push((i, j, self.weight(i, j)));
                }
            }
        }
        out
    }

    /// Sorted distinct weights of admissible edges.
    pub fn distinct_weights(&self, allow_sentinel: bool) -> Vec<f64> {
        let mut ws: Vec<f64> = self.edges(allow_sentinel).into_iter().map(|e| e.2).collect();
        ws.sort_by(f64::total_cmp);
        ws.dedup_by(|a, b| a.to_bits() == b.to_bits());
        ws
    }

    /// Genuine edges as a list suitable for [`DenseGraph::complete`].
    pub fn genuine_edges(&self) -> Vec<(usize, usize, f64)> {
        self.edges(false)
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let edges = self
            .genuine_edges()
            .into_iter()
            .map(|(i, j, w)| (perm[i], perm[j], w));
        Self::complete(self.n, false, edges)
    }

    /// Applies `f` to every genuine weight, keeping structure and bipartition.
    pub fn map_weights<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        let edges = self.genuine_edges().into_iter().map(|(i, j, w)| (i, j, f(w)));
        Self::complete(self.n, self.bipartite, edges)
    }
}

/// A set of vertex-disjoint pairs over a graph with `n` vertices.
///
/// Pairs are kept normalized as `(lo, hi)` and sorted by `lo`, which fixes
/// the summation order used by [`evaluate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut used = vec![false; n];
        let mut out = Vec::new();
        for (i, j) in pairs {
            for index in [i, j] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if i == j {
                return Err(Error::SelfLoop(i));
            }
            for v in [i, j] {
                if used[v] {
                    return Err(Error::VertexReused(v));
                }
                used[v] = true;
            }
            out.push((i.min(j), i.max(j)));
        }
        out.sort_unstable();
        Ok(Self { n, pairs: out })
    }

    pub fn empty(n: usize) -> Self {
        Self { n, pairs: Vec::new() }
    }

    /// From a mate array where `mates[v] == Some(u)` iff `v` is paired with `u`.
    pub fn from_mates(mates: &[Option<usize>]) -> Result<Self> {
        let n = mates.len();
        let mut pairs = Vec::new();
        for (v, m) in mates.iter().enumerate() {
            if let Some(u) = *m {
                if u >= n {
                    return Err(Error::IndexOutOfRange { index: u, n });
                }
                if mates[u] != Some(v) {
                    return Err(Error::VertexReused(u));
                }
                if v < u {
                    pairs.push((v, u));
                }
            }
        }
        Ok(Self { n, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_perfect(&self) -> bool {
        2 * self.pairs.len() == self.n
    }

    pub fn mates(&self) -> Vec<Option<usize>> {
        let mut m = vec![None; self.n];
        for &(i, j) in &self.pairs {
            m[i] = Some(j);
            m[j] = Some(i);
        }
        m
    }

    /// True when any pair uses a sentinel (artificially completed) edge.
    pub fn uses_sentinel(&self, graph: &DenseGraph) -> bool {
        self.pairs
            .iter()
            .any(|&(i, j)| graph.is_sentinel(i, j) || !graph.is_cross(i, j))
    }

    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let pairs = self.pairs.iter().map(|&(i, j)| (perm[i], perm[j]));
        Self::new(self.n, pairs).expect("permutation keeps pairs disjoint")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectiveKind {
    /// Minimum total weight.
    Mcm,
    /// Minimum largest weight.
    Bm,
    /// Minimum spread `max - min`.
    Um,
    /// Minimum `sum / n - min`.
    Mdm,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 4] = [Self::Mcm, Self::Bm, Self::Um, Self::Mdm];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Mcm => "mcm",
            Self::Bm => "bm",
            Self::Um => "um",
            Self::Mdm => "mdm",
        }
    }

    /// Objective value of a perfect matching given its weights in canonical
    /// pair order. `n` is the vertex count of the graph.
    pub fn score<I: IntoIterator<Item = f64>>(self, n: usize, weights: I) -> f64 {
        let mut sum = 0.0;
        let mut max = f64::NEG_INFINITY;
        let mut min = f64::INFINITY;
        for w in weights {
            sum += w;
            max = max.max(w);
            min = min.min(w);
        }
        match self {
            Self::Mcm => sum,
            Self::Bm => max,
            Self::Um => max - min,
            Self::Mdm => sum / n as f64 - min,
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mcm" => Ok(Self::Mcm),
            "bm" => Ok(Self::Bm),
            "um" => Ok(Self::Um),
            "mdm" => Ok(Self::Mdm),
            other => Err(Error::InvalidParameter(format!("unknown objective '{other}'"))),
        }
    }
}

/// Objective value of a perfect matching on `graph`.
pub fn evaluate(graph: &DenseGraph, matching: &Matching, objective: ObjectiveKind) -> Result<f64> {
    if matching.n() != graph.n() {
        return Err(Error::SizeMismatch {
            matching_n: matching.n(),
            graph_n: graph.n(),
        });
    }
    if !matching.is_perfect() {
        return Err(Error::IncompleteMatching {
            covered: 2 * matching.len(),
            n: graph.n(),
        });
    }
    let weights = matching.pairs().iter().map(|&(i, j)| graph.weight(i, j));
    Ok(objective.score(graph.n(), weights))
}

/// Completes a sparse general graph with sentinel edges.
pub fn complete_with_sentinels<I>(n: usize, edges: I) -> Result<DenseGraph>
where
    I: IntoIterator<Item = (usize, usize, f64)>,
{
    DenseGraph::complete(n, false, edges)
}

/// Parses the text graph format: a header `n <count> [bipartite]` followed by
/// `i j w` lines. `#` starts a comment; omitted pairs are sentinel-completed.
pub fn parse_graph(text: &str) -> Result<DenseGraph> {
    let mut header: Option<(usize, bool)> = None;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let err = |message: String| Error::Parse { line, message };
        match header {
            None => {
                if tokens[0] != "n" || !(2..=3).contains(&tokens.len()) {
                    return Err(err("expected header 'n <count> [bipartite]'".into()));
                }
                let n = tokens[1]
                    .parse::<usize>()
                    .map_err(|e| err(format!("bad vertex count: {e}")))?;
                let bipartite = match tokens.get(2) {
                    None => false,
                    Some(&"bipartite") => true,
                    Some(other) => return Err(err(format!("unknown header flag '{other}'"))),
                };
                header = Some((n, bipartite));
            }
            Some(_) => {
                if tokens.len() != 3 {
                    return Err(err("expected 'i j w'".into()));
                }
                let i = tokens[0].parse::<usize>().map_err(|e| err(format!("bad index: {e}")))?;
                let j = tokens[1].parse::<usize>().map_err(|e| err(format!("bad index: {e}")))?;
                let w = tokens[2].parse::<f64>().map_err(|e| err(format!("bad weight: {e}")))?;
                if i >= j {
                    return Err(err(format!("edge ({i}, {j}) must satisfy i < j")));
                }
                edges.push((i, j, w));
            }
        }
    }
    let (n, bipartite) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing header".into(),
    })?;
    DenseGraph::complete(n, bipartite, edges)
}

/// Writes the genuine edges in the text format; sentinels are recomputed on load.
pub fn write_graph(graph: &DenseGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!("n {}", graph.n()));
    if graph.is_bipartite() {
        out.push_str(" bipartite");
    }
    out.push('\n');
    for (i, j, w) in graph.genuine_edges() {
        out.push_str(&format!("{i} {j} {w}\n"));
    }
    out
}

/// Text rendering of a matching: one `i j` pair per line.
pub fn write_matching(matching: &Matching) -> String {
    let mut out = String::new();
    for &(i, j) in matching.pairs() {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_vertex(w: f64) -> DenseGraph {
        DenseGraph::complete(2, false, [(0, 1, w)]).unwrap()
    }

    #[test]
    fn single_edge_objectives() {
        let g = two_vertex(7.0);
        let m = Matching::new(2, [(0, 1)]).unwrap();
        assert_eq!(evaluate(&g, &m, ObjectiveKind::Mcm).unwrap(), 7.0);
        assert_eq!(evaluate(&g, &m, ObjectiveKind::Bm).unwrap(), 7.0);
        assert_eq!(evaluate(&g, &m, ObjectiveKind::Um).unwrap(), 0.0);
    }

    #[test]
    fn mdm_divides_by_vertex_count() {
        let g = DenseGraph::from_fn(4, false, |i, j| match (i, j) {
            (0, 1) => 1.0,
            (2, 3) => 2.0,
            _ => 5.0,
        })
        .unwrap();
        let m = Matching::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(evaluate(&g, &m, ObjectiveKind::Mdm).unwrap(), -0.25);
    }

    #[test]
    fn incomplete_matching_rejected() {
        let g = DenseGraph::from_fn(4, false, |_, _| 1.0).unwrap();
        let m = Matching::new(4, [(0, 1)]).unwrap();
        assert!(matches!(
            evaluate(&g, &m, ObjectiveKind::Mcm),
            Err(Error::IncompleteMatching { covered: 2, n: 4 })
        ));
    }

    #[test]
    fn matching_validation() {
        assert!(matches!(Matching::new(4, [(0, 4)]), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(Matching::new(4, [(0, 1), (1, 2)]), Err(Error::VertexReused(1))));
        let m = Matching::new(4, [(3, 2), (1, 0)]).unwrap();
        assert_eq!(m.pairs(), &[(0, 1), (2, 3)]);
        assert!(m.is_perfect());
    }

    #[test]
    fn sentinel_completion() {
        let g = complete_with_sentinels(4, [(0, 1, 1.0), (2, 3, 1.0), (0, 2, 1.0), (1, 3, 1.0)]).unwrap();
        assert_eq!(g.weight(0, 3), 40.0);
        assert_eq!(g.weight(2, 1), 40.0);
        assert!(g.is_sentinel(0, 3) && g.is_sentinel(1, 2));
        assert!(!g.is_sentinel(0, 1));
        assert!(g.has_sentinels());
    }

    #[test]
    fn complete_input_has_no_sentinels() {
        let edges = vec![(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0), (1, 2, 4.0), (1, 3, 5.0), (2, 3, 6.0)];
        let g = complete_with_sentinels(4, edges.clone()).unwrap();
        assert!(!g.has_sentinels());
        assert_eq!(g.genuine_edges(), edges);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(complete_with_sentinels(3, []), Err(Error::OddVertexCount(3)));
        assert!(matches!(
            complete_with_sentinels(4, [(0, 1, 1.0), (1, 0, 2.0)]),
            Err(Error::ContradictoryEdge { .. })
        ));
        assert!(complete_with_sentinels(4, [(0, 1, 1.0), (1, 0, 1.0)]).is_ok());
        assert!(matches!(
            complete_with_sentinels(4, [(0, 1, -1.0)]),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            complete_with_sentinels(4, [(0, 1, f64::NAN)]),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            DenseGraph::complete(4, true, [(0, 1, 1.0)]),
            Err(Error::NotCrossEdge { .. })
        ));
    }

    #[test]
    fn bipartite_halves_are_sentinel() {
        let g = DenseGraph::from_cost_matrix(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(g.is_bipartite());
        assert_eq!(g.weight(0, 2), 1.0);
        assert_eq!(g.weight(0, 3), 2.0);
        assert!(g.is_sentinel(0, 1));
        assert!(!g.admissible(0, 1, true));
        assert!(g.admissible(0, 3, false));
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# demo\nn 4\n0 1 1.5\n2 3 0.25 # trailing\n\n0 2 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.weight(0, 1), 1.5);
        assert!(g.is_sentinel(1, 2));
        assert_eq!(g.sentinel_value(), 10.0 * 4.0 * 3.0);
        let again = parse_graph(&write_graph(&g)).unwrap();
        assert_eq!(again, g);

        let b = parse_graph("n 2 bipartite\n0 1 0.1\n").unwrap();
        assert!(b.is_bipartite());
        assert!(parse_graph("n 4\n1 0 2\n").is_err());
        assert!(parse_graph("0 1 2\n").is_err());
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn objective_names() {
        for o in ObjectiveKind::ALL {
            assert_eq!(o.as_str().parse::<ObjectiveKind>().unwrap(), o);
        }
        assert!("xyz".parse::<ObjectiveKind>().is_err());
    }
}
