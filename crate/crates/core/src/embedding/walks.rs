use std::collections::{BTreeSet, VecDeque};
use std::sync::OnceLock;

use log::warn;
use rand::distributions::Distribution;
use rand_distr::WeightedAliasIndex;
use rayon::prelude::*;

use super::{EmbeddingConfig, Similarity, WalkMethod, TAG_WALK};
use crate::error::{Error, Result};
use crate::graph::DenseGraph;
use crate::rng::stream;

/// Sparse weighted graph the random walks move on. Neighbor lists are stored
/// contiguously (CSR) and ordered by ascending original weight.
#[derive(Debug)]
pub struct WalkGraph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    /// Unnormalized transition weight of each stored arc.
    weights: Vec<f64>,
    /// Neighbor lists again, sorted by vertex id for adjacency tests.
    sorted: Vec<usize>,
    first_order: Vec<WeightedAliasIndex<f64>>,
}

impl WalkGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Normalized transition probabilities, aligned with `neighbors(v)`.
    pub fn transition_probabilities(&self, v: usize) -> Vec<f64> {
        let ws = &self.weights[self.offsets[v]..self.offsets[v + 1]];
        let total: f64 = ws.iter().sum();
        ws.iter().map(|w| w / total).collect()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.sorted[self.offsets[a]..self.offsets[a + 1]].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &x in self.neighbors(v) {
                if !seen[x] {
                    seen[x] = true;
                    count += 1;
                    queue.push_back(x);
                }
            }
        }
        count == self.n
    }

    fn step_first_order(&self, v: usize, rng: &mut impl rand::Rng) -> usize {
        self.offsets[v] + self.first_order[v].sample(rng)
    }

    fn source_of(&self, arc: usize) -> usize {
        self.offsets.partition_point(|&o| o <= arc) - 1
    }
}

/// node2vec sampler: second-order alias tables, built lazily per arc and
/// shared between threads.
struct BiasedWalker<'a> {
    wg: &'a WalkGraph,
    tables: Vec<OnceLock<Option<WeightedAliasIndex<f64>>>>,
    p: f64,
    q: f64,
}

impl<'a> BiasedWalker<'a> {
    fn new(wg: &'a WalkGraph, p: f64, q: f64) -> Self {
        let tables = (0..wg.targets.len()).map(|_| OnceLock::new()).collect();
        Self { wg, tables, p, q }
    }

    /// Step to a neighbor of `v`, having arrived through arc `arc = t -> v`.
    fn step(&self, arc: usize, rng: &mut impl rand::Rng) -> usize {
        let wg = self.wg;
        let v = wg.targets[arc];
        let table = self.tables[arc].get_or_init(|| {
            let t = wg.source_of(arc);
            let biased: Vec<f64> = (wg.offsets[v]..wg.offsets[v + 1])
                .map(|k| {
                    let x = wg.targets[k];
                    let beta = if x == t {
                        1.0 / self.p
                    } else if wg.is_adjacent(t, x) {
                        1.0
                    } else {
                        1.0 / self.q
                    };
                    wg.weights[k] * beta
                })
                .collect();
            WeightedAliasIndex::new(biased).ok()
        });
        match table {
            Some(t) => wg.offsets[v] + t.sample(rng),
            None => wg.step_first_order(v, rng),
        }
    }
}

/// Keeps each vertex's `knn` lightest non-sentinel edges (union over both
/// endpoints) and converts weights to transition weights.
pub fn build_walk_graph(graph: &DenseGraph, config: &EmbeddingConfig) -> Result<WalkGraph> {
    config.validate()?;
    let n = graph.n();
    let k = config.knn.min(n - 1);
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for i in 0..n {
        let mut cand: Vec<usize> = (0..n).filter(|&j| j != i && graph.admissible(i, j, false)).collect();
        if cand.is_empty() {
            // Only artificial edges touch this vertex; walk along those.
            cand = (0..n).filter(|&j| j != i && graph.admissible(i, j, true)).collect();
        }
        cand.sort_by(|&a, &b| graph.weight(i, a).total_cmp(&graph.weight(i, b)).then(a.cmp(&b)));
        for &j in cand.iter().take(k) {
            adj[i].insert(j);
            adj[j].insert(i);
        }
    }

    let (mut sum, mut count) = (0.0, 0usize);
    for (i, set) in adj.iter().enumerate() {
        for &j in set.range(i + 1..) {
            sum += graph.weight(i, j);
            count += 1;
        }
    }
    let mean = if count > 0 && sum > 0.0 { sum / count as f64 } else { 1.0 };
    let similarity = |w: f64| match config.similarity {
        Similarity::Inverse => 1.0 / (w + 1e-12),
        Similarity::ExpDecay => (-w / mean).exp(),
        Similarity::Uniform => 1.0,
    };

    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    let mut weights = Vec::new();
    let mut sorted = Vec::new();
    let mut first_order = Vec::with_capacity(n);
    offsets.push(0);
    for (i, set) in adj.iter().enumerate() {
        let mut nb: Vec<usize> = set.iter().copied().collect();
        sorted.extend_from_slice(&nb);
        nb.sort_by(|&a, &b| graph.weight(i, a).total_cmp(&graph.weight(i, b)).then(a.cmp(&b)));
        let ws: Vec<f64> = nb.iter().map(|&j| similarity(graph.weight(i, j))).collect();
        let table = WeightedAliasIndex::new(ws.clone())
            .or_else(|_| WeightedAliasIndex::new(vec![1.0; ws.len()]))
            .map_err(|e| Error::InvalidParameter(format!("vertex {i}: {e}")))?;
        first_order.push(table);
        targets.extend(nb);
        weights.extend(ws);
        offsets.push(targets.len());
    }
    let wg = WalkGraph {
        n,
        offsets,
        targets,
        weights,
        sorted,
        first_order,
    };
    if !wg.is_connected() {
        warn!("walk graph is disconnected; walks stay within their component");
    }
    Ok(wg)
}

/// Random walks in canonical order: round `r` of every start vertex precedes
/// round `r + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCorpus {
    pub n: usize,
    pub walks: Vec<Vec<usize>>,
}

impl WalkCorpus {
    pub fn token_count(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }

    pub fn frequencies(&self) -> Vec<u64> {
        let mut f = vec![0u64; self.n];
        for w in &self.walks {
            for &v in w {
                f[v] += 1;
            }
        }
        f
    }
}

/// `walks_per_node` walks of `walk_length` vertices from every vertex.
pub fn generate_walks(wg: &WalkGraph, config: &EmbeddingConfig, seed: u64) -> Result<WalkCorpus> {
    let keys: Vec<u64> = (0..wg.n() as u64).collect();
    generate_walks_keyed(wg, config, seed, &keys)
}

/// As [`generate_walks`], with the random substream of each walk keyed by
/// `keys[start]` instead of the start index, so relabeling a graph and its
/// keys together relabels the corpus.
pub fn generate_walks_keyed(wg: &WalkGraph, config: &EmbeddingConfig, seed: u64, keys: &[u64]) -> Result<WalkCorpus> {
    config.validate()?;
    let n = wg.n();
    if keys.len() != n {
        return Err(Error::InvalidParameter(format!("{} walk keys for {n} vertices", keys.len())));
    }
    let len = config.walk_length;
    let biased = BiasedWalker::new(wg, config.p, config.q);
    let walks = (0..n * config.walks_per_node)
        .into_par_iter()
        .map(|task| {
            let (round, start) = (task / n, task % n);
            let mut rng = stream(seed, &[TAG_WALK, keys[start], round as u64]);
            let mut walk = Vec::with_capacity(len);
            walk.push(start);
            let mut arc = usize::MAX;
            while walk.len() < len {
                let v = *walk.last().unwrap();
                arc = if config.method == WalkMethod::Node2Vec && walk.len() > 1 {
                    biased.step(arc, &mut rng)
                } else {
                    wg.step_first_order(v, &mut rng)
                };
                walk.push(wg.targets[arc]);
            }
            walk
        })
        .collect();
    Ok(WalkCorpus { n, walks })
}
