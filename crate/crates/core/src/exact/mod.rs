//! Exact solvers for the four objectives on bipartite and general graphs.
//!
//! Every solver first restricts itself to genuine edges and falls back to
//! sentinel edges only when no genuine perfect matching exists; the returned
//! report flags such results.

mod blossom;
mod cardinality;
mod hungarian;

use std::time::{Duration, Instant};

use log::warn;

use crate::error::{Error, Result};
use crate::graph::{evaluate, DenseGraph, Matching, ObjectiveKind};

pub use blossom::{max_weight_matching, WeightedMatching};
pub use cardinality::{max_cardinality_matching, maximize, EdgeFilter};
pub use hungarian::assign;

#[derive(Debug, Clone)]
pub struct SolverReport {
    pub matching: Matching,
    /// `evaluate(graph, matching, objective)`.
    pub value: f64,
    /// Algorithm-specific work count (augmentations, feasibility checks, ...).
    pub iterations: usize,
    pub wall_time: Duration,
    /// The matching contains an artificially completed edge.
    pub uses_sentinel: bool,
}

impl SolverReport {
    pub fn new(
        graph: &DenseGraph,
        matching: Matching,
        objective: ObjectiveKind,
        iterations: usize,
        started: Instant,
    ) -> Result<Self> {
        let value = evaluate(graph, &matching, objective)?;
        let uses_sentinel = matching.uses_sentinel(graph);
        if uses_sentinel {
            warn!("no genuine perfect matching: result uses sentinel edges");
        }
        Ok(Self {
            matching,
            value,
            iterations,
            wall_time: started.elapsed(),
            uses_sentinel,
        })
    }
}

/// Optimal solver for `objective`, choosing the algorithm by graph kind.
pub fn solve_exact(graph: &DenseGraph, objective: ObjectiveKind) -> Result<SolverReport> {
    match objective {
        ObjectiveKind::Mcm if graph.is_bipartite() => hungarian_mcm(graph),
        ObjectiveKind::Mcm => blossom_mwpm(graph),
        ObjectiveKind::Bm => bottleneck_matching(graph),
        ObjectiveKind::Um => uniform_matching(graph),
        ObjectiveKind::Mdm => min_deviation_matching(graph),
    }
}

/// Minimum-cost perfect matching of a bipartite graph.
pub fn hungarian_mcm(graph: &DenseGraph) -> Result<SolverReport> {
    if !graph.is_bipartite() {
        return Err(Error::NotBipartite);
    }
    let started = Instant::now();
    for allow_sentinel in [false, true] {
        if let Some((m, steps)) = hungarian_on(graph, |i, j| graph.admissible(i, j, allow_sentinel)) {
            return SolverReport::new(graph, m, ObjectiveKind::Mcm, steps, started);
        }
    }
    Err(Error::NoPerfectMatching)
}

fn hungarian_on<F: Fn(usize, usize) -> bool>(graph: &DenseGraph, allowed: F) -> Option<(Matching, usize)> {
    let h = graph.half();
    let mut costs = vec![f64::INFINITY; h * h];
    for r in 0..h {
        for c in 0..h {
            if allowed(r, h + c) {
                costs[r * h + c] = graph.weight(r, h + c);
            }
        }
    }
    let (rows, steps) = assign(&costs, h)?;
    let pairs = rows.into_iter().enumerate().map(|(r, c)| (r, h + c));
    Some((Matching::new(graph.n(), pairs).expect("assignment is a matching"), steps))
}

/// Minimum-cost perfect matching on a general graph via the primal-dual
/// blossom method, with the dual certificate checked on return.
pub fn blossom_mwpm(graph: &DenseGraph) -> Result<SolverReport> {
    let started = Instant::now();
    for allow_sentinel in [false, true] {
        if let Some((m, stages)) = blossom_on(graph, |i, j| graph.admissible(i, j, allow_sentinel))? {
            return SolverReport::new(graph, m, ObjectiveKind::Mcm, stages, started);
        }
    }
    Err(Error::NoPerfectMatching)
}

fn blossom_on<F: Fn(usize, usize) -> bool>(graph: &DenseGraph, allowed: F) -> Result<Option<(Matching, usize)>> {
    let n = graph.n();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if allowed(i, j) {
                edges.push((i, j, -graph.weight(i, j)));
            }
        }
    }
    let result = max_weight_matching(n, &edges, true);
    result.certificate.map_err(Error::Certification)?;
    let m = Matching::from_mates(&result.mates)?;
    Ok(m.is_perfect().then_some((m, result.stages)))
}

/// Minimum-cost perfect matching restricted to edges accepted by `allowed`.
fn min_cost_perfect_on<F: Fn(usize, usize) -> bool>(graph: &DenseGraph, allowed: F) -> Result<Option<(Matching, usize)>> {
    if graph.is_bipartite() {
        Ok(hungarian_on(graph, allowed))
    } else {
        blossom_on(graph, allowed)
    }
}

/// Whether the admissible edges (genuine only, or all) contain a perfect matching.
fn has_perfect(graph: &DenseGraph, allow_sentinel: bool) -> bool {
    let filter = EdgeFilter {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        allow_sentinel,
    };
    maximize(graph, filter, None).0.is_perfect()
}

fn sentinel_policy(graph: &DenseGraph) -> Result<bool> {
    if has_perfect(graph, false) {
        Ok(false)
    } else if has_perfect(graph, true) {
        Ok(true)
    } else {
        Err(Error::NoPerfectMatching)
    }
}

/// Bottleneck matching: the smallest threshold `w*` among the distinct edge
/// weights such that edges of weight `<= w*` contain a perfect matching.
pub fn bottleneck_matching(graph: &DenseGraph) -> Result<SolverReport> {
    let started = Instant::now();
    let allow_sentinel = sentinel_policy(graph)?;
    let ws = graph.distinct_weights(allow_sentinel);
    let check = |hi: f64, warm: Option<&Matching>| {
        let filter = EdgeFilter {
            lo: f64::NEG_INFINITY,
            hi,
            allow_sentinel,
        };
        maximize(graph, filter, warm).0
    };

    // Invariant: ws[hi] is feasible, every index below lo is infeasible.
    let (mut lo, mut hi) = (0usize, ws.len() - 1);
    let mut best = check(ws[hi], None);
    let mut warm: Option<Matching> = None;
    let mut checks = 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let m = check(ws[mid], warm.as_ref());
        checks += 1;
        if m.is_perfect() {
            hi = mid;
            best = m;
        } else {
            // Stays valid for every larger threshold probed later.
            lo = mid + 1;
            warm = Some(m);
        }
    }
    debug_assert!(best.is_perfect());
    SolverReport::new(graph, best, ObjectiveKind::Bm, checks, started)
}

/// Uniform matching: the narrowest weight window `[W_i, W_j]` whose edges
/// contain a perfect matching, found with a monotone two-pointer scan.
pub fn uniform_matching(graph: &DenseGraph) -> Result<SolverReport> {
    let started = Instant::now();
    let allow_sentinel = sentinel_policy(graph)?;
    let ws = graph.distinct_weights(allow_sentinel);
    let mut best: Option<(f64, Matching)> = None;
    let mut current: Option<Matching> = None;
    let mut checks = 0;
    let mut j = 0usize;
    for i in 0..ws.len() {
        j = j.max(i);
        let mut feasible = false;
        while j < ws.len() {
            let filter = EdgeFilter {
                lo: ws[i],
                hi: ws[j],
                allow_sentinel,
            };
            // Pairs below the new lower bound are dropped by `maximize`.
            let (m, _) = maximize(graph, filter, current.as_ref());
            checks += 1;
            current = Some(m);
            if current.as_ref().is_some_and(Matching::is_perfect) {
                feasible = true;
                break;
            }
            j += 1;
        }
        if !feasible {
            break;
        }
        let m = current.clone().expect("feasible window has a witness");
        let value = evaluate(graph, &m, ObjectiveKind::Um)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, m));
        }
    }
    let (_, m) = best.ok_or(Error::NoPerfectMatching)?;
    SolverReport::new(graph, m, ObjectiveKind::Um, checks, started)
}

/// Minimum-deviation matching, `min (sum w) / n - min w`.
///
/// For every candidate minimum `w0` (ascending distinct weights) solve MCM
/// on the edges with `w >= w0` and score the result with its true minimum.
/// Correctness: let `M*` be optimal with minimum edge `m*`. The candidate
/// `w0 = m*` yields some `M'` with `cost(M') <= cost(M*)` and
/// `min(M') >= m*`, so its score is at most the optimum; every score is the
/// objective of a real perfect matching, hence at least the optimum.
/// Candidates stop at the first infeasible subgraph, since the subgraphs
/// shrink monotonically.
pub fn min_deviation_matching(graph: &DenseGraph) -> Result<SolverReport> {
    let started = Instant::now();
    let allow_sentinel = sentinel_policy(graph)?;
    let ws = graph.distinct_weights(allow_sentinel);
    let mut best: Option<(f64, Matching)> = None;
    let mut solves = 0;
    for &w0 in &ws {
        let found = min_cost_perfect_on(graph, |i, j| {
            graph.admissible(i, j, allow_sentinel) && graph.weight(i, j) >= w0
        })?;
        solves += 1;
        let Some((m, _)) = found else { break };
        let value = evaluate(graph, &m, ObjectiveKind::Mdm)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, m));
        }
    }
    let (_, m) = best.ok_or(Error::NoPerfectMatching)?;
    SolverReport::new(graph, m, ObjectiveKind::Mdm, solves, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four(w01: f64, w23: f64, w02: f64, w13: f64, w03: f64, w12: f64) -> DenseGraph {
        DenseGraph::from_fn(4, false, |i, j| match (i, j) {
            (0, 1) => w01,
            (2, 3) => w23,
            (0, 2) => w02,
            (1, 3) => w13,
            (0, 3) => w03,
            (1, 2) => w12,
            _ => unreachable!(),
        })
        .unwrap()
    }

    #[test]
    fn hungarian_small() {
        let g = DenseGraph::from_cost_matrix(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert_eq!(hungarian_mcm(&g).unwrap().value, 2.0);
        let g = DenseGraph::from_cost_matrix(&[vec![5.0, 5.0], vec![5.0, 5.0]]).unwrap();
        assert_eq!(hungarian_mcm(&g).unwrap().value, 10.0);
        let general = DenseGraph::from_fn(4, false, |_, _| 1.0).unwrap();
        assert_eq!(hungarian_mcm(&general).unwrap_err(), Error::NotBipartite);
    }

    #[test]
    fn blossom_four_cycle_with_sentinels() {
        let g = DenseGraph::complete(4, false, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (0, 3, 2.0)]).unwrap();
        let r = blossom_mwpm(&g).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.matching.pairs(), &[(0, 1), (2, 3)]);
        assert!(!r.uses_sentinel);
    }

    #[test]
    fn blossom_triangle_plus_pendant() {
        let g = four(1.0, 1.0, 1.0, 10.0, 10.0, 1.0);
        let r = blossom_mwpm(&g).unwrap();
        assert_eq!(r.value, 2.0);
        assert_eq!(r.matching.pairs(), &[(0, 1), (2, 3)]);
    }

    #[test]
    fn blossom_falls_back_to_sentinels() {
        let g = DenseGraph::complete(4, false, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let r = blossom_mwpm(&g).unwrap();
        assert!(r.uses_sentinel);
        assert!(r.matching.is_perfect());
    }

    #[test]
    fn bottleneck_examples() {
        let g = DenseGraph::complete(2, false, [(0, 1, 4.5)]).unwrap();
        assert_eq!(bottleneck_matching(&g).unwrap().value, 4.5);
        let g = four(1.0, 9.0, 5.0, 5.0, 5.0, 5.0);
        let r = bottleneck_matching(&g).unwrap();
        assert_eq!(r.value, 5.0);
        assert!(!r.matching.pairs().contains(&(2, 3)));
    }

    #[test]
    fn uniform_examples() {
        let g = DenseGraph::from_fn(6, false, |_, _| 3.0).unwrap();
        assert_eq!(uniform_matching(&g).unwrap().value, 0.0);
        let g = four(1.0, 10.0, 5.0, 6.0, 5.0, 6.0);
        assert_eq!(uniform_matching(&g).unwrap().value, 1.0);
    }

    #[test]
    fn deviation_examples() {
        let g = DenseGraph::from_fn(6, false, |_, _| 2.0).unwrap();
        assert_eq!(min_deviation_matching(&g).unwrap().value, -1.0);
        // Scores of the three matchings: 3/4 - 1, 20/4 - 10, 20/4 - 10.
        let g = four(1.0, 2.0, 10.0, 10.0, 10.0, 10.0);
        let r = min_deviation_matching(&g).unwrap();
        assert_eq!(r.value, -5.0);
        assert_eq!(r.matching.pairs(), &[(0, 2), (1, 3)]);
        let (_, oracle) = crate::oracle::brute_force_optimum(&g, ObjectiveKind::Mdm).unwrap();
        assert_eq!(r.value, oracle);
    }

    #[test]
    fn bipartite_variants() {
        let g = DenseGraph::from_cost_matrix(&[vec![1.0, 7.0], vec![3.0, 2.0]]).unwrap();
        assert_eq!(solve_exact(&g, ObjectiveKind::Mcm).unwrap().value, 3.0);
        assert_eq!(solve_exact(&g, ObjectiveKind::Bm).unwrap().value, 2.0);
        assert_eq!(solve_exact(&g, ObjectiveKind::Um).unwrap().value, 1.0);
        assert_eq!(solve_exact(&g, ObjectiveKind::Mdm).unwrap().value, 10.0 / 4.0 - 3.0);
    }
}
