//! The embedding heuristic end to end: embed the vertices, solve on the
//! Euclidean surrogate graph, and score the matching on the original weights.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::embedding::{embed_graph, EmbeddingConfig};
use crate::error::{Error, Result};
use crate::exact::{solve_exact, SolverReport};
use crate::geometry::Points;
use crate::graph::{DenseGraph, ObjectiveKind};
use crate::greedy::{distance_graph, euclidean_greedy_match, greedy_matching, TiePolicy};

/// Embedded points and their complete Euclidean distance graph. Vertex `i`
/// of the surrogate is vertex `i` of the source graph.
#[derive(Debug, Clone)]
pub struct SurrogateGraph {
    pub points: Points,
    pub graph: DenseGraph,
}

/// Distance graph of the embedded points; `bipartite` should be copied from
/// the source graph so the same solvers apply.
pub fn build_surrogate(points: &Points, bipartite: bool) -> Result<SurrogateGraph> {
    Ok(SurrogateGraph {
        points: points.clone(),
        graph: distance_graph(points, bipartite)?,
    })
}

/// Matcher run on the surrogate graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SurrogateMatcher {
    /// Exact solver for the requested objective.
    #[default]
    Exact,
    /// k-d tree greedy; objective-agnostic like the dense greedy.
    EuclideanGreedy,
}

impl fmt::Display for SurrogateMatcher {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurrogateMatcher::Exact => "exact",
            SurrogateMatcher::EuclideanGreedy => "greedy",
        })
    }
}

impl FromStr for SurrogateMatcher {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(SurrogateMatcher::Exact),
            "greedy" | "euclidean_greedy" | "euclidean-greedy" => Ok(SurrogateMatcher::EuclideanGreedy),
            other => Err(Error::InvalidParameter(format!("unknown surrogate matcher `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    /// Matching and value on the original graph.
    pub report: SolverReport,
    /// Value of the same matching on the surrogate weights.
    pub surrogate_value: f64,
    pub embed_time: Duration,
    pub solve_time: Duration,
    pub final_loss: Option<f64>,
}

/// Embeds `graph`, solves `objective` on the surrogate with `matcher`, and
/// evaluates the resulting matching on the original weights.
pub fn approx_match(
    graph: &DenseGraph,
    objective: ObjectiveKind,
    config: &EmbeddingConfig,
    matcher: SurrogateMatcher,
    seed: u64,
) -> Result<PipelineReport> {
    let started = Instant::now();
    let embedding = embed_graph(graph, config, seed)?;
    let embed_time = started.elapsed();
    let mut out = approx_match_with_embedding(graph, objective, &embedding.vectors, matcher)?;
    out.embed_time = embed_time;
    out.final_loss = Some(embedding.final_loss());
    Ok(out)
}

/// As [`approx_match`] with a given embedding instead of a trained one.
pub fn approx_match_with_embedding(
    graph: &DenseGraph,
    objective: ObjectiveKind,
    points: &Points,
    matcher: SurrogateMatcher,
) -> Result<PipelineReport> {
    if points.len() != graph.n() {
        return Err(Error::InvalidParameter(format!(
            "embedding has {} rows for {} vertices",
            points.len(),
            graph.n()
        )));
    }
    let started = Instant::now();
    let surrogate = build_surrogate(points, graph.is_bipartite())?;
    let (matching, iterations) = match matcher {
        SurrogateMatcher::Exact => {
            let r = solve_exact(&surrogate.graph, objective)?;
            (r.matching, r.iterations)
        }
        // The point-set greedy knows nothing about sides, so bipartite
        // instances take the dense path on the surrogate.
        SurrogateMatcher::EuclideanGreedy if graph.is_bipartite() => {
            (greedy_matching(&surrogate.graph, TiePolicy::ByIndex), graph.n() / 2)
        }
        SurrogateMatcher::EuclideanGreedy => (euclidean_greedy_match(points, TiePolicy::ByIndex)?, graph.n() / 2),
    };
    let surrogate_value = crate::graph::evaluate(&surrogate.graph, &matching, objective)?;
    let report = SolverReport::new(graph, matching, objective, iterations, started)?;
    Ok(PipelineReport {
        solve_time: report.wall_time,
        report,
        surrogate_value,
        embed_time: Duration::ZERO,
        final_loss: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_four_five() {
        let p = Points::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let s = build_surrogate(&p, false).unwrap();
        assert_eq!(s.graph.weight(0, 1), 5.0);
    }

    #[test]
    fn identical_points_give_zero_weights() {
        let p = Points::from_rows(&vec![vec![1.5, -2.0, 0.25]; 6]).unwrap();
        let s = build_surrogate(&p, false).unwrap();
        assert!(s.graph.edges(false).iter().all(|&(_, _, w)| w == 0.0));
    }

    #[test]
    fn surrogate_is_a_metric() {
        use rand::Rng;
        let mut rng = crate::rng::stream(5, &[]);
        let data = (0..10 * 4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let s = build_surrogate(&Points::new(4, data).unwrap(), false).unwrap();
        let w = |i: usize, j: usize| if i == j { 0.0 } else { s.graph.weight(i, j) };
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(w(i, j), w(j, i));
                assert_eq!(w(i, j) == 0.0, i == j || s.points.row(i) == s.points.row(j));
                for k in 0..10 {
                    assert!(w(i, k) <= w(i, j) + w(j, k) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn matcher_names() {
        assert_eq!("greedy".parse::<SurrogateMatcher>().unwrap(), SurrogateMatcher::EuclideanGreedy);
        assert_eq!(SurrogateMatcher::Exact.to_string(), "exact");
        assert!("fast".parse::<SurrogateMatcher>().is_err());
    }

    #[test]
    fn wrong_embedding_size_rejected() {
        let g = DenseGraph::complete(4, false, [(0, 1, 1.0)]).unwrap();
        let p = Points::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        assert!(approx_match_with_embedding(&g, ObjectiveKind::Mcm, &p, SurrogateMatcher::Exact).is_err());
    }
}
