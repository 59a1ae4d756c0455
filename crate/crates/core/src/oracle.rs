//! Exhaustive enumeration of perfect matchings, the ground truth that every
//! solver is validated against.

use crate::error::{Error, Result};
use crate::graph::{DenseGraph, Matching, ObjectiveKind};

/// Largest vertex count the oracle accepts; `15!! = 2_027_025` matchings.
pub const ORACLE_MAX_N: usize = 16;

/// Returns an optimal perfect matching and its value.
///
/// Matchings are enumerated in lexicographic order of their sorted pair lists
/// and only strict improvements are kept, so ties resolve to the smallest
/// list. Sentinel edges are considered only when no perfect matching exists
/// on genuine edges alone.
pub fn brute_force_optimum(graph: &DenseGraph, objective: ObjectiveKind) -> Result<(Matching, f64)> {
    let n = graph.n();
    if n > ORACLE_MAX_N {
        return Err(Error::OracleTooLarge(n));
    }
    for allow_sentinel in [false, true] {
        let mut search = Search {
            graph,
            objective,
            allow_sentinel,
            pairs: Vec::with_capacity(n / 2),
            weights: Vec::with_capacity(n / 2),
            best: None,
        };
        search.descend(0);
        if let Some((pairs, value)) = search.best {
            return Ok((Matching::new(n, pairs)?, value));
        }
    }
    Err(Error::NoPerfectMatching)
}

/// Number of perfect matchings the oracle enumerates on a complete graph.
pub fn perfect_matching_count(n: usize, bipartite: bool) -> u64 {
    let h = (n / 2) as u64;
    if bipartite {
        (1..=h).product()
    } else {
        (1..=h).map(|k| 2 * k - 1).product()
    }
}

struct Search<'a> {
    graph: &'a DenseGraph,
    objective: ObjectiveKind,
    allow_sentinel: bool,
    pairs: Vec<(usize, usize)>,
    weights: Vec<f64>,
    best: Option<(Vec<(usize, usize)>, f64)>,
}

impl Search<'_> {
    fn descend(&mut self, used: u32) {
        let n = self.graph.n();
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        if used == full {
            let value = self.objective.score(n, self.weights.iter().copied());
            let better = match &self.best {
                None => true,
                Some((_, best)) => value < *best,
            };
            if better {
                self.best = Some((self.pairs.clone(), value));
            }
            return;
        }
        let i = (!used).trailing_zeros() as usize;
        for j in (i + 1)..n {
            if used & (1 << j) != 0 || !self.graph.admissible(i, j, self.allow_sentinel) {
                continue;
            }
            self.pairs.push((i, j));
            self.weights.push(self.graph.weight(i, j));
            self.descend(used | (1 << i) | (1 << j));
            self.pairs.pop();
            self.weights.pop();
        }
    }
}
