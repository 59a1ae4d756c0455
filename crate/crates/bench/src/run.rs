//! Trial execution. Every (cell, trial) task derives its own seed from the
//! master seed, so results do not depend on scheduling or thread count.

use std::time::{Duration, Instant};

use log::{info, warn};
use matchembed::exact::{solve_exact, SolverReport};
use matchembed::greedy::{greedy_match, TiePolicy};
use matchembed::pipeline::approx_match;
use matchembed::rng::mix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::spec::{Algorithm, Cell, ExperimentSpec};
use crate::BenchError;

/// Stream key separating the embedding seed from the instance seed.
const EMBED_KEY: u64 = 0x0065_6d62_6564;

/// Deterministic outcome of one algorithm on one trial. Column order of the
/// trials CSV follows the field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub experiment: String,
    pub generator: String,
    pub sweep_var: String,
    pub sweep_value: f64,
    pub objective: String,
    pub algorithm: String,
    pub trial: usize,
    pub seed: u64,
    pub value: Option<f64>,
    pub optimum: Option<f64>,
    /// `value / optimum`; empty when the optimum is not positive.
    pub ratio: Option<f64>,
    /// `value - optimum`.
    pub difference: Option<f64>,
    pub ratio_undefined: bool,
    pub uses_sentinel: bool,
    /// Empty on success.
    pub error: String,
}

impl TrialRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_empty()
    }
}

/// Wall-clock accounting for one record, kept apart so the trials CSV is
/// byte-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTiming {
    pub sweep_value: f64,
    pub algorithm: String,
    pub trial: usize,
    pub embed_ms: f64,
    pub solve_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    /// Ordered by cell, trial, then algorithm as listed in the spec.
    pub records: Vec<TrialRecord>,
    pub timings: Vec<TrialTiming>,
    /// (cell index, algorithm) pairs where every trial failed.
    pub failed_cells: Vec<(usize, Algorithm)>,
}

pub fn trial_seed(master: u64, cell: usize, trial: usize) -> u64 {
    mix(master, &[cell as u64, trial as u64])
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

struct Outcome {
    value: f64,
    uses_sentinel: bool,
    embed: Duration,
    solve: Duration,
}

fn run_algorithm(
    spec: &ExperimentSpec,
    cell: &Cell,
    algorithm: Algorithm,
    graph: &matchembed::DenseGraph,
    optimum: &SolverReport,
    seed: u64,
) -> matchembed::Result<Outcome> {
    match algorithm {
        Algorithm::Exact => Ok(Outcome {
            value: optimum.value,
            uses_sentinel: optimum.uses_sentinel,
            embed: Duration::ZERO,
            solve: optimum.wall_time,
        }),
        Algorithm::Greedy => {
            let r = greedy_match(graph, spec.objective, TiePolicy::ByIndex)?;
            Ok(Outcome {
                value: r.value,
                uses_sentinel: r.uses_sentinel,
                embed: Duration::ZERO,
                solve: r.wall_time,
            })
        }
        Algorithm::DeepWalk | Algorithm::Node2Vec => {
            let method = algorithm.walk_method().expect("pipeline algorithm");
            let r = approx_match(
                graph,
                spec.objective,
                &cell.embedding_for(method),
                spec.surrogate_matcher,
                mix(seed, &[EMBED_KEY]),
            )?;
            Ok(Outcome {
                value: r.report.value,
                uses_sentinel: r.report.uses_sentinel,
                embed: r.embed_time,
                solve: r.solve_time,
            })
        }
    }
}

fn run_trial(spec: &ExperimentSpec, cell: &Cell, trial: usize) -> Vec<(TrialRecord, TrialTiming)> {
    let seed = trial_seed(spec.seed, cell.index, trial);
    let blank = |algorithm: Algorithm| TrialRecord {
        experiment: spec.id.clone(),
        generator: cell.descriptor(),
        sweep_var: spec.sweep.var.as_str().to_string(),
        sweep_value: cell.value,
        objective: spec.objective.to_string(),
        algorithm: algorithm.to_string(),
        trial,
        seed,
        value: None,
        optimum: None,
        ratio: None,
        difference: None,
        ratio_undefined: false,
        uses_sentinel: false,
        error: String::new(),
    };
    let timing = |algorithm: Algorithm, embed: Duration, solve: Duration, total: Duration| TrialTiming {
        sweep_value: cell.value,
        algorithm: algorithm.to_string(),
        trial,
        embed_ms: ms(embed),
        solve_ms: ms(solve),
        total_ms: ms(total),
    };

    let started = Instant::now();
    let prepared = cell
        .instance(seed)
        .and_then(|g| solve_exact(&g, spec.objective).map(|opt| (g, opt)));
    let (graph, optimum) = match prepared {
        Ok(x) => x,
        Err(e) => {
            warn!("cell {} trial {trial}: {e}", cell.index);
            let total = started.elapsed();
            return spec
                .algorithms
                .iter()
                .map(|&a| {
                    let rec = TrialRecord {
                        error: e.to_string(),
                        ..blank(a)
                    };
                    (rec, timing(a, Duration::ZERO, Duration::ZERO, total))
                })
                .collect();
        }
    };

    spec.algorithms
        .iter()
        .map(|&algorithm| {
            let mut rec = blank(algorithm);
            rec.optimum = Some(optimum.value);
            let started = Instant::now();
            let outcome = run_algorithm(spec, cell, algorithm, &graph, &optimum, seed);
            let mut total = started.elapsed();
            match outcome {
                Ok(out) => {
                    // The exact record reuses the optimum's solve time.
                    total = total.max(out.embed + out.solve);
                    rec.value = Some(out.value);
                    rec.uses_sentinel = out.uses_sentinel;
                    rec.difference = Some(out.value - optimum.value);
                    if optimum.value > 0.0 {
                        rec.ratio = Some(out.value / optimum.value);
                    } else {
                        rec.ratio_undefined = true;
                    }
                    (rec, timing(algorithm, out.embed, out.solve, total))
                }
                Err(e) => {
                    warn!("cell {} trial {trial} {algorithm}: {e}", cell.index);
                    rec.error = e.to_string();
                    (rec, timing(algorithm, Duration::ZERO, Duration::ZERO, total))
                }
            }
        })
        .collect()
}

/// Runs every (cell, trial, algorithm) of `spec` on a pool of `threads`
/// workers (0 = rayon's default). Per-trial failures are recorded, not fatal.
pub fn run_experiment(spec: &ExperimentSpec, threads: usize) -> Result<ExperimentResult, BenchError> {
    spec.validate()?;
    let cells = spec.cells()?;
    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.trials).map(move |t| (c, t)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| BenchError::Spec(format!("thread pool: {e}")))?;
    info!(
        "experiment {}: {} cells x {} trials x {} algorithms",
        spec.id,
        cells.len(),
        spec.trials,
        spec.algorithms.len()
    );
    let rows: Vec<Vec<(TrialRecord, TrialTiming)>> =
        pool.install(|| tasks.par_iter().map(|&(c, t)| run_trial(spec, &cells[c], t)).collect());

    let (records, timings): (Vec<_>, Vec<_>) = rows.into_iter().flatten().unzip();
    let mut failed_cells = Vec::new();
    for cell in &cells {
        for &algorithm in &spec.algorithms {
            let all_failed = records
                .iter()
                .filter(|r: &&TrialRecord| r.sweep_value == cell.value && r.algorithm == algorithm.as_str())
                .all(|r| !r.is_ok());
            if all_failed {
                warn!("cell {} ({}): every {algorithm} trial failed", cell.index, cell.value);
                failed_cells.push((cell.index, algorithm));
            }
        }
    }
    Ok(ExperimentResult {
        records,
        timings,
        failed_cells,
    })
}
