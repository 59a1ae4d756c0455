//! Seeded benchmark runner for the matchembed solvers: experiment specs,
//! parallel trial execution, confidence-interval summaries and CSV/SVG output.

use std::path::PathBuf;

pub mod render;
pub mod run;
pub mod spec;
pub mod stats;

pub use render::{read_trials_csv, render_svg, write_outputs, write_summary_csv, write_timings_csv, write_trials_csv};
pub use run::{run_experiment, ExperimentResult, TrialRecord, TrialTiming};
pub use spec::{Algorithm, ExperimentSpec, GeneratorKind, RawSpec, Sweep, SweepVar};
pub use stats::{summarize, t_critical, SummaryRow};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    /// Invalid experiment description or command-line values.
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] matchembed::Error),
    #[error("statistics: {0}")]
    Stats(String),
}

impl BenchError {
    /// Process exit code: 1 for bad input, 2 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Spec(_) => 1,
            _ => 2,
        }
    }
}

pub(crate) fn usage<T>(r: matchembed::Result<T>) -> Result<T, BenchError> {
    r.map_err(|e| BenchError::Spec(e.to_string()))
}
