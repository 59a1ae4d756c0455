//! Solvers for minimum-cost, bottleneck, uniform and minimum-deviation
//! perfect matchings on dense weighted graphs.
//!
//! Besides exact solvers and the greedy baseline, the crate provides an
//! embedding heuristic: vertices are embedded into `R^d` with random-walk
//! skip-gram training, the matching is solved on Euclidean distances between
//! the embedded points, and the result is scored on the original weights.

pub mod error;
pub mod exact;
pub mod generators;
pub mod embedding;
pub mod geometry;
pub mod graph;
pub mod greedy;
pub mod oracle;
pub mod pipeline;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{evaluate, DenseGraph, Matching, ObjectiveKind};
