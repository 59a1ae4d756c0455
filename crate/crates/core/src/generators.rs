//! Synthetic instance families.
//!
//! * [`gen_adversarial`]: points on a line built by recursive doubling, on
//!   which the greedy matcher's cost grows like `n^{log2 1.5}` times optimum.
//! * [`gen_lomax`]: complete graphs with i.i.d. heavy-tailed Lomax weights.
//! * [`gen_uniform_random`]: i.i.d. `Uniform[0, 1)` weights for testing.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::DenseGraph;
use crate::rng;

pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const MAX_LEVEL: u32 = 13;

/// Stream tags so generators never share a random stream for the same seed.
const LOMAX_STREAM: u64 = 0x004c_4f4d_4158;
const UNIFORM_STREAM: u64 = 0x554e_4946;

#[derive(Debug, Clone)]
pub struct AdversarialInstance {
    pub t: u32,
    pub epsilon: f64,
    /// Sorted ascending.
    pub positions: Vec<f64>,
    pub graph: DenseGraph,
}

impl AdversarialInstance {
    pub fn n(&self) -> usize {
        self.positions.len()
    }

    /// Largest pairwise distance, `span_t`.
    pub fn span(&self) -> f64 {
        self.positions[self.positions.len() - 1] - self.positions[0]
    }

    /// Predicted optimal MCM cost as `epsilon -> 0`: `2^{t-2}` unit pairs.
    pub fn predicted_opt_mcm(&self) -> f64 {
        if self.t < 2 {
            return 0.0;
        }
        2f64.powi(self.t as i32 - 2)
    }

    /// Predicted greedy MCM cost as `epsilon -> 0`: `2 * 3^{t-2} - 2^{t-2}`.
    pub fn predicted_greedy_mcm(&self) -> f64 {
        let k = self.t as i32 - 2;
        2.0 * 3f64.powi(k) - 2f64.powi(k)
    }

    /// Predicted greedy/optimum ratio `2 * 1.5^{t-2} - 1`.
    pub fn predicted_ratio(&self) -> f64 {
        predicted_greedy_ratio(self.t)
    }
}

pub fn predicted_greedy_ratio(t: u32) -> f64 {
    2.0 * 1.5f64.powi(t as i32 - 2) - 1.0
}

/// Positions `Q_2 = {0, 1}`, `Q_{k+1} = Q_k ∪ (Q_k + (2 - eps) span_k)` with
/// `span_{k+1} = (3 - eps) span_k`.
pub fn adversarial_positions(t: u32, epsilon: f64) -> Result<Vec<f64>> {
    if !(2..=MAX_LEVEL).contains(&t) {
        return Err(Error::InvalidParameter(format!("adversarial level t must be in 2..={MAX_LEVEL}, got {t}")));
    }
    if !(epsilon > 0.0 && epsilon < 0.01) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 0.01), got {epsilon}")));
    }
    let mut positions = vec![0.0, 1.0];
    let mut span = 1.0;
    for _ in 2..t {
        let offset = (2.0 - epsilon) * span;
        let shifted: Vec<f64> = positions.iter().map(|p| p + offset).collect();
        positions.extend(shifted);
        span *= 3.0 - epsilon;
    }
    Ok(positions)
}

pub fn gen_adversarial(t: u32, epsilon: f64) -> Result<AdversarialInstance> {
    let positions = adversarial_positions(t, epsilon)?;
    let graph = DenseGraph::from_fn(positions.len(), false, |i, j| (positions[i] - positions[j]).abs())?;
    Ok(AdversarialInstance {
        t,
        epsilon,
        positions,
        graph,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LomaxConfig {
    pub shape: f64,
    pub scale: f64,
    pub n: usize,
    pub bipartite: bool,
}

impl LomaxConfig {
    pub fn new(shape: f64, n: usize) -> Self {
        Self {
            shape,
            scale: 1.0,
            n,
            bipartite: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.shape > 0.0 && self.shape.is_finite()) {
            return Err(Error::InvalidParameter(format!("lomax shape must be positive, got {}", self.shape)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("lomax scale must be positive, got {}", self.scale)));
        }
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        if self.n % 2 == 1 {
            return Err(Error::OddVertexCount(self.n));
        }
        Ok(())
    }
}

/// Inverse CDF of the Lomax distribution, `scale * ((1 - u)^{-1/shape} - 1)`.
#[inline]
pub fn lomax_inverse_cdf(u: f64, shape: f64, scale: f64) -> f64 {
    scale * ((1.0 - u).powf(-1.0 / shape) - 1.0)
}

/// Lomax CDF `1 - (1 + x / scale)^{-shape}`.
pub fn lomax_cdf(x: f64, shape: f64, scale: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    1.0 - (1.0 + x / scale).powf(-shape)
}

/// Weights are drawn in lexicographic edge order from a single stream.
/// Bipartite instances draw only cross-partition weights.
pub fn gen_lomax(config: &LomaxConfig, seed: u64) -> Result<DenseGraph> {
    config.validate()?;
    let mut rng = rng::stream(seed, &[LOMAX_STREAM]);
    DenseGraph::from_fn(config.n, config.bipartite, |_, _| {
        lomax_inverse_cdf(rng.gen::<f64>(), config.shape, config.scale)
    })
}

pub fn gen_uniform_random(n: usize, seed: u64, bipartite: bool) -> Result<DenseGraph> {
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    let mut rng = rng::stream(seed, &[UNIFORM_STREAM]);
    DenseGraph::from_fn(n, bipartite, |_, _| rng.gen::<f64>())
}
