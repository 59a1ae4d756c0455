//! Random-walk vertex embeddings: a k-NN walk graph with similarity
//! transition weights, DeepWalk or node2vec walks, and skip-gram training
//! with negative sampling.

mod sgns;
mod walks;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::Points;
use crate::graph::DenseGraph;

pub use sgns::{pair_loss_and_grad, sigmoid, train_sgns, PairGradient};
pub use walks::{build_walk_graph, generate_walks, generate_walks_keyed, WalkCorpus, WalkGraph};

/// Stream tags keeping the random substreams of each stage apart.
pub(crate) const TAG_WALK: u64 = 0x5741_4c4b;
pub(crate) const TAG_INIT: u64 = 0x494e_4954;
pub(crate) const TAG_SHUFFLE: u64 = 0x5348_5546;
pub(crate) const TAG_NEGATIVE: u64 = 0x4e45_4741;
pub(crate) const TAG_EVAL: u64 = 0x4556_414c;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkMethod {
    DeepWalk,
    Node2Vec,
}

impl WalkMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            WalkMethod::DeepWalk => "deepwalk",
            WalkMethod::Node2Vec => "node2vec",
        }
    }
}

impl fmt::Display for WalkMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WalkMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "deepwalk" => Ok(WalkMethod::DeepWalk),
            "node2vec" => Ok(WalkMethod::Node2Vec),
            other => Err(Error::InvalidParameter(format!("unknown walk method `{other}`"))),
        }
    }
}

/// Conversion of a (distance-like) edge weight into a walk transition weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Similarity {
    /// `1 / (w + 1e-12)`.
    Inverse,
    /// `exp(-w / mean)` over the kept edges.
    ExpDecay,
    Uniform,
}

impl FromStr for Similarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "inverse" => Ok(Similarity::Inverse),
            "exp_decay" => Ok(Similarity::ExpDecay),
            "uniform" => Ok(Similarity::Uniform),
            other => Err(Error::InvalidParameter(format!("unknown similarity `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingConfig {
    pub dimensions: usize,
    pub walks_per_node: usize,
    pub walk_length: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub min_learning_rate: f64,
    pub method: WalkMethod,
    /// node2vec return parameter.
    pub p: f64,
    /// node2vec in-out parameter.
    pub q: f64,
    pub similarity: Similarity,
    /// Neighbors kept per vertex in the walk graph; clamped to `n - 1`.
    pub knn: usize,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            dimensions: 10,
            walks_per_node: 20,
            walk_length: 20,
            window: 5,
            negatives: 5,
            epochs: 5,
            learning_rate: 0.025,
            min_learning_rate: 1e-4,
            method: WalkMethod::DeepWalk,
            p: 0.5,
            q: 2.0,
            similarity: Similarity::Inverse,
            knn: 10,
        }
    }
}

impl EmbeddingConfig {
    pub fn node2vec() -> Self {
        Self {
            method: WalkMethod::Node2Vec,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("dimensions", self.dimensions),
            ("walks_per_node", self.walks_per_node),
            ("walk_length", self.walk_length),
            ("window", self.window),
            ("negatives", self.negatives),
            ("epochs", self.epochs),
            ("knn", self.knn),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidParameter(format!("{name} must be at least 1")));
        }
        if !(self.p > 0.0 && self.q > 0.0) {
            return Err(Error::InvalidParameter("p and q must be positive".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidParameter("learning rate must be positive".into()));
        }
        if !(self.min_learning_rate >= 0.0 && self.min_learning_rate <= self.learning_rate) {
            return Err(Error::InvalidParameter("minimum learning rate out of range".into()));
        }
        Ok(())
    }
}

/// Learned map from vertices to `R^d`; row `i` is vertex `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub vectors: Points,
    pub config: EmbeddingConfig,
    /// Mean pair loss over the corpus after each training epoch.
    pub epoch_losses: Vec<f64>,
}

impl Embedding {
    pub fn final_loss(&self) -> f64 {
        self.epoch_losses.last().copied().unwrap_or(f64::NAN)
    }

    pub fn n(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors.dim()
    }
}

/// Walk graph, walks and skip-gram training in sequence.
pub fn embed_graph(graph: &DenseGraph, config: &EmbeddingConfig, seed: u64) -> Result<Embedding> {
    config.validate()?;
    let wg = build_walk_graph(graph, config)?;
    let corpus = generate_walks(&wg, config, seed)?;
    train_sgns(&corpus, config, seed)
}

/// Text form: header `n d`, then `index v1 ... vd` per vertex.
pub fn write_embedding(vectors: &Points) -> String {
    let mut out = format!("{} {}\n", vectors.len(), vectors.dim());
    for (i, row) in vectors.rows().enumerate() {
        out.push_str(&i.to_string());
        for x in row {
            out.push(' ');
            out.push_str(&format!("{x:?}"));
        }
        out.push('\n');
    }
    out
}

pub fn parse_embedding(text: &str) -> Result<Points> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse_err = |line: usize, message: &str| Error::Parse {
        line,
        message: message.to_string(),
    };
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let head: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(hl, "header must be `n d`"))?;
    let [n, d] = head[..] else {
        return Err(parse_err(hl, "header must be `n d`"));
    };
    let mut data = vec![f64::NAN; n * d];
    let mut seen = vec![false; n];
    for (ln, line) in lines {
        let mut fields = line.split_whitespace();
        let idx: usize = fields
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| parse_err(ln, "bad vertex index"))?;
        if idx >= n || seen[idx] {
            return Err(parse_err(ln, "vertex index out of range or repeated"));
        }
        let vals: Vec<f64> = fields
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(ln, "bad coordinate"))?;
        if vals.len() != d {
            return Err(parse_err(ln, "wrong number of coordinates"));
        }
        data[idx * d..(idx + 1) * d].copy_from_slice(&vals);
        seen[idx] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(parse_err(0, "missing vertices"));
    }
    Points::new(d, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        EmbeddingConfig::default().validate().unwrap();
        let bad = EmbeddingConfig {
            p: 0.0,
            ..EmbeddingConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = EmbeddingConfig {
            window: 0,
            ..EmbeddingConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!("node2vec".parse::<WalkMethod>().unwrap(), WalkMethod::Node2Vec);
        assert_eq!("exp-decay".parse::<Similarity>().unwrap(), Similarity::ExpDecay);
        assert!("walk".parse::<WalkMethod>().is_err());
    }

    #[test]
    fn embedding_text_round_trip() {
        let p = Points::from_rows(&[vec![0.1, -2.5e-7], vec![3.0, 1.0 / 3.0]]).unwrap();
        let text = write_embedding(&p);
        assert!(text.starts_with("2 2\n0 "));
        assert_eq!(parse_embedding(&text).unwrap(), p);
        assert!(parse_embedding("2 1\n0 1.0\n").is_err());
        assert!(parse_embedding("1 1\n0 1.0 2.0\n").is_err());
    }
}
