//! Experiment specification: what to generate, which algorithms to run,
//! and which parameter to sweep.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use matchembed::embedding::{EmbeddingConfig, Similarity, WalkMethod};
use matchembed::generators::{gen_adversarial, gen_lomax, gen_uniform_random, LomaxConfig, DEFAULT_EPSILON};
use matchembed::pipeline::SurrogateMatcher;
use matchembed::{DenseGraph, ObjectiveKind};
use serde::Deserialize;

use crate::{usage, BenchError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Adversarial,
    Lomax,
    Uniform,
}

impl GeneratorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Adversarial => "adversarial",
            GeneratorKind::Lomax => "lomax",
            GeneratorKind::Uniform => "uniform",
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s.to_ascii_lowercase().as_str() {
            "adversarial" => Ok(GeneratorKind::Adversarial),
            "lomax" => Ok(GeneratorKind::Lomax),
            "uniform" => Ok(GeneratorKind::Uniform),
            other => Err(BenchError::Spec(format!("unknown generator `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Exact,
    Greedy,
    DeepWalk,
    Node2Vec,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Greedy => "greedy",
            Algorithm::DeepWalk => "deepwalk",
            Algorithm::Node2Vec => "node2vec",
        }
    }

    pub fn walk_method(self) -> Option<WalkMethod> {
        match self {
            Algorithm::DeepWalk => Some(WalkMethod::DeepWalk),
            Algorithm::Node2Vec => Some(WalkMethod::Node2Vec),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        let name = s.trim().to_ascii_lowercase();
        match name.strip_suffix("-pipeline").unwrap_or(&name) {
            "exact" => Ok(Algorithm::Exact),
            "greedy" => Ok(Algorithm::Greedy),
            "deepwalk" => Ok(Algorithm::DeepWalk),
            "node2vec" => Ok(Algorithm::Node2Vec),
            other => Err(BenchError::Spec(format!("unknown algorithm `{other}`"))),
        }
    }
}

/// Parameter varied across the cells of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// Adversarial level `t`.
    T,
    /// Vertex count of Lomax / uniform instances.
    N,
    Alpha,
    WalksPerNode,
    WalkLength,
    Dimensions,
}

impl SweepVar {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVar::T => "t",
            SweepVar::N => "n",
            SweepVar::Alpha => "alpha",
            SweepVar::WalksPerNode => "walks_per_node",
            SweepVar::WalkLength => "walk_length",
            SweepVar::Dimensions => "dimensions",
        }
    }
}

impl FromStr for SweepVar {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, BenchError> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "t" => Ok(SweepVar::T),
            "n" => Ok(SweepVar::N),
            "alpha" | "shape" => Ok(SweepVar::Alpha),
            "walks_per_node" | "walks" | "r" => Ok(SweepVar::WalksPerNode),
            "walk_length" | "length" | "l" => Ok(SweepVar::WalkLength),
            "dimensions" | "d" => Ok(SweepVar::Dimensions),
            other => Err(BenchError::Spec(format!("unknown sweep variable `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub var: SweepVar,
    pub values: Vec<f64>,
}

impl FromStr for Sweep {
    type Err = BenchError;

    /// `var=v1,v2,...`
    fn from_str(s: &str) -> Result<Self, BenchError> {
        let (var, values) = s
            .split_once('=')
            .ok_or_else(|| BenchError::Spec(format!("sweep `{s}` is not of the form var=v1,v2,...")))?;
        let values = values
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| BenchError::Spec(format!("bad sweep value `{v}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sweep {
            var: var.parse()?,
            values,
        })
    }
}

/// Fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub id: String,
    pub generator: GeneratorKind,
    pub t: u32,
    pub epsilon: f64,
    pub alpha: f64,
    pub n: usize,
    pub bipartite: bool,
    pub objective: ObjectiveKind,
    pub algorithms: Vec<Algorithm>,
    pub sweep: Sweep,
    pub trials: usize,
    pub seed: u64,
    pub embedding: EmbeddingConfig,
    pub surrogate_matcher: SurrogateMatcher,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            id: "experiment".into(),
            generator: GeneratorKind::Lomax,
            t: 5,
            epsilon: DEFAULT_EPSILON,
            alpha: 2.0,
            n: 100,
            bipartite: false,
            objective: ObjectiveKind::Mcm,
            algorithms: vec![Algorithm::Greedy, Algorithm::DeepWalk, Algorithm::Node2Vec],
            sweep: Sweep {
                var: SweepVar::Alpha,
                values: vec![2.0],
            },
            trials: 5,
            seed: 0,
            embedding: EmbeddingConfig::default(),
            surrogate_matcher: SurrogateMatcher::Exact,
        }
    }
}

/// One cell of the sweep: the spec with the sweep variable set.
#[derive(Debug, Clone)]
pub struct Cell {
    pub index: usize,
    pub value: f64,
    pub generator: GeneratorKind,
    pub t: u32,
    pub epsilon: f64,
    pub alpha: f64,
    pub n: usize,
    pub bipartite: bool,
    pub embedding: EmbeddingConfig,
}

impl Cell {
    pub fn descriptor(&self) -> String {
        match self.generator {
            GeneratorKind::Adversarial => format!("adversarial(t={},eps={:e})", self.t, self.epsilon),
            GeneratorKind::Lomax => format!("lomax(alpha={},n={},bipartite={})", self.alpha, self.n, self.bipartite),
            GeneratorKind::Uniform => format!("uniform(n={},bipartite={})", self.n, self.bipartite),
        }
    }

    pub fn instance(&self, seed: u64) -> matchembed::Result<DenseGraph> {
        match self.generator {
            GeneratorKind::Adversarial => Ok(gen_adversarial(self.t, self.epsilon)?.graph),
            GeneratorKind::Lomax => {
                let cfg = LomaxConfig {
                    bipartite: self.bipartite,
                    ..LomaxConfig::new(self.alpha, self.n)
                };
                gen_lomax(&cfg, seed)
            }
            GeneratorKind::Uniform => gen_uniform_random(self.n, seed, self.bipartite),
        }
    }

    pub fn embedding_for(&self, method: WalkMethod) -> EmbeddingConfig {
        EmbeddingConfig {
            method,
            ..self.embedding.clone()
        }
    }
}

fn as_count(var: SweepVar, v: f64) -> Result<usize, BenchError> {
    if v.fract() != 0.0 || v < 0.0 || v > u32::MAX as f64 {
        return Err(BenchError::Spec(format!("{} must be a non-negative integer, got {v}", var.as_str())));
    }
    Ok(v as usize)
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.trials < 2 {
            return Err(BenchError::Spec("trials must be at least 2 for confidence intervals".into()));
        }
        if self.algorithms.is_empty() {
            return Err(BenchError::Spec("no algorithms selected".into()));
        }
        if self.sweep.values.is_empty() {
            return Err(BenchError::Spec("sweep grid is empty".into()));
        }
        let ok = match self.sweep.var {
            SweepVar::T => self.generator == GeneratorKind::Adversarial,
            SweepVar::N => self.generator != GeneratorKind::Adversarial,
            SweepVar::Alpha => self.generator == GeneratorKind::Lomax,
            _ => true,
        };
        if !ok {
            return Err(BenchError::Spec(format!(
                "cannot sweep {} with the {} generator",
                self.sweep.var.as_str(),
                self.generator.as_str()
            )));
        }
        for cell in self.cells()? {
            usage(cell.embedding.validate())?;
            if cell.generator == GeneratorKind::Lomax {
                usage(LomaxConfig::new(cell.alpha, cell.n).validate())?;
            }
        }
        Ok(())
    }

    pub fn cells(&self) -> Result<Vec<Cell>, BenchError> {
        self.sweep
            .values
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                let mut cell = Cell {
                    index,
                    value,
                    generator: self.generator,
                    t: self.t,
                    epsilon: self.epsilon,
                    alpha: self.alpha,
                    n: self.n,
                    bipartite: self.bipartite,
                    embedding: self.embedding.clone(),
                };
                match self.sweep.var {
                    SweepVar::T => cell.t = as_count(SweepVar::T, value)? as u32,
                    SweepVar::N => cell.n = as_count(SweepVar::N, value)?,
                    SweepVar::Alpha => cell.alpha = value,
                    SweepVar::WalksPerNode => cell.embedding.walks_per_node = as_count(SweepVar::WalksPerNode, value)?,
                    SweepVar::WalkLength => cell.embedding.walk_length = as_count(SweepVar::WalkLength, value)?,
                    SweepVar::Dimensions => cell.embedding.dimensions = as_count(SweepVar::Dimensions, value)?,
                }
                Ok(cell)
            })
            .collect()
    }

    pub fn from_toml_str(text: &str) -> Result<Self, BenchError> {
        RawSpec::from_toml_str(text)?.resolve()
    }

    pub fn from_file(path: &Path) -> Result<Self, BenchError> {
        RawSpec::from_file(path)?.resolve()
    }
}

/// List given either as a TOML array or a comma-separated string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NameList {
    One(String),
    Many(Vec<String>),
}

impl NameList {
    pub fn items(&self) -> Vec<String> {
        match self {
            NameList::One(s) => s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect(),
            NameList::Many(v) => v.clone(),
        }
    }
}

/// Flat spec-file keys; each mirrors a command-line flag. Absent keys keep
/// their defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub id: Option<String>,
    pub generator: Option<String>,
    pub t: Option<u32>,
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub n: Option<usize>,
    pub bipartite: Option<bool>,
    pub objective: Option<String>,
    pub algorithms: Option<NameList>,
    pub sweep: Option<String>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub dimensions: Option<usize>,
    pub walks_per_node: Option<usize>,
    pub walk_length: Option<usize>,
    pub window: Option<usize>,
    pub negatives: Option<usize>,
    pub epochs: Option<usize>,
    pub learning_rate: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub similarity: Option<String>,
    pub knn: Option<usize>,
    pub surrogate_matcher: Option<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RawSpec {
    /// Keys set in `over` replace those in `self`.
    pub fn merge(self, over: RawSpec) -> RawSpec {
        macro_rules! pick {
            ($($f:ident),* $(,)?) => {
                RawSpec { $($f: over.$f.or(self.$f)),* }
            };
        }
        pick!(
            id, generator, t, epsilon, alpha, n, bipartite, objective, algorithms, sweep, trials, seed, dimensions,
            walks_per_node, walk_length, window, negatives, epochs, learning_rate, p, q, similarity, knn,
            surrogate_matcher, out, threads,
        )
    }

    pub fn from_toml_str(text: &str) -> Result<Self, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Spec(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::Io(path.to_path_buf(), e))?;
        Self::from_toml_str(&text)
    }

    pub fn resolve(&self) -> Result<ExperimentSpec, BenchError> {
        let mut spec = ExperimentSpec::default();
        self.apply(&mut spec)?;
        Ok(spec)
    }

    /// Overlays the present keys onto `spec`. When no sweep is given, the
    /// experiment is a single cell keyed by the generator's main parameter.
    pub fn apply(&self, spec: &mut ExperimentSpec) -> Result<(), BenchError> {
        if let Some(v) = &self.id {
            spec.id = v.clone();
        }
        if let Some(v) = &self.generator {
            spec.generator = v.parse()?;
        }
        macro_rules! set {
            ($($field:ident => $target:expr),* $(,)?) => {
                $(if let Some(v) = self.$field { $target = v; })*
            };
        }
        set! {
            t => spec.t,
            epsilon => spec.epsilon,
            alpha => spec.alpha,
            n => spec.n,
            bipartite => spec.bipartite,
            trials => spec.trials,
            seed => spec.seed,
            dimensions => spec.embedding.dimensions,
            walks_per_node => spec.embedding.walks_per_node,
            walk_length => spec.embedding.walk_length,
            window => spec.embedding.window,
            negatives => spec.embedding.negatives,
            epochs => spec.embedding.epochs,
            learning_rate => spec.embedding.learning_rate,
            p => spec.embedding.p,
            q => spec.embedding.q,
            knn => spec.embedding.knn,
        }
        if let Some(v) = &self.objective {
            spec.objective = usage(v.parse())?;
        }
        if let Some(v) = &self.similarity {
            spec.embedding.similarity = usage(v.parse::<Similarity>())?;
        }
        if let Some(v) = &self.surrogate_matcher {
            spec.surrogate_matcher = usage(v.parse())?;
        }
        if let Some(v) = &self.algorithms {
            spec.algorithms = v.items().iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
        }
        spec.sweep = match &self.sweep {
            Some(s) => s.parse()?,
            None => match spec.generator {
                GeneratorKind::Adversarial => Sweep {
                    var: SweepVar::T,
                    values: vec![spec.t as f64],
                },
                GeneratorKind::Lomax => Sweep {
                    var: SweepVar::Alpha,
                    values: vec![spec.alpha],
                },
                GeneratorKind::Uniform => Sweep {
                    var: SweepVar::N,
                    values: vec![spec.n as f64],
                },
            },
        };
        Ok(())
    }
}
