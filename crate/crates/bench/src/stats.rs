//! Per-cell means with Student-t 95% confidence intervals.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::run::TrialRecord;
use crate::BenchError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub experiment: String,
    pub sweep_var: String,
    pub sweep_value: f64,
    pub objective: String,
    pub algorithm: String,
    /// `ratio`, or `difference` when some optimum in the cell is not positive.
    pub metric: String,
    pub trials: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub half_width: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Two-sided 95% Student-t critical value with `df` degrees of freedom.
pub fn t_critical(df: usize) -> Result<f64, BenchError> {
    let dist = StudentsT::new(0.0, 1.0, df as f64).map_err(|e| BenchError::Stats(e.to_string()))?;
    Ok(dist.inverse_cdf(0.975))
}

/// Mean and 95% interval for each (sweep value, algorithm) cell, in order of
/// first appearance. Failed records are skipped; a cell needs two successes.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<SummaryRow>, BenchError> {
    let mut keys: Vec<(&TrialRecord, Vec<&TrialRecord>)> = Vec::new();
    for r in records {
        let same = |k: &TrialRecord| {
            k.experiment == r.experiment
                && k.sweep_value.to_bits() == r.sweep_value.to_bits()
                && k.objective == r.objective
                && k.algorithm == r.algorithm
        };
        match keys.iter_mut().find(|(k, _)| same(k)) {
            Some((_, group)) => group.push(r),
            None => keys.push((r, vec![r])),
        }
    }

    keys.into_iter()
        .map(|(key, group)| {
            let ok: Vec<&TrialRecord> = group.into_iter().filter(|r| r.is_ok()).collect();
            if ok.len() < 2 {
                return Err(BenchError::Stats(format!(
                    "{} at {}={} has {} successful trial(s); need at least 2",
                    key.algorithm,
                    key.sweep_var,
                    key.sweep_value,
                    ok.len()
                )));
            }
            let use_ratio = ok.iter().all(|r| r.ratio.is_some());
            let xs: Vec<f64> = ok
                .iter()
                .map(|r| if use_ratio { r.ratio } else { r.difference }.expect("successful record has a value"))
                .collect();
            let k = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / k;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
            let std_dev = var.sqrt();
            let half_width = t_critical(xs.len() - 1)? * std_dev / k.sqrt();
            Ok(SummaryRow {
                experiment: key.experiment.clone(),
                sweep_var: key.sweep_var.clone(),
                sweep_value: key.sweep_value,
                objective: key.objective.clone(),
                algorithm: key.algorithm.clone(),
                metric: if use_ratio { "ratio" } else { "difference" }.into(),
                trials: xs.len(),
                mean,
                std_dev,
                half_width,
                lower: mean - half_width,
                upper: mean + half_width,
            })
        })
        .collect()
}
