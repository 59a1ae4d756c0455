use rand::distributions::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::WeightedAliasIndex;

use super::{Embedding, EmbeddingConfig, WalkCorpus, TAG_EVAL, TAG_INIT, TAG_NEGATIVE, TAG_SHUFFLE};
use crate::error::{Error, Result};
use crate::geometry::Points;
use crate::rng::stream;

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)`, i.e. `-ln sigmoid(-x)`, without overflow.
#[inline]
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Loss of one (center, context) pair with its negatives, and the gradient
/// with respect to every vector involved.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGradient {
    pub loss: f64,
    pub center: Vec<f64>,
    pub positive: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

/// `-ln σ(u·v⁺) - Σ ln σ(-u·v⁻)` and its gradient.
pub fn pair_loss_and_grad(center: &[f64], positive: &[f64], negatives: &[&[f64]]) -> PairGradient {
    let s = dot(center, positive);
    let g = sigmoid(s) - 1.0;
    let mut loss = softplus(-s);
    let mut grad_center: Vec<f64> = positive.iter().map(|v| g * v).collect();
    let grad_positive = center.iter().map(|u| g * u).collect();
    let mut grad_negatives = Vec::with_capacity(negatives.len());
    for neg in negatives {
        let s = dot(center, neg);
        let g = sigmoid(s);
        loss += softplus(s);
        for (gc, v) in grad_center.iter_mut().zip(neg.iter()) {
            *gc += g * v;
        }
        grad_negatives.push(center.iter().map(|u| g * u).collect());
    }
    PairGradient {
        loss,
        center: grad_center,
        positive: grad_positive,
        negatives: grad_negatives,
    }
}

/// Skip-gram with negative sampling over the corpus; returns the input
/// vectors. Deterministic given the seed. `epoch_losses` holds the corpus
/// loss measured after each epoch.
pub fn train_sgns(corpus: &WalkCorpus, config: &EmbeddingConfig, seed: u64) -> Result<Embedding> {
    config.validate()?;
    let (n, d) = (corpus.n, config.dimensions);
    if n == 0 || corpus.token_count() == 0 {
        return Err(Error::InvalidParameter("empty corpus".into()));
    }
    let mut init = stream(seed, &[TAG_INIT]);
    let bound = 0.5 / d as f64;
    let mut input: Vec<f64> = (0..n * d).map(|_| init.gen_range(-bound..=bound)).collect();
    let mut output = vec![0.0; n * d];
    let noise = WeightedAliasIndex::new(corpus.frequencies().iter().map(|&f| (f as f64).powf(0.75)).collect())
        .map_err(|e| Error::InvalidParameter(format!("negative sampling table: {e}")))?;

    let c = config.window;
    let pairs_per_epoch: usize = corpus
        .walks
        .iter()
        .map(|w| (0..w.len()).map(|i| i.min(c) + (w.len() - 1 - i).min(c)).sum::<usize>())
        .sum();
    let total = (pairs_per_epoch * config.epochs).max(1) as f64;
    let (lr0, lr1) = (config.learning_rate, config.min_learning_rate);

    let mut order: Vec<usize> = (0..corpus.walks.len()).collect();
    let mut neu1e = vec![0.0; d];
    let mut processed = 0usize;
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        order.shuffle(&mut stream(seed, &[TAG_SHUFFLE, epoch as u64]));
        let mut rng = stream(seed, &[TAG_NEGATIVE, epoch as u64]);
        for &w in &order {
            let walk = &corpus.walks[w];
            for (i, &center) in walk.iter().enumerate() {
                let lo = i.saturating_sub(c);
                let hi = (i + c).min(walk.len() - 1);
                for (j, &ctx) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                    if j == i {
                        continue;
                    }
                    let lr = lr0 - (lr0 - lr1) * (processed as f64 / total);
                    processed += 1;
                    let u = center * d..(center + 1) * d;
                    neu1e.iter_mut().for_each(|x| *x = 0.0);
                    for k in 0..=config.negatives {
                        let (target, label) = if k == 0 {
                            (ctx, 1.0)
                        } else {
                            let neg = noise.sample(&mut rng);
                            if neg == ctx {
                                continue;
                            }
                            (neg, 0.0)
                        };
                        let v = target * d..(target + 1) * d;
                        let s = dot(&input[u.clone()], &output[v.clone()]);
                        let g = sigmoid(s) - label;
                        for (e, o) in neu1e.iter_mut().zip(&output[v.clone()]) {
                            *e += g * o;
                        }
                        for (o, x) in output[v].iter_mut().zip(&input[u.clone()]) {
                            *o -= lr * g * x;
                        }
                    }
                    for (x, e) in input[u].iter_mut().zip(&neu1e) {
                        *x -= lr * e;
                    }
                }
            }
        }
        let mean = corpus_loss(corpus, &input, &output, config, &noise, seed);
        if !mean.is_finite() || input.iter().any(|x| !x.is_finite()) {
            return Err(Error::Divergence { epoch });
        }
        epoch_losses.push(mean);
    }
    Ok(Embedding {
        vectors: Points::new(d, input)?,
        config: config.clone(),
        epoch_losses,
    })
}

/// Mean pair loss over the whole corpus with frozen parameters. Negatives
/// come from one fixed stream, so successive epochs are scored on identical
/// samples and the values are directly comparable.
fn corpus_loss(
    corpus: &WalkCorpus,
    input: &[f64],
    output: &[f64],
    config: &EmbeddingConfig,
    noise: &WeightedAliasIndex<f64>,
    seed: u64,
) -> f64 {
    let (d, c) = (config.dimensions, config.window);
    let mut rng = stream(seed, &[TAG_EVAL]);
    let (mut sum, mut terms) = (0.0, 0usize);
    for walk in &corpus.walks {
        for (i, &center) in walk.iter().enumerate() {
            let u = &input[center * d..(center + 1) * d];
            let lo = i.saturating_sub(c);
            let hi = (i + c).min(walk.len() - 1);
            for (j, &ctx) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                if j == i {
                    continue;
                }
                sum += softplus(-dot(u, &output[ctx * d..(ctx + 1) * d]));
                for _ in 0..config.negatives {
                    let neg = noise.sample(&mut rng);
                    if neg != ctx {
                        sum += softplus(dot(u, &output[neg * d..(neg + 1) * d]));
                    }
                }
                terms += 1;
            }
        }
    }
    if terms == 0 {
        0.0
    } else {
        sum / terms as f64
    }
}
