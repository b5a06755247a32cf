use super::tree::{fit_reg_tree, Tree};
use super::{
    canonical, plurality, require_nonempty, LabeledSample, LearnError, ModelConfig, CLASSES,
};
use crate::dataset::Features;
use crate::game::Outcome;

/// Gradient boosted trees with a softmax cross-entropy objective: one
/// additive score per class, all starting at zero.
#[derive(Clone, Debug)]
pub struct GbtModel {
    rounds: Vec<[Tree<f64>; CLASSES]>,
    learning_rate: f64,
}

/// Per-round training state: the scores the round started from and the
/// residual targets its trees were fitted to, both indexed by canonical
/// sample order.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundTrace {
    pub scores: Vec<[f64; CLASSES]>,
    pub targets: Vec<[f64; CLASSES]>,
}

pub fn softmax(z: &[f64; CLASSES]) -> [f64; CLASSES] {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: [f64; CLASSES] = std::array::from_fn(|c| (z[c] - m).exp());
    let s: f64 = e.iter().sum();
    std::array::from_fn(|c| e[c] / s)
}

pub fn gbt_fit(train: &[LabeledSample], cfg: &ModelConfig) -> Result<GbtModel, LearnError> {
    fit_inner(train, cfg, None)
}

/// As [`gbt_fit`], also returning the per-round trace and the canonically
/// sorted training set the trace refers to.
pub fn gbt_fit_traced(
    train: &[LabeledSample],
    cfg: &ModelConfig,
) -> Result<(GbtModel, Vec<LabeledSample>, Vec<RoundTrace>), LearnError> {
    let mut trace = Vec::with_capacity(cfg.n_rounds);
    let m = fit_inner(train, cfg, Some(&mut trace))?;
    Ok((m, canonical(train), trace))
}

fn fit_inner(
    train: &[LabeledSample],
    cfg: &ModelConfig,
    mut trace: Option<&mut Vec<RoundTrace>>,
) -> Result<GbtModel, LearnError> {
    require_nonempty(train)?;
    let samples = canonical(train);
    let xs: Vec<Features> = samples.iter().map(|s| s.x).collect();
    let n = samples.len();
    let mut scores = vec![[0.0; CLASSES]; n];
    let mut rounds = Vec::with_capacity(cfg.n_rounds);
    for _ in 0..cfg.n_rounds {
        let targets: Vec<[f64; CLASSES]> = samples
            .iter()
            .zip(&scores)
            .map(|(s, z)| {
                let p = softmax(z);
                std::array::from_fn(|c| (s.y.index() == c) as u8 as f64 - p[c])
            })
            .collect();
        let trees: [Tree<f64>; CLASSES] = std::array::from_fn(|c| {
            let t: Vec<f64> = targets.iter().map(|r| r[c]).collect();
            fit_reg_tree(&xs, &t, cfg.tree_depth)
        });
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(RoundTrace {
                scores: scores.clone(),
                targets,
            });
        }
        for (z, x) in scores.iter_mut().zip(&xs) {
            for c in 0..CLASSES {
                z[c] += cfg.learning_rate * trees[c].eval(x);
            }
        }
        rounds.push(trees);
    }
    Ok(GbtModel {
        rounds,
        learning_rate: cfg.learning_rate,
    })
}

impl GbtModel {
    pub fn n_rounds(&self) -> usize {
        self.rounds.len()
    }

    /// Class scores after the first `rounds` boosting rounds.
    pub fn raw_scores_at(&self, x: &Features, rounds: usize) -> [f64; CLASSES] {
        let mut z = [0.0; CLASSES];
        for trees in self.rounds.iter().take(rounds) {
            for c in 0..CLASSES {
                z[c] += self.learning_rate * trees[c].eval(x);
            }
        }
        z
    }

    pub fn raw_scores(&self, x: &Features) -> [f64; CLASSES] {
        self.raw_scores_at(x, self.rounds.len())
    }

    pub fn predict(&self, x: &Features) -> Outcome {
        plurality(&self.raw_scores(x))
    }
}
