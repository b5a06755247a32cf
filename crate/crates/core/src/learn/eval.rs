use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{fit, LabeledSample, LearnError, ModelConfig, ModelKind, CLASSES};
use crate::dataset::FeatureTable;
use crate::diag::Diagnostic;
use crate::game::Outcome;
use crate::par;
use crate::rng::{derive_seed, unit_rng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub maximum: f64,
}

impl Summary {
    /// `None` for an empty slice. The median of an even count is the mean of
    /// the two middle values.
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        Some(Summary {
            mean: v.iter().sum::<f64>() / n as f64,
            median,
            maximum: v[n - 1],
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model: ModelKind,
    pub config: ModelConfig,
    pub folds: usize,
    /// Correct predictions over all held-out rows of the table.
    pub per_table_accuracy: BTreeMap<u16, f64>,
    /// Pooled over all tables; `confusion[actual][predicted]`, classes in
    /// Black win, draw, White win order.
    pub confusion: [[u64; CLASSES]; CLASSES],
    pub summary: Option<Summary>,
    pub diagnostics: Vec<Diagnostic>,
}

impl EvalReport {
    pub fn total(&self) -> u64 {
        self.confusion.iter().flatten().sum()
    }

    pub fn pooled_accuracy(&self) -> f64 {
        let correct: u64 = (0..CLASSES).map(|c| self.confusion[c][c]).sum();
        correct as f64 / self.total().max(1) as f64
    }
}

/// Fold number for each label: rows of each class are shuffled and dealt
/// round-robin, continuing the deal across classes so fold sizes differ by
/// at most one.
pub fn stratified_folds<R: rand::Rng>(labels: &[Outcome], folds: usize, rng: &mut R) -> Vec<usize> {
    let mut assign = vec![0; labels.len()];
    let mut next = 0;
    for class in Outcome::ALL {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        members.shuffle(rng);
        for i in members {
            assign[i] = next % folds;
            next += 1;
        }
    }
    assign
}

type TableResult = Result<[[u64; CLASSES]; CLASSES], String>;

fn eval_table(key: u16, table: &FeatureTable, cfg: &ModelConfig, folds: usize) -> TableResult {
    let samples: Vec<LabeledSample> = table.rows.iter().map(LabeledSample::from).collect();
    if samples.len() < folds {
        return Err(format!("{} rows, fewer than {folds} folds", samples.len()));
    }
    let labels: Vec<Outcome> = samples.iter().map(|s| s.y).collect();
    let mut rng = unit_rng(cfg.seed, &[0xF01D, key as u64]);
    let assign = stratified_folds(&labels, folds, &mut rng);
    let mut confusion = [[0u64; CLASSES]; CLASSES];
    for fold in 0..folds {
        let (test, train): (Vec<usize>, Vec<usize>) =
            (0..samples.len()).partition(|&i| assign[i] == fold);
        let train: Vec<LabeledSample> = train.iter().map(|&i| samples[i]).collect();
        let fold_cfg = ModelConfig {
            seed: derive_seed(cfg.seed, &[key as u64, fold as u64]),
            ..cfg.clone()
        };
        let model = fit(&train, &fold_cfg).map_err(|e| format!("fold {fold}: {e}"))?;
        for i in test {
            let s = &samples[i];
            confusion[s.y.index()][model.predict(&s.x).index()] += 1;
        }
    }
    Ok(confusion)
}

/// Stratified k-fold cross-validation of `cfg` on each table independently.
/// Tables that cannot be folded, or whose folds cannot be fitted (for
/// example `k` larger than a training fold), are skipped with a diagnostic.
pub fn evaluate(
    tables: &BTreeMap<u16, FeatureTable>,
    cfg: &ModelConfig,
    folds: usize,
) -> Result<EvalReport, LearnError> {
    cfg.validate()?;
    if folds < 2 {
        return Err(LearnError::Config("folds must be at least 2".into()));
    }
    let entries: Vec<(u16, &FeatureTable)> = tables.iter().map(|(&k, t)| (k, t)).collect();
    let results = par::map(&entries, |&(key, table)| {
        (key, eval_table(key, table, cfg, folds))
    });

    let mut report = EvalReport {
        model: cfg.kind,
        config: cfg.clone(),
        folds,
        per_table_accuracy: BTreeMap::new(),
        confusion: [[0; CLASSES]; CLASSES],
        summary: None,
        diagnostics: Vec::new(),
    };
    for (key, res) in results {
        match res {
            Ok(conf) => {
                let total: u64 = conf.iter().flatten().sum();
                let correct: u64 = (0..CLASSES).map(|c| conf[c][c]).sum();
                report
                    .per_table_accuracy
                    .insert(key, correct as f64 / total as f64);
                for (row, add) in report.confusion.iter_mut().zip(&conf) {
                    for (cell, n) in row.iter_mut().zip(add) {
                        *cell += n;
                    }
                }
            }
            Err(reason) => {
                report
                    .diagnostics
                    .push(Diagnostic::new(format!("sp {key}"), None, reason))
            }
        }
    }
    let accs: Vec<f64> = report.per_table_accuracy.values().copied().collect();
    report.summary = Summary::of(&accs);
    Ok(report)
}
