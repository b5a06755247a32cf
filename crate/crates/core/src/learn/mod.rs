//! Outcome classifiers over region-count feature vectors, and their
//! cross-validated evaluation.

mod eval;
mod forest;
mod gbt;
mod knn;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{DatasetKind, FeatureRow, Features};
use crate::game::Outcome;

pub use eval::{evaluate, stratified_folds, EvalReport, Summary};
pub use forest::{rf_fit, RandomForest};
pub use gbt::{gbt_fit, gbt_fit_traced, softmax, GbtModel, RoundTrace};
pub use knn::{knn_classify, KnnModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub x: Features,
    pub y: Outcome,
}

impl From<&FeatureRow> for LabeledSample {
    fn from(r: &FeatureRow) -> Self {
        LabeledSample {
            x: r.features,
            y: r.label,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Knn,
    Rf,
    Gbt,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Knn, ModelKind::Rf, ModelKind::Gbt];

    /// Column heading in report tables.
    pub fn title(self) -> &'static str {
        match self {
            ModelKind::Knn => "KNN",
            ModelKind::Rf => "Random Forest",
            ModelKind::Gbt => "Gradient Boosted Trees",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Knn => "knn",
            ModelKind::Rf => "rf",
            ModelKind::Gbt => "gbt",
        })
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "knn" => Ok(ModelKind::Knn),
            "rf" | "randomforest" | "random-forest" => Ok(ModelKind::Rf),
            "gbt" | "gbm" => Ok(ModelKind::Gbt),
            _ => Err(format!("unknown model {s:?}")),
        }
    }
}

/// Hyperparameters for all three model kinds; fields not used by `kind` are
/// ignored. Deserializes with every field optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub k: usize,
    pub n_trees: usize,
    pub max_depth: usize,
    pub features_per_split: usize,
    pub n_rounds: usize,
    pub learning_rate: f64,
    pub tree_depth: usize,
    pub seed: u64,
}

pub const DEFAULT_K_DS1: usize = 31;
pub const DEFAULT_K_PER_SP: usize = 23;

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            kind: ModelKind::Knn,
            k: DEFAULT_K_PER_SP,
            n_trees: 100,
            max_depth: 12,
            features_per_split: 3,
            n_rounds: 100,
            learning_rate: 0.1,
            tree_depth: 3,
            seed: 0,
        }
    }
}

impl ModelConfig {
    pub fn new(kind: ModelKind) -> ModelConfig {
        ModelConfig {
            kind,
            ..ModelConfig::default()
        }
    }

    /// Default `k` for a dataset: 31 for DS1, 23 otherwise.
    pub fn default_k(dataset: DatasetKind) -> usize {
        match dataset {
            DatasetKind::Ds1 => DEFAULT_K_DS1,
            DatasetKind::Ds2 | DatasetKind::Ds3 => DEFAULT_K_PER_SP,
        }
    }

    pub fn validate(&self) -> Result<(), LearnError> {
        let bad = |m: &str| Err(LearnError::Config(m.to_string()));
        match self.kind {
            ModelKind::Knn if self.k == 0 => bad("k must be at least 1"),
            ModelKind::Rf if self.n_trees == 0 => bad("n_trees must be at least 1"),
            ModelKind::Rf if self.max_depth == 0 => bad("max_depth must be at least 1"),
            ModelKind::Rf if self.features_per_split == 0 || self.features_per_split > FEATURES => {
                bad("features_per_split must be in 1..=10")
            }
            ModelKind::Gbt if self.n_rounds == 0 => bad("n_rounds must be at least 1"),
            ModelKind::Gbt if self.tree_depth == 0 => bad("tree_depth must be at least 1"),
            ModelKind::Gbt if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) => {
                bad("learning_rate must be in (0, 1]")
            }
            _ => Ok(()),
        }
    }
}

const FEATURES: usize = crate::dataset::FEATURE_DIM;
const CLASSES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LearnError {
    #[error("invalid model configuration: {0}")]
    Config(String),
}

/// A fitted classifier. Immutable and shareable across threads.
#[derive(Clone, Debug)]
pub enum Model {
    Knn(KnnModel),
    Rf(RandomForest),
    Gbt(GbtModel),
}

impl Model {
    pub fn predict(&self, x: &Features) -> Outcome {
        match self {
            Model::Knn(m) => m.predict(x),
            Model::Rf(m) => m.predict(x),
            Model::Gbt(m) => m.predict(x),
        }
    }
}

pub fn fit(train: &[LabeledSample], cfg: &ModelConfig) -> Result<Model, LearnError> {
    cfg.validate()?;
    Ok(match cfg.kind {
        ModelKind::Knn => Model::Knn(KnnModel::new(train.to_vec(), cfg.k)?),
        ModelKind::Rf => Model::Rf(rf_fit(train, cfg)?),
        ModelKind::Gbt => Model::Gbt(gbt_fit(train, cfg)?),
    })
}

/// Plurality over per-class counts; ties go to the smaller class.
pub(crate) fn plurality<T: PartialOrd + Copy>(counts: &[T; CLASSES]) -> Outcome {
    let mut best = 0;
    for c in 1..CLASSES {
        if counts[c] > counts[best] {
            best = c;
        }
    }
    Outcome::ALL[best]
}

/// Rows sorted by feature vector then label, so fitting does not depend on
/// the order samples arrive in.
pub(crate) fn canonical(train: &[LabeledSample]) -> Vec<LabeledSample> {
    let mut v = train.to_vec();
    v.sort_by_key(|s| (s.x, s.y));
    v
}

fn require_nonempty(train: &[LabeledSample]) -> Result<(), LearnError> {
    if train.is_empty() {
        Err(LearnError::Config("training set is empty".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plurality_ties_to_smaller_class() {
        assert_eq!(plurality(&[2, 2, 1]), Outcome::BlackWin);
        assert_eq!(plurality(&[0, 3, 3]), Outcome::Draw);
        assert_eq!(plurality(&[0, 1, 3]), Outcome::WhiteWin);
        assert_eq!(plurality(&[0.5, 0.5, 0.5]), Outcome::BlackWin);
    }

    #[test]
    fn config_validation() {
        assert!(ModelConfig::default().validate().is_ok());
        let mut c = ModelConfig::new(ModelKind::Knn);
        c.k = 0;
        assert!(c.validate().is_err());
        let mut c = ModelConfig::new(ModelKind::Gbt);
        c.learning_rate = 0.0;
        assert!(c.validate().is_err());
        c.learning_rate = 1.0;
        assert!(c.validate().is_ok());
        let mut c = ModelConfig::new(ModelKind::Rf);
        c.features_per_split = 11;
        assert!(c.validate().is_err());
    }

    #[test]
    fn default_k_per_dataset() {
        assert_eq!(ModelConfig::default_k(DatasetKind::Ds1), 31);
        assert_eq!(ModelConfig::default_k(DatasetKind::Ds3), 23);
    }

    #[test]
    fn kind_names_parse() {
        for k in ModelKind::ALL {
            assert_eq!(k.to_string().parse::<ModelKind>().unwrap(), k);
        }
    }
}
