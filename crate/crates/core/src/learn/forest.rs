use rand::Rng;

use super::tree::{fit_class_tree, Tree};
use super::{
    canonical, plurality, require_nonempty, LabeledSample, LearnError, ModelConfig, CLASSES,
};
use crate::dataset::Features;
use crate::game::Outcome;
use crate::par;
use crate::rng::unit_rng;

#[derive(Clone, Debug)]
pub struct RandomForest {
    trees: Vec<Tree<Outcome>>,
}

/// Bagged Gini trees. Tree `t` draws its bootstrap sample and per-node
/// feature subsets from the stream `(seed, t)` over the canonically sorted
/// training set, so the fit is independent of input order and thread count.
pub fn rf_fit(train: &[LabeledSample], cfg: &ModelConfig) -> Result<RandomForest, LearnError> {
    require_nonempty(train)?;
    let samples = canonical(train);
    let n = samples.len();
    let trees = par::map_range(cfg.n_trees, |t| {
        let mut rng = unit_rng(cfg.seed, &[0x7F, t as u64]);
        let idx: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        fit_class_tree(
            &samples,
            idx,
            cfg.max_depth,
            cfg.features_per_split,
            &mut rng,
        )
    });
    Ok(RandomForest { trees })
}

impl RandomForest {
    pub fn trees(&self) -> usize {
        self.trees.len()
    }

    pub fn votes(&self, x: &Features) -> [usize; CLASSES] {
        let mut v = [0; CLASSES];
        for t in &self.trees {
            v[t.eval(x).index()] += 1;
        }
        v
    }

    pub fn predict(&self, x: &Features) -> Outcome {
        plurality(&self.votes(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::ModelKind;

    #[test]
    fn single_class_training_set() {
        let train: Vec<_> = (0..30u8)
            .map(|i| LabeledSample {
                x: [i % 7; 10],
                y: Outcome::Draw,
            })
            .collect();
        let m = rf_fit(&train, &ModelConfig::new(ModelKind::Rf)).unwrap();
        assert_eq!(m.trees(), 100);
        for q in 0..20u8 {
            assert_eq!(m.predict(&[q; 10]), Outcome::Draw);
        }
    }

    #[test]
    fn empty_training_set_rejected() {
        assert!(rf_fit(&[], &ModelConfig::new(ModelKind::Rf)).is_err());
    }
}
