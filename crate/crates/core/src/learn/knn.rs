use super::{plurality, require_nonempty, LabeledSample, LearnError, CLASSES};
use crate::dataset::Features;
use crate::game::Outcome;

fn dist2(a: &Features, b: &Features) -> u32 {
    a.iter()
        .zip(b)
        .map(|(&p, &q)| {
            let d = p as i32 - q as i32;
            (d * d) as u32
        })
        .sum()
}

/// Majority label among the `k` training samples nearest to `query`.
///
/// Squared distances are compared exactly; equal distances are ordered by
/// training-set index. Vote ties go to the smaller class.
pub fn knn_classify(
    train: &[LabeledSample],
    query: &Features,
    k: usize,
) -> Result<Outcome, LearnError> {
    check_k(train, k)?;
    Ok(vote(train, query, k))
}

fn check_k(train: &[LabeledSample], k: usize) -> Result<(), LearnError> {
    require_nonempty(train)?;
    if k == 0 {
        return Err(LearnError::Config("k must be at least 1".into()));
    }
    if k > train.len() {
        return Err(LearnError::Config(format!(
            "k = {k} exceeds the {} training samples",
            train.len()
        )));
    }
    Ok(())
}

fn vote(train: &[LabeledSample], query: &Features, k: usize) -> Outcome {
    let mut keyed: Vec<(u32, usize)> = train
        .iter()
        .enumerate()
        .map(|(i, s)| (dist2(&s.x, query), i))
        .collect();
    if k < keyed.len() {
        keyed.select_nth_unstable(k - 1);
    }
    let mut counts = [0usize; CLASSES];
    for &(_, i) in &keyed[..k] {
        counts[train[i].y.index()] += 1;
    }
    plurality(&counts)
}

/// KNN "model": the stored training set plus `k`.
#[derive(Clone, Debug)]
pub struct KnnModel {
    train: Vec<LabeledSample>,
    k: usize,
}

impl KnnModel {
    pub fn new(train: Vec<LabeledSample>, k: usize) -> Result<KnnModel, LearnError> {
        check_k(&train, k)?;
        Ok(KnnModel { train, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn predict(&self, x: &Features) -> Outcome {
        vote(&self.train, x, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: [u8; 10], y: Outcome) -> LabeledSample {
        LabeledSample { x, y }
    }

    #[test]
    fn unanimous() {
        let train: Vec<_> = (0..40)
            .map(|i| s([i as u8; 10], Outcome::WhiteWin))
            .collect();
        assert_eq!(
            knn_classify(&train, &[3; 10], 31).unwrap(),
            Outcome::WhiteWin
        );
    }

    #[test]
    fn nearest_neighbour() {
        let train = [s([0; 10], Outcome::BlackWin), s([5; 10], Outcome::WhiteWin)];
        assert_eq!(
            knn_classify(&train, &[0; 10], 1).unwrap(),
            Outcome::BlackWin
        );
    }

    #[test]
    fn distance_ties_prefer_earlier_index() {
        let train = [
            s([1, 0, 0, 0, 0, 0, 0, 0, 0, 0], Outcome::WhiteWin),
            s([0, 1, 0, 0, 0, 0, 0, 0, 0, 0], Outcome::BlackWin),
        ];
        assert_eq!(
            knn_classify(&train, &[0; 10], 1).unwrap(),
            Outcome::WhiteWin
        );
    }

    #[test]
    fn vote_tie_goes_to_smaller_class() {
        let train = [s([0; 10], Outcome::WhiteWin), s([0; 10], Outcome::Draw)];
        assert_eq!(knn_classify(&train, &[0; 10], 2).unwrap(), Outcome::Draw);
    }

    #[test]
    fn bad_k() {
        let train = [s([0; 10], Outcome::Draw)];
        assert!(knn_classify(&train, &[0; 10], 0).is_err());
        assert!(knn_classify(&train, &[0; 10], 2).is_err());
        assert!(knn_classify(&[], &[0; 10], 1).is_err());
    }
}
