use std::collections::BTreeMap;

use rand::seq::SliceRandom;

use super::LabeledCorpus;
use crate::error::{Error, Result};
use crate::seed::keyed_rng;

/// Assignment of every sentence to one of `k` folds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }

    /// `(train ids, test ids)` with `fold` held out. With `k = 1` the single
    /// fold is both train and test.
    pub fn split(&self, fold: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        if fold >= self.k {
            return Err(Error::config(format!("fold {fold} out of range for k = {}", self.k)));
        }
        let test: Vec<usize> = (0..self.assignments.len())
            .filter(|&i| self.assignments[i] == fold)
            .collect();
        if self.k == 1 {
            return Ok((test.clone(), test));
        }
        let train: Vec<usize> = (0..self.assignments.len())
            .filter(|&i| self.assignments[i] != fold)
            .collect();
        Ok((train, test))
    }
}

/// Stratified random partition into `k` folds: fold sizes differ by at most
/// one, and so do the per-fold counts of every class.
pub fn make_folds(corpus: &LabeledCorpus, k: usize, seed: u64) -> Result<FoldPlan> {
    if k == 0 {
        return Err(Error::config("number of folds must be positive"));
    }
    if corpus.len() < k {
        return Err(Error::data(format!(
            "{} has {} sentences, fewer than k = {k}",
            corpus.name,
            corpus.len()
        )));
    }
    if k == 1 {
        log::warn!("k = 1: training and test sets coincide");
    }
    let mut rng = keyed_rng(seed, "folds");
    let mut by_class: BTreeMap<Option<u8>, Vec<usize>> = BTreeMap::new();
    for (i, s) in corpus.sentences.iter().enumerate() {
        by_class.entry(s.label).or_default().push(i);
    }
    // Dealing the class-grouped sequence round-robin keeps both the fold
    // sizes and each class's per-fold counts within one of each other.
    let mut sequence = Vec::with_capacity(corpus.len());
    for ids in by_class.values_mut() {
        ids.shuffle(&mut rng);
        sequence.extend_from_slice(ids);
    }
    let mut fold_ids: Vec<usize> = (0..k).collect();
    fold_ids.shuffle(&mut rng);
    let mut assignments = vec![0; corpus.len()];
    for (pos, &i) in sequence.iter().enumerate() {
        assignments[i] = fold_ids[pos % k];
    }
    Ok(FoldPlan { k, assignments, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iwv::Sentence;

    fn corpus(pos: usize, neg: usize) -> LabeledCorpus {
        let sentences = (0..pos + neg)
            .map(|i| Sentence::new(vec![format!("w{i}")], Some(u8::from(i < pos))))
            .collect();
        LabeledCorpus::new("toy", sentences).unwrap()
    }

    #[test]
    fn mr_sized_folds() {
        let plan = make_folds(&corpus(5331, 5331), 10, 3).unwrap();
        let sizes = plan.fold_sizes();
        assert!(sizes.iter().all(|&s| s == 1066 || s == 1067), "{sizes:?}");
        assert_eq!(sizes.iter().sum::<usize>(), 10662);
    }

    #[test]
    fn deterministic() {
        let c = corpus(30, 17);
        assert_eq!(make_folds(&c, 10, 9).unwrap(), make_folds(&c, 10, 9).unwrap());
        assert_ne!(make_folds(&c, 10, 9).unwrap(), make_folds(&c, 10, 10).unwrap());
    }

    #[test]
    fn single_fold_is_whole_corpus() {
        let plan = make_folds(&corpus(3, 2), 1, 0).unwrap();
        let (train, test) = plan.split(0).unwrap();
        assert_eq!(test, vec![0, 1, 2, 3, 4]);
        assert_eq!(train, test);
    }

    #[test]
    fn too_small_corpus() {
        assert!(matches!(make_folds(&corpus(3, 2), 10, 0), Err(Error::Data(_))));
        assert!(matches!(make_folds(&corpus(3, 2), 0, 0), Err(Error::Config(_))));
    }

    #[test]
    fn splits_are_disjoint() {
        let plan = make_folds(&corpus(13, 8), 4, 1).unwrap();
        for f in 0..4 {
            let (train, test) = plan.split(f).unwrap();
            assert_eq!(train.len() + test.len(), 21);
            assert!(test.iter().all(|i| !train.contains(i)));
        }
    }
}
