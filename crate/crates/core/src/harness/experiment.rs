use std::fmt::Write as _;

use super::{make_folds, LabeledCorpus};
use crate::error::{Error, Result};
use crate::iwv::{FeatureConfig, FeatureExtractor, FeatureStores, IwvMatrix};
use crate::nn::{accuracy, train, CnnConfig, CnnModel, MatrixSet};
use crate::seed::derive_seed;

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOptions {
    pub runs: usize,
    pub folds: usize,
    pub seed: u64,
}

impl Default for ExperimentOptions {
    fn default() -> Self {
        ExperimentOptions {
            runs: 3,
            folds: 10,
            seed: 0,
        }
    }
}

/// Accuracies of one feature configuration on one dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub method: String,
    pub dataset: String,
    pub dim: usize,
    pub runs: usize,
    /// Per run, the accuracy of every held-out fold (one entry per run for a
    /// predefined split).
    pub fold_accuracies: Vec<Vec<f64>>,
    pub mean_accuracy: f64,
}

impl EvalReport {
    pub fn new(method: &str, dataset: &str, dim: usize, fold_accuracies: Vec<Vec<f64>>) -> Self {
        let all: Vec<f64> = fold_accuracies.iter().flatten().copied().collect();
        let mean_accuracy = all.iter().sum::<f64>() / all.len().max(1) as f64;
        EvalReport {
            method: method.to_owned(),
            dataset: dataset.to_owned(),
            dim,
            runs: fold_accuracies.len(),
            fold_accuracies,
            mean_accuracy,
        }
    }

    /// One CSV line per (run, fold) with full-precision accuracies.
    pub fn detail_csv(&self) -> String {
        let mut out = String::from("method,dataset,dim,run,fold,accuracy\n");
        for (r, folds) in self.fold_accuracies.iter().enumerate() {
            for (f, acc) in folds.iter().enumerate() {
                writeln!(out, "{},{},{},{r},{f},{acc:?}", self.method, self.dataset, self.dim).unwrap();
            }
        }
        out
    }
}

/// Evaluate one feature configuration.
pub fn run_experiment(
    corpus: &LabeledCorpus,
    features: &FeatureConfig,
    stores: &FeatureStores,
    cnn: &CnnConfig,
    options: &ExperimentOptions,
) -> Result<EvalReport> {
    Ok(run_comparison(corpus, std::slice::from_ref(features), stores, cnn, options)?.remove(0))
}

/// Evaluate several feature configurations on identical folds and training
/// seeds, so per-fold differences between methods are paired.
pub fn run_comparison(
    corpus: &LabeledCorpus,
    methods: &[FeatureConfig],
    stores: &FeatureStores,
    cnn: &CnnConfig,
    options: &ExperimentOptions,
) -> Result<Vec<EvalReport>> {
    if options.runs == 0 {
        return Err(Error::config("runs must be positive"));
    }
    if corpus.is_empty() {
        return Err(Error::data(format!("{} is empty", corpus.name)));
    }
    let mut reports = Vec::with_capacity(methods.len());
    for method in methods {
        let extractor = FeatureExtractor::new(stores, method.clone())?;
        let matrices = corpus
            .sentences
            .iter()
            .enumerate()
            .map(|(i, s)| {
                extractor
                    .build(s)
                    .map_err(|e| e.context(format!("{} sentence {i}", corpus.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        let config = CnnConfig {
            input_dim: extractor.dim(),
            ..cnn.clone()
        };
        let mut per_run = Vec::with_capacity(options.runs);
        for run in 0..options.runs {
            let splits = match &corpus.predefined_split {
                Some((train, test)) => vec![(train.clone(), test.clone())],
                None => {
                    let plan = make_folds(
                        corpus,
                        options.folds,
                        derive_seed(options.seed, &format!("folds/{run}")),
                    )?;
                    (0..plan.k).map(|f| plan.split(f)).collect::<Result<Vec<_>>>()?
                }
            };
            let mut accs = Vec::with_capacity(splits.len());
            for (fold, (train_ids, test_ids)) in splits.iter().enumerate() {
                let ctx = format!("{} {} run {run} fold {fold}", method.label, corpus.name);
                let seed = derive_seed(options.seed, &format!("train/{run}/{fold}"));
                let acc = evaluate_fold(&matrices, train_ids, test_ids, &config, seed, options.folds == 1)
                    .map_err(|e| e.context(&ctx))?;
                log::info!("{ctx}: accuracy {:.4}", acc);
                accs.push(acc);
            }
            per_run.push(accs);
        }
        reports.push(EvalReport::new(&method.label, &corpus.name, extractor.dim(), per_run));
    }
    Ok(reports)
}

fn evaluate_fold(
    matrices: &[IwvMatrix],
    train_ids: &[usize],
    test_ids: &[usize],
    config: &CnnConfig,
    seed: u64,
    allow_overlap: bool,
) -> Result<f64> {
    if !allow_overlap {
        let mut in_train = vec![false; matrices.len()];
        for &i in train_ids {
            in_train[i] = true;
        }
        if test_ids.iter().any(|&i| in_train[i]) {
            return Err(Error::data("train and test folds overlap"));
        }
    }
    if train_ids.is_empty() || test_ids.is_empty() {
        return Err(Error::data("empty train or test split"));
    }
    let max_len = train_ids
        .iter()
        .map(|&i| matrices[i].rows())
        .max()
        .unwrap_or(0)
        .max(config.max_width());
    let train_set = MatrixSet {
        items: train_ids.iter().map(|&i| &matrices[i]).collect(),
        max_len,
    };
    let test_set = MatrixSet {
        items: test_ids.iter().map(|&i| &matrices[i]).collect(),
        max_len,
    };
    let model = CnnModel::init(CnnConfig { seed, ..config.clone() })?;
    let (model, _) = train(model, &train_set)?;
    accuracy(&model, &test_set)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_over_all_folds_and_runs() {
        let r = EvalReport::new("IWV", "MR", 356, vec![vec![0.5, 0.7], vec![0.9, 0.8]]);
        assert_eq!(r.runs, 2);
        assert!((r.mean_accuracy - 0.725).abs() < 1e-12);
        assert!(r.detail_csv().contains("IWV,MR,356,1,0,0.9\n"));
    }
}
