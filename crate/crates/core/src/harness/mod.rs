//! Datasets, the k-fold protocol, method comparison and experiment config.

mod config;
mod dataset;
mod experiment;
mod folds;
mod report;
pub mod synthetic;

pub use config::{ExperimentConfig, KeyValues};
pub use dataset::{load_dataset, load_pos_neg, load_split, LabeledCorpus};
pub use experiment::{run_comparison, run_experiment, EvalReport, ExperimentOptions};
pub use folds::{make_folds, FoldPlan};
pub use report::{compare_methods, ComparisonTable};
