#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use iwv_core::harness::synthetic::{lexicon_separable, SyntheticOptions};
use iwv_core::harness::{compare_methods, run_comparison, ExperimentOptions};
use iwv_core::iwv::{FeatureConfig, PaddedBatch};
use iwv_core::nn::{CnnConfig, CnnModel};
use iwv_core::seed::keyed_rng;

/// Dense batch with uniform entries in the real rows and zero padding.
pub fn random_batch(rng: &mut ChaCha8Rng, lengths: &[usize], max_len: usize, dim: usize, labels: &[u8]) -> PaddedBatch {
    let mut data = vec![0.0; lengths.len() * max_len * dim];
    for (b, &n) in lengths.iter().enumerate() {
        for v in &mut data[b * max_len * dim..(b * max_len + n) * dim] {
            *v = rng.gen_range(-1.0..1.0);
        }
    }
    PaddedBatch::from_parts(
        max_len,
        dim,
        data,
        lengths.to_vec(),
        labels.iter().map(|&l| Some(l)).collect(),
    )
    .expect("consistent batch")
}

/// Toy instance for gradient checking: D = 8, 10 tokens, 5 maps per width.
pub fn gradient_check_instance() -> (CnnModel, PaddedBatch) {
    let config = CnnConfig {
        filter_widths: vec![3, 4, 5],
        feature_maps: 5,
        dense_units: 6,
        input_dim: 8,
        dropout_rate: 0.0,
        seed: 11,
        ..CnnConfig::default()
    };
    let model = CnnModel::init(config).expect("valid config");
    let mut rng = keyed_rng(3, "gradient-check");
    let batch = random_batch(&mut rng, &[10, 8], 10, 8, &[1, 0]);
    (model, batch)
}

/// Largest relative error between analytic and central-difference
/// gradients over every parameter entry.
pub fn max_gradient_error(model: &CnnModel, batch: &PaddedBatch, eps: f64) -> f64 {
    let (_, grads) = model.loss_and_grad(batch, None).expect("gradient");
    let analytic: Vec<f64> = grads.named().iter().flat_map(|(_, t)| t.data.iter().copied()).collect();
    let mut probe = model.clone();
    let mut worst = 0.0f64;
    let mut flat = 0;
    let tensor_count = probe.params_mut().tensors_mut().len();
    for ti in 0..tensor_count {
        let len = probe.params_mut().tensors_mut()[ti].data.len();
        for i in 0..len {
            let original = probe.params_mut().tensors_mut()[ti].data[i];
            probe.params_mut().tensors_mut()[ti].data[i] = original + eps;
            let plus = probe.loss(batch).expect("loss");
            probe.params_mut().tensors_mut()[ti].data[i] = original - eps;
            let minus = probe.loss(batch).expect("loss");
            probe.params_mut().tensors_mut()[ti].data[i] = original;
            let numeric = (plus - minus) / (2.0 * eps);
            let a = analytic[flat];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-6);
            worst = worst.max(rel);
            flat += 1;
        }
    }
    assert_eq!(flat, analytic.len());
    worst
}

/// CNN settings for the synthetic separability experiment: the default
/// architecture with a shortened training schedule.
pub fn synthetic_cnn() -> CnnConfig {
    CnnConfig {
        epochs: 10,
        ..CnnConfig::default()
    }
}

/// Base-only versus IWV on the 200-sentence lexicon-separable corpus, 3 runs
/// of 10-fold CV. Returns `(base mean, iwv mean, csv report)`.
pub fn separability_experiment(seed: u64) -> (f64, f64, String) {
    let task = lexicon_separable(&SyntheticOptions {
        seed,
        ..SyntheticOptions::default()
    })
    .expect("synthetic task");
    let options = ExperimentOptions {
        runs: 3,
        folds: 10,
        seed,
    };
    let reports = run_comparison(
        &task.corpus,
        &[FeatureConfig::word2vec(), FeatureConfig::iwv()],
        &task.stores,
        &synthetic_cnn(),
        &options,
    )
    .expect("experiment");
    let table = compare_methods(&reports).expect("table");
    let mut csv = table.to_csv().expect("csv");
    for r in &reports {
        csv.push_str(&r.detail_csv());
    }
    (reports[0].mean_accuracy, reports[1].mean_accuracy, csv)
}
