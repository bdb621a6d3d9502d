mod common;

use common::{gradient_check_instance, max_gradient_error, random_batch};
use iwv_core::iwv::{make_batch, IwvMatrix, PaddedBatch};
use iwv_core::nn::{accuracy, train, Adam, CnnConfig, CnnModel};
use iwv_core::seed::keyed_rng;
use rand::Rng;

fn small_config(dim: usize) -> CnnConfig {
    CnnConfig {
        filter_widths: vec![2, 3],
        feature_maps: 6,
        dense_units: 5,
        input_dim: dim,
        seed: 4,
        ..CnnConfig::default()
    }
}

#[test]
fn analytic_gradients_match_finite_differences() {
    let (model, batch) = gradient_check_instance();
    let err = max_gradient_error(&model, &batch, 1e-5);
    assert!(err < 1e-4, "max relative error {err}");
}

#[test]
fn gradient_check_with_padding_and_short_items() {
    // second item is shorter than the widest filter
    let model = CnnModel::init(small_config(4)).unwrap();
    let mut rng = keyed_rng(8, "short");
    let batch = random_batch(&mut rng, &[6, 2, 4], 7, 4, &[0, 1, 1]);
    let err = max_gradient_error(&model, &batch, 1e-5);
    assert!(err < 1e-4, "max relative error {err}");
}

#[test]
fn duplicated_batch_has_the_same_mean_loss() {
    let model = CnnModel::init(small_config(5)).unwrap();
    let mut rng = keyed_rng(1, "dup");
    let batch = random_batch(&mut rng, &[5, 3, 4], 6, 5, &[0, 1, 0]);
    let doubled = batch.select(&[0, 1, 2, 0, 1, 2]);
    let (a, b) = (model.loss(&batch).unwrap(), model.loss(&doubled).unwrap());
    assert!((a - b).abs() < 1e-12, "{a} vs {b}");
}

#[test]
fn zero_learning_rate_leaves_parameters_unchanged() {
    let config = CnnConfig {
        learning_rate: 0.0,
        ..small_config(5)
    };
    let mut model = CnnModel::init(config.clone()).unwrap();
    let before = model.params().clone();
    let mut rng = keyed_rng(2, "lr0");
    let batch = random_batch(&mut rng, &[5, 6], 6, 5, &[1, 0]);
    let (_, grads) = model.loss_and_grad(&batch, None).unwrap();
    Adam::new(&config).step(model.params_mut(), &grads);
    assert_eq!(model.params(), &before);
}

#[test]
fn prediction_is_invariant_to_batch_order() {
    let model = CnnModel::init(small_config(5)).unwrap();
    let mut rng = keyed_rng(3, "perm");
    let batch = random_batch(&mut rng, &[5, 3, 6, 4], 6, 5, &[0, 1, 0, 1]);
    let order = [2, 0, 3, 1];
    let forward = model.forward(&batch, None).unwrap();
    let permuted = model.forward(&batch.select(&order), None).unwrap();
    for (j, &i) in order.iter().enumerate() {
        assert_eq!(permuted[j], forward[i]);
    }
    let p = model.predict(&batch).unwrap();
    let q = model.predict(&batch.select(&order)).unwrap();
    assert_eq!(order.map(|i| p[i]).to_vec(), q);
}

#[test]
fn memorizes_twenty_random_sentences() {
    let mut rng = keyed_rng(5, "overfit");
    let dim = 16;
    let matrices: Vec<IwvMatrix> = (0..20)
        .map(|i| {
            let n = rng.gen_range(5..=9);
            let data = (0..n * dim).map(|_| rng.gen_range(-0.25..0.25)).collect();
            IwvMatrix::from_rows(dim, data, Some((i % 2) as u8)).unwrap()
        })
        .collect();
    let batch: PaddedBatch = make_batch(&matrices, 9).unwrap();
    let config = CnnConfig {
        input_dim: dim,
        feature_maps: 20,
        dense_units: 16,
        epochs: 200,
        batch_size: 10,
        patience: 0,
        seed: 1,
        ..CnnConfig::default()
    };
    let (model, history) = train(CnnModel::init(config).unwrap(), &batch).unwrap();
    assert_eq!(
        accuracy(&model, &batch).unwrap(),
        1.0,
        "final loss {:?}",
        history.epochs.last()
    );
}

#[test]
fn training_is_deterministic() {
    let mut rng = keyed_rng(6, "det");
    let batch = random_batch(&mut rng, &[5, 4, 6, 3, 5, 6], 6, 5, &[0, 1, 0, 1, 1, 0]);
    let config = CnnConfig {
        epochs: 3,
        batch_size: 4,
        ..small_config(5)
    };
    let (a, ha) = train(CnnModel::init(config.clone()).unwrap(), &batch).unwrap();
    let (b, hb) = train(CnnModel::init(config).unwrap(), &batch).unwrap();
    assert_eq!(a.params(), b.params());
    assert_eq!(ha, hb);
}
