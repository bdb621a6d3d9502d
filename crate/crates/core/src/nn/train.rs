use rand::seq::SliceRandom;

use super::{Adam, CnnModel};
use crate::error::{Error, Result};
use crate::iwv::{make_batch, IwvMatrix, PaddedBatch};
use crate::seed::keyed_rng;

/// Random-access source of labeled training items.
pub trait TrainingData {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Padded batch of the items at `indices`, in that order.
    fn batch(&self, indices: &[usize]) -> Result<PaddedBatch>;
}

impl TrainingData for PaddedBatch {
    fn len(&self) -> usize {
        PaddedBatch::len(self)
    }

    fn batch(&self, indices: &[usize]) -> Result<PaddedBatch> {
        Ok(self.select(indices))
    }
}

/// Unpadded matrices, padded to a common length one mini-batch at a time.
pub struct MatrixSet<'a> {
    pub items: Vec<&'a IwvMatrix>,
    pub max_len: usize,
}

impl TrainingData for MatrixSet<'_> {
    fn len(&self) -> usize {
        self.items.len()
    }

    fn batch(&self, indices: &[usize]) -> Result<PaddedBatch> {
        let picked: Vec<&IwvMatrix> = indices.iter().map(|&i| self.items[i]).collect();
        make_batch(&picked, self.max_len)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    /// Mean training cross-entropy (training mode, with dropout).
    pub loss: f64,
    /// Training accuracy of the in-epoch predictions.
    pub accuracy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainHistory {
    pub epochs: Vec<EpochStats>,
    pub stopped_early: bool,
    /// Fingerprint of the final parameters.
    pub snapshot_id: String,
}

/// Mini-batch Adam training. Shuffling and dropout draw from streams keyed
/// by `config.seed`, so `(seed, data, config)` fix the result.
pub fn train<D: TrainingData + ?Sized>(mut model: CnnModel, data: &D) -> Result<(CnnModel, TrainHistory)> {
    if data.is_empty() {
        return Err(Error::data("training data is empty"));
    }
    let config = model.config().clone();
    let mut shuffle_rng = keyed_rng(config.seed, "shuffle");
    let mut dropout_rng = keyed_rng(config.seed, "dropout");
    let mut adam = Adam::new(&config);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut history = Vec::with_capacity(config.epochs);
    let mut best = f64::INFINITY;
    let mut stale = 0;
    let mut stopped_early = false;

    for epoch in 1..=config.epochs {
        order.shuffle(&mut shuffle_rng);
        let mut loss_sum = 0.0;
        let mut correct = 0usize;
        for chunk in order.chunks(config.batch_size) {
            let batch = data.batch(chunk)?;
            let labels = batch.require_labels()?;
            let pass = model.batch_pass(&batch, Some(&mut dropout_rng))?;
            if !pass.loss.is_finite() {
                return Err(Error::Numerics {
                    epoch,
                    msg: format!("loss became {}", pass.loss),
                });
            }
            loss_sum += pass.loss * chunk.len() as f64;
            correct += pass
                .probs
                .iter()
                .zip(&labels)
                .filter(|(p, &y)| super::model::argmax(p) == y)
                .count();
            adam.step(model.params_mut(), &pass.grads);
        }
        if !model.params().is_finite() {
            return Err(Error::Numerics {
                epoch,
                msg: "parameters became non-finite".into(),
            });
        }
        let loss = loss_sum / data.len() as f64;
        let accuracy = correct as f64 / data.len() as f64;
        log::debug!("epoch {epoch}: loss {loss:.5} accuracy {accuracy:.4}");
        history.push(EpochStats { epoch, loss, accuracy });

        if config.patience > 0 {
            if loss < best - config.min_delta {
                best = loss;
                stale = 0;
            } else {
                stale += 1;
                if stale >= config.patience {
                    stopped_early = true;
                    break;
                }
            }
        }
    }
    let snapshot_id = model.params().fingerprint();
    Ok((
        model,
        TrainHistory {
            epochs: history,
            stopped_early,
            snapshot_id,
        },
    ))
}

/// Fraction of items whose predicted class equals the label.
pub fn accuracy<D: TrainingData + ?Sized>(model: &CnnModel, data: &D) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::data("cannot measure accuracy on an empty set"));
    }
    let indices: Vec<usize> = (0..data.len()).collect();
    let mut correct = 0usize;
    for chunk in indices.chunks(model.config().batch_size.max(1)) {
        let batch = data.batch(chunk)?;
        let labels = batch.require_labels()?;
        let predicted = model.predict(&batch)?;
        correct += predicted.iter().zip(&labels).filter(|(p, y)| p == y).count();
    }
    Ok(correct as f64 / data.len() as f64)
}
