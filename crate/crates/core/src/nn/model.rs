use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{CnnConfig, Tensor};
use crate::error::{Error, Result};
use crate::iwv::PaddedBatch;
use crate::seed::keyed_rng;

/// Every trainable tensor of the model. Gradients use the same type.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    /// Per bank, shape `(width, input_dim, feature_maps)`.
    pub conv_weights: Vec<Tensor>,
    /// Per bank, shape `(feature_maps)`.
    pub conv_biases: Vec<Tensor>,
    /// `(banks * feature_maps, dense_units)`
    pub dense_weight: Tensor,
    pub dense_bias: Tensor,
    /// `(dense_units, classes)`
    pub output_weight: Tensor,
    pub output_bias: Tensor,
}

impl Params {
    pub fn zeros(config: &CnnConfig) -> Self {
        let f = config.feature_maps;
        Params {
            conv_weights: config
                .filter_widths
                .iter()
                .map(|&w| Tensor::zeros(&[w, config.input_dim, f]))
                .collect(),
            conv_biases: config.filter_widths.iter().map(|_| Tensor::zeros(&[f])).collect(),
            dense_weight: Tensor::zeros(&[config.pooled_dim(), config.dense_units]),
            dense_bias: Tensor::zeros(&[config.dense_units]),
            output_weight: Tensor::zeros(&[config.dense_units, config.classes]),
            output_bias: Tensor::zeros(&[config.classes]),
        }
    }

    /// Tensors with stable names, in checkpoint order.
    pub fn named(&self) -> Vec<(String, &Tensor)> {
        let mut out = Vec::new();
        for (i, (w, b)) in self.conv_weights.iter().zip(&self.conv_biases).enumerate() {
            out.push((format!("conv{i}.weight"), w));
            out.push((format!("conv{i}.bias"), b));
        }
        out.push(("dense.weight".into(), &self.dense_weight));
        out.push(("dense.bias".into(), &self.dense_bias));
        out.push(("output.weight".into(), &self.output_weight));
        out.push(("output.bias".into(), &self.output_bias));
        out
    }

    /// Same order as [`Params::named`].
    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        let mut out = Vec::new();
        for (w, b) in self.conv_weights.iter_mut().zip(self.conv_biases.iter_mut()) {
            out.push(w);
            out.push(b);
        }
        out.push(&mut self.dense_weight);
        out.push(&mut self.dense_bias);
        out.push(&mut self.output_weight);
        out.push(&mut self.output_bias);
        out
    }

    pub fn is_finite(&self) -> bool {
        self.named().iter().all(|(_, t)| t.is_finite())
    }

    /// SHA-256 over every parameter's bit pattern, as lowercase hex.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        for (name, t) in self.named() {
            hasher.update(name.as_bytes());
            for x in &t.data {
                hasher.update(x.to_bits().to_le_bytes());
            }
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CnnModel {
    config: CnnConfig,
    params: Params,
}

/// Forward state for one item, kept for the backward pass.
struct ItemPass {
    /// Index of the winning position per pooled unit, `None` when the
    /// pooled value is clamped at zero by the ReLU.
    argmax: Vec<Option<usize>>,
    /// Pooled features after dropout.
    dropped: Vec<f64>,
    /// Dropout scale per pooled unit (`1/(1-p)` or 0); empty in eval mode.
    keep: Vec<f64>,
    hidden: Vec<f64>,
    probs: Vec<f64>,
}

pub(crate) struct BatchPass {
    pub loss: f64,
    pub grads: Params,
    pub probs: Vec<Vec<f64>>,
}

impl CnnModel {
    /// Glorot-uniform weights, zero biases, fully determined by `config.seed`.
    pub fn init(config: CnnConfig) -> Result<Self> {
        config.validate()?;
        let mut params = Params::zeros(&config);
        let mut rng = keyed_rng(config.seed, "init");
        let d = config.input_dim;
        let f = config.feature_maps;
        for (w, t) in config.filter_widths.iter().zip(params.conv_weights.iter_mut()) {
            glorot(&mut rng, t, w * d, w * f);
        }
        glorot(
            &mut rng,
            &mut params.dense_weight,
            config.pooled_dim(),
            config.dense_units,
        );
        glorot(&mut rng, &mut params.output_weight, config.dense_units, config.classes);
        Ok(CnnModel { config, params })
    }

    pub fn from_parts(config: CnnConfig, params: Params) -> Result<Self> {
        config.validate()?;
        let expected = Params::zeros(&config);
        for ((name, want), (_, got)) in expected.named().iter().zip(params.named()) {
            if want.shape != got.shape || got.data.len() != want.data.len() {
                return Err(Error::Shape(format!(
                    "{name}: expected shape {:?}, got {:?}",
                    want.shape, got.shape
                )));
            }
        }
        if expected.named().len() != params.named().len() {
            return Err(Error::Shape("parameter count does not match the configuration".into()));
        }
        Ok(CnnModel { config, params })
    }

    pub fn config(&self) -> &CnnConfig {
        &self.config
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut Params {
        &mut self.params
    }

    fn check_batch(&self, batch: &PaddedBatch) -> Result<()> {
        if batch.dim() != self.config.input_dim {
            return Err(Error::Shape(format!(
                "batch rows have width {}, model expects {}",
                batch.dim(),
                self.config.input_dim
            )));
        }
        if batch.max_len() < self.config.max_width() {
            return Err(Error::Shape(format!(
                "batch max_len {} is shorter than filter width {}",
                batch.max_len(),
                self.config.max_width()
            )));
        }
        Ok(())
    }

    /// Class probabilities per item. With `dropout` set the pass runs in
    /// training mode and draws fresh dropout masks from the generator.
    pub fn forward(&self, batch: &PaddedBatch, dropout: Option<&mut ChaCha8Rng>) -> Result<Vec<Vec<f64>>> {
        self.check_batch(batch)?;
        let keeps = self.dropout_masks(batch.len(), dropout);
        Ok((0..batch.len())
            .map(|b| self.forward_item(batch, b, keeps.get(b).map(Vec::as_slice)).probs)
            .collect())
    }

    /// Mean cross-entropy over the batch and its gradient.
    pub fn loss_and_grad(&self, batch: &PaddedBatch, dropout: Option<&mut ChaCha8Rng>) -> Result<(f64, Params)> {
        let pass = self.batch_pass(batch, dropout)?;
        Ok((pass.loss, pass.grads))
    }

    /// Mean cross-entropy in evaluation mode.
    pub fn loss(&self, batch: &PaddedBatch) -> Result<f64> {
        let labels = batch.require_labels()?;
        self.check_labels(&labels)?;
        let probs = self.forward(batch, None)?;
        Ok(probs
            .iter()
            .zip(&labels)
            .map(|(p, &y)| -p[y].max(f64::MIN_POSITIVE).ln())
            .sum::<f64>()
            / labels.len().max(1) as f64)
    }

    /// Argmax class per item in evaluation mode; ties go to the lower id.
    pub fn predict(&self, batch: &PaddedBatch) -> Result<Vec<usize>> {
        Ok(self.forward(batch, None)?.iter().map(|p| argmax(p)).collect())
    }

    fn check_labels(&self, labels: &[usize]) -> Result<()> {
        if let Some(bad) = labels.iter().find(|&&y| y >= self.config.classes) {
            return Err(Error::data(format!(
                "label {bad} is out of range for {} classes",
                self.config.classes
            )));
        }
        Ok(())
    }

    pub(crate) fn batch_pass(&self, batch: &PaddedBatch, dropout: Option<&mut ChaCha8Rng>) -> Result<BatchPass> {
        let labels = batch.require_labels()?;
        self.check_labels(&labels)?;
        self.check_batch(batch)?;
        let keeps = self.dropout_masks(batch.len(), dropout);
        let mut grads = Params::zeros(&self.config);
        let mut loss = 0.0;
        let mut probs = Vec::with_capacity(batch.len());
        let scale = 1.0 / batch.len().max(1) as f64;
        for (b, &y) in labels.iter().enumerate() {
            let pass = self.forward_item(batch, b, keeps.get(b).map(Vec::as_slice));
            loss -= pass.probs[y].max(f64::MIN_POSITIVE).ln();
            self.backward_item(batch, b, y, &pass, scale, &mut grads);
            probs.push(pass.probs);
        }
        Ok(BatchPass {
            loss: loss * scale,
            grads,
            probs,
        })
    }

    fn dropout_masks(&self, n: usize, rng: Option<&mut ChaCha8Rng>) -> Vec<Vec<f64>> {
        let p = self.config.dropout_rate;
        match rng {
            Some(rng) if p > 0.0 => {
                let keep = 1.0 / (1.0 - p);
                (0..n)
                    .map(|_| {
                        (0..self.config.pooled_dim())
                            .map(|_| if rng.gen::<f64>() < p { 0.0 } else { keep })
                            .collect()
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    fn forward_item(&self, batch: &PaddedBatch, b: usize, keep: Option<&[f64]>) -> ItemPass {
        let cfg = &self.config;
        let dim = cfg.input_dim;
        let maps = cfg.feature_maps;
        let x = batch.item(b);
        let len = batch.length(b);

        let mut pooled = vec![0.0; cfg.pooled_dim()];
        let mut argmax = vec![None; cfg.pooled_dim()];
        let mut z = vec![0.0; maps];
        for (bank, &width) in cfg.filter_widths.iter().enumerate() {
            let weights = &self.params.conv_weights[bank].data;
            let bias = &self.params.conv_biases[bank].data;
            let out = &mut pooled[bank * maps..(bank + 1) * maps];
            let arg = &mut argmax[bank * maps..(bank + 1) * maps];
            // windows reaching into padding are excluded (treated as -inf);
            // ReLU then max means the pooled value is floored at zero
            let positions = if len >= width { len - width + 1 } else { 0 };
            for t in 0..positions {
                z.copy_from_slice(bias);
                for k in 0..width {
                    let row = &x[(t + k) * dim..(t + k + 1) * dim];
                    let wk = &weights[k * dim * maps..(k + 1) * dim * maps];
                    for (d, &xv) in row.iter().enumerate() {
                        if xv == 0.0 {
                            continue;
                        }
                        let wrow = &wk[d * maps..(d + 1) * maps];
                        for (acc, &wv) in z.iter_mut().zip(wrow) {
                            *acc += xv * wv;
                        }
                    }
                }
                for f in 0..maps {
                    if z[f] > out[f] {
                        out[f] = z[f];
                        arg[f] = Some(t);
                    }
                }
            }
        }

        let dropped: Vec<f64> = match keep {
            Some(keep) => pooled.iter().zip(keep).map(|(p, k)| p * k).collect(),
            None => pooled,
        };

        let units = cfg.dense_units;
        let mut hidden = self.params.dense_bias.data.clone();
        let dw = &self.params.dense_weight.data;
        for (i, &v) in dropped.iter().enumerate() {
            if v == 0.0 {
                continue;
            }
            for (h, &w) in hidden.iter_mut().zip(&dw[i * units..(i + 1) * units]) {
                *h += v * w;
            }
        }
        hidden.iter_mut().for_each(|h| *h = h.max(0.0));

        let classes = cfg.classes;
        let mut logits = self.params.output_bias.data.clone();
        let ow = &self.params.output_weight.data;
        for (j, &h) in hidden.iter().enumerate() {
            for (l, &w) in logits.iter_mut().zip(&ow[j * classes..(j + 1) * classes]) {
                *l += h * w;
            }
        }
        ItemPass {
            argmax,
            dropped,
            keep: keep.map(<[f64]>::to_vec).unwrap_or_default(),
            hidden,
            probs: softmax(&logits),
        }
    }

    fn backward_item(
        &self,
        batch: &PaddedBatch,
        b: usize,
        label: usize,
        pass: &ItemPass,
        scale: f64,
        grads: &mut Params,
    ) {
        let cfg = &self.config;
        let classes = cfg.classes;
        let units = cfg.dense_units;
        let dim = cfg.input_dim;
        let maps = cfg.feature_maps;

        let mut dlogits: Vec<f64> = pass.probs.iter().map(|p| p * scale).collect();
        dlogits[label] -= scale;

        for (g, d) in grads.output_bias.data.iter_mut().zip(&dlogits) {
            *g += d;
        }
        let ow = &self.params.output_weight.data;
        let mut dhidden = vec![0.0; units];
        for j in 0..units {
            let row = &ow[j * classes..(j + 1) * classes];
            let grow = &mut grads.output_weight.data[j * classes..(j + 1) * classes];
            let h = pass.hidden[j];
            let mut acc = 0.0;
            for c in 0..classes {
                grow[c] += h * dlogits[c];
                acc += row[c] * dlogits[c];
            }
            // ReLU gate: hidden is post-activation, so zero means inactive
            dhidden[j] = if h > 0.0 { acc } else { 0.0 };
        }

        for (g, d) in grads.dense_bias.data.iter_mut().zip(&dhidden) {
            *g += d;
        }
        let dw = &self.params.dense_weight.data;
        let mut dpooled = vec![0.0; cfg.pooled_dim()];
        for (i, dp) in dpooled.iter_mut().enumerate() {
            let v = pass.dropped[i];
            let grow = &mut grads.dense_weight.data[i * units..(i + 1) * units];
            let wrow = &dw[i * units..(i + 1) * units];
            let mut acc = 0.0;
            for h in 0..units {
                grow[h] += v * dhidden[h];
                acc += wrow[h] * dhidden[h];
            }
            *dp = if pass.keep.is_empty() { acc } else { acc * pass.keep[i] };
        }

        let x = batch.item(b);
        for (bank, &width) in cfg.filter_widths.iter().enumerate() {
            let gw = &mut grads.conv_weights[bank].data;
            let gb = &mut grads.conv_biases[bank].data;
            for f in 0..maps {
                let unit = bank * maps + f;
                let Some(t) = pass.argmax[unit] else { continue };
                let g = dpooled[unit];
                if g == 0.0 {
                    continue;
                }
                gb[f] += g;
                for k in 0..width {
                    let row = &x[(t + k) * dim..(t + k + 1) * dim];
                    for (d, &xv) in row.iter().enumerate() {
                        gw[(k * dim + d) * maps + f] += xv * g;
                    }
                }
            }
        }
    }
}

fn glorot(rng: &mut ChaCha8Rng, t: &mut Tensor, fan_in: usize, fan_out: usize) {
    let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
    for x in t.data.iter_mut() {
        *x = rng.gen_range(-bound..=bound);
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.iter().map(|e| e / sum).collect()
}

pub(crate) fn argmax(p: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in p.iter().enumerate().skip(1) {
        if v > p[best] {
            best = i;
        }
    }
    best
}
