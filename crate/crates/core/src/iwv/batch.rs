use std::borrow::Borrow;

use super::IwvMatrix;
use crate::error::{Error, Result};

/// Fixed-length batch: `(batch, max_len, dim)` row-major, zero rows past
/// each item's length.
#[derive(Clone, Debug, PartialEq)]
pub struct PaddedBatch {
    max_len: usize,
    dim: usize,
    data: Vec<f64>,
    lengths: Vec<usize>,
    labels: Vec<Option<u8>>,
}

impl PaddedBatch {
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// `max_len × dim` block for item `b`.
    pub fn item(&self, b: usize) -> &[f64] {
        let stride = self.max_len * self.dim;
        &self.data[b * stride..(b + 1) * stride]
    }

    /// Number of valid (unpadded) rows of item `b`.
    pub fn length(&self, b: usize) -> usize {
        self.lengths[b]
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Row-validity mask for item `b`.
    pub fn mask(&self, b: usize) -> Vec<bool> {
        (0..self.max_len).map(|t| t < self.lengths[b]).collect()
    }

    pub fn labels(&self) -> &[Option<u8>] {
        &self.labels
    }

    /// All labels, or a data error naming the first unlabeled item.
    pub fn require_labels(&self) -> Result<Vec<usize>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.map(usize::from)
                    .ok_or_else(|| Error::data(format!("batch item {i} has no label")))
            })
            .collect()
    }

    /// Build directly from a dense tensor. Rows at or beyond each length must
    /// be zero.
    pub fn from_parts(
        max_len: usize,
        dim: usize,
        data: Vec<f64>,
        lengths: Vec<usize>,
        labels: Vec<Option<u8>>,
    ) -> Result<Self> {
        if data.len() != lengths.len() * max_len * dim || labels.len() != lengths.len() {
            return Err(Error::Shape("batch tensor, lengths and labels disagree".into()));
        }
        if lengths.iter().any(|&n| n > max_len) {
            return Err(Error::Shape("item length exceeds max_len".into()));
        }
        Ok(PaddedBatch {
            max_len,
            dim,
            data,
            lengths,
            labels,
        })
    }

    /// Items selected by index, in the given order.
    pub fn select(&self, indices: &[usize]) -> PaddedBatch {
        let mut data = Vec::with_capacity(indices.len() * self.max_len * self.dim);
        for &i in indices {
            data.extend_from_slice(self.item(i));
        }
        PaddedBatch {
            max_len: self.max_len,
            dim: self.dim,
            data,
            lengths: indices.iter().map(|&i| self.lengths[i]).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

/// Truncate or zero-pad every matrix to `max_len` rows.
pub fn make_batch<M: Borrow<IwvMatrix>>(matrices: &[M], max_len: usize) -> Result<PaddedBatch> {
    if max_len == 0 {
        return Err(Error::Shape("max_len must be at least 1".into()));
    }
    let dim = matrices.first().map_or(0, |m| m.borrow().dim());
    let mut data = vec![0.0; matrices.len() * max_len * dim];
    let mut lengths = Vec::with_capacity(matrices.len());
    let mut labels = Vec::with_capacity(matrices.len());
    for (b, m) in matrices.iter().enumerate() {
        let m = m.borrow();
        if m.dim() != dim {
            return Err(Error::Shape(format!(
                "matrix {b} has width {}, expected {dim}",
                m.dim()
            )));
        }
        let n = m.rows().min(max_len);
        let start = b * max_len * dim;
        data[start..start + n * dim].copy_from_slice(&m.data()[..n * dim]);
        lengths.push(n);
        labels.push(m.label());
    }
    Ok(PaddedBatch {
        max_len,
        dim,
        data,
        lengths,
        labels,
    })
}
