use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CnnConfig {
    pub filter_widths: Vec<usize>,
    pub feature_maps: usize,
    pub dense_units: usize,
    pub input_dim: usize,
    pub classes: usize,
    /// Drop probability applied to the pooled features while training.
    pub dropout_rate: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    /// Stop once the epoch loss has not improved by `min_delta` for this many
    /// epochs. Zero disables early stopping.
    pub patience: usize,
    pub min_delta: f64,
}

impl Default for CnnConfig {
    fn default() -> Self {
        CnnConfig {
            filter_widths: vec![3, 4, 5],
            feature_maps: 100,
            dense_units: 95,
            input_dim: 356,
            classes: 2,
            dropout_rate: 0.5,
            learning_rate: 1e-3,
            batch_size: 50,
            epochs: 20,
            seed: 0,
            patience: 5,
            min_delta: 1e-4,
        }
    }
}

impl CnnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.filter_widths.is_empty() || self.filter_widths.contains(&0) {
            return Err(Error::config(
                "filter widths must be a non-empty list of positive integers",
            ));
        }
        for (name, v) in [
            ("feature_maps", self.feature_maps),
            ("dense_units", self.dense_units),
            ("input_dim", self.input_dim),
            ("classes", self.classes),
            ("batch_size", self.batch_size),
            ("epochs", self.epochs),
        ] {
            if v == 0 {
                return Err(Error::config(format!("{name} must be positive")));
            }
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::config("dropout_rate must lie in [0, 1)"));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config("learning_rate must be a finite non-negative number"));
        }
        if self.min_delta.is_nan() || self.min_delta < 0.0 {
            return Err(Error::config("min_delta must be non-negative"));
        }
        Ok(())
    }

    pub fn max_width(&self) -> usize {
        self.filter_widths.iter().copied().max().unwrap_or(0)
    }

    /// Width of the concatenated pooled vector.
    pub fn pooled_dim(&self) -> usize {
        self.filter_widths.len() * self.feature_maps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = CnnConfig::default();
        c.validate().unwrap();
        assert_eq!(c.pooled_dim(), 300);
    }

    #[test]
    fn rejects_invalid() {
        let bad = [
            CnnConfig {
                filter_widths: vec![],
                ..Default::default()
            },
            CnnConfig {
                filter_widths: vec![3, 0],
                ..Default::default()
            },
            CnnConfig {
                feature_maps: 0,
                ..Default::default()
            },
            CnnConfig {
                dropout_rate: 1.0,
                ..Default::default()
            },
            CnnConfig {
                learning_rate: f64::NAN,
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(matches!(c.validate(), Err(Error::Config(_))), "{c:?}");
        }
    }
}
