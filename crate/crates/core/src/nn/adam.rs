use super::{CnnConfig, Params};

/// Adam with bias correction.
#[derive(Clone, Debug)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: i32,
    m: Params,
    v: Params,
}

impl Adam {
    pub fn new(config: &CnnConfig) -> Self {
        Adam {
            lr: config.learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: Params::zeros(config),
            v: Params::zeros(config),
        }
    }

    pub fn step(&mut self, params: &mut Params, grads: &Params) {
        self.step += 1;
        let bc1 = 1.0 - self.beta1.powi(self.step);
        let bc2 = 1.0 - self.beta2.powi(self.step);
        let (b1, b2, lr, eps) = (self.beta1, self.beta2, self.lr, self.eps);
        let grads = grads.named();
        for (((p, m), v), (_, g)) in params
            .tensors_mut()
            .into_iter()
            .zip(self.m.tensors_mut())
            .zip(self.v.tensors_mut())
            .zip(grads)
        {
            for i in 0..p.data.len() {
                let gi = g.data[i];
                m.data[i] = b1 * m.data[i] + (1.0 - b1) * gi;
                v.data[i] = b2 * v.data[i] + (1.0 - b2) * gi * gi;
                let m_hat = m.data[i] / bc1;
                let v_hat = v.data[i] / bc2;
                p.data[i] -= lr * m_hat / (v_hat.sqrt() + eps);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_moves_by_learning_rate() {
        // after one step the bias-corrected update is lr * sign(g)
        let cfg = CnnConfig {
            filter_widths: vec![1],
            feature_maps: 1,
            dense_units: 1,
            input_dim: 1,
            classes: 2,
            learning_rate: 0.01,
            ..CnnConfig::default()
        };
        let mut params = Params::zeros(&cfg);
        let mut grads = Params::zeros(&cfg);
        grads.output_bias.data = vec![2.0, -0.5];
        let mut adam = Adam::new(&cfg);
        adam.step(&mut params, &grads);
        assert!((params.output_bias.data[0] + 0.01).abs() < 1e-9);
        assert!((params.output_bias.data[1] - 0.01).abs() < 1e-9);
        assert_eq!(params.dense_bias.data, vec![0.0]);
    }
}
