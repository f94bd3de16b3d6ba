//! One-hidden-layer perceptron trained by backpropagation.
//!
//! Sigmoid activations throughout, squared error on the sigmoid output by
//! default (cross-entropy selectable), per-sample stochastic gradient
//! descent with classical momentum, a fixed epoch count, and seeded
//! uniform weight initialization in [-0.5, 0.5]. The visit order is
//! reshuffled each epoch from the same seeded stream, so training is
//! bit-for-bit reproducible.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::logreg::sigmoid;

/// Training objective on the sigmoid output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MlpLoss {
    /// (output - y)^2 / 2, the classical backpropagation formulation.
    #[default]
    SquaredError,
    /// -[y ln(output) + (1 - y) ln(1 - output)].
    CrossEntropy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlpParams {
    /// Hidden layer width; `None` means ceil((n_features + 2) / 2), the
    /// classic (attributes + classes) / 2 sizing.
    pub hidden_units: Option<usize>,
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs: usize,
    pub loss: MlpLoss,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden_units: None,
            learning_rate: 0.3,
            momentum: 0.2,
            epochs: 500,
            loss: MlpLoss::SquaredError,
        }
    }
}

impl MlpParams {
    pub fn resolve_hidden(&self, n_features: usize) -> usize {
        self.hidden_units
            .unwrap_or_else(|| (n_features + 2).div_ceil(2))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    /// `w1[j]` are the input weights of hidden unit j.
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

/// Gradient of the per-sample loss, same shape as the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpGradient {
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

impl MlpModel {
    fn hidden_activations(&self, x: &[f64]) -> Vec<f64> {
        self.w1
            .iter()
            .zip(&self.b1)
            .map(|(w, b)| sigmoid(w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>() + b))
            .collect()
    }

    /// Network output in (0, 1).
    pub fn forward(&self, x: &[f64]) -> f64 {
        let hidden = self.hidden_activations(x);
        sigmoid(self.w2.iter().zip(&hidden).map(|(w, a)| w * a).sum::<f64>() + self.b2)
    }

    /// Per-sample loss under the given objective.
    pub fn sample_loss(&self, x: &[f64], y: f64, loss: MlpLoss) -> f64 {
        let hidden = self.hidden_activations(x);
        let z2 = self.w2.iter().zip(&hidden).map(|(w, a)| w * a).sum::<f64>() + self.b2;
        match loss {
            MlpLoss::SquaredError => {
                let o = sigmoid(z2);
                0.5 * (o - y) * (o - y)
            }
            // Stable form of the cross-entropy of sigmoid(z2).
            MlpLoss::CrossEntropy => {
                let softplus = |t: f64| t.max(0.0) + (-t.abs()).exp().ln_1p();
                y * softplus(-z2) + (1.0 - y) * softplus(z2)
            }
        }
    }

    /// Analytic gradient of [`sample_loss`] in every parameter.
    pub fn sample_gradient(&self, x: &[f64], y: f64, loss: MlpLoss) -> MlpGradient {
        let hidden = self.hidden_activations(x);
        let o = sigmoid(self.w2.iter().zip(&hidden).map(|(w, a)| w * a).sum::<f64>() + self.b2);
        let delta_out = match loss {
            MlpLoss::SquaredError => (o - y) * o * (1.0 - o),
            MlpLoss::CrossEntropy => o - y,
        };
        let gw2: Vec<f64> = hidden.iter().map(|a| delta_out * a).collect();
        let gb2 = delta_out;
        let mut gw1 = Vec::with_capacity(self.w1.len());
        let mut gb1 = Vec::with_capacity(self.w1.len());
        for (j, a) in hidden.iter().enumerate() {
            let delta_j = delta_out * self.w2[j] * a * (1.0 - a);
            gw1.push(x.iter().map(|xi| delta_j * xi).collect());
            gb1.push(delta_j);
        }
        MlpGradient {
            w1: gw1,
            b1: gb1,
            w2: gw2,
            b2: gb2,
        }
    }
}

pub fn fit(xs: &[Vec<f64>], ys: &[u8], params: &MlpParams, seed: u64) -> MlpModel {
    let d = xs[0].len();
    let h = params.resolve_hidden(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut init = || rng.gen::<f64>() - 0.5;
    let mut model = MlpModel {
        w1: (0..h).map(|_| (0..d).map(|_| init()).collect()).collect(),
        b1: (0..h).map(|_| init()).collect(),
        w2: (0..h).map(|_| init()).collect(),
        b2: init(),
    };

    let mut vel_w1 = vec![vec![0.0; d]; h];
    let mut vel_b1 = vec![0.0; h];
    let mut vel_w2 = vec![0.0; h];
    let mut vel_b2 = 0.0;

    let mut order: Vec<usize> = (0..xs.len()).collect();
    let (lr, mu) = (params.learning_rate, params.momentum);
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let g = model.sample_gradient(&xs[i], f64::from(ys[i]), params.loss);
            for j in 0..h {
                #[allow(clippy::needless_range_loop)] // lockstep across four buffers
                for k in 0..d {
                    vel_w1[j][k] = mu * vel_w1[j][k] - lr * g.w1[j][k];
                    model.w1[j][k] += vel_w1[j][k];
                }
                vel_b1[j] = mu * vel_b1[j] - lr * g.b1[j];
                model.b1[j] += vel_b1[j];
                vel_w2[j] = mu * vel_w2[j] - lr * g.w2[j];
                model.w2[j] += vel_w2[j];
            }
            vel_b2 = mu * vel_b2 - lr * g.b2;
            model.b2 += vel_b2;
        }
    }
    model
}
