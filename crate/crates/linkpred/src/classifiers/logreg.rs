//! Logistic regression by full-batch gradient descent.
//!
//! Objective: mean negative log-likelihood plus (l2/2)·||w||², bias
//! unregularized. Descent stops at `max_epochs` or when the loss improves
//! by less than `tol`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegParams {
    pub l2: f64,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub tol: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        LogRegParams {
            l2: 1e-8,
            learning_rate: 0.1,
            max_epochs: 10_000,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^t) without overflow.
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

fn margin(weights: &[f64], bias: f64, x: &[f64]) -> f64 {
    weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + bias
}

/// Mean negative log-likelihood plus the L2 term. This is exactly the
/// function whose gradient [`objective_gradient`] returns.
pub fn objective(weights: &[f64], bias: f64, xs: &[Vec<f64>], ys: &[u8], l2: f64) -> f64 {
    let n = xs.len() as f64;
    let mut loss = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let z = margin(weights, bias, x);
        // -ln p(y | x) = y softplus(-z) + (1-y) softplus(z)
        loss += if y == 1 { softplus(-z) } else { softplus(z) };
    }
    loss / n + 0.5 * l2 * weights.iter().map(|w| w * w).sum::<f64>()
}

/// Gradient of [`objective`] in (weights, bias).
pub fn objective_gradient(
    weights: &[f64],
    bias: f64,
    xs: &[Vec<f64>],
    ys: &[u8],
    l2: f64,
) -> (Vec<f64>, f64) {
    let n = xs.len() as f64;
    let mut grad_w = vec![0.0; weights.len()];
    let mut grad_b = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let err = sigmoid(margin(weights, bias, x)) - f64::from(y);
        for (g, v) in grad_w.iter_mut().zip(x) {
            *g += err * v;
        }
        grad_b += err;
    }
    for (g, w) in grad_w.iter_mut().zip(weights) {
        *g = *g / n + l2 * w;
    }
    (grad_w, grad_b / n)
}

pub fn fit(xs: &[Vec<f64>], ys: &[u8], params: &LogRegParams) -> LogRegModel {
    let d = xs[0].len();
    let mut weights = vec![0.0; d];
    let mut bias = 0.0;
    let mut prev_loss = objective(&weights, bias, xs, ys, params.l2);
    for _ in 0..params.max_epochs {
        let (grad_w, grad_b) = objective_gradient(&weights, bias, xs, ys, params.l2);
        for (w, g) in weights.iter_mut().zip(&grad_w) {
            *w -= params.learning_rate * g;
        }
        bias -= params.learning_rate * grad_b;
        let loss = objective(&weights, bias, xs, ys, params.l2);
        if prev_loss - loss < params.tol {
            break;
        }
        prev_loss = loss;
    }
    LogRegModel { weights, bias }
}

impl LogRegModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(margin(&self.weights, self.bias, x))
    }
}
