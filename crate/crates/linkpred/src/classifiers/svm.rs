//! Linear SVM by deterministic epoch-wise subgradient descent.
//!
//! Objective: (lambda/2)·||w||² + mean hinge loss over {-1,+1} labels,
//! with lambda = 1/(C·n) and step 1/(lambda·t) at epoch t. The returned
//! weights are the averaged iterate. Probability-like scores come from a
//! post-hoc logistic calibration fitted on the training margins; raw
//! margins and calibrated scores rank identically.

use super::logreg::{self, sigmoid, LogRegParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    pub c: f64,
    pub epochs: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            epochs: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// (a, b) of score = sigmoid(a * margin + b).
    pub calibration: (f64, f64),
}

/// Hinge + L2 objective over {-1,+1} labels.
pub fn objective(weights: &[f64], bias: f64, xs: &[Vec<f64>], ys_pm: &[f64], lambda: f64) -> f64 {
    let n = xs.len() as f64;
    let mut hinge = 0.0;
    for (x, &y) in xs.iter().zip(ys_pm) {
        let m = y * (dot(weights, x) + bias);
        hinge += (1.0 - m).max(0.0);
    }
    0.5 * lambda * weights.iter().map(|w| w * w).sum::<f64>() + hinge / n
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Run the subgradient epochs, returning the averaged-iterate weights and
/// the objective of the running average after each epoch.
pub fn fit_with_trace(xs: &[Vec<f64>], ys: &[u8], params: &SvmParams) -> (Vec<f64>, f64, Vec<f64>) {
    let n = xs.len();
    let d = xs[0].len();
    let lambda = 1.0 / (params.c * n as f64);
    let ys_pm: Vec<f64> = ys
        .iter()
        .map(|&y| if y == 1 { 1.0 } else { -1.0 })
        .collect();

    let mut w = vec![0.0; d];
    let mut b = 0.0;
    let mut w_sum = vec![0.0; d];
    let mut b_sum = 0.0;
    let mut trace = Vec::with_capacity(params.epochs);

    for t in 1..=params.epochs {
        let eta = 1.0 / (lambda * t as f64);
        let mut grad_w: Vec<f64> = w.iter().map(|wi| lambda * wi).collect();
        let mut grad_b = 0.0;
        for (x, &y) in xs.iter().zip(&ys_pm) {
            if y * (dot(&w, x) + b) < 1.0 {
                for (g, xi) in grad_w.iter_mut().zip(x) {
                    *g -= y * xi / n as f64;
                }
                grad_b -= y / n as f64;
            }
        }
        for (wi, g) in w.iter_mut().zip(&grad_w) {
            *wi -= eta * g;
        }
        b -= eta * grad_b;

        for (s, wi) in w_sum.iter_mut().zip(&w) {
            *s += wi;
        }
        b_sum += b;
        let w_avg: Vec<f64> = w_sum.iter().map(|s| s / t as f64).collect();
        trace.push(objective(&w_avg, b_sum / t as f64, xs, &ys_pm, lambda));
    }

    let t = params.epochs.max(1) as f64;
    let w_avg: Vec<f64> = w_sum.iter().map(|s| s / t).collect();
    (w_avg, b_sum / t, trace)
}

pub fn fit(xs: &[Vec<f64>], ys: &[u8], params: &SvmParams) -> SvmModel {
    let (weights, bias, _) = fit_with_trace(xs, ys, params);
    // Logistic calibration on the training margins.
    let margins: Vec<Vec<f64>> = xs.iter().map(|x| vec![dot(&weights, x) + bias]).collect();
    let cal = logreg::fit(&margins, ys, &LogRegParams::default());
    SvmModel {
        weights,
        bias,
        calibration: (cal.weights[0], cal.bias),
    }
}

impl SvmModel {
    pub fn margin(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        let (a, b) = self.calibration;
        sigmoid(a * self.margin(x) + b)
    }
}
