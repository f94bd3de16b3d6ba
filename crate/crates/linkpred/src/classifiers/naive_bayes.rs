//! Gaussian naive Bayes.
//!
//! Per class and feature, a maximum-likelihood Gaussian (variance divided
//! by n, floored at `variance_floor`); priors are class frequencies.
//! Scores are normalized posteriors computed in log space. A single-class
//! training set is tolerated: the model predicts that class constantly.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbParams {
    pub variance_floor: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams {
            variance_floor: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub mean: Vec<f64>,
    pub var: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb {
    /// Class frequencies; priors[0] + priors[1] = 1.
    pub priors: [f64; 2],
    /// Per-class Gaussians; `None` when the class is absent from training.
    pub stats: [Option<ClassStats>; 2],
}

pub fn fit(xs: &[Vec<f64>], ys: &[u8], params: &NbParams) -> GaussianNb {
    let n = xs.len();
    let d = xs[0].len();
    let mut stats: [Option<ClassStats>; 2] = [None, None];
    let mut priors = [0.0f64; 2];

    for class in 0..2u8 {
        let members: Vec<&Vec<f64>> = xs
            .iter()
            .zip(ys)
            .filter(|(_, &y)| y == class)
            .map(|(x, _)| x)
            .collect();
        priors[class as usize] = members.len() as f64 / n as f64;
        if members.is_empty() {
            continue;
        }
        let m = members.len() as f64;
        let mut mean = vec![0.0; d];
        for x in &members {
            for (acc, v) in mean.iter_mut().zip(x.iter()) {
                *acc += v;
            }
        }
        for acc in mean.iter_mut() {
            *acc /= m;
        }
        let mut var = vec![0.0; d];
        for x in &members {
            for ((acc, v), mu) in var.iter_mut().zip(x.iter()).zip(mean.iter()) {
                *acc += (v - mu) * (v - mu);
            }
        }
        for acc in var.iter_mut() {
            *acc = (*acc / m).max(params.variance_floor);
        }
        stats[class as usize] = Some(ClassStats { mean, var });
    }

    GaussianNb { priors, stats }
}

impl GaussianNb {
    fn log_joint(&self, class: usize, x: &[f64]) -> f64 {
        let stats = self.stats[class].as_ref().expect("class present");
        let mut log_p = self.priors[class].ln();
        for ((v, mu), var) in x.iter().zip(&stats.mean).zip(&stats.var) {
            log_p +=
                -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (v - mu) * (v - mu) / (2.0 * var);
        }
        log_p
    }

    /// Posterior probability of class 1, normalized over both classes.
    pub fn score(&self, x: &[f64]) -> f64 {
        match (&self.stats[0], &self.stats[1]) {
            (Some(_), Some(_)) => {
                let l0 = self.log_joint(0, x);
                let l1 = self.log_joint(1, x);
                let diff = l0 - l1;
                if diff.is_nan() {
                    // Both joints underflowed to -inf (inputs astronomically
                    // far from every class); fall back to the priors.
                    return self.priors[1];
                }
                // posterior1 = e^l1 / (e^l0 + e^l1), stable via the logistic.
                1.0 / (1.0 + diff.exp())
            }
            (None, Some(_)) => 1.0,
            (Some(_), None) => 0.0,
            (None, None) => unreachable!("fit requires a non-empty dataset"),
        }
    }
}
