use serde::{Deserialize, Serialize};

use super::optim::{self, LbfgsConfig};
use super::{sigmoid, softplus, SparseVec};

/// L2-regularized binary logistic loss, averaged over rows:
///
/// `(1/n) Σ ln(1 + exp(-y·(w·x + b))) + ‖w‖² / (2·C·n)`
///
/// Same minimizer as `C·Σ loss + ‖w‖²/2`. The intercept is not penalized.
/// Parameters are laid out as `[w_0 .. w_{d-1}, b]`.
pub struct LogisticObjective<'a> {
    pub rows: &'a [SparseVec],
    pub targets: &'a [bool],
    pub dim: usize,
    pub c: f64,
}

impl LogisticObjective<'_> {
    pub fn value_grad(&self, params: &[f64], grad: &mut [f64]) -> f64 {
        let (w, b) = params.split_at(self.dim);
        let b = b[0];
        let n = self.rows.len().max(1) as f64;
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut loss = 0.0;
        let mut gb = 0.0;
        for (x, &t) in self.rows.iter().zip(self.targets) {
            let z = x.dot(w) + b;
            let y = if t { 1.0 } else { -1.0 };
            loss += softplus(-y * z);
            let r = sigmoid(z) - if t { 1.0 } else { 0.0 };
            for (i, v) in x.iter() {
                grad[i as usize] += r * v;
            }
            gb += r;
        }
        let lambda = 1.0 / self.c;
        let mut reg = 0.0;
        for (g, &wi) in grad[..self.dim].iter_mut().zip(w) {
            *g = (*g + lambda * wi) / n;
            reg += wi * wi;
        }
        grad[self.dim] = gb / n;
        (loss + 0.5 * lambda * reg) / n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticLabel {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub converged: bool,
}

impl LogisticLabel {
    pub fn fit(
        rows: &[SparseVec],
        targets: &[bool],
        dim: usize,
        c: f64,
        cfg: LbfgsConfig,
    ) -> Self {
        let obj = LogisticObjective { rows, targets, dim, c };
        let m = optim::minimize(|p, g| obj.value_grad(p, g), vec![0.0; dim + 1], cfg);
        let intercept = m.x[dim];
        let mut weights = m.x;
        weights.truncate(dim);
        Self {
            weights,
            intercept,
            converged: m.converged,
        }
    }

    pub fn probability(&self, x: &SparseVec) -> f64 {
        sigmoid(x.dot(&self.weights) + self.intercept)
    }
}
