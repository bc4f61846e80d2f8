use serde::{Deserialize, Serialize};

use super::{sigmoid, SparseVec};

/// Binary multinomial naive Bayes for one label: token likelihoods for
/// documents with and without the label, each smoothed and summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesLabel {
    pub log_prior_pos: f64,
    pub log_prior_neg: f64,
    pub log_likelihood_pos: Vec<f64>,
    pub log_likelihood_neg: Vec<f64>,
}

fn log_likelihoods(totals: &[f64], smoothing: f64) -> Vec<f64> {
    let denom: f64 = totals.iter().sum::<f64>() + smoothing * totals.len() as f64;
    totals
        .iter()
        .map(|c| ((c + smoothing) / denom).ln())
        .collect()
}

impl BayesLabel {
    pub fn fit(rows: &[SparseVec], targets: &[bool], dim: usize, smoothing: f64) -> Self {
        let mut pos = vec![0.0; dim];
        let mut neg = vec![0.0; dim];
        let mut n_pos = 0usize;
        for (x, &t) in rows.iter().zip(targets) {
            let acc = if t {
                n_pos += 1;
                &mut pos
            } else {
                &mut neg
            };
            for (i, v) in x.iter() {
                acc[i as usize] += v;
            }
        }
        let n = rows.len() as f64;
        let n_neg = rows.len() - n_pos;
        Self {
            log_prior_pos: (n_pos as f64 / n).ln(),
            log_prior_neg: (n_neg as f64 / n).ln(),
            log_likelihood_pos: log_likelihoods(&pos, smoothing),
            log_likelihood_neg: log_likelihoods(&neg, smoothing),
        }
    }

    pub fn probability(&self, x: &SparseVec) -> f64 {
        if self.log_prior_neg == f64::NEG_INFINITY {
            return 1.0;
        }
        if self.log_prior_pos == f64::NEG_INFINITY {
            return 0.0;
        }
        let mut odds = self.log_prior_pos - self.log_prior_neg;
        for (i, v) in x.iter() {
            odds += v * (self.log_likelihood_pos[i as usize] - self.log_likelihood_neg[i as usize]);
        }
        sigmoid(odds)
    }
}
