//! Train/test splitting, list-quality metrics and comparison experiments.

mod experiment;
mod judgments;
mod metrics;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use experiment::{
    augmentation_cases, full_cases, render_table, run_experiment, write_csv, ExperimentConfig,
    ExperimentReport, RelevanceSource, System, TestCase,
};
pub use judgments::{Judgment, Judgments, MIN_JUDGES};
pub use metrics::{
    asr_at_k, average_precision, fcr, map_at_k, precision_at_k, EvaluationCase,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("need at least two records to split, got {0}")]
    TooSmall(usize),
    #[error("train fraction must lie strictly between 0 and 1")]
    InvalidFraction,
    #[error("no cases to score")]
    EmptyInput,
    #[error("k must be positive")]
    InvalidK,
    #[error("recommended and relevance lists differ in length")]
    LengthMismatch,
    #[error("fewer than three judgments for `{topic}` on `{project}`")]
    MissingJudgments { project: String, topic: String },
    #[error("invalid judgment on line {line}: {message}")]
    InvalidJudgment { line: usize, message: String },
    #[error("io: {0}")]
    Io(String),
}

/// Seeded shuffle split; the train side gets `round(n * fraction)` records,
/// kept within `[1, n - 1]`.
pub fn split<T: Clone>(corpus: &[T], train_fraction: f64, seed: u64) -> Result<(Vec<T>, Vec<T>), EvalError> {
    if corpus.len() < 2 {
        return Err(EvalError::TooSmall(corpus.len()));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(EvalError::InvalidFraction);
    }
    let n = corpus.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = ((n as f64 * train_fraction).round() as usize).clamp(1, n - 1);
    let train = idx[..cut].iter().map(|&i| corpus[i].clone()).collect();
    let test = idx[cut..].iter().map(|&i| corpus[i].clone()).collect();
    Ok((train, test))
}
