//! Text classification over repository descriptions.
//!
//! [`VectorizerModel`] turns text into sparse TF-IDF rows; [`ClassifierModel`]
//! holds either one-vs-rest logistic regression or per-label multinomial
//! naive Bayes and predicts an independent probability per label.

mod bayes;
mod logistic;
mod model;
pub mod optim;
mod tfidf;

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bayes::BayesLabel;
pub use logistic::{LogisticLabel, LogisticObjective};
pub use model::{
    read_archive, write_archive, ClassifierKind, ClassifierModel, ModelArchive, TrainConfig,
    ARCHIVE_HEADER,
};
pub use tfidf::{tokenize, VectorizerModel, DEFAULT_MAX_FEATURES, DEFAULT_MAX_TOKENS};

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("label `{0}` has no positive training document")]
    LabelWithoutSupport(String),
    #[error("model has no labels")]
    UntrainedModel,
    #[error("invalid record on line {line}: {message}")]
    InvalidRecord { line: usize, message: String },
    #[error("invalid model archive: {0}")]
    InvalidArchive(String),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One repository: its preprocessed text and ground-truth topics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepositoryRecord {
    pub id: String,
    pub text: String,
    pub topics: Vec<String>,
}

impl RepositoryRecord {
    pub fn validate(&self) -> Result<(), String> {
        if self.text.trim().is_empty() {
            return Err(format!("{}: empty text", self.id));
        }
        if self.topics.is_empty() {
            return Err(format!("{}: no topics", self.id));
        }
        Ok(())
    }

    pub fn topic_set(&self) -> BTreeSet<&str> {
        self.topics.iter().map(String::as_str).collect()
    }
}

/// Reads newline-delimited records, skipping blank lines.
pub fn read_dataset(reader: impl BufRead) -> Result<Vec<RepositoryRecord>, ClassifyError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RepositoryRecord =
            serde_json::from_str(&line).map_err(|e| ClassifyError::InvalidRecord {
                line: i + 1,
                message: e.to_string(),
            })?;
        rec.validate()
            .map_err(|message| ClassifyError::InvalidRecord { line: i + 1, message })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_dataset(mut out: impl Write, records: &[RepositoryRecord]) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Sparse row with strictly increasing indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVec {
    pub indices: Vec<u32>,
    pub values: Vec<f64>,
}

impl SparseVec {
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.iter().map(|(i, v)| v * dense[i as usize]).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
pub(crate) fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}
