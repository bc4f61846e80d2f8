//! Full-list recommendation: classifier picks followed by augmented topics.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{ClassifierModel, VectorizerModel};
use crate::spread::{Kgrec, SeedSet, DEFAULT_ALPHA, DEFAULT_BETA};

#[derive(Debug, Error, PartialEq)]
pub enum RecommendError {
    #[error("invalid recommender configuration: {0}")]
    InvalidConfig(String),
    #[error("expected {expected} classifier picks, got {got}")]
    PickCount { expected: usize, got: usize },
    #[error("model has no labels")]
    UntrainedModel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecommenderConfig {
    pub k: usize,
    /// Classifier picks.
    pub m: usize,
    /// Augmented picks.
    pub g: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for RecommenderConfig {
    fn default() -> Self {
        Self {
            k: 5,
            m: 3,
            g: 2,
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
        }
    }
}

impl RecommenderConfig {
    pub fn with_split(m: usize, g: usize) -> Self {
        Self {
            k: m + g,
            m,
            g,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), RecommendError> {
        if self.m == 0 || self.g == 0 {
            return Err(RecommendError::InvalidConfig("m and g must be positive".into()));
        }
        if self.k != self.m + self.g {
            return Err(RecommendError::InvalidConfig(format!(
                "k = {} but m + g = {}",
                self.k,
                self.m + self.g
            )));
        }
        if !(self.alpha > 0.0 && self.beta > 0.0) {
            return Err(RecommendError::InvalidConfig("alpha and beta must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Classifier,
    Graph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub topic: String,
    pub score: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationList {
    pub items: Vec<Recommendation>,
    /// Fewer than `g` augmented topics were available.
    pub partial: bool,
}

impl RecommendationList {
    pub fn topics(&self) -> Vec<&str> {
        self.items.iter().map(|r| r.topic.as_str()).collect()
    }
}

/// Anything that extends a topic set with related topics.
pub trait Augmenter: Sync {
    /// Up to `k` topics related to `seeds`, never returning a seed or an
    /// `exclude` entry, best first.
    fn augment_topics(
        &self,
        seeds: &[(String, f64)],
        k: usize,
        exclude: &BTreeSet<String>,
    ) -> Vec<(String, f64)>;
}

impl Augmenter for Kgrec {
    /// Seeds missing from the graph, or with zero probability, are dropped.
    fn augment_topics(
        &self,
        seeds: &[(String, f64)],
        k: usize,
        exclude: &BTreeSet<String>,
    ) -> Vec<(String, f64)> {
        let mut set = SeedSet::new();
        for (name, p) in seeds {
            if let Some(id) = self.id(name) {
                if set.insert(id, p.min(1.0)).is_err() {
                    log::debug!("dropping seed `{name}` with probability {p}");
                }
            }
        }
        let skip: BTreeSet<_> = exclude.iter().filter_map(|n| self.id(n)).collect();
        if set.is_empty() || k == 0 {
            return Vec::new();
        }
        self.augment_excluding(&set, k, &skip)
            .map(|r| {
                r.ranked
                    .into_iter()
                    .map(|(t, s)| (self.name(t).unwrap_or_default().to_string(), s))
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// Puts `picks` first and appends up to `g` augmented topics.
pub fn stack(
    picks: &[(String, f64)],
    augmenter: &dyn Augmenter,
    cfg: &RecommenderConfig,
) -> Result<RecommendationList, RecommendError> {
    cfg.validate()?;
    if picks.len() != cfg.m {
        return Err(RecommendError::PickCount {
            expected: cfg.m,
            got: picks.len(),
        });
    }
    let exclude: BTreeSet<String> = picks.iter().map(|(t, _)| t.clone()).collect();
    let extra = augmenter.augment_topics(picks, cfg.g, &exclude);
    let partial = extra.len() < cfg.g;
    let items = picks
        .iter()
        .map(|(t, p)| Recommendation {
            topic: t.clone(),
            score: *p,
            source: Source::Classifier,
        })
        .chain(extra.into_iter().take(cfg.g).map(|(t, s)| Recommendation {
            topic: t,
            score: s,
            source: Source::Graph,
        }))
        .collect();
    Ok(RecommendationList { items, partial })
}

/// Classifies `text`, then augments its top `m` labels.
pub fn recommend_full(
    text: &str,
    model: &ClassifierModel,
    vectorizer: &VectorizerModel,
    augmenter: &dyn Augmenter,
    cfg: &RecommenderConfig,
) -> Result<RecommendationList, RecommendError> {
    cfg.validate()?;
    if model.labels().is_empty() {
        return Err(RecommendError::UntrainedModel);
    }
    let picks = model.top(vectorizer, text, cfg.m);
    stack(&picks, augmenter, cfg)
}
