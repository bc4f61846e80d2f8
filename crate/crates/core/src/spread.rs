//! Topic augmentation by one-hop spreading activation over the weighted graph.
//!
//! Every accepted topic gets a weight mixing its community popularity and its
//! degree in the graph, both log-scaled against the graph maximum:
//!
//! ```text
//! P_t = ln(n_t + 1) / max_i ln(n_i + 1)
//! D_t = ln(d_t + 1) / max_i ln(d_i + 1)
//! W_t = alpha * P_t + beta * D_t,      alpha + beta = 1
//! ```
//!
//! Seed topics carry a relevance probability. A candidate one hop away from
//! the seeds scores `W_t` times the summed probability of the seeds it is
//! adjacent to. Relation types play no part.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::store::{Adjacency, EntityState, KnowledgeGraph, TopicId};

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_BETA: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpreadError {
    #[error("invalid coefficients alpha={alpha}, beta={beta}: both must be >= 0 and sum to 1")]
    InvalidCoefficients { alpha: f64, beta: f64 },
    #[error("the graph has no accepted topics")]
    EmptyGraph,
    #[error("seed topic `{0}` is unknown or not accepted")]
    UnknownSeedTopic(String),
    #[error("seed probability {0} is outside (0, 1]")]
    InvalidProbability(f64),
    #[error("k must be at least 1")]
    InvalidK,
}

pub type Result<T, E = SpreadError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicWeights {
    pub alpha: f64,
    pub beta: f64,
    pub weights: BTreeMap<TopicId, f64>,
    pub popularity: BTreeMap<TopicId, f64>,
    pub degree_score: BTreeMap<TopicId, f64>,
}

impl TopicWeights {
    pub fn weight(&self, t: TopicId) -> f64 {
        self.weights.get(&t).copied().unwrap_or(0.0)
    }
}

fn log_scaled(counts: &BTreeMap<TopicId, u64>) -> BTreeMap<TopicId, f64> {
    let max = counts
        .values()
        .map(|&c| (c as f64).ln_1p())
        .fold(0.0, f64::max);
    counts
        .iter()
        .map(|(&t, &c)| {
            let s = if max > 0.0 { (c as f64).ln_1p() / max } else { 0.0 };
            (t, s)
        })
        .collect()
}

/// Weights every accepted topic from its popularity count and its degree.
pub fn compute_weights(graph: &KnowledgeGraph, alpha: f64, beta: f64) -> Result<TopicWeights> {
    let valid = alpha.is_finite()
        && beta.is_finite()
        && alpha >= 0.0
        && beta >= 0.0
        && (alpha + beta - 1.0).abs() <= 1e-9;
    if !valid {
        return Err(SpreadError::InvalidCoefficients { alpha, beta });
    }
    let adjacency = graph.adjacency();
    let accepted: Vec<_> = graph
        .topics()
        .filter(|t| t.state == EntityState::Accepted)
        .collect();
    if accepted.is_empty() {
        return Err(SpreadError::EmptyGraph);
    }
    let popularity = log_scaled(
        &accepted
            .iter()
            .map(|t| (t.id, t.popularity_count))
            .collect(),
    );
    let degree_score = log_scaled(
        &accepted
            .iter()
            .map(|t| (t.id, adjacency.degree(t.id) as u64))
            .collect(),
    );
    let weights = popularity
        .iter()
        .map(|(&t, &p)| (t, alpha * p + beta * degree_score[&t]))
        .collect();
    Ok(TopicWeights {
        alpha,
        beta,
        weights,
        popularity,
        degree_score,
    })
}

/// Writes `full_name<TAB>W_t` lines, sorted by name.
pub fn write_weight_table<W: Write>(
    out: &mut W,
    graph: &KnowledgeGraph,
    weights: &TopicWeights,
) -> std::io::Result<()> {
    let mut rows: Vec<(&str, f64)> = weights
        .weights
        .iter()
        .filter_map(|(&t, &w)| graph.topic(t).ok().map(|t| (t.full_name.as_str(), w)))
        .collect();
    rows.sort_by(|a, b| a.0.cmp(b.0));
    for (name, w) in rows {
        writeln!(out, "{name}\t{w:.6}")?;
    }
    Ok(())
}

/// Seed topics with their relevance probabilities.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeedSet {
    entries: BTreeMap<TopicId, f64>,
}

impl SeedSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Seeds every topic with probability 1.
    pub fn certain(topics: impl IntoIterator<Item = TopicId>) -> Self {
        Self {
            entries: topics.into_iter().map(|t| (t, 1.0)).collect(),
        }
    }

    pub fn insert(&mut self, topic: TopicId, probability: f64) -> Result<()> {
        if !(probability > 0.0 && probability <= 1.0) {
            return Err(SpreadError::InvalidProbability(probability));
        }
        self.entries.insert(topic, probability);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (TopicId, f64)> + '_ {
        self.entries.iter().map(|(&t, &p)| (t, p))
    }

    pub fn contains(&self, t: TopicId) -> bool {
        self.entries.contains_key(&t)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationResult {
    pub ranked: Vec<(TopicId, f64)>,
    pub failed: bool,
}

/// The weighted graph view that answers augmentation queries.
///
/// Owns copies of everything it reads so it can be shared across threads
/// while the source graph keeps changing.
#[derive(Debug, Clone)]
pub struct Kgrec {
    adjacency: Adjacency,
    weights: TopicWeights,
    names: BTreeMap<TopicId, String>,
    ids: BTreeMap<String, TopicId>,
}

impl Kgrec {
    pub fn new(graph: &KnowledgeGraph, weights: TopicWeights) -> Self {
        let names: BTreeMap<TopicId, String> = graph
            .topics()
            .filter(|t| t.state == EntityState::Accepted)
            .map(|t| (t.id, t.full_name.clone()))
            .collect();
        let ids = names.iter().map(|(&id, n)| (n.clone(), id)).collect();
        Self {
            adjacency: graph.adjacency(),
            weights,
            names,
            ids,
        }
    }

    /// Weights with the given coefficients, then builds the view.
    pub fn from_graph(graph: &KnowledgeGraph, alpha: f64, beta: f64) -> Result<Self> {
        Ok(Self::new(graph, compute_weights(graph, alpha, beta)?))
    }

    pub fn weights(&self) -> &TopicWeights {
        &self.weights
    }

    pub fn name(&self, t: TopicId) -> Option<&str> {
        self.names.get(&t).map(String::as_str)
    }

    /// Id of an accepted topic.
    pub fn id(&self, name: &str) -> Option<TopicId> {
        self.ids.get(&name.to_lowercase()).copied()
    }

    /// Builds a seed set from names; unknown or unaccepted names are an error.
    pub fn seed_from_names<'a>(
        &self,
        seeds: impl IntoIterator<Item = (&'a str, f64)>,
    ) -> Result<SeedSet> {
        let mut set = SeedSet::new();
        for (name, p) in seeds {
            let id = self
                .id(name)
                .ok_or_else(|| SpreadError::UnknownSeedTopic(name.to_string()))?;
            set.insert(id, p)?;
        }
        Ok(set)
    }

    pub fn augment(&self, seed: &SeedSet, k: usize) -> Result<AugmentationResult> {
        self.augment_excluding(seed, k, &BTreeSet::new())
    }

    /// Like [`Self::augment`], additionally skipping `exclude` as candidates.
    pub fn augment_excluding(
        &self,
        seed: &SeedSet,
        k: usize,
        exclude: &BTreeSet<TopicId>,
    ) -> Result<AugmentationResult> {
        if k == 0 {
            return Err(SpreadError::InvalidK);
        }
        for (t, _) in seed.iter() {
            if !self.names.contains_key(&t) {
                return Err(SpreadError::UnknownSeedTopic(t.to_string()));
            }
        }
        let mut activation: BTreeMap<TopicId, f64> = BTreeMap::new();
        for (s, p) in seed.iter() {
            for n in self.adjacency.neighbors(s) {
                if seed.contains(n) || exclude.contains(&n) || !self.names.contains_key(&n) {
                    continue;
                }
                *activation.entry(n).or_insert(0.0) += p;
            }
        }
        let mut ranked: Vec<(TopicId, f64)> = activation
            .into_iter()
            .map(|(t, a)| (t, self.weights.weight(t) * a))
            .collect();
        ranked.sort_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then_with(|| self.names[&a.0].cmp(&self.names[&b.0]))
        });
        ranked.truncate(k);
        Ok(AugmentationResult {
            failed: ranked.is_empty(),
            ranked,
        })
    }

    /// Answers many independent queries.
    pub fn augment_batch(
        &self,
        seeds: &[SeedSet],
        k: usize,
        exec: Execution,
    ) -> Vec<Result<AugmentationResult>> {
        exec.map(seeds, |s| self.augment(s, k))
    }
}
