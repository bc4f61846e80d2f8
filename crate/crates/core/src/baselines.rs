//! TopFilter: item-based collaborative filtering over a project-topic matrix.
//!
//! A query's topic set is compared with every project's; the most similar
//! projects vote for their own topics, weighted by similarity.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::RepositoryRecord;
use crate::recommend::Augmenter;
use crate::Execution;

pub const DEFAULT_NEIGHBORHOOD: usize = 25;

#[derive(Debug, Error, PartialEq)]
pub enum BaselineError {
    #[error("unknown project `{0}`")]
    UnknownProject(String),
    #[error("project `{0}` has no topics")]
    EmptyProject(String),
    #[error("query topic set is empty")]
    EmptyQuery,
    #[error("k must be positive")]
    InvalidK,
}

/// Binary project-topic membership, stored row-wise as sorted topic columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectTopicMatrix {
    projects: Vec<String>,
    topics: Vec<String>,
    rows: Vec<Vec<u32>>,
    topic_index: HashMap<String, u32>,
    project_index: HashMap<String, usize>,
    /// column → rows containing it
    postings: Vec<Vec<u32>>,
}

impl ProjectTopicMatrix {
    pub fn from_records(records: &[RepositoryRecord]) -> Result<Self, BaselineError> {
        let topics: BTreeSet<&str> = records
            .iter()
            .flat_map(|r| r.topics.iter().map(String::as_str))
            .collect();
        let topics: Vec<String> = topics.into_iter().map(str::to_string).collect();
        let topic_index: HashMap<String, u32> = topics
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        let mut rows = Vec::with_capacity(records.len());
        let mut postings = vec![Vec::new(); topics.len()];
        let mut project_index = HashMap::new();
        for (p, r) in records.iter().enumerate() {
            if r.topics.is_empty() {
                return Err(BaselineError::EmptyProject(r.id.clone()));
            }
            let cols: BTreeSet<u32> = r.topics.iter().map(|t| topic_index[t]).collect();
            for &c in &cols {
                postings[c as usize].push(p as u32);
            }
            rows.push(cols.into_iter().collect());
            project_index.entry(r.id.clone()).or_insert(p);
        }
        Ok(Self {
            projects: records.iter().map(|r| r.id.clone()).collect(),
            topics,
            rows,
            topic_index,
            project_index,
            postings,
        })
    }

    pub fn projects(&self) -> &[String] {
        &self.projects
    }

    pub fn topics(&self) -> &[String] {
        &self.topics
    }

    pub fn row(&self, project: &str) -> Option<BTreeSet<&str>> {
        let &p = self.project_index.get(project)?;
        Some(self.rows[p].iter().map(|&c| self.topics[c as usize].as_str()).collect())
    }

    pub fn cell(&self, project: &str, topic: &str) -> bool {
        match (self.project_index.get(project), self.topic_index.get(topic)) {
            (Some(&p), Some(c)) => self.rows[p].binary_search(c).is_ok(),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Similarity {
    #[default]
    Cosine,
    Jaccard,
}

impl Similarity {
    /// Similarity of two binary vectors from their sizes and overlap.
    pub fn of(self, a: usize, b: usize, common: usize) -> f64 {
        if common == 0 {
            return 0.0;
        }
        match self {
            Similarity::Cosine => common as f64 / ((a * b) as f64).sqrt(),
            Similarity::Jaccard => common as f64 / (a + b - common) as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopFilterResult {
    pub ranked: Vec<(String, f64)>,
    /// Projects that contributed candidates, most similar first.
    pub neighbors: Vec<(String, f64)>,
    pub failed: bool,
}

#[derive(Debug, Clone)]
pub struct TopFilter {
    matrix: ProjectTopicMatrix,
    pub neighborhood: usize,
    pub similarity: Similarity,
}

impl TopFilter {
    pub fn new(matrix: ProjectTopicMatrix) -> Self {
        Self {
            matrix,
            neighborhood: DEFAULT_NEIGHBORHOOD,
            similarity: Similarity::Cosine,
        }
    }

    pub fn matrix(&self) -> &ProjectTopicMatrix {
        &self.matrix
    }

    /// Recommends for an arbitrary topic set; `skip` drops one matrix row
    /// from the neighbor search.
    fn query(
        &self,
        topics: &BTreeSet<&str>,
        k: usize,
        skip: Option<usize>,
        exclude: &BTreeSet<String>,
    ) -> TopFilterResult {
        let m = &self.matrix;
        let mut overlap: BTreeMap<u32, usize> = BTreeMap::new();
        for t in topics {
            if let Some(&c) = m.topic_index.get(*t) {
                for &p in &m.postings[c as usize] {
                    *overlap.entry(p).or_default() += 1;
                }
            }
        }
        let mut neighbors: Vec<(usize, f64)> = overlap
            .into_iter()
            .filter(|&(p, _)| Some(p as usize) != skip)
            .map(|(p, common)| {
                let p = p as usize;
                (p, self.similarity.of(topics.len(), m.rows[p].len(), common))
            })
            .filter(|&(_, s)| s > 0.0)
            .collect();
        neighbors.sort_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then_with(|| m.projects[a.0].cmp(&m.projects[b.0]))
        });
        neighbors.truncate(self.neighborhood);

        let mut scores: BTreeMap<&str, f64> = BTreeMap::new();
        for &(p, s) in &neighbors {
            for &c in &m.rows[p] {
                let t = m.topics[c as usize].as_str();
                if topics.contains(t) || exclude.contains(t) {
                    continue;
                }
                *scores.entry(t).or_insert(0.0) += s;
            }
        }
        let mut ranked: Vec<(String, f64)> =
            scores.into_iter().map(|(t, s)| (t.to_string(), s)).collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(k);
        TopFilterResult {
            failed: ranked.is_empty(),
            ranked,
            neighbors: neighbors
                .into_iter()
                .map(|(p, s)| (m.projects[p].clone(), s))
                .collect(),
        }
    }

    pub fn recommend_for_topics<'a>(
        &self,
        topics: impl IntoIterator<Item = &'a str>,
        k: usize,
    ) -> Result<TopFilterResult, BaselineError> {
        if k == 0 {
            return Err(BaselineError::InvalidK);
        }
        let set: BTreeSet<&str> = topics.into_iter().collect();
        if set.is_empty() {
            return Err(BaselineError::EmptyQuery);
        }
        Ok(self.query(&set, k, None, &BTreeSet::new()))
    }

    /// Recommends for a project already in the matrix, ignoring its own row.
    pub fn recommend_for_project(&self, project: &str, k: usize) -> Result<TopFilterResult, BaselineError> {
        if k == 0 {
            return Err(BaselineError::InvalidK);
        }
        let &p = self
            .matrix
            .project_index
            .get(project)
            .ok_or_else(|| BaselineError::UnknownProject(project.to_string()))?;
        let set: BTreeSet<&str> = self.matrix.rows[p]
            .iter()
            .map(|&c| self.matrix.topics[c as usize].as_str())
            .collect();
        Ok(self.query(&set, k, Some(p), &BTreeSet::new()))
    }

    pub fn recommend_batch(
        &self,
        queries: &[Vec<String>],
        k: usize,
        exec: Execution,
    ) -> Vec<Result<TopFilterResult, BaselineError>> {
        exec.map(queries, |q| self.recommend_for_topics(q.iter().map(String::as_str), k))
    }
}

impl Augmenter for TopFilter {
    fn augment_topics(
        &self,
        seeds: &[(String, f64)],
        k: usize,
        exclude: &BTreeSet<String>,
    ) -> Vec<(String, f64)> {
        let set: BTreeSet<&str> = seeds.iter().map(|(t, _)| t.as_str()).collect();
        if set.is_empty() || k == 0 {
            return Vec::new();
        }
        self.query(&set, k, None, exclude).ranked
    }
}
