use serde::{Deserialize, Serialize};

use super::{EntityState, KnowledgeGraph, TopicDraft, TopicId};

pub const DEFAULT_REDUNDANCY_THRESHOLD: f64 = 0.80;

/// An existing topic that looks like a duplicate or alias of a draft.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Redundancy {
    pub topic: TopicId,
    pub full_name: String,
    pub similarity: f64,
    /// The name pair that produced `similarity`.
    pub draft_name: String,
    pub existing_name: String,
}

/// `1 - levenshtein(a, b) / max(len(a), len(b))`, compared case-insensitively.
pub fn name_similarity(a: &str, b: &str) -> f64 {
    let a = a.to_lowercase();
    let b = b.to_lowercase();
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - strsim::levenshtein(&a, &b) as f64 / longest as f64
}

/// Compares every name of `draft` against every name of each non-rejected topic
/// and reports topics whose best pairwise similarity reaches `threshold`.
///
/// A topic whose full name equals the draft's is still reported; callers
/// re-checking an existing topic pass it as `skip`.
pub fn detect_redundancy(
    draft: &TopicDraft,
    graph: &KnowledgeGraph,
    threshold: f64,
    skip: Option<TopicId>,
) -> Vec<Redundancy> {
    let draft_names: Vec<&str> = draft.names().collect();
    let mut hits: Vec<Redundancy> = graph
        .topics()
        .filter(|t| t.state != EntityState::Rejected && Some(t.id) != skip)
        .filter_map(|t| {
            let mut best: Option<(f64, &str, &str)> = None;
            for d in &draft_names {
                for e in t.names() {
                    let s = name_similarity(d, e);
                    if best.is_none_or(|(b, _, _)| s > b) {
                        best = Some((s, d, e));
                    }
                }
            }
            let (similarity, d, e) = best?;
            (similarity >= threshold).then(|| Redundancy {
                topic: t.id,
                full_name: t.full_name.clone(),
                similarity,
                draft_name: d.to_string(),
                existing_name: e.to_string(),
            })
        })
        .collect();
    hits.sort_by(|a, b| {
        b.similarity
            .total_cmp(&a.similarity)
            .then_with(|| a.full_name.cmp(&b.full_name))
    });
    hits
}
