#![allow(dead_code)]

use kgrec_core::spread::{compute_weights, Kgrec, TopicWeights};
use kgrec_core::store::{EntityState, KnowledgeGraph, Origin, Proposer, TopicDraft, TopicId};

pub fn topic_name(i: usize) -> String {
    format!("t{i:02}")
}

/// `n` topics named `t00..`, one accepted link per edge. Parallel edges use
/// a second verb so they survive duplicate checks.
pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> (KnowledgeGraph, Vec<TopicId>) {
    let mut g = KnowledgeGraph::new("test");
    let link = g.add_relation_type("works-with", "", true).unwrap();
    let alt = g.add_relation_type("is-a", "", false).unwrap();
    let ids: Vec<TopicId> = (0..n)
        .map(|i| g.add_topic(TopicDraft::new(topic_name(i), Origin::Maintainer)).unwrap())
        .collect();
    for &(a, b) in edges {
        if a == b {
            continue;
        }
        let r = g
            .add_relationship(ids[a], link, ids[b], Proposer::Maintainer)
            .or_else(|_| g.add_relationship(ids[a], alt, ids[b], Proposer::Maintainer));
        if let Ok(r) = r {
            g.set_relationship_state(r, EntityState::Accepted).unwrap();
        }
    }
    (g, ids)
}

/// A view whose weights are overridden per topic index.
pub fn kgrec_with(g: &KnowledgeGraph, ids: &[TopicId], weights: &[f64]) -> Kgrec {
    let mut w = compute_weights(g, 0.5, 0.5).unwrap_or_else(|_| TopicWeights {
        alpha: 0.5,
        beta: 0.5,
        weights: Default::default(),
        popularity: Default::default(),
        degree_score: Default::default(),
    });
    for (i, &id) in ids.iter().enumerate() {
        if w.weights.contains_key(&id) {
            w.weights.insert(id, weights[i]);
        }
    }
    Kgrec::new(g, w)
}
