//! Seeded synthetic corpora for directional experiments.
//!
//! - [`topic_world`]: a popularity-skewed topic graph and projects tagged
//!   against it, for augmentation and cold-start comparisons.
//! - [`planted_corpus`]: text whose labels are signalled by planted tokens,
//!   with a graph linking labels that are planted together.

use std::collections::BTreeSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::RepositoryRecord;
use crate::store::{EntityState, KnowledgeGraph, Origin, Proposer, TopicDraft, TopicId};

const LINK_VERB: &str = "works-with";

fn graph_with_topics(label: &str, names: &[String]) -> (KnowledgeGraph, Vec<TopicId>) {
    let mut g = KnowledgeGraph::new(label);
    g.add_relation_type(LINK_VERB, "Topics used together.", true)
        .expect("fresh graph");
    let ids = names
        .iter()
        .map(|n| {
            g.add_topic(TopicDraft::new(n.clone(), Origin::Maintainer))
                .expect("generated names are valid")
        })
        .collect();
    (g, ids)
}

fn link(g: &mut KnowledgeGraph, a: TopicId, b: TopicId) {
    let verb = g.verb_id(LINK_VERB).expect("link verb");
    if let Ok(r) = g.add_relationship(a, verb, b, Proposer::Maintainer) {
        g.set_relationship_state(r, EntityState::Accepted).expect("just added");
    }
}

#[derive(Debug, Clone)]
pub struct TopicWorldConfig {
    pub projects: usize,
    pub topics: usize,
    /// Share of topic-set sizes 1, 2, 3, 4, ...
    pub size_weights: Vec<f64>,
    pub zipf_exponent: f64,
    /// Least popular topics left without any relationship.
    pub isolated: usize,
    /// Extra random links per topic, on top of a spanning chain.
    pub extra_links: usize,
    /// Chance that a further topic is a graph neighbor of one already chosen.
    pub neighbor_bias: f64,
    /// Least popular topics that only ever tag a project on their own.
    pub solo_topics: usize,
    pub seed: u64,
}

impl Default for TopicWorldConfig {
    fn default() -> Self {
        Self {
            projects: 500,
            topics: 100,
            // mean 2.5
            size_weights: vec![0.3, 0.25, 0.2, 0.15, 0.1],
            zipf_exponent: 1.0,
            isolated: 2,
            extra_links: 2,
            neighbor_bias: 0.6,
            solo_topics: 50,
            seed: 1,
        }
    }
}

pub struct TopicWorld {
    pub graph: KnowledgeGraph,
    pub records: Vec<RepositoryRecord>,
}

/// Topics are ranked by popularity. Single-topic projects draw their topic
/// uniformly; larger projects draw an anchor from a Zipf law over the shared
/// (non-solo) topics and grow from graph neighbors or further Zipf draws.
pub fn topic_world(cfg: &TopicWorldConfig) -> TopicWorld {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let names: Vec<String> = (0..cfg.topics).map(|i| format!("topic-{i:03}")).collect();
    let (mut g, ids) = graph_with_topics("synthetic", &names);

    let isolated: BTreeSet<usize> = (cfg.topics - cfg.isolated.min(cfg.topics)..cfg.topics).collect();
    let mut linked: Vec<usize> = (0..cfg.topics).filter(|i| !isolated.contains(i)).collect();
    linked.shuffle(&mut rng);
    for w in linked.windows(2) {
        link(&mut g, ids[w[0]], ids[w[1]]);
    }
    if linked.len() > 2 {
        for &a in &linked {
            for _ in 0..cfg.extra_links {
                let b = *linked.choose(&mut rng).expect("non-empty");
                if a != b {
                    link(&mut g, ids[a], ids[b]);
                }
            }
        }
    }
    let adjacency = g.adjacency();
    let index_of = |t: TopicId| ids.iter().position(|&x| x == t).expect("known id");

    let shared = cfg.topics - cfg.solo_topics.min(cfg.topics - 1);
    let zipf = WeightedIndex::new((1..=shared).map(|r| 1.0 / (r as f64).powf(cfg.zipf_exponent)))
        .expect("positive weights");
    let sizes = WeightedIndex::new(&cfg.size_weights).expect("positive size weights");
    let mut counts = vec![0u64; cfg.topics];
    let mut records = Vec::with_capacity(cfg.projects);
    for p in 0..cfg.projects {
        let size = (sizes.sample(&mut rng) + 1).min(shared);
        let mut chosen: BTreeSet<usize> = BTreeSet::new();
        if size == 1 {
            chosen.insert(rng.gen_range(0..cfg.topics));
        } else {
            chosen.insert(zipf.sample(&mut rng));
        }
        let mut attempts = 0;
        while chosen.len() < size && attempts < 100 {
            attempts += 1;
            if rng.gen_bool(cfg.neighbor_bias) {
                let from = *chosen.iter().nth(rng.gen_range(0..chosen.len())).expect("non-empty");
                let near: Vec<usize> = adjacency
                    .neighbors(ids[from])
                    .map(index_of)
                    .filter(|&i| i < shared)
                    .collect();
                if let Some(&n) = near.choose(&mut rng) {
                    chosen.insert(n);
                    continue;
                }
            }
            chosen.insert(zipf.sample(&mut rng));
        }
        for &c in &chosen {
            counts[c] += 1;
        }
        let topics: Vec<String> = chosen.iter().map(|&c| names[c].clone()).collect();
        records.push(RepositoryRecord {
            id: format!("synthetic/project-{p:04}"),
            text: topics.join(" "),
            topics,
        });
    }
    for (i, &id) in ids.iter().enumerate() {
        g.set_popularity(id, counts[i]).expect("known topic");
    }
    TopicWorld { graph: g, records }
}

#[derive(Debug, Clone)]
pub struct PlantedConfig {
    pub groups: usize,
    pub labels_per_group: usize,
    pub documents: usize,
    pub min_labels: usize,
    pub max_labels: usize,
    /// Chance that an assigned label's token shows up in the text.
    pub plant_probability: f64,
    pub noise_vocabulary: usize,
    pub noise_tokens: usize,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        Self {
            groups: 25,
            labels_per_group: 4,
            documents: 500,
            min_labels: 3,
            max_labels: 4,
            plant_probability: 0.5,
            noise_vocabulary: 400,
            noise_tokens: 40,
            seed: 1,
        }
    }
}

pub struct PlantedCorpus {
    pub records: Vec<RepositoryRecord>,
    /// Labels are linked to every label of the same group.
    pub graph: KnowledgeGraph,
    pub labels: Vec<String>,
}

pub fn planted_label(group: usize, member: usize) -> String {
    format!("label-{group:02}-{member:02}")
}

pub fn planted_token(label: &str) -> String {
    format!("tok{}", label.trim_start_matches("label"))
}

/// Every document belongs to one group and carries several of its labels;
/// each carried label plants its token with some probability, and at least
/// one token is always planted.
pub fn planted_corpus(cfg: &PlantedConfig) -> PlantedCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let labels: Vec<String> = (0..cfg.groups)
        .flat_map(|g| (0..cfg.labels_per_group).map(move |m| planted_label(g, m)))
        .collect();
    let (mut graph, ids) = graph_with_topics("planted", &labels);
    for g in 0..cfg.groups {
        for a in 0..cfg.labels_per_group {
            for b in a + 1..cfg.labels_per_group {
                let i = g * cfg.labels_per_group;
                link(&mut graph, ids[i + a], ids[i + b]);
            }
        }
    }

    let max_labels = cfg.max_labels.min(cfg.labels_per_group);
    let min_labels = cfg.min_labels.clamp(1, max_labels);
    let mut counts = vec![0u64; labels.len()];
    let mut records = Vec::with_capacity(cfg.documents);
    for d in 0..cfg.documents {
        let group = rng.gen_range(0..cfg.groups);
        let n = rng.gen_range(min_labels..=max_labels);
        let mut members: Vec<usize> = (0..cfg.labels_per_group).collect();
        members.shuffle(&mut rng);
        members.truncate(n);
        members.sort_unstable();
        let assigned: Vec<String> = members.iter().map(|&m| planted_label(group, m)).collect();

        let mut tokens: Vec<String> = (0..cfg.noise_tokens)
            .map(|_| format!("w{}", rng.gen_range(0..cfg.noise_vocabulary)))
            .collect();
        let mut planted: Vec<&String> = assigned
            .iter()
            .filter(|_| rng.gen_bool(cfg.plant_probability))
            .collect();
        if planted.is_empty() {
            planted.push(assigned.choose(&mut rng).expect("non-empty"));
        }
        for l in planted {
            tokens.push(planted_token(l));
        }
        tokens.shuffle(&mut rng);
        for &m in &members {
            counts[group * cfg.labels_per_group + m] += 1;
        }
        records.push(RepositoryRecord {
            id: format!("planted/doc-{d:04}"),
            text: tokens.join(" "),
            topics: assigned,
        });
    }
    for (i, &id) in ids.iter().enumerate() {
        graph.set_popularity(id, counts[i]).expect("known topic");
    }
    PlantedCorpus { records, graph, labels }
}
