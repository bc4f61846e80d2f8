//! Topics, relation types and relationships of the curated topic graph.
//!
//! The graph owns entity state; vote ledgers live in [`crate::curation`] and
//! reach the graph only through [`KnowledgeGraph::set_relationship_state`].

mod redundancy;
pub mod seed;
pub mod snapshot;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use redundancy::{detect_redundancy, name_similarity, Redundancy, DEFAULT_REDUNDANCY_THRESHOLD};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(
    /// Identifier of a [`Topic`].
    TopicId, "t"
);
id_type!(
    /// Identifier of a [`RelationType`].
    VerbId, "v"
);
id_type!(
    /// Identifier of a [`Relationship`].
    RelationshipId, "r"
);
id_type!(
    /// Identifier of a registered contributor.
    ContributorId, "c"
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    GithubFeatured,
    Maintainer,
    #[default]
    Contributor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityState {
    #[default]
    Pending,
    Accepted,
    Rejected,
}

/// Who put a relationship up for review.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "role", content = "id")]
pub enum Proposer {
    Maintainer,
    Contributor(ContributorId),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topic {
    pub id: TopicId,
    pub full_name: String,
    pub display_name: String,
    #[serde(default)]
    pub aliases: BTreeSet<String>,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub info_links: Vec<String>,
    pub origin: Origin,
    pub state: EntityState,
    /// Number of public projects labeled with this topic.
    #[serde(default)]
    pub popularity_count: u64,
}

impl Topic {
    /// Every name the topic is known by: full name, display name and aliases.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.full_name.as_str())
            .chain(std::iter::once(self.display_name.as_str()))
            .chain(self.aliases.iter().map(String::as_str))
            .filter(|n| !n.is_empty())
    }
}

/// Input to [`KnowledgeGraph::add_topic`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TopicDraft {
    pub full_name: String,
    #[serde(default)]
    pub display_name: String,
    #[serde(default)]
    pub aliases: BTreeSet<String>,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub info_links: Vec<String>,
    #[serde(default)]
    pub origin: Origin,
}

impl TopicDraft {
    pub fn new(full_name: impl Into<String>, origin: Origin) -> Self {
        Self {
            full_name: full_name.into(),
            origin,
            ..Default::default()
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.full_name.as_str())
            .chain(std::iter::once(self.display_name.as_str()))
            .chain(self.aliases.iter().map(String::as_str))
            .filter(|n| !n.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationType {
    pub id: VerbId,
    pub verb: String,
    #[serde(default)]
    pub definition: String,
    pub bidirectional: bool,
    pub state: EntityState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relationship {
    pub id: RelationshipId,
    pub subject: TopicId,
    pub verb: VerbId,
    pub object: TopicId,
    pub state: EntityState,
    pub proposer: Proposer,
}

impl Relationship {
    /// The endpoint opposite `t`, if `t` is an endpoint.
    pub fn other(&self, t: TopicId) -> Option<TopicId> {
        if self.subject == t {
            Some(self.object)
        } else if self.object == t {
            Some(self.subject)
        } else {
            None
        }
    }
}

/// Uniqueness key of a relationship: endpoints are sorted for bidirectional verbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleKey {
    pub subject: TopicId,
    pub verb: VerbId,
    pub object: TopicId,
}

impl TripleKey {
    pub fn new(subject: TopicId, verb: VerbId, object: TopicId, bidirectional: bool) -> Self {
        if bidirectional && object < subject {
            Self { subject: object, verb, object: subject }
        } else {
            Self { subject, verb, object }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StoreError {
    #[error("a topic named `{0}` already exists")]
    DuplicateName(String),
    #[error("invalid name `{0}`: expected a non-empty lowercase token without whitespace")]
    InvalidName(String),
    #[error("a relation type with verb `{0}` already exists")]
    DuplicateVerb(String),
    #[error("unknown topic {0}")]
    UnknownTopic(TopicId),
    #[error("unknown topic `{0}`")]
    UnknownTopicName(String),
    #[error("unknown relation type {0}")]
    UnknownVerb(VerbId),
    #[error("unknown relation type `{0}`")]
    UnknownVerbName(String),
    #[error("unknown relationship {0}")]
    UnknownRelationship(RelationshipId),
    #[error("relationship endpoints must differ (topic {0})")]
    SelfLoop(TopicId),
    #[error("relationship duplicates {0}")]
    DuplicateRelationship(RelationshipId),
    #[error("identical relationship {0} was already rejected")]
    PreviouslyRejected(RelationshipId),
    #[error("topic {0} is rejected and cannot take part in new relationships")]
    RejectedTopic(TopicId),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T, E = StoreError> = std::result::Result<T, E>;

/// Checks that a name is already normalized: lowercase, no whitespace, non-empty.
pub fn validate_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && !name.chars().any(|c| c.is_whitespace() || c.is_uppercase())
        && !name.starts_with('-')
        && !name.ends_with('-');
    if ok {
        Ok(())
    } else {
        Err(StoreError::InvalidName(name.to_string()))
    }
}

/// Lowercases, trims and joins whitespace-separated words with hyphens.
pub fn normalize_name(raw: &str) -> String {
    raw.split_whitespace()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join("-")
}

/// The authoritative topic graph.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KnowledgeGraph {
    pub snapshot_label: String,
    topics: BTreeMap<TopicId, Topic>,
    verbs: BTreeMap<VerbId, RelationType>,
    relationships: BTreeMap<RelationshipId, Relationship>,
    topic_names: HashMap<String, TopicId>,
    verb_names: HashMap<String, VerbId>,
    next_topic: u64,
    next_verb: u64,
    next_relationship: u64,
}

impl KnowledgeGraph {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            snapshot_label: label.into(),
            ..Default::default()
        }
    }

    pub fn topics(&self) -> impl Iterator<Item = &Topic> {
        self.topics.values()
    }

    pub fn relation_types(&self) -> impl Iterator<Item = &RelationType> {
        self.verbs.values()
    }

    pub fn relationships(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships.values()
    }

    pub fn accepted_relationships(&self) -> impl Iterator<Item = &Relationship> {
        self.relationships
            .values()
            .filter(|r| r.state == EntityState::Accepted)
    }

    pub fn topic_count(&self) -> usize {
        self.topics.len()
    }

    pub fn relationship_count(&self) -> usize {
        self.relationships.len()
    }

    pub fn topic(&self, id: TopicId) -> Result<&Topic> {
        self.topics.get(&id).ok_or(StoreError::UnknownTopic(id))
    }

    pub fn relation_type(&self, id: VerbId) -> Result<&RelationType> {
        self.verbs.get(&id).ok_or(StoreError::UnknownVerb(id))
    }

    pub fn relationship(&self, id: RelationshipId) -> Result<&Relationship> {
        self.relationships
            .get(&id)
            .ok_or(StoreError::UnknownRelationship(id))
    }

    pub fn topic_by_name(&self, name: &str) -> Option<&Topic> {
        self.topic_names
            .get(&name.to_lowercase())
            .and_then(|id| self.topics.get(id))
    }

    pub fn topic_id(&self, name: &str) -> Result<TopicId> {
        self.topic_by_name(name)
            .map(|t| t.id)
            .ok_or_else(|| StoreError::UnknownTopicName(name.to_string()))
    }

    pub fn verb_by_name(&self, verb: &str) -> Option<&RelationType> {
        self.verb_names
            .get(&verb.to_lowercase())
            .and_then(|id| self.verbs.get(id))
    }

    pub fn verb_id(&self, verb: &str) -> Result<VerbId> {
        self.verb_by_name(verb)
            .map(|v| v.id)
            .ok_or_else(|| StoreError::UnknownVerbName(verb.to_string()))
    }

    pub fn add_topic(&mut self, draft: TopicDraft) -> Result<TopicId> {
        validate_name(&draft.full_name)?;
        let key = draft.full_name.to_lowercase();
        if self.topic_names.contains_key(&key) {
            return Err(StoreError::DuplicateName(draft.full_name));
        }
        let id = TopicId(self.next_topic);
        self.next_topic += 1;
        let state = if draft.origin == Origin::GithubFeatured {
            EntityState::Accepted
        } else {
            EntityState::Pending
        };
        let display_name = if draft.display_name.is_empty() {
            draft.full_name.clone()
        } else {
            draft.display_name
        };
        self.topic_names.insert(key, id);
        self.topics.insert(
            id,
            Topic {
                id,
                full_name: draft.full_name,
                display_name,
                aliases: draft.aliases,
                description: draft.description,
                info_links: draft.info_links,
                origin: draft.origin,
                state,
                popularity_count: 0,
            },
        );
        Ok(id)
    }

    pub fn add_relation_type(
        &mut self,
        verb: &str,
        definition: &str,
        bidirectional: bool,
    ) -> Result<VerbId> {
        validate_name(verb)?;
        let key = verb.to_lowercase();
        if self.verb_names.contains_key(&key) {
            return Err(StoreError::DuplicateVerb(verb.to_string()));
        }
        let id = VerbId(self.next_verb);
        self.next_verb += 1;
        self.verb_names.insert(key, id);
        self.verbs.insert(
            id,
            RelationType {
                id,
                verb: verb.to_string(),
                definition: definition.to_string(),
                bidirectional,
                state: EntityState::Pending,
            },
        );
        Ok(id)
    }

    pub fn key_of(&self, subject: TopicId, verb: VerbId, object: TopicId) -> Result<TripleKey> {
        let rt = self.relation_type(verb)?;
        Ok(TripleKey::new(subject, verb, object, rt.bidirectional))
    }

    /// Proposes a relationship. It starts pending; curation decides its fate.
    pub fn add_relationship(
        &mut self,
        subject: TopicId,
        verb: VerbId,
        object: TopicId,
        proposer: Proposer,
    ) -> Result<RelationshipId> {
        let s = self.topic(subject)?;
        let o = self.topic(object)?;
        for t in [s, o] {
            if t.state == EntityState::Rejected {
                return Err(StoreError::RejectedTopic(t.id));
            }
        }
        if subject == object {
            return Err(StoreError::SelfLoop(subject));
        }
        let key = self.key_of(subject, verb, object)?;
        let mut rejected = None;
        for r in self.relationships.values() {
            if self.key_of(r.subject, r.verb, r.object)? != key {
                continue;
            }
            match r.state {
                EntityState::Rejected => rejected = Some(r.id),
                _ => return Err(StoreError::DuplicateRelationship(r.id)),
            }
        }
        if let Some(id) = rejected {
            return Err(StoreError::PreviouslyRejected(id));
        }
        let id = RelationshipId(self.next_relationship);
        self.next_relationship += 1;
        self.relationships.insert(
            id,
            Relationship {
                id,
                subject,
                verb,
                object,
                state: EntityState::Pending,
                proposer,
            },
        );
        Ok(id)
    }

    /// Moves a relationship to `state` and re-derives topic and verb acceptance.
    pub fn set_relationship_state(&mut self, id: RelationshipId, state: EntityState) -> Result<()> {
        let r = self
            .relationships
            .get_mut(&id)
            .ok_or(StoreError::UnknownRelationship(id))?;
        r.state = state;
        self.refresh_acceptance();
        Ok(())
    }

    /// Marks a topic rejected. Only topics outside accepted relationships qualify.
    pub fn reject_topic(&mut self, id: TopicId) -> Result<()> {
        let t = self.topic(id)?;
        if t.origin == Origin::GithubFeatured
            || self
                .accepted_relationships()
                .any(|r| r.subject == id || r.object == id)
        {
            return Err(StoreError::InvariantViolation(format!(
                "topic {id} is accepted and cannot be rejected"
            )));
        }
        self.topics.get_mut(&id).expect("checked").state = EntityState::Rejected;
        Ok(())
    }

    pub fn set_popularity(&mut self, id: TopicId, count: u64) -> Result<()> {
        self.topics
            .get_mut(&id)
            .ok_or(StoreError::UnknownTopic(id))?
            .popularity_count = count;
        Ok(())
    }

    /// Re-derives acceptance: a topic or verb is accepted iff it is github-featured
    /// or takes part in an accepted relationship. Rejected entities stay rejected.
    pub fn refresh_acceptance(&mut self) {
        let mut used_topics = BTreeSet::new();
        let mut used_verbs = BTreeSet::new();
        for r in self.accepted_relationships() {
            used_topics.insert(r.subject);
            used_topics.insert(r.object);
            used_verbs.insert(r.verb);
        }
        for t in self.topics.values_mut() {
            if t.state == EntityState::Rejected {
                continue;
            }
            t.state = if t.origin == Origin::GithubFeatured || used_topics.contains(&t.id) {
                EntityState::Accepted
            } else {
                EntityState::Pending
            };
        }
        for v in self.verbs.values_mut() {
            if v.state == EntityState::Rejected {
                continue;
            }
            v.state = if used_verbs.contains(&v.id) {
                EntityState::Accepted
            } else {
                EntityState::Pending
            };
        }
    }

    /// Topics joined to `t` by an accepted relationship, in either direction.
    pub fn neighbors(&self, t: TopicId) -> Result<BTreeSet<TopicId>> {
        self.topic(t)?;
        Ok(self
            .accepted_relationships()
            .filter_map(|r| r.other(t))
            .filter(|&n| n != t)
            .collect())
    }

    /// Number of accepted relationships incident to `t`.
    pub fn degree(&self, t: TopicId) -> Result<usize> {
        self.topic(t)?;
        Ok(self
            .accepted_relationships()
            .filter(|r| r.other(t).is_some())
            .count())
    }

    /// Adjacency and degree for all topics at once.
    pub fn adjacency(&self) -> Adjacency {
        let mut neighbors: BTreeMap<TopicId, BTreeSet<TopicId>> = BTreeMap::new();
        let mut degree: BTreeMap<TopicId, usize> = BTreeMap::new();
        for r in self.accepted_relationships() {
            neighbors.entry(r.subject).or_default().insert(r.object);
            neighbors.entry(r.object).or_default().insert(r.subject);
            *degree.entry(r.subject).or_default() += 1;
            *degree.entry(r.object).or_default() += 1;
        }
        Adjacency { neighbors, degree }
    }

    /// Checks every structural invariant; used on import.
    pub fn validate(&self) -> Result<()> {
        let violation = |m: String| Err(StoreError::InvariantViolation(m));
        let mut names = BTreeSet::new();
        for t in self.topics.values() {
            validate_name(&t.full_name)?;
            if !names.insert(t.full_name.to_lowercase()) {
                return violation(format!("duplicate topic name `{}`", t.full_name));
            }
            if t.origin == Origin::GithubFeatured && t.state != EntityState::Accepted {
                return violation(format!("featured topic `{}` is not accepted", t.full_name));
            }
        }
        let mut verbs = BTreeSet::new();
        for v in self.verbs.values() {
            if !verbs.insert(v.verb.to_lowercase()) {
                return violation(format!("duplicate verb `{}`", v.verb));
            }
        }
        let mut keys = BTreeMap::new();
        for r in self.relationships.values() {
            if !self.topics.contains_key(&r.subject) || !self.topics.contains_key(&r.object) {
                return violation(format!("relationship {} references an unknown topic", r.id));
            }
            if !self.verbs.contains_key(&r.verb) {
                return violation(format!("relationship {} references an unknown verb", r.id));
            }
            if r.subject == r.object {
                return violation(format!("relationship {} is a self-loop", r.id));
            }
            if r.state != EntityState::Rejected {
                let key = self.key_of(r.subject, r.verb, r.object)?;
                if let Some(prev) = keys.insert(key, r.id) {
                    return violation(format!("relationships {prev} and {} share a key", r.id));
                }
            }
        }
        let mut derived = self.clone();
        derived.refresh_acceptance();
        for (t, d) in self.topics.values().zip(derived.topics.values()) {
            if t.state != d.state {
                return violation(format!(
                    "topic `{}` is {:?} but its relationships imply {:?}",
                    t.full_name, t.state, d.state
                ));
            }
        }
        for (v, d) in self.verbs.values().zip(derived.verbs.values()) {
            if v.state != d.state {
                return violation(format!(
                    "verb `{}` is {:?} but its relationships imply {:?}",
                    v.verb, v.state, d.state
                ));
            }
        }
        Ok(())
    }

    /// Inserts fully-formed records, as read from a snapshot. Call [`Self::validate`] afterwards.
    pub(crate) fn insert_topic_raw(&mut self, t: Topic) -> Result<()> {
        let key = t.full_name.to_lowercase();
        if self.topics.contains_key(&t.id) || self.topic_names.contains_key(&key) {
            return Err(StoreError::InvariantViolation(format!(
                "duplicate topic record {} `{}`",
                t.id, t.full_name
            )));
        }
        self.next_topic = self.next_topic.max(t.id.0 + 1);
        self.topic_names.insert(key, t.id);
        self.topics.insert(t.id, t);
        Ok(())
    }

    pub(crate) fn insert_verb_raw(&mut self, v: RelationType) -> Result<()> {
        let key = v.verb.to_lowercase();
        if self.verbs.contains_key(&v.id) || self.verb_names.contains_key(&key) {
            return Err(StoreError::InvariantViolation(format!(
                "duplicate verb record {} `{}`",
                v.id, v.verb
            )));
        }
        self.next_verb = self.next_verb.max(v.id.0 + 1);
        self.verb_names.insert(key, v.id);
        self.verbs.insert(v.id, v);
        Ok(())
    }

    pub(crate) fn insert_relationship_raw(&mut self, r: Relationship) -> Result<()> {
        if self.relationships.contains_key(&r.id) {
            return Err(StoreError::InvariantViolation(format!(
                "duplicate relationship record {}",
                r.id
            )));
        }
        self.next_relationship = self.next_relationship.max(r.id.0 + 1);
        self.relationships.insert(r.id, r);
        Ok(())
    }
}

/// Undirected adjacency over accepted relationships.
///
/// Parallel edges (same pair, different verbs) appear once in `neighbors` but
/// count once per relationship in `degree`.
#[derive(Debug, Clone, Default)]
pub struct Adjacency {
    neighbors: BTreeMap<TopicId, BTreeSet<TopicId>>,
    degree: BTreeMap<TopicId, usize>,
}

impl Adjacency {
    pub fn neighbors(&self, t: TopicId) -> impl Iterator<Item = TopicId> + '_ {
        self.neighbors.get(&t).into_iter().flatten().copied()
    }

    pub fn is_adjacent(&self, a: TopicId, b: TopicId) -> bool {
        self.neighbors.get(&a).is_some_and(|s| s.contains(&b))
    }

    pub fn degree(&self, t: TopicId) -> usize {
        self.degree.get(&t).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_with(names: &[&str]) -> (KnowledgeGraph, Vec<TopicId>, VerbId, VerbId) {
        let mut g = KnowledgeGraph::new("test");
        let ids = names
            .iter()
            .map(|n| g.add_topic(TopicDraft::new(*n, Origin::Maintainer)).unwrap())
            .collect();
        let is_a = g.add_relation_type("is-a", "", false).unwrap();
        let works_with = g.add_relation_type("works-with", "", true).unwrap();
        (g, ids, is_a, works_with)
    }

    fn accept(g: &mut KnowledgeGraph, r: RelationshipId) {
        g.set_relationship_state(r, EntityState::Accepted).unwrap();
    }

    #[test]
    fn featured_topics_start_accepted() {
        let mut g = KnowledgeGraph::new("t");
        let id = g
            .add_topic(TopicDraft::new("django", Origin::GithubFeatured))
            .unwrap();
        assert_eq!(g.topic(id).unwrap().state, EntityState::Accepted);
        let other = g
            .add_topic(TopicDraft::new("my-tool", Origin::Contributor))
            .unwrap();
        assert_eq!(g.topic(other).unwrap().state, EntityState::Pending);
        assert_eq!(
            g.add_topic(TopicDraft::new("django", Origin::Contributor)),
            Err(StoreError::DuplicateName("django".into()))
        );
        assert!(matches!(
            g.add_topic(TopicDraft::new("Django", Origin::Contributor)),
            Err(StoreError::InvalidName(_))
        ));
        assert!(matches!(
            g.add_topic(TopicDraft::new("web development", Origin::Contributor)),
            Err(StoreError::InvalidName(_))
        ));
        assert!(matches!(
            g.add_topic(TopicDraft::new("", Origin::Contributor)),
            Err(StoreError::InvalidName(_))
        ));
    }

    #[test]
    fn normalize_joins_words() {
        assert_eq!(normalize_name("  Web   Development "), "web-development");
    }

    #[test]
    fn neighbors_ignore_direction_and_pending() {
        let (mut g, t, is_a, works_with) = graph_with(&["a", "b", "c", "d", "e"]);
        let (a, b, c, d, e) = (t[0], t[1], t[2], t[3], t[4]);
        assert!(g.neighbors(e).unwrap().is_empty());
        let r1 = g.add_relationship(a, is_a, b, Proposer::Maintainer).unwrap();
        let r2 = g
            .add_relationship(c, works_with, a, Proposer::Maintainer)
            .unwrap();
        g.add_relationship(a, is_a, d, Proposer::Maintainer).unwrap();
        accept(&mut g, r1);
        accept(&mut g, r2);
        assert_eq!(g.neighbors(a).unwrap(), BTreeSet::from([b, c]));
        assert_eq!(g.neighbors(b).unwrap(), BTreeSet::from([a]));
        assert_eq!(g.degree(a).unwrap(), 2);
        assert_eq!(g.degree(d).unwrap(), 0);
        assert_eq!(
            g.neighbors(TopicId(99)),
            Err(StoreError::UnknownTopic(TopicId(99)))
        );
    }

    #[test]
    fn degree_counts_accepted_only() {
        let (mut g, t, is_a, _) = graph_with(&["hub", "x1", "x2", "x3", "y1", "y2"]);
        for &x in &t[1..4] {
            let r = g.add_relationship(t[0], is_a, x, Proposer::Maintainer).unwrap();
            accept(&mut g, r);
        }
        for &y in &t[4..] {
            g.add_relationship(y, is_a, t[0], Proposer::Maintainer).unwrap();
        }
        assert_eq!(g.degree(t[0]).unwrap(), 3);
        assert_eq!(g.adjacency().degree(t[0]), 3);
    }

    #[test]
    fn parallel_edges_count_once_for_adjacency() {
        let (mut g, t, is_a, works_with) = graph_with(&["a", "b"]);
        let r1 = g.add_relationship(t[0], is_a, t[1], Proposer::Maintainer).unwrap();
        let r2 = g
            .add_relationship(t[0], works_with, t[1], Proposer::Maintainer)
            .unwrap();
        accept(&mut g, r1);
        accept(&mut g, r2);
        let adj = g.adjacency();
        assert_eq!(adj.neighbors(t[0]).count(), 1);
        assert_eq!(adj.degree(t[0]), 2);
    }

    #[test]
    fn relationship_keys() {
        let (mut g, t, is_a, works_with) = graph_with(&["a", "b"]);
        assert_eq!(
            g.add_relationship(t[0], is_a, t[0], Proposer::Maintainer),
            Err(StoreError::SelfLoop(t[0]))
        );
        let r = g.add_relationship(t[0], is_a, t[1], Proposer::Maintainer).unwrap();
        assert_eq!(
            g.add_relationship(t[0], is_a, t[1], Proposer::Maintainer),
            Err(StoreError::DuplicateRelationship(r))
        );
        // reverse direction of a directional verb is a different key
        g.add_relationship(t[1], is_a, t[0], Proposer::Maintainer).unwrap();
        let w = g
            .add_relationship(t[0], works_with, t[1], Proposer::Maintainer)
            .unwrap();
        assert_eq!(
            g.add_relationship(t[1], works_with, t[0], Proposer::Maintainer),
            Err(StoreError::DuplicateRelationship(w))
        );
        g.set_relationship_state(w, EntityState::Rejected).unwrap();
        assert_eq!(
            g.add_relationship(t[1], works_with, t[0], Proposer::Maintainer),
            Err(StoreError::PreviouslyRejected(w))
        );
    }

    #[test]
    fn acceptance_follows_relationships() {
        let (mut g, t, is_a, _) = graph_with(&["a", "b", "c"]);
        let r = g.add_relationship(t[0], is_a, t[1], Proposer::Maintainer).unwrap();
        assert_eq!(g.topic(t[0]).unwrap().state, EntityState::Pending);
        accept(&mut g, r);
        assert_eq!(g.topic(t[0]).unwrap().state, EntityState::Accepted);
        assert_eq!(g.relation_type(is_a).unwrap().state, EntityState::Accepted);
        assert_eq!(g.topic(t[2]).unwrap().state, EntityState::Pending);
        g.validate().unwrap();
        g.set_relationship_state(r, EntityState::Pending).unwrap();
        assert_eq!(g.topic(t[0]).unwrap().state, EntityState::Pending);
        g.reject_topic(t[2]).unwrap();
        assert_eq!(
            g.add_relationship(t[2], is_a, t[0], Proposer::Maintainer),
            Err(StoreError::RejectedTopic(t[2]))
        );
    }
}
