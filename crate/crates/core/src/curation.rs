//! Vote collection, graduated acceptance, contributor reliability and the
//! curation quality metrics (SR, AARTR, AROCR).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::store::{
    ContributorId, EntityState, KnowledgeGraph, RelationshipId, StoreError, TopicId, VerbId,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurationError {
    #[error("contributor {0} is not reliable")]
    NotReliable(ContributorId),
    #[error("contributor {contributor} has not read the definition of verb {verb}")]
    VerbUnread {
        contributor: ContributorId,
        verb: VerbId,
    },
    #[error("relationship {0} is already resolved")]
    AlreadyResolved(RelationshipId),
    #[error("unknown relationship {0}")]
    UnknownRelationship(RelationshipId),
    #[error("unknown contributor {0}")]
    UnknownContributor(ContributorId),
    #[error("contributor {0} lacks creator permission")]
    NotCreator(ContributorId),
    #[error("no resolved relationships to measure")]
    EmptyInput,
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

pub type Result<T, E = CurationError> = std::result::Result<T, E>;

/// A single contributor's verdict on a relationship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VoteValue {
    True,
    False,
    /// "Don't know": recorded, never counted toward acceptance.
    Null,
}

impl From<Option<bool>> for VoteValue {
    fn from(v: Option<bool>) -> Self {
        match v {
            Some(true) => VoteValue::True,
            Some(false) => VoteValue::False,
            None => VoteValue::Null,
        }
    }
}

impl From<VoteValue> for Option<bool> {
    fn from(v: VoteValue) -> Self {
        match v {
            VoteValue::True => Some(true),
            VoteValue::False => Some(false),
            VoteValue::Null => None,
        }
    }
}

impl Serialize for VoteValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Option::<bool>::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for VoteValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Option::<bool>::deserialize(d).map(VoteValue::from)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vote {
    pub contributor: ContributorId,
    pub relationship: RelationshipId,
    pub value: VoteValue,
    pub timestamp: u64,
    /// Set when the contributor's reliability was revoked.
    #[serde(default)]
    pub nullified: bool,
}

impl Vote {
    fn counts(&self) -> bool {
        !self.nullified && self.value != VoteValue::Null
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    #[default]
    Open,
    Accepted,
    Rejected,
}

impl Resolution {
    pub fn state(self) -> EntityState {
        match self {
            Resolution::Open => EntityState::Pending,
            Resolution::Accepted => EntityState::Accepted,
            Resolution::Rejected => EntityState::Rejected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurationTally {
    pub relationship: RelationshipId,
    pub true_count: u32,
    pub false_count: u32,
    pub null_count: u32,
    /// Whether the first `min_votes` counted votes were all true.
    pub opened_unanimous: bool,
    pub resolution: Resolution,
}

impl CurationTally {
    /// Builds a tally from time-ordered votes; nullified votes are skipped.
    pub fn from_votes<'a>(
        relationship: RelationshipId,
        votes: impl IntoIterator<Item = &'a Vote>,
        policy: &AcceptancePolicy,
    ) -> Self {
        let mut tally = CurationTally {
            relationship,
            true_count: 0,
            false_count: 0,
            null_count: 0,
            opened_unanimous: false,
            resolution: Resolution::Open,
        };
        let mut leading_true = 0;
        for v in votes.into_iter().filter(|v| !v.nullified) {
            match v.value {
                VoteValue::True => {
                    if tally.counted() == leading_true {
                        leading_true += 1;
                    }
                    tally.true_count += 1;
                }
                VoteValue::False => tally.false_count += 1,
                VoteValue::Null => tally.null_count += 1,
            }
        }
        tally.opened_unanimous = leading_true >= policy.min_votes;
        tally.resolution = resolve_acceptance(&tally, policy);
        tally
    }

    /// Non-null votes.
    pub fn counted(&self) -> u32 {
        self.true_count + self.false_count
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptancePolicy {
    pub min_votes: u32,
    pub max_votes: u32,
    pub start_threshold: f64,
    pub floor_threshold: f64,
    pub reliability_floor: f64,
    /// Resolved votes needed before a contributor can lose reliability.
    pub reliability_min_votes: u32,
    pub creator_min_votes: usize,
    pub creator_min_topics: usize,
}

impl Default for AcceptancePolicy {
    fn default() -> Self {
        Self {
            min_votes: 3,
            max_votes: 9,
            start_threshold: 1.0,
            floor_threshold: 0.65,
            reliability_floor: 0.5,
            reliability_min_votes: 1,
            creator_min_votes: 50,
            creator_min_topics: 20,
        }
    }
}

impl AcceptancePolicy {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CurationError::InvalidPolicy(m.to_string()));
        if self.min_votes == 0 || self.min_votes > self.max_votes {
            return bad("need 0 < min_votes <= max_votes");
        }
        if !(0.0..=1.0).contains(&self.floor_threshold)
            || !(0.0..=1.0).contains(&self.start_threshold)
            || self.floor_threshold > self.start_threshold
        {
            return bad("need 0 <= floor_threshold <= start_threshold <= 1");
        }
        if !(0.0..=1.0).contains(&self.reliability_floor) {
            return bad("reliability_floor must lie in [0, 1]");
        }
        Ok(())
    }

    /// Acceptance ratio required with `counted` non-null votes: linear from
    /// `start_threshold` at `min_votes` down to `floor_threshold` at `max_votes`.
    pub fn threshold(&self, counted: u32) -> f64 {
        if counted <= self.min_votes || self.max_votes == self.min_votes {
            return if counted >= self.max_votes {
                self.floor_threshold
            } else {
                self.start_threshold
            };
        }
        let span = (self.max_votes - self.min_votes) as f64;
        let step = (counted - self.min_votes) as f64;
        let t = self.start_threshold - (self.start_threshold - self.floor_threshold) * step / span;
        t.max(self.floor_threshold)
    }
}

/// Applies the graduated acceptance rule to a tally.
pub fn resolve_acceptance(tally: &CurationTally, policy: &AcceptancePolicy) -> Resolution {
    let counted = tally.counted();
    if counted < policy.min_votes {
        return Resolution::Open;
    }
    if tally.opened_unanimous {
        return Resolution::Accepted;
    }
    let ratio = tally.true_count as f64 / counted as f64;
    if ratio >= policy.threshold(counted) {
        return Resolution::Accepted;
    }
    if counted >= policy.max_votes {
        return if ratio < policy.floor_threshold {
            Resolution::Rejected
        } else {
            Resolution::Open
        };
    }
    let best_case =
        (tally.true_count + (policy.max_votes - counted)) as f64 / policy.max_votes as f64;
    if best_case < policy.floor_threshold {
        Resolution::Rejected
    } else {
        Resolution::Open
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Background {
    Academia,
    Industry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributorProfile {
    pub name: String,
    pub background: Background,
    pub years_experience: u32,
}

impl ContributorProfile {
    /// Three years in academia or one in industry.
    pub fn meets_requirements(&self) -> bool {
        match self.background {
            Background::Academia => self.years_experience >= 3,
            Background::Industry => self.years_experience >= 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributorRecord {
    pub id: ContributorId,
    pub profile: ContributorProfile,
    #[serde(default)]
    pub verbs_read: BTreeSet<VerbId>,
    pub reliable: bool,
    pub creator: bool,
    /// Relationships this contributor holds a live non-null vote on.
    pub votes_cast: usize,
    #[serde(default)]
    pub topics_voted: BTreeSet<TopicId>,
    /// Rater-objective conformance; `None` until a vote of theirs is resolved.
    pub rocr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum AuditEvent {
    Vote {
        ordinal: u64,
        contributor: ContributorId,
        relationship: RelationshipId,
        value: VoteValue,
    },
    ResolutionChange {
        ordinal: u64,
        relationship: RelationshipId,
        from: EntityState,
        to: EntityState,
    },
    Revocation {
        ordinal: u64,
        contributor: ContributorId,
        rocr: f64,
        nullified: usize,
    },
    Grant {
        ordinal: u64,
        contributor: ContributorId,
        creator: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurationMetrics {
    /// Success rate: accepted / resolved.
    pub sr: f64,
    /// Accepted relationships whose every counted vote was true, over accepted.
    pub aartr: f64,
    /// Mean per-contributor conformance over contributors with resolved votes.
    pub arocr: f64,
    pub accepted: usize,
    pub rejected: usize,
}

/// SR, AARTR and AROCR over resolved tallies.
///
/// `votes` supplies per-contributor conformance; nullified votes still count
/// here because the metric describes everyone who took part.
pub fn curation_metrics(tallies: &[CurationTally], votes: &[Vote]) -> Result<CurationMetrics> {
    let resolution: BTreeMap<RelationshipId, Resolution> = tallies
        .iter()
        .filter(|t| t.resolution != Resolution::Open)
        .map(|t| (t.relationship, t.resolution))
        .collect();
    if resolution.is_empty() {
        return Err(CurationError::EmptyInput);
    }
    let accepted: Vec<&CurationTally> = tallies
        .iter()
        .filter(|t| t.resolution == Resolution::Accepted)
        .collect();
    let n_true = accepted.len();
    let n_false = tallies
        .iter()
        .filter(|t| t.resolution == Resolution::Rejected)
        .count();
    let unanimous = accepted.iter().filter(|t| t.false_count == 0).count();

    let mut per_rater: BTreeMap<ContributorId, (usize, usize)> = BTreeMap::new();
    for v in votes.iter().filter(|v| v.value != VoteValue::Null) {
        let Some(&res) = resolution.get(&v.relationship) else {
            continue;
        };
        let entry = per_rater.entry(v.contributor).or_default();
        entry.1 += 1;
        if conforms(v.value, res) {
            entry.0 += 1;
        }
    }
    let arocr = if per_rater.is_empty() {
        0.0
    } else {
        per_rater
            .values()
            .map(|&(c, n)| c as f64 / n as f64)
            .sum::<f64>()
            / per_rater.len() as f64
    };
    Ok(CurationMetrics {
        sr: n_true as f64 / (n_true + n_false) as f64,
        aartr: if n_true == 0 {
            1.0
        } else {
            unanimous as f64 / n_true as f64
        },
        arocr,
        accepted: n_true,
        rejected: n_false,
    })
}

fn conforms(value: VoteValue, resolution: Resolution) -> bool {
    matches!(
        (value, resolution),
        (VoteValue::True, Resolution::Accepted) | (VoteValue::False, Resolution::Rejected)
    )
}

/// Vote ledger, contributor registry and audit trail for one graph.
///
/// Mutating calls take the graph they curate; relationship states in the graph
/// always equal the resolution of their live votes once any vote exists.
#[derive(Debug, Clone, PartialEq)]
pub struct Curation {
    policy: AcceptancePolicy,
    votes: BTreeMap<RelationshipId, Vec<Vote>>,
    contributors: BTreeMap<ContributorId, ContributorRecord>,
    audit: Vec<AuditEvent>,
    clock: u64,
    next_contributor: u64,
    /// Re-check the reliability of every voter on a relationship whose resolution changes.
    pub auto_reliability: bool,
}

impl Default for Curation {
    fn default() -> Self {
        Self::new(AcceptancePolicy::default())
    }
}

impl Curation {
    pub fn new(policy: AcceptancePolicy) -> Self {
        Self {
            policy,
            votes: BTreeMap::new(),
            contributors: BTreeMap::new(),
            audit: Vec::new(),
            clock: 0,
            next_contributor: 0,
            auto_reliability: true,
        }
    }

    /// Rebuilds curation state from persisted parts and checks it against the graph.
    pub fn from_parts(
        policy: AcceptancePolicy,
        graph: &KnowledgeGraph,
        contributors: Vec<ContributorRecord>,
        votes: Vec<Vote>,
    ) -> Result<Self> {
        policy.validate()?;
        let mut c = Self::new(policy);
        for rec in contributors {
            c.next_contributor = c.next_contributor.max(rec.id.0 + 1);
            if c.contributors.insert(rec.id, rec).is_some() {
                return Err(StoreError::InvariantViolation("duplicate contributor".into()).into());
            }
        }
        let mut seen = BTreeSet::new();
        for v in votes {
            graph.relationship(v.relationship)?;
            if !c.contributors.contains_key(&v.contributor) {
                return Err(StoreError::InvariantViolation(format!(
                    "vote by unknown contributor {}",
                    v.contributor
                ))
                .into());
            }
            if !seen.insert((v.contributor, v.relationship)) {
                return Err(StoreError::InvariantViolation(format!(
                    "contributor {} holds two votes on {}",
                    v.contributor, v.relationship
                ))
                .into());
            }
            c.clock = c.clock.max(v.timestamp + 1);
            c.votes.entry(v.relationship).or_default().push(v);
        }
        for (rel, list) in &mut c.votes {
            list.sort_by_key(|v| v.timestamp);
            let tally = CurationTally::from_votes(*rel, list.iter(), &c.policy);
            let state = graph.relationship(*rel)?.state;
            if tally.counted() > 0 && tally.resolution.state() != state {
                return Err(StoreError::InvariantViolation(format!(
                    "relationship {rel} is {state:?} but its votes resolve to {:?}",
                    tally.resolution
                ))
                .into());
            }
        }
        for rec in c.contributors.values() {
            if rec.creator && !rec.reliable {
                return Err(StoreError::InvariantViolation(format!(
                    "creator {} is not reliable",
                    rec.id
                ))
                .into());
            }
        }
        let ids: Vec<ContributorId> = c.contributors.keys().copied().collect();
        for id in ids {
            c.refresh_activity(graph, id);
        }
        Ok(c)
    }

    pub fn policy(&self) -> &AcceptancePolicy {
        &self.policy
    }

    pub fn contributors(&self) -> impl Iterator<Item = &ContributorRecord> {
        self.contributors.values()
    }

    pub fn contributor(&self, id: ContributorId) -> Result<&ContributorRecord> {
        self.contributors
            .get(&id)
            .ok_or(CurationError::UnknownContributor(id))
    }

    /// All votes, grouped by relationship, each group time-ordered.
    pub fn votes(&self) -> impl Iterator<Item = &Vote> {
        self.votes.values().flatten()
    }

    pub fn votes_on(&self, r: RelationshipId) -> &[Vote] {
        self.votes.get(&r).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn audit_log(&self) -> &[AuditEvent] {
        &self.audit
    }

    pub fn tally(&self, r: RelationshipId) -> CurationTally {
        CurationTally::from_votes(r, self.votes_on(r), &self.policy)
    }

    /// Tallies of every relationship that has received a vote.
    pub fn tallies(&self) -> Vec<CurationTally> {
        self.votes.keys().map(|&r| self.tally(r)).collect()
    }

    pub fn metrics(&self) -> Result<CurationMetrics> {
        let votes: Vec<Vote> = self.votes().cloned().collect();
        curation_metrics(&self.tallies(), &votes)
    }

    fn tick(&mut self) -> u64 {
        let t = self.clock;
        self.clock += 1;
        t
    }

    pub fn register(&mut self, profile: ContributorProfile) -> ContributorId {
        let id = ContributorId(self.next_contributor);
        self.next_contributor += 1;
        let reliable = profile.meets_requirements();
        self.contributors.insert(
            id,
            ContributorRecord {
                id,
                profile,
                verbs_read: BTreeSet::new(),
                reliable,
                creator: false,
                votes_cast: 0,
                topics_voted: BTreeSet::new(),
                rocr: None,
            },
        );
        id
    }

    pub fn mark_verb_read(
        &mut self,
        graph: &KnowledgeGraph,
        c: ContributorId,
        verb: VerbId,
    ) -> Result<()> {
        graph.relation_type(verb)?;
        self.contributors
            .get_mut(&c)
            .ok_or(CurationError::UnknownContributor(c))?
            .verbs_read
            .insert(verb);
        Ok(())
    }

    /// Fails unless `c` may define new topics, verbs and relationships.
    pub fn require_creator(&self, c: ContributorId) -> Result<()> {
        let rec = self.contributor(c)?;
        if !rec.reliable {
            Err(CurationError::NotReliable(c))
        } else if !rec.creator {
            Err(CurationError::NotCreator(c))
        } else {
            Ok(())
        }
    }

    /// Records (or replaces) `c`'s vote on `r` and resolves the relationship.
    pub fn cast_vote(
        &mut self,
        graph: &mut KnowledgeGraph,
        c: ContributorId,
        r: RelationshipId,
        value: VoteValue,
    ) -> Result<CurationTally> {
        let rec = self.contributor(c)?;
        if !rec.reliable {
            return Err(CurationError::NotReliable(c));
        }
        let rel = graph
            .relationship(r)
            .map_err(|_| CurationError::UnknownRelationship(r))?;
        if !rec.verbs_read.contains(&rel.verb) {
            return Err(CurationError::VerbUnread {
                contributor: c,
                verb: rel.verb,
            });
        }
        if rel.state != EntityState::Pending {
            return Err(CurationError::AlreadyResolved(r));
        }
        let ordinal = self.tick();
        let list = self.votes.entry(r).or_default();
        list.retain(|v| v.contributor != c);
        list.push(Vote {
            contributor: c,
            relationship: r,
            value,
            timestamp: ordinal,
            nullified: false,
        });
        self.audit.push(AuditEvent::Vote {
            ordinal,
            contributor: c,
            relationship: r,
            value,
        });
        self.refresh_activity(graph, c);
        if self.reresolve(graph, r)? && self.auto_reliability {
            let voters = self.voters(r);
            self.reliability_sweep(graph, voters)?;
        }
        Ok(self.tally(r))
    }

    fn voters(&self, r: RelationshipId) -> Vec<ContributorId> {
        self.votes_on(r).iter().map(|v| v.contributor).collect()
    }

    /// Brings the graph state of `r` in line with its live votes. Returns true on change.
    fn reresolve(&mut self, graph: &mut KnowledgeGraph, r: RelationshipId) -> Result<bool> {
        let tally = self.tally(r);
        let from = graph.relationship(r)?.state;
        let to = tally.resolution.state();
        if from == to {
            return Ok(false);
        }
        graph.set_relationship_state(r, to)?;
        let ordinal = self.tick();
        self.audit.push(AuditEvent::ResolutionChange {
            ordinal,
            relationship: r,
            from,
            to,
        });
        Ok(true)
    }

    fn refresh_activity(&mut self, graph: &KnowledgeGraph, c: ContributorId) {
        let mut cast = 0;
        let mut topics = BTreeSet::new();
        for v in self.votes().filter(|v| v.contributor == c && v.counts()) {
            cast += 1;
            if let Ok(rel) = graph.relationship(v.relationship) {
                topics.insert(rel.subject);
                topics.insert(rel.object);
            }
        }
        if let Some(rec) = self.contributors.get_mut(&c) {
            rec.votes_cast = cast;
            rec.topics_voted = topics;
        }
    }

    /// Conforming and total counted votes of `c` on resolved relationships.
    fn conformance(&self, graph: &KnowledgeGraph, c: ContributorId) -> (usize, usize) {
        let mut conforming = 0;
        let mut total = 0;
        for v in self.votes().filter(|v| v.contributor == c && v.counts()) {
            let res = match graph.relationship(v.relationship).map(|r| r.state) {
                Ok(EntityState::Accepted) => Resolution::Accepted,
                Ok(EntityState::Rejected) => Resolution::Rejected,
                _ => continue,
            };
            total += 1;
            if conforms(v.value, res) {
                conforming += 1;
            }
        }
        (conforming, total)
    }

    /// Recomputes ROCR for `c`; below the floor, revokes reliability and creator
    /// rights, nullifies every vote of `c` and re-resolves what those votes touched.
    pub fn recompute_reliability(
        &mut self,
        graph: &mut KnowledgeGraph,
        c: ContributorId,
    ) -> Result<ContributorRecord> {
        let touched = self.recompute_one(graph, c)?;
        if self.auto_reliability && !touched.is_empty() {
            let mut voters = Vec::new();
            for r in touched {
                voters.extend(self.voters(r));
            }
            self.reliability_sweep(graph, voters)?;
        }
        Ok(self.contributor(c)?.clone())
    }

    /// Returns relationships whose resolution changed as a result.
    fn recompute_one(
        &mut self,
        graph: &mut KnowledgeGraph,
        c: ContributorId,
    ) -> Result<Vec<RelationshipId>> {
        self.contributor(c)?;
        let (conforming, total) = self.conformance(graph, c);
        let rocr = (total > 0).then(|| conforming as f64 / total as f64);
        let rec = self.contributors.get_mut(&c).expect("checked");
        rec.rocr = rocr;
        let revoke = rec.reliable
            && total >= self.policy.reliability_min_votes as usize
            && rocr.is_some_and(|r| r < self.policy.reliability_floor);
        if !revoke {
            return Ok(Vec::new());
        }
        rec.reliable = false;
        rec.creator = false;
        let mut affected = Vec::new();
        let mut nullified = 0;
        for (rel, list) in &mut self.votes {
            for v in list.iter_mut().filter(|v| v.contributor == c && !v.nullified) {
                v.nullified = true;
                nullified += 1;
                affected.push(*rel);
            }
        }
        let ordinal = self.tick();
        self.audit.push(AuditEvent::Revocation {
            ordinal,
            contributor: c,
            rocr: rocr.unwrap_or(0.0),
            nullified,
        });
        self.refresh_activity(graph, c);
        let mut changed = Vec::new();
        for r in affected {
            if self.reresolve(graph, r)? {
                changed.push(r);
            }
        }
        Ok(changed)
    }

    /// Re-checks contributors until no further revocation changes any resolution.
    fn reliability_sweep(
        &mut self,
        graph: &mut KnowledgeGraph,
        start: Vec<ContributorId>,
    ) -> Result<()> {
        let mut work: Vec<ContributorId> = start;
        while let Some(c) = work.pop() {
            for r in self.recompute_one(graph, c)? {
                work.extend(self.voters(r));
            }
        }
        Ok(())
    }

    /// Runs reliability checks for every contributor.
    pub fn check_all_reliability(&mut self, graph: &mut KnowledgeGraph) -> Result<()> {
        let all: Vec<ContributorId> = self.contributors.keys().copied().collect();
        self.reliability_sweep(graph, all)
    }

    /// Sets creator permission iff every accepted verb is read and the vote
    /// volume and topic spread requirements are met. Idempotent.
    pub fn grant_creator(
        &mut self,
        graph: &KnowledgeGraph,
        c: ContributorId,
    ) -> Result<ContributorRecord> {
        let rec = self.contributor(c)?;
        if !rec.reliable {
            return Err(CurationError::NotReliable(c));
        }
        let read_all = graph
            .relation_types()
            .filter(|v| v.state == EntityState::Accepted)
            .all(|v| rec.verbs_read.contains(&v.id));
        let eligible = read_all
            && rec.votes_cast >= self.policy.creator_min_votes
            && rec.topics_voted.len() >= self.policy.creator_min_topics;
        if rec.creator != eligible {
            let ordinal = self.tick();
            self.audit.push(AuditEvent::Grant {
                ordinal,
                contributor: c,
                creator: eligible,
            });
            self.contributors.get_mut(&c).expect("checked").creator = eligible;
        }
        Ok(self.contributor(c)?.clone())
    }
}
