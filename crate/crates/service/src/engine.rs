//! Deterministic state machine behind the service: every mutation is a
//! [`Command`], and applying the same commands to the same state always
//! yields the same state and the same outcomes.

use std::collections::{BTreeMap, BTreeSet};

use kgrec_core::curation::{
    ContributorProfile, ContributorRecord, Curation, CurationError, CurationTally, VoteValue,
};
use kgrec_core::store::snapshot::Snapshot;
use kgrec_core::store::{
    detect_redundancy, ContributorId, KnowledgeGraph, Origin, Proposer, Redundancy, RelationshipId,
    StoreError, TopicDraft, TopicId, VerbId, DEFAULT_REDUNDANCY_THRESHOLD,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Curation(#[from] CurationError),
    #[error("`{name}` is close to existing topics; resubmit with the warning acknowledged")]
    Redundant {
        name: String,
        matches: Vec<Redundancy>,
    },
    #[error("only maintainers may create {0} topics")]
    OriginNotAllowed(String),
}

/// Who issues a mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "role", content = "id")]
pub enum Actor {
    Maintainer,
    Contributor(ContributorId),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TopicInput {
    pub full_name: String,
    pub display_name: String,
    pub aliases: BTreeSet<String>,
    pub description: String,
    pub info_links: Vec<String>,
    /// Only maintainers may set a non-contributor origin.
    pub origin: Option<Origin>,
    pub acknowledge_redundancy: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Command {
    RegisterContributor {
        profile: ContributorProfile,
    },
    AddTopic {
        actor: Actor,
        topic: TopicInput,
    },
    AddRelationType {
        actor: Actor,
        verb: String,
        #[serde(default)]
        definition: String,
        #[serde(default)]
        bidirectional: bool,
    },
    AddRelationship {
        actor: Actor,
        subject: String,
        verb: String,
        object: String,
    },
    MarkVerbRead {
        contributor: ContributorId,
        verb: VerbId,
    },
    CastVote {
        contributor: ContributorId,
        relationship: RelationshipId,
        value: VoteValue,
    },
    GrantCreator {
        contributor: ContributorId,
    },
    CheckReliability,
    SetPopularity {
        counts: BTreeMap<String, u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Outcome {
    Contributor(ContributorRecord),
    Topic(TopicId),
    RelationType(VerbId),
    Relationship(RelationshipId),
    Tally(CurationTally),
    /// Number of topics whose popularity was set.
    Popularity(usize),
    Done,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Engine {
    pub graph: KnowledgeGraph,
    pub curation: Curation,
}

impl From<Snapshot> for Engine {
    fn from(s: Snapshot) -> Self {
        Self {
            graph: s.graph,
            curation: s.curation,
        }
    }
}

impl Engine {
    pub fn new(graph: KnowledgeGraph, curation: Curation) -> Self {
        Self { graph, curation }
    }

    fn require_creator(&self, actor: Actor) -> Result<Option<ContributorId>, EngineError> {
        match actor {
            Actor::Maintainer => Ok(None),
            Actor::Contributor(c) => {
                self.curation.require_creator(c)?;
                Ok(Some(c))
            }
        }
    }

    pub fn apply(&mut self, cmd: &Command) -> Result<Outcome, EngineError> {
        match cmd {
            Command::RegisterContributor { profile } => {
                let id = self.curation.register(profile.clone());
                Ok(Outcome::Contributor(self.curation.contributor(id)?.clone()))
            }
            Command::AddTopic { actor, topic } => {
                let by = self.require_creator(*actor)?;
                let origin = match (by, topic.origin) {
                    (None, o) => o.unwrap_or(Origin::Maintainer),
                    (Some(_), None | Some(Origin::Contributor)) => Origin::Contributor,
                    (Some(_), Some(o)) => {
                        return Err(EngineError::OriginNotAllowed(
                            serde_json::to_string(&o).unwrap_or_default(),
                        ))
                    }
                };
                let draft = TopicDraft {
                    full_name: topic.full_name.clone(),
                    display_name: topic.display_name.clone(),
                    aliases: topic.aliases.clone(),
                    description: topic.description.clone(),
                    info_links: topic.info_links.clone(),
                    origin,
                };
                if self.graph.topic_by_name(&draft.full_name).is_some() {
                    return Err(StoreError::DuplicateName(draft.full_name).into());
                }
                if !topic.acknowledge_redundancy {
                    let matches =
                        detect_redundancy(&draft, &self.graph, DEFAULT_REDUNDANCY_THRESHOLD, None);
                    if !matches.is_empty() {
                        return Err(EngineError::Redundant {
                            name: draft.full_name,
                            matches,
                        });
                    }
                }
                Ok(Outcome::Topic(self.graph.add_topic(draft)?))
            }
            Command::AddRelationType {
                actor,
                verb,
                definition,
                bidirectional,
            } => {
                self.require_creator(*actor)?;
                Ok(Outcome::RelationType(self.graph.add_relation_type(
                    verb,
                    definition,
                    *bidirectional,
                )?))
            }
            Command::AddRelationship {
                actor,
                subject,
                verb,
                object,
            } => {
                let by = self.require_creator(*actor)?;
                let s = self.graph.topic_id(subject)?;
                let v = self.graph.verb_id(verb)?;
                let o = self.graph.topic_id(object)?;
                let proposer = by.map_or(Proposer::Maintainer, Proposer::Contributor);
                Ok(Outcome::Relationship(
                    self.graph.add_relationship(s, v, o, proposer)?,
                ))
            }
            Command::MarkVerbRead { contributor, verb } => {
                self.curation
                    .mark_verb_read(&self.graph, *contributor, *verb)?;
                Ok(Outcome::Done)
            }
            Command::CastVote {
                contributor,
                relationship,
                value,
            } => Ok(Outcome::Tally(self.curation.cast_vote(
                &mut self.graph,
                *contributor,
                *relationship,
                *value,
            )?)),
            Command::GrantCreator { contributor } => Ok(Outcome::Contributor(
                self.curation.grant_creator(&self.graph, *contributor)?,
            )),
            Command::CheckReliability => {
                self.curation.check_all_reliability(&mut self.graph)?;
                Ok(Outcome::Done)
            }
            Command::SetPopularity { counts } => {
                let mut set = 0;
                for (name, &n) in counts {
                    if let Some(t) = self.graph.topic_by_name(name).map(|t| t.id) {
                        self.graph.set_popularity(t, n)?;
                        set += 1;
                    }
                }
                Ok(Outcome::Popularity(set))
            }
        }
    }
}
