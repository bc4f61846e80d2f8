//! Random command workloads over the seed graph.
#![allow(dead_code)]

use kgrec_core::curation::{Background, ContributorProfile, VoteValue};
use kgrec_core::store::seed::seed_graph;
use kgrec_core::store::{ContributorId, RelationshipId, VerbId};
use kgrec_service::engine::{Actor, Command, TopicInput};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn seed_names() -> (Vec<String>, Vec<String>) {
    let g = seed_graph();
    let topics = g.topics().map(|t| t.full_name.clone()).collect();
    let verbs = g.relation_types().map(|v| v.verb.clone()).collect();
    (topics, verbs)
}

/// A mix of valid and invalid commands. Relationship and contributor ids are
/// guessed from counts, so some votes target things that do not exist.
pub fn workload(seed: u64, len: usize) -> Vec<Command> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (topics, verbs) = seed_names();
    let base_relationships = seed_graph().relationships().count() as u64;
    let mut contributors = 0u64;
    let mut proposed = 0u64;
    // Each proposal leans true or false so that tallies resolve both ways.
    let mut lean = Vec::new();
    let mut out = Vec::with_capacity(len);
    while out.len() < len {
        let roll = rng.gen_range(0..100);
        let cmd = if contributors < 3 || roll < 12 {
            out.push(Command::RegisterContributor {
                profile: ContributorProfile {
                    name: format!("user{contributors}"),
                    background: if rng.gen_bool(0.5) {
                        Background::Academia
                    } else {
                        Background::Industry
                    },
                    years_experience: rng.gen_range(0..6),
                },
            });
            contributors += 1;
            // Most newcomers read every definition right away.
            if rng.gen_bool(0.7) {
                for v in 0..verbs.len() as u64 {
                    out.push(Command::MarkVerbRead {
                        contributor: ContributorId(contributors - 1),
                        verb: VerbId(v),
                    });
                }
            }
            continue;
        } else if roll < 22 {
            Command::MarkVerbRead {
                contributor: ContributorId(rng.gen_range(0..contributors)),
                verb: VerbId(rng.gen_range(0..verbs.len() as u64)),
            }
        } else if roll < 28 {
            proposed += 1;
            lean.push(rng.gen_bool(0.6));
            Command::AddRelationship {
                actor: Actor::Maintainer,
                subject: topics.choose(&mut rng).unwrap().clone(),
                verb: verbs.choose(&mut rng).unwrap().clone(),
                object: topics.choose(&mut rng).unwrap().clone(),
            }
        } else if roll < 85 {
            let span = base_relationships + proposed.max(1);
            let recent = span - if rng.gen_bool(0.7) { 1 } else { 2 };
            let leans_true = lean
                .get(recent.wrapping_sub(base_relationships) as usize)
                .copied()
                .unwrap_or(true);
            let value = match rng.gen_range(0..10) {
                0 => VoteValue::Null,
                1 => VoteValue::from(Some(!leans_true)),
                _ => VoteValue::from(Some(leans_true)),
            };
            Command::CastVote {
                contributor: ContributorId(rng.gen_range(0..contributors)),
                relationship: RelationshipId(if rng.gen_bool(0.9) {
                    recent
                } else {
                    rng.gen_range(base_relationships.saturating_sub(2)..span + 1)
                }),
                value,
            }
        } else if roll < 90 {
            Command::AddTopic {
                actor: if rng.gen_bool(0.8) {
                    Actor::Maintainer
                } else {
                    Actor::Contributor(ContributorId(rng.gen_range(0..contributors)))
                },
                topic: TopicInput {
                    full_name: format!("topic-{}", rng.gen_range(0..40)),
                    acknowledge_redundancy: rng.gen_bool(0.5),
                    ..Default::default()
                },
            }
        } else if roll < 94 {
            Command::GrantCreator {
                contributor: ContributorId(rng.gen_range(0..contributors)),
            }
        } else if roll < 97 {
            Command::CheckReliability
        } else {
            let t = topics.choose(&mut rng).unwrap().clone();
            Command::SetPopularity {
                counts: [(t, rng.gen_range(0..5000))].into(),
            }
        };
        out.push(cmd);
    }
    out.truncate(len);
    out
}
