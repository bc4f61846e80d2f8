use kgrec_core::curation::{
    curation_metrics, AcceptancePolicy, Background, ContributorProfile, Curation, CurationError,
    CurationTally, Resolution, VoteValue,
};
use kgrec_core::store::{
    ContributorId, EntityState, KnowledgeGraph, Origin, Proposer, RelationshipId, TopicDraft,
};
use proptest::prelude::*;

struct Fixture {
    graph: KnowledgeGraph,
    curation: Curation,
    rels: Vec<RelationshipId>,
    people: Vec<ContributorId>,
}

fn fixture(relationships: usize, contributors: usize) -> Fixture {
    let mut graph = KnowledgeGraph::new("c");
    let verb = graph.add_relation_type("is-a", "", false).unwrap();
    let hub = graph.add_topic(TopicDraft::new("hub", Origin::Maintainer)).unwrap();
    let rels = (0..relationships)
        .map(|i| {
            let t = graph.add_topic(TopicDraft::new(format!("leaf-{i}"), Origin::Maintainer)).unwrap();
            graph.add_relationship(t, verb, hub, Proposer::Maintainer).unwrap()
        })
        .collect();
    let mut curation = Curation::default();
    let people = (0..contributors)
        .map(|i| {
            let c = curation.register(ContributorProfile {
                name: format!("p{i}"),
                background: Background::Industry,
                years_experience: 2,
            });
            curation.mark_verb_read(&graph, c, verb).unwrap();
            c
        })
        .collect();
    Fixture { graph, curation, rels, people }
}

/// Casts votes in order, one voter each, until the relationship resolves.
fn run_sequence(values: &[VoteValue]) -> Resolution {
    let mut f = fixture(1, values.len().max(1));
    f.curation.auto_reliability = false;
    let r = f.rels[0];
    for (i, &v) in values.iter().enumerate() {
        match f.curation.cast_vote(&mut f.graph, f.people[i], r, v) {
            Ok(_) => {}
            Err(CurationError::AlreadyResolved(_)) => break,
            Err(e) => panic!("{e}"),
        }
    }
    match f.graph.relationship(r).unwrap().state {
        EntityState::Pending => Resolution::Open,
        EntityState::Accepted => Resolution::Accepted,
        EntityState::Rejected => Resolution::Rejected,
    }
}

fn vote(b: bool) -> VoteValue {
    if b {
        VoteValue::True
    } else {
        VoteValue::False
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn null_votes_are_neutral(
        counted in prop::collection::vec(any::<bool>(), 0..10),
        nulls in prop::collection::vec(0usize..12, 0..6),
    ) {
        let plain: Vec<VoteValue> = counted.iter().map(|&b| vote(b)).collect();
        let mut mixed = plain.clone();
        for p in nulls {
            let at = p.min(mixed.len());
            mixed.insert(at, VoteValue::Null);
        }
        prop_assert_eq!(run_sequence(&plain), run_sequence(&mixed));
    }

    #[test]
    fn resolution_is_deterministic(counted in prop::collection::vec(any::<bool>(), 0..10)) {
        let seq: Vec<VoteValue> = counted.iter().map(|&b| vote(b)).collect();
        prop_assert_eq!(run_sequence(&seq), run_sequence(&seq));
    }

    #[test]
    fn metric_bounds(outcomes in prop::collection::vec((0u32..9, 0u32..9, any::<bool>()), 1..30)) {
        let policy = AcceptancePolicy::default();
        let tallies: Vec<CurationTally> = outcomes
            .iter()
            .enumerate()
            .map(|(i, &(t, f, unanimous))| {
                let mut tally = CurationTally {
                    relationship: RelationshipId(i as u64),
                    true_count: t,
                    false_count: f,
                    null_count: 0,
                    opened_unanimous: unanimous && t >= 3,
                    resolution: Resolution::Open,
                };
                tally.resolution = kgrec_core::curation::resolve_acceptance(&tally, &policy);
                tally
            })
            .collect();
        let Ok(m) = curation_metrics(&tallies, &[]) else {
            prop_assert!(tallies.iter().all(|t| t.resolution == Resolution::Open));
            return Ok(());
        };
        for x in [m.sr, m.aartr, m.arocr] {
            prop_assert!((0.0..=1.0).contains(&x));
        }
        let all_unanimous = tallies
            .iter()
            .filter(|t| t.resolution == Resolution::Accepted)
            .all(|t| t.false_count == 0);
        prop_assert_eq!(m.aartr == 1.0, all_unanimous);
    }
}

#[test]
fn threshold_is_monotone_with_fixed_ends() {
    let p = AcceptancePolicy::default();
    assert_eq!(p.threshold(3), 1.0);
    assert!((p.threshold(9) - 0.65).abs() < 1e-15);
    for v in 3..20 {
        assert!(p.threshold(v + 1) <= p.threshold(v));
    }
}

#[test]
fn revoked_votes_stop_counting() {
    // p0 votes against the outcome on four relationships and is revoked once
    // the first resolves; a fifth relationship it backed stays open on one vote.
    let mut f = fixture(5, 7);
    let (bad, good) = (f.people[0], &f.people[1..6]);
    f.curation
        .cast_vote(&mut f.graph, bad, f.rels[4], VoteValue::True)
        .unwrap();
    for &r in &f.rels[..4] {
        f.curation.cast_vote(&mut f.graph, bad, r, VoteValue::False).unwrap();
    }
    for &r in &f.rels[..4] {
        for &c in good {
            let _ = f.curation.cast_vote(&mut f.graph, c, r, VoteValue::True);
        }
        assert_eq!(f.graph.relationship(r).unwrap().state, EntityState::Accepted);
    }
    f.curation.cast_vote(&mut f.graph, f.people[6], f.rels[4], VoteValue::True).unwrap();

    let rec = f.curation.contributor(bad).unwrap();
    assert!(!rec.reliable && !rec.creator);
    for r in &f.rels {
        let tally = f.curation.tally(*r);
        assert!(f
            .curation
            .votes_on(*r)
            .iter()
            .filter(|v| v.contributor == bad)
            .all(|v| v.nullified));
        assert_eq!(f.graph.relationship(*r).unwrap().state, tally.resolution.state());
    }
    assert_eq!(f.curation.tally(f.rels[4]).true_count, 1);
    assert_eq!(
        f.curation.cast_vote(&mut f.graph, bad, f.rels[4], VoteValue::True),
        Err(CurationError::NotReliable(bad))
    );
    f.graph.validate().unwrap();
}
