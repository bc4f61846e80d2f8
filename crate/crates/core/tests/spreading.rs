mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{graph_from_edges, kgrec_with, topic_name};
use kgrec_core::spread::{Kgrec, SeedSet};
use kgrec_core::store::TopicId;
use kgrec_core::Execution;
use proptest::prelude::*;

/// Scores every accepted non-seed topic by scanning the raw relationship
/// list for links to seeds.
fn exhaustive(
    g: &kgrec_core::store::KnowledgeGraph,
    weights: &BTreeMap<TopicId, f64>,
    seeds: &BTreeMap<TopicId, f64>,
    k: usize,
) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for t in g.topics().filter(|t| weights.contains_key(&t.id)) {
        if seeds.contains_key(&t.id) {
            continue;
        }
        let mut linked = BTreeSet::new();
        for r in g.accepted_relationships() {
            if r.subject == t.id && seeds.contains_key(&r.object) {
                linked.insert(r.object);
            }
            if r.object == t.id && seeds.contains_key(&r.subject) {
                linked.insert(r.subject);
            }
        }
        if linked.is_empty() {
            continue;
        }
        let sum: f64 = linked.iter().map(|s| seeds[s]).sum();
        out.push((t.full_name.clone(), weights[&t.id] * sum));
    }
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    out.truncate(k);
    out
}

fn arb_case() -> impl Strategy<Value = (usize, Vec<(usize, usize)>, Vec<f64>, Vec<(usize, f64)>, usize)> {
    (2usize..=20).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n), 0..40),
            prop::collection::vec(0.0f64..=1.0, n),
            prop::collection::vec((0..n, 0.01f64..=1.0), 0..5),
            1usize..8,
        )
    })
}

fn named(k: &Kgrec, ranked: &[(TopicId, f64)]) -> Vec<(String, f64)> {
    ranked.iter().map(|&(t, s)| (k.name(t).unwrap().to_string(), s)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_exhaustive_scoring((n, edges, w, seeds, k) in arb_case()) {
        let (g, ids) = graph_from_edges(n, &edges);
        let kg = kgrec_with(&g, &ids, &w);
        let mut set = SeedSet::new();
        let mut seed_map = BTreeMap::new();
        for (i, p) in seeds {
            if kg.id(&topic_name(i)).is_some() {
                set.insert(ids[i], p).unwrap();
                seed_map.insert(ids[i], p);
            }
        }
        let got = kg.augment(&set, k).unwrap();
        let want = exhaustive(&g, &kg.weights().weights, &seed_map, k);
        let got = named(&kg, &got.ranked);
        prop_assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            prop_assert_eq!(&a.0, &b.0);
            prop_assert!((a.1 - b.1).abs() <= 1e-12);
        }
    }

    #[test]
    fn scale_covariance((n, edges, w, seeds, _k) in arb_case(), lambda in 0.05f64..=1.0) {
        let (g, ids) = graph_from_edges(n, &edges);
        let kg = kgrec_with(&g, &ids, &w);
        let mut base = SeedSet::new();
        let mut scaled = SeedSet::new();
        for (i, p) in seeds {
            if kg.id(&topic_name(i)).is_some() {
                base.insert(ids[i], p).unwrap();
                scaled.insert(ids[i], p * lambda).unwrap();
            }
        }
        let a = kg.augment(&base, n).unwrap();
        let b = kg.augment(&scaled, n).unwrap();
        prop_assert_eq!(a.ranked.len(), b.ranked.len());
        for (x, y) in a.ranked.iter().zip(&b.ranked) {
            prop_assert!((x.1 * lambda - y.1).abs() <= 1e-12);
        }
        // ranking may only differ among exact ties before scaling
        let order_a: Vec<TopicId> = a.ranked.iter().map(|x| x.0).collect();
        let order_b: Vec<TopicId> = b.ranked.iter().map(|x| x.0).collect();
        let scores: BTreeMap<TopicId, f64> = a.ranked.iter().copied().collect();
        for (x, y) in order_a.iter().zip(&order_b) {
            prop_assert!(x == y || (scores[x] - scores[y]).abs() <= 1e-12);
        }
    }

    #[test]
    fn seeds_never_returned_and_scores_bounded((n, edges, w, seeds, k) in arb_case()) {
        let (g, ids) = graph_from_edges(n, &edges);
        let kg = kgrec_with(&g, &ids, &w);
        let mut set = SeedSet::new();
        for (i, p) in seeds {
            if kg.id(&topic_name(i)).is_some() {
                set.insert(ids[i], p).unwrap();
            }
        }
        let r = kg.augment(&set, k).unwrap();
        prop_assert_eq!(r.failed, r.ranked.is_empty());
        prop_assert!(r.ranked.len() <= k);
        for (t, s) in &r.ranked {
            prop_assert!(!set.contains(*t));
            prop_assert!(*s >= 0.0 && *s <= set.len() as f64 + 1e-12);
        }
    }

    #[test]
    fn depth_one_locality((n, edges, w, seeds, k) in arb_case(), extra in prop::collection::vec((0usize..20, 0usize..20), 0..10)) {
        let (g, ids) = graph_from_edges(n, &edges);
        let kg = kgrec_with(&g, &ids, &w);
        let seed_idx: BTreeSet<usize> = seeds.iter().map(|s| s.0).filter(|&i| kg.id(&topic_name(i)).is_some()).collect();
        prop_assume!(!seed_idx.is_empty());
        let adj = g.adjacency();
        let near: BTreeSet<usize> = (0..n)
            .filter(|&i| seed_idx.contains(&i) || seed_idx.iter().any(|&s| adj.is_adjacent(ids[s], ids[i])))
            .collect();
        // add edges among far topics, plus a weight change on them
        let far_edges: Vec<(usize, usize)> = extra
            .into_iter()
            .filter(|(a, b)| *a < n && *b < n && !near.contains(a) && !near.contains(b))
            .collect();
        let mut all_edges = edges.clone();
        all_edges.extend(far_edges);
        let (g2, ids2) = graph_from_edges(n, &all_edges);
        let mut w2 = w.clone();
        for i in (0..n).filter(|i| !near.contains(i)) {
            w2[i] = 0.5 * w2[i];
        }
        let kg2 = kgrec_with(&g2, &ids2, &w2);
        let mk = |kg: &Kgrec, ids: &[TopicId]| {
            let mut s = SeedSet::new();
            for &(i, p) in &seeds {
                if seed_idx.contains(&i) {
                    s.insert(ids[i], p).unwrap();
                }
            }
            named(kg, &kg.augment(&s, k).unwrap().ranked)
        };
        prop_assert_eq!(mk(&kg, &ids), mk(&kg2, &ids2));
    }
}

#[test]
fn batch_modes_agree() {
    let edges: Vec<(usize, usize)> = (0..19).map(|i| (i, i + 1)).chain((0..10).map(|i| (i, 19 - i))).collect();
    let (g, ids) = graph_from_edges(20, &edges);
    let kg = Kgrec::from_graph(&g, 0.5, 0.5).unwrap();
    let seeds: Vec<SeedSet> = ids.iter().map(|&t| SeedSet::certain([t])).collect();
    let a = kg.augment_batch(&seeds, 5, Execution::Sequential);
    let b = kg.augment_batch(&seeds, 5, Execution::Parallel);
    assert_eq!(a, b);
}
