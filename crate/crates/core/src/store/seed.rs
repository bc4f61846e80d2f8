//! The shipped seed graph: thirteen relation types and a sample of triples
//! for each of them.

use super::{EntityState, KnowledgeGraph, Origin, Proposer, TopicDraft};
use crate::curation::Curation;

/// `(verb, bidirectional, definition)`
pub const RELATION_TYPES: [(&str, bool, &str); 13] = [
    ("is-a", false, "Groups the subject with other topics of the same kind."),
    ("is-used-in-field", false, "Links the subject to the field or application area it is used in."),
    ("provides-functionality", false, "Links the subject to the functional purpose it serves."),
    ("works-with", true, "The two topics depend on or are compatible with each other."),
    ("is-subset-of", false, "Places the subject under a broader concept."),
    ("is-based-on", false, "The subject was created or built using the object."),
    ("is-focused-on", false, "Names a concern the subject emphasizes."),
    ("has-property", false, "Attaches a well-known metadata topic to the subject."),
    ("overlaps-with", true, "The two topics share common ground without depending on each other."),
    ("provides-product", false, "The subject creates and offers the object as a product."),
    ("provided-by", false, "The subject is a product offered by the object."),
    ("maintained-by", false, "The object is the authority maintaining the subject."),
    ("has-license", false, "Links the subject to its license."),
];

/// `(subject, verb, object)`
pub const TRIPLES: [(&str, &str, &str); 41] = [
    ("django", "is-a", "framework"),
    ("android", "is-a", "operating-system"),
    ("atom", "is-a", "text-editor"),
    ("django", "is-used-in-field", "web-development"),
    ("3d", "is-used-in-field", "graphics"),
    ("azure", "is-used-in-field", "cloud-computing"),
    ("django", "provides-functionality", "backend"),
    ("auth0", "provides-functionality", "authentication"),
    ("blockchain", "provides-functionality", "decentralization"),
    ("django", "works-with", "python"),
    ("blockchain", "works-with", "cryptography"),
    ("kubernetes", "works-with", "docker"),
    ("deep-learning", "is-subset-of", "neural-network"),
    ("image-processing", "is-subset-of", "machine-learning"),
    ("continuous-deployment", "is-subset-of", "cicd"),
    ("user-experience", "is-subset-of", "ui-ux"),
    ("archlinux", "is-based-on", "linux"),
    ("xmake", "is-based-on", "lua"),
    ("reactiveui", "is-based-on", "mvvm"),
    ("agile", "is-focused-on", "flexibility"),
    ("agile", "is-focused-on", "speed"),
    ("end-to-end-encryption", "is-focused-on", "privacy"),
    ("neo4j", "is-focused-on", "scalability"),
    ("mysql", "has-property", "open-source"),
    ("anki", "has-property", "cross-platform"),
    ("elite-dangerous", "has-property", "multiplayer"),
    ("robotics", "overlaps-with", "ai"),
    ("data-science", "overlaps-with", "ai"),
    ("nlp", "overlaps-with", "machine-learning"),
    ("google", "provides-product", "flutter"),
    ("amazon", "provides-product", "aws"),
    ("mediawiki", "provides-product", "wikipedia"),
    ("atom", "provided-by", "github"),
    ("flutter", "provided-by", "google"),
    ("macos", "provided-by", "apple"),
    ("html", "maintained-by", "w3c"),
    ("symfony", "maintained-by", "sensiolabs-sas"),
    ("uportal", "maintained-by", "apereo"),
    ("backbonejs", "has-license", "mit-license"),
    ("ansible", "has-license", "gnu-gpl-license"),
    ("robotframework", "has-license", "apache-license"),
];

/// Builds the seed graph with every triple accepted.
pub fn seed_graph() -> KnowledgeGraph {
    let mut g = KnowledgeGraph::new("seed");
    for (verb, bidirectional, definition) in RELATION_TYPES {
        g.add_relation_type(verb, definition, bidirectional)
            .expect("seed verbs are unique");
    }
    for (s, v, o) in TRIPLES {
        let subject = topic(&mut g, s);
        let object = topic(&mut g, o);
        let verb = g.verb_id(v).expect("seed verb");
        let r = g
            .add_relationship(subject, verb, object, Proposer::Maintainer)
            .expect("seed triples are unique");
        g.set_relationship_state(r, EntityState::Accepted)
            .expect("just added");
    }
    g
}

fn topic(g: &mut KnowledgeGraph, name: &str) -> super::TopicId {
    match g.topic_by_name(name) {
        Some(t) => t.id,
        None => g
            .add_topic(TopicDraft::new(name, Origin::Maintainer))
            .expect("seed names are valid"),
    }
}

/// The seed graph in snapshot form.
pub fn seed_snapshot_text() -> String {
    super::snapshot::export_to_string(&seed_graph(), &Curation::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn seed_shape() {
        let g = seed_graph();
        assert_eq!(g.relation_types().count(), 13);
        assert_eq!(g.relationship_count(), TRIPLES.len());
        let bidi: Vec<&str> = g
            .relation_types()
            .filter(|v| v.bidirectional)
            .map(|v| v.verb.as_str())
            .collect();
        assert_eq!(bidi, ["works-with", "overlaps-with"]);
        assert!(g.topics().all(|t| t.state == EntityState::Accepted));
        assert!(g.relation_types().all(|v| v.state == EntityState::Accepted));
        g.validate().unwrap();
    }

    #[test]
    fn shipped_file_matches_generator() {
        let shipped = include_str!("../../data/seed.jsonl");
        assert_eq!(shipped, seed_snapshot_text());
    }

    #[test]
    fn most_connected_topic_matches_edge_count() {
        // count endpoint appearances straight from the triple list
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for (s, _, o) in TRIPLES {
            *counts.entry(s).or_default() += 1;
            *counts.entry(o).or_default() += 1;
        }
        let max = *counts.values().max().unwrap();
        let expected: Vec<&str> = counts
            .iter()
            .filter(|(_, &c)| c == max)
            .map(|(n, _)| *n)
            .collect();
        let g = seed_graph();
        let adj = g.adjacency();
        let best = g.topics().map(|t| adj.degree(t.id)).max().unwrap();
        let got: Vec<&str> = g
            .topics()
            .filter(|t| adj.degree(t.id) == best)
            .map(|t| t.full_name.as_str())
            .collect();
        assert_eq!(best, max);
        assert_eq!(got, expected);
        assert_eq!(expected, ["django"]);
    }
}
