//! Line-delimited JSON snapshot format.
//!
//! The first line is a header record; every following line is one entity,
//! tagged by its `kind` field (`topic`, `verb`, `relationship`, `contributor`
//! or `vote`). Records appear in that order, sorted by id.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    ContributorId, EntityState, KnowledgeGraph, Origin, Proposer, RelationType, Relationship,
    RelationshipId, StoreError, Topic, TopicId, VerbId,
};
use crate::curation::{AcceptancePolicy, ContributorRecord, Curation, CurationError, Vote, VoteValue};

pub const FORMAT: &str = "kgrec-snapshot";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<StoreError> for SnapshotError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::InvariantViolation(m) => SnapshotError::InvariantViolation(m),
            other => SnapshotError::InvariantViolation(other.to_string()),
        }
    }
}

impl From<CurationError> for SnapshotError {
    fn from(e: CurationError) -> Self {
        match e {
            CurationError::Store(s) => s.into(),
            other => SnapshotError::InvariantViolation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub format: String,
    pub version: u32,
    #[serde(default)]
    pub label: String,
    /// Last journal sequence number folded into this snapshot.
    #[serde(default)]
    pub sequence: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TopicRecord {
    id: TopicId,
    full_name: String,
    display_name: String,
    aliases: Vec<String>,
    description: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    info_links: Vec<String>,
    origin: Origin,
    state: EntityState,
    popularity_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VerbRecord {
    id: VerbId,
    verb: String,
    definition: String,
    bidirectional: bool,
    state: EntityState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RelationshipRecord {
    id: RelationshipId,
    subject: TopicId,
    verb: VerbId,
    object: TopicId,
    state: EntityState,
    proposer: ProposerField,
}

/// `"maintainer"` or a contributor id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ProposerField {
    Named(String),
    Contributor(ContributorId),
}

impl From<Proposer> for ProposerField {
    fn from(p: Proposer) -> Self {
        match p {
            Proposer::Maintainer => ProposerField::Named("maintainer".into()),
            Proposer::Contributor(c) => ProposerField::Contributor(c),
        }
    }
}

impl TryFrom<ProposerField> for Proposer {
    type Error = String;
    fn try_from(p: ProposerField) -> Result<Self, String> {
        match p {
            ProposerField::Named(s) if s == "maintainer" => Ok(Proposer::Maintainer),
            ProposerField::Named(s) => Err(format!("unknown proposer `{s}`")),
            ProposerField::Contributor(c) => Ok(Proposer::Contributor(c)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VoteRecord {
    contributor: ContributorId,
    relationship: RelationshipId,
    value: VoteValue,
    timestamp: u64,
    #[serde(default)]
    nullified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Record {
    Header(Header),
    Topic(TopicRecord),
    Verb(VerbRecord),
    Relationship(RelationshipRecord),
    Contributor(ContributorRecord),
    Vote(VoteRecord),
}

/// Everything a snapshot carries.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub graph: KnowledgeGraph,
    pub curation: Curation,
    pub sequence: u64,
}

impl Snapshot {
    pub fn new(graph: KnowledgeGraph, curation: Curation) -> Self {
        Self {
            graph,
            curation,
            sequence: 0,
        }
    }
}

fn write_record<W: Write>(out: &mut W, r: &Record) -> std::io::Result<()> {
    serde_json::to_writer(&mut *out, r)?;
    out.write_all(b"\n")
}

/// Writes a graph and its curation state.
pub fn export<W: Write>(
    out: &mut W,
    graph: &KnowledgeGraph,
    curation: &Curation,
    sequence: u64,
) -> std::io::Result<()> {
    write_record(
        out,
        &Record::Header(Header {
            format: FORMAT.into(),
            version: VERSION,
            label: graph.snapshot_label.clone(),
            sequence,
        }),
    )?;
    for t in graph.topics() {
        write_record(
            out,
            &Record::Topic(TopicRecord {
                id: t.id,
                full_name: t.full_name.clone(),
                display_name: t.display_name.clone(),
                aliases: t.aliases.iter().cloned().collect(),
                description: t.description.clone(),
                info_links: t.info_links.clone(),
                origin: t.origin,
                state: t.state,
                popularity_count: t.popularity_count,
            }),
        )?;
    }
    for v in graph.relation_types() {
        write_record(
            out,
            &Record::Verb(VerbRecord {
                id: v.id,
                verb: v.verb.clone(),
                definition: v.definition.clone(),
                bidirectional: v.bidirectional,
                state: v.state,
            }),
        )?;
    }
    for r in graph.relationships() {
        write_record(
            out,
            &Record::Relationship(RelationshipRecord {
                id: r.id,
                subject: r.subject,
                verb: r.verb,
                object: r.object,
                state: r.state,
                proposer: r.proposer.into(),
            }),
        )?;
    }
    for c in curation.contributors() {
        write_record(out, &Record::Contributor(c.clone()))?;
    }
    for v in curation.votes() {
        write_record(
            out,
            &Record::Vote(VoteRecord {
                contributor: v.contributor,
                relationship: v.relationship,
                value: v.value,
                timestamp: v.timestamp,
                nullified: v.nullified,
            }),
        )?;
    }
    Ok(())
}

pub fn export_to_string(graph: &KnowledgeGraph, curation: &Curation) -> String {
    let mut buf = Vec::new();
    export(&mut buf, graph, curation, 0).expect("writing to memory");
    String::from_utf8(buf).expect("json is utf-8")
}

/// Reads and validates a snapshot.
pub fn import<R: BufRead>(input: R, policy: AcceptancePolicy) -> Result<Snapshot, SnapshotError> {
    let mut graph = KnowledgeGraph::default();
    let mut contributors = Vec::new();
    let mut votes = Vec::new();
    let mut header = None;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| SnapshotError::Parse {
            line: line_no,
            message,
        };
        let record: Record = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        match record {
            Record::Header(h) => {
                if header.is_some() || line_no != 1 {
                    return Err(parse_err("header must be the first and only header".into()));
                }
                if h.format != FORMAT || h.version != VERSION {
                    return Err(parse_err(format!(
                        "unsupported format {} v{}",
                        h.format, h.version
                    )));
                }
                graph.snapshot_label = h.label.clone();
                header = Some(h);
            }
            _ if header.is_none() => return Err(parse_err("missing header".into())),
            Record::Topic(t) => graph
                .insert_topic_raw(Topic {
                    id: t.id,
                    full_name: t.full_name,
                    display_name: t.display_name,
                    aliases: t.aliases.into_iter().collect(),
                    description: t.description,
                    info_links: t.info_links,
                    origin: t.origin,
                    state: t.state,
                    popularity_count: t.popularity_count,
                })
                .map_err(|e| parse_err(e.to_string()))?,
            Record::Verb(v) => graph
                .insert_verb_raw(RelationType {
                    id: v.id,
                    verb: v.verb,
                    definition: v.definition,
                    bidirectional: v.bidirectional,
                    state: v.state,
                })
                .map_err(|e| parse_err(e.to_string()))?,
            Record::Relationship(r) => {
                let proposer = Proposer::try_from(r.proposer).map_err(parse_err)?;
                graph
                    .insert_relationship_raw(Relationship {
                        id: r.id,
                        subject: r.subject,
                        verb: r.verb,
                        object: r.object,
                        state: r.state,
                        proposer,
                    })
                    .map_err(|e| parse_err(e.to_string()))?
            }
            Record::Contributor(c) => contributors.push(c),
            Record::Vote(v) => votes.push(Vote {
                contributor: v.contributor,
                relationship: v.relationship,
                value: v.value,
                timestamp: v.timestamp,
                nullified: v.nullified,
            }),
        }
    }
    let header = header.ok_or(SnapshotError::Parse {
        line: 0,
        message: "empty snapshot".into(),
    })?;
    graph.validate()?;
    let curation = Curation::from_parts(policy, &graph, contributors, votes)?;
    Ok(Snapshot {
        graph,
        curation,
        sequence: header.sequence,
    })
}

pub fn import_str(text: &str) -> Result<Snapshot, SnapshotError> {
    import(text.as_bytes(), AcceptancePolicy::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curation::{Background, ContributorProfile};
    use crate::store::TopicDraft;

    #[test]
    fn empty_graph_is_header_only() {
        let g = KnowledgeGraph::new("empty");
        let text = export_to_string(&g, &Curation::default());
        assert_eq!(text.lines().count(), 1);
        assert!(text.contains("\"kind\":\"header\""));
        let back = import_str(&text).unwrap();
        assert_eq!(back.graph, g);
    }

    fn small() -> (KnowledgeGraph, Curation) {
        let mut g = KnowledgeGraph::new("small");
        let a = g.add_topic(TopicDraft::new("django", Origin::GithubFeatured)).unwrap();
        let b = g.add_topic(TopicDraft::new("python", Origin::Maintainer)).unwrap();
        let c = g.add_topic(TopicDraft::new("framework", Origin::Contributor)).unwrap();
        let is_a = g.add_relation_type("is-a", "categorization", false).unwrap();
        let ww = g.add_relation_type("works-with", "dependency", true).unwrap();
        let r1 = g.add_relationship(a, ww, b, Proposer::Maintainer).unwrap();
        g.add_relationship(a, is_a, c, Proposer::Maintainer).unwrap();
        let mut cur = Curation::default();
        for i in 0..3 {
            let p = cur.register(ContributorProfile {
                name: format!("p{i}"),
                background: Background::Academia,
                years_experience: 4,
            });
            cur.mark_verb_read(&g, p, ww).unwrap();
            cur.cast_vote(&mut g, p, r1, VoteValue::True).unwrap();
        }
        (g, cur)
    }

    #[test]
    fn round_trip_identity() {
        let (g, cur) = small();
        let text = export_to_string(&g, &cur);
        let back = import_str(&text).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.curation.tallies(), cur.tallies());
        assert_eq!(export_to_string(&back.graph, &back.curation), text);
    }

    #[test]
    fn unknown_topic_reference_is_rejected() {
        let (g, cur) = small();
        let text = export_to_string(&g, &cur).replace("\"subject\":0", "\"subject\":42");
        assert!(matches!(
            import_str(&text),
            Err(SnapshotError::InvariantViolation(_))
        ));
    }

    #[test]
    fn malformed_line_reports_position() {
        let (g, cur) = small();
        let mut text = export_to_string(&g, &cur);
        text.push_str("{\"kind\":\"topic\",\"id\":\n");
        let n = text.lines().count();
        match import_str(&text) {
            Err(SnapshotError::Parse { line, .. }) => assert_eq!(line, n),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_state_is_rejected() {
        let (g, cur) = small();
        // claim the voted relationship is still pending
        let text = export_to_string(&g, &cur).replacen(
            "\"state\":\"accepted\",\"proposer\"",
            "\"state\":\"pending\",\"proposer\"",
            1,
        );
        assert!(matches!(
            import_str(&text),
            Err(SnapshotError::InvariantViolation(_))
        ));
    }
}
