use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::EvalError;

pub const MIN_JUDGES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgment {
    pub project: String,
    pub topic: String,
    pub judge: String,
    pub relevant: bool,
}

/// Human relevance verdicts, decided per (project, topic) by strict majority.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Judgments {
    // (project, topic) → judge → verdict; a judge's later line wins
    verdicts: BTreeMap<(String, String), BTreeMap<String, bool>>,
}

impl Judgments {
    pub fn from_records(records: impl IntoIterator<Item = Judgment>) -> Self {
        let mut j = Self::default();
        for r in records {
            j.verdicts
                .entry((r.project, r.topic))
                .or_default()
                .insert(r.judge, r.relevant);
        }
        j
    }

    pub fn read(reader: impl BufRead) -> Result<Self, EvalError> {
        let mut records = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| EvalError::Io(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let r: Judgment = serde_json::from_str(&line).map_err(|e| EvalError::InvalidJudgment {
                line: i + 1,
                message: e.to_string(),
            })?;
            records.push(r);
        }
        Ok(Self::from_records(records))
    }

    /// Majority verdict; needs at least three judges.
    pub fn relevant(&self, project: &str, topic: &str) -> Result<bool, EvalError> {
        let missing = || EvalError::MissingJudgments {
            project: project.to_string(),
            topic: topic.to_string(),
        };
        let votes = self
            .verdicts
            .get(&(project.to_string(), topic.to_string()))
            .ok_or_else(missing)?;
        if votes.len() < MIN_JUDGES {
            return Err(missing());
        }
        let yes = votes.values().filter(|&&v| v).count();
        Ok(yes * 2 > votes.len())
    }

    pub fn len(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn majority_of_three() {
        let text = [
            r#"{"project":"p","topic":"a","judge":"j1","relevant":true}"#,
            r#"{"project":"p","topic":"a","judge":"j2","relevant":true}"#,
            r#"{"project":"p","topic":"a","judge":"j3","relevant":false}"#,
            r#"{"project":"p","topic":"b","judge":"j1","relevant":true}"#,
            r#"{"project":"p","topic":"b","judge":"j2","relevant":false}"#,
        ]
        .join("\n");
        let j = Judgments::read(text.as_bytes()).unwrap();
        assert_eq!(j.relevant("p", "a"), Ok(true));
        assert!(matches!(j.relevant("p", "b"), Err(EvalError::MissingJudgments { .. })));
        assert!(matches!(j.relevant("q", "a"), Err(EvalError::MissingJudgments { .. })));
    }
}
