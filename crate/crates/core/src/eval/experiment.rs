use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{asr_at_k, fcr, map_at_k, EvalError, EvaluationCase, Judgments};
use crate::classify::RepositoryRecord;
use crate::Execution;

/// What a system sees for one test project, and the topics it should find.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCase {
    pub project: String,
    pub text: String,
    /// Topics handed to the system as input.
    pub given: Vec<String>,
    /// Ground-truth topics a recommendation should hit.
    pub truth: BTreeSet<String>,
}

/// Hides a `holdout` share of each project's topics (at least one when the
/// project has two or more) and gives the rest as input.
pub fn augmentation_cases(records: &[RepositoryRecord], holdout: f64, seed: u64) -> Vec<TestCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    records
        .iter()
        .map(|r| {
            let mut topics: Vec<String> = r.topic_set().into_iter().map(str::to_string).collect();
            topics.shuffle(&mut rng);
            let n = topics.len();
            let hide = if n < 2 {
                0
            } else {
                ((n as f64 * holdout).round() as usize).clamp(1, n - 1)
            };
            let truth: BTreeSet<String> = topics.drain(..hide).collect();
            topics.sort();
            TestCase {
                project: r.id.clone(),
                text: r.text.clone(),
                given: topics,
                truth,
            }
        })
        .collect()
}

/// Text-only cases: every topic is ground truth.
pub fn full_cases(records: &[RepositoryRecord]) -> Vec<TestCase> {
    records
        .iter()
        .map(|r| TestCase {
            project: r.id.clone(),
            text: r.text.clone(),
            given: Vec::new(),
            truth: r.topics.iter().cloned().collect(),
        })
        .collect()
}

type Runner<'a> = Box<dyn Fn(&TestCase) -> Vec<String> + Sync + 'a>;

/// A named recommender under test.
pub struct System<'a> {
    pub name: String,
    run: Runner<'a>,
}

impl<'a> System<'a> {
    pub fn new(name: impl Into<String>, run: impl Fn(&TestCase) -> Vec<String> + Sync + 'a) -> Self {
        Self {
            name: name.into(),
            run: Box::new(run),
        }
    }

    pub fn recommend(&self, case: &TestCase) -> Vec<String> {
        (self.run)(case)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum RelevanceSource<'a> {
    /// Membership in the case's ground-truth set.
    GroundTruth,
    /// Majority verdict of human judges.
    Judgments(&'a Judgments),
}

impl RelevanceSource<'_> {
    fn mode(&self) -> &'static str {
        match self {
            RelevanceSource::GroundTruth => "automated",
            RelevanceSource::Judgments(_) => "manual",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExperimentConfig {
    pub k: usize,
    /// Size of the subsample that list-quality metrics are computed over.
    pub sample: Option<usize>,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            k: 5,
            sample: None,
            seed: 0,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub system: String,
    pub mode: String,
    pub cases: usize,
    pub failed: usize,
    pub fcr: f64,
    pub sample_cases: Option<usize>,
    pub fcr_sample: Option<f64>,
    /// `None` when every scored case failed.
    pub asr: Option<f64>,
    pub map: Option<f64>,
    pub k: usize,
    pub config: String,
}

fn score(
    case: &TestCase,
    recommended: Vec<String>,
    k: usize,
    relevance: RelevanceSource<'_>,
) -> Result<EvaluationCase, EvalError> {
    let mut recommended = recommended;
    recommended.truncate(k);
    let flags = recommended
        .iter()
        .map(|t| match relevance {
            RelevanceSource::GroundTruth => Ok(case.truth.contains(t)),
            RelevanceSource::Judgments(j) => j.relevant(&case.project, t),
        })
        .collect::<Result<Vec<bool>, EvalError>>()?;
    EvaluationCase::new(case.project.clone(), recommended, flags)
}

fn optional(r: Result<f64, EvalError>) -> Result<Option<f64>, EvalError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(EvalError::EmptyInput) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs every system on the same cases and the same sample.
pub fn run_experiment(
    systems: &[System<'_>],
    cases: &[TestCase],
    relevance: RelevanceSource<'_>,
    cfg: &ExperimentConfig,
) -> Result<Vec<ExperimentReport>, EvalError> {
    if cases.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    if cfg.k == 0 {
        return Err(EvalError::InvalidK);
    }
    let sample: Option<Vec<usize>> = cfg.sample.map(|n| {
        let mut idx: Vec<usize> = (0..cases.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(cfg.seed));
        idx.truncate(n.min(cases.len()));
        idx.sort_unstable();
        idx
    });
    let config = format!(
        "k={} seed={} sample={} asr=mean precision over returned list; ap=normalized by relevant retrieved",
        cfg.k,
        cfg.seed,
        cfg.sample.map_or("all".to_string(), |n| n.to_string()),
    );

    let mut reports = Vec::with_capacity(systems.len());
    for system in systems {
        let outputs: Vec<Vec<String>> = cfg.exec.map(cases, |c| system.recommend(c));
        // relevance is only needed where list metrics are computed
        let scored_idx: Vec<usize> = match &sample {
            Some(s) => s.clone(),
            None => (0..cases.len()).collect(),
        };
        let scored = scored_idx
            .iter()
            .map(|&i| score(&cases[i], outputs[i].clone(), cfg.k, relevance))
            .collect::<Result<Vec<_>, _>>()?;
        let all: Vec<EvaluationCase> = cases
            .iter()
            .zip(&outputs)
            .map(|(c, o)| {
                if o.is_empty() {
                    EvaluationCase::failed(c.project.clone())
                } else {
                    EvaluationCase::from_relevance(c.project.clone(), &vec![false; o.len().min(cfg.k)])
                }
            })
            .collect();
        let failed = all.iter().filter(|c| c.failed).count();
        reports.push(ExperimentReport {
            system: system.name.clone(),
            mode: relevance.mode().to_string(),
            cases: cases.len(),
            failed,
            fcr: fcr(&all)?,
            sample_cases: sample.as_ref().map(Vec::len),
            fcr_sample: match &sample {
                Some(_) => Some(fcr(&scored)?),
                None => None,
            },
            asr: optional(asr_at_k(&scored, cfg.k))?,
            map: optional(map_at_k(&scored, cfg.k))?,
            k: cfg.k,
            config: config.clone(),
        });
    }
    Ok(reports)
}

fn pct(v: Option<f64>) -> String {
    v.map_or("n/a".to_string(), |x| format!("{:.2}%", x * 100.0))
}

/// Aligned text table, one row per system.
pub fn render_table(reports: &[ExperimentReport]) -> String {
    let k = reports.first().map_or(5, |r| r.k);
    let header = [
        "system".to_string(),
        "cases".to_string(),
        "FCR".to_string(),
        "FCR(sample)".to_string(),
        format!("ASR@{k}"),
        format!("MAP@{k}"),
    ];
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            [
                r.system.clone(),
                r.cases.to_string(),
                pct(Some(r.fcr)),
                pct(r.fcr_sample),
                pct(r.asr),
                pct(r.map),
            ]
        })
        .collect();
    let mut widths = header.clone().map(|h| h.len());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    if let Some(r) = reports.first() {
        let _ = writeln!(out, "# mode={} {}", r.mode, r.config);
    }
    for row in std::iter::once(&header).chain(&rows) {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

pub fn write_csv(mut out: impl Write, reports: &[ExperimentReport]) -> std::io::Result<()> {
    writeln!(out, "system,mode,k,cases,failed,fcr,sample_cases,fcr_sample,asr,map")?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{:.6},{},{},{},{}",
            r.system,
            r.mode,
            r.k,
            r.cases,
            r.failed,
            r.fcr,
            r.sample_cases.map_or(String::new(), |n| n.to_string()),
            opt(r.fcr_sample),
            opt(r.asr),
            opt(r.map)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case(p: &str, truth: &[&str]) -> TestCase {
        TestCase {
            project: p.into(),
            text: String::new(),
            given: vec![],
            truth: truth.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn all_relevant_single_system() {
        let cases = [case("p1", &["a", "b"]), case("p2", &["a", "b"])];
        let sys = [System::new("s", |_: &TestCase| vec!["a".to_string(), "b".to_string()])];
        let r = run_experiment(&sys, &cases, RelevanceSource::GroundTruth, &ExperimentConfig::default())
            .unwrap();
        assert_eq!(r[0].asr, Some(1.0));
        assert_eq!(r[0].map, Some(1.0));
        assert_eq!(r[0].fcr, 0.0);
        let table = render_table(&r);
        assert!(table.contains("FCR") && table.contains("ASR@5") && table.contains("MAP@5"));
    }

    #[test]
    fn identical_outputs_identical_reports() {
        let cases = [case("p1", &["a"]), case("p2", &["c"])];
        let f = |c: &TestCase| if c.project == "p1" { vec!["a".into(), "z".into()] } else { vec![] };
        let sys = [System::new("x", f), System::new("x", f)];
        let r = run_experiment(&sys, &cases, RelevanceSource::GroundTruth, &ExperimentConfig::default())
            .unwrap();
        assert_eq!(r[0], r[1]);
        assert_eq!(r[0].fcr, 0.5);
        assert_eq!(r[0].asr, Some(0.5));
    }

    #[test]
    fn manual_mode_needs_judgments() {
        let cases = [case("p1", &["a"])];
        let sys = [System::new("s", |_: &TestCase| vec!["a".to_string()])];
        let j = Judgments::default();
        let err = run_experiment(&sys, &cases, RelevanceSource::Judgments(&j), &ExperimentConfig::default())
            .unwrap_err();
        assert!(matches!(err, EvalError::MissingJudgments { .. }));
    }

    #[test]
    fn holdout_keeps_one_given() {
        let r = RepositoryRecord {
            id: "p".into(),
            text: "t".into(),
            topics: vec!["a".into(), "b".into(), "c".into()],
        };
        let single = RepositoryRecord { topics: vec!["a".into()], ..r.clone() };
        let cs = augmentation_cases(&[r, single], 0.5, 7);
        assert_eq!(cs[0].given.len() + cs[0].truth.len(), 3);
        assert!(!cs[0].given.is_empty() && !cs[0].truth.is_empty());
        assert_eq!(cs[1].given, ["a"]);
        assert!(cs[1].truth.is_empty());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let cases = [case("p1", &["a"])];
        let sys = [System::new("s", |_: &TestCase| vec!["a".to_string()])];
        let r = run_experiment(&sys, &cases, RelevanceSource::GroundTruth, &ExperimentConfig::default())
            .unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("s,automated,5,1,0,"));
    }
}
