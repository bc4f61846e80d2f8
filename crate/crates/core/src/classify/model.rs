use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::optim::LbfgsConfig;
use super::{BayesLabel, ClassifyError, LogisticLabel, RepositoryRecord, SparseVec, VectorizerModel};
use crate::Execution;

pub const ARCHIVE_HEADER: &str = "kgrec-model 1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassifierKind {
    LogisticRegressionOvr,
    MultinomialNaiveBayes,
}

impl std::str::FromStr for ClassifierKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lr" | "logistic-regression-ovr" => Ok(Self::LogisticRegressionOvr),
            "mnb" | "multinomial-naive-bayes" => Ok(Self::MultinomialNaiveBayes),
            _ => Err(format!("unknown classifier kind `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrainConfig {
    /// Inverse L2 strength for logistic regression.
    pub c: f64,
    pub tolerance: f64,
    pub max_iter: usize,
    /// Additive smoothing for naive Bayes.
    pub smoothing: f64,
    pub exec: Execution,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            tolerance: 1e-4,
            max_iter: 1000,
            smoothing: 1.0,
            exec: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "labels", rename_all = "kebab-case")]
enum Parameters {
    LogisticRegressionOvr(Vec<LogisticLabel>),
    MultinomialNaiveBayes(Vec<BayesLabel>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierModel {
    label_space: Vec<String>,
    parameters: Parameters,
}

impl ClassifierModel {
    /// Trains over every topic that appears in `corpus`.
    pub fn train(
        kind: ClassifierKind,
        corpus: &[RepositoryRecord],
        vectorizer: &VectorizerModel,
        cfg: &TrainConfig,
    ) -> Result<Self, ClassifyError> {
        let labels: BTreeSet<String> = corpus.iter().flat_map(|r| r.topics.iter().cloned()).collect();
        Self::train_labels(kind, corpus, vectorizer, labels.into_iter().collect(), cfg)
    }

    /// Trains one block per entry of `labels`; each needs a positive document.
    pub fn train_labels(
        kind: ClassifierKind,
        corpus: &[RepositoryRecord],
        vectorizer: &VectorizerModel,
        mut labels: Vec<String>,
        cfg: &TrainConfig,
    ) -> Result<Self, ClassifyError> {
        if corpus.is_empty() {
            return Err(ClassifyError::EmptyCorpus);
        }
        if !(cfg.c > 0.0 && cfg.smoothing > 0.0 && cfg.tolerance > 0.0) {
            return Err(ClassifyError::InvalidConfig(
                "c, smoothing and tolerance must be positive".into(),
            ));
        }
        labels.sort();
        labels.dedup();
        if labels.is_empty() {
            return Err(ClassifyError::UntrainedModel);
        }
        let rows: Vec<SparseVec> = cfg.exec.map(corpus, |r| vectorizer.transform(&r.text));
        let sets: Vec<BTreeSet<&str>> = corpus.iter().map(RepositoryRecord::topic_set).collect();
        let targets: Vec<Vec<bool>> = labels
            .iter()
            .map(|l| sets.iter().map(|s| s.contains(l.as_str())).collect())
            .collect();
        if let Some(i) = targets.iter().position(|t| !t.contains(&true)) {
            return Err(ClassifyError::LabelWithoutSupport(labels[i].clone()));
        }
        let dim = vectorizer.len();
        let parameters = match kind {
            ClassifierKind::LogisticRegressionOvr => {
                let lbfgs = LbfgsConfig {
                    tolerance: cfg.tolerance,
                    max_iter: cfg.max_iter,
                    ..Default::default()
                };
                let fitted = cfg.exec.map(&targets, |t| {
                    LogisticLabel::fit(&rows, t, dim, cfg.c, lbfgs)
                });
                for (l, f) in labels.iter().zip(&fitted) {
                    if !f.converged {
                        log::warn!("logistic model for `{l}` did not converge");
                    }
                }
                Parameters::LogisticRegressionOvr(fitted)
            }
            ClassifierKind::MultinomialNaiveBayes => Parameters::MultinomialNaiveBayes(
                cfg.exec.map(&targets, |t| BayesLabel::fit(&rows, t, dim, cfg.smoothing)),
            ),
        };
        Ok(Self { label_space: labels, parameters })
    }

    pub fn kind(&self) -> ClassifierKind {
        match self.parameters {
            Parameters::LogisticRegressionOvr(_) => ClassifierKind::LogisticRegressionOvr,
            Parameters::MultinomialNaiveBayes(_) => ClassifierKind::MultinomialNaiveBayes,
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.label_space
    }

    pub fn logistic_labels(&self) -> Option<&[LogisticLabel]> {
        match &self.parameters {
            Parameters::LogisticRegressionOvr(p) => Some(p),
            _ => None,
        }
    }

    pub fn bayes_labels(&self) -> Option<&[BayesLabel]> {
        match &self.parameters {
            Parameters::MultinomialNaiveBayes(p) => Some(p),
            _ => None,
        }
    }

    /// Labels whose logistic fit stopped short of the tolerance.
    pub fn unconverged(&self) -> Vec<&str> {
        match &self.parameters {
            Parameters::LogisticRegressionOvr(p) => self
                .label_space
                .iter()
                .zip(p)
                .filter(|(_, l)| !l.converged)
                .map(|(n, _)| n.as_str())
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn predict_row(&self, x: &SparseVec) -> Vec<f64> {
        match &self.parameters {
            Parameters::LogisticRegressionOvr(p) => p.iter().map(|l| l.probability(x)).collect(),
            Parameters::MultinomialNaiveBayes(p) => p.iter().map(|l| l.probability(x)).collect(),
        }
    }

    pub fn predict_proba(&self, vectorizer: &VectorizerModel, text: &str) -> BTreeMap<String, f64> {
        let probs = self.predict_row(&vectorizer.transform(text));
        self.label_space.iter().cloned().zip(probs).collect()
    }

    /// The `m` most probable labels, ties broken by name.
    pub fn top(&self, vectorizer: &VectorizerModel, text: &str, m: usize) -> Vec<(String, f64)> {
        let probs = self.predict_row(&vectorizer.transform(text));
        let mut ranked: Vec<(String, f64)> =
            self.label_space.iter().cloned().zip(probs).collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(m);
        ranked
    }

    fn check(&self, dim: usize) -> Result<(), String> {
        let n = self.label_space.len();
        if n == 0 {
            return Err("empty label space".into());
        }
        if self.label_space.windows(2).any(|w| w[0] >= w[1]) {
            return Err("labels must be sorted and unique".into());
        }
        let ok = match &self.parameters {
            Parameters::LogisticRegressionOvr(p) => {
                p.len() == n && p.iter().all(|l| l.weights.len() == dim)
            }
            Parameters::MultinomialNaiveBayes(p) => {
                p.len() == n
                    && p.iter().all(|l| {
                        l.log_likelihood_pos.len() == dim && l.log_likelihood_neg.len() == dim
                    })
            }
        };
        if ok {
            Ok(())
        } else {
            Err("parameter blocks do not match labels or vocabulary".into())
        }
    }
}

/// Vectorizer and classifier stored together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArchive {
    pub vectorizer: VectorizerModel,
    pub classifier: ClassifierModel,
}

pub fn write_archive(mut out: impl Write, archive: &ModelArchive) -> Result<(), ClassifyError> {
    writeln!(out, "{ARCHIVE_HEADER}")?;
    serde_json::to_writer(&mut out, archive).map_err(std::io::Error::from)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn read_archive(mut input: impl BufRead) -> Result<ModelArchive, ClassifyError> {
    let mut header = String::new();
    input.read_line(&mut header)?;
    if header.trim_end() != ARCHIVE_HEADER {
        return Err(ClassifyError::InvalidArchive(format!(
            "expected header `{ARCHIVE_HEADER}`"
        )));
    }
    let archive: ModelArchive = serde_json::from_reader(input)
        .map_err(|e| ClassifyError::InvalidArchive(e.to_string()))?;
    archive
        .classifier
        .check(archive.vectorizer.len())
        .map_err(ClassifyError::InvalidArchive)?;
    Ok(archive)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(text: &str, topics: &[&str]) -> RepositoryRecord {
        RepositoryRecord {
            id: format!("o/{}", text.len()),
            text: text.into(),
            topics: topics.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn corpus() -> Vec<RepositoryRecord> {
        vec![
            rec("rust cargo crate", &["rust"]),
            rec("cargo borrow checker", &["rust"]),
            rec("python pip wheel", &["python"]),
            rec("pip django python", &["python", "django"]),
        ]
    }

    #[test]
    fn unsupported_label_is_refused() {
        let c = corpus();
        let v = VectorizerModel::fit(&c).unwrap();
        let err = ClassifierModel::train_labels(
            ClassifierKind::LogisticRegressionOvr,
            &c,
            &v,
            vec!["rust".into(), "haskell".into()],
            &TrainConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, ClassifyError::LabelWithoutSupport(l) if l == "haskell"));
    }

    #[test]
    fn empty_text_gives_full_mapping() {
        let c = corpus();
        let v = VectorizerModel::fit(&c).unwrap();
        for kind in [ClassifierKind::LogisticRegressionOvr, ClassifierKind::MultinomialNaiveBayes] {
            let m = ClassifierModel::train(kind, &c, &v, &TrainConfig::default()).unwrap();
            let p = m.predict_proba(&v, "");
            assert_eq!(p.len(), 3);
            assert!(p.values().all(|x| (0.0..=1.0).contains(x)));
        }
    }

    #[test]
    fn bayes_prior_only_on_empty_text() {
        let c = corpus();
        let v = VectorizerModel::fit(&c).unwrap();
        let m = ClassifierModel::train(ClassifierKind::MultinomialNaiveBayes, &c, &v, &TrainConfig::default())
            .unwrap();
        let p = m.predict_proba(&v, "");
        assert!((p["django"] - 0.25).abs() < 1e-12);
        assert!((p["rust"] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn archive_round_trip() {
        let c = corpus();
        let vectorizer = VectorizerModel::fit(&c).unwrap();
        let classifier =
            ClassifierModel::train(ClassifierKind::LogisticRegressionOvr, &c, &vectorizer, &TrainConfig::default())
                .unwrap();
        let a = ModelArchive { vectorizer, classifier };
        let mut buf = Vec::new();
        write_archive(&mut buf, &a).unwrap();
        assert!(buf.starts_with(ARCHIVE_HEADER.as_bytes()));
        let back = read_archive(&buf[..]).unwrap();
        assert_eq!(back, a);
        assert!(read_archive(&b"kgrec-model 2\n{}"[..]).is_err());
    }

    #[test]
    fn parallel_and_sequential_training_agree() {
        let c = corpus();
        let v = VectorizerModel::fit(&c).unwrap();
        let seq = TrainConfig { exec: Execution::Sequential, ..Default::default() };
        let par = TrainConfig { exec: Execution::Parallel, ..Default::default() };
        let a = ClassifierModel::train(ClassifierKind::LogisticRegressionOvr, &c, &v, &seq).unwrap();
        let b = ClassifierModel::train(ClassifierKind::LogisticRegressionOvr, &c, &v, &par).unwrap();
        assert_eq!(a, b);
        assert!(a.unconverged().is_empty());
    }
}
