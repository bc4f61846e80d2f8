use serde::{Deserialize, Serialize};

use super::EvalError;

/// One system's output for one test project, with per-item relevance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationCase {
    pub project: String,
    pub recommended: Vec<String>,
    pub relevance: Vec<bool>,
    pub failed: bool,
}

impl EvaluationCase {
    pub fn new(project: impl Into<String>, recommended: Vec<String>, relevance: Vec<bool>) -> Result<Self, EvalError> {
        if recommended.len() != relevance.len() {
            return Err(EvalError::LengthMismatch);
        }
        Ok(Self {
            project: project.into(),
            failed: recommended.is_empty(),
            recommended,
            relevance,
        })
    }

    /// Case judged only by relevance flags; topic names are placeholders.
    pub fn from_relevance(project: impl Into<String>, relevance: &[bool]) -> Self {
        Self {
            project: project.into(),
            recommended: (0..relevance.len()).map(|i| format!("#{i}")).collect(),
            relevance: relevance.to_vec(),
            failed: relevance.is_empty(),
        }
    }

    pub fn failed(project: impl Into<String>) -> Self {
        Self {
            project: project.into(),
            recommended: Vec::new(),
            relevance: Vec::new(),
            failed: true,
        }
    }
}

/// Share of cases with no recommendation at all.
pub fn fcr(cases: &[EvaluationCase]) -> Result<f64, EvalError> {
    if cases.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    let failed = cases.iter().filter(|c| c.failed).count();
    Ok(failed as f64 / cases.len() as f64)
}

/// Relevant share of the first `k` returned items.
pub fn precision_at_k(relevance: &[bool], k: usize) -> f64 {
    let list = &relevance[..relevance.len().min(k)];
    if list.is_empty() {
        return 0.0;
    }
    list.iter().filter(|&&r| r).count() as f64 / list.len() as f64
}

/// Mean of precision at each relevant rank within the top `k`, divided by
/// the number of relevant items retrieved. Zero when none are relevant.
pub fn average_precision(relevance: &[bool], k: usize) -> f64 {
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, &r) in relevance.iter().take(k).enumerate() {
        if r {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    if hits == 0 {
        0.0
    } else {
        sum / hits as f64
    }
}

fn mean_over_successful(
    cases: &[EvaluationCase],
    f: impl Fn(&EvaluationCase) -> f64,
) -> Result<f64, EvalError> {
    let scored: Vec<f64> = cases.iter().filter(|c| !c.failed).map(f).collect();
    if scored.is_empty() {
        return Err(EvalError::EmptyInput);
    }
    Ok(scored.iter().sum::<f64>() / scored.len() as f64)
}

/// Mean precision over the returned lists of the non-failed cases.
pub fn asr_at_k(cases: &[EvaluationCase], k: usize) -> Result<f64, EvalError> {
    mean_over_successful(cases, |c| precision_at_k(&c.relevance, k))
}

/// Mean average precision over the non-failed cases.
pub fn map_at_k(cases: &[EvaluationCase], k: usize) -> Result<f64, EvalError> {
    mean_over_successful(cases, |c| average_precision(&c.relevance, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cases(n: usize, failed: usize) -> Vec<EvaluationCase> {
        (0..n)
            .map(|i| {
                if i < failed {
                    EvaluationCase::failed(format!("p{i}"))
                } else {
                    EvaluationCase::from_relevance(format!("p{i}"), &[true])
                }
            })
            .collect()
    }

    #[test]
    fn fcr_values() {
        assert_eq!(fcr(&cases(50, 0)).unwrap(), 0.0);
        assert_eq!(fcr(&cases(50, 1)).unwrap(), 0.02);
        assert_eq!(fcr(&cases(50, 23)).unwrap(), 0.46);
        assert_eq!(fcr(&[]), Err(EvalError::EmptyInput));
    }

    #[test]
    fn asr_two_cases() {
        let t = true;
        let f = false;
        let cs = [
            EvaluationCase::from_relevance("a", &[t, t, f, f, f]),
            EvaluationCase::from_relevance("b", &[t, f, t, f, t]),
        ];
        assert!((asr_at_k(&cs, 5).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ap_examples() {
        assert_eq!(average_precision(&[true; 5], 5), 1.0);
        assert!((average_precision(&[true, false, true, false, false], 5) - 5.0 / 6.0).abs() < 1e-15);
        assert!((average_precision(&[false, false, false, false, true], 5) - 0.2).abs() < 1e-15);
        assert_eq!(average_precision(&[false; 5], 5), 0.0);
    }

    #[test]
    fn failed_cases_are_skipped() {
        let cs = [EvaluationCase::failed("x"), EvaluationCase::from_relevance("y", &[true, false])];
        assert_eq!(asr_at_k(&cs, 5).unwrap(), 0.5);
        assert_eq!(map_at_k(&cs, 5).unwrap(), 1.0);
        assert_eq!(asr_at_k(&cs[..1], 5), Err(EvalError::EmptyInput));
        assert!(EvaluationCase::new("z", vec!["a".into()], vec![]).is_err());
    }
}
