use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{ClassifyError, RepositoryRecord, SparseVec};

pub const DEFAULT_MAX_FEATURES: usize = 20_000;
pub const DEFAULT_MAX_TOKENS: usize = 512;

/// Lowercased whitespace tokens, cut to the first `max_tokens`.
pub fn tokenize(text: &str, max_tokens: usize) -> Vec<String> {
    text.split_whitespace()
        .take(max_tokens)
        .map(str::to_lowercase)
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct VectorizerData {
    terms: Vec<String>,
    idf: Vec<f64>,
    max_features: usize,
    max_tokens: usize,
}

/// TF-IDF vectorizer: raw term counts times smoothed idf, L2-normalized.
///
/// `idf(f) = ln((1 + N) / (1 + df(f))) + 1`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorizerData", into = "VectorizerData")]
pub struct VectorizerModel {
    terms: Vec<String>,
    idf: Vec<f64>,
    index: HashMap<String, u32>,
    pub max_features: usize,
    pub max_tokens: usize,
}

impl TryFrom<VectorizerData> for VectorizerModel {
    type Error = String;

    fn try_from(d: VectorizerData) -> Result<Self, String> {
        if d.terms.len() != d.idf.len() {
            return Err("vocabulary and idf lengths differ".into());
        }
        if d.idf.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err("idf values must be finite and non-negative".into());
        }
        let index: HashMap<String, u32> = d
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        if index.len() != d.terms.len() {
            return Err("duplicate vocabulary term".into());
        }
        Ok(Self {
            terms: d.terms,
            idf: d.idf,
            index,
            max_features: d.max_features,
            max_tokens: d.max_tokens,
        })
    }
}

impl From<VectorizerModel> for VectorizerData {
    fn from(m: VectorizerModel) -> Self {
        Self {
            terms: m.terms,
            idf: m.idf,
            max_features: m.max_features,
            max_tokens: m.max_tokens,
        }
    }
}

impl VectorizerModel {
    pub fn fit(corpus: &[RepositoryRecord]) -> Result<Self, ClassifyError> {
        Self::fit_with(corpus, DEFAULT_MAX_FEATURES, DEFAULT_MAX_TOKENS)
    }

    /// Keeps the `max_features` tokens with the highest document frequency
    /// (ties by token), indexed in token order.
    pub fn fit_with(
        corpus: &[RepositoryRecord],
        max_features: usize,
        max_tokens: usize,
    ) -> Result<Self, ClassifyError> {
        if corpus.is_empty() {
            return Err(ClassifyError::EmptyCorpus);
        }
        let mut df: HashMap<String, usize> = HashMap::new();
        for rec in corpus {
            let unique: HashSet<String> = tokenize(&rec.text, max_tokens).into_iter().collect();
            for tok in unique {
                *df.entry(tok).or_default() += 1;
            }
        }
        let mut ranked: Vec<(String, usize)> = df.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(max_features);
        ranked.sort_by(|a, b| a.0.cmp(&b.0));
        let n = corpus.len() as f64;
        let idf = ranked
            .iter()
            .map(|(_, d)| ((1.0 + n) / (1.0 + *d as f64)).ln() + 1.0)
            .collect();
        let terms: Vec<String> = ranked.into_iter().map(|(t, _)| t).collect();
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Ok(Self {
            terms,
            idf,
            index,
            max_features,
            max_tokens,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn feature(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn idf(&self, feature: u32) -> f64 {
        self.idf[feature as usize]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// Raw counts of in-vocabulary tokens within the first `max_tokens` tokens.
    pub fn term_counts(&self, text: &str) -> BTreeMap<u32, u32> {
        let mut counts = BTreeMap::new();
        for tok in tokenize(text, self.max_tokens) {
            if let Some(&f) = self.index.get(&tok) {
                *counts.entry(f).or_default() += 1;
            }
        }
        counts
    }

    pub fn transform(&self, text: &str) -> SparseVec {
        let counts = self.term_counts(text);
        let mut v = SparseVec {
            indices: counts.keys().copied().collect(),
            values: counts
                .iter()
                .map(|(&f, &c)| c as f64 * self.idf[f as usize])
                .collect(),
        };
        let norm = v.values.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.values.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(text: &str) -> RepositoryRecord {
        RepositoryRecord {
            id: "o/r".into(),
            text: text.into(),
            topics: vec!["x".into()],
        }
    }

    #[test]
    fn single_document() {
        let v = VectorizerModel::fit(&[rec("a b a")]).unwrap();
        assert_eq!(v.terms(), ["a", "b"]);
        let a = v.feature("a").unwrap();
        let b = v.feature("b").unwrap();
        let counts = v.term_counts("a b a");
        assert_eq!((counts[&a], counts[&b]), (2, 1));
        assert_eq!(v.idf(a), v.idf(b));
        let x = v.transform("a b a");
        let norm: f64 = x.values.iter().map(|v| v * v).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn idf_orders_by_rarity() {
        let v = VectorizerModel::fit(&[rec("common rare"), rec("common"), rec("common")]).unwrap();
        assert!(v.idf(v.feature("common").unwrap()) < v.idf(v.feature("rare").unwrap()));
        assert!((v.idf(v.feature("common").unwrap()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncates_to_max_tokens() {
        let mut words: Vec<String> = (0..512).map(|_| "early".to_string()).collect();
        words.extend((0..89).map(|_| "late".to_string()));
        assert_eq!(words.len(), 601);
        let text = words.join(" ");
        let v = VectorizerModel::fit(&[rec(&text)]).unwrap();
        assert!(v.feature("late").is_none());
        assert_eq!(v.term_counts(&text)[&v.feature("early").unwrap()], 512);
    }

    #[test]
    fn feature_cap_prefers_frequent_tokens() {
        let corpus = [rec("a b c"), rec("a b"), rec("a z")];
        let v = VectorizerModel::fit_with(&corpus, 2, 512).unwrap();
        assert_eq!(v.terms(), ["a", "b"]);
        assert!(matches!(VectorizerModel::fit(&[]), Err(ClassifyError::EmptyCorpus)));
    }

    #[test]
    fn serde_round_trip() {
        let v = VectorizerModel::fit(&[rec("Hello world"), rec("hello there")]).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: VectorizerModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.feature("hello"), v.feature("hello"));
    }
}
