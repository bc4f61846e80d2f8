//! Curated software-topic knowledge graph and the recommenders built on it.
//!
//! - [`store`]: topics, relation types, relationships, redundancy checks, snapshots.
//! - [`curation`]: votes, graduated acceptance, contributor reliability.
//! - [`spread`]: topic weights and one-hop spreading activation (KGRec).
//! - [`classify`]: TF-IDF features, logistic regression and naive Bayes.
//! - [`recommend`]: classifier picks stacked with an augmenter.
//! - [`baselines`]: TopFilter collaborative filtering.
//! - [`eval`]: splits, FCR / ASR@k / MAP@k, experiment reports.
//! - [`synth`]: seeded synthetic corpora.

pub mod baselines;
pub mod classify;
pub mod curation;
pub mod eval;
pub mod exec;
pub mod recommend;
pub mod spread;
pub mod store;
pub mod synth;

pub use exec::Execution;
