//! Service layer for `kgrec-core`:
//!
//! - [`engine`]: deterministic command application over graph and curation state
//! - [`journal`] and [`persist`]: write-ahead journal, snapshots, crash recovery
//! - [`auth`]: bearer tokens for contributors and maintainers
//! - [`http`]: the JSON API
//! - [`popularity`]: popularity cache and GitHub client
//! - [`cli`]: the `kgrec` command line

pub mod auth;
pub mod cli;
pub mod engine;
pub mod http;
pub mod journal;
pub mod persist;
pub mod popularity;
