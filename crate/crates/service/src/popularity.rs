//! Topic popularity counts: a JSON cache file and a paced GitHub search client.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use kgrec_core::store::{EntityState, KnowledgeGraph};
use reqwest::StatusCode;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::persist::{write_atomic, PersistError};

const FIXTURE: &str = include_str!("../data/popularity.json");

#[derive(Debug, Error)]
pub enum PopularityError {
    #[error("no count could be fetched and no cache was given")]
    AllSourcesUnavailable,
    #[error("popularity cache {path}: {message}")]
    InvalidCache { path: String, message: String },
    #[error(transparent)]
    Persist(#[from] PersistError),
    #[error("http client: {0}")]
    Client(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PopularitySource {
    LiveApi,
    CacheFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopularityCache {
    pub counts: BTreeMap<String, u64>,
    /// Unix seconds.
    pub fetched_at: u64,
    pub source: PopularitySource,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl PopularityCache {
    /// Counts shipped with the crate for the seed graph.
    pub fn fixture() -> Self {
        let mut c: Self = serde_json::from_str(FIXTURE).expect("bundled fixture parses");
        c.source = PopularitySource::CacheFile;
        c
    }

    pub fn load(path: &Path) -> Result<Self, PopularityError> {
        let text = std::fs::read_to_string(path).map_err(|e| PopularityError::InvalidCache {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let mut c: Self =
            serde_json::from_str(&text).map_err(|e| PopularityError::InvalidCache {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        c.source = PopularitySource::CacheFile;
        Ok(c)
    }

    pub fn save(&self, path: &Path) -> Result<(), PopularityError> {
        let mut text = serde_json::to_vec_pretty(self).expect("cache serializes");
        text.push(b'\n');
        write_atomic(path, &text)?;
        Ok(())
    }

    pub fn is_stale(&self, ttl: Duration, now: u64) -> bool {
        now.saturating_sub(self.fetched_at) > ttl.as_secs()
    }

    /// Counts for every accepted topic of `graph`; topics the cache lacks get
    /// 0 and are listed in the second value.
    pub fn counts_for(&self, graph: &KnowledgeGraph) -> (BTreeMap<String, u64>, Vec<String>) {
        let mut counts = BTreeMap::new();
        let mut missing = Vec::new();
        for t in graph.topics().filter(|t| t.state != EntityState::Rejected) {
            match self.counts.get(&t.full_name) {
                Some(&n) => {
                    counts.insert(t.full_name.clone(), n);
                }
                None if t.state == EntityState::Accepted => {
                    log::warn!("no popularity count for `{}`; using 0", t.full_name);
                    counts.insert(t.full_name.clone(), 0);
                    missing.push(t.full_name.clone());
                }
                None => {}
            }
        }
        (counts, missing)
    }

    /// Writes counts into the graph, see [`Self::counts_for`].
    pub fn apply(&self, graph: &mut KnowledgeGraph) -> Vec<String> {
        let (counts, missing) = self.counts_for(graph);
        for (name, n) in counts {
            if let Ok(id) = graph.topic_id(&name) {
                graph.set_popularity(id, n).expect("known topic");
            }
        }
        missing
    }
}

#[derive(Debug, Clone)]
pub struct GithubConfig {
    pub base_url: String,
    pub token: Option<String>,
    /// Minimum gap between requests. The search API allows 30 per minute
    /// with a token.
    pub pace: Duration,
    pub max_retries: u32,
    pub backoff: Duration,
    /// Longest wait honoured from a rate-limit response.
    pub max_wait: Duration,
}

impl Default for GithubConfig {
    fn default() -> Self {
        Self {
            base_url: "https://api.github.com".into(),
            token: None,
            pace: Duration::from_millis(2100),
            max_retries: 4,
            backoff: Duration::from_secs(2),
            max_wait: Duration::from_secs(120),
        }
    }
}

#[derive(Deserialize)]
struct SearchResponse {
    total_count: u64,
}

enum Attempt {
    Done(u64),
    Retry(Option<Duration>),
    Fail(String),
}

fn rate_limit_wait(resp: &reqwest::Response) -> Option<Duration> {
    let header = |name: &str| {
        resp.headers()
            .get(name)
            .and_then(|v| v.to_str().ok())
            .and_then(|v| v.parse::<u64>().ok())
    };
    if let Some(s) = header("retry-after") {
        return Some(Duration::from_secs(s));
    }
    if header("x-ratelimit-remaining") == Some(0) {
        if let Some(reset) = header("x-ratelimit-reset") {
            return Some(Duration::from_secs(reset.saturating_sub(unix_now())));
        }
    }
    None
}

pub struct GithubClient {
    cfg: GithubConfig,
    http: reqwest::Client,
    last: Option<tokio::time::Instant>,
}

impl GithubClient {
    pub fn new(cfg: GithubConfig) -> Result<Self, PopularityError> {
        let http = reqwest::Client::builder()
            .user_agent(concat!("kgrec/", env!("CARGO_PKG_VERSION")))
            .timeout(Duration::from_secs(30))
            .build()
            .map_err(|e| PopularityError::Client(e.to_string()))?;
        Ok(Self {
            cfg,
            http,
            last: None,
        })
    }

    async fn pace(&mut self) {
        if let Some(last) = self.last {
            tokio::time::sleep_until(last + self.cfg.pace).await;
        }
        self.last = Some(tokio::time::Instant::now());
    }

    async fn attempt(&mut self, topic: &str) -> Attempt {
        self.pace().await;
        let url = format!(
            "{}/search/repositories",
            self.cfg.base_url.trim_end_matches('/')
        );
        let mut req = self
            .http
            .get(url)
            .query(&[("q", format!("topic:{topic}")), ("per_page", "1".into())])
            .header("accept", "application/vnd.github+json");
        if let Some(t) = &self.cfg.token {
            req = req.bearer_auth(t);
        }
        let resp = match req.send().await {
            Ok(r) => r,
            Err(e) => {
                log::debug!("request for `{topic}` failed: {e}");
                return Attempt::Retry(None);
            }
        };
        let status = resp.status();
        if status.is_success() {
            return match resp.json::<SearchResponse>().await {
                Ok(body) => Attempt::Done(body.total_count),
                Err(e) => Attempt::Fail(e.to_string()),
            };
        }
        if status == StatusCode::TOO_MANY_REQUESTS || status == StatusCode::FORBIDDEN {
            let wait = rate_limit_wait(&resp);
            if status == StatusCode::FORBIDDEN && wait.is_none() {
                return Attempt::Fail(format!("status {status}"));
            }
            return Attempt::Retry(wait);
        }
        if status.is_server_error() {
            return Attempt::Retry(None);
        }
        Attempt::Fail(format!("status {status}"))
    }

    /// Repository count for one topic, retrying rate limits and server errors.
    pub async fn count(&mut self, topic: &str) -> Result<u64, String> {
        let mut backoff = self.cfg.backoff;
        let mut tries = 0;
        loop {
            match self.attempt(topic).await {
                Attempt::Done(n) => return Ok(n),
                Attempt::Fail(m) => return Err(m),
                Attempt::Retry(wait) => {
                    if tries >= self.cfg.max_retries {
                        return Err(format!("gave up after {} retries", tries));
                    }
                    tries += 1;
                    let delay = wait.unwrap_or(backoff).min(self.cfg.max_wait);
                    log::info!("retrying `{topic}` in {delay:?}");
                    tokio::time::sleep(delay).await;
                    backoff *= 2;
                }
            }
        }
    }
}

/// Fetches one count per topic. A topic that cannot be fetched falls back to
/// `fallback`, else to 0, with a warning.
pub async fn fetch_popularity(
    topics: &[String],
    cfg: &GithubConfig,
    fallback: Option<&PopularityCache>,
) -> Result<PopularityCache, PopularityError> {
    let mut client = GithubClient::new(cfg.clone())?;
    let mut counts = BTreeMap::new();
    let mut fetched = 0;
    for t in topics {
        match client.count(t).await {
            Ok(n) => {
                fetched += 1;
                counts.insert(t.clone(), n);
            }
            Err(e) => {
                let cached = fallback.and_then(|c| c.counts.get(t).copied());
                log::warn!(
                    "fetching `{t}` failed ({e}); using {}",
                    cached.map_or("0".to_string(), |n| format!("cached {n}"))
                );
                counts.insert(t.clone(), cached.unwrap_or(0));
            }
        }
    }
    if fetched == 0 && !topics.is_empty() && fallback.is_none() {
        return Err(PopularityError::AllSourcesUnavailable);
    }
    Ok(PopularityCache {
        counts,
        fetched_at: unix_now(),
        source: PopularitySource::LiveApi,
    })
}
