use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::{Query, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use kgrec_service::popularity::{
    fetch_popularity, GithubConfig, PopularityCache, PopularityError, PopularitySource,
};
use parking_lot::Mutex;
use serde_json::json;

/// Scripted responses per topic; the last one repeats.
#[derive(Default)]
struct Mock {
    script: HashMap<String, Vec<(u16, Vec<(&'static str, String)>)>>,
    hits: Vec<(String, Instant, Option<String>)>,
}

type Shared = Arc<Mutex<Mock>>;

async fn search(
    State(m): State<Shared>,
    headers: HeaderMap,
    Query(q): Query<HashMap<String, String>>,
) -> Response {
    let topic = q["q"]
        .strip_prefix("topic:")
        .unwrap_or_default()
        .to_string();
    assert_eq!(q.get("per_page").map(String::as_str), Some("1"));
    let auth = headers
        .get("authorization")
        .map(|v| v.to_str().unwrap().to_string());
    let mut m = m.lock();
    let n = m.hits.iter().filter(|h| h.0 == topic).count();
    m.hits.push((topic.clone(), Instant::now(), auth));
    let steps = m
        .script
        .get(&topic)
        .cloned()
        .unwrap_or_else(|| vec![(200, vec![])]);
    let (status, hdrs) = steps[n.min(steps.len() - 1)].clone();
    let status = StatusCode::from_u16(status).unwrap();
    let mut resp = if status.is_success() {
        Json(json!({ "total_count": topic.len() * 100, "items": [] })).into_response()
    } else {
        (status, "nope").into_response()
    };
    for (k, v) in hdrs {
        resp.headers_mut().insert(k, v.parse().unwrap());
    }
    resp
}

async fn mock(
    script: HashMap<String, Vec<(u16, Vec<(&'static str, String)>)>>,
) -> (String, Shared) {
    let state: Shared = Arc::new(Mutex::new(Mock {
        script,
        hits: Vec::new(),
    }));
    let app = Router::new()
        .route("/search/repositories", get(search))
        .with_state(state.clone());
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    (base, state)
}

fn cfg(base: &str) -> GithubConfig {
    GithubConfig {
        base_url: base.into(),
        token: Some("tok".into()),
        pace: Duration::from_millis(5),
        max_retries: 3,
        backoff: Duration::from_millis(5),
        max_wait: Duration::from_secs(2),
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[tokio::test]
async fn counts_come_from_total_count() {
    let (base, m) = mock(HashMap::new()).await;
    let cache = fetch_popularity(&names(&["rust", "go"]), &cfg(&base), None)
        .await
        .unwrap();
    assert_eq!(
        cache.counts,
        BTreeMap::from([("go".into(), 200), ("rust".into(), 400)])
    );
    assert_eq!(cache.source, PopularitySource::LiveApi);
    assert!(m
        .lock()
        .hits
        .iter()
        .all(|h| h.2.as_deref() == Some("Bearer tok")));
}

#[tokio::test]
async fn rate_limited_request_is_retried_after_the_header_wait() {
    let script = HashMap::from([(
        "rust".to_string(),
        vec![(429, vec![("retry-after", "1".to_string())]), (200, vec![])],
    )]);
    let (base, m) = mock(script).await;
    let started = Instant::now();
    let cache = fetch_popularity(&names(&["rust"]), &cfg(&base), None)
        .await
        .unwrap();
    assert_eq!(cache.counts["rust"], 400);
    assert!(started.elapsed() >= Duration::from_secs(1));
    assert_eq!(m.lock().hits.len(), 2);
}

#[tokio::test]
async fn forbidden_with_exhausted_quota_waits_for_reset() {
    let reset = (kgrec_service::popularity::unix_now() + 1).to_string();
    let script = HashMap::from([(
        "rust".to_string(),
        vec![
            (
                403,
                vec![
                    ("x-ratelimit-remaining", "0".to_string()),
                    ("x-ratelimit-reset", reset),
                ],
            ),
            (200, vec![]),
        ],
    )]);
    let (base, m) = mock(script).await;
    let cache = fetch_popularity(&names(&["rust"]), &cfg(&base), None)
        .await
        .unwrap();
    assert_eq!(cache.counts["rust"], 400);
    assert_eq!(m.lock().hits.len(), 2);
}

#[tokio::test]
async fn plain_forbidden_is_not_retried() {
    let script = HashMap::from([("rust".to_string(), vec![(403, vec![])])]);
    let (base, m) = mock(script).await;
    let cached = PopularityCache {
        counts: BTreeMap::from([("rust".into(), 7)]),
        fetched_at: 0,
        source: PopularitySource::CacheFile,
    };
    let cache = fetch_popularity(&names(&["rust"]), &cfg(&base), Some(&cached))
        .await
        .unwrap();
    assert_eq!(cache.counts["rust"], 7);
    assert_eq!(m.lock().hits.len(), 1);
}

#[tokio::test]
async fn server_errors_fall_back_to_cache_then_zero() {
    let script = HashMap::from([
        ("rust".to_string(), vec![(500, vec![])]),
        ("go".to_string(), vec![(502, vec![])]),
    ]);
    let (base, m) = mock(script).await;
    let cached = PopularityCache {
        counts: BTreeMap::from([("rust".into(), 7)]),
        fetched_at: 0,
        source: PopularitySource::CacheFile,
    };
    let topics = names(&["rust", "go", "zig"]);
    let cache = fetch_popularity(&topics, &cfg(&base), Some(&cached))
        .await
        .unwrap();
    assert_eq!(cache.counts["rust"], 7);
    assert_eq!(cache.counts["go"], 0);
    assert_eq!(cache.counts["zig"], 300);
    let hits = m.lock().hits.iter().filter(|h| h.0 == "rust").count();
    assert_eq!(hits, 4, "one try plus three retries");
}

#[tokio::test]
async fn nothing_fetched_and_no_cache_is_an_error() {
    let script = HashMap::from([("rust".to_string(), vec![(503, vec![])])]);
    let (base, _) = mock(script).await;
    let err = fetch_popularity(&names(&["rust"]), &cfg(&base), None)
        .await
        .unwrap_err();
    assert!(matches!(err, PopularityError::AllSourcesUnavailable));
}

#[tokio::test]
async fn unreachable_host_is_an_error() {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let base = format!("http://{}", listener.local_addr().unwrap());
    drop(listener);
    let err = fetch_popularity(&names(&["rust"]), &cfg(&base), None)
        .await
        .unwrap_err();
    assert!(matches!(err, PopularityError::AllSourcesUnavailable));
}

#[tokio::test]
async fn requests_are_paced() {
    let (base, m) = mock(HashMap::new()).await;
    let pace = Duration::from_millis(120);
    let cfg = GithubConfig { pace, ..cfg(&base) };
    fetch_popularity(&names(&["a", "b", "c", "d"]), &cfg, None)
        .await
        .unwrap();
    let hits = m.lock().hits.clone();
    assert_eq!(hits.len(), 4);
    for w in hits.windows(2) {
        // Arrival jitter on a loaded machine can shave a few milliseconds.
        assert!(
            w[1].1 - w[0].1 >= pace - Duration::from_millis(15),
            "{:?}",
            w[1].1 - w[0].1
        );
    }
}

#[test]
fn cache_round_trips_and_reports_missing_topics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pop.json");
    let mut c = PopularityCache::fixture();
    c.source = PopularitySource::LiveApi;
    c.save(&path).unwrap();
    let back = PopularityCache::load(&path).unwrap();
    assert_eq!(back.counts, c.counts);
    assert_eq!(back.source, PopularitySource::CacheFile);

    let mut g = kgrec_core::store::seed::seed_graph();
    let missing = back.apply(&mut g);
    assert!(missing.is_empty(), "{missing:?}");
    let partial = PopularityCache {
        counts: BTreeMap::from([("django".into(), 5)]),
        fetched_at: 0,
        source: PopularitySource::CacheFile,
    };
    let missing = partial.apply(&mut g);
    assert_eq!(missing.len(), g.topics().count() - 1);
    assert_eq!(g.topic_by_name("django").unwrap().popularity_count, 5);
    assert_eq!(g.topic_by_name("python").unwrap().popularity_count, 0);
}

#[test]
fn malformed_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pop.json");
    std::fs::write(&path, "{\"counts\": 3}").unwrap();
    assert!(matches!(
        PopularityCache::load(&path),
        Err(PopularityError::InvalidCache { .. })
    ));
}
