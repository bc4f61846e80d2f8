//! JSON API over the durable engine. Mutations go through one writer lock and
//! are journaled before they are acknowledged; reads use the latest published
//! immutable view.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use kgrec_core::classify::{read_archive, ClassifyError, ModelArchive};
use kgrec_core::curation::{
    Background, ContributorProfile, CurationError, CurationTally, VoteValue,
};
use kgrec_core::recommend::{recommend_full, RecommendError, RecommenderConfig};
use kgrec_core::spread::{Kgrec, SpreadError};
use kgrec_core::store::snapshot;
use kgrec_core::store::{
    detect_redundancy, ContributorId, EntityState, Proposer, RelationshipId, StoreError, Topic,
    TopicDraft, TopicId, VerbId, DEFAULT_REDUNDANCY_THRESHOLD,
};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::auth::TokenIssuer;
use crate::engine::{Actor, Command, Engine, EngineError, Outcome, TopicInput};
use crate::persist::{Durable, PersistError};

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Value,
}

impl ApiError {
    pub fn new(status: StatusCode, message: impl std::fmt::Display) -> Self {
        Self {
            status,
            body: json!({ "error": message.to_string() }),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

fn store_status(e: &StoreError) -> StatusCode {
    use StoreError::*;
    match e {
        DuplicateName(_) | DuplicateVerb(_) | DuplicateRelationship(_) | PreviouslyRejected(_) => {
            StatusCode::CONFLICT
        }
        UnknownTopic(_)
        | UnknownTopicName(_)
        | UnknownVerb(_)
        | UnknownVerbName(_)
        | UnknownRelationship(_) => StatusCode::NOT_FOUND,
        InvalidName(_) | SelfLoop(_) | RejectedTopic(_) => StatusCode::UNPROCESSABLE_ENTITY,
        InvariantViolation(_) => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

impl From<EngineError> for ApiError {
    fn from(e: EngineError) -> Self {
        let status = match &e {
            EngineError::Store(s) => store_status(s),
            EngineError::Curation(c) => match c {
                CurationError::NotReliable(_)
                | CurationError::NotCreator(_)
                | CurationError::VerbUnread { .. } => StatusCode::FORBIDDEN,
                CurationError::AlreadyResolved(_) => StatusCode::CONFLICT,
                CurationError::UnknownRelationship(_) | CurationError::UnknownContributor(_) => {
                    StatusCode::NOT_FOUND
                }
                CurationError::EmptyInput => StatusCode::UNPROCESSABLE_ENTITY,
                CurationError::InvalidPolicy(_) => StatusCode::INTERNAL_SERVER_ERROR,
                CurationError::Store(s) => store_status(s),
            },
            EngineError::Redundant { .. } => StatusCode::CONFLICT,
            EngineError::OriginNotAllowed(_) => StatusCode::FORBIDDEN,
        };
        let mut err = ApiError::new(status, &e);
        if let EngineError::Redundant { matches, .. } = &e {
            err.body["redundancies"] = json!(matches);
        }
        err
    }
}

impl From<PersistError> for ApiError {
    fn from(e: PersistError) -> Self {
        log::error!("persistence failure: {e}");
        ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e)
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// State as of one sequence number, with lazily computed topic weights.
pub struct View {
    pub engine: Engine,
    pub sequence: u64,
    alpha: f64,
    beta: f64,
    kgrec: OnceLock<Result<Kgrec, SpreadError>>,
}

impl View {
    fn new(engine: Engine, sequence: u64, cfg: &RecommenderConfig) -> Self {
        Self {
            engine,
            sequence,
            alpha: cfg.alpha,
            beta: cfg.beta,
            kgrec: OnceLock::new(),
        }
    }

    pub fn kgrec(&self) -> Result<&Kgrec, SpreadError> {
        self.kgrec
            .get_or_init(|| Kgrec::from_graph(&self.engine.graph, self.alpha, self.beta))
            .as_ref()
            .map_err(Clone::clone)
    }
}

pub struct AppState {
    durable: Mutex<Durable>,
    view: RwLock<Arc<View>>,
    tokens: TokenIssuer,
    models: BTreeMap<String, Arc<ModelArchive>>,
    cfg: RecommenderConfig,
}

pub type Shared = Arc<AppState>;

impl AppState {
    pub fn new(
        durable: Durable,
        tokens: TokenIssuer,
        models: BTreeMap<String, Arc<ModelArchive>>,
        cfg: RecommenderConfig,
    ) -> Shared {
        let view = View::new(durable.engine().clone(), durable.sequence(), &cfg);
        Arc::new(Self {
            durable: Mutex::new(durable),
            view: RwLock::new(Arc::new(view)),
            tokens,
            models,
            cfg,
        })
    }

    pub fn view(&self) -> Arc<View> {
        self.view.read().clone()
    }

    /// Journals and applies one command, then publishes the new view.
    pub fn execute(&self, cmd: &Command) -> ApiResult<Outcome> {
        let mut d = self.durable.lock();
        let outcome = d.execute(cmd)?;
        *self.view.write() = Arc::new(View::new(d.engine().clone(), d.sequence(), &self.cfg));
        Ok(outcome?)
    }

    pub fn checkpoint(&self) -> Result<u64, PersistError> {
        let mut d = self.durable.lock();
        d.checkpoint()?;
        Ok(d.sequence())
    }

    pub fn tokens(&self) -> &TokenIssuer {
        &self.tokens
    }
}

/// Loads every `*.model` archive in `dir`, keyed by file stem.
pub fn load_models(dir: &Path) -> Result<BTreeMap<String, Arc<ModelArchive>>, ClassifyError> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "model") {
            let id = path
                .file_stem()
                .unwrap_or_default()
                .to_string_lossy()
                .to_string();
            let archive = read_archive(BufReader::new(File::open(&path)?))?;
            log::info!(
                "loaded model `{id}` ({} labels)",
                archive.classifier.labels().len()
            );
            out.insert(id, Arc::new(archive));
        }
    }
    Ok(out)
}

async fn mutate(state: &Shared, cmd: Command) -> ApiResult<Outcome> {
    let st = state.clone();
    tokio::task::spawn_blocking(move || st.execute(&cmd))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))?
}

fn bearer(headers: &HeaderMap) -> ApiResult<&str> {
    headers
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
        .ok_or_else(|| ApiError::new(StatusCode::UNAUTHORIZED, "missing bearer token"))
}

fn actor(state: &Shared, headers: &HeaderMap) -> ApiResult<Actor> {
    let token = bearer(headers)?;
    if state.tokens.is_maintainer(token) {
        return Ok(Actor::Maintainer);
    }
    let id = state
        .tokens
        .contributor(token)
        .ok_or_else(|| ApiError::new(StatusCode::UNAUTHORIZED, "invalid token"))?;
    state
        .view()
        .engine
        .curation
        .contributor(id)
        .map_err(|_| ApiError::new(StatusCode::UNAUTHORIZED, "invalid token"))?;
    Ok(Actor::Contributor(id))
}

fn contributor_actor(state: &Shared, headers: &HeaderMap) -> ApiResult<ContributorId> {
    match actor(state, headers)? {
        Actor::Contributor(c) => Ok(c),
        Actor::Maintainer => Err(ApiError::new(
            StatusCode::FORBIDDEN,
            "this action needs a contributor token",
        )),
    }
}

fn maintainer(state: &Shared, headers: &HeaderMap) -> ApiResult<()> {
    match actor(state, headers)? {
        Actor::Maintainer => Ok(()),
        Actor::Contributor(_) => Err(ApiError::new(StatusCode::FORBIDDEN, "maintainers only")),
    }
}

/// Accepts `12` or `<prefix>12`.
fn parse_id(raw: &str, prefix: char) -> Option<u64> {
    raw.strip_prefix(prefix).unwrap_or(raw).parse().ok()
}

fn not_found(what: impl std::fmt::Display) -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, format!("unknown {what}"))
}

fn find_topic<'a>(view: &'a View, key: &str) -> Option<&'a Topic> {
    let g = &view.engine.graph;
    g.topic_by_name(key)
        .or_else(|| parse_id(key, 't').and_then(|id| g.topic(TopicId(id)).ok()))
}

fn find_verb(view: &View, key: &str) -> Option<VerbId> {
    let g = &view.engine.graph;
    g.verb_by_name(key).map(|v| v.id).or_else(|| {
        parse_id(key, 'v')
            .map(VerbId)
            .filter(|id| g.relation_type(*id).is_ok())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationshipView {
    pub id: RelationshipId,
    pub subject: String,
    pub verb: String,
    pub object: String,
    pub state: EntityState,
    pub proposer: Proposer,
    pub tally: CurationTally,
}

fn relationship_view(view: &View, id: RelationshipId) -> ApiResult<RelationshipView> {
    let g = &view.engine.graph;
    let r = g.relationship(id).map_err(|_| not_found(id))?;
    let name = |t| g.topic(t).map(|t| t.full_name.clone()).unwrap_or_default();
    Ok(RelationshipView {
        id,
        subject: name(r.subject),
        verb: g
            .relation_type(r.verb)
            .map(|v| v.verb.clone())
            .unwrap_or_default(),
        object: name(r.object),
        state: r.state,
        proposer: r.proposer,
        tally: view.engine.curation.tally(id),
    })
}

#[derive(Deserialize)]
struct RegisterBody {
    name: String,
    background: Background,
    years_experience: u32,
}

async fn register(State(state): State<Shared>, Json(b): Json<RegisterBody>) -> ApiResult<Response> {
    let profile = ContributorProfile {
        name: b.name,
        background: b.background,
        years_experience: b.years_experience,
    };
    let Outcome::Contributor(rec) =
        mutate(&state, Command::RegisterContributor { profile }).await?
    else {
        unreachable!("registration yields a contributor")
    };
    let token = state.tokens.issue(rec.id);
    Ok((
        StatusCode::CREATED,
        Json(json!({ "contributor": rec, "token": token })),
    )
        .into_response())
}

async fn get_contributor(
    State(state): State<Shared>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Response> {
    let view = state.view();
    let id = parse_id(&id, 'c').ok_or_else(|| not_found(&id))?;
    let rec = view
        .engine
        .curation
        .contributor(ContributorId(id))
        .map_err(|e| ApiError::new(StatusCode::NOT_FOUND, e))?;
    Ok(Json(rec.clone()).into_response())
}

async fn grant_creator(
    State(state): State<Shared>,
    headers: HeaderMap,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Response> {
    let id = ContributorId(parse_id(&id, 'c').ok_or_else(|| not_found(&id))?);
    match actor(&state, &headers)? {
        Actor::Contributor(c) if c != id => {
            return Err(ApiError::new(StatusCode::FORBIDDEN, "not your account"))
        }
        _ => {}
    }
    let out = mutate(&state, Command::GrantCreator { contributor: id }).await?;
    Ok(Json(out).into_response())
}

async fn mark_read(
    State(state): State<Shared>,
    headers: HeaderMap,
    UrlPath(key): UrlPath<String>,
) -> ApiResult<Response> {
    let c = contributor_actor(&state, &headers)?;
    let verb = find_verb(&state.view(), &key).ok_or_else(|| not_found(&key))?;
    mutate(
        &state,
        Command::MarkVerbRead {
            contributor: c,
            verb,
        },
    )
    .await?;
    Ok(StatusCode::NO_CONTENT.into_response())
}

async fn add_topic(
    State(state): State<Shared>,
    headers: HeaderMap,
    Json(topic): Json<TopicInput>,
) -> ApiResult<Response> {
    let actor = actor(&state, &headers)?;
    let Outcome::Topic(id) = mutate(&state, Command::AddTopic { actor, topic }).await? else {
        unreachable!()
    };
    let view = state.view();
    let t = view
        .engine
        .graph
        .topic(id)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))?;
    Ok((StatusCode::CREATED, Json(t.clone())).into_response())
}

#[derive(Deserialize)]
struct VerbBody {
    verb: String,
    #[serde(default)]
    definition: String,
    #[serde(default)]
    bidirectional: bool,
}

async fn add_relation_type(
    State(state): State<Shared>,
    headers: HeaderMap,
    Json(b): Json<VerbBody>,
) -> ApiResult<Response> {
    let actor = actor(&state, &headers)?;
    let cmd = Command::AddRelationType {
        actor,
        verb: b.verb,
        definition: b.definition,
        bidirectional: b.bidirectional,
    };
    let Outcome::RelationType(id) = mutate(&state, cmd).await? else {
        unreachable!()
    };
    let view = state.view();
    let v = view
        .engine
        .graph
        .relation_type(id)
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))?;
    Ok((StatusCode::CREATED, Json(v.clone())).into_response())
}

#[derive(Deserialize)]
struct RelationshipBody {
    subject: String,
    verb: String,
    object: String,
}

async fn add_relationship(
    State(state): State<Shared>,
    headers: HeaderMap,
    Json(b): Json<RelationshipBody>,
) -> ApiResult<Response> {
    let actor = actor(&state, &headers)?;
    let cmd = Command::AddRelationship {
        actor,
        subject: b.subject,
        verb: b.verb,
        object: b.object,
    };
    let Outcome::Relationship(id) = mutate(&state, cmd).await? else {
        unreachable!()
    };
    Ok((
        StatusCode::CREATED,
        Json(relationship_view(&state.view(), id)?),
    )
        .into_response())
}

#[derive(Deserialize)]
struct VoteBody {
    value: VoteValue,
}

async fn vote(
    State(state): State<Shared>,
    headers: HeaderMap,
    UrlPath(id): UrlPath<String>,
    Json(b): Json<VoteBody>,
) -> ApiResult<Response> {
    let c = contributor_actor(&state, &headers)?;
    let id = RelationshipId(parse_id(&id, 'r').ok_or_else(|| not_found(&id))?);
    let cmd = Command::CastVote {
        contributor: c,
        relationship: id,
        value: b.value,
    };
    let out = mutate(&state, cmd).await?;
    let view = state.view();
    let state_now = view.engine.graph.relationship(id).map(|r| r.state).ok();
    Ok(Json(json!({ "tally": out, "state": state_now })).into_response())
}

#[derive(Deserialize)]
struct StateQuery {
    state: Option<EntityState>,
}

async fn list_relationships(
    State(state): State<Shared>,
    Query(q): Query<StateQuery>,
) -> ApiResult<Response> {
    let view = state.view();
    let list = view
        .engine
        .graph
        .relationships()
        .filter(|r| q.state.is_none_or(|s| r.state == s))
        .map(|r| relationship_view(&view, r.id))
        .collect::<ApiResult<Vec<_>>>()?;
    Ok(Json(list).into_response())
}

async fn get_relationship(
    State(state): State<Shared>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<Response> {
    let id = RelationshipId(parse_id(&id, 'r').ok_or_else(|| not_found(&id))?);
    Ok(Json(relationship_view(&state.view(), id)?).into_response())
}

async fn get_topic(
    State(state): State<Shared>,
    UrlPath(key): UrlPath<String>,
) -> ApiResult<Response> {
    let view = state.view();
    let t = find_topic(&view, &key).ok_or_else(|| not_found(&key))?;
    let g = &view.engine.graph;
    let neighbors: Vec<String> = g
        .neighbors(t.id)
        .unwrap_or_default()
        .into_iter()
        .filter_map(|n| g.topic(n).ok().map(|n| n.full_name.clone()))
        .collect();
    let mut body = json!(t);
    body["degree"] = json!(g.degree(t.id).unwrap_or(0));
    body["neighbors"] = json!(neighbors);
    Ok(Json(body).into_response())
}

#[derive(Deserialize)]
struct ThresholdQuery {
    threshold: Option<f64>,
}

/// For an existing topic, other topics close to it; otherwise `key` is
/// treated as a draft name.
async fn redundancies(
    State(state): State<Shared>,
    UrlPath(key): UrlPath<String>,
    Query(q): Query<ThresholdQuery>,
) -> ApiResult<Response> {
    let view = state.view();
    let threshold = q.threshold.unwrap_or(DEFAULT_REDUNDANCY_THRESHOLD);
    if !(0.0..=1.0).contains(&threshold) {
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "threshold must lie in [0, 1]",
        ));
    }
    let (draft, skip) = match view.engine.graph.topic_by_name(&key) {
        Some(t) => (
            TopicDraft {
                full_name: t.full_name.clone(),
                aliases: t.aliases.clone(),
                ..TopicDraft::new(t.full_name.clone(), t.origin)
            },
            Some(t.id),
        ),
        None => (
            TopicDraft::new(key.to_lowercase(), Default::default()),
            None,
        ),
    };
    Ok(Json(detect_redundancy(
        &draft,
        &view.engine.graph,
        threshold,
        skip,
    ))
    .into_response())
}

async fn curation_metrics(State(state): State<Shared>) -> ApiResult<Response> {
    let view = state.view();
    let m = view
        .engine
        .curation
        .metrics()
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    Ok(Json(m).into_response())
}

#[derive(Deserialize)]
struct AugmentBody {
    topics: Vec<String>,
    /// One per topic; defaults to 1.
    probabilities: Option<Vec<f64>>,
    k: Option<usize>,
}

async fn augment(State(state): State<Shared>, Json(b): Json<AugmentBody>) -> ApiResult<Response> {
    let view = state.view();
    let kg = view
        .kgrec()
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    let probs = b.probabilities.unwrap_or_else(|| vec![1.0; b.topics.len()]);
    if probs.len() != b.topics.len() {
        return Err(ApiError::new(
            StatusCode::UNPROCESSABLE_ENTITY,
            "probabilities must match topics",
        ));
    }
    let seeds = kg
        .seed_from_names(b.topics.iter().map(String::as_str).zip(probs))
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    let res = kg
        .augment(&seeds, b.k.unwrap_or(state.cfg.k))
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    let ranked: Vec<Value> = res
        .ranked
        .iter()
        .map(|&(t, s)| json!({ "topic": kg.name(t), "score": s }))
        .collect();
    Ok(Json(json!({ "ranked": ranked, "failed": res.failed })).into_response())
}

#[derive(Deserialize)]
struct FullBody {
    text: String,
    model: String,
    m: Option<usize>,
    g: Option<usize>,
}

async fn recommend(State(state): State<Shared>, Json(b): Json<FullBody>) -> ApiResult<Response> {
    let model = state
        .models
        .get(&b.model)
        .ok_or_else(|| not_found(format!("model `{}`", b.model)))?;
    let view = state.view();
    let kg = view
        .kgrec()
        .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    let mut cfg = state.cfg.clone();
    if b.m.is_some() || b.g.is_some() {
        cfg = RecommenderConfig {
            alpha: cfg.alpha,
            beta: cfg.beta,
            ..RecommenderConfig::with_split(b.m.unwrap_or(cfg.m), b.g.unwrap_or(cfg.g))
        };
    }
    let list =
        recommend_full(&b.text, &model.classifier, &model.vectorizer, kg, &cfg).map_err(|e| {
            let status = match e {
                RecommendError::UntrainedModel => StatusCode::CONFLICT,
                _ => StatusCode::UNPROCESSABLE_ENTITY,
            };
            ApiError::new(status, e)
        })?;
    Ok(Json(list).into_response())
}

async fn export(State(state): State<Shared>) -> ApiResult<Response> {
    let view = state.view();
    let mut buf = Vec::new();
    snapshot::export(
        &mut buf,
        &view.engine.graph,
        &view.engine.curation,
        view.sequence,
    )
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], buf).into_response())
}

async fn health(State(state): State<Shared>) -> Json<Value> {
    Json(json!({ "sequence": state.view().sequence }))
}

async fn reliability(State(state): State<Shared>, headers: HeaderMap) -> ApiResult<Response> {
    maintainer(&state, &headers)?;
    mutate(&state, Command::CheckReliability).await?;
    Ok(StatusCode::NO_CONTENT.into_response())
}

async fn checkpoint(State(state): State<Shared>, headers: HeaderMap) -> ApiResult<Response> {
    maintainer(&state, &headers)?;
    let st = state.clone();
    let seq = tokio::task::spawn_blocking(move || st.checkpoint())
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))??;
    Ok(Json(json!({ "sequence": seq })).into_response())
}

#[derive(Deserialize)]
struct PopularityBody {
    counts: BTreeMap<String, u64>,
}

async fn set_popularity(
    State(state): State<Shared>,
    headers: HeaderMap,
    Json(b): Json<PopularityBody>,
) -> ApiResult<Response> {
    maintainer(&state, &headers)?;
    let out = mutate(&state, Command::SetPopularity { counts: b.counts }).await?;
    Ok(Json(out).into_response())
}

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/contributors", post(register))
        .route("/contributors/{id}", get(get_contributor))
        .route("/contributors/{id}/creator", post(grant_creator))
        .route("/topics", post(add_topic))
        .route("/topics/{key}", get(get_topic))
        .route("/topics/{key}/redundancies", get(redundancies))
        .route("/relation-types", post(add_relation_type))
        .route("/relation-types/{key}/read", post(mark_read))
        .route(
            "/relationships",
            post(add_relationship).get(list_relationships),
        )
        .route("/relationships/{id}", get(get_relationship))
        .route("/relationships/{id}/votes", post(vote))
        .route("/metrics/curation", get(curation_metrics))
        .route("/recommend/augment", post(augment))
        .route("/recommend/full", post(recommend))
        .route("/kg/export", get(export))
        .route("/popularity", put(set_popularity))
        .route("/admin/reliability", post(reliability))
        .route("/admin/checkpoint", post(checkpoint))
        .with_state(state)
}

/// Serves until `shutdown` resolves, then checkpoints.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: Shared,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state.clone()))
        .with_graceful_shutdown(shutdown)
        .await?;
    state
        .checkpoint()
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(())
}
