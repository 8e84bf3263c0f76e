//! HTTP/JSON front end for network evaluation.
//!
//! | method | path                          | body                 | reply               |
//! |--------|-------------------------------|----------------------|---------------------|
//! | GET    | `/builtins`                   |                      | `[BuiltinInfo]`     |
//! | POST   | `/networks[?builtin=&mode=]`  | network file text    | 201 `NetworkSummary`|
//! | GET    | `/networks/{id}`              |                      | `SessionView`       |
//! | POST   | `/networks/{id}/observations` | `ObservationDelta`   | `EvaluationReport`  |
//!
//! Errors come back as [`ApiError`]: 400 for malformed networks and
//! formulas, 404 for unknown sessions, 409 when the observations are in
//! total conflict with the network. A conflicting observation is kept in the
//! session so the caller can see and retract it.

use std::net::SocketAddr;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lru::LruCache;
use serde::Deserialize;
use tbm_core::report::{ApiError, BuiltinInfo, NetworkSummary, ObservationDelta, SessionView};
use tbm_core::scenarios::{builtin_text, BUILTINS};
use tbm_core::{evaluate, parse_formula, parse_network, Error, EvaluationReport, ExceptionMode, Formula, LoadError, NetworkSpec};
use tower_http::cors::CorsLayer;

/// Sessions beyond this count evict the least recently used one.
pub const SESSION_CAPACITY: usize = 256;

#[derive(Clone)]
pub struct AppState {
    sessions: Arc<Mutex<LruCache<String, Arc<Mutex<Session>>>>>,
}

impl AppState {
    pub fn new(capacity: usize) -> Self {
        let cap = NonZeroUsize::new(capacity.max(1)).unwrap();
        AppState { sessions: Arc::new(Mutex::new(LruCache::new(cap))) }
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::not_found(id))
    }
}

impl Default for AppState {
    fn default() -> Self {
        AppState::new(SESSION_CAPACITY)
    }
}

struct Session {
    spec: NetworkSpec,
    /// Bumped on every observation change, so a slow evaluation never
    /// overwrites the cached result of a newer one.
    generation: u64,
    result: Option<EvaluationReport>,
}

/// An [`ApiError`] with its status code.
#[derive(Debug)]
pub struct ServiceError {
    status: StatusCode,
    body: Box<ApiError>,
}

impl ServiceError {
    fn new(status: StatusCode, kind: &str, message: impl Into<String>) -> Self {
        ServiceError { status, body: Box::new(ApiError::new(kind, message)) }
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("no network session `{id}`"))
    }

    fn load(err: LoadError) -> Self {
        let (line, col) = match &err {
            LoadError::Parse { line, col, .. }
            | LoadError::DuplicateVariable { line, col, .. }
            | LoadError::UndeclaredAtom { line, col, .. } => (Some(*line), Some(*col)),
            LoadError::Io { .. } => (None, None),
        };
        let mut e = Self::new(StatusCode::BAD_REQUEST, "parse_error", err.to_string());
        e.body.line = line;
        e.body.col = col;
        e
    }

    fn formula(source: &str, err: Error) -> Self {
        let mut e = Self::new(StatusCode::BAD_REQUEST, "formula_error", format!("`{source}`: {err}"));
        if let Error::Syntax { position, .. } = err {
            e.body.col = Some(source[..position.min(source.len())].chars().count() + 1);
        }
        e
    }

    fn evaluation(err: Error, spec: &NetworkSpec) -> Self {
        match err {
            Error::TotalConflict { conflict_mass } => {
                let mut e = Self::new(StatusCode::CONFLICT, "total_conflict", err.to_string());
                e.body.conflict = Some(tbm_core::ConflictReport::new(conflict_mass));
                e.body.observations = Some(spec.observations().iter().map(|o| o.to_string()).collect());
                e
            }
            other => Self::new(StatusCode::BAD_REQUEST, "bad_request", other.to_string()),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status, Json(*self.body)).into_response()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/builtins", get(list_builtins))
        .route("/networks", post(create_network))
        .route("/networks/{id}", get(get_network))
        .route("/networks/{id}/observations", post(update_observations))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    serve_on(listener).await
}

pub async fn serve_on(listener: tokio::net::TcpListener) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(AppState::default())).await
}

async fn list_builtins() -> Json<Vec<BuiltinInfo>> {
    Json(
        BUILTINS
            .iter()
            .map(|(name, description)| BuiltinInfo { name: (*name).into(), description: (*description).into() })
            .collect(),
    )
}

#[derive(Debug, Default, Deserialize)]
struct CreateParams {
    builtin: Option<String>,
    mode: Option<String>,
}

async fn create_network(
    State(state): State<AppState>,
    Query(params): Query<CreateParams>,
    body: String,
) -> Result<(StatusCode, Json<NetworkSummary>), ServiceError> {
    let text = match &params.builtin {
        Some(name) => builtin_text(name).ok_or_else(|| {
            ServiceError::new(StatusCode::NOT_FOUND, "not_found", format!("no built-in network `{name}`"))
        })?,
        None => body.as_str(),
    };
    let mut spec = parse_network(text).map_err(ServiceError::load)?;
    if let Some(mode) = &params.mode {
        let mode: ExceptionMode =
            mode.parse().map_err(|e: Error| ServiceError::new(StatusCode::BAD_REQUEST, "bad_request", e.to_string()))?;
        spec = spec.with_exception_mode(mode);
    }
    let id = uuid::Uuid::new_v4().simple().to_string();
    let summary = NetworkSummary::new(id.clone(), &spec);
    let session = Session { spec, generation: 0, result: None };
    state.sessions.lock().unwrap().put(id.clone(), Arc::new(Mutex::new(session)));
    tracing::debug!(%id, name = %summary.name, "created session");
    Ok((StatusCode::CREATED, Json(summary)))
}

async fn get_network(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<SessionView>, ServiceError> {
    let session = state.session(&id)?;
    let s = session.lock().unwrap();
    Ok(Json(SessionView { network: NetworkSummary::new(id, &s.spec), result: s.result.clone() }))
}

async fn update_observations(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(delta): Json<ObservationDelta>,
) -> Result<Json<EvaluationReport>, ServiceError> {
    let session = state.session(&id)?;

    // Parse outside the lock; canonical text decides identity.
    let parse = |src: &String| parse_formula(src).map_err(|e| ServiceError::formula(src, e));
    let add: Vec<Formula> = delta.add.iter().map(parse).collect::<Result<_, _>>()?;
    let remove: Vec<String> = delta.remove.iter().map(parse).map(|f| f.map(|f| f.to_string())).collect::<Result<_, _>>()?;

    let (spec, generation) = {
        let mut s = session.lock().unwrap();
        let mut observations: Vec<Formula> = s
            .spec
            .observations()
            .iter()
            .filter(|o| !remove.contains(&o.to_string()))
            .cloned()
            .collect();
        for f in add {
            if !observations.iter().any(|o| o.to_string() == f.to_string()) {
                observations.push(f);
            }
        }
        let next = s.spec.observing(observations).map_err(|e| {
            let source = delta.add.join(", ");
            ServiceError::formula(&source, e)
        })?;
        s.spec = next.clone();
        s.generation += 1;
        s.result = None;
        (next, s.generation)
    };

    let evaluated = {
        let spec = spec.clone();
        tokio::task::spawn_blocking(move || evaluate(&spec).map(|r| EvaluationReport::new(&spec, r)))
            .await
            .map_err(|e| ServiceError::internal(e.to_string()))?
    };
    let report = evaluated.map_err(|e| ServiceError::evaluation(e, &spec))?;

    let mut s = session.lock().unwrap();
    if s.generation == generation {
        s.result = Some(report.clone());
    }
    Ok(Json(report))
}
