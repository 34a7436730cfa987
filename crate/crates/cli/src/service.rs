//! HTTP policy decision point.
//!
//! | method | path                          | body                         |
//! |--------|-------------------------------|------------------------------|
//! | POST   | `/v1/policies`                | `{id, source}`               |
//! | GET    | `/v1/policies/{id}`           |                              |
//! | POST   | `/v1/policies/{id}/evaluate`  | `{request: [[name, value]]}` |
//! | POST   | `/v1/policies/{id}/analyze`   | `{mode, limit?, request?}`   |
//! | GET    | `/healthz`                    |                              |

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use ptacl_core::{ParseError, Request, SubRequestMode, DEFAULT_LIMIT};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::report::{self, Search};
use crate::store::{PolicyStore, StoreError};

pub fn router(store: Arc<PolicyStore>) -> Router {
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/v1/policies", post(register))
        .route("/v1/policies/{id}", get(fetch))
        .route("/v1/policies/{id}/evaluate", post(evaluate))
        .route("/v1/policies/{id}/analyze", post(analyze))
        .with_state(store)
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    Parse(ParseError),
    NotFound(String),
    Conflict(String),
    Budget(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::BadRequest(msg) => (StatusCode::BAD_REQUEST, json!({ "error": msg })),
            ApiError::Parse(e) => (
                StatusCode::BAD_REQUEST,
                json!({ "error": e.to_string(), "span": e.span, "expected": e.expected }),
            ),
            ApiError::NotFound(id) => (StatusCode::NOT_FOUND, json!({ "error": format!("no policy `{id}`") })),
            ApiError::Conflict(msg) => (StatusCode::CONFLICT, json!({ "error": msg })),
            ApiError::Budget(msg) => (StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": msg })),
        };
        (status, Json(body)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::BadRequest(e.body_text())
    }
}

fn lookup(store: &PolicyStore, id: &str) -> Result<Arc<crate::store::StoredPolicy>, ApiError> {
    store.get(id).ok_or_else(|| ApiError::NotFound(id.to_owned()))
}

#[derive(Deserialize)]
struct Registration {
    id: String,
    source: String,
}

#[derive(Serialize)]
struct PolicyBody<'a> {
    id: &'a str,
    source: &'a str,
}

async fn register(
    State(store): State<Arc<PolicyStore>>,
    body: Result<Json<Registration>, JsonRejection>,
) -> Result<(StatusCode, Json<serde_json::Value>), ApiError> {
    let Json(reg) = body?;
    match store.insert(&reg.id, &reg.source) {
        Ok(stored) => Ok((StatusCode::CREATED, Json(json!({ "id": stored.id })))),
        Err(StoreError::Duplicate(id)) => Err(ApiError::Conflict(format!("policy `{id}` is already registered"))),
        Err(StoreError::Parse(e)) => Err(ApiError::Parse(e)),
        Err(e @ StoreError::InvalidId(_)) => Err(ApiError::BadRequest(e.to_string())),
    }
}

async fn fetch(State(store): State<Arc<PolicyStore>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let stored = lookup(&store, &id)?;
    Ok(Json(PolicyBody {
        id: &stored.id,
        source: &stored.source,
    })
    .into_response())
}

#[derive(Deserialize)]
struct EvaluateBody {
    request: Request,
    #[serde(default)]
    trace: bool,
}

async fn evaluate(
    State(store): State<Arc<PolicyStore>>,
    Path(id): Path<String>,
    body: Result<Json<EvaluateBody>, JsonRejection>,
) -> Result<Json<report::EvalReport>, ApiError> {
    let stored = lookup(&store, &id)?;
    let Json(body) = body?;
    Ok(Json(report::evaluate(&stored.policy, &body.request, body.trace)))
}

#[derive(Deserialize)]
struct AnalyzeBody {
    #[serde(default = "default_mode")]
    mode: SubRequestMode,
    #[serde(default = "default_limit")]
    limit: usize,
    #[serde(default)]
    request: Option<Request>,
}

fn default_mode() -> SubRequestMode {
    SubRequestMode::ArbitrarySubset
}

fn default_limit() -> usize {
    DEFAULT_LIMIT
}

async fn analyze(
    State(store): State<Arc<PolicyStore>>,
    Path(id): Path<String>,
    body: Result<Json<AnalyzeBody>, JsonRejection>,
) -> Result<Json<report::PolicyReport>, ApiError> {
    let stored = lookup(&store, &id)?;
    let Json(body) = body?;
    let search = Search::Exhaustive { limit: body.limit };
    report::analyze_policy(&stored.policy, body.mode, body.request.as_ref(), search)
        .map(Json)
        .map_err(|e| ApiError::Budget(e.to_string()))
}

/// Serves until interrupted.
pub async fn serve(store: Arc<PolicyStore>, addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("ptacl: serving {} policies on http://{}", store.len(), listener.local_addr()?);
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
