//! HTTP routes.

use std::sync::Arc;

use adrcode::{DictionaryBundle, EncoderConfig};
use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::Utc;
use serde::{Deserialize, Serialize};

use crate::negation::NegationScanner;
use crate::search::{search_terms, TermHit, MAX_LIMIT};
use crate::session::{propose, DecisionRequest, Proposal, ReviewSession, Status};
use crate::store::{Store, StoreError};

/// Longest description accepted, in characters.
pub const MAX_TEXT_CHARS: usize = 10_000;
pub const DEFAULT_TERMS_LIMIT: usize = 10;

#[derive(Clone)]
pub struct AppState {
    pub bundle: Option<Arc<DictionaryBundle>>,
    pub encoder: EncoderConfig,
    pub negations: Arc<NegationScanner>,
    pub store: Arc<Store>,
}

impl AppState {
    fn bundle(&self) -> Result<Arc<DictionaryBundle>, ApiError> {
        self.bundle
            .clone()
            .ok_or_else(|| ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "no dictionary loaded"))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/encode", post(encode))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/decisions", post(decide))
        .route("/sessions/{id}/validate", post(validate))
        .route("/terms", get(terms))
        .with_state(state)
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub undecided: Option<Vec<String>>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            body: ErrorBody {
                error: message.into(),
                undecided: None,
            },
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        let status = match &e {
            StoreError::NotFound(_) => StatusCode::NOT_FOUND,
            StoreError::Validated(_) | StoreError::Undecided(_) => StatusCode::CONFLICT,
            StoreError::Invalid(_) => StatusCode::UNPROCESSABLE_ENTITY,
            StoreError::Corrupt { .. } | StoreError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        let mut err = ApiError::new(status, e.to_string());
        if let StoreError::Undecided(codes) = e {
            err.body.undecided = Some(codes);
        }
        err
    }
}

fn bad_json(e: JsonRejection) -> ApiError {
    let status = match e.status() {
        StatusCode::PAYLOAD_TOO_LARGE => StatusCode::PAYLOAD_TOO_LARGE,
        _ => StatusCode::BAD_REQUEST,
    };
    ApiError::new(status, e.body_text())
}

#[derive(Debug, Deserialize)]
pub struct TextBody {
    pub text: String,
}

fn checked_text(body: Result<Json<TextBody>, JsonRejection>) -> Result<String, ApiError> {
    let Json(TextBody { text }) = body.map_err(bad_json)?;
    if text.chars().count() > MAX_TEXT_CHARS {
        return Err(ApiError::new(
            StatusCode::PAYLOAD_TOO_LARGE,
            format!("text longer than {MAX_TEXT_CHARS} characters"),
        ));
    }
    Ok(text)
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, StoreError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))?
        .map_err(ApiError::from)
}

#[derive(Debug, Serialize)]
struct Health {
    status: &'static str,
    dictionary_version: Option<String>,
    terms: usize,
    sessions: usize,
}

async fn health(State(state): State<AppState>) -> Json<Health> {
    Json(Health {
        status: if state.bundle.is_some() { "ok" } else { "no_dictionary" },
        dictionary_version: state.bundle.as_ref().map(|b| b.version().to_string()),
        terms: state.bundle.as_ref().map_or(0, |b| b.dictionary().len()),
        sessions: state.store.len(),
    })
}

async fn encode(
    State(state): State<AppState>,
    body: Result<Json<TextBody>, JsonRejection>,
) -> Result<Json<Proposal>, ApiError> {
    let text = checked_text(body)?;
    let bundle = state.bundle()?;
    let (proposal, _) = propose(&text, &bundle, &state.encoder, &state.negations);
    Ok(Json(proposal))
}

async fn create_session(
    State(state): State<AppState>,
    body: Result<Json<TextBody>, JsonRejection>,
) -> Result<(StatusCode, Json<ReviewSession>), ApiError> {
    let text = checked_text(body)?;
    let bundle = state.bundle()?;
    let (proposal, all_selected) = propose(&text, &bundle, &state.encoder, &state.negations);
    let session = ReviewSession {
        session_id: uuid::Uuid::new_v4().simple().to_string(),
        description: text,
        status: Status::Open,
        created_at: Utc::now(),
        validated_at: None,
        proposal,
        all_selected,
        decisions: Vec::new(),
        final_set: None,
    };
    let store = state.store.clone();
    let session = blocking(move || store.create(session)).await?;
    Ok((StatusCode::CREATED, Json(session)))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<ReviewSession>, ApiError> {
    Ok(Json(state.store.get(&id)?))
}

async fn decide(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<DecisionRequest>, JsonRejection>,
) -> Result<Json<ReviewSession>, ApiError> {
    let Json(req) = body.map_err(bad_json)?;
    state.store.get(&id)?;
    let bundle = state.bundle()?;
    let store = state.store.clone();
    Ok(Json(
        blocking(move || store.decide(&id, req, bundle.dictionary())).await?,
    ))
}

async fn validate(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<ReviewSession>, ApiError> {
    state.store.get(&id)?;
    let bundle = state.bundle()?;
    let store = state.store.clone();
    Ok(Json(blocking(move || store.validate(&id, bundle.dictionary())).await?))
}

#[derive(Debug, Deserialize)]
pub struct TermsQuery {
    #[serde(default)]
    pub q: String,
    pub limit: Option<usize>,
}

async fn terms(
    State(state): State<AppState>,
    query: Result<Query<TermsQuery>, QueryRejection>,
) -> Result<Json<Vec<TermHit>>, ApiError> {
    let Query(query) = query.map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e.body_text()))?;
    if query.q.trim().is_empty() {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, "q must not be empty"));
    }
    let limit = query.limit.unwrap_or(DEFAULT_TERMS_LIMIT);
    if limit == 0 || limit > MAX_LIMIT {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            format!("limit must be between 1 and {MAX_LIMIT}"),
        ));
    }
    let bundle = state.bundle()?;
    Ok(Json(search_terms(bundle.dictionary(), &query.q, limit)))
}
