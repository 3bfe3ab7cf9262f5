//! HTTP JSON endpoints over [`SessionStore`].
//!
//! ```text
//! POST /session                  {family, x0, budget, r} -> state
//! POST /session/{id}/protect     ["key", ...]            -> state after spread
//! GET  /session/{id}                                     -> state
//! GET  /session/{id}/trace                               -> JSON-lines trace
//! POST /session/{id}/undo                                -> previous state
//! POST /session/{id}/redo                                -> state
//! ```

use std::net::SocketAddr;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;

use crate::error::Error;
use crate::service::{CreateRequest, ServiceError, SessionStore};

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let (status, body) = match &self {
            ServiceError::NotFound(id) => (
                StatusCode::NOT_FOUND,
                json!({"error": "not_found", "message": self.to_string(), "id": id}),
            ),
            ServiceError::Engine(e) => (StatusCode::BAD_REQUEST, error_body(e)),
        };
        (status, Json(body)).into_response()
    }
}

/// Structured error document, shared with the command line.
pub fn error_body(e: &Error) -> serde_json::Value {
    let mut body = json!({"error": e.kind(), "message": e.to_string()});
    match e {
        Error::ProtectionOverlap { turn, vertex, state } => {
            body["turn"] = json!(turn);
            body["vertex"] = json!(vertex);
            body["state"] = json!(state);
        }
        Error::BudgetExceeded { turn, size, budget } => {
            body["turn"] = json!(turn);
            body["size"] = json!(size);
            body["budget"] = json!(budget);
        }
        Error::HypothesisViolated { index, .. }
        | Error::PreconditionViolated { index, .. }
        | Error::PartitionInfeasible { turn: index, .. }
        | Error::TransferInvariant { turn: index, .. } => {
            body["index"] = json!(index);
        }
        _ => {}
    }
    body
}

async fn create(State(store): State<SessionStore>, Json(req): Json<CreateRequest>) -> Result<Response, ServiceError> {
    let view = store.create(&req)?;
    Ok((StatusCode::CREATED, Json(json!({"id": view.id.clone(), "state": view}))).into_response())
}

async fn protect(
    State(store): State<SessionStore>,
    Path(id): Path<String>,
    Json(keys): Json<Vec<String>>,
) -> Result<Response, ServiceError> {
    Ok(Json(store.with(&id, |s| s.protect(&keys))?).into_response())
}

async fn state(State(store): State<SessionStore>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.with(&id, |s| Ok(s.view()))?).into_response())
}

async fn trace(State(store): State<SessionStore>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let text = store.with(&id, |s| s.trace().map(|t| t.to_jsonl()))?;
    Ok(([(header::CONTENT_TYPE, "application/x-ndjson")], text).into_response())
}

async fn undo(State(store): State<SessionStore>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.with(&id, |s| s.undo())?).into_response())
}

async fn redo(State(store): State<SessionStore>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    Ok(Json(store.with(&id, |s| s.redo())?).into_response())
}

pub fn router(store: SessionStore) -> Router {
    Router::new()
        .route("/session", post(create))
        .route("/session/{id}", get(state))
        .route("/session/{id}/protect", post(protect))
        .route("/session/{id}/trace", get(trace))
        .route("/session/{id}/undo", post(undo))
        .route("/session/{id}/redo", post(redo))
        .with_state(store)
}

pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(SessionStore::new())).await
}
