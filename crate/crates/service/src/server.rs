//! HTTP routes.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderName, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use qview_core::dom::DomOp;
use qview_core::engine::DataEngine;
use serde::Serialize;

use crate::error::ServiceError;
use crate::requests::{self, image_format, DataFormat, PlotRequest};
use crate::session::{dom_document, Sessions, DEFAULT_IDLE};

pub const REVISION_HEADER: &str = "x-dom-revision";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub session_idle: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { session_idle: DEFAULT_IDLE }
    }
}

#[derive(Clone)]
pub struct AppState {
    engine: DataEngine,
    sessions: Arc<Sessions>,
}

pub fn router(engine: DataEngine, config: ServiceConfig) -> Router {
    let sessions = Arc::new(Sessions::new(engine.clone(), config.session_idle));
    Router::new()
        .route("/plot", get(plot))
        .route("/data", get(data))
        .route("/complete", get(complete))
        .route("/session", post(create_session))
        .route("/session/{id}/dom", get(session_dom))
        .route("/session/{id}/op", post(session_op))
        .route("/session/{id}/render", get(session_render))
        .with_state(AppState { engine, sessions })
}

/// Serves `router` on `listener` until the process ends.
pub async fn serve(listener: tokio::net::TcpListener, router: Router) -> std::io::Result<()> {
    axum::serve(listener, router).await
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ServiceError::internal(e.to_string()))
}

fn revision_header(rev: u64) -> (HeaderName, HeaderValue) {
    (HeaderName::from_static(REVISION_HEADER), HeaderValue::from(rev))
}

async fn plot(State(st): State<AppState>, Query(q): Query<HashMap<String, String>>) -> Result<Response, ServiceError> {
    let req = PlotRequest::from_query(&q)?;
    let content_type = req.format.content_type();
    let body = blocking(move || requests::plot(&st.engine, &req)).await??;
    Ok(([(header::CONTENT_TYPE, content_type)], body).into_response())
}

async fn data(State(st): State<AppState>, Query(q): Query<HashMap<String, String>>) -> Result<Response, ServiceError> {
    let uri = q.get("uri").cloned().ok_or_else(|| ServiceError::bad_param("uri", "missing"))?;
    if let Some(listing) = requests::about(&st.engine, &uri) {
        return Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], listing).into_response());
    }
    let format = DataFormat::parse(q.get("format").map(String::as_str).unwrap_or("csv"))?;
    let timerange = q.get("timerange").cloned();
    let body = blocking(move || requests::export(&st.engine, &uri, timerange.as_deref(), format)).await??;
    Ok(([(header::CONTENT_TYPE, format.content_type())], body).into_response())
}

async fn complete(State(st): State<AppState>, Query(q): Query<HashMap<String, String>>) -> Result<Response, ServiceError> {
    let partial = q.get("partial").cloned().unwrap_or_default();
    let list = blocking(move || requests::complete(&st.engine, &partial)).await?;
    Ok(Json(list).into_response())
}

#[derive(Serialize)]
struct Created {
    id: String,
    revision: u64,
}

async fn create_session(State(st): State<AppState>) -> Response {
    let id = st.sessions.create();
    (StatusCode::CREATED, Json(Created { id, revision: 0 })).into_response()
}

async fn session_dom(State(st): State<AppState>, Path(id): Path<String>) -> Result<Response, ServiceError> {
    let guard = st.sessions.get(&id)?.lock_owned().await;
    let (rev, doc) = blocking(move || (guard.revision, dom_document(guard.editor.dom()))).await?;
    Ok(([(header::CONTENT_TYPE, HeaderValue::from_static("application/xml")), revision_header(rev)], doc).into_response())
}

#[derive(Serialize)]
struct Applied {
    revision: u64,
    #[serde(flatten)]
    outcome: qview_core::dom::OpOutcome,
}

async fn session_op(State(st): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Response, ServiceError> {
    let handle = st.sessions.get(&id)?;
    let op: DomOp = serde_json::from_slice(&body).map_err(|e| ServiceError::bad_param("body", e.to_string()))?;
    let mut guard = handle.lock_owned().await;
    let applied = blocking(move || {
        let outcome = guard.editor.apply(op)?;
        guard.revision += 1;
        Ok::<_, ServiceError>(Applied { revision: guard.revision, outcome })
    })
    .await??;
    Ok(([revision_header(applied.revision)], Json(applied)).into_response())
}

async fn session_render(
    State(st): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Response, ServiceError> {
    let handle = st.sessions.get(&id)?;
    let format = image_format(q.get("format").map(String::as_str).unwrap_or("png"))?;
    let mut guard = handle.lock_owned().await;
    let (rev, body) = blocking(move || Ok::<_, ServiceError>((guard.revision, guard.editor.render(format)?))).await??;
    Ok(([(header::CONTENT_TYPE, HeaderValue::from_static(format.content_type())), revision_header(rev)], body).into_response())
}
