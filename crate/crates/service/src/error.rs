//! Failures reported to HTTP clients and the command line.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use qview_core::dom::DomError;
use qview_core::engine::{EngineError, ErrorKind};
use qview_core::render::RenderError;
use qview_core::uri::Diagnostic;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    BadRequest,
    NotFound,
    Conflict,
    Gone,
    Unprocessable,
    BadGateway,
    Internal,
}

impl Status {
    pub fn http(self) -> StatusCode {
        match self {
            Status::BadRequest => StatusCode::BAD_REQUEST,
            Status::NotFound => StatusCode::NOT_FOUND,
            Status::Conflict => StatusCode::CONFLICT,
            Status::Gone => StatusCode::GONE,
            Status::Unprocessable => StatusCode::UNPROCESSABLE_ENTITY,
            Status::BadGateway => StatusCode::BAD_GATEWAY,
            Status::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Status::BadRequest => "bad_request",
            Status::NotFound => "not_found",
            Status::Conflict => "conflict",
            Status::Gone => "gone",
            Status::Unprocessable => "unprocessable",
            Status::BadGateway => "upstream",
            Status::Internal => "internal",
        }
    }
}

/// Body of every error response.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{message}")]
pub struct ServiceError {
    pub status: Status,
    pub message: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl ServiceError {
    pub fn new(status: Status, message: impl Into<String>) -> ServiceError {
        ServiceError { status, message: message.into(), diagnostics: Vec::new() }
    }

    pub fn bad_param(param: &str, reason: impl Into<String>) -> ServiceError {
        let reason = reason.into();
        ServiceError {
            status: Status::BadRequest,
            message: format!("parameter `{param}`: {reason}"),
            diagnostics: vec![Diagnostic::new(Some(param), reason)],
        }
    }

    pub fn internal(message: impl Into<String>) -> ServiceError {
        ServiceError::new(Status::Internal, message)
    }

    pub fn body(&self) -> ErrorBody {
        ErrorBody { code: self.status.code(), message: self.message.clone(), diagnostics: self.diagnostics.clone() }
    }
}

impl From<EngineError> for ServiceError {
    fn from(e: EngineError) -> ServiceError {
        let status = match e.kind() {
            ErrorKind::BadRequest => Status::BadRequest,
            ErrorKind::NotFound => Status::NotFound,
            ErrorKind::Upstream => Status::BadGateway,
            ErrorKind::Unprocessable => Status::Unprocessable,
        };
        ServiceError { status, message: e.to_string(), diagnostics: e.diagnostics() }
    }
}

impl From<DomError> for ServiceError {
    fn from(e: DomError) -> ServiceError {
        let diagnostics = match &e {
            DomError::InvalidUri(d) => d.clone(),
            other => vec![Diagnostic::new(None, other.to_string())],
        };
        ServiceError { status: Status::Conflict, message: e.to_string(), diagnostics }
    }
}

impl From<RenderError> for ServiceError {
    fn from(e: RenderError) -> ServiceError {
        let status = match e {
            RenderError::Unsupported(_) | RenderError::NoValidData | RenderError::NoPositiveData => Status::Unprocessable,
            _ => Status::Internal,
        };
        ServiceError::new(status, e.to_string())
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        (self.status.http(), Json(self.body())).into_response()
    }
}
