//! URI-to-dataset resolution: validation, fetching, plug-in dispatch and
//! aggregation behind one entry point.

use std::sync::Arc;

use thiserror::Error;

use crate::aggregation::{aggregate_read, AggregationError, DEFAULT_PARALLELISM};
use crate::calendar::{TimeError, TimeInterval};
use crate::datasource::{PluginRegistry, PluginRequest, SourceError};
use crate::qdataset::QDataSet;
use crate::uri::{complete, parse_uri, validate, CompletionContext, DataSetURI, Diagnostic, Suggestion, UriError};
use crate::vfs::{ResourceRef, Vfs, VfsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Uri(#[from] UriError),
    #[error("invalid URI: {}", diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid { diagnostics: Vec<Diagnostic> },
    #[error(transparent)]
    Time(#[from] TimeError),
    #[error(transparent)]
    Vfs(#[from] VfsError),
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Aggregation(#[from] AggregationError),
}

/// Broad failure classes, used for exit codes and HTTP statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The request itself is wrong.
    BadRequest,
    /// The named resource does not exist.
    NotFound,
    /// A remote server failed or could not be reached.
    Upstream,
    /// The data exists but cannot be handled as asked.
    Unprocessable,
}

fn vfs_kind(e: &VfsError) -> ErrorKind {
    match e {
        e if e.is_not_found() => ErrorKind::NotFound,
        VfsError::Network { .. } | VfsError::Status { .. } | VfsError::BadIndex(_) => ErrorKind::Upstream,
        VfsError::UnsupportedScheme(_) | VfsError::Malformed(_) | VfsError::NotAFile(_) | VfsError::NotADirectory(_) => {
            ErrorKind::BadRequest
        }
        _ => ErrorKind::Unprocessable,
    }
}

fn source_kind(e: &SourceError) -> ErrorKind {
    match e {
        SourceError::UnknownExtension { .. } | SourceError::BadParam { .. } | SourceError::Uri(_) => ErrorKind::BadRequest,
        SourceError::UnknownColumn { .. } => ErrorKind::BadRequest,
        _ => ErrorKind::Unprocessable,
    }
}

impl EngineError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            EngineError::Uri(_) | EngineError::Invalid { .. } | EngineError::Time(_) => ErrorKind::BadRequest,
            EngineError::Vfs(e) => vfs_kind(e),
            EngineError::Source(e) => source_kind(e),
            EngineError::Aggregation(e) => match e {
                AggregationError::NoMatches { .. } => ErrorKind::NotFound,
                AggregationError::NotTemplated(_) | AggregationError::Template(_) => ErrorKind::BadRequest,
                AggregationError::List { source, .. } | AggregationError::Fetch { source, .. } => vfs_kind(source),
                AggregationError::Read { source, .. } => source_kind(source),
                AggregationError::DuplicateCoverage { .. } | AggregationError::Merge(_) => ErrorKind::Unprocessable,
            },
        }
    }

    /// Diagnostics for the error, one per offending parameter when known.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            EngineError::Invalid { diagnostics } => diagnostics.clone(),
            EngineError::Source(SourceError::BadParam { param, reason }) => vec![Diagnostic::new(Some(param), reason.clone())],
            EngineError::Time(e) => vec![Diagnostic::new(Some("timerange"), e.to_string())],
            other => vec![Diagnostic::new(None, other.to_string())],
        }
    }
}

/// Shared resolution context: plug-ins plus the virtual filesystem.
#[derive(Debug, Clone)]
pub struct DataEngine {
    registry: Arc<PluginRegistry>,
    vfs: Arc<Vfs>,
    parallelism: usize,
}

impl DataEngine {
    pub fn new(registry: PluginRegistry, vfs: Vfs) -> DataEngine {
        DataEngine { registry: Arc::new(registry), vfs: Arc::new(vfs), parallelism: DEFAULT_PARALLELISM }
    }

    pub fn with_parallelism(mut self, n: usize) -> DataEngine {
        self.parallelism = n.max(1);
        self
    }

    pub fn registry(&self) -> &PluginRegistry {
        &self.registry
    }

    pub fn vfs(&self) -> &Vfs {
        &self.vfs
    }

    pub fn validate(&self, uri: &DataSetURI) -> Vec<Diagnostic> {
        validate(uri, &self.registry)
    }

    pub fn complete(&self, partial: &str) -> Vec<Suggestion> {
        complete(partial, &CompletionContext { registry: &self.registry, vfs: &self.vfs })
    }

    /// Reads the dataset named by `text`.
    pub fn read(&self, text: &str) -> Result<QDataSet, EngineError> {
        self.read_uri(&parse_uri(text)?)
    }

    /// Reads `uri`. Templated resources are aggregated over the `timerange`
    /// parameter.
    pub fn read_uri(&self, uri: &DataSetURI) -> Result<QDataSet, EngineError> {
        let diagnostics = self.validate(uri);
        if !diagnostics.is_empty() {
            return Err(EngineError::Invalid { diagnostics });
        }
        let range: Option<TimeInterval> = uri.timerange().transpose()?;
        if uri.is_templated() {
            let range = range.expect("validation requires a timerange for templates");
            return Ok(aggregate_read(uri, &range, &self.vfs, &self.registry, self.parallelism)?);
        }
        let plugin = self.registry.resolve(uri)?;
        let r = ResourceRef::parse(&uri.resource)?;
        let path = self.vfs.fetch(&r)?;
        Ok(plugin.read(&PluginRequest { uri, path: &path, timerange: range })?)
    }
}
