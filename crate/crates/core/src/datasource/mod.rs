//! Data-source plug-ins and the registry that maps URI extensions to them.

mod ascii;
mod csv_export;
mod qds;

pub use ascii::AsciiTablePlugin;
pub use csv_export::write_csv;
pub use qds::{read_qds_str, write_qds, QdsPlugin};

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::calendar::TimeInterval;
use crate::qdataset::{DataSetError, QDataSet};
use crate::uri::{implicit_extension, DataSetURI, Diagnostic, UriError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SourceError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: expected {expected} columns, found {found}")]
    Ragged { line: usize, expected: usize, found: usize },
    #[error("no column `{name}` (columns: {})", available.join(", "))]
    UnknownColumn { name: String, available: Vec<String> },
    #[error("no data rows")]
    NoData,
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("no plug-in handles `{ext}` (known: {})", known.join(", "))]
    UnknownExtension { ext: String, known: Vec<String> },
    #[error("parameter `{param}`: {reason}")]
    BadParam { param: String, reason: String },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Uri(#[from] UriError),
    #[error(transparent)]
    DataSet(#[from] DataSetError),
}

impl SourceError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> SourceError {
        SourceError::Io { path: path.display().to_string(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Capabilities {
    pub read: bool,
    pub complete: bool,
    pub export: bool,
}

impl fmt::Display for Capabilities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = [(self.read, "read"), (self.complete, "complete"), (self.export, "export")]
            .into_iter()
            .filter_map(|(on, n)| on.then_some(n))
            .collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluginDescriptor {
    pub id: String,
    pub aliases: Vec<String>,
    pub capabilities: Capabilities,
}

/// Everything a plug-in needs to produce a dataset.
#[derive(Debug, Clone)]
pub struct PluginRequest<'a> {
    pub uri: &'a DataSetURI,
    pub path: &'a Path,
    pub timerange: Option<TimeInterval>,
}

pub trait DataSourcePlugin: Send + Sync {
    fn descriptor(&self) -> &PluginDescriptor;

    /// Parameter names this plug-in accepts.
    fn param_names(&self) -> &[&'static str];

    /// Checks parameter values without touching the resource.
    fn validate_params(&self, uri: &DataSetURI) -> Vec<Diagnostic>;

    fn read(&self, req: &PluginRequest<'_>) -> Result<QDataSet, SourceError>;

    /// Candidate parameters for `uri`, as `name=` stubs or bare tokens.
    fn complete_params(&self, uri: &DataSetURI, path: &Path) -> Result<Vec<String>, SourceError>;

    /// Candidate values for parameter `param`.
    fn complete_values(&self, param: &str, uri: &DataSetURI, path: &Path) -> Result<Vec<String>, SourceError>;
}

/// Extension-keyed plug-in table. Immutable once built.
#[derive(Default)]
pub struct PluginRegistry {
    plugins: Vec<Box<dyn DataSourcePlugin>>,
}

impl fmt::Debug for PluginRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.plugins.iter().map(|p| &p.descriptor().id)).finish()
    }
}

impl PluginRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// The registry with the ASCII-table (`dat`) and interchange (`qds`) plug-ins.
    pub fn with_defaults() -> Self {
        let mut r = PluginRegistry::new();
        r.register(Box::new(AsciiTablePlugin::new())).expect("built-in ids are distinct");
        r.register(Box::new(QdsPlugin::new())).expect("built-in ids are distinct");
        r
    }

    /// Adds a plug-in; its id and aliases must not collide with existing ones.
    pub fn register(&mut self, plugin: Box<dyn DataSourcePlugin>) -> Result<(), String> {
        let d = plugin.descriptor();
        for name in std::iter::once(&d.id).chain(&d.aliases) {
            if self.canonical_extension(name).is_some() {
                return Err(format!("extension `{name}` is already registered"));
            }
        }
        self.plugins.push(plugin);
        Ok(())
    }

    pub fn plugins(&self) -> impl Iterator<Item = &dyn DataSourcePlugin> {
        self.plugins.iter().map(|p| p.as_ref())
    }

    pub fn ids(&self) -> Vec<String> {
        self.plugins.iter().map(|p| p.descriptor().id.clone()).collect()
    }

    /// Plug-in id for an extension or alias.
    pub fn canonical_extension(&self, ext: &str) -> Option<&str> {
        let ext = ext.to_ascii_lowercase();
        self.plugins
            .iter()
            .map(|p| p.descriptor())
            .find(|d| d.id == ext || d.aliases.contains(&ext))
            .map(|d| d.id.as_str())
    }

    pub fn get(&self, id: &str) -> Option<&dyn DataSourcePlugin> {
        let id = self.canonical_extension(id)?;
        self.plugins.iter().find(|p| p.descriptor().id == id).map(|p| p.as_ref())
    }

    /// The plug-in responsible for `uri`.
    pub fn resolve(&self, uri: &DataSetURI) -> Result<&dyn DataSourcePlugin, SourceError> {
        let ext = implicit_extension(uri, self)?;
        self.get(&ext).ok_or_else(|| SourceError::UnknownExtension { ext, known: self.ids() })
    }

    /// One line per plug-in: `id<TAB>aliases=...<TAB>capabilities=...`.
    pub fn about_plugins(&self) -> String {
        self.plugins
            .iter()
            .map(|p| {
                let d = p.descriptor();
                format!("{}\taliases={}\tcapabilities={}\n", d.id, d.aliases.join(","), d.capabilities)
            })
            .collect()
    }
}

/// The pseudo-URI that lists the registry instead of naming data.
pub const ABOUT_PLUGINS: &str = "about:plugins";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uri::parse_uri;

    #[test]
    fn resolves_by_extension_and_alias() {
        let r = PluginRegistry::with_defaults();
        let asc = parse_uri("vap+dat:file:///home/user/myfile.asc").unwrap();
        assert_eq!(r.resolve(&asc).unwrap().descriptor().id, "dat");
        let qds = parse_uri("file:///x.qds").unwrap();
        assert_eq!(r.resolve(&qds).unwrap().descriptor().id, "qds");
        let csv = parse_uri("file:///x.csv").unwrap();
        assert_eq!(r.resolve(&csv).unwrap().descriptor().id, "dat");
        let err = r.resolve(&parse_uri("file:///x.zzz").unwrap()).err().unwrap();
        assert!(err.to_string().contains("dat, qds"), "{err}");
    }

    #[test]
    fn about_plugins_lists_each_once() {
        let r = PluginRegistry::with_defaults();
        let text = r.about_plugins();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("dat\taliases=asc,csv,txt\t"));
        assert!(lines[1].starts_with("qds\t"));
        assert_eq!(PluginRegistry::new().about_plugins(), "");
        assert_eq!(r.canonical_extension("CSV"), Some("dat"));
    }

    #[test]
    fn duplicate_registration_is_refused() {
        let mut r = PluginRegistry::with_defaults();
        assert!(r.register(Box::new(AsciiTablePlugin::new())).is_err());
    }
}
