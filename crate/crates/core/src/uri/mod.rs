//! Data-set URIs.
//!
//! Grammar:
//!
//! ```text
//! uri      = ["vap+" ext ":"] resource ["?" param *("&" param)]
//! param    = name ["=" value] | bare-token
//! ```
//!
//! `resource` is a `file:`, `http:` or `https:` locator and may contain
//! filename-template fields (`$Y`, `$m`, ...). Names and values are
//! percent-decoded on parse and re-encoded on format. A value-less token is
//! the principal parameter (`?BGSM` names the parameter to read); it is
//! also reachable under the name `param`.

mod complete;

pub use complete::{complete, CompletionContext, Suggestion};

use std::fmt;
use std::str::FromStr;

use percent_encoding::{percent_decode_str, utf8_percent_encode, AsciiSet, CONTROLS};
use serde::Serialize;
use thiserror::Error;

use crate::calendar::{parse_timerange, FileTemplate, TimeInterval};
use crate::datasource::PluginRegistry;

pub(crate) const VALUE_SET: &AsciiSet = &CONTROLS.add(b' ').add(b'%').add(b'&').add(b'#').add(b'"');
const NAME_SET: &AsciiSet = &VALUE_SET.add(b'=');

/// Parameter names handled by the engine rather than by plug-ins.
pub const GENERIC_PARAMS: &[&str] = &["timerange"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UriError {
    #[error("empty URI")]
    Empty,
    #[error("malformed `vap+` prefix in `{0}`")]
    MalformedPrefix(String),
    #[error("URI `{0}` has no resource")]
    EmptyResource(String),
    #[error("no data-source extension can be determined for `{0}`")]
    NoExtension(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataSetURI {
    pub explicit_ext: Option<String>,
    pub resource: String,
    pub params: Vec<(String, Option<String>)>,
}

/// A validation finding for one parameter (or for the URI as a whole).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub param: Option<String>,
    pub reason: String,
}

impl Diagnostic {
    pub fn new(param: Option<&str>, reason: impl Into<String>) -> Self {
        Self { param: param.map(str::to_string), reason: reason.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.param {
            Some(p) => write!(f, "{p}: {}", self.reason),
            None => f.write_str(&self.reason),
        }
    }
}

fn decode(s: &str) -> String {
    percent_decode_str(s).decode_utf8_lossy().into_owned()
}

pub fn parse_uri(text: &str) -> Result<DataSetURI, UriError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(UriError::Empty);
    }
    let (explicit_ext, rest) = match text.strip_prefix("vap+") {
        Some(after) => {
            let colon = after.find(':').ok_or_else(|| UriError::MalformedPrefix(text.to_string()))?;
            let ext = &after[..colon];
            if ext.is_empty() || !ext.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-') {
                return Err(UriError::MalformedPrefix(text.to_string()));
            }
            (Some(ext.to_string()), &after[colon + 1..])
        }
        None => (None, text),
    };
    let (resource, query) = match rest.split_once('?') {
        Some((r, q)) => (r, Some(q)),
        None => (rest, None),
    };
    if resource.is_empty() {
        return Err(UriError::EmptyResource(text.to_string()));
    }
    let params = query
        .map(|q| {
            q.split('&')
                .filter(|p| !p.is_empty())
                .map(|p| match p.split_once('=') {
                    Some((n, v)) => (decode(n), Some(decode(v))),
                    None => (decode(p), None),
                })
                .collect()
        })
        .unwrap_or_default();
    Ok(DataSetURI { explicit_ext, resource: resource.to_string(), params })
}

impl FromStr for DataSetURI {
    type Err = UriError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_uri(s)
    }
}

impl fmt::Display for DataSetURI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(ext) = &self.explicit_ext {
            write!(f, "vap+{ext}:")?;
        }
        f.write_str(&self.resource)?;
        for (i, (name, value)) in self.params.iter().enumerate() {
            f.write_str(if i == 0 { "?" } else { "&" })?;
            write!(f, "{}", utf8_percent_encode(name, NAME_SET))?;
            if let Some(v) = value {
                write!(f, "={}", utf8_percent_encode(v, VALUE_SET))?;
            }
        }
        Ok(())
    }
}

impl DataSetURI {
    pub fn new(resource: impl Into<String>) -> Self {
        Self { explicit_ext: None, resource: resource.into(), params: Vec::new() }
    }

    /// Value of a named parameter. `param` also finds the principal bare token.
    pub fn get(&self, name: &str) -> Option<&str> {
        let named = self.params.iter().find(|(n, v)| n == name && v.is_some()).and_then(|(_, v)| v.as_deref());
        if named.is_some() || name != "param" {
            return named;
        }
        self.principal()
    }

    /// The first value-less token (`?BGSM`).
    pub fn principal(&self) -> Option<&str> {
        self.params.iter().find(|(_, v)| v.is_none()).map(|(n, _)| n.as_str())
    }

    pub fn has(&self, name: &str) -> bool {
        self.params.iter().any(|(n, _)| n == name)
    }

    /// Copy with `name` set to `value`, replacing an existing entry in place.
    pub fn with_param(&self, name: &str, value: &str) -> DataSetURI {
        let mut out = self.clone();
        match out.params.iter_mut().find(|(n, v)| n == name && v.is_some()) {
            Some(slot) => slot.1 = Some(value.to_string()),
            None => out.params.push((name.to_string(), Some(value.to_string()))),
        }
        out
    }

    pub fn without_param(&self, name: &str) -> DataSetURI {
        let mut out = self.clone();
        out.params.retain(|(n, v)| !(n == name && v.is_some()));
        out
    }

    /// The `timerange` parameter, parsed.
    pub fn timerange(&self) -> Option<Result<TimeInterval, crate::calendar::TimeError>> {
        self.get("timerange").map(parse_timerange)
    }

    /// The resource path as a filename template.
    pub fn template(&self) -> Option<FileTemplate> {
        FileTemplate::parse(&self.resource).ok()
    }

    /// True when the resource contains template fields or wildcards.
    pub fn is_templated(&self) -> bool {
        self.template().is_some_and(|t| t.is_templated())
    }

    /// Extension of the last path segment, lower-cased.
    pub fn file_extension(&self) -> Option<String> {
        let path = self.resource.split(['#']).next().unwrap_or("");
        let last = path.rsplit('/').next().unwrap_or("");
        let dot = last.rfind('.')?;
        let ext = &last[dot + 1..];
        (!ext.is_empty() && ext.bytes().all(|b| b.is_ascii_alphanumeric())).then(|| ext.to_ascii_lowercase())
    }
}

/// The extension naming the responsible plug-in: the explicit `vap+ext:`
/// when present, otherwise the file extension mapped through the
/// registry's aliases.
pub fn implicit_extension(d: &DataSetURI, registry: &PluginRegistry) -> Result<String, UriError> {
    if let Some(ext) = &d.explicit_ext {
        return Ok(ext.clone());
    }
    let ext = d.file_extension().ok_or_else(|| UriError::NoExtension(d.to_string()))?;
    Ok(registry.canonical_extension(&ext).map(str::to_string).unwrap_or(ext))
}

/// Diagnostics for a URI; empty when the resolved plug-in accepts every
/// parameter.
pub fn validate(d: &DataSetURI, registry: &PluginRegistry) -> Vec<Diagnostic> {
    let plugin = match registry.resolve(d) {
        Ok(p) => p,
        Err(e) => return vec![Diagnostic::new(None, e.to_string())],
    };
    let mut diags = Vec::new();
    let known = plugin.param_names();
    for (name, value) in &d.params {
        let Some(value) = value else { continue };
        if name == "timerange" {
            if let Err(e) = parse_timerange(value) {
                diags.push(Diagnostic::new(Some(name), e.to_string()));
            }
            continue;
        }
        if !known.contains(&name.as_str()) {
            diags.push(Diagnostic::new(Some(name), format!("unknown parameter for `{}`", plugin.descriptor().id)));
        }
    }
    diags.extend(plugin.validate_params(d));
    if d.is_templated() && d.get("timerange").is_none() {
        diags.push(Diagnostic::new(Some("timerange"), "templated URI needs a timerange"));
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_explicit_extension_and_params() {
        let u = parse_uri("vap+dat:file:///home/user/myfile.asc?delim=comma&skip=5").unwrap();
        assert_eq!(u.explicit_ext.as_deref(), Some("dat"));
        assert_eq!(u.resource, "file:///home/user/myfile.asc");
        assert_eq!(
            u.params,
            vec![("delim".into(), Some("comma".into())), ("skip".into(), Some("5".into()))]
        );
    }

    #[test]
    fn bare_token_is_principal() {
        let u = parse_uri("http://autoplot.org/data/autoplot.cdf?BGSM").unwrap();
        assert_eq!(u.explicit_ext, None);
        assert_eq!(u.principal(), Some("BGSM"));
        assert_eq!(u.get("param"), Some("BGSM"));
    }

    #[test]
    fn plain_file_has_no_params() {
        let u = parse_uri("file:///a.csv").unwrap();
        assert!(u.params.is_empty());
        assert_eq!(u.file_extension().as_deref(), Some("csv"));
        assert_eq!(u.to_string(), "file:///a.csv");
    }

    #[test]
    fn rejects_bad_prefix_and_empty_resource() {
        assert!(matches!(parse_uri("vap+dat"), Err(UriError::MalformedPrefix(_))));
        assert!(matches!(parse_uri("vap+:file:///x"), Err(UriError::MalformedPrefix(_))));
        assert!(matches!(parse_uri("vap+dat:?x=1"), Err(UriError::EmptyResource(_))));
        assert_eq!(parse_uri("  "), Err(UriError::Empty));
    }

    #[test]
    fn percent_decoding_and_reencoding() {
        let u = parse_uri("file:///a.csv?column=a%20b&fill=-1e31").unwrap();
        assert_eq!(u.get("column"), Some("a b"));
        assert_eq!(u.to_string(), "file:///a.csv?column=a%20b&fill=-1e31");
        let built = DataSetURI::new("file:///x.csv").with_param("column", "x&y=z");
        assert_eq!(parse_uri(&built.to_string()).unwrap(), built);
    }

    #[test]
    fn templated_resource() {
        let u = parse_uri("vap+dat:file:///d/$Y/ac_k0_swe_$Y$m$d_v...cdf?Np&timerange=2008-June").unwrap();
        assert!(u.is_templated());
        assert_eq!(u.file_extension().as_deref(), Some("cdf"));
        assert_eq!(u.timerange().unwrap().unwrap(), parse_timerange("2008-06").unwrap());
        assert_eq!(u.to_string(), "vap+dat:file:///d/$Y/ac_k0_swe_$Y$m$d_v...cdf?Np&timerange=2008-June");
    }

    #[test]
    fn with_param_replaces_in_place() {
        let u = parse_uri("file:///a.csv?column=x&skip=1").unwrap();
        assert_eq!(u.with_param("column", "y").to_string(), "file:///a.csv?column=y&skip=1");
        assert_eq!(u.without_param("column").to_string(), "file:///a.csv?skip=1");
    }
}
