//! Stateless requests shared by the HTTP endpoints and the command line:
//! plot a URI, export a dataset, complete a partial URI.

use std::collections::HashMap;
use std::sync::Arc;

use qview_core::datasource::{write_csv, write_qds, SourceError, ABOUT_PLUGINS};
use qview_core::dom::{DomEditor, Endpoint, Placement, PropValue};
use qview_core::engine::{DataEngine, EngineError};
use qview_core::render::ImageFormat;
use qview_core::uri::{parse_uri, Suggestion};

use crate::error::{ServiceError, Status};

pub const MIN_SIZE: u32 = 64;
pub const MAX_SIZE: u32 = 4096;
pub const DEFAULT_WIDTH: u32 = 800;
pub const DEFAULT_HEIGHT: u32 = 600;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotRequest {
    pub uri: String,
    pub width: u32,
    pub height: u32,
    pub format: ImageFormat,
    pub timerange: Option<String>,
    /// Plot title override.
    pub label: Option<String>,
}

impl PlotRequest {
    pub fn new(uri: impl Into<String>) -> PlotRequest {
        PlotRequest {
            uri: uri.into(),
            width: DEFAULT_WIDTH,
            height: DEFAULT_HEIGHT,
            format: ImageFormat::Png,
            timerange: None,
            label: None,
        }
    }

    /// Reads `uri`, `width`, `height`, `format`, `timerange` and `label`.
    pub fn from_query(q: &HashMap<String, String>) -> Result<PlotRequest, ServiceError> {
        let uri = q.get("uri").ok_or_else(|| ServiceError::bad_param("uri", "missing"))?;
        let mut req = PlotRequest::new(uri.as_str());
        let size = |name: &str, default: u32| -> Result<u32, ServiceError> {
            match q.get(name) {
                None => Ok(default),
                Some(v) => v.parse().map_err(|_| ServiceError::bad_param(name, format!("not an integer: {v:?}"))),
            }
        };
        req.width = size("width", DEFAULT_WIDTH)?;
        req.height = size("height", DEFAULT_HEIGHT)?;
        if let Some(f) = q.get("format") {
            req.format = image_format(f)?;
        }
        req.timerange = q.get("timerange").cloned();
        req.label = q.get("label").cloned();
        req.check()?;
        Ok(req)
    }

    pub fn check(&self) -> Result<(), ServiceError> {
        for (name, v) in [("width", self.width), ("height", self.height)] {
            if !(MIN_SIZE..=MAX_SIZE).contains(&v) {
                return Err(ServiceError::bad_param(name, format!("{v} is outside {MIN_SIZE}..={MAX_SIZE}")));
            }
        }
        Ok(())
    }
}

pub fn image_format(text: &str) -> Result<ImageFormat, ServiceError> {
    ImageFormat::parse(text).ok_or_else(|| ServiceError::bad_param("format", format!("expected png or svg, got {text:?}")))
}

/// `WxH`, as in `800x600`.
pub fn parse_size(text: &str) -> Result<(u32, u32), String> {
    let (w, h) = text.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got {text:?}"))?;
    let n = |s: &str| s.trim().parse::<u32>().map_err(|_| format!("expected WxH, got {text:?}"));
    Ok((n(w)?, n(h)?))
}

/// `uri` with its `timerange` parameter replaced by `timerange`, if given.
pub fn with_timerange(uri: &str, timerange: Option<&str>) -> Result<String, ServiceError> {
    match timerange {
        None => Ok(uri.to_string()),
        Some(t) => {
            let u = parse_uri(uri).map_err(|e| ServiceError::from(EngineError::from(e)))?;
            Ok(u.with_param("timerange", t).to_string())
        }
    }
}

/// Renders a one-plot canvas for the request.
pub fn plot(engine: &DataEngine, req: &PlotRequest) -> Result<Vec<u8>, ServiceError> {
    req.check()?;
    let uri = with_timerange(&req.uri, req.timerange.as_deref())?;
    let ds = engine.read(&uri)?;
    let mut ed = DomEditor::new(Arc::new(engine.clone()));
    ed.preload(uri.clone(), ds);
    ed.add_plot_element(&uri, Placement::Replace)?;
    ed.set_property(&Endpoint::new("canvas_0", "width"), PropValue::Int(req.width.into()))?;
    ed.set_property(&Endpoint::new("canvas_0", "height"), PropValue::Int(req.height.into()))?;
    if let Some(label) = &req.label {
        let plot = ed.dom().plots[0].id.clone();
        ed.set_property(&Endpoint::new(plot, "title"), PropValue::Text(label.clone()))?;
    }
    Ok(ed.render(req.format)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Qds,
}

impl DataFormat {
    pub fn parse(text: &str) -> Result<DataFormat, ServiceError> {
        match text.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "qds" => Ok(DataFormat::Qds),
            _ => Err(ServiceError::bad_param("format", format!("expected csv or qds, got {text:?}"))),
        }
    }

    pub fn content_type(self) -> &'static str {
        match self {
            DataFormat::Csv => "text/csv; charset=utf-8",
            DataFormat::Qds => "application/json",
        }
    }
}

/// The dataset named by `uri`, written as `format`.
pub fn export(engine: &DataEngine, uri: &str, timerange: Option<&str>, format: DataFormat) -> Result<String, ServiceError> {
    let uri = with_timerange(uri, timerange)?;
    let ds = engine.read(&uri)?;
    match format {
        DataFormat::Csv => write_csv(&ds).map_err(|e| match e {
            SourceError::Unsupported(m) => ServiceError::new(Status::Unprocessable, m),
            other => ServiceError::internal(other.to_string()),
        }),
        DataFormat::Qds => Ok(write_qds(&ds)),
    }
}

/// The plug-in listing when `uri` is `about:plugins`.
pub fn about(engine: &DataEngine, uri: &str) -> Option<String> {
    (uri.trim() == ABOUT_PLUGINS).then(|| engine.registry().about_plugins())
}

pub fn complete(engine: &DataEngine, partial: &str) -> Vec<Suggestion> {
    engine.complete(partial)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn about_plugins_lists_the_registry() {
        let eng = DataEngine::new(qview_core::datasource::PluginRegistry::with_defaults(), qview_core::vfs::Vfs::offline("/nonexistent"));
        let text = about(&eng, "about:plugins").unwrap();
        assert!(text.lines().any(|l| l.starts_with("dat")) && text.lines().any(|l| l.starts_with("qds")), "{text}");
        assert_eq!(about(&eng, "file:///x.csv"), None);
    }

    #[test]
    fn sizes_and_formats() {
        assert_eq!(parse_size("800x600"), Ok((800, 600)));
        assert!(parse_size("800").is_err());
        let q = |pairs: &[(&str, &str)]| pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        assert!(PlotRequest::from_query(&q(&[])).is_err());
        let r = PlotRequest::from_query(&q(&[("uri", "x.csv"), ("format", "svg"), ("width", "64")])).unwrap();
        assert_eq!((r.format, r.width, r.height), (ImageFormat::Svg, 64, 600));
        let e = PlotRequest::from_query(&q(&[("uri", "x.csv"), ("height", "5000")])).unwrap_err();
        assert_eq!(e.diagnostics[0].param.as_deref(), Some("height"));
        assert!(PlotRequest::from_query(&q(&[("uri", "x.csv"), ("format", "pdf")])).is_err());
    }

    #[test]
    fn timerange_replaces_parameter() {
        let u = with_timerange("file:///a/$Y.csv?timerange=2007", Some("2008")).unwrap();
        assert_eq!(u, "file:///a/$Y.csv?timerange=2008");
        assert_eq!(with_timerange("file:///a.csv", None).unwrap(), "file:///a.csv");
    }
}
