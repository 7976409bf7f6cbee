//! PNG walks: one image per calendar interval plus a time-ordered index.

use std::fs;
use std::path::{Path, PathBuf};

use qview_core::calendar::{enumerate_intervals, format_iso, Cadence, FileTemplate, TimeInterval};
use qview_core::engine::{DataEngine, EngineError};
use qview_core::uri::parse_uri;

use crate::error::{ServiceError, Status};
use crate::requests::{plot, PlotRequest};

pub const INDEX_FILE: &str = "index.txt";

#[derive(Debug, Clone)]
pub struct WalkOptions {
    pub uri: String,
    pub timerange: TimeInterval,
    pub cadence: Cadence,
    pub out_dir: PathBuf,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WalkReport {
    /// Interval start and file name of each image written, in time order.
    pub written: Vec<(i64, String)>,
    /// Interval start and reason for each interval that failed.
    pub failures: Vec<(i64, String)>,
}

impl WalkReport {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Image name template for a cadence.
pub fn image_template(cadence: Cadence) -> &'static str {
    match cadence {
        Cadence::Hour => "product_$Y$m$d_$H.png",
        _ => "product_$Y$m$d.png",
    }
}

/// Renders every interval of the walk into `out_dir` and writes the index.
/// Failed intervals are reported and left out of the index.
pub fn pngwalk(engine: &DataEngine, opts: &WalkOptions) -> Result<WalkReport, ServiceError> {
    let uri = parse_uri(&opts.uri).map_err(|e| ServiceError::from(EngineError::from(e)))?;
    if !uri.is_templated() && !uri.has("timerange") {
        return Err(ServiceError::new(Status::BadRequest, "pngwalk needs a templated or time-parameterized URI"));
    }
    let names = FileTemplate::parse(image_template(opts.cadence)).expect("built-in template");
    fs::create_dir_all(&opts.out_dir).map_err(|e| io_error(&opts.out_dir, e))?;
    let mut report = WalkReport::default();
    for iv in enumerate_intervals(&opts.timerange, opts.cadence) {
        let name = names.format(iv.start_ms()).expect("template has fields");
        let req = PlotRequest {
            uri: uri.with_param("timerange", &iv.to_string()).to_string(),
            width: opts.width,
            height: opts.height,
            ..PlotRequest::new("")
        };
        match plot(engine, &req) {
            Ok(png) => {
                let path = opts.out_dir.join(&name);
                fs::write(&path, png).map_err(|e| io_error(&path, e))?;
                report.written.push((iv.start_ms(), name));
            }
            Err(e) => report.failures.push((iv.start_ms(), e.to_string())),
        }
    }
    let index: String = report.written.iter().map(|(t, name)| format!("{}\t{name}\n", format_iso(*t))).collect();
    let path = opts.out_dir.join(INDEX_FILE);
    fs::write(&path, index).map_err(|e| io_error(&path, e))?;
    Ok(report)
}

fn io_error(path: &Path, e: std::io::Error) -> ServiceError {
    ServiceError::internal(format!("{}: {e}", path.display()))
}
