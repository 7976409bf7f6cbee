//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use qview_core::calendar::{parse_timerange, Cadence};
use qview_core::datasource::PluginRegistry;
use qview_core::dom::{load_vap, DomEditor};
use qview_core::engine::DataEngine;
use qview_core::render::ImageFormat;
use qview_core::vfs::{cache_root, Vfs};

use crate::error::ServiceError;
use crate::pngwalk::{pngwalk, WalkOptions, INDEX_FILE};
use crate::requests::{self, image_format, parse_size, DataFormat, PlotRequest, DEFAULT_HEIGHT, DEFAULT_WIDTH};
use crate::server::{router, serve, ServiceConfig};

#[derive(Debug, Parser)]
#[command(name = "qview", version, about = "Plot, export and browse scientific datasets addressed by URI")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a URI as an image.
    Plot {
        uri: String,
        /// Output file; the image goes to stdout when omitted.
        #[arg(short = 'o')]
        out: Option<PathBuf>,
        /// png or svg; defaults to the output extension, else png.
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        timerange: Option<String>,
        /// Image size as WxH.
        #[arg(long, value_parser = parse_size)]
        size: Option<(u32, u32)>,
        /// Plot title.
        #[arg(long)]
        label: Option<String>,
    },
    /// Export the dataset named by a URI; `about:plugins` lists the plug-ins.
    Data {
        uri: String,
        /// csv or qds.
        #[arg(long)]
        format: String,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Print completions for a partial URI, one per line.
    Complete { partial: String },
    /// Render a saved .vap file.
    Vap {
        file: PathBuf,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Cache directory for downloads.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Render one image per interval of a time range.
    Pngwalk {
        #[arg(long)]
        uri: String,
        #[arg(long)]
        timerange: String,
        /// hour, day, month or year.
        #[arg(long, default_value = "day")]
        cadence: String,
        #[arg(short = 'o')]
        out: PathBuf,
    },
}

/// Process-wide engine rooted at `cache` or the default cache directory.
pub fn default_engine(cache: Option<&Path>) -> Result<DataEngine, ServiceError> {
    let root = match cache {
        Some(p) => p.to_path_buf(),
        None => cache_root().map_err(|e| ServiceError::internal(e.to_string()))?,
    };
    Ok(DataEngine::new(PluginRegistry::with_defaults(), Vfs::new(root)))
}

fn format_for(explicit: Option<&str>, out: Option<&Path>) -> Result<ImageFormat, ServiceError> {
    match (explicit, out.and_then(|p| p.extension()).and_then(|e| e.to_str())) {
        (Some(f), _) => image_format(f),
        (None, Some(ext)) => Ok(ImageFormat::parse(ext).unwrap_or(ImageFormat::Png)),
        (None, None) => Ok(ImageFormat::Png),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), ServiceError> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| ServiceError::internal(format!("{}: {e}", p.display()))),
        None => stdout.write_all(bytes).map_err(|e| ServiceError::internal(e.to_string())),
    }
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli, engine: Option<DataEngine>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cache = match &cli.command {
        Command::Serve { cache, .. } => cache.clone(),
        _ => None,
    };
    let engine = match engine.map_or_else(|| default_engine(cache.as_deref()), Ok) {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    match execute(cli.command, &engine, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            for d in &e.diagnostics {
                let _ = writeln!(stderr, "  {d}");
            }
            1
        }
    }
}

fn execute(cmd: Command, engine: &DataEngine, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, ServiceError> {
    match cmd {
        Command::Plot { uri, out, format, timerange, size, label } => {
            let (width, height) = size.unwrap_or((DEFAULT_WIDTH, DEFAULT_HEIGHT));
            let req = PlotRequest { uri, width, height, format: format_for(format.as_deref(), out.as_deref())?, timerange, label };
            emit(out.as_deref(), &requests::plot(engine, &req)?, stdout)?;
        }
        Command::Data { uri, format, out } => {
            if let Some(listing) = requests::about(engine, &uri) {
                emit(out.as_deref(), listing.as_bytes(), stdout)?;
                return Ok(0);
            }
            let text = requests::export(engine, &uri, None, DataFormat::parse(&format)?)?;
            emit(out.as_deref(), text.as_bytes(), stdout)?;
        }
        Command::Complete { partial } => {
            for s in requests::complete(engine, &partial) {
                let _ = writeln!(stdout, "{}", s.completion);
            }
        }
        Command::Vap { file, out } => {
            let text = std::fs::read_to_string(&file).map_err(|e| ServiceError::internal(format!("{}: {e}", file.display())))?;
            let loaded = load_vap(&text)?;
            let mut ed = DomEditor::with_dom(loaded.dom, Arc::new(engine.clone()));
            for (uri, ds) in loaded.data {
                ed.preload(uri, ds);
            }
            let bytes = ed.render(format_for(None, Some(&out))?)?;
            emit(Some(&out), &bytes, stdout)?;
        }
        Command::Serve { port, .. } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| ServiceError::internal(e.to_string()))?;
            let app = router(engine.clone(), ServiceConfig::default());
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
                let _ = writeln!(stderr, "listening on http://{}", listener.local_addr()?);
                serve(listener, app).await
            })
            .map_err(|e| ServiceError::internal(e.to_string()))?;
        }
        Command::Pngwalk { uri, timerange, cadence, out } => {
            let timerange = parse_timerange(&timerange).map_err(|e| ServiceError::bad_param("timerange", e.to_string()))?;
            let cadence = Cadence::parse(&cadence).ok_or_else(|| ServiceError::bad_param("cadence", format!("expected hour, day, month or year, got {cadence:?}")))?;
            let opts = WalkOptions { uri, timerange, cadence, out_dir: out.clone(), width: DEFAULT_WIDTH, height: DEFAULT_HEIGHT };
            let report = pngwalk(engine, &opts)?;
            for (t, why) in &report.failures {
                let _ = writeln!(stderr, "{}: {why}", qview_core::calendar::format_iso(*t));
            }
            let _ = writeln!(stderr, "{} images, index in {}", report.written.len(), out.join(INDEX_FILE).display());
            return Ok(if report.is_success() { 0 } else { 1 });
        }
    }
    Ok(0)
}
