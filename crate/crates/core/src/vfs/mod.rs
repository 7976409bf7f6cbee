//! Local and HTTP resource access with a persistent download cache.
//!
//! Remote files land under `<root>/<scheme>/<authority>/<path>`, each with a
//! `<name>.meta` sidecar of `key=value` lines (url, fetched, length, etag,
//! last_modified). Within one process an entry, once fetched, is served from
//! the cache without touching the network. Entries left by an earlier process
//! are revalidated with a conditional request once older than the freshness
//! horizon.

mod listing;

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Component, Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Duration;

use thiserror::Error;

use crate::calendar::{format_iso, parse_iso_instant};

pub use listing::parse_index;

/// Name of the cache directory under the home directory.
pub const CACHE_DIR_NAME: &str = "autoplot_data";
/// Environment variable overriding the cache root.
pub const CACHE_ENV: &str = "AUTOPLOT_DATA";
pub const DEFAULT_HORIZON: Duration = Duration::from_secs(3600);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VfsError {
    #[error("network failure fetching {url}: {message}")]
    Network { url: String, message: String, retryable: bool },
    #[error("HTTP {code} for {url}")]
    Status { url: String, code: u16 },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0} does not exist")]
    NotFound(String),
    #[error("{0}")]
    UnsupportedScheme(String),
    #[error("{0} is not a directory")]
    NotADirectory(String),
    #[error("{0} is a directory")]
    NotAFile(String),
    #[error("index page for {0} could not be parsed")]
    BadIndex(String),
    #[error("malformed resource locator `{0}`")]
    Malformed(String),
    #[error("home directory cannot be determined")]
    NoHome,
}

impl VfsError {
    fn io(path: &Path, e: io::Error) -> VfsError {
        VfsError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    /// True for failures worth retrying later (timeouts, refused connections, 5xx).
    pub fn is_retryable(&self) -> bool {
        match self {
            VfsError::Network { retryable, .. } => *retryable,
            VfsError::Status { code, .. } => *code >= 500,
            _ => false,
        }
    }

    /// True when the resource itself is missing rather than unreachable.
    pub fn is_not_found(&self) -> bool {
        matches!(self, VfsError::NotFound(_) | VfsError::Status { code: 404 | 410, .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    File,
    Http,
    Https,
}

impl Scheme {
    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::File => "file",
            Scheme::Http => "http",
            Scheme::Https => "https",
        }
    }
}

/// A normalized locator. `path` always starts with `/` and contains no `.`
/// or `..` segments; a trailing `/` marks a directory.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResourceRef {
    pub scheme: Scheme,
    pub authority: String,
    pub path: String,
}

fn normalize_path(path: &str) -> String {
    let is_dir = path.ends_with('/') || path.ends_with("/.") || path.ends_with("/..");
    let mut parts: Vec<&str> = Vec::new();
    for seg in path.split('/') {
        match seg {
            "" | "." => {}
            ".." => {
                parts.pop();
            }
            s => parts.push(s),
        }
    }
    let mut out = String::from("/");
    out.push_str(&parts.join("/"));
    if is_dir && !parts.is_empty() {
        out.push('/');
    }
    out
}

impl ResourceRef {
    /// Parses `file://`, `http://` and `https://` locators. A bare absolute
    /// path is taken as a local file.
    pub fn parse(text: &str) -> Result<ResourceRef, VfsError> {
        let (scheme, rest) = match text.split_once("://") {
            Some((s, rest)) => (s.to_ascii_lowercase(), rest),
            None if text.starts_with('/') => ("file".to_string(), text),
            None => match text.strip_prefix("file:") {
                Some(rest) if rest.starts_with('/') => ("file".to_string(), rest),
                _ => return Err(VfsError::Malformed(text.to_string())),
            },
        };
        let scheme = match scheme.as_str() {
            "file" => Scheme::File,
            "http" => Scheme::Http,
            "https" => Scheme::Https,
            "ftp" | "sftp" => {
                return Err(VfsError::UnsupportedScheme(format!(
                    "{scheme}:// is not supported; only file, http and https resources can be read"
                )))
            }
            other => return Err(VfsError::UnsupportedScheme(format!("unknown scheme `{other}`"))),
        };
        let (authority, path) = match scheme {
            Scheme::File if rest.starts_with('/') => (String::new(), rest.to_string()),
            _ => match rest.find('/') {
                Some(i) => (rest[..i].to_string(), rest[i..].to_string()),
                None => (rest.to_string(), "/".to_string()),
            },
        };
        if scheme != Scheme::File && authority.is_empty() {
            return Err(VfsError::Malformed(text.to_string()));
        }
        Ok(ResourceRef { scheme, authority: authority.to_ascii_lowercase(), path: normalize_path(&path) })
    }

    pub fn from_path(path: &Path) -> ResourceRef {
        let mut p = path.to_string_lossy().replace('\\', "/");
        if !p.starts_with('/') {
            p.insert(0, '/');
        }
        ResourceRef { scheme: Scheme::File, authority: String::new(), path: normalize_path(&p) }
    }

    pub fn is_directory(&self) -> bool {
        self.path.ends_with('/')
    }

    pub fn is_local(&self) -> bool {
        self.scheme == Scheme::File
    }

    /// Same resource marked as a directory.
    pub fn as_directory(&self) -> ResourceRef {
        let mut r = self.clone();
        if !r.path.ends_with('/') {
            r.path.push('/');
        }
        r
    }

    /// Child `name` of this directory; `name` may end in `/`.
    pub fn child(&self, name: &str) -> ResourceRef {
        let d = self.as_directory();
        ResourceRef { path: normalize_path(&format!("{}{name}", d.path)), ..d }
    }

    pub fn parent(&self) -> Option<ResourceRef> {
        let trimmed = self.path.trim_end_matches('/');
        if trimmed.is_empty() {
            return None;
        }
        let cut = trimmed.rfind('/')?;
        Some(ResourceRef { path: self.path[..=cut].to_string(), ..self.clone() })
    }

    /// Last path segment without any trailing `/`.
    pub fn name(&self) -> &str {
        self.path.trim_end_matches('/').rsplit('/').next().unwrap_or("")
    }

    pub fn local_path(&self) -> Option<PathBuf> {
        self.is_local().then(|| PathBuf::from(&self.path))
    }

    pub fn url(&self) -> String {
        format!("{}://{}{}", self.scheme.as_str(), self.authority, self.path)
    }
}

impl fmt::Display for ResourceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.url())
    }
}

/// Cache root from an override, a home directory and the working directory.
pub fn resolve_cache_root(
    override_dir: Option<&str>,
    home: Option<&Path>,
    cwd: &Path,
) -> Result<PathBuf, VfsError> {
    match override_dir.filter(|s| !s.is_empty()) {
        Some(dir) => {
            let p = PathBuf::from(dir);
            Ok(if p.is_absolute() { p } else { cwd.join(p) })
        }
        None => home.map(|h| h.join(CACHE_DIR_NAME)).ok_or(VfsError::NoHome),
    }
}

/// `$AUTOPLOT_DATA` if set (relative paths resolved against the working
/// directory), otherwise `$HOME/autoplot_data`.
pub fn cache_root() -> Result<PathBuf, VfsError> {
    let over = std::env::var(CACHE_ENV).ok();
    let home = std::env::var_os("HOME").map(PathBuf::from);
    let cwd = std::env::current_dir().map_err(|e| VfsError::io(Path::new("."), e))?;
    resolve_cache_root(over.as_deref(), home.as_deref(), &cwd)
}

/// Sidecar metadata kept next to each cached file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CacheMeta {
    pub url: String,
    pub fetched_ms: i64,
    pub length: u64,
    pub etag: Option<String>,
    pub last_modified: Option<String>,
}

impl CacheMeta {
    pub fn to_text(&self) -> String {
        let mut s = format!("url={}\nfetched={}\nlength={}\n", self.url, format_iso(self.fetched_ms), self.length);
        if let Some(e) = &self.etag {
            s.push_str(&format!("etag={e}\n"));
        }
        if let Some(m) = &self.last_modified {
            s.push_str(&format!("last_modified={m}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Option<CacheMeta> {
        let mut m = CacheMeta::default();
        let mut have_fetched = false;
        for line in text.lines() {
            let Some((k, v)) = line.split_once('=') else { continue };
            match k {
                "url" => m.url = v.to_string(),
                "fetched" => {
                    m.fetched_ms = parse_iso_instant(v).ok()?;
                    have_fetched = true;
                }
                "length" => m.length = v.parse().ok()?,
                "etag" => m.etag = Some(v.to_string()),
                "last_modified" => m.last_modified = Some(v.to_string()),
                _ => {}
            }
        }
        have_fetched.then_some(m)
    }
}

type Slot = Arc<OnceLock<Result<PathBuf, VfsError>>>;

/// The virtual filesystem. Cheap to share behind an `Arc`.
pub struct Vfs {
    root: PathBuf,
    horizon: Duration,
    agent: ureq::Agent,
    offline: bool,
    inflight: Mutex<HashMap<String, Slot>>,
    requests: AtomicUsize,
}

impl fmt::Debug for Vfs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Vfs").field("root", &self.root).field("offline", &self.offline).finish()
    }
}

fn now_ms() -> i64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_millis() as i64)
        .unwrap_or(0)
}

impl Vfs {
    pub fn new(root: impl Into<PathBuf>) -> Vfs {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(Duration::from_secs(60)))
            .build()
            .into();
        Vfs {
            root: root.into(),
            horizon: DEFAULT_HORIZON,
            agent,
            offline: false,
            inflight: Mutex::new(HashMap::new()),
            requests: AtomicUsize::new(0),
        }
    }

    /// A filesystem that refuses all network access.
    pub fn offline(root: impl Into<PathBuf>) -> Vfs {
        Vfs { offline: true, ..Vfs::new(root) }
    }

    pub fn with_horizon(mut self, horizon: Duration) -> Vfs {
        self.horizon = horizon;
        self
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Number of HTTP requests issued so far.
    pub fn request_count(&self) -> usize {
        self.requests.load(Ordering::SeqCst)
    }

    /// Where a remote reference is stored in the cache.
    pub fn cache_path(&self, r: &ResourceRef) -> PathBuf {
        let mut p = self.root.join(r.scheme.as_str()).join(r.authority.replace(':', "_"));
        for seg in r.path.split('/').filter(|s| !s.is_empty()) {
            p.push(seg);
        }
        p
    }

    fn meta_path(local: &Path) -> PathBuf {
        let mut name = local.file_name().unwrap_or_default().to_os_string();
        name.push(".meta");
        local.with_file_name(name)
    }

    /// A readable local copy of `r`. Local files are returned as-is; remote
    /// files are downloaded at most once per process, with concurrent
    /// callers for the same reference sharing one transfer.
    pub fn fetch(&self, r: &ResourceRef) -> Result<PathBuf, VfsError> {
        if r.is_directory() {
            return Err(VfsError::NotAFile(r.url()));
        }
        if let Some(p) = r.local_path() {
            return match fs::metadata(&p) {
                Ok(m) if m.is_dir() => Err(VfsError::NotAFile(r.url())),
                Ok(_) => Ok(p),
                Err(e) if e.kind() == io::ErrorKind::NotFound => Err(VfsError::NotFound(r.url())),
                Err(e) => Err(VfsError::io(&p, e)),
            };
        }
        let key = r.url();
        let slot = {
            let mut map = self.inflight.lock().unwrap_or_else(|e| e.into_inner());
            map.entry(key.clone()).or_default().clone()
        };
        let result = slot.get_or_init(|| self.download(r)).clone();
        if result.is_err() {
            let mut map = self.inflight.lock().unwrap_or_else(|e| e.into_inner());
            if map.get(&key).is_some_and(|s| Arc::ptr_eq(s, &slot)) {
                map.remove(&key);
            }
        }
        result
    }

    fn download(&self, r: &ResourceRef) -> Result<PathBuf, VfsError> {
        let local = self.cache_path(r);
        let meta_path = Self::meta_path(&local);
        let cached = if local.is_file() {
            fs::read_to_string(&meta_path).ok().and_then(|t| CacheMeta::parse(&t))
        } else {
            None
        };
        if let Some(meta) = &cached {
            let age = now_ms().saturating_sub(meta.fetched_ms);
            if age >= 0 && (age as u128) < self.horizon.as_millis() {
                return Ok(local);
            }
        }
        if self.offline {
            return match cached {
                Some(_) => Ok(local),
                None => Err(VfsError::Network {
                    url: r.url(),
                    message: "network access disabled".into(),
                    retryable: false,
                }),
            };
        }
        let url = r.url();
        let mut req = self.agent.get(&url);
        if let Some(meta) = &cached {
            if let Some(etag) = &meta.etag {
                req = req.header("If-None-Match", etag);
            }
            if let Some(lm) = &meta.last_modified {
                req = req.header("If-Modified-Since", lm);
            }
        }
        self.requests.fetch_add(1, Ordering::SeqCst);
        let mut resp = match req.call() {
            Ok(resp) => resp,
            // A stale copy beats no copy when the origin is unreachable.
            Err(_) if cached.is_some() => return Ok(local),
            Err(e) => return Err(network_error(&url, e)),
        };
        let code = resp.status().as_u16();
        if code == 304 {
            if let Some(mut meta) = cached {
                meta.fetched_ms = now_ms();
                write_atomic(&meta_path, meta.to_text().as_bytes())?;
                return Ok(local);
            }
        }
        if code >= 400 {
            return Err(VfsError::Status { url, code });
        }
        let header = |name: &str| resp.headers().get(name).and_then(|v| v.to_str().ok()).map(str::to_string);
        let etag = header("etag");
        let last_modified = header("last-modified");
        let parent = local.parent().ok_or_else(|| VfsError::Malformed(url.clone()))?;
        fs::create_dir_all(parent).map_err(|e| VfsError::io(parent, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(parent).map_err(|e| VfsError::io(parent, e))?;
        let length = io::copy(&mut resp.body_mut().as_reader(), tmp.as_file_mut())
            .map_err(|e| VfsError::Network { url: url.clone(), message: e.to_string(), retryable: true })?;
        tmp.as_file_mut().flush().map_err(|e| VfsError::io(&local, e))?;
        tmp.persist(&local).map_err(|e| VfsError::io(&local, e.error))?;
        let meta = CacheMeta { url, fetched_ms: now_ms(), length, etag, last_modified };
        write_atomic(&meta_path, meta.to_text().as_bytes())?;
        Ok(local)
    }

    /// Sorted child names of a directory, directories suffixed with `/`.
    /// HTTP listings are scraped from the server's index page.
    pub fn list(&self, r: &ResourceRef) -> Result<Vec<String>, VfsError> {
        let mut names = match r.local_path() {
            Some(p) => {
                let rd = match fs::read_dir(&p) {
                    Ok(rd) => rd,
                    Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(VfsError::NotFound(r.url())),
                    Err(_) if p.is_file() => return Err(VfsError::NotADirectory(r.url())),
                    Err(e) => return Err(VfsError::io(&p, e)),
                };
                let mut names = Vec::new();
                for entry in rd {
                    let entry = entry.map_err(|e| VfsError::io(&p, e))?;
                    let mut name = entry.file_name().to_string_lossy().into_owned();
                    if entry.path().is_dir() {
                        name.push('/');
                    }
                    names.push(name);
                }
                names
            }
            None => {
                if self.offline {
                    return Err(VfsError::Network {
                        url: r.url(),
                        message: "network access disabled".into(),
                        retryable: false,
                    });
                }
                let dir = r.as_directory();
                let url = dir.url();
                self.requests.fetch_add(1, Ordering::SeqCst);
                let mut resp = self.agent.get(&url).call().map_err(|e| network_error(&url, e))?;
                let code = resp.status().as_u16();
                if code >= 400 {
                    return Err(VfsError::Status { url, code });
                }
                let body = resp
                    .body_mut()
                    .with_config()
                    .lossy_utf8(true)
                    .read_to_string()
                    .map_err(|e| network_error(&url, e))?;
                parse_index(&body, &dir.path).ok_or(VfsError::BadIndex(url))?
            }
        };
        names.sort();
        names.dedup();
        Ok(names)
    }
}

fn network_error(url: &str, e: ureq::Error) -> VfsError {
    let retryable = matches!(
        e,
        ureq::Error::Io(_) | ureq::Error::Timeout(_) | ureq::Error::ConnectionFailed | ureq::Error::HostNotFound
    );
    VfsError::Network { url: url.to_string(), message: e.to_string(), retryable }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), VfsError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| VfsError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| VfsError::io(path, e))?;
    tmp.persist(path).map_err(|e| VfsError::io(path, e.error))?;
    Ok(())
}

/// True when `p` has no `..` component.
pub fn is_normalized(p: &str) -> bool {
    !Path::new(p).components().any(|c| matches!(c, Component::ParentDir | Component::CurDir))
}
