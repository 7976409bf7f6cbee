#![allow(dead_code)]

use std::io::{Read, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use qview_core::datasource::PluginRegistry;
use qview_core::engine::DataEngine;
use qview_core::samples;
use qview_core::vfs::Vfs;
use qview_service::{router, serve, ServiceConfig};

/// Fixture files for the service tests, in a temporary directory.
pub struct Fixtures {
    pub dir: tempfile::TempDir,
}

impl Fixtures {
    pub fn new() -> Fixtures {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path();
        samples::write_reference_qds(p).unwrap();
        std::fs::write(p.join("data.csv"), samples::data287_csv()).unwrap();
        std::fs::write(p.join("junk.csv"), samples::junk_header_csv()).unwrap();
        samples::write_daily_tree(&p.join("swe")).unwrap();
        Fixtures { dir }
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn url(&self, name: &str) -> String {
        format!("file://{}/{name}", self.path().display())
    }

    pub fn np(&self) -> String {
        self.url("np.qds")
    }

    pub fn daily(&self) -> String {
        format!("vap+dat:{}?column=Np", self.url("swe/$Y/ac_k0_swe_$Y$m$d_v...cdf"))
    }

    pub fn cache(&self) -> PathBuf {
        self.path().join("cache")
    }

    pub fn engine(&self) -> DataEngine {
        DataEngine::new(PluginRegistry::with_defaults(), Vfs::new(self.cache()))
    }
}

/// Starts the service on an ephemeral port and returns its base URL.
pub fn start(engine: DataEngine, config: ServiceConfig) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    listener.set_nonblocking(true).unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(async move {
            let l = tokio::net::TcpListener::from_std(listener).unwrap();
            serve(l, router(engine, config)).await.unwrap();
        });
    });
    format!("http://{addr}")
}

pub fn agent() -> ureq::Agent {
    ureq::Agent::config_builder().http_status_as_error(false).build().into()
}

pub struct Reply {
    pub status: u16,
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl Reply {
    pub fn text(&self) -> String {
        String::from_utf8(self.body.clone()).unwrap()
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.body).unwrap()
    }

    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers.iter().find(|(k, _)| k.eq_ignore_ascii_case(name)).map(|(_, v)| v.as_str())
    }
}

fn reply(mut r: ureq::http::Response<ureq::Body>) -> Reply {
    let status = r.status().as_u16();
    let headers = r.headers().iter().map(|(k, v)| (k.to_string(), v.to_str().unwrap_or("").to_string())).collect();
    let body = r.body_mut().with_config().limit(64 << 20).read_to_vec().unwrap();
    Reply { status, headers, body }
}

pub fn get(url: &str) -> Reply {
    reply(agent().get(url).call().unwrap())
}

pub fn get_query(base: &str, path: &str, query: &[(&str, &str)]) -> Reply {
    let mut req = agent().get(format!("{base}{path}"));
    for (k, v) in query {
        req = req.query(*k, *v);
    }
    reply(req.call().unwrap())
}

pub fn post(url: &str, body: &str) -> Reply {
    reply(agent().post(url).header("content-type", "application/json").send(body).unwrap())
}

pub fn new_session(base: &str) -> String {
    let r = post(&format!("{base}/session"), "");
    assert_eq!(r.status, 201);
    r.json()["id"].as_str().unwrap().to_string()
}

/// A one-route HTTP server that counts GET requests and answers each after
/// `delay` with `body`.
pub struct CountingServer {
    pub base: String,
    pub hits: Arc<AtomicUsize>,
}

impl CountingServer {
    pub fn start(body: String, delay: Duration) -> CountingServer {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let hits = Arc::new(AtomicUsize::new(0));
        let counter = hits.clone();
        let body = Arc::new(body);
        std::thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(mut stream) = stream else { continue };
                let counter = counter.clone();
                let body = body.clone();
                std::thread::spawn(move || {
                    let mut buf = Vec::new();
                    let mut chunk = [0u8; 1024];
                    while !buf.windows(4).any(|w| w == b"\r\n\r\n") {
                        match stream.read(&mut chunk) {
                            Ok(0) | Err(_) => return,
                            Ok(n) => buf.extend_from_slice(&chunk[..n]),
                        }
                    }
                    counter.fetch_add(1, Ordering::SeqCst);
                    std::thread::sleep(delay);
                    let head = format!(
                        "HTTP/1.1 200 OK\r\nContent-Type: text/csv\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
                        body.len()
                    );
                    let _ = stream.write_all(head.as_bytes());
                    let _ = stream.write_all(body.as_bytes());
                });
            }
        });
        CountingServer { base, hits }
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }
}
