//! DOM sessions: one editor per session, serialized behind an async lock.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use qview_core::dom::{save_vap_with, Dom, DomEditor, PixelBox, VapOptions};
use qview_core::engine::DataEngine;
use qview_core::render::plot_boxes;

use crate::error::{ServiceError, Status};

pub const DEFAULT_IDLE: Duration = Duration::from_secs(30 * 60);

/// Editor state guarded by the session lock. `revision` counts applied ops.
pub struct SessionState {
    pub editor: DomEditor,
    pub revision: u64,
}

pub type SessionHandle = Arc<tokio::sync::Mutex<SessionState>>;

struct Entry {
    state: SessionHandle,
    last_access: Mutex<Instant>,
}

pub struct Sessions {
    engine: DataEngine,
    idle: Duration,
    live: Mutex<HashMap<String, Arc<Entry>>>,
    expired: Mutex<HashSet<String>>,
}

fn lock<T>(m: &Mutex<T>) -> std::sync::MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

impl Sessions {
    pub fn new(engine: DataEngine, idle: Duration) -> Sessions {
        Sessions { engine, idle, live: Mutex::new(HashMap::new()), expired: Mutex::new(HashSet::new()) }
    }

    /// Starts a session with an empty DOM and returns its id.
    pub fn create(&self) -> String {
        self.sweep();
        let id = uuid::Uuid::new_v4().simple().to_string();
        let editor = DomEditor::new(Arc::new(self.engine.clone()));
        let entry = Entry {
            state: Arc::new(tokio::sync::Mutex::new(SessionState { editor, revision: 0 })),
            last_access: Mutex::new(Instant::now()),
        };
        lock(&self.live).insert(id.clone(), Arc::new(entry));
        id
    }

    /// The session `id`, marking it as used. Unknown ids are 404; ids idle
    /// for longer than the timeout are 410.
    pub fn get(&self, id: &str) -> Result<SessionHandle, ServiceError> {
        let entry = lock(&self.live).get(id).cloned();
        let Some(entry) = entry else {
            return Err(if lock(&self.expired).contains(id) {
                ServiceError::new(Status::Gone, format!("session {id} has expired"))
            } else {
                ServiceError::new(Status::NotFound, format!("no session {id}"))
            });
        };
        let mut last = lock(&entry.last_access);
        if last.elapsed() > self.idle {
            drop(last);
            self.expire(id);
            return Err(ServiceError::new(Status::Gone, format!("session {id} has expired")));
        }
        *last = Instant::now();
        Ok(entry.state.clone())
    }

    pub fn len(&self) -> usize {
        lock(&self.live).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn expire(&self, id: &str) {
        lock(&self.live).remove(id);
        lock(&self.expired).insert(id.to_string());
    }

    fn sweep(&self) {
        let stale: Vec<String> = lock(&self.live)
            .iter()
            .filter(|(_, e)| lock(&e.last_access).elapsed() > self.idle)
            .map(|(id, _)| id.clone())
            .collect();
        for id in stale {
            self.expire(&id);
        }
    }
}

/// The DOM as `.vap` XML, with each plot's data-area pixel box.
pub fn dom_document(dom: &Dom) -> String {
    let boxes = plot_boxes(dom)
        .into_iter()
        .map(|(id, r)| {
            let b = PixelBox { x: r.x.round() as i64, y: r.y.round() as i64, width: r.w.round() as i64, height: r.h.round() as i64 };
            (id, b)
        })
        .collect();
    save_vap_with(dom, &VapOptions { data: None, pixel_boxes: Some(&boxes) })
}
