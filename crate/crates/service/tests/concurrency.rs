mod common;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use common::{get, get_query, new_session, post, start, CountingServer, Fixtures};
use qview_core::dom::{DomEditor, DomOp};
use qview_core::samples;
use qview_service::{dom_document, ServiceConfig, REVISION_HEADER};

fn np_csv() -> String {
    let ds = samples::np();
    qview_core::datasource::write_csv(&ds).unwrap()
}

#[test]
fn concurrent_plots_share_one_download() {
    let stub = CountingServer::start(np_csv(), Duration::from_millis(400));
    let fx = Fixtures::new();
    let base = start(fx.engine(), ServiceConfig::default());
    let uri = format!("vap+csv:{}/np.csv?column=Np", stub.base);
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let (base, uri) = (base.clone(), uri.clone());
            std::thread::spawn(move || get_query(&base, "/plot", &[("uri", &uri)]))
        })
        .collect();
    let replies: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    for r in &replies {
        assert_eq!(r.status, 200, "{}", String::from_utf8_lossy(&r.body));
    }
    assert!(replies.windows(2).all(|w| w[0].body == w[1].body));
    assert_eq!(stub.hits(), 1);
}

fn op_for(worker: usize, i: usize) -> String {
    match i % 5 {
        4 => r#"{"op":"undo"}"#.to_string(),
        3 => r#"{"op":"redo"}"#.to_string(),
        k => {
            let (node, prop) = [("plot_0", "title"), ("yaxis_0", "label"), ("xaxis_0", "label")][k];
            format!(r#"{{"op":"set_property","node":"{node}","property":"{prop}","value":"w{worker} op{i}"}}"#)
        }
    }
}

#[test]
fn interleaved_session_ops_are_linearizable() {
    let fx = Fixtures::new();
    let base = start(fx.engine(), ServiceConfig::default());
    let id = new_session(&base);
    let setup = format!(r#"{{"op":"add_plot_element","uri":"{}"}}"#, fx.np());
    assert_eq!(post(&format!("{base}/session/{id}/op"), &setup).status, 200);

    let applied: Arc<Mutex<BTreeMap<u64, String>>> = Arc::default();
    let seen: Arc<Mutex<Vec<(u64, String)>>> = Arc::default();
    let mut threads = Vec::new();
    for w in 0..5 {
        let (base, id, applied) = (base.clone(), id.clone(), applied.clone());
        threads.push(std::thread::spawn(move || {
            for i in 0..10 {
                let op = op_for(w, i);
                let r = post(&format!("{base}/session/{id}/op"), &op);
                assert_eq!(r.status, 200, "{}", r.text());
                let rev = r.json()["revision"].as_u64().unwrap();
                assert!(applied.lock().unwrap().insert(rev, op).is_none(), "revision {rev} reused");
            }
        }));
    }
    for _ in 0..2 {
        let (base, id, seen) = (base.clone(), id.clone(), seen.clone());
        threads.push(std::thread::spawn(move || {
            for _ in 0..20 {
                let r = get(&format!("{base}/session/{id}/dom"));
                let rev = r.header(REVISION_HEADER).unwrap().parse().unwrap();
                seen.lock().unwrap().push((rev, r.text()));
            }
        }));
    }
    for t in threads {
        t.join().unwrap();
    }

    let applied = applied.lock().unwrap();
    assert_eq!(applied.keys().copied().collect::<Vec<_>>(), (2..=51).collect::<Vec<_>>());

    let mut editor = DomEditor::new(Arc::new(fx.engine()));
    editor.apply(serde_json::from_str::<DomOp>(&setup).unwrap()).unwrap();
    let mut docs = BTreeMap::from([(1u64, dom_document(editor.dom()))]);
    for (rev, op) in applied.iter() {
        editor.apply(serde_json::from_str::<DomOp>(op).unwrap()).unwrap();
        docs.insert(*rev, dom_document(editor.dom()));
    }
    for (rev, doc) in seen.lock().unwrap().iter() {
        assert_eq!(docs.get(rev), Some(doc), "snapshot at revision {rev} differs from sequential replay");
    }
    assert_eq!(get(&format!("{base}/session/{id}/dom")).text(), docs[&51]);
}
