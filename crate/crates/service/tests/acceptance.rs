//! One PASS/FAIL line per acceptance criterion; fails if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use clap::Parser;
use common::{get, get_query, new_session, post, start, CountingServer, Fixtures};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use qview_core::aggregation::expand;
use qview_core::calendar::parse_timerange;
use qview_core::datasource::{read_qds_str, write_csv, write_qds, SourceError};
use qview_core::dom::{load_vap, save_vap, DomEditor, DomOp, Endpoint, Placement, PropValue};
use qview_core::engine::EngineError;
use qview_core::qdataset::{Properties, PropertyKey as K, QDataSet, TimeUnits, Units};
use qview_core::render::axis::{autorange_values, AxisKind};
use qview_core::samples;
use qview_service::cli::{run, Cli};
use qview_service::{dom_document, ServiceConfig, REVISION_HEADER};

type Outcome = Result<String, String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn c1_reference_datasets() -> Outcome {
    let (np, e, b) = (samples::np(), samples::electron_def(), samples::bgsm());
    ensure([np.shape(), e.shape(), b.shape()] == [Some(vec![288]), Some(vec![6260, 29]), Some(vec![24, 3])], "shapes")?;
    ensure([np.rank(), e.rank(), b.rank()] == [1, 2, 2], "ranks")?;
    ensure([np.dimensionality(), e.dimensionality(), b.dimensionality()] == [2, 3, 4], "dimensionality")?;
    ensure(np.units().to_string() == "#/cc", "Np units")?;
    ensure(e.depend(1).map(|d| d.units().to_string()).as_deref() == Some("eV"), "Energy units")?;
    ensure(b.units().to_string() == "nT", "BGSM units")?;
    ensure(e.valid_max() == Some(1.24e10) && b.valid_min() == Some(-65534.0), "valid range")?;
    ensure(e.is_qube() && b.is_qube(), "QUBE")?;
    for ds in [&e, &b] {
        let s0 = ds.slice0(3).map_err(fail)?;
        ensure(s0.rank() == 1 && s0.context(0).is_some(), "slice0 contract")?;
    }
    let s1 = e.slice1(1).map_err(fail)?;
    ensure(s1.rank() == 1 && s1.context(0).is_some() && s1.depend(0) == e.depend(0), "slice1 contract")?;
    let bx = b.slice1(0).map_err(fail)?;
    ensure(bx.rank() == 1 && bx.label() == Some("Bx (GSM)"), "slice1 of the bundle")?;
    let p = np.slice0(0).map_err(fail)?;
    ensure(p.rank() == 0 && p.context(0).is_some(), "rank-1 slice0")?;
    Ok("ranks {1,2,2}, dimensionality {2,3,4}, slice contracts hold".into())
}

fn c2_aggregation(fx: &Fixtures) -> Outcome {
    let eng = fx.engine();
    let res = fx.url("swe/$Y/ac_k0_swe_$Y$m$d_v...cdf");
    let june = parse_timerange("2008-June").map_err(fail)?;
    let plan = expand(&res, &june, eng.vfs()).map_err(fail)?;
    ensure(plan.matches.len() == 30, format!("{} matches", plan.matches.len()))?;
    let ds = eng.read(&fx.daily().replace("?column", "?timerange=2008-June&column")).map_err(fail)?;
    let mut total = 0;
    for m in &plan.matches {
        let part = eng.read(&format!("vap+dat:{}?column=Np", m.0.url())).map_err(fail)?;
        total += part.len();
    }
    ensure(ds.len() == total, format!("merged {} vs parts {total}", ds.len()))?;
    let t = ds.depend(0).ok_or("no DEPEND_0")?.flat_values();
    ensure(t.windows(2).all(|w| w[0] < w[1]), "DEPEND_0 not strictly increasing")?;
    Ok(format!("30 matches, merged length {total}, DEPEND_0 increasing"))
}

fn c3_time_grammar() -> Outcome {
    let a = parse_timerange("2008-June").map_err(fail)?;
    let b = parse_timerange("June 2008").map_err(fail)?;
    let c = parse_timerange("2008-06-01 to 2008-07-01").map_err(fail)?;
    ensure(a == b && b == c, format!("{a} / {b} / {c}"))?;
    Ok(format!("all three forms give {a}"))
}

fn c4_ascii(fx: &Fixtures) -> Outcome {
    let eng = fx.engine();
    std::fs::write(fx.path().join("ragged.csv"), samples::ragged_csv()).map_err(fail)?;
    let d = eng.read(&format!("{}?delim=comma&skip=5&column=density", fx.url("junk.csv"))).map_err(fail)?;
    ensure(d.flat_values() == (0..10).map(|i| i as f64 + 0.5).collect::<Vec<_>>(), "density column values")?;
    match eng.read(&format!("{}?column=b", fx.url("ragged.csv"))) {
        Err(EngineError::Source(SourceError::Ragged { line, .. })) if line == samples::RAGGED_LINE => {
            Ok(format!("density column read past 5 junk lines; ragged row reported at line {line}"))
        }
        other => Err(format!("expected ragged error at line {}, got {other:?}", samples::RAGGED_LINE)),
    }
}

fn c5_rows(fx: &Fixtures, base: &str) -> Outcome {
    let uri = format!("{}?column=data", fx.url("data.csv"));
    let ds = fx.engine().read(&uri).map_err(fail)?;
    ensure(ds.len() == 287, format!("length {}", ds.len()))?;
    let r = get_query(base, "/data", &[("uri", &uri), ("format", "csv")]);
    ensure(r.status == 200, format!("/data status {}", r.status))?;
    let rows = r.text().lines().count() - 1;
    ensure(rows == 287, format!("{rows} exported rows"))?;
    ensure(write_csv(&ds).map_err(fail)?.lines().count() == 288, "library export")?;
    Ok("dataset length 287, /data csv has 287 data rows".into())
}

/// Milliseconds from 1970 to midnight starting `y-01-01`, by counting days.
fn oracle_year_start_ms(y: i64) -> i64 {
    let leap = |y: i64| (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    (1970..y).map(|y| if leap(y) { 366 } else { 365 }).sum::<i64>() * 86_400 * 1000
}

fn c6_units() -> Outcome {
    let days = Units::parse("days since 2000-01-01T00:00").map_err(fail)?;
    let ms = Units::Time(TimeUnits::UNIX_MS);
    let base = oracle_year_start_ms(2000);
    ensure(base == 946_684_800_000, "oracle")?;
    let a = days.convert(0.0, &ms).map_err(fail)?;
    let b = days.convert(1.0, &ms).map_err(fail)?;
    ensure(a == base as f64 && b == (base + 86_400_000) as f64, format!("got {a}, {b}"))?;
    Ok(format!("0 and 1 days since 2000 are {a} and {b} ms"))
}

fn c7_interchange() -> Outcome {
    for (name, ds) in samples::reference_datasets() {
        let back = read_qds_str(&write_qds(&ds)).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == ds, format!("{name} differs after round trip"))?;
    }
    Ok("np, electron_def and bgsm round trip bit-exactly".into())
}

#[derive(Debug, Clone)]
enum Mutation {
    Title(usize, String),
    YRange(usize, f64),
    Width(i64),
    Bind(usize, usize),
    Add(Placement),
}

fn mutation() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        (0usize..3, "[a-z]{1,6}").prop_map(|(i, s)| Mutation::Title(i, s)),
        (0usize..3, -50.0f64..50.0).prop_map(|(i, v)| Mutation::YRange(i, v)),
        (64i64..2000).prop_map(Mutation::Width),
        (0usize..3, 0usize..3).prop_map(|(a, b)| Mutation::Bind(a, b)),
        prop::sample::select(vec![Placement::Below, Placement::Overplot]).prop_map(Mutation::Add),
    ]
}

fn y_range(i: usize) -> Endpoint {
    Endpoint::new(format!("yaxis_{i}"), "range")
}

fn y_value(lo: f64) -> PropValue {
    PropValue::Range(qview_core::qdataset::DatumRange::new(lo, lo + 2.0, Units::ratio("#/cc")).unwrap())
}

fn three_plots(fx: &Fixtures) -> Result<DomEditor, String> {
    let mut ed = DomEditor::new(Arc::new(fx.engine()));
    for p in [Placement::Replace, Placement::Below, Placement::Below] {
        ed.add_plot_element(&fx.np(), p).map_err(fail)?;
    }
    Ok(DomEditor::with_dom(ed.dom().clone(), Arc::new(fx.engine())))
}

fn c8_dom(fx: &Fixtures) -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 16, failure_persistence: None, ..Config::default() });
    runner
        .run(&prop::collection::vec(mutation(), 10), |ms| {
            let mut ed = three_plots(fx).expect("setup");
            let initial = ed.dom().clone();
            for m in &ms {
                let _ = match m {
                    Mutation::Title(i, s) => ed.set_property(&Endpoint::new(format!("plot_{i}"), "title"), PropValue::Text(s.clone())).map(drop),
                    Mutation::YRange(i, v) => ed.set_property(&y_range(*i), y_value(*v)).map(drop),
                    Mutation::Width(w) => ed.set_property(&Endpoint::new("canvas_0", "width"), PropValue::Int(*w)).map(drop),
                    Mutation::Bind(a, b) => ed.bind(&y_range(*a), &y_range(*b)).map(drop),
                    Mutation::Add(p) => ed.add_plot_element(&fx.np(), *p).map(drop),
                };
            }
            for _ in 0..10 {
                ed.undo();
            }
            prop_assert_eq!(ed.dom(), &initial);
            Ok(())
        })
        .map_err(|e| format!("(a) {e}"))?;

    let mut ed = three_plots(fx)?;
    ed.bind(&y_range(0), &y_range(1)).map_err(fail)?;
    ed.bind(&y_range(1), &y_range(2)).map_err(fail)?;
    let n = ed.set_property(&y_range(2), y_value(1.0)).map_err(fail)?;
    let vals: Vec<_> = (0..3).map(|i| ed.dom().get(&y_range(i)).ok().flatten()).collect();
    ensure(vals.iter().all(|v| *v == vals[0]) && vals[0] == Some(y_value(1.0)), "(b) component not equal")?;
    ensure(n <= 3, format!("(b) {n} assignments"))?;

    let first = save_vap(ed.dom());
    let second = save_vap(&load_vap(&first).map_err(fail)?.dom);
    ensure(first == second, "(c) second save differs")?;
    Ok(format!("(a) 16 cases of 10 mutations + 10 undos restore; (b) {n} assignments; (c) second save identical"))
}

fn c9_rendering(fx: &Fixtures, base: &str) -> Outcome {
    let png = get_query(base, "/plot", &[("uri", &fx.np())]);
    ensure(png.body.starts_with(&[0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a]), "png signature")?;
    let svg = get_query(base, "/plot", &[("uri", &fx.np()), ("format", "svg")]);
    ensure(svg.text().contains("SW H Num Density"), "svg label")?;
    let r = autorange_values([3.0, 4.0, 7.0], AxisKind::Linear).map_err(fail)?;
    ensure(r == (2.8, 7.2), format!("autorange {r:?}"))?;
    let filled = QDataSet::rank1(vec![3.0, 4.0, 7.0, -1e31, f64::NAN, -1e31], Properties::new().with(K::FillValue, -1e31)).map_err(fail)?;
    let rf = autorange_values(filled.valid_values(), AxisKind::Linear).map_err(fail)?;
    ensure(rf == r, format!("with fill {rf:?}"))?;
    Ok("png signature, svg label, autorange [2.8, 7.2] unchanged by fill".into())
}

fn walk_snapshot(dir: &std::path::Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .into_iter()
        .flatten()
        .flatten()
        .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap_or_default()))
        .collect()
}

fn c10_pngwalk(fx: &Fixtures) -> Outcome {
    let out = fx.path().join("walk");
    let uri = fx.daily();
    let args = ["qview", "pngwalk", "--uri", &uri, "--timerange", "2008-June", "--cadence", "day", "-o", out.to_str().unwrap()];
    let mut sink = (Vec::new(), Vec::new());
    let code = run(Cli::parse_from(args), Some(fx.engine()), &mut sink.0, &mut sink.1);
    ensure(code == 0, String::from_utf8_lossy(&sink.1).into_owned())?;
    let first = walk_snapshot(&out);
    let images = first.keys().filter(|k| k.ends_with(".png")).count();
    let index = String::from_utf8_lossy(&first["index.txt"]).into_owned();
    let lines: Vec<_> = index.lines().collect();
    ensure(images == 30 && lines.len() == 30, format!("{images} images, {} index lines", lines.len()))?;
    ensure(lines.windows(2).all(|w| w[0] < w[1]), "index not ordered")?;
    let code = run(Cli::parse_from(args), Some(fx.engine()), &mut sink.0, &mut sink.1);
    ensure(code == 0 && walk_snapshot(&out) == first, "rerun differs")?;
    Ok("30 images, 30 ordered index lines, rerun byte-identical".into())
}

fn c11_concurrency(fx: &Fixtures) -> Outcome {
    let stub = CountingServer::start(write_csv(&samples::np()).map_err(fail)?, Duration::from_millis(300));
    let base = start(fx.engine(), ServiceConfig::default());
    let uri = format!("vap+csv:{}/np.csv?column=Np", stub.base);
    let threads: Vec<_> = (0..8)
        .map(|_| {
            let (base, uri) = (base.clone(), uri.clone());
            std::thread::spawn(move || get_query(&base, "/plot", &[("uri", &uri)]).status)
        })
        .collect();
    let statuses: Vec<u16> = threads.into_iter().map(|t| t.join().unwrap_or(0)).collect();
    ensure(statuses.iter().all(|s| *s == 200), format!("statuses {statuses:?}"))?;
    ensure(stub.hits() == 1, format!("{} upstream downloads", stub.hits()))?;

    let id = new_session(&base);
    let setup = format!(r#"{{"op":"add_plot_element","uri":"{}"}}"#, fx.np());
    ensure(post(&format!("{base}/session/{id}/op"), &setup).status == 200, "setup op")?;
    let applied: Arc<Mutex<BTreeMap<u64, String>>> = Arc::default();
    let seen: Arc<Mutex<Vec<(u64, String)>>> = Arc::default();
    let mut workers = Vec::new();
    for w in 0..5 {
        let (base, id, applied) = (base.clone(), id.clone(), applied.clone());
        workers.push(std::thread::spawn(move || {
            for i in 0..10 {
                let op = if i % 4 == 3 {
                    r#"{"op":"undo"}"#.to_string()
                } else {
                    format!(r#"{{"op":"set_property","node":"plot_0","property":"title","value":"w{w} op{i}"}}"#)
                };
                let r = post(&format!("{base}/session/{id}/op"), &op);
                if let Some(rev) = r.json()["revision"].as_u64() {
                    applied.lock().unwrap().insert(rev, op);
                }
            }
        }));
    }
    {
        let (base, id, seen) = (base.clone(), id.clone(), seen.clone());
        workers.push(std::thread::spawn(move || {
            for _ in 0..25 {
                let r = get(&format!("{base}/session/{id}/dom"));
                let rev = r.header(REVISION_HEADER).and_then(|v| v.parse().ok()).unwrap_or(0);
                seen.lock().unwrap().push((rev, r.text()));
            }
        }));
    }
    for w in workers {
        w.join().map_err(|_| "worker panicked")?;
    }
    let applied = applied.lock().unwrap();
    ensure(applied.keys().copied().eq(2..=51), format!("{} distinct revisions", applied.len()))?;
    let mut ed = DomEditor::new(Arc::new(fx.engine()));
    ed.apply(serde_json::from_str::<DomOp>(&setup).map_err(fail)?).map_err(fail)?;
    let mut docs = BTreeMap::from([(1u64, dom_document(ed.dom()))]);
    for (rev, op) in applied.iter() {
        ed.apply(serde_json::from_str::<DomOp>(op).map_err(fail)?).map_err(fail)?;
        docs.insert(*rev, dom_document(ed.dom()));
    }
    let seen = seen.lock().unwrap();
    ensure(seen.iter().all(|(rev, doc)| docs.get(rev) == Some(doc)), "a /dom snapshot matches no sequential prefix")?;
    Ok(format!("1 upstream download for 8 plots; 50 ops and {} /dom reads linearizable", seen.len()))
}

fn main() {
    let fx = Fixtures::new();
    let base = start(fx.engine(), ServiceConfig::default());
    let results: Vec<(usize, Outcome)> = vec![
        (1, c1_reference_datasets()),
        (2, c2_aggregation(&fx)),
        (3, c3_time_grammar()),
        (4, c4_ascii(&fx)),
        (5, c5_rows(&fx, &base)),
        (6, c6_units()),
        (7, c7_interchange()),
        (8, c8_dom(&fx)),
        (9, c9_rendering(&fx, &base)),
        (10, c10_pngwalk(&fx)),
        (11, c11_concurrency(&fx)),
    ];
    let mut failed = Vec::new();
    for (n, r) in &results {
        match r {
            Ok(msg) => println!("PASS {n}: {msg}"),
            Err(msg) => {
                println!("FAIL {n}: {msg}");
                failed.push(*n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
