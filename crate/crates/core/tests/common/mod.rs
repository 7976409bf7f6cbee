//! Independent reference implementations the engine is checked against.

#![allow(dead_code)]

use std::collections::BTreeSet;

use qview_core::dom::{Axis, Column, Dom, Endpoint, Plot, PropValue, Row};
use regex::Regex;

/// Days since 1970-01-01 of a proleptic Gregorian date, by counting whole
/// years and months from the epoch.
pub fn days_from_civil(y: i64, m: u32, d: u32) -> i64 {
    let leap = |y: i64| (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    let mut days = 0i64;
    if y >= 1970 {
        for yy in 1970..y {
            days += if leap(yy) { 366 } else { 365 };
        }
    } else {
        for yy in y..1970 {
            days -= if leap(yy) { 366 } else { 365 };
        }
    }
    for mm in 1..m {
        days += days_in_month(y, mm) as i64;
    }
    days + d as i64 - 1
}

pub fn days_in_month(y: i64, m: u32) -> u32 {
    let leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    match m {
        2 if leap => 29,
        2 => 28,
        4 | 6 | 9 | 11 => 30,
        _ => 31,
    }
}

/// Milliseconds since 1970 of a civil date and time.
pub fn civil_ms(y: i64, m: u32, d: u32, h: u32, mi: u32, s: u32, ms: u32) -> i64 {
    ((days_from_civil(y, m, d) * 24 + h as i64) * 60 + mi as i64) * 60_000 + s as i64 * 1000 + ms as i64
}

/// Template pieces for the regex oracle.
#[derive(Debug, Clone, PartialEq)]
pub enum Piece {
    Lit(String),
    Year,
    Month,
    Day,
    Hour,
    Wild,
}

impl Piece {
    pub fn template(pieces: &[Piece]) -> String {
        pieces
            .iter()
            .map(|p| match p {
                Piece::Lit(s) => s.clone(),
                Piece::Year => "$Y".into(),
                Piece::Month => "$m".into(),
                Piece::Day => "$d".into(),
                Piece::Hour => "$H".into(),
                Piece::Wild => "...".into(),
            })
            .collect()
    }

    /// The template as an anchored regex with named calendar groups.
    pub fn regex(pieces: &[Piece]) -> Regex {
        let mut re = String::from("^");
        for p in pieces {
            re.push_str(&match p {
                Piece::Lit(s) => regex::escape(s),
                Piece::Year => "(?P<Y>[0-9]{4})".into(),
                Piece::Month => "(?P<m>0[1-9]|1[0-2])".into(),
                Piece::Day => "(?P<d>0[1-9]|[12][0-9]|3[01])".into(),
                Piece::Hour => "(?P<H>[01][0-9]|2[0-3])".into(),
                Piece::Wild => "[^/]*?".into(),
            });
        }
        re.push('$');
        Regex::new(&re).expect("oracle regex")
    }
}

/// Interval `[start, end)` named by `name` under `pieces`, using the regex
/// oracle and the civil-date oracle.
pub fn regex_match(pieces: &[Piece], name: &str) -> Option<(i64, i64)> {
    let caps = Piece::regex(pieces).captures(name)?;
    let num = |g: &str| caps.name(g).map(|m| m.as_str().parse::<i64>().unwrap());
    let y = num("Y")?;
    let Some(m) = num("m") else {
        if num("d").is_some() || num("H").is_some() {
            return None;
        }
        return Some((civil_ms(y, 1, 1, 0, 0, 0, 0), civil_ms(y + 1, 1, 1, 0, 0, 0, 0)));
    };
    let m = m as u32;
    let Some(d) = num("d") else {
        if num("H").is_some() {
            return None;
        }
        let (ny, nm) = if m == 12 { (y + 1, 1) } else { (y, m + 1) };
        return Some((civil_ms(y, m, 1, 0, 0, 0, 0), civil_ms(ny, nm, 1, 0, 0, 0, 0)));
    };
    let d = d as u32;
    if d > days_in_month(y, m) {
        return None;
    }
    let start = civil_ms(y, m, d, 0, 0, 0, 0);
    Some(match num("H") {
        Some(h) => (start + h * 3_600_000, start + (h + 1) * 3_600_000),
        None => (start, start + 86_400_000),
    })
}

/// The 1-2-5 step and tick values found by trying every candidate step
/// from small to large and keeping the first with at most `max` ticks.
pub fn brute_force_ticks(a: f64, b: f64, max: usize) -> (f64, Vec<f64>) {
    for k in -15..=15 {
        for m in [1.0, 2.0, 5.0] {
            let step = m * 10f64.powi(k);
            if (b - a) / step > 4.0 * max as f64 {
                continue;
            }
            let tol = 1e-9 * step;
            let lo = (a / step).floor() as i64 - 1;
            let hi = (b / step).ceil() as i64 + 1;
            let vals: Vec<f64> =
                (lo..=hi).map(|n| n as f64 * step).filter(|v| *v >= a - tol && *v <= b + tol).collect();
            if vals.len() <= max {
                return (step, vals);
            }
        }
    }
    panic!("no step for [{a}, {b}]");
}

/// Endpoints reached from `start` by repeatedly sweeping every binding until
/// nothing new is added.
pub fn fixpoint_closure(dom: &Dom, start: &Endpoint) -> BTreeSet<Endpoint> {
    let mut reached = BTreeSet::from([start.clone()]);
    loop {
        let before = reached.len();
        for b in &dom.bindings {
            if reached.contains(&b.a) || reached.contains(&b.b) {
                reached.insert(b.a.clone());
                reached.insert(b.b.clone());
            }
        }
        if reached.len() == before {
            return reached;
        }
    }
}

/// A canvas of `n` stacked plots; plot `i` has axes `xaxis_i`, `yaxis_i`,
/// `zaxis_i`, and x range `[i, i + 1]` in plain numbers.
pub fn stacked_dom(n: usize) -> Dom {
    let mut d = Dom::new();
    d.canvas.columns.push(Column { id: "column_0".into(), weight: 1.0 });
    for i in 0..n {
        d.canvas.rows.push(Row { id: format!("row_{i}"), weight: 1.0 });
        let mut x = Axis::new(format!("xaxis_{i}"));
        x.range = Some(range(i as f64, i as f64 + 1.0));
        d.plots.push(Plot {
            id: format!("plot_{i}"),
            title: String::new(),
            row: format!("row_{i}"),
            column: "column_0".into(),
            xaxis: x,
            yaxis: Axis::new(format!("yaxis_{i}")),
            zaxis: Axis::new(format!("zaxis_{i}")),
        });
    }
    d
}

pub fn range(a: f64, b: f64) -> qview_core::qdataset::DatumRange {
    qview_core::qdataset::DatumRange::new(a, b, qview_core::qdataset::Units::dimensionless()).unwrap()
}

pub fn x_range(i: usize) -> Endpoint {
    Endpoint::new(format!("xaxis_{i}"), "range")
}

pub fn value(dom: &Dom, ep: &Endpoint) -> Option<PropValue> {
    dom.get(ep).unwrap()
}

/// Resolves the URIs `np`, `bgsm`, `electron` (and `below:`/`later:`
/// variants shifted by a day) to the reference datasets.
pub struct SampleResolver;

impl qview_core::dom::DataResolver for SampleResolver {
    fn validate(&self, uri: &str) -> Vec<qview_core::uri::Diagnostic> {
        match self.resolve(uri) {
            Ok(_) => Vec::new(),
            Err(e) => vec![qview_core::uri::Diagnostic::new(None, e)],
        }
    }

    fn resolve(&self, uri: &str) -> Result<qview_core::qdataset::QDataSet, String> {
        use qview_core::samples;
        match uri {
            "np" => Ok(samples::np()),
            "bgsm" => Ok(samples::bgsm()),
            "electron" => Ok(samples::electron_def()),
            _ => Err(format!("unknown sample {uri:?}")),
        }
    }
}
