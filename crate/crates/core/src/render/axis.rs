//! Axis ranges and tick marks.

use crate::calendar::{add_months, civil_fields, format_date, ymd_ms};
use crate::qdataset::{DatumRange, QDataSet, TimeUnits, Units};

use super::RenderError;

/// Most major ticks a linear or log axis will carry.
pub const MAX_LINEAR_MAJORS: usize = 8;
/// Most major ticks on a time axis; hour-level labels are narrow.
/// Linear labels switch to `me±k` notation at or above this magnitude.
const SCI_ABOVE: f64 = 1e6;
/// ... and for steps finer than `10^SCI_BELOW_EXP`.
const SCI_BELOW_EXP: i32 = -4;
pub const MAX_TIME_MAJORS: usize = 13;

const PAD: f64 = 0.05;
const HALF_HOUR_MS: f64 = 1_800_000.0;
const DAY_MS: i64 = 86_400_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Linear,
    Log,
    Time,
}

impl AxisKind {
    pub fn for_units(units: &Units, log: bool) -> AxisKind {
        match (units.is_time(), log) {
            (true, _) => AxisKind::Time,
            (false, true) => AxisKind::Log,
            (false, false) => AxisKind::Linear,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub range: DatumRange,
    pub kind: AxisKind,
    pub label: String,
}

impl AxisSpec {
    pub fn new(range: DatumRange, kind: AxisKind, label: impl Into<String>) -> AxisSpec {
        AxisSpec { range, kind, label: label.into() }
    }

    /// Position of `v` along the axis as a fraction in `[0, 1]` (not
    /// clamped). Invalid for non-positive values on a log axis.
    pub fn fraction(&self, v: f64) -> f64 {
        let (a, b) = (self.range.min, self.range.max);
        match self.kind {
            AxisKind::Log if v > 0.0 => (v.log10() - a.log10()) / (b.log10() - a.log10()),
            AxisKind::Log => f64::NAN,
            _ => (v - a) / (b - a),
        }
    }

    /// Inverse of [`AxisSpec::fraction`].
    pub fn value_at(&self, f: f64) -> f64 {
        let (a, b) = (self.range.min, self.range.max);
        match self.kind {
            AxisKind::Log => 10f64.powf(a.log10() + f * (b.log10() - a.log10())),
            _ => a + f * (b - a),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tick {
    pub value: f64,
    pub label: String,
    /// Date line drawn under sub-day time labels.
    pub context: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TickSet {
    pub majors: Vec<Tick>,
    pub minors: Vec<f64>,
}

/// Range of `values` ignoring non-finite entries (and non-positive ones on a
/// log axis), padded by 5% of the span on each side. Time axes are left
/// unpadded so that they end on the data.
pub fn autorange_values(values: impl IntoIterator<Item = f64>, kind: AxisKind) -> Result<(f64, f64), RenderError> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut any = false;
    for v in values {
        if !v.is_finite() {
            continue;
        }
        any = true;
        if kind == AxisKind::Log && v <= 0.0 {
            continue;
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return Err(if any && kind == AxisKind::Log { RenderError::NoPositiveData } else { RenderError::NoValidData });
    }
    Ok(match kind {
        AxisKind::Linear if lo == hi => (lo - 0.5, hi + 0.5),
        AxisKind::Linear => {
            let pad = (hi - lo) * PAD;
            (lo - pad, hi + pad)
        }
        AxisKind::Log => {
            let (a, b) = (lo.log10(), hi.log10());
            let pad = if a == b { 0.5 } else { (b - a) * PAD };
            (10f64.powf(a - pad), 10f64.powf(b + pad))
        }
        AxisKind::Time if lo == hi => (lo - HALF_HOUR_MS, hi + HALF_HOUR_MS),
        AxisKind::Time => (lo, hi),
    })
}

/// Autorange over the valid elements of `ds`, in its own units.
pub fn autorange(ds: &QDataSet, log: bool) -> Result<DatumRange, RenderError> {
    let units = ds.units();
    let kind = AxisKind::for_units(&units, log);
    let (a, b) = autorange_values(ds.valid_values(), kind)?;
    DatumRange::new(a, b, units).map_err(RenderError::Layout)
}

/// Major and minor ticks for an axis.
pub fn ticks(spec: &AxisSpec) -> TickSet {
    let (a, b) = (spec.range.min, spec.range.max);
    match spec.kind {
        AxisKind::Linear => linear_ticks(a, b, MAX_LINEAR_MAJORS),
        AxisKind::Log => log_ticks(a, b),
        AxisKind::Time => {
            let t = spec.range.units.as_time().unwrap_or(TimeUnits::UNIX_MS);
            let mut set = time_ticks(t.to_unix_ms(a), t.to_unix_ms(b));
            for tick in &mut set.majors {
                tick.value = t.from_unix_ms(tick.value);
            }
            for m in &mut set.minors {
                *m = t.from_unix_ms(*m);
            }
            set
        }
    }
}

/// A step `m·10^k`.
#[derive(Debug, Clone, Copy)]
struct Step {
    mantissa: i64,
    exp: i32,
}

impl Step {
    fn size(self) -> f64 {
        scaled(self.mantissa, self.exp)
    }
}

/// `n·10^k`, dividing by an exact power of ten for negative `k`.
fn scaled(n: i64, k: i32) -> f64 {
    if k >= 0 {
        n as f64 * pow10(k)
    } else {
        n as f64 / pow10(-k)
    }
}

fn pow10(k: i32) -> f64 {
    format!("1e{k}").parse().expect("power of ten")
}

/// Index range of multiples of `step` inside `[a, b]`, with a small
/// tolerance so that endpoints landing on a multiple are included.
fn multiples(a: f64, b: f64, step: f64) -> (i64, i64) {
    let eps = 1e-9;
    ((a / step - eps).ceil() as i64, (b / step + eps).floor() as i64)
}

/// Smallest 1-2-5 step giving at most `max_majors` ticks in `[a, b]`.
fn nice_step(a: f64, b: f64, max_majors: usize) -> Step {
    let span = b - a;
    let mut exp = span.log10().floor() as i32 - 3;
    loop {
        for mantissa in [1, 2, 5] {
            let s = Step { mantissa, exp };
            let (i0, i1) = multiples(a, b, s.size());
            if i1 - i0 < max_majors as i64 {
                return s;
            }
        }
        exp += 1;
    }
}

fn format_linear(v: f64, step: Step, sci: bool) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    if sci {
        return if v == 0.0 { "0".into() } else { format!("{v:e}") };
    }
    let decimals = (-step.exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// Linear ticks on a 1-2-5×10^k step.
pub fn linear_ticks(a: f64, b: f64, max_majors: usize) -> TickSet {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return TickSet::default();
    }
    let step = nice_step(a, b, max_majors);
    let (i0, i1) = multiples(a, b, step.size());
    let largest = scaled(i0.abs().max(i1.abs()) * step.mantissa, step.exp);
    let sci = largest >= SCI_ABOVE || step.exp < SCI_BELOW_EXP;
    let majors = (i0..=i1)
        .map(|i| {
            let v = scaled(i * step.mantissa, step.exp);
            Tick { value: v, label: format_linear(v, step, sci), context: None }
        })
        .collect();
    let (sub_n, sub_k) = match step.mantissa {
        2 => (5, step.exp - 1),
        m => (m * 2, step.exp - 1),
    };
    // Minor step: m·10^k / 5 for m ∈ {1, 5}, 2·10^k / 4 otherwise.
    let minor = Step { mantissa: sub_n, exp: sub_k };
    let (j0, j1) = multiples(a, b, minor.size());
    let minors = (j0..=j1).map(|j| scaled(j * minor.mantissa, minor.exp)).collect();
    TickSet { majors, minors }
}

fn format_decade(k: i32) -> String {
    if (-3..=3).contains(&k) {
        pow10(k).to_string()
    } else {
        format!("1e{k}")
    }
}

/// Decade ticks; fewer than two decades in range fall back to linear ticks.
pub fn log_ticks(a: f64, b: f64) -> TickSet {
    if !(a > 0.0 && a < b) {
        return TickSet::default();
    }
    let (la, lb) = (a.log10(), b.log10());
    let eps = 1e-9;
    let k0 = (la - eps).ceil() as i32;
    let k1 = (lb + eps).floor() as i32;
    if k1 - k0 + 1 < 2 {
        return linear_ticks(a, b, MAX_LINEAR_MAJORS);
    }
    let count = (k1 - k0 + 1) as usize;
    let every = [1, 2, 3, 5, 10, 20, 50, 100]
        .into_iter()
        .find(|n| count.div_ceil(*n as usize) <= MAX_LINEAR_MAJORS)
        .unwrap_or(100);
    let majors = (k0..=k1)
        .filter(|k| k.rem_euclid(every) == 0)
        .map(|k| Tick { value: pow10(k), label: format_decade(k), context: None })
        .collect();
    let mut minors = Vec::new();
    for k in (la.floor() as i32)..=(lb.floor() as i32) {
        let mults: &[i64] = if every == 1 { &[2, 3, 4, 5, 6, 7, 8, 9] } else { &[] };
        for &m in mults {
            let v = scaled(m, k);
            if v >= a && v <= b {
                minors.push(v);
            }
        }
        if every > 1 && k.rem_euclid(every) != 0 {
            let v = pow10(k);
            if v >= a && v <= b {
                minors.push(v);
            }
        }
    }
    TickSet { majors, minors }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TimeStep {
    Fixed(i64),
    Months(i32),
}

const SECOND: i64 = 1000;
const MINUTE: i64 = 60 * SECOND;
const HOUR: i64 = 60 * MINUTE;

const TIME_STEPS: &[TimeStep] = &[
    TimeStep::Fixed(1),
    TimeStep::Fixed(2),
    TimeStep::Fixed(5),
    TimeStep::Fixed(10),
    TimeStep::Fixed(20),
    TimeStep::Fixed(50),
    TimeStep::Fixed(100),
    TimeStep::Fixed(200),
    TimeStep::Fixed(500),
    TimeStep::Fixed(SECOND),
    TimeStep::Fixed(2 * SECOND),
    TimeStep::Fixed(5 * SECOND),
    TimeStep::Fixed(10 * SECOND),
    TimeStep::Fixed(15 * SECOND),
    TimeStep::Fixed(30 * SECOND),
    TimeStep::Fixed(MINUTE),
    TimeStep::Fixed(2 * MINUTE),
    TimeStep::Fixed(5 * MINUTE),
    TimeStep::Fixed(10 * MINUTE),
    TimeStep::Fixed(15 * MINUTE),
    TimeStep::Fixed(30 * MINUTE),
    TimeStep::Fixed(HOUR),
    TimeStep::Fixed(2 * HOUR),
    TimeStep::Fixed(3 * HOUR),
    TimeStep::Fixed(6 * HOUR),
    TimeStep::Fixed(12 * HOUR),
    TimeStep::Fixed(DAY_MS),
    TimeStep::Fixed(2 * DAY_MS),
    TimeStep::Fixed(5 * DAY_MS),
    TimeStep::Fixed(10 * DAY_MS),
    TimeStep::Months(1),
    TimeStep::Months(2),
    TimeStep::Months(3),
    TimeStep::Months(6),
    TimeStep::Months(12),
    TimeStep::Months(24),
    TimeStep::Months(60),
    TimeStep::Months(120),
    TimeStep::Months(240),
    TimeStep::Months(600),
    TimeStep::Months(1200),
];

/// Calendar-aligned instants of `step` within `[a, b]` (ms since 1970).
fn time_positions(a: f64, b: f64, step: TimeStep, limit: usize) -> Option<Vec<i64>> {
    let (lo, hi) = (a.ceil() as i64, b.floor() as i64);
    let mut out = Vec::new();
    match step {
        TimeStep::Fixed(s) => {
            let first = lo.div_euclid(s) * s + if lo.rem_euclid(s) == 0 { 0 } else { s };
            let mut t = first;
            while t <= hi {
                out.push(t);
                if out.len() > limit {
                    return None;
                }
                t += s;
            }
        }
        TimeStep::Months(n) => {
            let (y, m, ..) = civil_fields(lo);
            let month_index = y * 12 + (m as i32 - 1);
            let aligned = month_index.div_euclid(n) * n;
            let mut t = ymd_ms(aligned.div_euclid(12), (aligned.rem_euclid(12) + 1) as u32, 1);
            while t <= hi {
                if t >= lo {
                    out.push(t);
                    if out.len() > limit {
                        return None;
                    }
                }
                t = add_months(t, n);
            }
        }
    }
    Some(out)
}

fn time_label(t: i64, step: TimeStep) -> (String, Option<String>) {
    let (y, mo, d, h, mi, s, ms) = civil_fields(t);
    match step {
        TimeStep::Months(n) if n % 12 == 0 => (format!("{y:04}"), None),
        TimeStep::Months(_) => (format!("{y:04}-{mo:02}"), None),
        TimeStep::Fixed(f) if f % DAY_MS == 0 => (format!("{y:04}-{mo:02}-{d:02}"), None),
        TimeStep::Fixed(f) => {
            let text = if f % MINUTE == 0 {
                format!("{h:02}:{mi:02}")
            } else if f % SECOND == 0 {
                format!("{h:02}:{mi:02}:{s:02}")
            } else {
                format!("{h:02}:{mi:02}:{s:02}.{ms:03}")
            };
            (text, Some(format_date(t)))
        }
    }
}

fn minor_step(step: TimeStep) -> TimeStep {
    match step {
        TimeStep::Fixed(f) if f >= DAY_MS => TimeStep::Fixed(if f == DAY_MS { 6 * HOUR } else { DAY_MS }),
        TimeStep::Fixed(f) => {
            let idx = TIME_STEPS.iter().position(|s| *s == step).unwrap_or(0);
            let finer = TIME_STEPS[..idx].iter().rev().find_map(|s| match s {
                TimeStep::Fixed(g) if f % g == 0 && f / g >= 2 && f / g <= 6 => Some(*g),
                _ => None,
            });
            TimeStep::Fixed(finer.unwrap_or(f))
        }
        TimeStep::Months(1) => TimeStep::Fixed(DAY_MS),
        TimeStep::Months(n) if n < 12 => TimeStep::Months(1),
        TimeStep::Months(n) => TimeStep::Months((n / 4).max(1)),
    }
}

/// Calendar ticks over `[a, b]` (ms since 1970).
pub fn time_ticks(a: f64, b: f64) -> TickSet {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return TickSet::default();
    }
    for &step in TIME_STEPS {
        let Some(pos) = time_positions(a, b, step, MAX_TIME_MAJORS) else { continue };
        let majors = pos
            .iter()
            .map(|&t| {
                let (label, context) = time_label(t, step);
                Tick { value: t as f64, label, context }
            })
            .collect();
        let minors = time_positions(a, b, minor_step(step), 10_000)
            .unwrap_or_default()
            .into_iter()
            .map(|t| t as f64)
            .collect();
        return TickSet { majors, minors };
    }
    TickSet::default()
}
