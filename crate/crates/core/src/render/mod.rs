//! Rendering of a DOM snapshot and its datasets to PNG or SVG.
//!
//! Rendering is a pure function: the same DOM and data always give the same
//! bytes. Axis ranges come from the DOM; axes without a range are
//! autoranged from the data on the fly.

pub mod axis;
pub mod color;
pub mod surface;

pub use axis::{autorange, autorange_values, ticks, AxisKind, AxisSpec, Tick, TickSet};
pub use color::{parse_color, Rgba, PALETTE};
pub use surface::{fit_text, Anchor, Raster, Rect, Surface, Svg};

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::dom::{Axis, AxisScale, Dom, Plot, PlotElement, RenderType};
use crate::qdataset::{histogram, DatumRange, PropertyKey, QDataSet, Units};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("no valid data to range over")]
    NoValidData,
    #[error("log axis requested but no data are positive")]
    NoPositiveData,
    #[error("data source {0} has not been resolved")]
    Unresolved(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Layout(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Png,
    Svg,
}

impl ImageFormat {
    pub fn parse(s: &str) -> Option<ImageFormat> {
        match s.to_ascii_lowercase().as_str() {
            "png" => Some(ImageFormat::Png),
            "svg" => Some(ImageFormat::Svg),
            _ => None,
        }
    }

    pub fn content_type(self) -> &'static str {
        match self {
            ImageFormat::Png => "image/png",
            ImageFormat::Svg => "image/svg+xml",
        }
    }
}

/// Dataset (or read failure) per data source id.
pub type DataMap = BTreeMap<String, Result<Arc<QDataSet>, String>>;

const MARGIN_LEFT: f64 = 72.0;
const MARGIN_RIGHT: f64 = 96.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 52.0;
const HISTOGRAM_BINS: usize = 20;

/// Render type chosen from the shape of the data.
pub fn render_type_default(ds: &QDataSet) -> RenderType {
    match ds.rank() {
        2 if ds.bundle().is_some() => RenderType::Series,
        2 | 3 => RenderType::Spectrogram,
        1 => match ds.depend(0) {
            Some(d) if !is_monotonic(&d.valid_values()) => RenderType::Scatter,
            _ => RenderType::Series,
        },
        _ => RenderType::Series,
    }
}

fn is_monotonic(v: &[f64]) -> bool {
    let valid: Vec<f64> = v.iter().copied().filter(|x| x.is_finite()).collect();
    valid.windows(2).all(|w| w[0] <= w[1])
}

/// `LABEL` (or `NAME`), followed by the units in parentheses.
pub fn quantity_label(ds: &QDataSet) -> String {
    let base = ds.label().or(ds.name()).unwrap_or("").to_string();
    match ds.units() {
        Units::Ratio(u) if !u.is_empty() && base.is_empty() => u,
        Units::Ratio(u) if !u.is_empty() => format!("{base} ({u})"),
        _ => base,
    }
}

/// Initial settings for one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSetup {
    pub range: DatumRange,
    pub scale: AxisScale,
    pub label: String,
}

/// Axis settings derived from a dataset for a render type.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AxisPlan {
    pub x: Option<AxisSetup>,
    pub y: Option<AxisSetup>,
    pub z: Option<AxisSetup>,
    pub title: String,
}

fn scale_of(log: bool) -> AxisScale {
    if log { AxisScale::Log } else { AxisScale::Linear }
}

fn setup(values: impl IntoIterator<Item = f64>, units: Units, log: bool, label: String) -> Option<AxisSetup> {
    let kind = AxisKind::for_units(&units, log);
    let (a, b) = autorange_values(values, kind).ok()?;
    Some(AxisSetup { range: DatumRange::new(a, b, units).ok()?, scale: scale_of(log), label })
}

fn index_dataset(n: usize) -> QDataSet {
    QDataSet::rank1((0..n).map(|i| i as f64).collect(), Default::default()).expect("rank-1 index")
}

fn x_tags(ds: &QDataSet) -> QDataSet {
    ds.depend(0).cloned().unwrap_or_else(|| index_dataset(ds.len()))
}

fn x_setup(tags: &QDataSet) -> Option<AxisSetup> {
    let label = if tags.units().is_time() { String::new() } else { quantity_label(tags) };
    setup(tags.valid_values(), tags.units(), tags.is_log_scale(), label)
}

/// Components of a bundle, or the dataset itself.
fn components(ds: &QDataSet) -> Vec<QDataSet> {
    match ds.bundle() {
        Some(b) => (0..b.len()).filter_map(|j| ds.unbundle(j).ok()).collect(),
        None => vec![ds.clone()],
    }
}

/// Axis settings for plotting `ds` as `rt`.
pub fn plan_axes(ds: &QDataSet, rt: RenderType) -> AxisPlan {
    let title = ds.title().unwrap_or("").to_string();
    match rt {
        RenderType::Series | RenderType::Scatter => {
            let comps = components(ds);
            let units = comps.first().map(QDataSet::units).unwrap_or_default();
            let log = ds.is_log_scale();
            let values = comps.iter().flat_map(|c| c.valid_values());
            let label = if ds.bundle().is_some() {
                let names: Vec<String> = comps.iter().map(|c| c.label().or(c.name()).unwrap_or("").to_string()).collect();
                let base = ds.label().or(ds.name()).map(str::to_string).unwrap_or_else(|| names.join(", "));
                match &units {
                    Units::Ratio(u) if !u.is_empty() => format!("{base} ({u})"),
                    _ => base,
                }
            } else {
                quantity_label(ds)
            };
            AxisPlan { x: x_setup(&x_tags(ds)), y: setup(values, units, log, label), z: None, title }
        }
        RenderType::Spectrogram => {
            let x = x_setup(&x_tags(ds));
            let y = match ds.depend(1) {
                Some(d1) => {
                    let log = d1.is_log_scale();
                    let edges = record_channel_edges(d1, log, 0);
                    let lo = edges.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
                    let hi = edges.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
                    let kind = AxisKind::for_units(&d1.units(), log);
                    let range = if lo < hi {
                        DatumRange::new(lo, hi, d1.units()).ok()
                    } else {
                        autorange_values([lo], kind).ok().and_then(|(a, b)| DatumRange::new(a, b, d1.units()).ok())
                    };
                    range.map(|range| AxisSetup { range, scale: scale_of(log), label: quantity_label(d1) })
                }
                None => {
                    let n = ds.length_at(1).unwrap_or(1);
                    DatumRange::new(-0.5, n as f64 - 0.5, Units::dimensionless())
                        .ok()
                        .map(|range| AxisSetup { range, scale: AxisScale::Linear, label: String::new() })
                }
            };
            let z = setup(ds.valid_values(), ds.units(), ds.is_log_scale(), quantity_label(ds));
            AxisPlan { x, y, z, title }
        }
        RenderType::Histogram => match histogram_of(ds) {
            Some((x, y, _)) => AxisPlan {
                x: Some(AxisSetup { range: x.range, scale: AxisScale::Linear, label: x.label }),
                y: Some(AxisSetup { range: y.range, scale: AxisScale::Linear, label: y.label }),
                z: None,
                title,
            },
            None => AxisPlan { title, ..Default::default() },
        },
    }
}

/// Histogram axes and bin counts.
fn histogram_of(ds: &QDataSet) -> Option<(AxisSpec, AxisSpec, QDataSet)> {
    let (a, b) = autorange_values(ds.valid_values(), AxisKind::Linear).ok()?;
    let h = histogram(ds, HISTOGRAM_BINS, Some((a, b))).ok()?;
    let max = h.flat_values().into_iter().fold(0.0, f64::max);
    let x = AxisSpec::new(DatumRange::new(a, b, ds.units()).ok()?, AxisKind::Linear, quantity_label(ds));
    let y = AxisSpec::new(DatumRange::new(0.0, (max * 1.05).max(1.0), Units::dimensionless()).ok()?, AxisKind::Linear, "count");
    Some((x, y, h))
}

/// Data area of every plot, in plot order.
pub fn plot_boxes(dom: &Dom) -> Vec<(String, Rect)> {
    let (w, h) = (dom.canvas.width as f64, dom.canvas.height as f64);
    let bands = |weights: Vec<(&str, f64)>, total: f64| -> BTreeMap<String, (f64, f64)> {
        let sum: f64 = weights.iter().map(|(_, w)| w.max(0.0)).sum();
        let mut at = 0.0;
        let mut out = BTreeMap::new();
        for (id, wt) in weights {
            let size = if sum > 0.0 { total * wt.max(0.0) / sum } else { 0.0 };
            out.insert(id.to_string(), (at, size));
            at += size;
        }
        out
    };
    let rows = bands(dom.canvas.rows.iter().map(|r| (r.id.as_str(), r.weight)).collect(), h);
    let cols = bands(dom.canvas.columns.iter().map(|c| (c.id.as_str(), c.weight)).collect(), w);
    dom.plots
        .iter()
        .filter_map(|p| {
            let (y, ph) = *rows.get(&p.row)?;
            let (x, pw) = *cols.get(&p.column)?;
            let sx = (pw / (MARGIN_LEFT + MARGIN_RIGHT + 16.0)).min(1.0);
            let sy = (ph / (MARGIN_TOP + MARGIN_BOTTOM + 16.0)).min(1.0);
            let r = Rect::new(
                (x + MARGIN_LEFT * sx).round(),
                (y + MARGIN_TOP * sy).round(),
                (pw - (MARGIN_LEFT + MARGIN_RIGHT) * sx).round().max(1.0),
                (ph - (MARGIN_TOP + MARGIN_BOTTOM) * sy).round().max(1.0),
            );
            Some((p.id.clone(), r))
        })
        .collect()
}

/// Renders the canvas.
pub fn render_canvas(dom: &Dom, data: &DataMap, format: ImageFormat) -> Result<Vec<u8>, RenderError> {
    let (w, h) = (dom.canvas.width.max(1), dom.canvas.height.max(1));
    match format {
        ImageFormat::Png => {
            let mut r = Raster::new(w, h, Rgba::WHITE);
            draw_canvas(dom, data, &mut r)?;
            Ok(r.encode_png())
        }
        ImageFormat::Svg => {
            let mut s = Svg::new(w, h);
            s.fill_rect(Rect::new(0.0, 0.0, w as f64, h as f64), Rgba::WHITE);
            draw_canvas(dom, data, &mut s)?;
            Ok(s.finish().into_bytes())
        }
    }
}

pub fn draw_canvas(dom: &Dom, data: &DataMap, s: &mut dyn Surface) -> Result<(), RenderError> {
    for e in &dom.plot_elements {
        if !data.contains_key(&e.data) {
            return Err(RenderError::Unresolved(e.data.clone()));
        }
    }
    let boxes: BTreeMap<String, Rect> = plot_boxes(dom).into_iter().collect();
    for plot in &dom.plots {
        if let Some(b) = boxes.get(&plot.id) {
            draw_plot(dom, plot, *b, data, s)?;
        }
    }
    Ok(())
}

/// Dataset drawn by one element: the data source's, or one bundle component.
fn element_data(e: &PlotElement, data: &DataMap) -> Result<QDataSet, String> {
    let ds = match data.get(&e.data) {
        Some(Ok(ds)) => ds,
        Some(Err(msg)) => return Err(msg.clone()),
        None => return Err(format!("data source {} unresolved", e.data)),
    };
    match e.component {
        Some(j) => ds.unbundle(j).map_err(|err| err.to_string()),
        None => Ok((**ds).clone()),
    }
}

struct Drawable<'a> {
    element: &'a PlotElement,
    ds: QDataSet,
}

fn axis_spec(axis: &Axis, fallback: impl FnOnce(bool) -> Option<DatumRange>) -> AxisSpec {
    let log = axis.scale == AxisScale::Log;
    let range = axis
        .range
        .clone()
        .filter(|r| !log || r.min > 0.0)
        .or_else(|| fallback(log))
        .unwrap_or_else(|| {
            if log {
                DatumRange::new(1.0, 10.0, Units::dimensionless()).unwrap()
            } else {
                DatumRange::new(0.0, 1.0, Units::dimensionless()).unwrap()
            }
        });
    let kind = AxisKind::for_units(&range.units, log);
    AxisSpec::new(range, kind, axis.label.clone())
}

fn draw_plot(dom: &Dom, plot: &Plot, b: Rect, data: &DataMap, s: &mut dyn Surface) -> Result<(), RenderError> {
    let mut drawables = Vec::new();
    let mut errors = Vec::new();
    for e in dom.elements_of(&plot.id) {
        let is_parent = dom.children_of(&e.id).next().is_some();
        if is_parent || !e.visible {
            continue;
        }
        if e.parent.as_ref().and_then(|p| dom.element(p)).is_some_and(|p| !p.visible) {
            continue;
        }
        match element_data(e, data) {
            Ok(ds) => drawables.push(Drawable { element: e, ds }),
            Err(msg) => errors.push(format!("{}: {msg}", e.id)),
        }
    }

    let hist = drawables.iter().find(|d| d.element.render_type == RenderType::Histogram).and_then(|d| histogram_of(&d.ds));
    let pooled = |pick: &dyn Fn(&Drawable<'_>) -> Option<AxisSetup>| -> Option<DatumRange> {
        let setups: Vec<AxisSetup> = drawables.iter().filter_map(pick).collect();
        let first = setups.first()?;
        let units = first.range.units.clone();
        let conv: Vec<DatumRange> = setups.iter().filter_map(|s| s.range.convert(&units).ok()).collect();
        let lo = conv.iter().map(|r| r.min).fold(f64::INFINITY, f64::min);
        let hi = conv.iter().map(|r| r.max).fold(f64::NEG_INFINITY, f64::max);
        DatumRange::new(lo, hi, units).ok()
    };
    let plan = |d: &Drawable<'_>| plan_axes(&d.ds, d.element.render_type);
    let (xs, ys) = match &hist {
        Some((x, y, _)) => (x.clone(), y.clone()),
        None => (
            axis_spec(&plot.xaxis, |_| pooled(&|d| plan(d).x)),
            axis_spec(&plot.yaxis, |log| pooled(&|d| plan(d).y.filter(|y| !log || y.range.min > 0.0))),
        ),
    };
    let has_spec = drawables.iter().any(|d| d.element.render_type == RenderType::Spectrogram);
    let zs = axis_spec(&plot.zaxis, |_| pooled(&|d| plan(d).z));

    for d in &drawables {
        let color = parse_color(&d.element.style.color);
        match d.element.render_type {
            RenderType::Series => draw_series(&d.ds, d.element, &xs, &ys, b, color, s),
            RenderType::Scatter => draw_scatter(&d.ds, d.element, &xs, &ys, b, color, s),
            RenderType::Spectrogram => {
                if let Err(e) = draw_spectrogram(&d.ds, &xs, &ys, &zs, b, s) {
                    errors.push(format!("{}: {e}", d.element.id));
                }
            }
            RenderType::Histogram => {
                if let Some((_, _, h)) = &hist {
                    draw_histogram(h, &xs, &ys, b, color, s);
                }
            }
        }
    }

    s.stroke_rect(b, Rgba::BLACK);
    if !plot.title.is_empty() {
        s.text(b.x + b.w / 2.0, b.y - 14.0, &plot.title, Anchor::Middle, false, Rgba::BLACK);
    }
    if plot.xaxis.visible {
        draw_x_axis(&xs, b, s);
    }
    if plot.yaxis.visible {
        draw_y_axis(&ys, b, s);
    }
    if has_spec && plot.zaxis.visible {
        draw_colorbar(&zs, b, s);
    }
    for (i, msg) in errors.iter().enumerate() {
        let text: String = msg.chars().take(((b.w / surface::GLYPH) as usize).max(8)).collect();
        s.text(b.x + 4.0, b.y + 12.0 + 12.0 * i as f64, &text, Anchor::Start, false, Rgba(200, 0, 0, 255));
    }
    Ok(())
}

fn px(spec: &AxisSpec, b: Rect, v: f64) -> f64 {
    b.x + spec.fraction(v) * b.w
}

fn py(spec: &AxisSpec, b: Rect, v: f64) -> f64 {
    b.bottom() - spec.fraction(v) * b.h
}

/// `values` converted into the axis units when possible.
fn in_units(values: Vec<f64>, from: &Units, spec: &AxisSpec) -> Vec<f64> {
    if from == &spec.range.units || !from.is_convertible_to(&spec.range.units) {
        return values;
    }
    values.into_iter().map(|v| from.convert(v, &spec.range.units).unwrap_or(f64::NAN)).collect()
}

/// Columns of a series-like dataset, invalid entries as NaN.
fn columns(ds: &QDataSet) -> Vec<Vec<f64>> {
    match ds.rank() {
        0 => vec![vec![ds.value()]],
        1 => vec![ds.valid_values()],
        _ => {
            let Some(shape) = ds.shape() else { return Vec::new() };
            let rule = ds.validity_rule();
            let flat = ds.flat_values();
            let inner: usize = shape[2..].iter().product();
            (0..shape[1])
                .map(|j| {
                    (0..shape[0])
                        .map(|i| flat[(i * shape[1] + j) * inner])
                        .map(|v| if rule.is_valid(v) { v } else { f64::NAN })
                        .collect()
                })
                .collect()
        }
    }
}

fn points(ds: &QDataSet, xs: &AxisSpec, ys: &AxisSpec, b: Rect) -> Vec<Vec<(f64, f64)>> {
    let tags = x_tags(ds);
    let xv = in_units(tags.valid_values(), &tags.units(), xs);
    columns(ds)
        .into_iter()
        .map(|col| {
            let col = in_units(col, &ds.units(), ys);
            xv.iter()
                .zip(col)
                .map(|(&x, y)| (px(xs, b, x), py(ys, b, y)))
                .collect()
        })
        .collect()
}

fn draw_series(ds: &QDataSet, e: &PlotElement, xs: &AxisSpec, ys: &AxisSpec, b: Rect, c: Rgba, s: &mut dyn Surface) {
    for col in points(ds, xs, ys, b) {
        let mut run: Vec<(f64, f64)> = Vec::new();
        for p in col.into_iter().chain(std::iter::once((f64::NAN, f64::NAN))) {
            if p.0.is_finite() && p.1.is_finite() {
                run.push(p);
                continue;
            }
            if !run.is_empty() {
                s.polyline(&run, c, e.style.line_width, b);
                if e.style.symbol != crate::dom::Symbol::None {
                    for &(x, y) in &run {
                        s.marker(x, y, e.style.symbol, c, b);
                    }
                }
                run.clear();
            }
        }
    }
}

fn draw_scatter(ds: &QDataSet, e: &PlotElement, xs: &AxisSpec, ys: &AxisSpec, b: Rect, c: Rgba, s: &mut dyn Surface) {
    for col in points(ds, xs, ys, b) {
        for (x, y) in col {
            if x.is_finite() && y.is_finite() {
                s.marker(x, y, e.style.symbol, c, b);
            }
        }
    }
}

/// Cell boundaries from centres: midpoints between neighbours (geometric
/// on log axes), clamped to the first and last centre at the ends.
fn edges_from_centers(c: &[f64], log: bool) -> Vec<(f64, f64)> {
    let n = c.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![if log { (c[0] / 10f64.sqrt(), c[0] * 10f64.sqrt()) } else { (c[0] - 0.5, c[0] + 0.5) }];
    }
    let mid = |a: f64, b: f64| if log { (a * b).sqrt() } else { (a + b) / 2.0 };
    (0..n)
        .map(|i| {
            let lo = if i == 0 { c[0] } else { mid(c[i - 1], c[i]) };
            let hi = if i == n - 1 { c[n - 1] } else { mid(c[i], c[i + 1]) };
            (lo, hi)
        })
        .collect()
}

/// Channel boundaries of record `i` (all records when shared).
fn record_channel_edges(d1: &QDataSet, log: bool, i: usize) -> Vec<(f64, f64)> {
    if d1.rank() == 2 && d1.property(&PropertyKey::Bins1).is_some() {
        return (0..d1.len())
            .map(|j| (d1.get(&[j, 0]).unwrap_or(f64::NAN), d1.get(&[j, 1]).unwrap_or(f64::NAN)))
            .collect();
    }
    if d1.rank() == 2 {
        let row = d1.slice0(i.min(d1.len().saturating_sub(1))).map(|r| r.valid_values()).unwrap_or_default();
        return edges_from_centers(&row, log);
    }
    edges_from_centers(&d1.valid_values(), log)
}

/// Index of the cell containing `v`, given sorted, contiguous edges.
fn find_cell(edges: &[(f64, f64)], v: f64) -> Option<usize> {
    let i = edges.partition_point(|e| e.1 <= v);
    let e = edges.get(i)?;
    (e.0 <= v && v <= e.1).then_some(i)
}

fn draw_spectrogram(ds: &QDataSet, xs: &AxisSpec, ys: &AxisSpec, zs: &AxisSpec, b: Rect, s: &mut dyn Surface) -> Result<(), RenderError> {
    if ds.rank() != 2 {
        return Err(RenderError::Unsupported(format!("spectrogram needs rank 2, got rank {}", ds.rank())));
    }
    let d1 = ds.depend(1);
    if ds.is_ragged() && !d1.is_some_and(|d| d.rank() == 2) {
        return Err(RenderError::Unsupported("ragged spectrogram needs per-record DEPEND_1".into()));
    }
    let tags = x_tags(ds);
    let xc = in_units(tags.valid_values(), &tags.units(), xs);
    let xedges = edges_from_centers(&xc, xs.kind == AxisKind::Log);
    let ylog = ys.kind == AxisKind::Log;
    let yunits = d1.map(QDataSet::units).unwrap_or_default();
    let fixed_y = d1.is_none_or(|d| d.rank() == 1 || d.property(&PropertyKey::Bins1).is_some());
    let index_y = index_dataset(ds.length_at(1).unwrap_or(0));
    let shared: Vec<(f64, f64)> = match d1 {
        Some(d) if fixed_y => record_channel_edges(d, ylog, 0),
        _ => edges_from_centers(&index_y.valid_values(), false),
    };
    let convert_y = |e: Vec<(f64, f64)>| -> Vec<(f64, f64)> {
        let lo = in_units(e.iter().map(|p| p.0).collect(), &yunits, ys);
        let hi = in_units(e.iter().map(|p| p.1).collect(), &yunits, ys);
        lo.into_iter().zip(hi).collect()
    };
    let shared = convert_y(shared);
    let rule = ds.validity_rule();
    let zfrom = ds.units();

    let (w, h) = (b.w.round().max(1.0) as usize, b.h.round().max(1.0) as usize);
    let mut pixels = vec![Rgba::TRANSPARENT; w * h];
    let mut per_record: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();
    for pxi in 0..w {
        let xv = xs.value_at((pxi as f64 + 0.5) / w as f64);
        let Some(i) = find_cell(&xedges, xv) else { continue };
        let yedges = if fixed_y {
            &shared
        } else {
            per_record
                .entry(i)
                .or_insert_with(|| convert_y(record_channel_edges(d1.expect("per-record DEPEND_1"), ylog, i)))
        };
        for pyi in 0..h {
            let yv = ys.value_at(1.0 - (pyi as f64 + 0.5) / h as f64);
            let Some(j) = find_cell(yedges, yv) else { continue };
            let Some(v) = ds.get(&[i, j]) else { continue };
            if !rule.is_valid(v) {
                continue;
            }
            let v = if zfrom.is_convertible_to(&zs.range.units) { zfrom.convert(v, &zs.range.units).unwrap_or(v) } else { v };
            let f = zs.fraction(v);
            if f.is_finite() {
                pixels[pyi * w + pxi] = color::lookup(f);
            }
        }
    }
    s.image(b, w, h, &pixels);
    Ok(())
}

fn draw_histogram(h: &QDataSet, xs: &AxisSpec, ys: &AxisSpec, b: Rect, c: Rgba, s: &mut dyn Surface) {
    let Some(centers) = h.depend(0) else { return };
    let centers = centers.flat_values();
    let counts = h.flat_values();
    let half = if centers.len() > 1 { (centers[1] - centers[0]) / 2.0 } else { 0.5 };
    for (x, n) in centers.iter().zip(counts) {
        if n <= 0.0 {
            continue;
        }
        let (x0, x1) = (px(xs, b, x - half), px(xs, b, x + half));
        let top = py(ys, b, n);
        let fill = Rgba(c.0, c.1, c.2, 160);
        s.fill_rect(Rect::new(x0, top, (x1 - x0).max(1.0), b.bottom() - top), fill);
    }
}

fn draw_x_axis(spec: &AxisSpec, b: Rect, s: &mut dyn Surface) {
    let t = ticks(spec);
    let y = b.bottom();
    for &m in &t.minors {
        let x = px(spec, b, m);
        if x >= b.x - 0.5 && x <= b.right() + 0.5 {
            s.line(x, y, x, y + 3.0, Rgba::BLACK);
        }
    }
    let mut last_context: Option<&str> = None;
    for tick in &t.majors {
        let x = px(spec, b, tick.value);
        if x < b.x - 0.5 || x > b.right() + 0.5 {
            continue;
        }
        s.line(x, y, x, y + 6.0, Rgba::BLACK);
        s.text(x, y + 14.0, &tick.label, Anchor::Middle, false, Rgba::BLACK);
        if let Some(ctx) = tick.context.as_deref() {
            if last_context != Some(ctx) {
                s.text(x, y + 26.0, ctx, Anchor::Middle, false, Rgba::BLACK);
                last_context = Some(ctx);
            }
        }
    }
    if !spec.label.is_empty() {
        s.text(b.x + b.w / 2.0, y + 40.0, &spec.label, Anchor::Middle, false, Rgba::BLACK);
    }
}

fn draw_y_axis(spec: &AxisSpec, b: Rect, s: &mut dyn Surface) {
    let t = ticks(spec);
    let x = b.x;
    for &m in &t.minors {
        let y = py(spec, b, m);
        if y >= b.y - 0.5 && y <= b.bottom() + 0.5 {
            s.line(x - 3.0, y, x, y, Rgba::BLACK);
        }
    }
    for tick in &t.majors {
        let y = py(spec, b, tick.value);
        if y < b.y - 0.5 || y > b.bottom() + 0.5 {
            continue;
        }
        s.line(x - 6.0, y, x, y, Rgba::BLACK);
        s.text(x - 8.0, y, &tick.label, Anchor::End, false, Rgba::BLACK);
    }
    if !spec.label.is_empty() {
        s.text(x - 60.0, b.y + b.h / 2.0, &fit_text(&spec.label, b.h), Anchor::Middle, true, Rgba::BLACK);
    }
}

fn draw_colorbar(spec: &AxisSpec, b: Rect, s: &mut dyn Surface) {
    let bar = Rect::new(b.right() + 10.0, b.y, 12.0, b.h);
    let pixels: Vec<Rgba> = (0..256).rev().map(|i| color::color_table()[i]).collect();
    s.image(bar, 1, 256, &pixels);
    s.stroke_rect(bar, Rgba::BLACK);
    let t = ticks(spec);
    for tick in &t.majors {
        let y = py(spec, bar, tick.value);
        if y < bar.y - 0.5 || y > bar.bottom() + 0.5 {
            continue;
        }
        s.line(bar.right(), y, bar.right() + 4.0, y, Rgba::BLACK);
        s.text(bar.right() + 6.0, y, &tick.label, Anchor::Start, false, Rgba::BLACK);
    }
    if !spec.label.is_empty() {
        s.text(bar.right() + 66.0, bar.y + bar.h / 2.0, &fit_text(&spec.label, bar.h), Anchor::Middle, true, Rgba::BLACK);
    }
}
