//! The single writer of a [`Dom`]: operations, bindings and history.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::*;
use crate::engine::DataEngine;
use crate::qdataset::{DatumRange, QDataSet};
use crate::render::{self, plan_axes, render_type_default, AxisPlan, DataMap, ImageFormat, RenderError, PALETTE};
use crate::uri::{parse_uri, Diagnostic};

/// Snapshots kept for undo, including the current state.
pub const HISTORY_LIMIT: usize = 100;

/// Minimum overlap, as a fraction of the shorter span, for a new time axis
/// to be bound to the application time range.
const AUTO_BIND_OVERLAP: f64 = 0.25;

/// Where the editor gets data from.
pub trait DataResolver: Send + Sync {
    fn validate(&self, uri: &str) -> Vec<Diagnostic>;
    fn resolve(&self, uri: &str) -> Result<QDataSet, String>;
}

impl DataResolver for DataEngine {
    fn validate(&self, uri: &str) -> Vec<Diagnostic> {
        match parse_uri(uri) {
            Ok(u) => DataEngine::validate(self, &u),
            Err(e) => vec![Diagnostic::new(None, e.to_string())],
        }
    }

    fn resolve(&self, uri: &str) -> Result<QDataSet, String> {
        self.read(uri).map_err(|e| e.to_string())
    }
}

/// One mutation request, as sent to a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum DomOp {
    AddPlotElement {
        uri: String,
        #[serde(default)]
        placement: Placement,
    },
    SetProperty {
        node: String,
        property: String,
        value: serde_json::Value,
    },
    Bind {
        a: Endpoint,
        b: Endpoint,
    },
    Unbind {
        a: Endpoint,
        b: Endpoint,
    },
    Undo,
    Redo,
    SetFocus {
        node: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct OpOutcome {
    /// Whether the DOM differs from before the operation.
    pub changed: bool,
    /// Property assignments made, including binding propagation.
    pub assignments: usize,
    /// Ids of nodes created.
    pub created: Vec<String>,
    pub message: Option<String>,
}

/// Bounded history of DOM states with a cursor.
#[derive(Debug, Clone)]
struct StateLog {
    states: VecDeque<Dom>,
    cursor: usize,
}

impl StateLog {
    fn new(initial: Dom) -> StateLog {
        StateLog { states: VecDeque::from([initial]), cursor: 0 }
    }

    fn current(&self) -> &Dom {
        &self.states[self.cursor]
    }

    fn record(&mut self, dom: Dom) {
        self.states.truncate(self.cursor + 1);
        self.states.push_back(dom);
        if self.states.len() > HISTORY_LIMIT {
            self.states.pop_front();
        }
        self.cursor = self.states.len() - 1;
    }

    fn undo(&mut self) -> bool {
        if self.cursor == 0 {
            return false;
        }
        self.cursor -= 1;
        true
    }

    fn redo(&mut self) -> bool {
        if self.cursor + 1 >= self.states.len() {
            return false;
        }
        self.cursor += 1;
        true
    }
}

/// Writes `value` (or clears it, for optional ranges) without propagation.
fn write(dom: &mut Dom, ep: &Endpoint, value: Option<PropValue>) -> Result<(), DomError> {
    let ty = dom.property_type(ep)?;
    let node = dom.node(&ep.node).expect("checked by property_type");
    if !node.is_writable(&ep.property) {
        return Err(DomError::ReadOnly { node: ep.node.clone(), property: ep.property.clone() });
    }
    if let Some(v) = &value {
        if v.prop_type() != ty {
            return Err(DomError::TypeMismatch {
                node: ep.node.clone(),
                property: ep.property.clone(),
                expected: ty,
                found: v.prop_type().to_string(),
            });
        }
    }
    let mismatch = || DomError::TypeMismatch {
        node: ep.node.clone(),
        property: ep.property.clone(),
        expected: ty,
        found: "nothing".into(),
    };
    let kind = node.kind();
    use PropValue as V;
    match (kind, ep.property.as_str(), value) {
        ("application", "timerange", v) => {
            dom.application.timerange = match v {
                Some(V::Range(r)) => Some(r),
                _ => None,
            }
        }
        ("canvas", p, Some(V::Int(n))) => {
            let n = u32::try_from(n).ok().filter(|n| *n > 0).ok_or_else(|| DomError::TypeMismatch {
                node: ep.node.clone(),
                property: p.to_string(),
                expected: ty,
                found: n.to_string(),
            })?;
            if p == "width" {
                dom.canvas.width = n;
            } else {
                dom.canvas.height = n;
            }
        }
        ("row", _, Some(V::Number(w))) => {
            if let Some(r) = dom.canvas.rows.iter_mut().find(|r| r.id == ep.node) {
                r.weight = w;
            }
        }
        ("column", _, Some(V::Number(w))) => {
            if let Some(c) = dom.canvas.columns.iter_mut().find(|c| c.id == ep.node) {
                c.weight = w;
            }
        }
        ("plot", "title", Some(V::Text(t))) => dom.plot_mut(&ep.node).expect("node exists").title = t,
        ("axis", p, v) => {
            let a = dom.axis_mut(&ep.node).expect("node exists");
            match (p, v) {
                ("range", Some(V::Range(r))) => a.range = Some(r),
                ("range", None) => a.range = None,
                ("label", Some(V::Text(t))) => a.label = t,
                ("scale", Some(V::Scale(s))) => a.scale = s,
                ("visible", Some(V::Bool(b))) => a.visible = b,
                _ => return Err(mismatch()),
            }
        }
        ("plotElement", p, Some(v)) => {
            let e = dom.plot_elements.iter_mut().find(|e| e.id == ep.node).expect("node exists");
            match (p, v) {
                ("renderType", V::RenderType(rt)) => e.render_type = rt,
                ("color", V::Text(c)) => e.style.color = c,
                ("lineWidth", V::Number(w)) => e.style.line_width = w,
                ("symbol", V::Symbol(s)) => e.style.symbol = s,
                ("visible", V::Bool(b)) => e.visible = b,
                ("label", V::Text(t)) => e.label = t,
                _ => return Err(mismatch()),
            }
        }
        ("dataSource", "uri", Some(V::Text(u))) => {
            let d = dom.data_sources.iter_mut().find(|d| d.id == ep.node).expect("node exists");
            d.uri = u;
            d.error = None;
        }
        ("options", "autoBind", Some(V::Bool(b))) => dom.options.auto_bind = b,
        _ => return Err(mismatch()),
    }
    Ok(())
}

/// Range `v` re-expressed in the units of `current`, when convertible.
fn adapt(v: &PropValue, current: Option<&PropValue>) -> PropValue {
    match (v, current) {
        (PropValue::Range(r), Some(PropValue::Range(c))) if r.units != c.units => {
            r.convert(&c.units).map(PropValue::Range).unwrap_or_else(|_| v.clone())
        }
        _ => v.clone(),
    }
}

/// Endpoints of the binding component containing `start`, in BFS order.
pub(crate) fn component(dom: &Dom, start: &Endpoint) -> Vec<Endpoint> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut order = Vec::new();
    while let Some(ep) = queue.pop_front() {
        for b in &dom.bindings {
            let other = if b.a == ep {
                &b.b
            } else if b.b == ep {
                &b.a
            } else {
                continue;
            };
            if seen.insert(other.clone()) {
                queue.push_back(other.clone());
            }
        }
        order.push(ep);
    }
    order
}

const STYLE_PROPS: &[&str] = &["color", "lineWidth", "symbol", "visible"];

/// Assigns `value` to every endpoint bound to `start`, each exactly once,
/// then to the children of any bundle parent touched. Returns the number of
/// assignments made.
fn propagate(dom: &mut Dom, start: &Endpoint, value: Option<PropValue>) -> Result<usize, DomError> {
    let endpoints = component(dom, start);
    let mut count = 0;
    for ep in &endpoints {
        let v = match &value {
            Some(v) => Some(adapt(v, dom.get(ep)?.as_ref())),
            None => None,
        };
        write(dom, ep, v)?;
        count += 1;
    }
    for ep in &endpoints {
        if !STYLE_PROPS.contains(&ep.property.as_str()) || dom.element(&ep.node).is_none() {
            continue;
        }
        let children: Vec<String> = dom.children_of(&ep.node).map(|c| c.id.clone()).collect();
        for child in children {
            write(dom, &Endpoint::new(child, ep.property.clone()), value.clone())?;
            count += 1;
        }
    }
    Ok(count)
}

fn overlap_resembles(a: &DatumRange, b: &DatumRange) -> bool {
    let (Some(x), Some(y)) = (a.to_interval(), b.to_interval()) else { return false };
    let shorter = x.span_ms().min(y.span_ms()) as f64;
    shorter > 0.0 && x.overlap_ms(&y) as f64 >= AUTO_BIND_OVERLAP * shorter
}

fn signal(changed: bool, empty: &str) -> OpOutcome {
    OpOutcome { changed, message: (!changed).then(|| empty.to_string()), ..Default::default() }
}

/// Single writer for one DOM, with history and a dataset cache.
pub struct DomEditor {
    log: StateLog,
    resolver: Arc<dyn DataResolver>,
    cache: HashMap<String, Arc<QDataSet>>,
}

impl std::fmt::Debug for DomEditor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DomEditor").field("dom", self.dom()).field("cursor", &self.log.cursor).finish()
    }
}

impl DomEditor {
    pub fn new(resolver: Arc<dyn DataResolver>) -> DomEditor {
        DomEditor::with_dom(Dom::new(), resolver)
    }

    /// Starts from `dom` with an empty history.
    pub fn with_dom(dom: Dom, resolver: Arc<dyn DataResolver>) -> DomEditor {
        DomEditor { log: StateLog::new(dom), resolver, cache: HashMap::new() }
    }

    pub fn dom(&self) -> &Dom {
        self.log.current()
    }

    pub fn can_undo(&self) -> bool {
        self.log.cursor > 0
    }

    pub fn can_redo(&self) -> bool {
        self.log.cursor + 1 < self.log.states.len()
    }

    /// Number of snapshots held, the current one included.
    pub fn history_len(&self) -> usize {
        self.log.states.len()
    }

    /// Seeds the dataset cache, e.g. from data embedded in a `.vap` file.
    pub fn preload(&mut self, uri: impl Into<String>, ds: QDataSet) {
        self.cache.insert(uri.into(), Arc::new(ds));
    }

    fn commit(&mut self, dom: Dom) -> bool {
        if &dom == self.dom() {
            return false;
        }
        self.log.record(dom);
        true
    }

    fn load(&mut self, uri: &str) -> Result<Arc<QDataSet>, String> {
        if let Some(ds) = self.cache.get(uri) {
            return Ok(ds.clone());
        }
        let ds = Arc::new(self.resolver.resolve(uri)?);
        self.cache.insert(uri.to_string(), ds.clone());
        Ok(ds)
    }

    /// Datasets for every data source, resolving lazily.
    pub fn datasets(&mut self) -> DataMap {
        let sources: Vec<(String, String)> =
            self.dom().data_sources.iter().map(|d| (d.id.clone(), d.uri.clone())).collect();
        sources.into_iter().map(|(id, uri)| (id, self.load(&uri))).collect()
    }

    pub fn render(&mut self, format: ImageFormat) -> Result<Vec<u8>, RenderError> {
        let data = self.datasets();
        render::render_canvas(self.dom(), &data, format)
    }

    pub fn apply(&mut self, op: DomOp) -> Result<OpOutcome, DomError> {
        match op {
            DomOp::AddPlotElement { uri, placement } => self.add_plot_element(&uri, placement),
            DomOp::SetProperty { node, property, value } => {
                let ep = Endpoint::new(node, property);
                let ty = self.dom().property_type(&ep)?;
                let current = self.dom().get(&ep)?;
                let v = PropValue::from_json(ty, &value, current.as_ref()).map_err(|found| DomError::TypeMismatch {
                    node: ep.node.clone(),
                    property: ep.property.clone(),
                    expected: ty,
                    found,
                })?;
                let before = self.log.cursor;
                let n = self.set_property(&ep, v)?;
                Ok(OpOutcome { changed: self.log.cursor != before, assignments: n, ..Default::default() })
            }
            DomOp::Bind { a, b } => {
                let before = self.log.cursor;
                let (id, n) = self.bind(&a, &b)?;
                Ok(OpOutcome { changed: self.log.cursor != before, assignments: n, created: vec![id], message: None })
            }
            DomOp::Unbind { a, b } => {
                self.unbind(&a, &b)?;
                Ok(OpOutcome { changed: true, ..Default::default() })
            }
            DomOp::Undo => Ok(signal(self.undo(), "nothing to undo")),
            DomOp::Redo => Ok(signal(self.redo(), "nothing to redo")),
            DomOp::SetFocus { node } => {
                let changed = self.set_focus(&node)?;
                Ok(OpOutcome { changed, ..Default::default() })
            }
        }
    }

    /// Sets one property and everything bound to it. Returns the number of
    /// assignments.
    pub fn set_property(&mut self, ep: &Endpoint, value: PropValue) -> Result<usize, DomError> {
        let mut dom = self.dom().clone();
        let n = propagate(&mut dom, ep, Some(value))?;
        self.commit(dom);
        Ok(n)
    }

    /// Binds `a` to `b`; `b` (and everything already bound to it) takes
    /// `a`'s value. Returns the binding id and the assignments made.
    pub fn bind(&mut self, a: &Endpoint, b: &Endpoint) -> Result<(String, usize), DomError> {
        let mut dom = self.dom().clone();
        let (id, n) = bind_in(&mut dom, a, b)?;
        self.commit(dom);
        Ok((id, n))
    }

    pub fn unbind(&mut self, a: &Endpoint, b: &Endpoint) -> Result<(), DomError> {
        let mut dom = self.dom().clone();
        let before = dom.bindings.len();
        dom.bindings.retain(|x| !x.joins(a, b));
        if dom.bindings.len() == before {
            return Err(DomError::NoSuchBinding { a: a.clone(), b: b.clone() });
        }
        self.commit(dom);
        Ok(())
    }

    /// Steps back one snapshot; `false` when there is nothing to undo.
    pub fn undo(&mut self) -> bool {
        self.log.undo()
    }

    pub fn redo(&mut self) -> bool {
        self.log.redo()
    }

    pub fn set_focus(&mut self, id: &str) -> Result<bool, DomError> {
        let dom = self.dom();
        if dom.plot(id).is_none() && dom.element(id).is_none() {
            return Err(match dom.node(id) {
                Some(_) => DomError::NotFocusable(id.to_string()),
                None => DomError::UnknownNode(id.to_string()),
            });
        }
        let mut dom = dom.clone();
        dom.application.focus = Some(id.to_string());
        Ok(self.commit(dom))
    }

    /// Adds the dataset at `uri` to the canvas. A read failure still creates
    /// the nodes, with the data source marked in error.
    pub fn add_plot_element(&mut self, uri: &str, placement: Placement) -> Result<OpOutcome, DomError> {
        let diagnostics = self.resolver.validate(uri);
        if !diagnostics.is_empty() {
            return Err(DomError::InvalidUri(diagnostics));
        }
        let data = self.load(uri);
        let mut dom = self.dom().clone();
        let mut created = Vec::new();
        let placement = if dom.plots.is_empty() { Placement::Replace } else { placement };

        let (plot_id, fresh) = match (placement, dom.focused_plot().or(dom.plots.first()).map(|p| p.id.clone())) {
            (Placement::Replace, Some(target)) => {
                clear_plot(&mut dom, &target);
                (target, true)
            }
            (Placement::Overplot, Some(target)) => (target, false),
            (Placement::Below, Some(target)) => {
                let row_at = dom.plot(&target).and_then(|p| dom.canvas.rows.iter().position(|r| r.id == p.row));
                let id = new_plot(&mut dom, row_at.map(|i| i + 1), &mut created);
                (id, true)
            }
            (_, None) => (new_plot(&mut dom, None, &mut created), true),
        };

        let ds_id = dom.next_id("data");
        dom.data_sources.push(DataSourceNode {
            id: ds_id.clone(),
            uri: uri.to_string(),
            error: data.as_ref().err().cloned(),
        });
        created.push(ds_id.clone());

        let mut assignments = 0;
        let focus = match &data {
            Err(_) => push_element(&mut dom, &plot_id, &ds_id, RenderType::Series, None, None, String::new(), &mut created),
            Ok(ds) => {
                let rt = render_type_default(ds);
                let label = ds.label().or(ds.name()).unwrap_or("").to_string();
                let focus = push_element(&mut dom, &plot_id, &ds_id, rt, None, None, label, &mut created);
                if let (RenderType::Series, Some(b)) = (rt, ds.bundle()) {
                    for j in 0..b.len() {
                        let comp = ds.bundle_component(j);
                        let label = comp
                            .and_then(|p| p.get(&crate::qdataset::PropertyKey::Label).or(p.get(&crate::qdataset::PropertyKey::Name)))
                            .and_then(|v| v.as_text())
                            .unwrap_or("")
                            .to_string();
                        push_element(&mut dom, &plot_id, &ds_id, rt, Some(focus.clone()), Some(j), label, &mut created);
                    }
                }
                let mut plan = plan_axes(ds, rt);
                if let Some(Ok(iv)) = parse_uri(uri).ok().and_then(|u| u.timerange()) {
                    if let Some(x) = plan.x.as_mut().filter(|x| x.range.units.is_time()) {
                        x.range = DatumRange::from_interval(&iv).convert(&x.range.units).unwrap_or(x.range.clone());
                    }
                }
                assignments += apply_plan(&mut dom, &plot_id, &plan, fresh, rt)?;
                assignments += auto_bind(&mut dom, &plot_id)?;
                focus
            }
        };
        dom.application.focus = Some(focus);
        debug_assert!(dom.check().is_ok(), "{:?}", dom.check());
        let changed = self.commit(dom);
        Ok(OpOutcome { changed, assignments, created, message: data.err() })
    }
}

fn bind_in(dom: &mut Dom, a: &Endpoint, b: &Endpoint) -> Result<(String, usize), DomError> {
    let (ta, tb) = (dom.property_type(a)?, dom.property_type(b)?);
    if a == b {
        return Err(DomError::SelfBinding(a.clone()));
    }
    let mismatch = || DomError::BindMismatch { a: a.clone(), b: b.clone(), a_type: ta, b_type: tb };
    if ta != tb {
        return Err(mismatch());
    }
    if let (Some(PropValue::Range(x)), Some(PropValue::Range(y))) = (dom.get(a)?, dom.get(b)?) {
        if !x.units.is_convertible_to(&y.units) {
            return Err(mismatch());
        }
    }
    for e in [a, b] {
        let node = dom.node(&e.node).expect("checked");
        if !node.is_writable(&e.property) {
            return Err(DomError::ReadOnly { node: e.node.clone(), property: e.property.clone() });
        }
    }
    if dom.bindings.iter().any(|x| x.joins(a, b)) {
        return Err(DomError::DuplicateBinding { a: a.clone(), b: b.clone() });
    }
    let id = dom.next_id("binding");
    dom.bindings.push(Binding { id: id.clone(), a: a.clone(), b: b.clone() });
    let value = dom.get(a)?;
    let n = propagate(dom, a, value)?;
    Ok((id, n))
}

/// Removes a plot's elements, their unshared data sources, and bindings
/// that touched them; resets the axes.
fn clear_plot(dom: &mut Dom, plot: &str) {
    let removed: BTreeSet<String> = dom.elements_of(plot).map(|e| e.id.clone()).collect();
    dom.plot_elements.retain(|e| !removed.contains(&e.id));
    let used: BTreeSet<String> = dom.plot_elements.iter().map(|e| e.data.clone()).collect();
    let dropped: BTreeSet<String> =
        dom.data_sources.iter().filter(|d| !used.contains(&d.id)).map(|d| d.id.clone()).collect();
    dom.data_sources.retain(|d| used.contains(&d.id));
    dom.bindings.retain(|b| !removed.iter().chain(&dropped).any(|id| b.touches(id)));
    if let Some(p) = dom.plot_mut(plot) {
        for a in [&mut p.yaxis, &mut p.zaxis] {
            a.range = None;
            a.label.clear();
            a.scale = AxisScale::Linear;
        }
    }
}

/// Adds a row and a plot in it (and the first column if needed).
fn new_plot(dom: &mut Dom, row_index: Option<usize>, created: &mut Vec<String>) -> String {
    if dom.canvas.columns.is_empty() {
        let id = dom.next_id("column");
        dom.canvas.columns.push(Column { id: id.clone(), weight: 1.0 });
        created.push(id);
    }
    let row = dom.next_id("row");
    let at = row_index.unwrap_or(dom.canvas.rows.len()).min(dom.canvas.rows.len());
    dom.canvas.rows.insert(at, Row { id: row.clone(), weight: 1.0 });
    created.push(row.clone());
    let id = dom.next_id("plot");
    let n = id.trim_start_matches("plot_").to_string();
    let mut zaxis = Axis::new(format!("zaxis_{n}"));
    zaxis.visible = false;
    let plot = Plot {
        id: id.clone(),
        title: String::new(),
        row,
        column: dom.canvas.columns[0].id.clone(),
        xaxis: Axis::new(format!("xaxis_{n}")),
        yaxis: Axis::new(format!("yaxis_{n}")),
        zaxis,
    };
    dom.plots.push(plot);
    created.push(id.clone());
    id
}

#[allow(clippy::too_many_arguments)]
fn push_element(
    dom: &mut Dom,
    plot: &str,
    data: &str,
    rt: RenderType,
    parent: Option<String>,
    component: Option<usize>,
    label: String,
    created: &mut Vec<String>,
) -> String {
    let id = dom.next_id("plotElement");
    let mut style = Style::default();
    if let Some(j) = component {
        style.color = PALETTE[j % PALETTE.len()].to_string();
    }
    dom.plot_elements.push(PlotElement {
        id: id.clone(),
        plot: plot.to_string(),
        data: data.to_string(),
        render_type: rt,
        style,
        visible: true,
        label,
        parent,
        component,
    });
    created.push(id.clone());
    id
}

/// Applies derived axis settings. On overplot only unset axes change. A
/// new x range is pushed through any bindings of the x axis.
fn apply_plan(dom: &mut Dom, plot_id: &str, plan: &AxisPlan, fresh: bool, rt: RenderType) -> Result<usize, DomError> {
    let plot = dom.plot_mut(plot_id).expect("plot exists");
    if fresh {
        plot.title = plan.title.clone();
        plot.zaxis.visible = rt == RenderType::Spectrogram;
    } else if rt == RenderType::Spectrogram {
        plot.zaxis.visible = true;
    }
    let mut new_x = None;
    for (axis, setup, is_x) in [
        (&mut plot.xaxis, &plan.x, true),
        (&mut plot.yaxis, &plan.y, false),
        (&mut plot.zaxis, &plan.z, false),
    ] {
        let Some(s) = setup else { continue };
        if !fresh && axis.range.is_some() {
            continue;
        }
        axis.scale = s.scale;
        axis.label = s.label.clone();
        if is_x {
            new_x = Some(s.range.clone());
        } else {
            axis.range = Some(s.range.clone());
        }
    }
    let xid = dom.plot(plot_id).expect("plot exists").xaxis.id.clone();
    match new_x {
        Some(r) => propagate(dom, &Endpoint::new(xid, "range"), Some(PropValue::Range(r))),
        None => Ok(0),
    }
}

/// Binds the plot's x axis to the application time range when both are
/// time ranges that overlap enough; the first time axis defines it.
fn auto_bind(dom: &mut Dom, plot_id: &str) -> Result<usize, DomError> {
    if !dom.options.auto_bind {
        return Ok(0);
    }
    let plot = dom.plot(plot_id).expect("plot exists");
    let Some(x) = plot.xaxis.range.clone().filter(|r| r.units.is_time()) else { return Ok(0) };
    let app = Endpoint::new(APPLICATION_ID, "timerange");
    let xe = Endpoint::new(plot.xaxis.id.clone(), "range");
    if component(dom, &app).contains(&xe) {
        return Ok(0);
    }
    match dom.application.timerange.clone() {
        None => {
            dom.application.timerange = Some(x);
            Ok(bind_in(dom, &app, &xe)?.1 + 1)
        }
        Some(r) if overlap_resembles(&r, &x) => Ok(bind_in(dom, &app, &xe)?.1),
        Some(_) => Ok(0),
    }
}
