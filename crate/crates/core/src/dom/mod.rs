//! Application state as a tree of typed nodes.
//!
//! A [`Dom`] holds the canvas layout, plots and their axes, plot elements,
//! data sources, bindings and options. Every node has a unique id, and every
//! property is addressed as `(node id, property name)`. Mutation goes through
//! [`DomEditor`], which keeps the undo history and enforces bindings.

mod editor;
mod vap;

pub use editor::{DataResolver, DomEditor, DomOp, OpOutcome, HISTORY_LIMIT};
pub use vap::{load_vap, save_vap, save_vap_with, LoadedVap, PixelBox, VapOptions};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qdataset::DatumRange;
use crate::uri::Diagnostic;

pub const APPLICATION_ID: &str = "application";
pub const CANVAS_ID: &str = "canvas_0";
pub const OPTIONS_ID: &str = "options";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomError {
    #[error("no node with id {0:?}")]
    UnknownNode(String),
    #[error("{node} has no property {property:?}")]
    UnknownProperty { node: String, property: String },
    #[error("{node}.{property} is read-only")]
    ReadOnly { node: String, property: String },
    #[error("{node}.{property} expects {expected}, got {found}")]
    TypeMismatch { node: String, property: String, expected: PropType, found: String },
    #[error("cannot bind {a} ({a_type}) to {b} ({b_type})")]
    BindMismatch { a: Endpoint, b: Endpoint, a_type: PropType, b_type: PropType },
    #[error("{a} and {b} are already bound")]
    DuplicateBinding { a: Endpoint, b: Endpoint },
    #[error("{0} cannot be bound to itself")]
    SelfBinding(Endpoint),
    #[error("no binding between {a} and {b}")]
    NoSuchBinding { a: Endpoint, b: Endpoint },
    #[error("{0} is neither a plot nor a plot element")]
    NotFocusable(String),
    #[error("invalid URI: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidUri(Vec<Diagnostic>),
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}

impl DomError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> DomError {
        DomError::Schema { path: path.into(), message: message.into() }
    }
}

/// Semantic property types; bindings connect properties of equal type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum PropType {
    Text,
    Number,
    Int,
    Bool,
    Range,
    RenderType,
    Scale,
    Symbol,
    Ref,
}

impl PropType {
    /// The `type` attribute used in `.vap` files.
    pub fn as_str(self) -> &'static str {
        match self {
            PropType::Text => "text",
            PropType::Number => "number",
            PropType::Int => "int",
            PropType::Bool => "bool",
            PropType::Range => "range",
            PropType::RenderType => "renderType",
            PropType::Scale => "scale",
            PropType::Symbol => "symbol",
            PropType::Ref => "ref",
        }
    }
}

impl fmt::Display for PropType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

macro_rules! text_enum {
    ($(#[$m:meta])* $name:ident { $($var:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "lowercase")]
        pub enum $name { $($var),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$var),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$var => $text),+ }
            }

            pub fn parse(s: &str) -> Option<$name> {
                match s.to_ascii_lowercase().as_str() { $($text => Some($name::$var),)+ _ => None }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

text_enum!(
    /// How a plot element draws its data.
    RenderType { Series => "series", Scatter => "scatter", Spectrogram => "spectrogram", Histogram => "histogram" }
);
text_enum!(AxisScale { Linear => "linear", Log => "log" });
text_enum!(Symbol { None => "none", Circle => "circle", Square => "square", Cross => "cross" });
text_enum!(
    /// Where `add_plot_element` puts the new element.
    Placement { Replace => "replace", Below => "below", Overplot => "overplot" }
);

impl Default for Placement {
    fn default() -> Self {
        Placement::Replace
    }
}

/// One side of a binding.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Endpoint {
    pub node: String,
    pub property: String,
}

impl Endpoint {
    pub fn new(node: impl Into<String>, property: impl Into<String>) -> Endpoint {
        Endpoint { node: node.into(), property: property.into() }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.node, self.property)
    }
}

/// A typed property value.
#[derive(Debug, Clone, PartialEq)]
pub enum PropValue {
    Text(String),
    Number(f64),
    Int(i64),
    Bool(bool),
    Range(DatumRange),
    RenderType(RenderType),
    Scale(AxisScale),
    Symbol(Symbol),
    Ref(String),
}

impl PropValue {
    pub fn prop_type(&self) -> PropType {
        match self {
            PropValue::Text(_) => PropType::Text,
            PropValue::Number(_) => PropType::Number,
            PropValue::Int(_) => PropType::Int,
            PropValue::Bool(_) => PropType::Bool,
            PropValue::Range(_) => PropType::Range,
            PropValue::RenderType(_) => PropType::RenderType,
            PropValue::Scale(_) => PropType::Scale,
            PropValue::Symbol(_) => PropType::Symbol,
            PropValue::Ref(_) => PropType::Ref,
        }
    }

    /// Text form used in `.vap` files; [`PropValue::parse`] inverts it.
    pub fn to_text(&self) -> String {
        match self {
            PropValue::Text(s) | PropValue::Ref(s) => s.clone(),
            PropValue::Number(v) => v.to_string(),
            PropValue::Int(v) => v.to_string(),
            PropValue::Bool(v) => v.to_string(),
            PropValue::Range(r) => r.to_string(),
            PropValue::RenderType(v) => v.to_string(),
            PropValue::Scale(v) => v.to_string(),
            PropValue::Symbol(v) => v.to_string(),
        }
    }

    pub fn parse(ty: PropType, text: &str) -> Result<PropValue, String> {
        let bad = |what: &str| format!("{text:?} is not {what}");
        Ok(match ty {
            PropType::Text => PropValue::Text(text.to_string()),
            PropType::Ref => PropValue::Ref(text.to_string()),
            PropType::Number => PropValue::Number(text.trim().parse().map_err(|_| bad("a number"))?),
            PropType::Int => PropValue::Int(text.trim().parse().map_err(|_| bad("an integer"))?),
            PropType::Bool => PropValue::Bool(text.trim().parse().map_err(|_| bad("true or false"))?),
            PropType::Range => PropValue::Range(DatumRange::parse(text)?),
            PropType::RenderType => PropValue::RenderType(RenderType::parse(text).ok_or_else(|| bad("a render type"))?),
            PropType::Scale => PropValue::Scale(AxisScale::parse(text).ok_or_else(|| bad("an axis scale"))?),
            PropType::Symbol => PropValue::Symbol(Symbol::parse(text).ok_or_else(|| bad("a symbol"))?),
        })
    }

    /// Coerces a JSON value (as sent in session operations). Strings are
    /// parsed as text forms; ranges also accept `[min, max]`, taking units
    /// from `current`.
    pub fn from_json(ty: PropType, v: &serde_json::Value, current: Option<&PropValue>) -> Result<PropValue, String> {
        use serde_json::Value;
        match (ty, v) {
            (PropType::Text | PropType::Ref, Value::String(s)) => PropValue::parse(ty, s),
            (PropType::Number, Value::Number(n)) => n.as_f64().map(PropValue::Number).ok_or_else(|| "bad number".into()),
            (PropType::Int, Value::Number(n)) => n.as_i64().map(PropValue::Int).ok_or_else(|| format!("{n} is not an integer")),
            (PropType::Bool, Value::Bool(b)) => Ok(PropValue::Bool(*b)),
            (PropType::Range, Value::Array(a)) if a.len() == 2 => {
                let (Some(min), Some(max)) = (a[0].as_f64(), a[1].as_f64()) else {
                    return Err("range bounds must be numbers".into());
                };
                let units = match current {
                    Some(PropValue::Range(r)) => r.units.clone(),
                    _ => Default::default(),
                };
                DatumRange::new(min, max, units).map(PropValue::Range)
            }
            (_, Value::String(s)) if ty != PropType::Text => PropValue::parse(ty, s),
            (_, other) => Err(format!("{other} is not a valid {ty}")),
        }
    }
}

impl fmt::Display for PropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Application {
    pub timerange: Option<DatumRange>,
    pub focus: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Canvas {
    pub width: u32,
    pub height: u32,
    pub rows: Vec<Row>,
    pub columns: Vec<Column>,
}

impl Default for Canvas {
    fn default() -> Self {
        Canvas { width: 800, height: 600, rows: Vec::new(), columns: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub id: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub id: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub id: String,
    /// `None` until data arrives; the renderer then autoranges.
    pub range: Option<DatumRange>,
    pub label: String,
    pub scale: AxisScale,
    pub visible: bool,
}

impl Axis {
    pub fn new(id: impl Into<String>) -> Axis {
        Axis { id: id.into(), range: None, label: String::new(), scale: AxisScale::Linear, visible: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub id: String,
    pub title: String,
    pub row: String,
    pub column: String,
    pub xaxis: Axis,
    pub yaxis: Axis,
    pub zaxis: Axis,
}

impl Plot {
    pub fn axes(&self) -> [&Axis; 3] {
        [&self.xaxis, &self.yaxis, &self.zaxis]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub color: String,
    pub line_width: f64,
    pub symbol: Symbol,
}

impl Default for Style {
    fn default() -> Self {
        Style { color: "#000000".into(), line_width: 1.0, symbol: Symbol::None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotElement {
    pub id: String,
    pub plot: String,
    pub data: String,
    pub render_type: RenderType,
    pub style: Style,
    pub visible: bool,
    pub label: String,
    /// The controlling element of a bundle's components.
    pub parent: Option<String>,
    /// Bundle component drawn by this element.
    pub component: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataSourceNode {
    pub id: String,
    pub uri: String,
    /// Set when the last read failed.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub id: String,
    pub a: Endpoint,
    pub b: Endpoint,
}

impl Binding {
    pub fn joins(&self, x: &Endpoint, y: &Endpoint) -> bool {
        (&self.a == x && &self.b == y) || (&self.a == y && &self.b == x)
    }

    pub fn touches(&self, node: &str) -> bool {
        self.a.node == node || self.b.node == node
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub auto_bind: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { auto_bind: true }
    }
}

/// Borrowed view of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomNode<'a> {
    Application(&'a Application),
    Canvas(&'a Canvas),
    Row(&'a Row),
    Column(&'a Column),
    Plot(&'a Plot),
    Axis(&'a Axis),
    PlotElement(&'a PlotElement),
    DataSource(&'a DataSourceNode),
    Binding(&'a Binding),
    Options(&'a Options),
}

/// Property table: `(name, type, writable)` per node variant.
pub(crate) fn schema_of(kind: &str) -> &'static [(&'static str, PropType, bool)] {
    use PropType::*;
    match kind {
        "application" => &[("focus", Ref, false), ("timerange", Range, true)],
        "canvas" => &[("height", Int, true), ("width", Int, true)],
        "row" | "column" => &[("weight", Number, true)],
        "plot" => &[("column", Ref, false), ("row", Ref, false), ("title", Text, true)],
        "axis" => &[("label", Text, true), ("range", Range, true), ("scale", Scale, true), ("visible", Bool, true)],
        "plotElement" => &[
            ("color", Text, true),
            ("component", Int, false),
            ("data", Ref, false),
            ("label", Text, true),
            ("lineWidth", Number, true),
            ("parent", Ref, false),
            ("plot", Ref, false),
            ("renderType", RenderType, true),
            ("symbol", Symbol, true),
            ("visible", Bool, true),
        ],
        "dataSource" => &[("error", Text, false), ("uri", Text, true)],
        "binding" => &[
            ("a.node", Ref, false),
            ("a.property", Text, false),
            ("b.node", Ref, false),
            ("b.property", Text, false),
        ],
        "options" => &[("autoBind", Bool, true)],
        _ => &[],
    }
}

fn schema(node: &DomNode<'_>) -> &'static [(&'static str, PropType, bool)] {
    schema_of(node.kind())
}

impl<'a> DomNode<'a> {
    pub fn kind(&self) -> &'static str {
        match self {
            DomNode::Application(_) => "application",
            DomNode::Canvas(_) => "canvas",
            DomNode::Row(_) => "row",
            DomNode::Column(_) => "column",
            DomNode::Plot(_) => "plot",
            DomNode::Axis(_) => "axis",
            DomNode::PlotElement(_) => "plotElement",
            DomNode::DataSource(_) => "dataSource",
            DomNode::Binding(_) => "binding",
            DomNode::Options(_) => "options",
        }
    }

    /// Declared property names, sorted.
    pub fn property_names(&self) -> impl Iterator<Item = &'static str> {
        schema(self).iter().map(|(n, _, _)| *n)
    }

    pub fn property_type(&self, name: &str) -> Option<PropType> {
        schema(self).iter().find(|(n, _, _)| *n == name).map(|(_, t, _)| *t)
    }

    pub fn is_writable(&self, name: &str) -> bool {
        schema(self).iter().any(|(n, _, w)| *n == name && *w)
    }

    /// Current value; `None` for unset optional properties.
    pub fn get(&self, name: &str) -> Option<PropValue> {
        use PropValue as V;
        match (self, name) {
            (DomNode::Application(a), "focus") => a.focus.clone().map(V::Ref),
            (DomNode::Application(a), "timerange") => a.timerange.clone().map(V::Range),
            (DomNode::Canvas(c), "width") => Some(V::Int(c.width as i64)),
            (DomNode::Canvas(c), "height") => Some(V::Int(c.height as i64)),
            (DomNode::Row(r), "weight") => Some(V::Number(r.weight)),
            (DomNode::Column(c), "weight") => Some(V::Number(c.weight)),
            (DomNode::Plot(p), "title") => Some(V::Text(p.title.clone())),
            (DomNode::Plot(p), "row") => Some(V::Ref(p.row.clone())),
            (DomNode::Plot(p), "column") => Some(V::Ref(p.column.clone())),
            (DomNode::Axis(a), "range") => a.range.clone().map(V::Range),
            (DomNode::Axis(a), "label") => Some(V::Text(a.label.clone())),
            (DomNode::Axis(a), "scale") => Some(V::Scale(a.scale)),
            (DomNode::Axis(a), "visible") => Some(V::Bool(a.visible)),
            (DomNode::PlotElement(e), "plot") => Some(V::Ref(e.plot.clone())),
            (DomNode::PlotElement(e), "data") => Some(V::Ref(e.data.clone())),
            (DomNode::PlotElement(e), "renderType") => Some(V::RenderType(e.render_type)),
            (DomNode::PlotElement(e), "color") => Some(V::Text(e.style.color.clone())),
            (DomNode::PlotElement(e), "lineWidth") => Some(V::Number(e.style.line_width)),
            (DomNode::PlotElement(e), "symbol") => Some(V::Symbol(e.style.symbol)),
            (DomNode::PlotElement(e), "visible") => Some(V::Bool(e.visible)),
            (DomNode::PlotElement(e), "label") => Some(V::Text(e.label.clone())),
            (DomNode::PlotElement(e), "parent") => e.parent.clone().map(V::Ref),
            (DomNode::PlotElement(e), "component") => e.component.map(|c| V::Int(c as i64)),
            (DomNode::DataSource(d), "uri") => Some(V::Text(d.uri.clone())),
            (DomNode::DataSource(d), "error") => d.error.clone().map(V::Text),
            (DomNode::Binding(b), "a.node") => Some(V::Ref(b.a.node.clone())),
            (DomNode::Binding(b), "a.property") => Some(V::Text(b.a.property.clone())),
            (DomNode::Binding(b), "b.node") => Some(V::Ref(b.b.node.clone())),
            (DomNode::Binding(b), "b.property") => Some(V::Text(b.b.property.clone())),
            (DomNode::Options(o), "autoBind") => Some(V::Bool(o.auto_bind)),
            _ => None,
        }
    }
}

/// The whole application state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dom {
    pub application: Application,
    pub canvas: Canvas,
    pub plots: Vec<Plot>,
    pub plot_elements: Vec<PlotElement>,
    pub data_sources: Vec<DataSourceNode>,
    pub bindings: Vec<Binding>,
    pub options: Options,
}

impl Dom {
    pub fn new() -> Dom {
        Dom::default()
    }

    /// Every node in document order.
    pub fn nodes(&self) -> Vec<(&str, DomNode<'_>)> {
        let mut out: Vec<(&str, DomNode<'_>)> = vec![
            (APPLICATION_ID, DomNode::Application(&self.application)),
            (CANVAS_ID, DomNode::Canvas(&self.canvas)),
        ];
        out.extend(self.canvas.rows.iter().map(|r| (r.id.as_str(), DomNode::Row(r))));
        out.extend(self.canvas.columns.iter().map(|c| (c.id.as_str(), DomNode::Column(c))));
        for p in &self.plots {
            out.push((p.id.as_str(), DomNode::Plot(p)));
            out.extend(p.axes().into_iter().map(|a| (a.id.as_str(), DomNode::Axis(a))));
        }
        out.extend(self.plot_elements.iter().map(|e| (e.id.as_str(), DomNode::PlotElement(e))));
        out.extend(self.data_sources.iter().map(|d| (d.id.as_str(), DomNode::DataSource(d))));
        out.extend(self.bindings.iter().map(|b| (b.id.as_str(), DomNode::Binding(b))));
        out.push((OPTIONS_ID, DomNode::Options(&self.options)));
        out
    }

    pub fn node(&self, id: &str) -> Option<DomNode<'_>> {
        match id {
            APPLICATION_ID => return Some(DomNode::Application(&self.application)),
            CANVAS_ID => return Some(DomNode::Canvas(&self.canvas)),
            OPTIONS_ID => return Some(DomNode::Options(&self.options)),
            _ => {}
        }
        self.nodes().into_iter().find(|(n, _)| *n == id).map(|(_, node)| node)
    }

    pub fn get(&self, ep: &Endpoint) -> Result<Option<PropValue>, DomError> {
        let node = self.node(&ep.node).ok_or_else(|| DomError::UnknownNode(ep.node.clone()))?;
        if node.property_type(&ep.property).is_none() {
            return Err(DomError::UnknownProperty { node: ep.node.clone(), property: ep.property.clone() });
        }
        Ok(node.get(&ep.property))
    }

    pub fn property_type(&self, ep: &Endpoint) -> Result<PropType, DomError> {
        let node = self.node(&ep.node).ok_or_else(|| DomError::UnknownNode(ep.node.clone()))?;
        node.property_type(&ep.property)
            .ok_or_else(|| DomError::UnknownProperty { node: ep.node.clone(), property: ep.property.clone() })
    }

    pub fn plot(&self, id: &str) -> Option<&Plot> {
        self.plots.iter().find(|p| p.id == id)
    }

    pub fn plot_mut(&mut self, id: &str) -> Option<&mut Plot> {
        self.plots.iter_mut().find(|p| p.id == id)
    }

    pub fn element(&self, id: &str) -> Option<&PlotElement> {
        self.plot_elements.iter().find(|e| e.id == id)
    }

    pub fn data_source(&self, id: &str) -> Option<&DataSourceNode> {
        self.data_sources.iter().find(|d| d.id == id)
    }

    pub fn axis_mut(&mut self, id: &str) -> Option<&mut Axis> {
        self.plots
            .iter_mut()
            .flat_map(|p| [&mut p.xaxis, &mut p.yaxis, &mut p.zaxis])
            .find(|a| a.id == id)
    }

    pub fn elements_of<'a>(&'a self, plot: &'a str) -> impl Iterator<Item = &'a PlotElement> + 'a {
        self.plot_elements.iter().filter(move |e| e.plot == plot)
    }

    pub fn children_of<'a>(&'a self, element: &'a str) -> impl Iterator<Item = &'a PlotElement> + 'a {
        self.plot_elements.iter().filter(move |e| e.parent.as_deref() == Some(element))
    }

    /// The plot holding focus, directly or through one of its elements.
    pub fn focused_plot(&self) -> Option<&Plot> {
        let f = self.application.focus.as_deref()?;
        match self.element(f) {
            Some(e) => self.plot(&e.plot),
            None => self.plot(f),
        }
    }

    /// URI shown for the focused plot or element.
    pub fn current_uri(&self) -> Option<&str> {
        let f = self.application.focus.as_deref()?;
        let element = match self.element(f) {
            Some(e) => e,
            None => self.elements_of(f).find(|e| e.parent.is_none())?,
        };
        self.data_source(&element.data).map(|d| d.uri.as_str())
    }

    /// Smallest unused `prefix_N` id.
    pub fn next_id(&self, prefix: &str) -> String {
        let n = self
            .nodes()
            .iter()
            .filter_map(|(id, _)| id.strip_prefix(prefix)?.strip_prefix('_')?.parse::<u64>().ok())
            .max()
            .map_or(0, |m| m + 1);
        format!("{prefix}_{n}")
    }

    /// Checks id uniqueness and that every reference resolves.
    pub fn check(&self) -> Result<(), DomError> {
        let mut ids = BTreeSet::new();
        for (id, _) in self.nodes() {
            if !ids.insert(id) {
                return Err(DomError::schema(id, "duplicate id"));
            }
        }
        let missing = |owner: &str, what: &str, target: &str| -> Result<(), DomError> {
            if ids.contains(target) {
                Ok(())
            } else {
                Err(DomError::schema(owner, format!("{what} refers to missing node {target:?}")))
            }
        };
        if let Some(f) = &self.application.focus {
            missing(APPLICATION_ID, "focus", f)?;
            if self.plot(f).is_none() && self.element(f).is_none() {
                return Err(DomError::NotFocusable(f.clone()));
            }
        }
        for p in &self.plots {
            if !self.canvas.rows.iter().any(|r| r.id == p.row) {
                return Err(DomError::schema(&p.id, format!("row refers to missing row {:?}", p.row)));
            }
            if !self.canvas.columns.iter().any(|c| c.id == p.column) {
                return Err(DomError::schema(&p.id, format!("column refers to missing column {:?}", p.column)));
            }
        }
        for e in &self.plot_elements {
            if self.plot(&e.plot).is_none() {
                return Err(DomError::schema(&e.id, format!("plot refers to missing plot {:?}", e.plot)));
            }
            if self.data_source(&e.data).is_none() {
                return Err(DomError::schema(&e.id, format!("data refers to missing data source {:?}", e.data)));
            }
            if let Some(parent) = &e.parent {
                if self.element(parent).is_none() {
                    return Err(DomError::schema(&e.id, format!("parent refers to missing element {parent:?}")));
                }
            }
        }
        for b in &self.bindings {
            for ep in [&b.a, &b.b] {
                missing(&b.id, "endpoint", &ep.node)?;
                self.property_type(ep)?;
            }
        }
        Ok(())
    }
}
