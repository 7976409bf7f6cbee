//! `.vap` files: the DOM as canonical XML.
//!
//! Attributes are sorted, indentation is two spaces, and every node property
//! is a `<property name type value/>` child, sorted by name. Unset optional
//! properties are omitted. Saving the result of loading a saved file gives
//! the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use quick_xml::events::Event;
use quick_xml::Reader;

use super::*;
use crate::datasource::{read_qds_str, write_qds};
use crate::qdataset::QDataSet;

pub const VAP_VERSION: &str = "1.0";

/// Pixel rectangle of a plot's data area.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PixelBox {
    pub x: i64,
    pub y: i64,
    pub width: i64,
    pub height: i64,
}

impl fmt::Display for PixelBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.x, self.y, self.width, self.height)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VapOptions<'a> {
    /// Datasets to embed, keyed by URI.
    pub data: Option<&'a BTreeMap<String, Arc<QDataSet>>>,
    /// Plot data-area boxes to annotate, keyed by plot id. Ignored on load.
    pub pixel_boxes: Option<&'a BTreeMap<String, PixelBox>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedVap {
    pub dom: Dom,
    /// Embedded datasets, keyed by URI.
    pub data: BTreeMap<String, QDataSet>,
}

fn esc(s: &str, attr: bool) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' if attr => out.push_str("&quot;"),
            '\n' if attr => out.push_str("&#10;"),
            '\r' if attr => out.push_str("&#13;"),
            '\t' if attr => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

/// Minimal element tree used both for writing and for reading.
#[derive(Debug, Clone, Default)]
struct El {
    name: String,
    attrs: BTreeMap<String, String>,
    children: Vec<El>,
    text: String,
}

impl El {
    fn new(name: &str) -> El {
        El { name: name.into(), ..Default::default() }
    }

    fn attr(mut self, k: &str, v: &str) -> El {
        self.attrs.insert(k.into(), v.into());
        self
    }

    fn child(mut self, c: El) -> El {
        self.children.push(c);
        self
    }

    fn write(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        let _ = write!(out, "{pad}<{}", self.name);
        for (k, v) in &self.attrs {
            let _ = write!(out, " {k}=\"{}\"", esc(v, true));
        }
        if self.children.is_empty() && self.text.is_empty() {
            out.push_str("/>\n");
        } else if self.children.is_empty() {
            let _ = writeln!(out, ">{}</{}>", esc(&self.text, false), self.name);
        } else {
            out.push_str(">\n");
            for c in &self.children {
                c.write(out, depth + 1);
            }
            let _ = writeln!(out, "{pad}</{}>", self.name);
        }
    }
}

fn property(name: &str, ty: PropType, value: &str) -> El {
    El::new("property").attr("name", name).attr("type", ty.as_str()).attr("value", value)
}

/// Element for a node: `id`, extra attributes, then its set properties.
fn node_el(tag: &str, id: Option<&str>, node: DomNode<'_>, extra: Vec<El>) -> El {
    let mut el = El::new(tag);
    if let Some(id) = id {
        el = el.attr("id", id);
    }
    let mut props: Vec<(String, El)> = node
        .property_names()
        .filter_map(|n| {
            let v = node.get(n)?;
            Some((n.to_string(), property(n, v.prop_type(), &v.to_text())))
        })
        .collect();
    props.extend(extra.into_iter().map(|e| (e.attrs["name"].clone(), e)));
    props.sort_by(|a, b| a.0.cmp(&b.0));
    el.children.extend(props.into_iter().map(|(_, e)| e));
    el
}

fn container(tag: &str, items: Vec<El>) -> El {
    let mut el = El::new(tag);
    el.children = items;
    el
}

pub fn save_vap(dom: &Dom) -> String {
    save_vap_with(dom, &VapOptions::default())
}

pub fn save_vap_with(dom: &Dom, opts: &VapOptions<'_>) -> String {
    let app = node_el("application", Some(APPLICATION_ID), DomNode::Application(&dom.application), Vec::new());
    let rows = dom.canvas.rows.iter().map(|r| node_el("row", Some(&r.id), DomNode::Row(r), Vec::new())).collect();
    let cols = dom.canvas.columns.iter().map(|c| node_el("column", Some(&c.id), DomNode::Column(c), Vec::new())).collect();
    let canvas = node_el("canvas", Some(CANVAS_ID), DomNode::Canvas(&dom.canvas), Vec::new())
        .child(container("rows", rows))
        .child(container("columns", cols));
    let plots = dom
        .plots
        .iter()
        .map(|p| {
            let extra = opts
                .pixel_boxes
                .and_then(|b| b.get(&p.id))
                .map(|b| vec![property("pixelBox", PropType::Text, &b.to_string())])
                .unwrap_or_default();
            let mut el = node_el("plot", Some(&p.id), DomNode::Plot(p), extra);
            for (role, a) in ["x", "y", "z"].iter().zip(p.axes()) {
                el = el.child(node_el("axis", Some(&a.id), DomNode::Axis(a), Vec::new()).attr("role", role));
            }
            el
        })
        .collect();
    let elements = dom
        .plot_elements
        .iter()
        .map(|e| node_el("plotElement", Some(&e.id), DomNode::PlotElement(e), Vec::new()))
        .collect();
    let sources = dom
        .data_sources
        .iter()
        .map(|d| node_el("dataSource", Some(&d.id), DomNode::DataSource(d), Vec::new()))
        .collect();
    let bindings = dom.bindings.iter().map(|b| node_el("binding", Some(&b.id), DomNode::Binding(b), Vec::new())).collect();
    let options = node_el("options", Some(OPTIONS_ID), DomNode::Options(&dom.options), Vec::new());

    let mut root = El::new("vap")
        .attr("version", VAP_VERSION)
        .child(app)
        .child(canvas)
        .child(container("plots", plots))
        .child(container("plotElements", elements))
        .child(container("dataSources", sources))
        .child(container("bindings", bindings))
        .child(options);
    if let Some(data) = opts.data {
        let sets = data
            .iter()
            .map(|(uri, ds)| {
                let mut el = El::new("dataset").attr("uri", uri);
                el.text = write_qds(ds).trim_end().to_string();
                el
            })
            .collect();
        root = root.child(container("data", sets));
    }
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    root.write(&mut out, 0);
    out
}

fn parse_tree(text: &str) -> Result<El, DomError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut stack: Vec<El> = Vec::new();
    let mut root: Option<El> = None;
    let xml_err = |e: &dyn fmt::Display, pos: u64| DomError::schema(format!("byte {pos}"), e.to_string());
    loop {
        let pos = reader.buffer_position();
        let ev = reader.read_event().map_err(|e| xml_err(&e, pos))?;
        let open = |e: &quick_xml::events::BytesStart<'_>| -> Result<El, DomError> {
            let mut el = El::new(&String::from_utf8_lossy(e.name().as_ref()));
            for a in e.attributes() {
                let a = a.map_err(|err| xml_err(&err, pos))?;
                let v = a.unescape_value().map_err(|err| xml_err(&err, pos))?;
                el.attrs.insert(String::from_utf8_lossy(a.key.as_ref()).into_owned(), v.into_owned());
            }
            Ok(el)
        };
        match ev {
            Event::Start(e) => stack.push(open(&e)?),
            Event::Empty(e) => {
                let el = open(&e)?;
                match stack.last_mut() {
                    Some(p) => p.children.push(el),
                    None => root = Some(el),
                }
            }
            Event::End(_) => {
                let el = stack.pop().expect("reader checks nesting");
                match stack.last_mut() {
                    Some(p) => p.children.push(el),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                if let Some(p) = stack.last_mut() {
                    p.text.push_str(&t.unescape().map_err(|e| xml_err(&e, pos))?);
                }
            }
            Event::CData(t) => {
                if let Some(p) = stack.last_mut() {
                    p.text.push_str(&String::from_utf8_lossy(&t));
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !stack.is_empty() {
        return Err(DomError::schema(format!("/{}", stack[0].name), "unclosed element"));
    }
    root.ok_or_else(|| DomError::schema("/", "empty document"))
}

/// Typed properties of one element.
struct Props {
    path: String,
    values: BTreeMap<String, PropValue>,
}

impl Props {
    fn read(el: &El, path: &str, kind: &str, extra_ok: &[&str]) -> Result<Props, DomError> {
        let schema = schema_of(kind);
        let mut values = BTreeMap::new();
        for (i, c) in el.children.iter().filter(|c| c.name == "property").enumerate() {
            let at = format!("{path}/property[{i}]");
            let name = c.attrs.get("name").ok_or_else(|| DomError::schema(&at, "missing name"))?;
            if extra_ok.contains(&name.as_str()) {
                continue;
            }
            let Some((_, ty, _)) = schema.iter().find(|(n, _, _)| n == name) else {
                return Err(DomError::schema(&at, format!("unknown property {name:?} for {kind}")));
            };
            let declared = c.attrs.get("type").map(String::as_str).unwrap_or("");
            if declared != ty.as_str() {
                return Err(DomError::schema(&at, format!("{name} has type {declared:?}, expected {:?}", ty.as_str())));
            }
            let raw = c.attrs.get("value").ok_or_else(|| DomError::schema(&at, "missing value"))?;
            let v = PropValue::parse(*ty, raw).map_err(|m| DomError::schema(&at, m))?;
            if values.insert(name.clone(), v).is_some() {
                return Err(DomError::schema(&at, format!("duplicate property {name:?}")));
            }
        }
        Ok(Props { path: path.to_string(), values })
    }

    fn take(&mut self, name: &str) -> Option<PropValue> {
        self.values.remove(name)
    }

    fn need(&mut self, name: &str) -> Result<PropValue, DomError> {
        self.take(name).ok_or_else(|| DomError::schema(&self.path, format!("missing property {name:?}")))
    }

    fn text(&mut self, name: &str) -> Result<String, DomError> {
        match self.need(name)? {
            PropValue::Text(s) | PropValue::Ref(s) => Ok(s),
            _ => unreachable!("typed by schema"),
        }
    }

    fn opt_text(&mut self, name: &str) -> Option<String> {
        match self.take(name)? {
            PropValue::Text(s) | PropValue::Ref(s) => Some(s),
            _ => None,
        }
    }

    fn number(&mut self, name: &str) -> Result<f64, DomError> {
        match self.need(name)? {
            PropValue::Number(v) => Ok(v),
            _ => unreachable!("typed by schema"),
        }
    }

    fn int(&mut self, name: &str) -> Result<i64, DomError> {
        match self.need(name)? {
            PropValue::Int(v) => Ok(v),
            _ => unreachable!("typed by schema"),
        }
    }

    fn bool(&mut self, name: &str) -> Result<bool, DomError> {
        match self.need(name)? {
            PropValue::Bool(v) => Ok(v),
            _ => unreachable!("typed by schema"),
        }
    }

    fn range(&mut self, name: &str) -> Option<DatumRange> {
        match self.take(name)? {
            PropValue::Range(r) => Some(r),
            _ => None,
        }
    }
}

fn id_of(el: &El, path: &str) -> Result<String, DomError> {
    el.attrs
        .get("id")
        .filter(|s| !s.is_empty())
        .cloned()
        .ok_or_else(|| DomError::schema(path, "missing id"))
}

fn only_children(el: &El, path: &str, allowed: &[&str]) -> Result<(), DomError> {
    for c in &el.children {
        if !allowed.contains(&c.name.as_str()) {
            return Err(DomError::schema(format!("{path}/{}", c.name), "unexpected element"));
        }
    }
    Ok(())
}

fn find<'a>(el: &'a El, name: &str) -> Option<&'a El> {
    el.children.iter().find(|c| c.name == name)
}

fn items<'a>(el: Option<&'a El>, name: &str, path: &str) -> Result<Vec<&'a El>, DomError> {
    match el {
        None => Ok(Vec::new()),
        Some(el) => {
            only_children(el, path, &[name])?;
            Ok(el.children.iter().collect())
        }
    }
}

fn load_axis(el: &El, path: &str) -> Result<Axis, DomError> {
    only_children(el, path, &["property"])?;
    let mut p = Props::read(el, path, "axis", &[])?;
    let scale = match p.need("scale")? {
        PropValue::Scale(s) => s,
        _ => unreachable!(),
    };
    Ok(Axis { id: id_of(el, path)?, range: p.range("range"), label: p.text("label")?, scale, visible: p.bool("visible")? })
}

fn load_plot(el: &El, path: &str) -> Result<Plot, DomError> {
    only_children(el, path, &["property", "axis"])?;
    let mut p = Props::read(el, path, "plot", &["pixelBox"])?;
    let mut axes: BTreeMap<String, Axis> = BTreeMap::new();
    for (i, a) in el.children.iter().filter(|c| c.name == "axis").enumerate() {
        let at = format!("{path}/axis[{i}]");
        let role = a.attrs.get("role").cloned().ok_or_else(|| DomError::schema(&at, "missing role"))?;
        if !["x", "y", "z"].contains(&role.as_str()) || axes.contains_key(&role) {
            return Err(DomError::schema(&at, format!("bad or repeated axis role {role:?}")));
        }
        axes.insert(role, load_axis(a, &at)?);
    }
    let mut take = |r: &str| axes.remove(r).ok_or_else(|| DomError::schema(path, format!("missing {r} axis")));
    Ok(Plot {
        id: id_of(el, path)?,
        title: p.text("title")?,
        row: p.text("row")?,
        column: p.text("column")?,
        xaxis: take("x")?,
        yaxis: take("y")?,
        zaxis: take("z")?,
    })
}

fn load_element(el: &El, path: &str) -> Result<PlotElement, DomError> {
    only_children(el, path, &["property"])?;
    let mut p = Props::read(el, path, "plotElement", &[])?;
    let render_type = match p.need("renderType")? {
        PropValue::RenderType(r) => r,
        _ => unreachable!(),
    };
    let symbol = match p.need("symbol")? {
        PropValue::Symbol(s) => s,
        _ => unreachable!(),
    };
    let component = match p.take("component") {
        Some(PropValue::Int(n)) => {
            Some(usize::try_from(n).map_err(|_| DomError::schema(path, "component must be non-negative"))?)
        }
        _ => None,
    };
    Ok(PlotElement {
        id: id_of(el, path)?,
        plot: p.text("plot")?,
        data: p.text("data")?,
        render_type,
        style: Style { color: p.text("color")?, line_width: p.number("lineWidth")?, symbol },
        visible: p.bool("visible")?,
        label: p.text("label")?,
        parent: p.opt_text("parent"),
        component,
    })
}

/// Parses a `.vap` document.
pub fn load_vap(text: &str) -> Result<LoadedVap, DomError> {
    let root = parse_tree(text)?;
    if root.name != "vap" {
        return Err(DomError::schema(format!("/{}", root.name), "root element must be <vap>"));
    }
    match root.attrs.get("version").map(String::as_str) {
        Some(VAP_VERSION) => {}
        other => return Err(DomError::schema("/vap", format!("unsupported version {other:?}"))),
    }
    only_children(
        &root,
        "/vap",
        &["application", "canvas", "plots", "plotElements", "dataSources", "bindings", "options", "data"],
    )?;
    let mut dom = Dom::new();

    if let Some(el) = find(&root, "application") {
        let mut p = Props::read(el, "/vap/application", "application", &[])?;
        dom.application = Application { timerange: p.range("timerange"), focus: p.opt_text("focus") };
    }
    if let Some(el) = find(&root, "canvas") {
        let path = "/vap/canvas";
        only_children(el, path, &["property", "rows", "columns"])?;
        let mut p = Props::read(el, path, "canvas", &[])?;
        let px = |v: i64, what: &str| u32::try_from(v).map_err(|_| DomError::schema(path, format!("bad {what} {v}")));
        dom.canvas.width = px(p.int("width")?, "width")?;
        dom.canvas.height = px(p.int("height")?, "height")?;
        for (i, r) in items(find(el, "rows"), "row", &format!("{path}/rows"))?.into_iter().enumerate() {
            let at = format!("{path}/rows/row[{i}]");
            dom.canvas.rows.push(Row { id: id_of(r, &at)?, weight: Props::read(r, &at, "row", &[])?.number("weight")? });
        }
        for (i, c) in items(find(el, "columns"), "column", &format!("{path}/columns"))?.into_iter().enumerate() {
            let at = format!("{path}/columns/column[{i}]");
            dom.canvas
                .columns
                .push(Column { id: id_of(c, &at)?, weight: Props::read(c, &at, "column", &[])?.number("weight")? });
        }
    }
    for (i, el) in items(find(&root, "plots"), "plot", "/vap/plots")?.into_iter().enumerate() {
        dom.plots.push(load_plot(el, &format!("/vap/plots/plot[{i}]"))?);
    }
    for (i, el) in items(find(&root, "plotElements"), "plotElement", "/vap/plotElements")?.into_iter().enumerate() {
        dom.plot_elements.push(load_element(el, &format!("/vap/plotElements/plotElement[{i}]"))?);
    }
    for (i, el) in items(find(&root, "dataSources"), "dataSource", "/vap/dataSources")?.into_iter().enumerate() {
        let at = format!("/vap/dataSources/dataSource[{i}]");
        let mut p = Props::read(el, &at, "dataSource", &[])?;
        dom.data_sources.push(DataSourceNode { id: id_of(el, &at)?, uri: p.text("uri")?, error: p.opt_text("error") });
    }
    for (i, el) in items(find(&root, "bindings"), "binding", "/vap/bindings")?.into_iter().enumerate() {
        let at = format!("/vap/bindings/binding[{i}]");
        let mut p = Props::read(el, &at, "binding", &[])?;
        let a = Endpoint::new(p.text("a.node")?, p.text("a.property")?);
        let b = Endpoint::new(p.text("b.node")?, p.text("b.property")?);
        dom.bindings.push(Binding { id: id_of(el, &at)?, a, b });
    }
    if let Some(el) = find(&root, "options") {
        dom.options.auto_bind = Props::read(el, "/vap/options", "options", &[])?.bool("autoBind")?;
    }
    let mut data = BTreeMap::new();
    for (i, el) in items(find(&root, "data"), "dataset", "/vap/data")?.into_iter().enumerate() {
        let at = format!("/vap/data/dataset[{i}]");
        let uri = el.attrs.get("uri").cloned().ok_or_else(|| DomError::schema(&at, "missing uri"))?;
        let ds = read_qds_str(&el.text).map_err(|e| DomError::schema(&at, e.to_string()))?;
        data.insert(uri, ds);
    }
    dom.check()?;
    Ok(LoadedVap { dom, data })
}
