//! The `qds` interchange format: one JSON object per dataset.
//!
//! ```text
//! { "name": "Np", "shape": [288], "values": [...],
//!   "properties": { "UNITS": "#/cc", "DEPEND_0": { ...same schema... } } }
//! ```
//!
//! `values` nests to depth = rank; a rank-0 dataset has a bare number. NaN
//! is written as the string `"fill"` and infinities as `"inf"` / `"-inf"`.
//! Datasets built as joins (ragged records, bundle descriptors) carry an
//! `elements` list of child objects in place of `values`, and their shape
//! has `null` for irregular indices. Dataset-valued properties nest; other
//! properties are text, numbers or booleans. `name` mirrors `NAME`.

use std::fs;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::qdataset::{Properties, PropertyKey, PropertyValue, QDataSet};
use crate::uri::{DataSetURI, Diagnostic};

use super::{Capabilities, DataSourcePlugin, PluginDescriptor, PluginRequest, SourceError};

fn number(v: f64) -> Value {
    if v.is_nan() {
        Value::String("fill".into())
    } else if v.is_infinite() {
        Value::String(if v > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        Value::Number(Number::from_f64(v).expect("finite"))
    }
}

fn nest(data: &[f64], shape: &[usize]) -> Value {
    match shape.split_first() {
        None => number(data[0]),
        Some((&n, rest)) => {
            let stride: usize = rest.iter().product();
            Value::Array((0..n).map(|i| nest(&data[i * stride..(i + 1) * stride], rest)).collect())
        }
    }
}

fn to_value(ds: &QDataSet) -> Value {
    let mut obj = Map::new();
    if let Some(name) = ds.name() {
        obj.insert("name".into(), Value::String(name.into()));
    }
    match (ds.records(), ds.shape()) {
        (Some(records), shape) => {
            let mut s: Vec<Value> = vec![Value::from(records.len())];
            let inner = shape.map(|s| s[1..].to_vec());
            for k in 1..ds.rank() {
                s.push(match &inner {
                    Some(inner) => Value::from(inner[k - 1]),
                    None => Value::Null,
                });
            }
            obj.insert("shape".into(), Value::Array(s));
            obj.insert("elements".into(), Value::Array(records.iter().map(to_value).collect()));
        }
        (None, Some(shape)) => {
            obj.insert("shape".into(), Value::Array(shape.iter().map(|&n| Value::from(n)).collect()));
            let data = ds.dense_values().expect("dense storage");
            let values = if shape.iter().product::<usize>() == 0 { Value::Array(vec![]) } else { nest(data, &shape) };
            obj.insert("values".into(), values);
        }
        (None, None) => unreachable!("non-join datasets have a shape"),
    }
    let mut props = Map::new();
    for (key, value) in ds.properties().iter() {
        if *key == PropertyKey::Name {
            continue;
        }
        let v = match value {
            PropertyValue::Number(x) => number(*x),
            PropertyValue::Text(s) => Value::String(s.clone()),
            PropertyValue::Bool(b) => Value::Bool(*b),
            PropertyValue::Units(u) => Value::String(u.to_string()),
            PropertyValue::DataSet(d) => to_value(d),
        };
        props.insert(key.as_str().to_string(), v);
    }
    obj.insert("properties".into(), Value::Object(props));
    Value::Object(obj)
}

/// Serializes a dataset, nested property datasets included.
pub fn write_qds(ds: &QDataSet) -> String {
    let mut s = serde_json::to_string(&to_value(ds)).expect("JSON values serialize");
    s.push('\n');
    s
}

fn schema(path: &str, message: impl Into<String>) -> SourceError {
    SourceError::Schema { path: path.to_string(), message: message.into() }
}

fn read_number(v: &Value, path: &str) -> Result<f64, SourceError> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| schema(path, "number out of range")),
        Value::String(s) if s == "fill" => Ok(f64::NAN),
        Value::String(s) if s == "inf" => Ok(f64::INFINITY),
        Value::String(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        other => Err(schema(path, format!("expected a number, found {other}"))),
    }
}

fn flatten(v: &Value, shape: &[usize], path: &str, out: &mut Vec<f64>) -> Result<(), SourceError> {
    match shape.split_first() {
        None => {
            out.push(read_number(v, path)?);
            Ok(())
        }
        Some((&n, rest)) => {
            let Value::Array(items) = v else {
                return Err(schema(path, format!("expected a list of {n}")));
            };
            if items.len() != n {
                return Err(schema(path, format!("expected {n} elements, found {}", items.len())));
            }
            for (i, item) in items.iter().enumerate() {
                flatten(item, rest, &format!("{path}[{i}]"), out)?;
            }
            Ok(())
        }
    }
}

const NUMERIC_KEYS: &[&str] = &["FILL_VALUE", "VALID_MIN", "VALID_MAX"];

fn from_value(v: &Value, path: &str) -> Result<QDataSet, SourceError> {
    let Value::Object(obj) = v else {
        return Err(schema(path, "expected an object"));
    };
    for key in obj.keys() {
        if !matches!(key.as_str(), "name" | "shape" | "values" | "elements" | "properties") {
            return Err(schema(&format!("{path}.{key}"), "unknown field"));
        }
    }
    let mut props = Properties::new();
    match obj.get("name") {
        None | Some(Value::Null) => {}
        Some(Value::String(s)) => props.insert(PropertyKey::Name, s.as_str()),
        Some(_) => return Err(schema(&format!("{path}.name"), "expected text")),
    }
    if let Some(p) = obj.get("properties") {
        let Value::Object(map) = p else {
            return Err(schema(&format!("{path}.properties"), "expected an object"));
        };
        for (k, pv) in map {
            let ppath = format!("{path}.properties.{k}");
            let key = PropertyKey::parse(k);
            let value = match pv {
                Value::Object(_) => PropertyValue::from(from_value(pv, &ppath)?),
                Value::Bool(b) => PropertyValue::Bool(*b),
                Value::Number(_) => PropertyValue::Number(read_number(pv, &ppath)?),
                Value::String(_) if NUMERIC_KEYS.contains(&k.as_str()) => PropertyValue::Number(read_number(pv, &ppath)?),
                Value::String(s) => PropertyValue::Text(s.clone()),
                _ => return Err(schema(&ppath, "expected text, a number, a boolean or a dataset")),
            };
            props.insert(key, value);
        }
    }
    let shape_path = format!("{path}.shape");
    let Some(Value::Array(shape_v)) = obj.get("shape") else {
        return Err(schema(&shape_path, "missing integer list"));
    };
    let shape: Vec<Option<usize>> = shape_v
        .iter()
        .enumerate()
        .map(|(i, s)| match s {
            Value::Null => Ok(None),
            s => s.as_u64().map(|n| Some(n as usize)).ok_or_else(|| schema(&format!("{shape_path}[{i}]"), "expected a length")),
        })
        .collect::<Result<_, _>>()?;
    let built = match (obj.get("values"), obj.get("elements")) {
        (Some(values), None) => {
            let dims: Vec<usize> = shape
                .iter()
                .map(|d| d.ok_or_else(|| schema(&shape_path, "dense values need a regular shape")))
                .collect::<Result<_, _>>()?;
            let mut data = Vec::with_capacity(dims.iter().product());
            if dims.iter().product::<usize>() == 0 {
                if !matches!(values, Value::Array(a) if a.is_empty()) {
                    return Err(schema(&format!("{path}.values"), "expected an empty list"));
                }
            } else {
                flatten(values, &dims, &format!("{path}.values"), &mut data)?;
            }
            QDataSet::from_shape(&dims, data, props)
        }
        (None, Some(Value::Array(elements))) => {
            if shape.first().copied().flatten() != Some(elements.len()) {
                return Err(schema(&shape_path, format!("shape[0] must equal the {} elements", elements.len())));
            }
            let children = elements
                .iter()
                .enumerate()
                .map(|(i, e)| from_value(e, &format!("{path}.elements[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if children.iter().any(|c| c.rank() + 1 != shape.len()) {
                return Err(schema(&shape_path, "element rank disagrees with shape"));
            }
            QDataSet::join(children, props)
        }
        (Some(_), Some(_)) => return Err(schema(path, "`values` and `elements` are exclusive")),
        _ => return Err(schema(path, "missing `values`")),
    };
    built.map_err(|e| schema(path, e.to_string()))
}

/// Parses an interchange document.
pub fn read_qds_str(text: &str) -> Result<QDataSet, SourceError> {
    let v: Value = serde_json::from_str(text).map_err(|e| SourceError::Parse { line: e.line(), message: e.to_string() })?;
    from_value(&v, "$")
}

fn find_named<'a>(ds: &'a QDataSet, name: &str) -> Option<&'a QDataSet> {
    if ds.name() == Some(name) {
        return Some(ds);
    }
    ds.properties().iter().filter_map(|(_, v)| v.as_dataset()).find_map(|d| find_named(d, name))
}

fn collect_names(ds: &QDataSet, out: &mut Vec<String>) {
    if let Some(n) = ds.name() {
        if !out.iter().any(|o| o == n) {
            out.push(n.to_string());
        }
    }
    for (k, v) in ds.properties().iter() {
        if k.is_structural() && *k != PropertyKey::Bundle1 && *k != PropertyKey::Bundle0 {
            if let Some(d) = v.as_dataset() {
                collect_names(d, out);
            }
        }
    }
}

/// Reader and writer for `.qds` documents. A bare token (`?Epoch`) selects
/// the named dataset from anywhere in the document.
pub struct QdsPlugin {
    descriptor: PluginDescriptor,
}

impl Default for QdsPlugin {
    fn default() -> Self {
        Self::new()
    }
}

impl QdsPlugin {
    pub fn new() -> Self {
        QdsPlugin {
            descriptor: PluginDescriptor {
                id: "qds".into(),
                aliases: vec![],
                capabilities: Capabilities { read: true, complete: true, export: true },
            },
        }
    }

    fn load(path: &Path) -> Result<QDataSet, SourceError> {
        let text = fs::read_to_string(path).map_err(|e| SourceError::io(path, e))?;
        read_qds_str(&text)
    }
}

impl DataSourcePlugin for QdsPlugin {
    fn descriptor(&self) -> &PluginDescriptor {
        &self.descriptor
    }

    fn param_names(&self) -> &[&'static str] {
        &[]
    }

    fn validate_params(&self, _uri: &DataSetURI) -> Vec<Diagnostic> {
        Vec::new()
    }

    fn read(&self, req: &PluginRequest<'_>) -> Result<QDataSet, SourceError> {
        let root = Self::load(req.path)?;
        match req.uri.principal() {
            None => Ok(root),
            Some(name) => find_named(&root, name).cloned().ok_or_else(|| {
                let mut available = Vec::new();
                collect_names(&root, &mut available);
                SourceError::UnknownColumn { name: name.to_string(), available }
            }),
        }
    }

    fn complete_params(&self, uri: &DataSetURI, path: &Path) -> Result<Vec<String>, SourceError> {
        if uri.principal().is_some() {
            return Ok(Vec::new());
        }
        let root = Self::load(path)?;
        let mut names = Vec::new();
        collect_names(&root, &mut names);
        Ok(names)
    }

    fn complete_values(&self, _param: &str, _uri: &DataSetURI, _path: &Path) -> Result<Vec<String>, SourceError> {
        Ok(Vec::new())
    }
}
