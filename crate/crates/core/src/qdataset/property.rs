use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{QDataSet, Units};

/// Property names understood by the data model. Unrecognized names are kept
/// verbatim in [`PropertyKey::Other`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyKey {
    Name,
    Label,
    Title,
    Units,
    FillValue,
    ValidMin,
    ValidMax,
    ScaleType,
    Depend0,
    Depend1,
    Depend2,
    Bundle0,
    Bundle1,
    Bins1,
    Qube,
    Context0,
    Context1,
    Context2,
    Basis,
    Other(String),
}

impl PropertyKey {
    pub fn parse(name: &str) -> PropertyKey {
        match name {
            "NAME" => PropertyKey::Name,
            "LABEL" => PropertyKey::Label,
            "TITLE" => PropertyKey::Title,
            "UNITS" => PropertyKey::Units,
            "FILL_VALUE" => PropertyKey::FillValue,
            "VALID_MIN" => PropertyKey::ValidMin,
            "VALID_MAX" => PropertyKey::ValidMax,
            "SCALE_TYPE" => PropertyKey::ScaleType,
            "DEPEND_0" => PropertyKey::Depend0,
            "DEPEND_1" => PropertyKey::Depend1,
            "DEPEND_2" => PropertyKey::Depend2,
            "BUNDLE_0" => PropertyKey::Bundle0,
            "BUNDLE_1" => PropertyKey::Bundle1,
            "BINS_1" => PropertyKey::Bins1,
            "QUBE" => PropertyKey::Qube,
            "CONTEXT_0" => PropertyKey::Context0,
            "CONTEXT_1" => PropertyKey::Context1,
            "CONTEXT_2" => PropertyKey::Context2,
            "BASIS" => PropertyKey::Basis,
            other => PropertyKey::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            PropertyKey::Name => "NAME",
            PropertyKey::Label => "LABEL",
            PropertyKey::Title => "TITLE",
            PropertyKey::Units => "UNITS",
            PropertyKey::FillValue => "FILL_VALUE",
            PropertyKey::ValidMin => "VALID_MIN",
            PropertyKey::ValidMax => "VALID_MAX",
            PropertyKey::ScaleType => "SCALE_TYPE",
            PropertyKey::Depend0 => "DEPEND_0",
            PropertyKey::Depend1 => "DEPEND_1",
            PropertyKey::Depend2 => "DEPEND_2",
            PropertyKey::Bundle0 => "BUNDLE_0",
            PropertyKey::Bundle1 => "BUNDLE_1",
            PropertyKey::Bins1 => "BINS_1",
            PropertyKey::Qube => "QUBE",
            PropertyKey::Context0 => "CONTEXT_0",
            PropertyKey::Context1 => "CONTEXT_1",
            PropertyKey::Context2 => "CONTEXT_2",
            PropertyKey::Basis => "BASIS",
            PropertyKey::Other(s) => s,
        }
    }

    pub fn depend(index: usize) -> Option<PropertyKey> {
        [PropertyKey::Depend0, PropertyKey::Depend1, PropertyKey::Depend2].get(index).cloned()
    }

    pub fn context(index: usize) -> Option<PropertyKey> {
        [PropertyKey::Context0, PropertyKey::Context1, PropertyKey::Context2].get(index).cloned()
    }

    /// Keys whose values describe an index (and therefore move when an index
    /// is removed by slicing).
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            PropertyKey::Depend0
                | PropertyKey::Depend1
                | PropertyKey::Depend2
                | PropertyKey::Bundle0
                | PropertyKey::Bundle1
                | PropertyKey::Bins1
        )
    }

    pub fn is_context(&self) -> bool {
        matches!(self, PropertyKey::Context0 | PropertyKey::Context1 | PropertyKey::Context2)
    }
}

impl fmt::Display for PropertyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PropertyValue {
    Number(f64),
    Text(String),
    Bool(bool),
    Units(Units),
    DataSet(Arc<QDataSet>),
}

impl PropertyValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            PropertyValue::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            PropertyValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            PropertyValue::Bool(b) => Some(*b),
            PropertyValue::Text(s) => s.parse().ok(),
            _ => None,
        }
    }

    pub fn as_dataset(&self) -> Option<&QDataSet> {
        match self {
            PropertyValue::DataSet(ds) => Some(ds),
            _ => None,
        }
    }

    pub fn as_units(&self) -> Option<&Units> {
        match self {
            PropertyValue::Units(u) => Some(u),
            _ => None,
        }
    }
}

impl From<f64> for PropertyValue {
    fn from(v: f64) -> Self {
        PropertyValue::Number(v)
    }
}

impl From<bool> for PropertyValue {
    fn from(v: bool) -> Self {
        PropertyValue::Bool(v)
    }
}

impl From<&str> for PropertyValue {
    fn from(v: &str) -> Self {
        PropertyValue::Text(v.to_string())
    }
}

impl From<String> for PropertyValue {
    fn from(v: String) -> Self {
        PropertyValue::Text(v)
    }
}

impl From<Units> for PropertyValue {
    fn from(v: Units) -> Self {
        PropertyValue::Units(v)
    }
}

impl From<QDataSet> for PropertyValue {
    fn from(v: QDataSet) -> Self {
        PropertyValue::DataSet(Arc::new(v))
    }
}

impl From<Arc<QDataSet>> for PropertyValue {
    fn from(v: Arc<QDataSet>) -> Self {
        PropertyValue::DataSet(v)
    }
}

/// Ordered property map.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Properties(BTreeMap<PropertyKey, PropertyValue>);

impl Properties {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder-style insert.
    pub fn with(mut self, key: PropertyKey, value: impl Into<PropertyValue>) -> Self {
        self.insert(key, value);
        self
    }

    /// Inserts a value. Text given for `UNITS` is parsed into [`Units`].
    pub fn insert(&mut self, key: PropertyKey, value: impl Into<PropertyValue>) {
        let mut value = value.into();
        if key == PropertyKey::Units {
            if let PropertyValue::Text(s) = &value {
                if let Ok(u) = Units::parse(s) {
                    value = PropertyValue::Units(u);
                }
            }
        }
        self.0.insert(key, value);
    }

    pub fn get(&self, key: &PropertyKey) -> Option<&PropertyValue> {
        self.0.get(key)
    }

    pub fn remove(&mut self, key: &PropertyKey) -> Option<PropertyValue> {
        self.0.remove(key)
    }

    pub fn contains(&self, key: &PropertyKey) -> bool {
        self.0.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PropertyKey, &PropertyValue)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn retain(&mut self, mut f: impl FnMut(&PropertyKey, &PropertyValue) -> bool) {
        self.0.retain(|k, v| f(k, v));
    }

    /// Copies every entry from `other`, overwriting existing keys.
    pub fn extend_from(&mut self, other: &Properties) {
        for (k, v) in other.iter() {
            self.0.insert(k.clone(), v.clone());
        }
    }
}

impl FromIterator<(PropertyKey, PropertyValue)> for Properties {
    fn from_iter<I: IntoIterator<Item = (PropertyKey, PropertyValue)>>(iter: I) -> Self {
        let mut p = Properties::new();
        for (k, v) in iter {
            p.insert(k, v);
        }
        p
    }
}
