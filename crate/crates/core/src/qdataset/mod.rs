//! The self-describing array model.
//!
//! A [`QDataSet`] is an immutable array with zero to three indices plus a
//! property map. Properties such as `DEPEND_0` hold further datasets, so a
//! time series is a dataset of values whose `DEPEND_0` is a dataset of
//! times. Data are stored as 64-bit floats; missing values are identified by
//! `FILL_VALUE`, non-finite values, or the `VALID_MIN`/`VALID_MAX` bounds.
//!
//! Regular arrays are stored densely in row-major order. Arrays of records
//! with differing lengths (or with per-record metadata) are stored as a
//! *join* of child datasets.

mod ops;
mod property;
mod units;

pub use ops::{add, divide, histogram, max, mean, min, multiply, subtract, total};
pub use property::{Properties, PropertyKey, PropertyValue};
pub use units::{Datum, DatumRange, TimeScale, TimeUnits, Units, UnitsError};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub const MAX_RANK: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DataSetError {
    #[error("rank {0} exceeds the maximum of 3")]
    RankTooHigh(usize),
    #[error("nested values are not rectangular: {0}")]
    Malformed(String),
    #[error("DEPEND_{index} has length {found}, expected {expected}")]
    DependLength { index: usize, expected: usize, found: usize },
    #[error("DEPEND_{index} given for a dataset of rank {rank}")]
    DependOnMissingIndex { index: usize, rank: usize },
    #[error("BUNDLE_1 and DEPEND_1 cannot both be present")]
    BundleWithDepend,
    #[error("{key} has length {found}, expected {expected}")]
    BundleLength { key: &'static str, expected: usize, found: usize },
    #[error("VALID_MIN {min} exceeds VALID_MAX {max}")]
    ValidRange { min: f64, max: f64 },
    #[error("property {key} must hold {expected}")]
    PropertyType { key: String, expected: &'static str },
    #[error("dataset is not QUBE; only index 0 may be sliced")]
    NotQube,
    #[error("index {index} out of bounds for length {len}")]
    IndexOutOfBounds { index: usize, len: usize },
    #[error("cannot slice a rank-{0} dataset along this index")]
    RankTooLow(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error("DEPEND_0 of the operands disagree at element {0}")]
    DependMismatch(usize),
    #[error("ragged dataset: {0}")]
    Ragged(String),
}

/// Nested numeric input accepted by [`make_dataset`].
#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Scalar(f64),
    List(Vec<Values>),
}

impl From<f64> for Values {
    fn from(v: f64) -> Self {
        Values::Scalar(v)
    }
}

impl<T: Into<Values>> From<Vec<T>> for Values {
    fn from(v: Vec<T>) -> Self {
        Values::List(v.into_iter().map(Into::into).collect())
    }
}

#[derive(Debug, Clone)]
enum Storage {
    Dense { shape: Vec<usize>, data: Vec<f64> },
    Join(Vec<QDataSet>),
}

#[derive(Debug, Clone)]
pub struct QDataSet {
    storage: Storage,
    props: Properties,
}

/// Builds a dataset from nested values. Rectangular input is stored densely;
/// ragged input becomes a join of records.
pub fn make_dataset(values: impl Into<Values>, props: Properties) -> Result<QDataSet, DataSetError> {
    let values = values.into();
    let storage = storage_from_values(&values, 0)?;
    QDataSet::build(storage, props)
}

fn nested_shape(v: &Values) -> Result<Option<Vec<usize>>, DataSetError> {
    match v {
        Values::Scalar(_) => Ok(Some(vec![])),
        Values::List(items) => {
            let mut child: Option<Option<Vec<usize>>> = None;
            for it in items {
                let s = nested_shape(it)?;
                match &child {
                    None => child = Some(s),
                    Some(prev) if *prev != s => {
                        // Ragged: ranks still have to agree.
                        let r1 = depth(it);
                        let r0 = depth(&items[0]);
                        if r0 != r1 {
                            return Err(DataSetError::Malformed("elements of differing rank".into()));
                        }
                        child = Some(None);
                    }
                    _ => {}
                }
            }
            Ok(match child {
                None => Some(vec![0]),
                Some(None) => None,
                Some(Some(mut s)) => {
                    s.insert(0, items.len());
                    Some(s)
                }
            })
        }
    }
}

fn depth(v: &Values) -> usize {
    match v {
        Values::Scalar(_) => 0,
        Values::List(items) => 1 + items.first().map_or(0, depth),
    }
}

fn flatten_into(v: &Values, out: &mut Vec<f64>) {
    match v {
        Values::Scalar(x) => out.push(*x),
        Values::List(items) => items.iter().for_each(|i| flatten_into(i, out)),
    }
}

fn storage_from_values(v: &Values, level: usize) -> Result<Storage, DataSetError> {
    let d = depth(v);
    if level + d > MAX_RANK {
        return Err(DataSetError::RankTooHigh(level + d));
    }
    match nested_shape(v)? {
        Some(shape) => {
            let mut data = Vec::with_capacity(shape.iter().product());
            flatten_into(v, &mut data);
            Ok(Storage::Dense { shape, data })
        }
        None => {
            let Values::List(items) = v else { unreachable!() };
            let children = items
                .iter()
                .map(|it| {
                    storage_from_values(it, level + 1)
                        .map(|storage| QDataSet { storage, props: Properties::new() })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Storage::Join(children))
        }
    }
}

impl QDataSet {
    fn build(storage: Storage, props: Properties) -> Result<QDataSet, DataSetError> {
        let ds = QDataSet { storage, props };
        ds.validate()?;
        Ok(ds)
    }

    /// Dense dataset from a row-major buffer.
    pub fn from_shape(shape: &[usize], data: Vec<f64>, props: Properties) -> Result<QDataSet, DataSetError> {
        if shape.len() > MAX_RANK {
            return Err(DataSetError::RankTooHigh(shape.len()));
        }
        let n: usize = shape.iter().product();
        if n != data.len() {
            return Err(DataSetError::ShapeMismatch(format!(
                "shape {shape:?} needs {n} values, got {}",
                data.len()
            )));
        }
        QDataSet::build(Storage::Dense { shape: shape.to_vec(), data }, props)
    }

    pub fn scalar(v: f64) -> QDataSet {
        QDataSet { storage: Storage::Dense { shape: vec![], data: vec![v] }, props: Properties::new() }
    }

    pub fn rank1(data: Vec<f64>, props: Properties) -> Result<QDataSet, DataSetError> {
        let n = data.len();
        QDataSet::from_shape(&[n], data, props)
    }

    /// A join of child datasets, each of which may carry its own properties.
    pub fn join(children: Vec<QDataSet>, props: Properties) -> Result<QDataSet, DataSetError> {
        if let Some(first) = children.first() {
            let r = first.rank();
            if r + 1 > MAX_RANK {
                return Err(DataSetError::RankTooHigh(r + 1));
            }
            if children.iter().any(|c| c.rank() != r) {
                return Err(DataSetError::Malformed("joined datasets differ in rank".into()));
            }
        }
        QDataSet::build(Storage::Join(children), props)
    }

    /// Descriptor for a `BUNDLE_1` index: one rank-0 element per component,
    /// each carrying that component's properties (NAME, LABEL, UNITS, ...).
    pub fn bundle_descriptor(components: Vec<Properties>) -> QDataSet {
        let children = components
            .into_iter()
            .enumerate()
            .map(|(i, props)| QDataSet {
                storage: Storage::Dense { shape: vec![], data: vec![i as f64] },
                props,
            })
            .collect();
        QDataSet { storage: Storage::Join(children), props: Properties::new() }
    }

    pub fn rank(&self) -> usize {
        match &self.storage {
            Storage::Dense { shape, .. } => shape.len(),
            Storage::Join(children) => 1 + children.first().map_or(0, QDataSet::rank),
        }
    }

    /// Length along index 0 (zero for rank 0).
    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Dense { shape, .. } => shape.first().copied().unwrap_or(0),
            Storage::Join(children) => children.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Full shape, or `None` for ragged data.
    pub fn shape(&self) -> Option<Vec<usize>> {
        match &self.storage {
            Storage::Dense { shape, .. } => Some(shape.clone()),
            Storage::Join(children) => {
                let mut child_shape: Option<Vec<usize>> = None;
                for c in children {
                    let s = c.shape()?;
                    match &child_shape {
                        None => child_shape = Some(s),
                        Some(prev) if *prev != s => return None,
                        _ => {}
                    }
                }
                let mut s = child_shape.unwrap_or_default();
                if children.is_empty() {
                    s = vec![];
                }
                s.insert(0, children.len());
                Some(s)
            }
        }
    }

    pub fn is_ragged(&self) -> bool {
        self.shape().is_none()
    }

    /// Length along index `k`, when it is the same for every record.
    pub fn length_at(&self, k: usize) -> Option<usize> {
        if k == 0 {
            return (self.rank() > 0).then(|| self.len());
        }
        self.shape().and_then(|s| s.get(k).copied())
    }

    pub fn is_join(&self) -> bool {
        matches!(self.storage, Storage::Join(_))
    }

    /// Children of a join.
    pub fn records(&self) -> Option<&[QDataSet]> {
        match &self.storage {
            Storage::Join(c) => Some(c),
            Storage::Dense { .. } => None,
        }
    }

    /// Element value; `None` when the index is out of bounds or of the wrong length.
    pub fn get(&self, index: &[usize]) -> Option<f64> {
        match &self.storage {
            Storage::Dense { shape, data } => {
                if index.len() != shape.len() {
                    return None;
                }
                let mut off = 0;
                for (i, n) in index.iter().zip(shape) {
                    if i >= n {
                        return None;
                    }
                    off = off * n + i;
                }
                data.get(off).copied()
            }
            Storage::Join(children) => {
                let (first, rest) = index.split_first()?;
                children.get(*first)?.get(rest)
            }
        }
    }

    /// Scalar value of a rank-0 dataset.
    pub fn value(&self) -> f64 {
        self.get(&[]).unwrap_or(f64::NAN)
    }

    /// Row-major values (for joins, records concatenated in order).
    pub fn flat_values(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense { data, .. } => data.clone(),
            Storage::Join(children) => children.iter().flat_map(|c| c.flat_values()).collect(),
        }
    }

    /// Borrowed values of densely stored data.
    pub fn dense_values(&self) -> Option<&[f64]> {
        match &self.storage {
            Storage::Dense { data, .. } => Some(data),
            Storage::Join(_) => None,
        }
    }

    pub fn properties(&self) -> &Properties {
        &self.props
    }

    pub fn property(&self, key: &PropertyKey) -> Option<&PropertyValue> {
        self.props.get(key)
    }

    /// Returns a copy with one property set, re-validating the result.
    pub fn with_property(&self, key: PropertyKey, value: impl Into<PropertyValue>) -> Result<QDataSet, DataSetError> {
        let mut props = self.props.clone();
        props.insert(key, value);
        QDataSet::build(self.storage.clone(), props)
    }

    pub fn without_property(&self, key: &PropertyKey) -> QDataSet {
        let mut out = self.clone();
        out.props.remove(key);
        out
    }

    /// Same values, replaced property map.
    pub fn with_properties(&self, props: Properties) -> Result<QDataSet, DataSetError> {
        QDataSet::build(self.storage.clone(), props)
    }

    fn text(&self, key: &PropertyKey) -> Option<&str> {
        self.props.get(key).and_then(PropertyValue::as_text)
    }

    fn number(&self, key: &PropertyKey) -> Option<f64> {
        self.props.get(key).and_then(PropertyValue::as_number)
    }

    pub fn name(&self) -> Option<&str> {
        self.text(&PropertyKey::Name)
    }

    pub fn label(&self) -> Option<&str> {
        self.text(&PropertyKey::Label)
    }

    pub fn title(&self) -> Option<&str> {
        self.text(&PropertyKey::Title)
    }

    pub fn units(&self) -> Units {
        self.props
            .get(&PropertyKey::Units)
            .and_then(PropertyValue::as_units)
            .cloned()
            .unwrap_or_default()
    }

    pub fn fill_value(&self) -> Option<f64> {
        self.number(&PropertyKey::FillValue)
    }

    pub fn valid_min(&self) -> Option<f64> {
        self.number(&PropertyKey::ValidMin)
    }

    pub fn valid_max(&self) -> Option<f64> {
        self.number(&PropertyKey::ValidMax)
    }

    pub fn is_log_scale(&self) -> bool {
        self.text(&PropertyKey::ScaleType).is_some_and(|s| s.eq_ignore_ascii_case("log"))
    }

    pub fn is_qube(&self) -> bool {
        self.props.get(&PropertyKey::Qube).and_then(PropertyValue::as_bool).unwrap_or(false)
    }

    pub fn depend(&self, k: usize) -> Option<&QDataSet> {
        PropertyKey::depend(k).and_then(|key| self.props.get(&key)).and_then(PropertyValue::as_dataset)
    }

    pub fn bundle(&self) -> Option<&QDataSet> {
        self.props.get(&PropertyKey::Bundle1).and_then(PropertyValue::as_dataset)
    }

    pub fn context(&self, k: usize) -> Option<&QDataSet> {
        PropertyKey::context(k).and_then(|key| self.props.get(&key)).and_then(PropertyValue::as_dataset)
    }

    /// Properties of bundle component `j` (from the `BUNDLE_1` descriptor).
    pub fn bundle_component(&self, j: usize) -> Option<&Properties> {
        self.bundle()?.records()?.get(j).map(|c| &c.props)
    }

    fn validate(&self) -> Result<(), DataSetError> {
        let rank = self.rank();
        if rank > MAX_RANK {
            return Err(DataSetError::RankTooHigh(rank));
        }
        for (key, value) in self.props.iter() {
            let expected = match key {
                PropertyKey::Depend0
                | PropertyKey::Depend1
                | PropertyKey::Depend2
                | PropertyKey::Bundle0
                | PropertyKey::Bundle1
                | PropertyKey::Context0
                | PropertyKey::Context1
                | PropertyKey::Context2 => (!matches!(value, PropertyValue::DataSet(_))).then_some("a dataset"),
                PropertyKey::FillValue | PropertyKey::ValidMin | PropertyKey::ValidMax => {
                    (!matches!(value, PropertyValue::Number(_))).then_some("a number")
                }
                PropertyKey::Units => (!matches!(value, PropertyValue::Units(_))).then_some("units"),
                PropertyKey::Qube => value.as_bool().is_none().then_some("a boolean"),
                _ => None,
            };
            if let Some(expected) = expected {
                return Err(DataSetError::PropertyType { key: key.to_string(), expected });
            }
        }
        if let (Some(min), Some(max)) = (self.valid_min(), self.valid_max()) {
            if min > max {
                return Err(DataSetError::ValidRange { min, max });
            }
        }
        if self.is_qube() && self.is_ragged() {
            return Err(DataSetError::Ragged("QUBE asserted on records of differing lengths".into()));
        }
        for k in 0..MAX_RANK {
            let Some(dep) = self.depend(k) else { continue };
            if k >= rank {
                return Err(DataSetError::DependOnMissingIndex { index: k, rank });
            }
            if k > 0 && dep.rank() >= 2 {
                // Record-varying tags: one row of tags per index-0 record.
                if dep.len() != self.len() {
                    return Err(DataSetError::DependLength { index: k, expected: self.len(), found: dep.len() });
                }
                continue;
            }
            let expected = self.length_at(k).ok_or_else(|| {
                DataSetError::Ragged(format!("DEPEND_{k} needs a regular index {k}"))
            })?;
            if dep.len() != expected {
                return Err(DataSetError::DependLength { index: k, expected, found: dep.len() });
            }
        }
        if self.bundle().is_some() {
            if self.depend(1).is_some() {
                return Err(DataSetError::BundleWithDepend);
            }
            let n = self.bundle().map_or(0, QDataSet::len);
            match self.length_at(1) {
                Some(len) if len == n => {}
                Some(len) => return Err(DataSetError::BundleLength { key: "BUNDLE_1", expected: len, found: n }),
                None => return Err(DataSetError::Ragged("BUNDLE_1 needs a regular index 1".into())),
            }
        }
        if let Some(b0) = self.props.get(&PropertyKey::Bundle0).and_then(PropertyValue::as_dataset) {
            if rank != 1 || b0.len() != self.len() {
                return Err(DataSetError::BundleLength { key: "BUNDLE_0", expected: self.len(), found: b0.len() });
            }
        }
        Ok(())
    }

    /// Number of physical dimensions occupied: the measured quantity counts
    /// one (or `n` for an `n`-component bundle), each `DEPEND_k` adds one, and
    /// `BINS_k` adds nothing.
    pub fn dimensionality(&self) -> usize {
        let base = self
            .bundle()
            .or_else(|| self.props.get(&PropertyKey::Bundle0).and_then(PropertyValue::as_dataset))
            .map_or(1, QDataSet::len);
        base + (0..self.rank()).filter(|&k| self.depend(k).is_some()).count()
    }

    fn next_context_key(&self) -> Option<PropertyKey> {
        (0..MAX_RANK).map(|k| PropertyKey::context(k).unwrap()).find(|k| !self.props.contains(k))
    }

    /// Removes index 0 by selecting record `i`. The former `DEPEND_0[i]` is
    /// kept as the next free `CONTEXT_n`, and the remaining index properties
    /// shift down by one.
    pub fn slice0(&self, i: usize) -> Result<QDataSet, DataSetError> {
        let rank = self.rank();
        if rank == 0 {
            return Err(DataSetError::RankTooLow(0));
        }
        if i >= self.len() {
            return Err(DataSetError::IndexOutOfBounds { index: i, len: self.len() });
        }
        let (storage, child_props) = match &self.storage {
            Storage::Dense { shape, data } => {
                let inner: usize = shape[1..].iter().product();
                (
                    Storage::Dense { shape: shape[1..].to_vec(), data: data[i * inner..(i + 1) * inner].to_vec() },
                    None,
                )
            }
            Storage::Join(children) => {
                let c = &children[i];
                (c.storage.clone(), Some(&c.props))
            }
        };
        let mut props = Properties::new();
        for (k, v) in self.props.iter() {
            if !k.is_structural() {
                props.insert(k.clone(), v.clone());
            }
        }
        let shift = |src: &QDataSet| -> Result<QDataSet, DataSetError> {
            if src.rank() >= 2 { src.slice0(i) } else { Ok(src.clone()) }
        };
        if let Some(d1) = self.depend(1) {
            props.insert(PropertyKey::Depend0, shift(d1)?);
        }
        if let Some(d2) = self.depend(2) {
            props.insert(PropertyKey::Depend1, shift(d2)?);
        }
        if rank == 2 {
            if let Some(b) = self.bundle() {
                props.insert(PropertyKey::Bundle0, b.clone());
            }
        }
        if let Some(b0) = self.props.get(&PropertyKey::Bundle0).and_then(PropertyValue::as_dataset) {
            if let Some(comp) = b0.records().and_then(|r| r.get(i)) {
                props.extend_from(&comp.props);
            }
        }
        if let Some(d0) = self.depend(0) {
            if let Some(key) = self.next_context_key() {
                props.insert(key, d0.slice0(i)?);
            }
        }
        if let Some(cp) = child_props {
            props.extend_from(cp);
        }
        if rank == 1 {
            props.remove(&PropertyKey::Qube);
        }
        QDataSet::build(storage, props)
    }

    /// Removes index 1 by selecting column `j`. Requires `QUBE`. The former
    /// `DEPEND_1[j]` becomes the next free `CONTEXT_n`; a bundle component's
    /// own properties are applied to the result.
    pub fn slice1(&self, j: usize) -> Result<QDataSet, DataSetError> {
        let rank = self.rank();
        if rank < 2 {
            return Err(DataSetError::RankTooLow(rank));
        }
        if !self.is_qube() {
            return Err(DataSetError::NotQube);
        }
        let shape = self.shape().ok_or(DataSetError::NotQube)?;
        if j >= shape[1] {
            return Err(DataSetError::IndexOutOfBounds { index: j, len: shape[1] });
        }
        let data = self.flat_values();
        let (n0, n1) = (shape[0], shape[1]);
        let inner: usize = shape[2..].iter().product();
        let mut out = Vec::with_capacity(n0 * inner);
        for i in 0..n0 {
            let base = (i * n1 + j) * inner;
            out.extend_from_slice(&data[base..base + inner]);
        }
        let mut new_shape = vec![n0];
        new_shape.extend_from_slice(&shape[2..]);

        let mut props = Properties::new();
        for (k, v) in self.props.iter() {
            if !k.is_structural() {
                props.insert(k.clone(), v.clone());
            }
        }
        if let Some(d0) = self.depend(0) {
            props.insert(PropertyKey::Depend0, d0.clone());
        }
        if let Some(d2) = self.depend(2) {
            if d2.rank() < 2 {
                props.insert(PropertyKey::Depend1, d2.clone());
            }
        }
        if let Some(comp) = self.bundle_component(j) {
            props.extend_from(comp);
        }
        if let Some(d1) = self.depend(1) {
            let ctx = if d1.rank() >= 2 { d1.with_property(PropertyKey::Qube, true)?.slice1(j)? } else { d1.slice0(j)? };
            if let Some(key) = self.next_context_key() {
                props.insert(key, ctx);
            }
        }
        if new_shape.len() < 2 {
            props.remove(&PropertyKey::Qube);
        }
        QDataSet::build(Storage::Dense { shape: new_shape, data: out }, props)
    }

    /// Component `j` of a `BUNDLE_1` dataset as a rank-1 dataset. A bundle
    /// index is regular by construction, so `QUBE` is not required.
    pub fn unbundle(&self, j: usize) -> Result<QDataSet, DataSetError> {
        if self.bundle().is_none() {
            return Err(DataSetError::ShapeMismatch("dataset has no BUNDLE_1".into()));
        }
        if self.is_qube() {
            return self.slice1(j);
        }
        self.with_property(PropertyKey::Qube, true)?.slice1(j)
    }

    /// The validity rule as a reusable predicate.
    pub fn validity_rule(&self) -> Validity {
        Validity { fill: self.fill_value(), min: self.valid_min(), max: self.valid_max() }
    }

    /// Weight 0 for fill, non-finite, or out-of-range values and 1 otherwise,
    /// in [`QDataSet::flat_values`] order.
    pub fn validity(&self) -> ValidityMask {
        let rule = self.validity_rule();
        ValidityMask { weights: self.flat_values().iter().map(|&v| rule.is_valid(v) as u8).collect() }
    }

    /// Values with every invalid element replaced by NaN.
    pub fn valid_values(&self) -> Vec<f64> {
        let rule = self.validity_rule();
        self.flat_values().into_iter().map(|v| if rule.is_valid(v) { v } else { f64::NAN }).collect()
    }

    /// `name[dep0=len,dep1=len]`-style summary.
    pub fn describe(&self) -> String {
        let mut s = self.name().unwrap_or("ds").to_string();
        if self.rank() == 0 {
            return s;
        }
        let dims: Vec<String> = match self.shape() {
            Some(shape) => shape
                .iter()
                .enumerate()
                .map(|(k, n)| match self.depend(k).and_then(QDataSet::name) {
                    Some(d) => format!("{d}={n}"),
                    None => n.to_string(),
                })
                .collect(),
            None => vec![format!("{}", self.len()), "*".into()],
        };
        s.push('[');
        s.push_str(&dims.join(","));
        s.push(']');
        s
    }
}

impl PartialEq for QDataSet {
    /// Structural equality; values compare bit-for-bit, so NaN fills match.
    fn eq(&self, other: &Self) -> bool {
        let storage_eq = match (&self.storage, &other.storage) {
            (Storage::Dense { shape: s1, data: d1 }, Storage::Dense { shape: s2, data: d2 }) => {
                s1 == s2 && d1.len() == d2.len() && d1.iter().zip(d2).all(|(a, b)| a.to_bits() == b.to_bits())
            }
            (Storage::Join(a), Storage::Join(b)) => a == b,
            _ => false,
        };
        storage_eq && self.props == other.props
    }
}

impl fmt::Display for QDataSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Arc alias used where datasets are shared between threads.
pub type SharedDataSet = Arc<QDataSet>;

/// 0/1 weights congruent to a dataset's values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityMask {
    pub weights: Vec<u8>,
}

impl ValidityMask {
    pub fn valid_count(&self) -> usize {
        self.weights.iter().filter(|&&w| w == 1).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub fill: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl Validity {
    pub fn is_valid(&self, v: f64) -> bool {
        v.is_finite()
            && self.fill.is_none_or(|f| v != f)
            && self.min.is_none_or(|m| v >= m)
            && self.max.is_none_or(|m| v <= m)
    }
}
