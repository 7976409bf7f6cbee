//! Metadata-aware arithmetic and reductions.
//!
//! Invalid elements (fill, non-finite, out of the valid range) in either
//! operand produce NaN in the result; NaN is the fill marker of every
//! computed dataset.

use super::{DataSetError, Properties, PropertyKey, QDataSet, Units};

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Subtract,
    Multiply,
    Divide,
}

pub fn add(a: &QDataSet, b: &QDataSet) -> Result<QDataSet, DataSetError> {
    binary(a, b, BinOp::Add)
}

pub fn subtract(a: &QDataSet, b: &QDataSet) -> Result<QDataSet, DataSetError> {
    binary(a, b, BinOp::Subtract)
}

pub fn multiply(a: &QDataSet, b: &QDataSet) -> Result<QDataSet, DataSetError> {
    binary(a, b, BinOp::Multiply)
}

pub fn divide(a: &QDataSet, b: &QDataSet) -> Result<QDataSet, DataSetError> {
    binary(a, b, BinOp::Divide)
}

fn result_units(a: &Units, b: &Units, op: BinOp) -> Result<Units, DataSetError> {
    match op {
        BinOp::Add | BinOp::Subtract => {
            if a.is_convertible_to(b) {
                Ok(a.clone())
            } else {
                Err(super::UnitsError::Inconvertible(a.to_string(), b.to_string()).into())
            }
        }
        BinOp::Multiply | BinOp::Divide => {
            if a.is_time() || b.is_time() {
                return Err(super::UnitsError::Inconvertible(a.to_string(), b.to_string()).into());
            }
            let sep = if matches!(op, BinOp::Multiply) { "*" } else { "/" };
            Ok(match (a.to_string(), b.to_string()) {
                (l, r) if r.is_empty() => Units::Ratio(l),
                (l, r) if l.is_empty() && matches!(op, BinOp::Multiply) => Units::Ratio(r),
                (l, r) if l.is_empty() => Units::Ratio(format!("1/{r}")),
                (l, r) => Units::Ratio(format!("{l}{sep}{r}")),
            })
        }
    }
}

fn depend0_agree(a: &QDataSet, b: &QDataSet) -> Result<(), DataSetError> {
    let (Some(da), Some(db)) = (a.depend(0), b.depend(0)) else { return Ok(()) };
    let ua = da.units();
    let ub = db.units();
    let va = da.flat_values();
    let vb = db.flat_values();
    if va.len() != vb.len() {
        return Err(DataSetError::DependMismatch(va.len().min(vb.len())));
    }
    for (i, (x, y)) in va.iter().zip(&vb).enumerate() {
        let y = ub.convert(*y, &ua)?;
        let tol = 1e-9 * x.abs().max(y.abs()).max(1.0);
        if (x - y).abs() > tol {
            return Err(DataSetError::DependMismatch(i));
        }
    }
    Ok(())
}

fn binary(a: &QDataSet, b: &QDataSet, op: BinOp) -> Result<QDataSet, DataSetError> {
    let (sa, sb) = (a.shape(), b.shape());
    let broadcast_b = b.rank() == 0;
    let broadcast_a = a.rank() == 0 && !broadcast_b;
    if !broadcast_a && !broadcast_b && (sa.is_none() || sa != sb) {
        return Err(DataSetError::ShapeMismatch(format!("{} vs {}", a.describe(), b.describe())));
    }
    let ua = a.units();
    let ub = b.units();
    let units = result_units(&ua, &ub, op)?;
    depend0_agree(a, b)?;

    let va = a.valid_values();
    let mut vb = b.valid_values();
    if matches!(op, BinOp::Add | BinOp::Subtract) && ua != ub {
        for v in vb.iter_mut() {
            *v = ub.convert(*v, &ua)?;
        }
    }
    let n = va.len().max(vb.len());
    let at = |v: &[f64], i: usize| if v.len() == 1 { v[0] } else { v[i] };
    let out: Vec<f64> = (0..n)
        .map(|i| {
            let (x, y) = (at(&va, i), at(&vb, i));
            let r = match op {
                BinOp::Add => x + y,
                BinOp::Subtract => x - y,
                BinOp::Multiply => x * y,
                BinOp::Divide => x / y,
            };
            if r.is_finite() { r } else { f64::NAN }
        })
        .collect();

    let shape_src = if broadcast_a { b } else { a };
    let shape = shape_src.shape().unwrap_or_default();
    let mut props = Properties::new();
    for (k, v) in shape_src.properties().iter() {
        let keep = k.is_structural() || k.is_context() || matches!(k, PropertyKey::Qube | PropertyKey::ScaleType);
        if keep {
            props.insert(k.clone(), v.clone());
        }
    }
    // Left operand's context wins.
    for (k, v) in a.properties().iter() {
        if k.is_context() {
            props.insert(k.clone(), v.clone());
        }
    }
    if props.get(&PropertyKey::Depend0).is_none() {
        if let Some(d0) = b.depend(0) {
            if b.rank() == shape.len() {
                props.insert(PropertyKey::Depend0, d0.clone());
            }
        }
    }
    if !units.is_dimensionless() {
        props.insert(PropertyKey::Units, units);
    }
    QDataSet::from_shape(&shape, out, props)
}

/// Extent of index 0 as a two-element dataset in DEPEND_0's units.
fn collapsed_extent(ds: &QDataSet) -> Option<QDataSet> {
    let d0 = ds.depend(0)?;
    let vals: Vec<f64> = d0.flat_values().into_iter().filter(|v| v.is_finite()).collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        return None;
    }
    let mut props = Properties::new();
    if let Some(name) = d0.name() {
        props.insert(PropertyKey::Name, name);
    }
    let u = d0.units();
    if !u.is_dimensionless() {
        props.insert(PropertyKey::Units, u);
    }
    QDataSet::rank1(vec![lo, hi], props).ok()
}

fn reduced_props(ds: &QDataSet) -> Properties {
    let mut props = Properties::new();
    let u = ds.units();
    if !u.is_dimensionless() {
        props.insert(PropertyKey::Units, u);
    }
    for key in [PropertyKey::Name, PropertyKey::Label] {
        if let Some(v) = ds.property(&key) {
            props.insert(key, v.clone());
        }
    }
    if let Some(ext) = collapsed_extent(ds) {
        props.insert(PropertyKey::Context0, ext);
    }
    props
}

fn reduce0(ds: &QDataSet, mean_not_sum: bool) -> Result<QDataSet, DataSetError> {
    if ds.rank() == 0 {
        return Err(DataSetError::RankTooLow(0));
    }
    let rule = ds.validity_rule();
    let fold = |vals: &mut dyn Iterator<Item = f64>| {
        let (mut sum, mut n) = (0.0, 0usize);
        for v in vals.filter(|v| rule.is_valid(*v)) {
            sum += v;
            n += 1;
        }
        match (n, mean_not_sum) {
            (0, _) => f64::NAN,
            (n, true) => sum / n as f64,
            (_, false) => sum,
        }
    };
    let mut props = reduced_props(ds);
    match ds.rank() {
        1 => {
            let v = fold(&mut ds.flat_values().into_iter());
            QDataSet::from_shape(&[], vec![v], props)
        }
        _ => {
            let shape = ds.shape().ok_or_else(|| DataSetError::Ragged("reduction over ragged records".into()))?;
            let inner: usize = shape[1..].iter().product();
            let data = ds.flat_values();
            let out: Vec<f64> = (0..inner)
                .map(|j| fold(&mut (0..shape[0]).map(|i| data[i * inner + j])))
                .collect();
            if let Some(d1) = ds.depend(1) {
                if d1.rank() == 1 {
                    props.insert(PropertyKey::Depend0, d1.clone());
                }
            }
            if let Some(d2) = ds.depend(2) {
                if d2.rank() == 1 {
                    props.insert(PropertyKey::Depend1, d2.clone());
                }
            }
            if shape.len() == 2 {
                if let Some(b) = ds.bundle() {
                    props.insert(PropertyKey::Bundle0, b.clone());
                }
            }
            QDataSet::from_shape(&shape[1..], out, props)
        }
    }
}

/// Sum of valid values over index 0.
pub fn total(ds: &QDataSet) -> Result<QDataSet, DataSetError> {
    reduce0(ds, false)
}

/// Mean of valid values over index 0.
pub fn mean(ds: &QDataSet) -> Result<QDataSet, DataSetError> {
    reduce0(ds, true)
}

fn extreme(ds: &QDataSet, pick_max: bool) -> Result<QDataSet, DataSetError> {
    if ds.rank() == 0 {
        return Err(DataSetError::RankTooLow(0));
    }
    let rule = ds.validity_rule();
    let v = ds
        .flat_values()
        .into_iter()
        .filter(|v| rule.is_valid(*v))
        .reduce(|a, b| if pick_max { a.max(b) } else { a.min(b) })
        .unwrap_or(f64::NAN);
    QDataSet::from_shape(&[], vec![v], reduced_props(ds))
}

/// Smallest valid value.
pub fn min(ds: &QDataSet) -> Result<QDataSet, DataSetError> {
    extreme(ds, false)
}

/// Largest valid value.
pub fn max(ds: &QDataSet) -> Result<QDataSet, DataSetError> {
    extreme(ds, true)
}

/// Counts of valid values in `bins` equal-width bins over `range` (default:
/// the valid extent). The result's DEPEND_0 holds the bin centers.
pub fn histogram(ds: &QDataSet, bins: usize, range: Option<(f64, f64)>) -> Result<QDataSet, DataSetError> {
    if ds.rank() == 0 {
        return Err(DataSetError::RankTooLow(0));
    }
    let bins = bins.max(1);
    let rule = ds.validity_rule();
    let vals: Vec<f64> = ds.flat_values().into_iter().filter(|v| rule.is_valid(*v)).collect();
    let (lo, hi) = range.unwrap_or_else(|| {
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo.is_finite() { if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) } } else { (0.0, 1.0) }
    });
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0.0; bins];
    for v in vals {
        if v < lo || v > hi {
            continue;
        }
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1.0;
    }
    let mut cprops = Properties::new();
    let u = ds.units();
    if !u.is_dimensionless() {
        cprops.insert(PropertyKey::Units, u);
    }
    if let Some(l) = ds.label() {
        cprops.insert(PropertyKey::Label, l);
    }
    let centers = QDataSet::rank1((0..bins).map(|k| lo + (k as f64 + 0.5) * width).collect(), cprops)?;
    QDataSet::rank1(
        counts,
        Properties::new().with(PropertyKey::Name, "histogram").with(PropertyKey::Depend0, centers),
    )
}
