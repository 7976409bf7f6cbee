//! Time aggregation: expanding a templated resource over a time range into
//! concrete files, and merging the per-file datasets into one series.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::calendar::{format_iso, Bindings, FileTemplate, TemplateError, TimeInterval};
use crate::datasource::{PluginRegistry, PluginRequest, SourceError};
use crate::qdataset::{DataSetError, Properties, PropertyKey, QDataSet, Units};
use crate::uri::DataSetURI;
use crate::vfs::{ResourceRef, Vfs, VfsError};

pub const DEFAULT_PARALLELISM: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AggregationError {
    #[error("`{0}` has no calendar fields to aggregate over")]
    NotTemplated(String),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("no files match `{template}` in {range}")]
    NoMatches { template: String, range: String },
    #[error("{first} and {second} cover overlapping time ranges")]
    DuplicateCoverage { first: String, second: String },
    #[error("listing {dir}: {source}")]
    List { dir: String, source: VfsError },
    #[error("{file}: {source}")]
    Fetch { file: String, source: VfsError },
    #[error("{file}: {source}")]
    Read { file: String, source: SourceError },
    #[error("merge: {0}")]
    Merge(String),
}

/// Concrete files covering a range, sorted by time.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregationPlan {
    pub template: FileTemplate,
    pub base: ResourceRef,
    pub range: TimeInterval,
    pub matches: Vec<(ResourceRef, TimeInterval)>,
}

/// Splits a templated resource into its literal base directory and the
/// templated path segments below it.
pub fn split_template(resource: &str) -> Result<(ResourceRef, Vec<FileTemplate>), AggregationError> {
    let full = FileTemplate::parse(resource)?;
    if !full.has_fields() {
        return Err(AggregationError::NotTemplated(resource.to_string()));
    }
    let segs: Vec<&str> = resource.split('/').collect();
    let mut first = segs.len() - 1;
    for (i, s) in segs.iter().enumerate() {
        if FileTemplate::parse(s)?.is_templated() {
            first = i;
            break;
        }
    }
    let base_text = format!("{}/", segs[..first].join("/"));
    let base = ResourceRef::parse(&base_text)
        .map_err(|e| AggregationError::List { dir: base_text.clone(), source: e })?
        .as_directory();
    let templates = segs[first..].iter().map(|s| FileTemplate::parse(s)).collect::<Result<_, _>>()?;
    Ok((base, templates))
}

fn walk(
    vfs: &Vfs,
    dir: &ResourceRef,
    segs: &[FileTemplate],
    bound: &Bindings,
    range: &TimeInterval,
    out: &mut Vec<(ResourceRef, TimeInterval)>,
) -> Result<(), AggregationError> {
    let Some((seg, rest)) = segs.split_first() else { return Ok(()) };
    let leaf = rest.is_empty();
    let names = vfs.list(dir).map_err(|e| AggregationError::List { dir: dir.url(), source: e })?;
    for name in names {
        let is_dir = name.ends_with('/');
        if is_dir == leaf {
            continue;
        }
        let bare = name.trim_end_matches('/');
        let Some(b) = seg.match_with(bare, bound) else { continue };
        let iv = b.interval();
        if let Some(iv) = &iv {
            if !iv.intersects(range) {
                continue;
            }
        }
        if leaf {
            if let Some(iv) = iv {
                out.push((dir.child(bare), iv));
            }
        } else {
            walk(vfs, &dir.child(&name), rest, &b, range, out)?;
        }
    }
    Ok(())
}

/// Finds the files of a templated resource whose implied interval
/// intersects `range`.
pub fn expand(resource: &str, range: &TimeInterval, vfs: &Vfs) -> Result<AggregationPlan, AggregationError> {
    let (base, segs) = split_template(resource)?;
    let mut matches = Vec::new();
    walk(vfs, &base, &segs, &Bindings::default(), range, &mut matches)?;
    if matches.is_empty() {
        return Err(AggregationError::NoMatches { template: resource.to_string(), range: range.to_string() });
    }
    matches.sort_by(|a, b| (a.1.start_ms(), &a.0.path).cmp(&(b.1.start_ms(), &b.0.path)));
    for w in matches.windows(2) {
        if w[1].1.start_ms() < w[0].1.end_ms() {
            return Err(AggregationError::DuplicateCoverage { first: w[0].0.url(), second: w[1].0.url() });
        }
    }
    Ok(AggregationPlan { template: FileTemplate::parse(resource)?, base, range: *range, matches })
}

fn merr(msg: impl Into<String>) -> AggregationError {
    AggregationError::Merge(msg.into())
}

fn dense(ds: &QDataSet, what: &str) -> Result<Vec<f64>, AggregationError> {
    ds.dense_values().map(<[f64]>::to_vec).ok_or_else(|| merr(format!("{what} has irregular records")))
}

fn same_values(a: &QDataSet, b: &QDataSet) -> bool {
    let (x, y) = (a.flat_values(), b.flat_values());
    x.len() == y.len()
        && x.iter().zip(&y).all(|(p, q)| p.to_bits() == q.to_bits() || (p - q).abs() <= 1e-9 * p.abs().max(q.abs()))
}

/// Concatenates datasets along index 0. Time tags are converted to the
/// first part's units and must not decrease across the result.
pub fn merge(parts: &[QDataSet]) -> Result<QDataSet, AggregationError> {
    let first = parts.first().ok_or_else(|| merr("nothing to merge"))?;
    if parts.len() == 1 {
        return Ok(first.clone());
    }
    let rank = first.rank();
    if !(1..=2).contains(&rank) {
        return Err(merr(format!("rank {rank} cannot be merged")));
    }
    let dep0 = first.depend(0).ok_or_else(|| merr("first part has no DEPEND_0"))?;
    let tunits = dep0.units();
    if !tunits.is_time() {
        return Err(merr("DEPEND_0 is not time-located"));
    }
    let units = first.units();
    let inner: Vec<usize> = first.shape().map(|s| s[1..].to_vec()).ok_or_else(|| merr("first part is ragged"))?;
    let rule = first.validity_rule();

    let mut values = Vec::new();
    let mut times = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        if part.rank() != rank {
            return Err(merr(format!("part {k} has rank {}, expected {rank}", part.rank())));
        }
        if part.shape().map(|s| s[1..].to_vec()).as_deref() != Some(inner.as_slice()) {
            return Err(merr(format!("part {k} has a different record shape")));
        }
        let pu = part.units();
        if !pu.is_convertible_to(&units) {
            return Err(merr(format!("part {k} is in `{pu}`, expected `{units}`")));
        }
        if rank == 2 {
            match (first.depend(1), part.depend(1)) {
                (None, None) => {}
                (Some(a), Some(b)) if a.rank() == 1 && same_values(a, b) => {}
                _ => return Err(merr(format!("part {k} has different DEPEND_1 values"))),
            }
        }
        let pd = part.depend(0).ok_or_else(|| merr(format!("part {k} has no DEPEND_0")))?;
        let pdu = pd.units();
        for t in dense(pd, "DEPEND_0")? {
            times.push(pdu.convert(t, &tunits).map_err(|e| merr(format!("part {k}: {e}")))?);
        }
        let raw = if part.validity_rule() == rule { dense(part, "part")? } else { part.valid_values() };
        if pu == units {
            values.extend(raw);
        } else {
            for v in raw {
                values.push(pu.convert(v, &units).map_err(|e| merr(format!("part {k}: {e}")))?);
            }
        }
    }
    let mut last = f64::NEG_INFINITY;
    for (i, &t) in times.iter().enumerate() {
        if t.is_nan() {
            continue;
        }
        if t < last {
            return Err(merr(format!("time tags decrease at record {i} ({} after {})", fmt_time(t, &tunits), fmt_time(last, &tunits))));
        }
        last = t;
    }
    let n = times.len();
    let dep0_merged = QDataSet::rank1(times, dep0.properties().clone()).map_err(|e| merr(e.to_string()))?;
    let mut props: Properties = first.properties().clone();
    props.insert(PropertyKey::Depend0, dep0_merged);
    let mut shape = vec![n];
    shape.extend(&inner);
    QDataSet::from_shape(&shape, values, props).map_err(|e: DataSetError| merr(e.to_string()))
}

fn fmt_time(t: f64, u: &Units) -> String {
    match u.as_time() {
        Some(tu) => format_iso(tu.to_unix_ms(t) as i64),
        None => t.to_string(),
    }
}

/// The concrete URI used to read one matched file.
pub fn part_uri(uri: &DataSetURI, file: &ResourceRef) -> DataSetURI {
    let mut u = uri.without_param("timerange");
    u.resource = file.url();
    u
}

/// Expands, fetches (up to `parallelism` at a time), reads and merges.
pub fn aggregate_read(
    uri: &DataSetURI,
    range: &TimeInterval,
    vfs: &Vfs,
    registry: &PluginRegistry,
    parallelism: usize,
) -> Result<QDataSet, AggregationError> {
    let plan = expand(&uri.resource, range, vfs)?;
    let n = plan.matches.len();
    let slots: Vec<Mutex<Option<Result<QDataSet, AggregationError>>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let read_one = |i: usize| -> Result<QDataSet, AggregationError> {
        let (file, iv) = &plan.matches[i];
        let part = part_uri(uri, file);
        let path = vfs.fetch(file).map_err(|e| AggregationError::Fetch { file: file.url(), source: e })?;
        let plugin = registry.resolve(&part).map_err(|e| AggregationError::Read { file: file.url(), source: e })?;
        plugin
            .read(&PluginRequest { uri: &part, path: &path, timerange: Some(*iv) })
            .map_err(|e| AggregationError::Read { file: file.url(), source: e })
    };
    std::thread::scope(|s| {
        for _ in 0..parallelism.clamp(1, n.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let r = read_one(i);
                *slots[i].lock().unwrap_or_else(|e| e.into_inner()) = Some(r);
            });
        }
    });
    let mut parts = Vec::with_capacity(n);
    for slot in slots {
        parts.push(slot.into_inner().unwrap_or_else(|e| e.into_inner()).expect("every slot is filled")?);
    }
    merge(&parts)
}
