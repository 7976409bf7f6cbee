use crate::calendar::format_iso;
use crate::qdataset::{PropertyKey, QDataSet, Units, Validity};

use super::SourceError;

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn cell(v: f64, units: &Units, rule: &Validity) -> String {
    if !rule.is_valid(v) {
        return String::new();
    }
    match units.as_time() {
        Some(t) => format_iso(t.to_unix_ms(v).round() as i64),
        None => v.to_string(),
    }
}

/// Comma-separated export: a header row, then one row per index-0 record.
/// `DEPEND_0` comes first, time-located values are ISO-8601, invalid values
/// are empty cells.
pub fn write_csv(ds: &QDataSet) -> Result<String, SourceError> {
    if ds.rank() > 2 {
        return Err(SourceError::Unsupported(format!("CSV export does not support rank-{} data", ds.rank())));
    }
    if ds.is_ragged() {
        return Err(SourceError::Unsupported("CSV export needs records of equal length".into()));
    }
    let name = ds.name().unwrap_or("value").to_string();
    let units = ds.units();
    let rule = ds.validity_rule();
    let mut header = Vec::new();
    let dep0 = ds.depend(0);
    if let Some(d) = dep0 {
        header.push(d.name().unwrap_or("depend0").to_string());
    }
    let ncols = if ds.rank() == 2 { ds.length_at(1).unwrap_or(0) } else { 1 };
    let mut col_units = vec![units.clone(); ncols];
    let mut col_rules = vec![rule; ncols];
    if ds.rank() == 2 {
        for j in 0..ncols {
            match ds.bundle_component(j) {
                Some(p) => {
                    header.push(p.get(&PropertyKey::Name).and_then(|v| v.as_text()).map_or(format!("{name}_{j}"), str::to_string));
                    if let Some(u) = p.get(&PropertyKey::Units).and_then(|v| v.as_units()) {
                        col_units[j] = u.clone();
                    }
                }
                None => header.push(format!("{name}_{j}")),
            }
        }
        if let Some(b) = ds.bundle() {
            for (j, rec) in b.records().unwrap_or(&[]).iter().enumerate().take(ncols) {
                let r = rec.validity_rule();
                col_rules[j] = Validity {
                    fill: r.fill.or(rule.fill),
                    min: r.min.or(rule.min),
                    max: r.max.or(rule.max),
                };
            }
        }
    } else {
        header.push(name);
    }
    let mut out = header.iter().map(|h| quote(h)).collect::<Vec<_>>().join(",");
    out.push('\n');
    let values = ds.flat_values();
    let rows = if ds.rank() == 0 { 1 } else { ds.len() };
    let (dep_vals, dep_units, dep_rule) = match dep0 {
        Some(d) => (d.flat_values(), d.units(), d.validity_rule()),
        None => (Vec::new(), Units::dimensionless(), Validity { fill: None, min: None, max: None }),
    };
    for i in 0..rows {
        let mut cells = Vec::with_capacity(ncols + 1);
        if dep0.is_some() {
            cells.push(cell(dep_vals[i], &dep_units, &dep_rule));
        }
        for j in 0..ncols {
            cells.push(cell(values[i * ncols + j], &col_units[j], &col_rules[j]));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qdataset::{Properties, TimeUnits};

    #[test]
    fn time_first_and_empty_fill() {
        let t = QDataSet::rank1(
            vec![1_212_278_400_000.0, 1_212_278_460_000.0],
            Properties::new().with(PropertyKey::Name, "time").with(PropertyKey::Units, Units::Time(TimeUnits::UNIX_MS)),
        )
        .unwrap();
        let ds = QDataSet::rank1(
            vec![2.5, -1e31],
            Properties::new().with(PropertyKey::Name, "Np").with(PropertyKey::FillValue, -1e31).with(PropertyKey::Depend0, t),
        )
        .unwrap();
        assert_eq!(
            write_csv(&ds).unwrap(),
            "time,Np\n2008-06-01T00:00:00.000Z,2.5\n2008-06-01T00:01:00.000Z,\n"
        );
    }

    #[test]
    fn rank3_is_unsupported() {
        let ds = QDataSet::from_shape(&[1, 1, 1], vec![1.0], Properties::new()).unwrap();
        assert!(matches!(write_csv(&ds), Err(SourceError::Unsupported(_))));
        assert_eq!(write_csv(&QDataSet::scalar(3.0)).unwrap(), "value\n3\n");
    }
}
