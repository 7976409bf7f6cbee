//! The `dat` plug-in: delimited ASCII tables.
//!
//! Parameters: `delim` (comma, semicolon, tab, whitespace; default comma),
//! `skip` (leading lines to drop), `column` (name or index, also given as
//! the bare principal token), `depend0` (name or index), `fill` (number)
//! and `bundle` (comma-separated column names read together as one
//! multi-component dataset).
//!
//! The first line after `skip` is a header when any of its cells is neither
//! a number nor a time; otherwise columns are named `field0`, `field1`, ...
//! A column whose first non-empty cell is an ISO-8601 time is read as
//! milliseconds since 1970. Empty cells are missing values.

use std::fs;
use std::path::Path;

use crate::calendar::parse_iso_instant;
use crate::qdataset::{Properties, PropertyKey, QDataSet, TimeUnits, Units};
use crate::uri::{DataSetURI, Diagnostic};

use super::{Capabilities, DataSourcePlugin, PluginDescriptor, PluginRequest, SourceError};

const PARAMS: &[&str] = &["delim", "skip", "column", "depend0", "fill", "bundle"];
const DELIMS: &[&str] = &["comma", "semicolon", "tab", "whitespace"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Delim {
    Comma,
    Semicolon,
    Tab,
    Whitespace,
}

impl Delim {
    fn parse(s: &str) -> Option<Delim> {
        match s.to_ascii_lowercase().as_str() {
            "comma" | "," => Some(Delim::Comma),
            "semicolon" | ";" => Some(Delim::Semicolon),
            "tab" | "\t" => Some(Delim::Tab),
            "whitespace" | "space" | " " => Some(Delim::Whitespace),
            _ => None,
        }
    }

    fn split<'a>(self, line: &'a str) -> Vec<&'a str> {
        let unquote = |s: &'a str| {
            let s = s.trim();
            s.strip_prefix('"').and_then(|t| t.strip_suffix('"')).unwrap_or(s)
        };
        match self {
            Delim::Comma => line.split(',').map(unquote).collect(),
            Delim::Semicolon => line.split(';').map(unquote).collect(),
            Delim::Tab => line.split('\t').map(unquote).collect(),
            Delim::Whitespace => line.split_whitespace().map(unquote).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Cell {
    Number(f64),
    Time(i64),
    Empty,
    Text,
}

fn classify(tok: &str) -> Cell {
    if tok.is_empty() {
        return Cell::Empty;
    }
    if let Ok(v) = tok.parse::<f64>() {
        return Cell::Number(v);
    }
    match parse_iso_instant(tok) {
        Ok(t) => Cell::Time(t),
        Err(_) => Cell::Text,
    }
}

/// A parsed table: header names plus rows of raw cells with their line numbers.
pub(crate) struct Table {
    pub names: Vec<String>,
    rows: Vec<(usize, Vec<String>)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ColumnKind {
    Number,
    Time,
}

pub(crate) fn delim_of(uri: &DataSetURI) -> Result<Delim, SourceError> {
    match uri.get("delim") {
        None => Ok(Delim::Comma),
        Some(s) => Delim::parse(s).ok_or_else(|| SourceError::BadParam {
            param: "delim".into(),
            reason: format!("`{s}` is not one of {}", DELIMS.join(", ")),
        }),
    }
}

fn skip_of(uri: &DataSetURI) -> Result<usize, SourceError> {
    match uri.get("skip") {
        None => Ok(0),
        Some(s) => s.trim().parse().map_err(|_| SourceError::BadParam {
            param: "skip".into(),
            reason: format!("`{s}` is not a non-negative integer"),
        }),
    }
}

pub(crate) fn parse_table(text: &str, delim: Delim, skip: usize) -> Table {
    let mut lines = text
        .split('\n')
        .enumerate()
        .skip(skip)
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((first_no, first)) = lines.next() else {
        return Table { names: Vec::new(), rows: Vec::new() };
    };
    let first_cells: Vec<String> = delim.split(first).into_iter().map(str::to_string).collect();
    let has_header = first_cells.iter().any(|c| classify(c) == Cell::Text);
    let names = if has_header {
        first_cells.clone()
    } else {
        (0..first_cells.len()).map(|i| format!("field{i}")).collect()
    };
    let mut rows = Vec::new();
    if !has_header {
        rows.push((first_no, first_cells));
    }
    rows.extend(lines.map(|(no, l)| (no, delim.split(l).into_iter().map(str::to_string).collect())));
    Table { names, rows }
}

impl Table {
    fn find(&self, spec: &str) -> Result<usize, SourceError> {
        let spec = spec.trim();
        if let Some(i) = self.names.iter().position(|n| n == spec) {
            return Ok(i);
        }
        if let Some(i) = self.names.iter().position(|n| n.eq_ignore_ascii_case(spec)) {
            return Ok(i);
        }
        match spec.parse::<usize>() {
            Ok(i) if i < self.names.len() => Ok(i),
            _ => Err(SourceError::UnknownColumn { name: spec.to_string(), available: self.names.clone() }),
        }
    }

    fn check_shape(&self) -> Result<(), SourceError> {
        if self.rows.is_empty() {
            return Err(SourceError::NoData);
        }
        let expected = self.names.len();
        for (line, cells) in &self.rows {
            if cells.len() != expected {
                return Err(SourceError::Ragged { line: *line, expected, found: cells.len() });
            }
        }
        Ok(())
    }

    fn kind(&self, col: usize) -> ColumnKind {
        self.rows
            .iter()
            .map(|(_, cells)| classify(&cells[col]))
            .find(|c| *c != Cell::Empty)
            .map_or(ColumnKind::Number, |c| if matches!(c, Cell::Time(_)) { ColumnKind::Time } else { ColumnKind::Number })
    }

    fn values(&self, col: usize) -> Result<(ColumnKind, Vec<f64>), SourceError> {
        let kind = self.kind(col);
        let mut out = Vec::with_capacity(self.rows.len());
        for (line, cells) in &self.rows {
            let v = match (kind, classify(&cells[col])) {
                (_, Cell::Empty) => f64::NAN,
                (ColumnKind::Number, Cell::Number(v)) => v,
                (ColumnKind::Time, Cell::Time(t)) => t as f64,
                _ => {
                    return Err(SourceError::Parse {
                        line: *line,
                        message: format!("column `{}`: cannot parse `{}`", self.names[col], cells[col]),
                    })
                }
            };
            out.push(v);
        }
        Ok((kind, out))
    }

    fn column_dataset(&self, col: usize) -> Result<QDataSet, SourceError> {
        let (kind, values) = self.values(col)?;
        let mut props = Properties::new().with(PropertyKey::Name, self.names[col].as_str());
        if kind == ColumnKind::Time {
            props.insert(PropertyKey::Units, Units::Time(TimeUnits::UNIX_MS));
        }
        Ok(QDataSet::rank1(values, props)?)
    }
}

/// Reader for delimited ASCII tables, registered as `dat` with aliases
/// `asc`, `csv` and `txt`.
pub struct AsciiTablePlugin {
    descriptor: PluginDescriptor,
}

impl Default for AsciiTablePlugin {
    fn default() -> Self {
        Self::new()
    }
}

impl AsciiTablePlugin {
    pub fn new() -> Self {
        AsciiTablePlugin {
            descriptor: PluginDescriptor {
                id: "dat".into(),
                aliases: vec!["asc".into(), "csv".into(), "txt".into()],
                capabilities: Capabilities { read: true, complete: true, export: true },
            },
        }
    }

    /// Reads a table from text with the given URI parameters.
    pub fn read_text(&self, text: &str, uri: &DataSetURI) -> Result<QDataSet, SourceError> {
        let table = parse_table(text, delim_of(uri)?, skip_of(uri)?);
        table.check_shape()?;
        let fill = match uri.get("fill") {
            Some(s) => Some(s.trim().parse::<f64>().map_err(|_| SourceError::BadParam {
                param: "fill".into(),
                reason: format!("`{s}` is not a number"),
            })?),
            None => None,
        };
        let n = table.names.len();
        let time0 = table.kind(0) == ColumnKind::Time;

        let bundle_cols: Option<Vec<usize>> = match uri.get("bundle") {
            Some(list) => Some(
                list.split(',').filter(|s| !s.trim().is_empty()).map(|s| table.find(s)).collect::<Result<_, _>>()?,
            ),
            None => None,
        };
        let column = uri.get("column").or(uri.principal());
        let selected = match (&bundle_cols, column) {
            (Some(_), _) => None,
            (None, Some(spec)) => Some(table.find(spec)?),
            (None, None) => Some(n - 1),
        };
        let depend0 = match uri.get("depend0") {
            Some(spec) => Some(table.find(spec)?),
            None if n > 1 && time0 && selected != Some(0) => Some(0),
            None => None,
        };

        let mut props = Properties::new();
        if let Some(f) = fill {
            props.insert(PropertyKey::FillValue, f);
        }
        if let Some(d) = depend0 {
            props.insert(PropertyKey::Depend0, table.column_dataset(d)?);
        }
        let ds = match (bundle_cols, selected) {
            (Some(cols), _) => {
                if cols.is_empty() {
                    return Err(SourceError::BadParam { param: "bundle".into(), reason: "no columns named".into() });
                }
                let columns = cols.iter().map(|&c| table.values(c)).collect::<Result<Vec<_>, _>>()?;
                let rows = table.rows.len();
                let mut data = Vec::with_capacity(rows * cols.len());
                for i in 0..rows {
                    data.extend(columns.iter().map(|(_, v)| v[i]));
                }
                let components = cols
                    .iter()
                    .zip(&columns)
                    .map(|(&c, (kind, _))| {
                        let mut p = Properties::new().with(PropertyKey::Name, table.names[c].as_str());
                        if *kind == ColumnKind::Time {
                            p.insert(PropertyKey::Units, Units::Time(TimeUnits::UNIX_MS));
                        }
                        p
                    })
                    .collect();
                props.insert(PropertyKey::Bundle1, QDataSet::bundle_descriptor(components));
                QDataSet::from_shape(&[rows, cols.len()], data, props)?
            }
            (None, Some(col)) => {
                let base = table.column_dataset(col)?;
                let mut merged = base.properties().clone();
                merged.extend_from(&props);
                base.with_properties(merged)?
            }
            (None, None) => unreachable!("either a bundle or a column is selected"),
        };
        Ok(ds)
    }

    fn read_file(path: &Path) -> Result<String, SourceError> {
        let bytes = fs::read(path).map_err(|e| SourceError::io(path, e))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }
}

impl DataSourcePlugin for AsciiTablePlugin {
    fn descriptor(&self) -> &PluginDescriptor {
        &self.descriptor
    }

    fn param_names(&self) -> &[&'static str] {
        PARAMS
    }

    fn validate_params(&self, uri: &DataSetURI) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (param, check) in [
            ("delim", delim_of(uri).err()),
            ("skip", skip_of(uri).err()),
            ("fill", uri.get("fill").filter(|s| s.trim().parse::<f64>().is_err()).map(|s| SourceError::BadParam {
                param: "fill".into(),
                reason: format!("`{s}` is not a number"),
            })),
        ] {
            if let Some(SourceError::BadParam { reason, .. }) = check {
                out.push(Diagnostic::new(Some(param), reason));
            }
        }
        if uri.get("bundle").is_some() && uri.get("column").is_some() {
            out.push(Diagnostic::new(Some("bundle"), "`bundle` and `column` are exclusive"));
        }
        out
    }

    fn read(&self, req: &PluginRequest<'_>) -> Result<QDataSet, SourceError> {
        let text = Self::read_file(req.path)?;
        self.read_text(&text, req.uri)
    }

    fn complete_params(&self, uri: &DataSetURI, path: &Path) -> Result<Vec<String>, SourceError> {
        let text = Self::read_file(path)?;
        if text.trim().is_empty() {
            return Ok(Vec::new());
        }
        Ok(PARAMS.iter().filter(|p| !uri.has(p)).map(|p| format!("{p}=")).collect())
    }

    fn complete_values(&self, param: &str, uri: &DataSetURI, path: &Path) -> Result<Vec<String>, SourceError> {
        match param {
            "delim" => return Ok(DELIMS.iter().map(|s| s.to_string()).collect()),
            "skip" | "fill" => return Ok(Vec::new()),
            _ => {}
        }
        let text = Self::read_file(path)?;
        let table = parse_table(&text, delim_of(uri).unwrap_or(Delim::Comma), skip_of(uri).unwrap_or(0));
        match param {
            "column" | "depend0" | "bundle" => Ok(table.names),
            _ => Ok(Vec::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uri::parse_uri;

    fn read(text: &str, query: &str) -> Result<QDataSet, SourceError> {
        let uri = parse_uri(&format!("file:///t.csv{query}")).unwrap();
        AsciiTablePlugin::new().read_text(text, &uri)
    }

    const JUNK: &str = "junk line 1\njunk 2\n# junk 3\n\njunk 5\ntime,density,speed\n\
2008-06-01T00:00:00Z,3.5,400\n2008-06-01T01:00:00Z,4.5,410\n2008-06-01T02:00:00Z,,420\n";

    #[test]
    fn skip_header_and_column() {
        let ds = read(JUNK, "?delim=comma&skip=5&column=density").unwrap();
        assert_eq!(ds.name(), Some("density"));
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.get(&[0]), Some(3.5));
        assert!(ds.get(&[2]).unwrap().is_nan());
        let dep = ds.depend(0).unwrap();
        assert!(dep.units().is_time());
        assert_eq!(dep.get(&[1]), Some(1_212_282_000_000.0));
    }

    #[test]
    fn principal_token_selects_column() {
        let ds = read(JUNK, "?skip=5&speed").unwrap();
        assert_eq!(ds.name(), Some("speed"));
        assert_eq!(ds.get(&[2]), Some(420.0));
    }

    #[test]
    fn ragged_row_reports_line() {
        let text = "a,b\n1,2\n3,4\n5\n6,7\n";
        match read(text, "") {
            Err(SourceError::Ragged { line, expected, found }) => assert_eq!((line, expected, found), (4, 2, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_column_no_header() {
        let ds = read("1\n2\n3\n", "").unwrap();
        assert_eq!(ds.name(), Some("field0"));
        assert_eq!(ds.depend(0), None);
        assert_eq!(ds.flat_values(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn crlf_and_trailing_blanks() {
        let lf = read("x,y\n1,2\n3,4\n", "?column=y").unwrap();
        let crlf = read("x,y\r\n1,2\r\n3,4\r\n\r\n\n  \n", "?column=y").unwrap();
        assert_eq!(lf, crlf);
    }

    #[test]
    fn whitespace_delimiter_collapses_runs() {
        let ds = read("a   b\t c\n1  2   3\n", "?delim=whitespace&column=c").unwrap();
        assert_eq!(ds.flat_values(), vec![3.0]);
    }

    #[test]
    fn unknown_column_and_fill() {
        assert!(matches!(read("a,b\n1,2\n", "?column=zz"), Err(SourceError::UnknownColumn { .. })));
        let ds = read("a,b\n1,-1e31\n2,5\n", "?column=b&fill=-1e31").unwrap();
        assert_eq!(ds.validity().weights, vec![0, 1]);
        assert!(matches!(read("a,b\n", ""), Err(SourceError::NoData)));
    }

    #[test]
    fn bundle_columns() {
        let text = "time,Bx,By,Bz\n2008-06-01,1,2,3\n2008-06-02,4,5,6\n";
        let ds = read(text, "?bundle=Bx,By,Bz").unwrap();
        assert_eq!(ds.shape(), Some(vec![2, 3]));
        assert_eq!(ds.bundle_component(1).unwrap().get(&PropertyKey::Name).unwrap().as_text(), Some("By"));
        assert!(ds.depend(0).is_some());
        assert_eq!(ds.dimensionality(), 4);
    }

    #[test]
    fn bad_cell_reports_line() {
        match read("a,b\n1,2\n3,x\n", "?column=b") {
            Err(SourceError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn day_of_year_times() {
        let ds = read("t,v\n2008-153.5,1\n2008-154.0,2\n", "?column=v").unwrap();
        let dep = ds.depend(0).unwrap();
        assert_eq!(dep.get(&[0]), Some(1_212_321_600_000.0));
    }
}
