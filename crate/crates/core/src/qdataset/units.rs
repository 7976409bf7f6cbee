use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::calendar::{civil_fields, format_iso, parse_iso_instant, parse_timerange, TimeInterval};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnitsError {
    #[error("units `{0}` and `{1}` are not convertible")]
    Inconvertible(String, String),
    #[error("bad time units `{0}`")]
    BadTimeUnits(String),
}

/// Scale of a time-location unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeScale {
    Microseconds,
    Milliseconds,
    Seconds,
    Days,
}

impl TimeScale {
    pub fn micros_per_unit(self) -> i64 {
        match self {
            TimeScale::Microseconds => 1,
            TimeScale::Milliseconds => 1_000,
            TimeScale::Seconds => 1_000_000,
            TimeScale::Days => 86_400_000_000,
        }
    }

    fn word(self) -> &'static str {
        match self {
            TimeScale::Microseconds => "microseconds",
            TimeScale::Milliseconds => "milliseconds",
            TimeScale::Seconds => "seconds",
            TimeScale::Days => "days",
        }
    }

    fn parse(word: &str) -> Option<TimeScale> {
        match word.to_ascii_lowercase().as_str() {
            "microseconds" | "microsecond" | "us" => Some(TimeScale::Microseconds),
            "milliseconds" | "millisecond" | "ms" => Some(TimeScale::Milliseconds),
            "seconds" | "second" | "s" | "sec" => Some(TimeScale::Seconds),
            "days" | "day" => Some(TimeScale::Days),
            _ => None,
        }
    }
}

/// Offset time unit: `<scale> since <epoch>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeUnits {
    pub scale: TimeScale,
    /// Epoch as UTC milliseconds since 1970-01-01T00:00.
    pub epoch_ms: i64,
}

impl TimeUnits {
    pub const UNIX_MS: TimeUnits = TimeUnits { scale: TimeScale::Milliseconds, epoch_ms: 0 };

    pub fn new(scale: TimeScale, epoch_ms: i64) -> Self {
        Self { scale, epoch_ms }
    }

    /// Converts a value in these units to UTC milliseconds since 1970.
    pub fn to_unix_ms(&self, v: f64) -> f64 {
        convert_time(v, *self, TimeUnits::UNIX_MS)
    }

    pub fn from_unix_ms(&self, ms: f64) -> f64 {
        convert_time(ms, TimeUnits::UNIX_MS, *self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Units {
    /// A ratio-scale quantity identified by its label; `""` is dimensionless.
    Ratio(String),
    /// A location in time.
    Time(TimeUnits),
}

impl Default for Units {
    fn default() -> Self {
        Units::dimensionless()
    }
}

impl Units {
    pub fn dimensionless() -> Self {
        Units::Ratio(String::new())
    }

    pub fn ratio(label: impl Into<String>) -> Self {
        Units::Ratio(label.into())
    }

    pub fn is_time(&self) -> bool {
        matches!(self, Units::Time(_))
    }

    pub fn as_time(&self) -> Option<TimeUnits> {
        match self {
            Units::Time(t) => Some(*t),
            Units::Ratio(_) => None,
        }
    }

    pub fn is_dimensionless(&self) -> bool {
        matches!(self, Units::Ratio(l) if l.is_empty())
    }

    pub fn is_convertible_to(&self, other: &Units) -> bool {
        match (self, other) {
            (Units::Time(_), Units::Time(_)) => true,
            (Units::Ratio(a), Units::Ratio(b)) => a == b,
            _ => false,
        }
    }

    /// Converts `v` from these units to `target`.
    pub fn convert(&self, v: f64, target: &Units) -> Result<f64, UnitsError> {
        match (self, target) {
            (Units::Time(a), Units::Time(b)) => Ok(convert_time(v, *a, *b)),
            (Units::Ratio(a), Units::Ratio(b)) if a == b => Ok(v),
            _ => Err(UnitsError::Inconvertible(self.to_string(), target.to_string())),
        }
    }

    /// Parses a units string. Anything of the form `<scale> since <epoch>` is
    /// a time location; all other text is a ratio-scale label.
    pub fn parse(text: &str) -> Result<Units, UnitsError> {
        let t = text.trim();
        let lower = t.to_ascii_lowercase();
        let Some(pos) = lower.find(" since ") else {
            return Ok(Units::Ratio(t.to_string()));
        };
        let scale = TimeScale::parse(t[..pos].trim())
            .ok_or_else(|| UnitsError::BadTimeUnits(text.to_string()))?;
        let epoch_ms = parse_iso_instant(t[pos + 7..].trim())
            .map_err(|_| UnitsError::BadTimeUnits(text.to_string()))?;
        Ok(Units::Time(TimeUnits { scale, epoch_ms }))
    }
}

impl FromStr for Units {
    type Err = UnitsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Units::parse(s)
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Units::Ratio(l) => f.write_str(l),
            Units::Time(t) => write!(f, "{} since {}", t.scale.word(), format_epoch(t.epoch_ms)),
        }
    }
}

/// `YYYY-MM-DDTHH:MM`, extended with seconds and milliseconds only when nonzero.
fn format_epoch(ms: i64) -> String {
    let (y, mo, d, h, mi, s, milli) = civil_fields(ms);
    let mut out = format!("{y:04}-{mo:02}-{d:02}T{h:02}:{mi:02}");
    if s != 0 || milli != 0 {
        out.push_str(&format!(":{s:02}"));
    }
    if milli != 0 {
        out.push_str(&format!(".{milli:03}"));
    }
    out
}

const TWO_POW_53: f64 = 9_007_199_254_740_992.0;

/// Affine conversion between time-location units. Integral inputs are
/// converted with exact integer arithmetic.
fn convert_time(v: f64, from: TimeUnits, to: TimeUnits) -> f64 {
    if from == to {
        return v;
    }
    let src = from.scale.micros_per_unit() as i128;
    let dst = to.scale.micros_per_unit() as i128;
    let offset = (from.epoch_ms as i128 - to.epoch_ms as i128) * 1000;
    if v.is_finite() && v.fract() == 0.0 && v.abs() < TWO_POW_53 {
        let n = v as i128 * src + offset;
        let (q, r) = (n.div_euclid(dst), n.rem_euclid(dst));
        if r == 0 {
            return q as f64;
        }
        return q as f64 + r as f64 / dst as f64;
    }
    v * (src as f64 / dst as f64) + offset as f64 / dst as f64
}

/// A scalar bound to a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Datum {
    pub value: f64,
    pub units: Units,
}

impl Datum {
    pub fn new(value: f64, units: Units) -> Self {
        Self { value, units }
    }

    pub fn convert(&self, target: &Units) -> Result<Datum, UnitsError> {
        Ok(Datum { value: self.units.convert(self.value, target)?, units: target.clone() })
    }

    pub fn compare(&self, other: &Datum) -> Result<std::cmp::Ordering, UnitsError> {
        let o = other.units.convert(other.value, &self.units)?;
        Ok(self.value.total_cmp(&o))
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.units {
            Units::Time(t) => f.write_str(&format_iso(t.to_unix_ms(self.value).round() as i64)),
            Units::Ratio(l) if l.is_empty() => write!(f, "{}", self.value),
            Units::Ratio(l) => write!(f, "{} {}", self.value, l),
        }
    }
}

/// An ordered pair of values sharing one unit; axis ranges use this.
#[derive(Debug, Clone, PartialEq)]
pub struct DatumRange {
    pub min: f64,
    pub max: f64,
    pub units: Units,
}

impl DatumRange {
    pub fn new(min: f64, max: f64, units: Units) -> Result<Self, String> {
        if !(min < max) {
            return Err(format!("range minimum {min} must be below maximum {max}"));
        }
        Ok(Self { min, max, units })
    }

    pub fn from_interval(iv: &TimeInterval) -> Self {
        Self {
            min: iv.start_ms() as f64,
            max: iv.end_ms() as f64,
            units: Units::Time(TimeUnits::UNIX_MS),
        }
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn convert(&self, target: &Units) -> Result<DatumRange, UnitsError> {
        Ok(DatumRange {
            min: self.units.convert(self.min, target)?,
            max: self.units.convert(self.max, target)?,
            units: target.clone(),
        })
    }

    /// Time ranges as a [`TimeInterval`] (rounded to milliseconds).
    pub fn to_interval(&self) -> Option<TimeInterval> {
        let t = self.units.as_time()?;
        let a = t.to_unix_ms(self.min).round() as i64;
        let b = t.to_unix_ms(self.max).round() as i64;
        TimeInterval::new(a, b).ok()
    }

    /// Parses `"<min> to <max> [units]"`, or any time-range text.
    pub fn parse(text: &str) -> Result<DatumRange, String> {
        let t = text.trim();
        if let Some((a, rest)) = split_to(t) {
            if let Ok(min) = a.trim().parse::<f64>() {
                let rest = rest.trim();
                let (num, units) = match rest.find(char::is_whitespace) {
                    Some(i) => (&rest[..i], rest[i..].trim()),
                    None => (rest, ""),
                };
                if let Ok(max) = num.parse::<f64>() {
                    let units = Units::parse(units).map_err(|e| e.to_string())?;
                    return DatumRange::new(min, max, units);
                }
            }
        }
        parse_timerange(t)
            .map(|iv| DatumRange::from_interval(&iv))
            .map_err(|e| e.to_string())
    }
}

fn split_to(t: &str) -> Option<(&str, &str)> {
    let lower = t.to_ascii_lowercase();
    lower.find(" to ").map(|i| (&t[..i], &t[i + 4..]))
}

impl fmt::Display for DatumRange {
    /// Time ranges whose endpoints are whole milliseconds print as ISO
    /// instants; everything else prints as numbers followed by the units.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Units::Time(t) = &self.units {
            let a = t.to_unix_ms(self.min);
            let b = t.to_unix_ms(self.max);
            if *t == TimeUnits::UNIX_MS && a.fract() == 0.0 && b.fract() == 0.0 {
                return write!(f, "{} to {}", format_iso(a as i64), format_iso(b as i64));
            }
        }
        if self.units.is_dimensionless() {
            write!(f, "{} to {}", self.min, self.max)
        } else {
            write!(f, "{} to {} {}", self.min, self.max, self.units)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_time_units() {
        let u = Units::parse("milliseconds since 1970-01-01T00:00").unwrap();
        assert_eq!(u, Units::Time(TimeUnits::UNIX_MS));
        assert_eq!(u.to_string(), "milliseconds since 1970-01-01T00:00");
        let d = Units::parse("days since 2000-01-01T00:00").unwrap();
        assert_eq!(d.to_string(), "days since 2000-01-01T00:00");
        let us = Units::parse("microseconds since 2009-10-04T00:00").unwrap();
        assert!(us.is_time());
        assert_eq!(Units::parse("#/cc").unwrap(), Units::ratio("#/cc"));
        assert!(Units::parse("fortnights since 2000-01-01").is_err());
    }

    #[test]
    fn convert_days_since_2000_to_unix_ms() {
        let days = Units::parse("days since 2000-01-01T00:00").unwrap();
        let ms = Units::Time(TimeUnits::UNIX_MS);
        assert_eq!(days.convert(0.0, &ms).unwrap(), 946_684_800_000.0);
        assert_eq!(days.convert(1.0, &ms).unwrap(), 946_771_200_000.0);
        assert_eq!(ms.convert(946_771_200_000.0, &days).unwrap(), 1.0);
    }

    #[test]
    fn ratio_units_only_convert_to_themselves() {
        let nt = Units::ratio("nT");
        assert_eq!(nt.convert(3.5, &nt).unwrap(), 3.5);
        assert!(nt.convert(1.0, &Units::ratio("eV")).is_err());
        assert!(nt.convert(1.0, &Units::Time(TimeUnits::UNIX_MS)).is_err());
    }

    #[test]
    fn fractional_conversion_is_close() {
        let days = Units::parse("days since 2000-01-01T00:00").unwrap();
        let ms = Units::Time(TimeUnits::UNIX_MS);
        assert_eq!(days.convert(0.5, &ms).unwrap(), 946_684_800_000.0 + 43_200_000.0);
    }

    #[test]
    fn datum_range_text_forms() {
        let r = DatumRange::parse("2.8 to 7.2 nT").unwrap();
        assert_eq!((r.min, r.max, r.units.clone()), (2.8, 7.2, Units::ratio("nT")));
        assert_eq!(DatumRange::parse(&r.to_string()).unwrap(), r);
        let t = DatumRange::parse("June 2008").unwrap();
        assert_eq!(t.to_string(), "2008-06-01T00:00:00.000Z to 2008-07-01T00:00:00.000Z");
        assert_eq!(DatumRange::parse(&t.to_string()).unwrap(), t);
        let frac = DatumRange::new(0.5, 1.5, Units::Time(TimeUnits::UNIX_MS)).unwrap();
        assert_eq!(DatumRange::parse(&frac.to_string()).unwrap(), frac);
        assert!(DatumRange::parse("5 to 1").is_err());
    }
}
