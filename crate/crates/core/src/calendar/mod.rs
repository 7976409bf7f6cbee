//! Calendar arithmetic, the time-range grammar, and filename templates.
//!
//! Every instant is UTC and is carried as integer milliseconds since
//! 1970-01-01T00:00Z. Intervals are half-open.

mod template;

pub use template::{Bindings, Field, FileTemplate, TemplateError, Token};

use std::fmt;

use chrono::{DateTime, Datelike, NaiveDate, NaiveDateTime, NaiveTime, Timelike};
use thiserror::Error;

pub const MS_PER_SECOND: i64 = 1_000;
pub const MS_PER_MINUTE: i64 = 60 * MS_PER_SECOND;
pub const MS_PER_HOUR: i64 = 60 * MS_PER_MINUTE;
pub const MS_PER_DAY: i64 = 24 * MS_PER_HOUR;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeError {
    #[error("unparseable time `{0}`")]
    Unparseable(String),
    #[error("time range start must precede end: `{0}`")]
    EmptyRange(String),
    #[error("instant out of calendar range")]
    OutOfRange,
}

/// Half-open `[start, end)` interval of UTC milliseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeInterval {
    start: i64,
    end: i64,
}

impl TimeInterval {
    pub fn new(start_ms: i64, end_ms: i64) -> Result<Self, TimeError> {
        if start_ms >= end_ms {
            return Err(TimeError::EmptyRange(format!(
                "{} to {}",
                format_iso(start_ms),
                format_iso(end_ms)
            )));
        }
        Ok(Self { start: start_ms, end: end_ms })
    }

    pub fn start_ms(&self) -> i64 {
        self.start
    }

    pub fn end_ms(&self) -> i64 {
        self.end
    }

    pub fn span_ms(&self) -> i64 {
        self.end - self.start
    }

    pub fn contains(&self, t_ms: i64) -> bool {
        self.start <= t_ms && t_ms < self.end
    }

    pub fn intersects(&self, other: &TimeInterval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn intersection(&self, other: &TimeInterval) -> Option<TimeInterval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        (start < end).then_some(TimeInterval { start, end })
    }

    /// Length of the overlap in milliseconds, zero when disjoint.
    pub fn overlap_ms(&self, other: &TimeInterval) -> i64 {
        self.intersection(other).map_or(0, |i| i.span_ms())
    }
}

impl fmt::Display for TimeInterval {
    /// `start/end` in ISO-8601; midnight-aligned endpoints are written as dates.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start % MS_PER_DAY == 0 && self.end % MS_PER_DAY == 0 {
            write!(f, "{}/{}", format_date(self.start), format_date(self.end))
        } else {
            write!(f, "{}/{}", format_iso(self.start), format_iso(self.end))
        }
    }
}

/// Calendar stepping unit used by aggregation and PNG walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cadence {
    Hour,
    Day,
    Month,
    Year,
}

impl Cadence {
    pub fn parse(text: &str) -> Option<Cadence> {
        match text.trim().to_ascii_lowercase().as_str() {
            "hour" | "hourly" => Some(Cadence::Hour),
            "day" | "daily" => Some(Cadence::Day),
            "month" | "monthly" => Some(Cadence::Month),
            "year" | "yearly" => Some(Cadence::Year),
            _ => None,
        }
    }

    /// Largest boundary of this cadence that is `<= t_ms`.
    pub fn floor(&self, t_ms: i64) -> i64 {
        match self {
            Cadence::Hour => t_ms.div_euclid(MS_PER_HOUR) * MS_PER_HOUR,
            Cadence::Day => t_ms.div_euclid(MS_PER_DAY) * MS_PER_DAY,
            Cadence::Month => {
                let dt = to_datetime(t_ms);
                ymd_ms(dt.year(), dt.month(), 1)
            }
            Cadence::Year => ymd_ms(to_datetime(t_ms).year(), 1, 1),
        }
    }

    /// The boundary following `boundary_ms` (which must itself be aligned).
    pub fn next(&self, boundary_ms: i64) -> i64 {
        match self {
            Cadence::Hour => boundary_ms + MS_PER_HOUR,
            Cadence::Day => boundary_ms + MS_PER_DAY,
            Cadence::Month => add_months(boundary_ms, 1),
            Cadence::Year => add_months(boundary_ms, 12),
        }
    }
}

/// Calendar-aligned intervals tiling `range`; the partial first and last
/// intervals are clipped to the range.
pub fn enumerate_intervals(range: &TimeInterval, cadence: Cadence) -> Vec<TimeInterval> {
    let mut out = Vec::new();
    let mut t = cadence.floor(range.start);
    while t < range.end {
        let next = cadence.next(t);
        let start = t.max(range.start);
        let end = next.min(range.end);
        out.push(TimeInterval { start, end });
        t = next;
    }
    out
}

pub(crate) fn to_datetime(t_ms: i64) -> NaiveDateTime {
    DateTime::from_timestamp_millis(t_ms)
        .map(|d| d.naive_utc())
        .unwrap_or(NaiveDateTime::MIN)
}

pub(crate) fn ymd_ms(year: i32, month: u32, day: u32) -> i64 {
    NaiveDate::from_ymd_opt(year, month, day)
        .map(|d| d.and_time(NaiveTime::MIN).and_utc().timestamp_millis())
        .unwrap_or(i64::MIN)
}

pub(crate) fn checked_ymd_ms(year: i32, month: u32, day: u32) -> Option<i64> {
    NaiveDate::from_ymd_opt(year, month, day)
        .map(|d| d.and_time(NaiveTime::MIN).and_utc().timestamp_millis())
}

/// Adds calendar months, keeping the day-of-month (clamped) and time of day.
pub fn add_months(t_ms: i64, months: i32) -> i64 {
    let dt = to_datetime(t_ms);
    let total = dt.year() * 12 + dt.month0() as i32 + months;
    let (year, month0) = (total.div_euclid(12), total.rem_euclid(12) as u32);
    let mut day = dt.day();
    loop {
        if let Some(d) = NaiveDate::from_ymd_opt(year, month0 + 1, day) {
            return d.and_time(dt.time()).and_utc().timestamp_millis();
        }
        day -= 1;
    }
}

/// `YYYY-MM-DDTHH:MM:SS.mmmZ`.
pub fn format_iso(t_ms: i64) -> String {
    to_datetime(t_ms).format("%Y-%m-%dT%H:%M:%S%.3fZ").to_string()
}

/// `YYYY-MM-DD`.
pub fn format_date(t_ms: i64) -> String {
    to_datetime(t_ms).format("%Y-%m-%d").to_string()
}

/// Calendar fields of an instant: (year, month, day, hour, minute, second, millisecond).
pub fn civil_fields(t_ms: i64) -> (i32, u32, u32, u32, u32, u32, u32) {
    let dt = to_datetime(t_ms);
    (
        dt.year(),
        dt.month(),
        dt.day(),
        dt.hour(),
        dt.minute(),
        dt.second(),
        dt.and_utc().timestamp_subsec_millis(),
    )
}

const MONTHS: [&str; 12] = [
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december",
];

fn month_number(word: &str) -> Option<u32> {
    let w = word.to_ascii_lowercase();
    MONTHS
        .iter()
        .position(|m| *m == w || (w.len() == 3 && m.starts_with(&w)))
        .map(|i| i as u32 + 1)
        .or(if w == "sept" { Some(9) } else { None })
}

fn parse_year(text: &str) -> Option<i32> {
    (text.len() == 4 && text.bytes().all(|b| b.is_ascii_digit()))
        .then(|| text.parse().ok())
        .flatten()
}

fn month_interval(year: i32, month: u32) -> TimeInterval {
    let start = ymd_ms(year, month, 1);
    TimeInterval { start, end: add_months(start, 1) }
}

/// An instant together with the calendar unit its text resolves to
/// ("2008" is a year, "2008-06-05T12" an hour).
#[derive(Debug, Clone, Copy)]
struct TimePoint {
    start: i64,
    end: i64,
}

fn parse_point(text: &str) -> Option<TimePoint> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some(year) = parse_year(t) {
        let start = checked_ymd_ms(year, 1, 1)?;
        return Some(TimePoint { start, end: add_months(start, 12) });
    }
    // Month-name forms: "2008-June", "June 2008", "June-2008", "2008 June".
    let words: Vec<&str> = t.split(|c: char| c == '-' || c.is_whitespace()).filter(|w| !w.is_empty()).collect();
    if words.len() == 2 {
        let pair = match (parse_year(words[0]), month_number(words[1])) {
            (Some(y), Some(m)) => Some((y, m)),
            _ => match (month_number(words[0]), parse_year(words[1])) {
                (Some(m), Some(y)) => Some((y, m)),
                _ => None,
            },
        };
        if let Some((y, m)) = pair {
            let iv = month_interval(y, m);
            return Some(TimePoint { start: iv.start, end: iv.end });
        }
    }
    parse_iso_with_precision(t).map(|(start, unit)| TimePoint { start, end: start + unit.max(1) })
}

/// Parses an ISO-8601 instant (calendar or ordinal date, optional time, optional
/// fractional day-of-year) to UTC milliseconds.
pub fn parse_iso_instant(text: &str) -> Result<i64, TimeError> {
    parse_iso_with_precision(text.trim())
        .map(|(t, _)| t)
        .ok_or_else(|| TimeError::Unparseable(text.to_string()))
}

/// Returns the instant and the length in milliseconds of its least significant field.
fn parse_iso_with_precision(text: &str) -> Option<(i64, i64)> {
    let text = text.strip_suffix('Z').unwrap_or(text);
    let (date_part, time_part) = match text.find(['T', ' ']) {
        Some(i) => (&text[..i], Some(&text[i + 1..])),
        None => (text, None),
    };
    let date_ms = parse_date_part(date_part)?;
    let (day_start, date_unit, doy_fraction) = date_ms;
    if let Some(frac) = doy_fraction {
        if time_part.is_some() {
            return None;
        }
        let ms = (frac * MS_PER_DAY as f64).round() as i64;
        return Some((day_start + ms, 1));
    }
    let Some(time) = time_part else {
        return Some((day_start, date_unit));
    };
    let (offset, unit) = parse_time_of_day(time)?;
    Some((day_start + offset, unit))
}

/// (start of day in ms, unit length, fractional-day part for "YYYY-DDD.fff").
fn parse_date_part(text: &str) -> Option<(i64, i64, Option<f64>)> {
    let parts: Vec<&str> = text.split('-').collect();
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    match parts.as_slice() {
        [y, m, d] if y.len() == 4 && m.len() == 2 && d.len() == 2 && digits(y) && digits(m) && digits(d) => {
            let start = checked_ymd_ms(y.parse().ok()?, m.parse().ok()?, d.parse().ok()?)?;
            Some((start, MS_PER_DAY, None))
        }
        [y, m] if y.len() == 4 && m.len() == 2 && digits(y) && digits(m) => {
            let month: u32 = m.parse().ok()?;
            if !(1..=12).contains(&month) {
                return None;
            }
            let iv = month_interval(y.parse().ok()?, month);
            Some((iv.start, iv.span_ms(), None))
        }
        [y, doy] if y.len() == 4 && digits(y) => {
            let (int_part, frac_part) = match doy.split_once('.') {
                Some((a, b)) => (a, Some(b)),
                None => (*doy, None),
            };
            if int_part.len() != 3 || !digits(int_part) {
                return None;
            }
            let year: i32 = y.parse().ok()?;
            let day: i64 = int_part.parse().ok()?;
            let jan1 = checked_ymd_ms(year, 1, 1)?;
            let days_in_year = (add_months(jan1, 12) - jan1) / MS_PER_DAY;
            if day < 1 || day > days_in_year {
                return None;
            }
            let start = jan1 + (day - 1) * MS_PER_DAY;
            match frac_part {
                Some(f) if digits(f) => {
                    let frac: f64 = format!("0.{f}").parse().ok()?;
                    Some((start, MS_PER_DAY, Some(frac)))
                }
                Some(_) => None,
                None => Some((start, MS_PER_DAY, None)),
            }
        }
        _ => None,
    }
}

fn parse_time_of_day(text: &str) -> Option<(i64, i64)> {
    let (hms, frac) = match text.split_once('.') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let fields: Vec<&str> = hms.split(':').collect();
    if fields.is_empty() || fields.len() > 3 || fields.iter().any(|f| f.len() != 2 || !f.bytes().all(|b| b.is_ascii_digit())) {
        return None;
    }
    let nums: Vec<i64> = fields.iter().map(|f| f.parse().unwrap_or(99)).collect();
    let limits = [24, 60, 61];
    if nums.iter().zip(limits).any(|(n, lim)| *n >= lim) {
        return None;
    }
    let units = [MS_PER_HOUR, MS_PER_MINUTE, MS_PER_SECOND];
    let mut ms: i64 = nums.iter().zip(units).map(|(n, u)| n * u).sum();
    let mut unit = units[nums.len() - 1];
    if let Some(f) = frac {
        if fields.len() != 3 || f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let seconds: f64 = format!("0.{f}").parse().ok()?;
        ms += (seconds * 1000.0).round() as i64;
        unit = 1;
    }
    Some((ms, unit))
}

/// Parses the time-range grammar: a calendar unit ("2008", "2008-June",
/// "June 2008", "2008-06", "2008-06-05", "2008-157"), an ISO instant
/// (covering its least significant field), `A to B`, or `A/B`.
pub fn parse_timerange(text: &str) -> Result<TimeInterval, TimeError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(TimeError::Unparseable(text.to_string()));
    }
    let lower = trimmed.to_ascii_lowercase();
    let pair = lower
        .find(" to ")
        .map(|i| (&trimmed[..i], &trimmed[i + 4..]))
        .or_else(|| trimmed.split_once('/'));
    if let Some((a, b)) = pair {
        let start = parse_point(a).ok_or_else(|| TimeError::Unparseable(text.to_string()))?;
        let end = parse_point(b).ok_or_else(|| TimeError::Unparseable(text.to_string()))?;
        return TimeInterval::new(start.start, end.start)
            .map_err(|_| TimeError::EmptyRange(text.to_string()));
    }
    let point = parse_point(trimmed).ok_or_else(|| TimeError::Unparseable(text.to_string()))?;
    TimeInterval::new(point.start, point.end)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn day(y: i32, m: u32, d: u32) -> i64 {
        ymd_ms(y, m, d)
    }

    #[test]
    fn month_name_forms_agree() {
        let a = parse_timerange("2008-June").unwrap();
        assert_eq!(a, TimeInterval::new(day(2008, 6, 1), day(2008, 7, 1)).unwrap());
        assert_eq!(parse_timerange("June 2008").unwrap(), a);
        assert_eq!(parse_timerange("jun 2008").unwrap(), a);
        assert_eq!(parse_timerange("2008-06-01 to 2008-07-01").unwrap(), a);
        assert_eq!(parse_timerange("2008-06").unwrap(), a);
    }

    #[test]
    fn explicit_endpoints() {
        let iv = parse_timerange("2008-06-01 to 2008-06-15").unwrap();
        assert_eq!(iv.start_ms(), day(2008, 6, 1));
        assert_eq!(iv.end_ms(), day(2008, 6, 15));
        assert_eq!(parse_timerange("2008-06-01/2008-06-15").unwrap(), iv);
    }

    #[test]
    fn units_expand() {
        let y = parse_timerange("2008").unwrap();
        assert_eq!(y.span_ms(), 366 * MS_PER_DAY);
        let d = parse_timerange("2008-06-05").unwrap();
        assert_eq!(d.span_ms(), MS_PER_DAY);
        let doy = parse_timerange("2008-157").unwrap();
        assert_eq!(doy, d);
        let h = parse_timerange("2008-06-05T12").unwrap();
        assert_eq!(h.span_ms(), MS_PER_HOUR);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_timerange("").is_err());
        assert!(parse_timerange("Juno 2008").is_err());
        assert!(matches!(
            parse_timerange("2008-07-01 to 2008-06-01"),
            Err(TimeError::EmptyRange(_))
        ));
        assert!(parse_timerange("2008-13").is_err());
    }

    #[test]
    fn iso_instants() {
        assert_eq!(parse_iso_instant("1970-01-01T00:00:00Z").unwrap(), 0);
        assert_eq!(parse_iso_instant("2000-01-01T00:00").unwrap(), 946_684_800_000);
        assert_eq!(parse_iso_instant("1970-01-01T00:00:01.250").unwrap(), 1250);
        assert_eq!(parse_iso_instant("1970-001.5").unwrap(), MS_PER_DAY / 2);
        assert!(parse_iso_instant("1970-01-01T25:00").is_err());
        assert_eq!(format_iso(1250), "1970-01-01T00:00:01.250Z");
    }

    #[test]
    fn display_round_trips() {
        let iv = parse_timerange("2008-06-05").unwrap();
        assert_eq!(iv.to_string(), "2008-06-05/2008-06-06");
        assert_eq!(parse_timerange(&iv.to_string()).unwrap(), iv);
        let h = parse_timerange("2008-06-05T12").unwrap();
        assert_eq!(parse_timerange(&h.to_string()).unwrap(), h);
    }

    #[test]
    fn enumerate_june_by_day() {
        let june = parse_timerange("2008-June").unwrap();
        let days = enumerate_intervals(&june, Cadence::Day);
        assert_eq!(days.len(), 30);
        assert_eq!(days[0].start_ms(), june.start_ms());
        assert_eq!(days[29].end_ms(), june.end_ms());
    }

    #[test]
    fn enumerate_single_day_is_identity() {
        let d = parse_timerange("2008-06-05").unwrap();
        assert_eq!(enumerate_intervals(&d, Cadence::Day), vec![d]);
    }

    #[test]
    fn enumerate_clips_partial_months() {
        let r = TimeInterval::new(day(2008, 6, 15), day(2008, 8, 15)).unwrap();
        let months = enumerate_intervals(&r, Cadence::Month);
        assert_eq!(
            months,
            vec![
                TimeInterval::new(day(2008, 6, 15), day(2008, 7, 1)).unwrap(),
                TimeInterval::new(day(2008, 7, 1), day(2008, 8, 1)).unwrap(),
                TimeInterval::new(day(2008, 8, 1), day(2008, 8, 15)).unwrap(),
            ]
        );
    }

    #[test]
    fn add_months_clamps_day() {
        assert_eq!(add_months(day(2008, 1, 31), 1), day(2008, 2, 29));
        assert_eq!(add_months(day(2008, 12, 1), 1), day(2009, 1, 1));
    }
}
