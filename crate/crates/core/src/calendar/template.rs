//! Filename templates.
//!
//! Token syntax:
//!
//! | token  | meaning                                   |
//! |--------|-------------------------------------------|
//! | `$Y`   | four-digit year                           |
//! | `$m`   | two-digit month (01-12)                   |
//! | `$d`   | two-digit day of month                    |
//! | `$H`   | two-digit hour (00-23)                    |
//! | `...`  | wildcard: any run of characters except `/` |
//! | `.`    | wildcard when it directly follows `_v`    |
//!
//! Everything else is literal. A field may appear more than once (for
//! instance `$Y` in the directory and in the file name); all occurrences must
//! agree when matching.

use std::fmt;

use thiserror::Error;

use super::{add_months, checked_ymd_ms, civil_fields, TimeInterval, MS_PER_DAY, MS_PER_HOUR};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("unknown template field `${0}`")]
    UnknownField(char),
    #[error("dangling `$` at end of template")]
    DanglingDollar,
    #[error("template `{0}` contains wildcards; a concrete name cannot be formatted")]
    Wildcard(String),
    #[error("template `{0}` has no calendar fields")]
    NoFields(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Year,
    Month,
    Day,
    Hour,
}

impl Field {
    fn width(self) -> usize {
        match self {
            Field::Year => 4,
            _ => 2,
        }
    }

    fn symbol(self) -> char {
        match self {
            Field::Year => 'Y',
            Field::Month => 'm',
            Field::Day => 'd',
            Field::Hour => 'H',
        }
    }

    fn in_range(self, v: u32) -> bool {
        match self {
            Field::Year => true,
            Field::Month => (1..=12).contains(&v),
            Field::Day => (1..=31).contains(&v),
            Field::Hour => v < 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    Literal(String),
    Field(Field),
    Wildcard,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileTemplate {
    tokens: Vec<Token>,
}

/// Field values captured while matching.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    year: Option<u32>,
    month: Option<u32>,
    day: Option<u32>,
    hour: Option<u32>,
}

impl Bindings {
    fn get(&self, f: Field) -> Option<u32> {
        match f {
            Field::Year => self.year,
            Field::Month => self.month,
            Field::Day => self.day,
            Field::Hour => self.hour,
        }
    }

    fn set(&mut self, f: Field, v: u32) {
        let slot = match f {
            Field::Year => &mut self.year,
            Field::Month => &mut self.month,
            Field::Day => &mut self.day,
            Field::Hour => &mut self.hour,
        };
        *slot = Some(v);
    }

    pub fn is_empty(&self) -> bool {
        *self == Bindings::default()
    }

    /// The calendar interval implied by the finest bound field. Returns
    /// `None` when the bound fields do not name a real calendar unit (a day
    /// without a month, February 30th, ...).
    pub fn interval(&self) -> Option<TimeInterval> {
        let year = self.year? as i32;
        let Some(month) = self.month else {
            if self.day.is_some() || self.hour.is_some() {
                return None;
            }
            let start = checked_ymd_ms(year, 1, 1)?;
            return TimeInterval::new(start, add_months(start, 12)).ok();
        };
        let Some(day) = self.day else {
            if self.hour.is_some() {
                return None;
            }
            let start = checked_ymd_ms(year, month, 1)?;
            return TimeInterval::new(start, add_months(start, 1)).ok();
        };
        let day_start = checked_ymd_ms(year, month, day)?;
        match self.hour {
            Some(h) => {
                let start = day_start + h as i64 * MS_PER_HOUR;
                TimeInterval::new(start, start + MS_PER_HOUR).ok()
            }
            None => TimeInterval::new(day_start, day_start + MS_PER_DAY).ok(),
        }
    }
}

impl FileTemplate {
    pub fn parse(text: &str) -> Result<Self, TemplateError> {
        let mut tokens = Vec::new();
        let mut literal = String::new();
        let mut chars = text.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '$' => {
                    let f = match chars.next() {
                        Some('Y') => Field::Year,
                        Some('m') => Field::Month,
                        Some('d') => Field::Day,
                        Some('H') => Field::Hour,
                        Some(other) => return Err(TemplateError::UnknownField(other)),
                        None => return Err(TemplateError::DanglingDollar),
                    };
                    flush(&mut tokens, &mut literal);
                    tokens.push(Token::Field(f));
                }
                '.' => {
                    let mut ahead = chars.clone();
                    if ahead.next() == Some('.') && ahead.next() == Some('.') {
                        chars.next();
                        chars.next();
                        flush(&mut tokens, &mut literal);
                        tokens.push(Token::Wildcard);
                    } else if literal.ends_with("_v") {
                        flush(&mut tokens, &mut literal);
                        tokens.push(Token::Wildcard);
                    } else {
                        literal.push('.');
                    }
                }
                _ => literal.push(c),
            }
        }
        flush(&mut tokens, &mut literal);
        Ok(Self { tokens })
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn has_fields(&self) -> bool {
        self.tokens.iter().any(|t| matches!(t, Token::Field(_)))
    }

    pub fn has_wildcards(&self) -> bool {
        self.tokens.iter().any(|t| matches!(t, Token::Wildcard))
    }

    /// True when the template contains anything besides literal text.
    pub fn is_templated(&self) -> bool {
        self.has_fields() || self.has_wildcards()
    }

    /// Splits the template at `/` into per-path-segment templates.
    pub fn segments(&self) -> Vec<FileTemplate> {
        let mut segs = vec![Vec::new()];
        for tok in &self.tokens {
            match tok {
                Token::Literal(s) => {
                    let mut parts = s.split('/');
                    if let Some(first) = parts.next() {
                        if !first.is_empty() {
                            segs.last_mut().unwrap().push(Token::Literal(first.to_string()));
                        }
                    }
                    for p in parts {
                        segs.push(Vec::new());
                        if !p.is_empty() {
                            segs.last_mut().unwrap().push(Token::Literal(p.to_string()));
                        }
                    }
                }
                other => segs.last_mut().unwrap().push(other.clone()),
            }
        }
        segs.into_iter().map(|tokens| FileTemplate { tokens }).collect()
    }

    /// Substitutes every field with the zero-padded calendar value of `t_ms`.
    pub fn format(&self, t_ms: i64) -> Result<String, TemplateError> {
        if self.has_wildcards() {
            return Err(TemplateError::Wildcard(self.to_string()));
        }
        let (y, m, d, h, ..) = civil_fields(t_ms);
        let mut out = String::new();
        for tok in &self.tokens {
            match tok {
                Token::Literal(s) => out.push_str(s),
                Token::Field(Field::Year) => out.push_str(&format!("{y:04}")),
                Token::Field(Field::Month) => out.push_str(&format!("{m:02}")),
                Token::Field(Field::Day) => out.push_str(&format!("{d:02}")),
                Token::Field(Field::Hour) => out.push_str(&format!("{h:02}")),
                Token::Wildcard => unreachable!(),
            }
        }
        Ok(out)
    }

    /// Matches a whole name and returns the interval implied by its finest field.
    pub fn match_name(&self, name: &str) -> Option<TimeInterval> {
        if !self.has_fields() {
            return None;
        }
        self.match_with(name, &Bindings::default())?.interval()
    }

    /// Matches `name` given fields already bound by enclosing path segments.
    pub fn match_with(&self, name: &str, bound: &Bindings) -> Option<Bindings> {
        match_tokens(&self.tokens, name.as_bytes(), bound.clone())
    }
}

fn flush(tokens: &mut Vec<Token>, literal: &mut String) {
    if !literal.is_empty() {
        tokens.push(Token::Literal(std::mem::take(literal)));
    }
}

fn match_tokens(tokens: &[Token], name: &[u8], mut b: Bindings) -> Option<Bindings> {
    let Some((first, rest)) = tokens.split_first() else {
        return name.is_empty().then_some(b);
    };
    match first {
        Token::Literal(s) => {
            let s = s.as_bytes();
            if name.starts_with(s) {
                match_tokens(rest, &name[s.len()..], b)
            } else {
                None
            }
        }
        Token::Field(f) => {
            let w = f.width();
            if name.len() < w || !name[..w].iter().all(u8::is_ascii_digit) {
                return None;
            }
            let v: u32 = std::str::from_utf8(&name[..w]).ok()?.parse().ok()?;
            if !f.in_range(v) {
                return None;
            }
            match b.get(*f) {
                Some(prev) if prev != v => return None,
                _ => b.set(*f, v),
            }
            match_tokens(rest, &name[w..], b)
        }
        Token::Wildcard => {
            let limit = name.iter().position(|&c| c == b'/').unwrap_or(name.len());
            (0..=limit).find_map(|end| match_tokens(rest, &name[end..], b.clone()))
        }
    }
}

impl fmt::Display for FileTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for tok in &self.tokens {
            match tok {
                Token::Literal(s) => f.write_str(s)?,
                Token::Field(field) => write!(f, "${}", field.symbol())?,
                Token::Wildcard => f.write_str("...")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calendar::{parse_timerange, ymd_ms};

    #[test]
    fn formats_with_zero_padding() {
        let t = FileTemplate::parse("$Y/ac_k0_swe_$Y$m$d.cdf").unwrap();
        assert_eq!(t.format(ymd_ms(2008, 6, 5)).unwrap(), "2008/ac_k0_swe_20080605.cdf");
        let t = FileTemplate::parse("$Y$m$d").unwrap();
        assert_eq!(t.format(ymd_ms(2008, 1, 2)).unwrap(), "20080102");
    }

    #[test]
    fn literal_template_formats_unchanged() {
        let t = FileTemplate::parse("plain_name.dat").unwrap();
        assert!(!t.is_templated());
        assert_eq!(t.format(0).unwrap(), "plain_name.dat");
    }

    #[test]
    fn wildcard_template_cannot_format() {
        let t = FileTemplate::parse("ac_$Y$m$d_v...cdf").unwrap();
        assert!(matches!(t.format(0), Err(TemplateError::Wildcard(_))));
    }

    #[test]
    fn version_wildcard_matches() {
        let t = FileTemplate::parse("ac_k0_swe_$Y$m$d_v...cdf").unwrap();
        let iv = t.match_name("ac_k0_swe_20080605_v02.cdf").unwrap();
        assert_eq!(iv, parse_timerange("2008-06-05").unwrap());
        assert_eq!(t.match_name("ac_k0_swe_200806_v02.cdf"), None);
        // single-dot form after _v
        let t = FileTemplate::parse("x_$Y$m$d_v.cdf").unwrap();
        assert!(t.match_name("x_20080605_v02.cdf").is_some());
        assert!(t.match_name("x_20080605_v10.cdf").is_some());
    }

    #[test]
    fn repeated_fields_must_agree() {
        let t = FileTemplate::parse("$Y/$Y$m$d.dat").unwrap();
        assert!(t.match_name("2008/20080605.dat").is_some());
        assert_eq!(t.match_name("2008/20090605.dat"), None);
    }

    #[test]
    fn invalid_dates_do_not_match() {
        let t = FileTemplate::parse("$Y$m$d.dat").unwrap();
        assert_eq!(t.match_name("20080230.dat"), None);
        assert_eq!(t.match_name("20081305.dat"), None);
    }

    #[test]
    fn segments_split_on_slash() {
        let t = FileTemplate::parse("data/$Y/f_$Y$m$d.csv").unwrap();
        let segs: Vec<String> = t.segments().iter().map(|s| s.to_string()).collect();
        assert_eq!(segs, vec!["data", "$Y", "f_$Y$m$d.csv"]);
    }

    #[test]
    fn unknown_field_rejected() {
        assert_eq!(FileTemplate::parse("$Q"), Err(TemplateError::UnknownField('Q')));
        assert_eq!(FileTemplate::parse("abc$"), Err(TemplateError::DanglingDollar));
    }

    #[test]
    fn display_round_trip() {
        let t = FileTemplate::parse("$Y/ac_$Y$m$d_v...cdf").unwrap();
        assert_eq!(t.to_string(), "$Y/ac_$Y$m$d_v...cdf");
        assert_eq!(FileTemplate::parse(&t.to_string()).unwrap(), t);
    }
}
