mod common;

use common::*;
use proptest::prelude::*;
use qview_core::calendar::{civil_fields, format_iso, parse_iso_instant, FileTemplate};
use qview_core::dom::{DataResolver, DomEditor, PropValue};
use qview_core::qdataset::{QDataSet, Units};
use qview_core::render::axis::linear_ticks;
use qview_core::uri::Diagnostic;
use std::sync::Arc;

#[test]
fn epoch_oracle_fixed_points() {
    assert_eq!(days_from_civil(1970, 1, 1), 0);
    assert_eq!(days_from_civil(2000, 1, 1), 10_957);
    assert_eq!(days_from_civil(1969, 12, 31), -1);
    assert_eq!(days_from_civil(2000, 3, 1) - days_from_civil(2000, 2, 1), 29);
    assert_eq!(days_from_civil(1900, 3, 1) - days_from_civil(1900, 2, 1), 28);
    assert_eq!(civil_ms(2000, 1, 1, 0, 0, 0, 0), 946_684_800_000);
    assert_eq!(civil_ms(2000, 1, 2, 0, 0, 0, 0), 946_771_200_000);
}

#[test]
fn days_since_2000_converts_to_unix_ms() {
    let days = Units::parse("days since 2000-01-01T00:00").unwrap();
    let ms = Units::parse("milliseconds since 1970-01-01T00:00").unwrap();
    assert_eq!(days.convert(0.0, &ms).unwrap(), civil_ms(2000, 1, 1, 0, 0, 0, 0) as f64);
    assert_eq!(days.convert(1.0, &ms).unwrap(), civil_ms(2000, 1, 2, 0, 0, 0, 0) as f64);
    assert_eq!(days.convert(0.0, &ms).unwrap(), 946_684_800_000.0);
    assert_eq!(days.convert(1.0, &ms).unwrap(), 946_771_200_000.0);
}

fn civil() -> impl Strategy<Value = (i64, u32, u32, u32, u32, u32, u32)> {
    (1800i64..2200, 1u32..=12)
        .prop_flat_map(|(y, m)| (Just(y), Just(m), 1..=days_in_month(y, m), 0u32..24, 0u32..60, 0u32..60, 0u32..1000))
}

proptest! {
    #[test]
    fn calendar_agrees_with_epoch_oracle((y, m, d, h, mi, s, ms) in civil()) {
        let t = civil_ms(y, m, d, h, mi, s, ms);
        let text = format!("{y:04}-{m:02}-{d:02}T{h:02}:{mi:02}:{s:02}.{ms:03}Z");
        prop_assert_eq!(parse_iso_instant(&text).unwrap(), t);
        prop_assert_eq!(format_iso(t), text);
        prop_assert_eq!(civil_fields(t), (y as i32, m, d, h, mi, s, ms));
    }

    #[test]
    fn day_units_agree_with_epoch_oracle(days in -40_000i64..40_000, (y, m, d, ..) in civil()) {
        let epoch = civil_ms(y, m, d, 0, 0, 0, 0);
        let u = Units::parse(&format!("days since {y:04}-{m:02}-{d:02}T00:00")).unwrap();
        let ms = Units::parse("milliseconds since 1970-01-01T00:00").unwrap();
        prop_assert_eq!(u.convert(days as f64, &ms).unwrap(), (epoch + days * 86_400_000) as f64);
    }
}

fn literal() -> impl Strategy<Value = Piece> {
    "[a-z_]{1,3}".prop_map(Piece::Lit)
}

/// Templates with fields in calendar order, separated by lowercase literals
/// and wildcards.
fn template() -> impl Strategy<Value = Vec<Piece>> {
    (
        prop::option::of(literal()),
        prop::collection::vec(any::<bool>(), 3),
        prop::collection::vec(prop_oneof![literal(), Just(Piece::Wild), Just(Piece::Lit(String::new()))], 4),
    )
        .prop_map(|(head, include, seps)| {
            let mut out: Vec<Piece> = head.into_iter().collect();
            let fields = [Piece::Year, Piece::Month, Piece::Day, Piece::Hour];
            for (i, f) in fields.into_iter().enumerate() {
                if i == 0 || include[i - 1] {
                    out.push(f);
                }
                match &seps[i] {
                    Piece::Lit(s) if s.is_empty() => {}
                    p => out.push(p.clone()),
                }
            }
            out
        })
}

/// A name built from the template at time `t`; wildcards become uppercase
/// filler so literals and filler cannot be confused.
fn name_for(pieces: &[Piece], t: i64, fill: &str) -> String {
    let (y, m, d, h, ..) = civil_fields(t);
    pieces
        .iter()
        .map(|p| match p {
            Piece::Lit(s) => s.clone(),
            Piece::Year => format!("{y:04}"),
            Piece::Month => format!("{m:02}"),
            Piece::Day => format!("{d:02}"),
            Piece::Hour => format!("{h:02}"),
            Piece::Wild => fill.to_string(),
        })
        .collect()
}

proptest! {
    #[test]
    fn template_matching_agrees_with_regex(
        pieces in template(),
        t in 0i64..4_102_444_800_000,
        fill in "[A-Z0-9]{0,3}",
        edit in prop::option::of((any::<prop::sample::Index>(), "[0-9a-z_]")),
    ) {
        let mut name = name_for(&pieces, t, &fill);
        if let Some((at, ch)) = edit {
            if !name.is_empty() {
                let i = at.index(name.len());
                name.replace_range(i..i + 1, &ch);
            }
        }
        let tpl = FileTemplate::parse(&Piece::template(&pieces)).unwrap();
        let got = tpl.match_name(&name).map(|iv| (iv.start_ms(), iv.end_ms()));
        prop_assert_eq!(got, regex_match(&pieces, &name), "template {} name {}", Piece::template(&pieces), name);
    }

    #[test]
    fn unedited_names_match_their_own_interval(pieces in template(), t in 0i64..4_102_444_800_000) {
        let name = name_for(&pieces, t, "X");
        let tpl = FileTemplate::parse(&Piece::template(&pieces)).unwrap();
        let iv = tpl.match_name(&name);
        prop_assert!(iv.is_some_and(|iv| iv.contains(t)) || regex_match(&pieces, &name).is_none());
    }
}

#[test]
fn regex_oracle_examples() {
    let p = [Piece::Lit("ac_k0_swe_".into()), Piece::Year, Piece::Month, Piece::Day, Piece::Lit("_v".into()), Piece::Wild, Piece::Lit(".cdf".into())];
    assert_eq!(Piece::template(&p), "ac_k0_swe_$Y$m$d_v....cdf");
    let day = regex_match(&p, "ac_k0_swe_20080601_v02.cdf").unwrap();
    assert_eq!(day, (civil_ms(2008, 6, 1, 0, 0, 0, 0), civil_ms(2008, 6, 2, 0, 0, 0, 0)));
    assert_eq!(regex_match(&p, "ac_k0_swe_20080231_v02.cdf"), None);
    let tpl = FileTemplate::parse("ac_k0_swe_$Y$m$d_v....cdf").unwrap();
    assert_eq!(tpl.match_name("ac_k0_swe_20080601_v02.cdf").map(|iv| (iv.start_ms(), iv.end_ms())), Some(day));
}

proptest! {
    #[test]
    fn ticks_agree_with_brute_force(a in -1.0e6f64..1.0e6, span_exp in -3.0f64..6.0, frac in 0.05f64..1.0) {
        let b = a + frac * 10f64.powf(span_exp);
        prop_assume!(b > a);
        let set = linear_ticks(a, b, 8);
        let (step, want) = brute_force_ticks(a, b, 8);
        let tol = 1e-9 * step + 1e-14 * a.abs().max(b.abs());
        prop_assert_eq!(set.majors.len(), want.len(), "[{}, {}] step {}", a, b, step);
        for (t, w) in set.majors.iter().zip(&want) {
            prop_assert!((t.value - w).abs() <= tol, "{} vs {}", t.value, w);
        }
        if set.majors.len() >= 2 {
            let got = set.majors[1].value - set.majors[0].value;
            prop_assert!((got - step).abs() <= 2.0 * tol, "step {} vs {}", got, step);
        }
    }
}

#[test]
fn brute_force_examples() {
    assert_eq!(brute_force_ticks(0.0, 10.0, 8), (2.0, vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]));
    assert_eq!(brute_force_ticks(2.8, 7.2, 8).1, vec![3.0, 4.0, 5.0, 6.0, 7.0]);
}

struct NoData;

impl DataResolver for NoData {
    fn validate(&self, _: &str) -> Vec<Diagnostic> {
        Vec::new()
    }
    fn resolve(&self, uri: &str) -> Result<QDataSet, String> {
        Err(format!("{uri}: no data"))
    }
}

const AXES: usize = 6;

proptest! {
    #[test]
    fn propagation_agrees_with_fixpoint(
        edges in prop::collection::vec((0..AXES, 0..AXES), 0..10),
        start in 0..AXES,
        lo in -100.0f64..100.0,
    ) {
        let mut ed = DomEditor::with_dom(stacked_dom(AXES), Arc::new(NoData));
        for (i, j) in edges {
            let (a, b) = (x_range(i), x_range(j));
            let before = ed.dom().clone();
            if ed.bind(&a, &b).is_err() {
                prop_assert_eq!(ed.dom(), &before);
                continue;
            }
            let reached = fixpoint_closure(ed.dom(), &a);
            let want = value(&before, &a);
            for k in 0..AXES {
                let ep = x_range(k);
                let expect = if reached.contains(&ep) { want.clone() } else { value(&before, &ep) };
                prop_assert_eq!(value(ed.dom(), &ep), expect);
            }
        }
        let before = ed.dom().clone();
        let v = PropValue::Range(range(lo, lo + 1.0));
        let n = ed.set_property(&x_range(start), v.clone()).unwrap();
        let reached = fixpoint_closure(ed.dom(), &x_range(start));
        prop_assert_eq!(n, reached.len());
        for k in 0..AXES {
            let ep = x_range(k);
            let expect = if reached.contains(&ep) { Some(v.clone()) } else { value(&before, &ep) };
            prop_assert_eq!(value(ed.dom(), &ep), expect);
        }
    }
}
