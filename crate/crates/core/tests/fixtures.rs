mod common;

use std::sync::Arc;

use common::*;
use qview_core::aggregation::expand;
use qview_core::calendar::parse_timerange;
use qview_core::datasource::{read_qds_str, write_csv, write_qds, PluginRegistry, SourceError};
use qview_core::dom::{DomEditor, Placement, RenderType};
use qview_core::engine::{DataEngine, EngineError};
use qview_core::qdataset::PropertyKey as K;
use qview_core::render::ImageFormat;
use qview_core::samples;
use qview_core::vfs::Vfs;

fn engine(dir: &std::path::Path) -> DataEngine {
    DataEngine::new(PluginRegistry::with_defaults(), Vfs::offline(dir.join("cache")))
}

#[test]
fn reference_datasets_match_their_descriptions() {
    let (np, e, b) = (samples::np(), samples::electron_def(), samples::bgsm());
    assert_eq!([np.rank(), e.rank(), b.rank()], [1, 2, 2]);
    assert_eq!([np.dimensionality(), e.dimensionality(), b.dimensionality()], [2, 3, 4]);
    assert_eq!(np.units().to_string(), "#/cc");
    assert_eq!(np.label(), Some("SW H Num Density"));
    assert_eq!(e.depend(1).unwrap().units().to_string(), "eV");
    assert_eq!(e.valid_max(), Some(1.24e10));
    assert_eq!(e.valid_min(), Some(0.0));
    assert!(e.is_qube() && b.is_qube());
    assert_eq!(b.units().to_string(), "nT");
    assert_eq!(b.valid_min(), Some(-65534.0));
    assert_eq!(b.depend(0).unwrap().units().to_string(), "days since 2000-01-01T00:00");
    assert_eq!(b.bundle_component(2).unwrap().get(&K::Label).unwrap().as_text(), Some("Bz (GSM)"));

    let s = e.slice0(7).unwrap();
    assert_eq!((s.rank(), s.len()), (1, 29));
    assert_eq!(s.depend(0), e.depend(1));
    assert_eq!(s.context(0).unwrap().value(), e.depend(0).unwrap().get(&[7]).unwrap());
    let c = e.slice1(3).unwrap();
    assert_eq!((c.rank(), c.len()), (1, 6260));
    assert_eq!(c.depend(0), e.depend(0));
    assert_eq!(c.context(0).unwrap().value(), e.depend(1).unwrap().get(&[3]).unwrap());
    assert_eq!(c.slice0(7).unwrap().value(), s.slice0(3).unwrap().value());
    let p = np.slice0(0).unwrap();
    assert_eq!(p.rank(), 0);
    assert!(p.context(0).is_some());
    let bx = b.slice1(0).unwrap();
    assert_eq!(bx.label(), Some("Bx (GSM)"));
}

#[test]
fn reference_datasets_survive_the_interchange_format() {
    let dir = tempfile::tempdir().unwrap();
    for path in samples::write_reference_qds(dir.path()).unwrap() {
        let text = std::fs::read_to_string(&path).unwrap();
        let back = read_qds_str(&text).unwrap();
        assert_eq!(write_qds(&back), text, "{}", path.display());
        let name = path.file_stem().unwrap().to_str().unwrap();
        let orig = samples::reference_datasets().into_iter().find(|(n, _)| *n == name).unwrap().1;
        assert_eq!(back, orig);
    }
}

#[test]
fn june_aggregation_finds_thirty_files() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(samples::write_daily_tree(dir.path()).unwrap(), 92);
    let eng = engine(dir.path());
    let res = format!("file://{}/$Y/ac_k0_swe_$Y$m$d_v...cdf", dir.path().display());
    let june = parse_timerange("2008-June").unwrap();
    let plan = expand(&res, &june, eng.vfs()).unwrap();
    assert_eq!(plan.matches.len(), 30);
    let ds = eng.read(&format!("vap+dat:{res}?column=Np&timerange=2008-June")).unwrap();
    assert_eq!(ds.len(), 30 * samples::DAILY_RECORDS);
    let t = ds.depend(0).unwrap().flat_values();
    assert!(t.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(t[0], samples::JUNE_1_2008_MS as f64);
}

#[test]
fn corrupt_daily_file_is_named() {
    let dir = tempfile::tempdir().unwrap();
    samples::write_daily_tree(dir.path()).unwrap();
    let bad = dir.path().join("2008/ac_k0_swe_20080615_v02.cdf");
    std::fs::write(&bad, "time,Np\n2008-06-15T00:00:00Z,abc\n").unwrap();
    let uri = format!("vap+dat:file://{}/$Y/ac_k0_swe_$Y$m$d_v...cdf?column=Np&timerange=2008-June", dir.path().display());
    let e = engine(dir.path()).read(&uri).unwrap_err();
    assert!(e.to_string().contains("ac_k0_swe_20080615_v02.cdf"), "{e}");
}

#[test]
fn time_grammar_forms_agree() {
    let a = parse_timerange("2008-June").unwrap();
    assert_eq!(parse_timerange("June 2008").unwrap(), a);
    assert_eq!(parse_timerange("2008-06-01 to 2008-07-01").unwrap(), a);
    assert_eq!((a.start_ms(), a.end_ms()), (civil_ms(2008, 6, 1, 0, 0, 0, 0), civil_ms(2008, 7, 1, 0, 0, 0, 0)));
}

#[test]
fn ascii_reader_skips_junk_and_reports_ragged_lines() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("junk.csv"), samples::junk_header_csv()).unwrap();
    std::fs::write(dir.path().join("ragged.csv"), samples::ragged_csv()).unwrap();
    let eng = engine(dir.path());
    let base = format!("file://{}", dir.path().display());
    let d = eng.read(&format!("{base}/junk.csv?delim=comma&skip=5&column=density")).unwrap();
    assert_eq!(d.flat_values(), (0..10).map(|i| i as f64 + 0.5).collect::<Vec<_>>());
    assert_eq!(d.name(), Some("density"));
    let s = eng.read(&format!("{base}/junk.csv?delim=comma&skip=5&column=speed")).unwrap();
    assert_eq!(s.get(&[9]), Some(490.0));
    match eng.read(&format!("{base}/ragged.csv?column=b")) {
        Err(EngineError::Source(SourceError::Ragged { line, .. })) => assert_eq!(line, samples::RAGGED_LINE),
        other => panic!("expected a ragged-row error, got {other:?}"),
    }
}

#[test]
fn data_column_has_287_rows_and_exports_them() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("data.csv"), samples::data287_csv()).unwrap();
    let ds = engine(dir.path()).read(&format!("file://{}/data.csv?column=data", dir.path().display())).unwrap();
    assert_eq!(ds.len(), 287);
    let csv = write_csv(&ds).unwrap();
    assert_eq!(csv.lines().count(), 288);
}

#[test]
fn editor_builds_elements_for_each_kind() {
    let mut ed = DomEditor::new(Arc::new(SampleResolver));
    ed.add_plot_element("bgsm", Placement::Replace).unwrap();
    let d = ed.dom();
    assert_eq!(d.plot_elements.len(), 4);
    assert_eq!(d.plot_elements.iter().filter(|e| e.parent.is_some()).count(), 3);
    assert!(d.plot_elements.iter().filter(|e| e.parent.is_some()).all(|e| e.render_type == RenderType::Series));
    ed.add_plot_element("electron", Placement::Below).unwrap();
    let d = ed.dom();
    assert_eq!(d.plots.len(), 2);
    let spec = d.plot_elements.last().unwrap();
    assert_eq!(spec.render_type, RenderType::Spectrogram);
    assert_eq!(d.plots[1].yaxis.scale, qview_core::dom::AxisScale::Log);
    let png = ed.render(ImageFormat::Png).unwrap();
    assert_eq!(&png[..8], b"\x89PNG\r\n\x1a\n");
}

#[test]
fn svg_of_density_carries_its_label() {
    let mut ed = DomEditor::new(Arc::new(SampleResolver));
    ed.add_plot_element("np", Placement::Replace).unwrap();
    let svg = String::from_utf8(ed.render(ImageFormat::Svg).unwrap()).unwrap();
    assert!(svg.contains("SW H Num Density"));
    assert!(svg.starts_with("<?xml"));
}
