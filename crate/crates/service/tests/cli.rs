mod common;

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use clap::Parser;
use common::Fixtures;
use qview_core::engine::DataEngine;
use qview_service::cli::{run, Cli};

fn qview(args: &[&str], engine: DataEngine) -> (i32, Vec<u8>, String) {
    let cli = Cli::parse_from(std::iter::once("qview").chain(args.iter().copied()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, Some(engine), &mut out, &mut err);
    (code, out, String::from_utf8(err).unwrap())
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn pngwalk_june_by_day_is_reproducible() {
    let fx = Fixtures::new();
    let out = fx.path().join("walk");
    let out_s = out.to_str().unwrap();
    let args = ["pngwalk", "--uri", &fx.daily(), "--timerange", "2008-June", "--cadence", "day", "-o", out_s];
    let (code, _, err) = qview(&args, fx.engine());
    assert_eq!(code, 0, "{err}");
    let first = snapshot(&out);
    let pngs: Vec<_> = first.keys().filter(|k| k.ends_with(".png")).collect();
    assert_eq!(pngs.len(), 30);
    assert_eq!(pngs[0], "product_20080601.png");
    let index = String::from_utf8(first["index.txt"].clone()).unwrap();
    let lines: Vec<_> = index.lines().collect();
    assert_eq!(lines.len(), 30);
    assert_eq!(lines[0], "2008-06-01T00:00:00.000Z\tproduct_20080601.png");
    assert!(lines.windows(2).all(|w| w[0] < w[1]));

    let (code, _, _) = qview(&args, fx.engine());
    assert_eq!(code, 0);
    assert_eq!(snapshot(&out), first);
}

#[test]
fn pngwalk_reports_failed_intervals() {
    let fx = Fixtures::new();
    std::fs::write(fx.path().join("swe/2008/ac_k0_swe_20080615_v02.cdf"), "time,Np\nnot a time,x\n").unwrap();
    let out = fx.path().join("walk");
    let args = ["pngwalk", "--uri", &fx.daily(), "--timerange", "2008-June", "-o", out.to_str().unwrap()];
    let (code, _, err) = qview(&args, fx.engine());
    assert_eq!(code, 1);
    assert!(err.contains("2008-06-15"), "{err}");
    let index = std::fs::read_to_string(out.join("index.txt")).unwrap();
    assert_eq!(index.lines().count(), 29);
    assert!(!out.join("product_20080615.png").exists());
}

#[test]
fn pngwalk_needs_a_time_parameter() {
    let fx = Fixtures::new();
    let out = fx.path().join("walk");
    let (code, _, err) = qview(&["pngwalk", "--uri", &fx.np(), "--timerange", "2008-June", "-o", out.to_str().unwrap()], fx.engine());
    assert_eq!(code, 1);
    assert!(err.contains("templated"), "{err}");
}

#[test]
fn complete_prints_one_per_line() {
    let fx = Fixtures::new();
    let partial = format!("file://{}/", fx.path().display());
    let (code, out, _) = qview(&["complete", &partial], fx.engine());
    assert_eq!(code, 0);
    let text = String::from_utf8(out).unwrap();
    assert!(text.lines().any(|l| l.ends_with("bgsm.qds")), "{text}");
    assert!(text.lines().any(|l| l.ends_with("np.qds")), "{text}");
}

#[test]
fn data_and_vap_commands() {
    let fx = Fixtures::new();
    let (code, out, _) = qview(&["data", &fx.np(), "--format", "csv"], fx.engine());
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 289);

    let mut ed = qview_core::dom::DomEditor::new(std::sync::Arc::new(fx.engine()));
    ed.add_plot_element(&fx.np(), qview_core::dom::Placement::Replace).unwrap();
    let vap = fx.path().join("np.vap");
    std::fs::write(&vap, qview_core::dom::save_vap(ed.dom())).unwrap();
    let svg = fx.path().join("np.svg");
    let (code, _, err) = qview(&["vap", vap.to_str().unwrap(), "-o", svg.to_str().unwrap()], fx.engine());
    assert_eq!(code, 0, "{err}");
    assert!(std::fs::read_to_string(svg).unwrap().contains("SW H Num Density"));
}

#[test]
fn binary_plots_svg_to_stdout() {
    let fx = Fixtures::new();
    let out = Command::new(env!("CARGO_BIN_EXE_qview"))
        .args(["plot", &fx.np(), "--format", "svg", "--label", "Density check"])
        .env("AUTOPLOT_DATA", fx.cache())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(svg.contains("Density check"));

    let bad = Command::new(env!("CARGO_BIN_EXE_qview")).args(["plot", "nosuch:thing"]).env("AUTOPLOT_DATA", fx.cache()).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}
