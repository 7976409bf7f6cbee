//! Reference datasets and fixture files: a solar-wind density series, an
//! electron spectrogram, a magnetic-field vector bundle, and the ASCII and
//! daily-file trees used by the examples and tests.
//!
//! Values are deterministic functions of the index so fixtures are
//! reproducible byte for byte.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::calendar::{format_iso, parse_iso_instant, FileTemplate};
use crate::datasource::write_qds;
use crate::qdataset::{Properties, PropertyKey as K, QDataSet, TimeScale, TimeUnits, Units};

/// 2008-06-01T00:00Z in milliseconds since 1970.
pub const JUNE_1_2008_MS: i64 = 1_212_278_400_000;
/// Days from 2000-01-01 to 2008-06-01.
pub const JUNE_1_2008_DAYS: f64 = 3074.0;
pub const ELECTRON_VALID_MAX: f64 = 1.24e10;
pub const BGSM_VALID: f64 = 65534.0;

/// Daily file template of the aggregation tree, relative to its root.
pub const DAILY_TEMPLATE: &str = "$Y/ac_k0_swe_$Y$m$d_v02.cdf";
/// Hourly samples per daily file.
pub const DAILY_RECORDS: usize = 24;

fn epoch(n: usize, step_ms: i64) -> QDataSet {
    let t = (0..n).map(|i| (JUNE_1_2008_MS + i as i64 * step_ms) as f64).collect();
    let props = Properties::new().with(K::Name, "Epoch").with(K::Units, Units::Time(TimeUnits::UNIX_MS));
    QDataSet::rank1(t, props).expect("rank-1 epoch")
}

/// `Np[Epoch=288]`: one day of 5-minute proton densities.
pub fn np() -> QDataSet {
    let v = (0..288)
        .map(|i| {
            let x = i as f64 / 288.0 * std::f64::consts::TAU;
            5.0 + 1.5 * x.sin() + 0.4 * (7.0 * x).cos()
        })
        .collect();
    let props = Properties::new()
        .with(K::Name, "Np")
        .with(K::Label, "SW H Num Density")
        .with(K::Units, Units::ratio("#/cc"))
        .with(K::Depend0, epoch(288, 300_000));
    QDataSet::rank1(v, props).expect("Np")
}

/// `Energy[29]`: log-spaced channel centres from 10 eV to 30 keV.
pub fn energy() -> QDataSet {
    let (lo, hi) = (10f64.log10(), 30_000f64.log10());
    let v = (0..29).map(|j| 10f64.powf(lo + (hi - lo) * j as f64 / 28.0)).collect();
    let props = Properties::new()
        .with(K::Name, "Energy")
        .with(K::Label, "Electron Energy")
        .with(K::Units, Units::ratio("eV"))
        .with(K::ScaleType, "log");
    QDataSet::rank1(v, props).expect("Energy")
}

/// `Electron_DEF[Epoch=6260,Energy=29]`. Every 500th record holds one cell
/// above VALID_MAX.
pub fn electron_def() -> QDataSet {
    let (n, m) = (6260, 29);
    let mut v = Vec::with_capacity(n * m);
    for i in 0..n {
        let phase = i as f64 / n as f64 * std::f64::consts::TAU;
        for j in 0..m {
            let peak = 12.0 + 4.0 * phase.sin();
            let d = j as f64 - peak;
            let flux = 10f64.powf(9.0 - 0.02 * d * d) * (1.0 + 0.1 * (phase * 3.0 + j as f64).cos());
            v.push(if i % 500 == 0 && j == 0 { 2.0e10 } else { flux });
        }
    }
    let props = Properties::new()
        .with(K::Name, "Electron_DEF")
        .with(K::Label, "Electron DEF")
        .with(K::Title, "Electron Differential Energy Flux")
        .with(K::Units, Units::ratio("1/(cm²-s-sr)"))
        .with(K::ValidMin, 0.0)
        .with(K::ValidMax, ELECTRON_VALID_MAX)
        .with(K::Qube, true)
        .with(K::Depend0, epoch(n, 13_800))
        .with(K::Depend1, energy());
    QDataSet::from_shape(&[n, m], v, props).expect("Electron_DEF")
}

/// `BGSM[Time=24,[Bx,By,Bz]]`: hourly field vectors, time in days since 2000.
pub fn bgsm() -> QDataSet {
    let n = 24;
    let mut v = Vec::with_capacity(n * 3);
    for i in 0..n {
        let x = i as f64 / n as f64 * std::f64::consts::TAU;
        v.extend([3.0 * x.cos(), -2.0 + 2.5 * x.sin(), 1.0 + 4.0 * (2.0 * x).sin()]);
    }
    let time = QDataSet::rank1(
        (0..n).map(|i| JUNE_1_2008_DAYS + i as f64 / 24.0).collect(),
        Properties::new()
            .with(K::Name, "Time")
            .with(K::Units, Units::Time(TimeUnits::new(TimeScale::Days, 946_684_800_000))),
    )
    .expect("Time");
    let components = ["Bx", "By", "Bz"]
        .iter()
        .map(|c| Properties::new().with(K::Name, *c).with(K::Label, format!("{c} (GSM)")))
        .collect();
    let props = Properties::new()
        .with(K::Name, "BGSM")
        .with(K::Units, Units::ratio("nT"))
        .with(K::ValidMin, -BGSM_VALID)
        .with(K::ValidMax, BGSM_VALID)
        .with(K::Qube, true)
        .with(K::Depend0, time)
        .with(K::Bundle1, QDataSet::bundle_descriptor(components));
    QDataSet::from_shape(&[n, 3], v, props).expect("BGSM")
}

/// The three reference datasets with their file stems.
pub fn reference_datasets() -> Vec<(&'static str, QDataSet)> {
    vec![("np", np()), ("electron_def", electron_def()), ("bgsm", bgsm())]
}

/// Writes `np.qds`, `electron_def.qds` and `bgsm.qds` into `dir`.
pub fn write_reference_qds(dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    reference_datasets()
        .into_iter()
        .map(|(stem, ds)| {
            let p = dir.join(format!("{stem}.qds"));
            fs::write(&p, write_qds(&ds))?;
            Ok(p)
        })
        .collect()
}

/// One daily file: header `time,Np` and hourly rows.
pub fn daily_csv(day_start_ms: i64) -> String {
    let mut out = String::from("time,Np\n");
    for h in 0..DAILY_RECORDS {
        let t = day_start_ms + h as i64 * 3_600_000;
        let day = (t - JUNE_1_2008_MS) as f64 / 86_400_000.0;
        let np = 5.0 + 2.0 * (day * 0.7).sin() + 0.25 * (h as f64 * 0.5).cos();
        out.push_str(&format!("{},{np:.4}\n", format_iso(t)));
    }
    out
}

/// Writes one daily file per day of May, June and July 2008 under `root`,
/// named by [`DAILY_TEMPLATE`]. Returns the number of files.
pub fn write_daily_tree(root: &Path) -> io::Result<usize> {
    let template = FileTemplate::parse(DAILY_TEMPLATE).expect("valid template");
    let start = parse_iso_instant("2008-05-01").expect("valid date");
    let end = parse_iso_instant("2008-08-01").expect("valid date");
    let mut count = 0;
    let mut t = start;
    while t < end {
        let p = root.join(template.format(t).expect("template has fields"));
        fs::create_dir_all(p.parent().expect("file has a parent"))?;
        fs::write(p, daily_csv(t))?;
        count += 1;
        t += 86_400_000;
    }
    Ok(count)
}

/// Five junk lines, a header `time,density,speed`, then ten comma rows.
/// Density in row `i` is `i + 0.5`.
pub fn junk_header_csv() -> String {
    let mut out = String::from(
        "Solar wind export\ngenerated by the ground system\n\n# not a header\nrows follow:\ntime,density,speed\n",
    );
    for i in 0..10 {
        let t = JUNE_1_2008_MS + i * 3_600_000;
        out.push_str(&format!("{},{}.5,{}\n", format_iso(t), i, 400 + i * 10));
    }
    out
}

/// A table whose fourth line (third data row) is missing a cell.
pub fn ragged_csv() -> String {
    "a,b,c\n1,2,3\n4,5,6\n7,8\n10,11,12\n".to_string()
}

/// Line number of the short row in [`ragged_csv`].
pub const RAGGED_LINE: usize = 4;

/// 287 rows under the header `index,data`.
pub fn data287_csv() -> String {
    let mut out = String::from("index,data\n");
    for i in 0..287 {
        out.push_str(&format!("{i},{}\n", (i as f64 * 0.1).sin()));
    }
    out
}
