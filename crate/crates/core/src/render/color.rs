//! Colors and the spectrogram color table.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgba(pub u8, pub u8, pub u8, pub u8);

impl Rgba {
    pub const TRANSPARENT: Rgba = Rgba(0, 0, 0, 0);
    pub const WHITE: Rgba = Rgba(255, 255, 255, 255);
    pub const BLACK: Rgba = Rgba(0, 0, 0, 255);
    pub const GRAY: Rgba = Rgba(160, 160, 160, 255);

    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

/// Colors cycled through by bundle components.
pub const PALETTE: &[&str] = &["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"];

const NAMED: &[(&str, Rgba)] = &[
    ("black", Rgba(0, 0, 0, 255)),
    ("white", Rgba(255, 255, 255, 255)),
    ("red", Rgba(214, 39, 40, 255)),
    ("green", Rgba(44, 160, 44, 255)),
    ("blue", Rgba(31, 119, 180, 255)),
    ("orange", Rgba(255, 127, 14, 255)),
    ("purple", Rgba(148, 103, 189, 255)),
    ("gray", Rgba(128, 128, 128, 255)),
    ("grey", Rgba(128, 128, 128, 255)),
];

/// `#rrggbb`, `#rrggbbaa`, or a few common names; anything else is black.
pub fn parse_color(s: &str) -> Rgba {
    let s = s.trim();
    if let Some(hex) = s.strip_prefix('#') {
        let byte = |i: usize| u8::from_str_radix(hex.get(i..i + 2)?, 16).ok();
        match hex.len() {
            6 => {
                if let (Some(r), Some(g), Some(b)) = (byte(0), byte(2), byte(4)) {
                    return Rgba(r, g, b, 255);
                }
            }
            8 => {
                if let (Some(r), Some(g), Some(b), Some(a)) = (byte(0), byte(2), byte(4), byte(6)) {
                    return Rgba(r, g, b, a);
                }
            }
            _ => {}
        }
    }
    NAMED
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(s))
        .map_or(Rgba::BLACK, |(_, c)| *c)
}

const STOPS: &[(f64, [f64; 3])] = &[
    (0.0, [0.0, 0.0, 143.0]),
    (0.125, [0.0, 0.0, 255.0]),
    (0.375, [0.0, 255.0, 255.0]),
    (0.625, [255.0, 255.0, 0.0]),
    (0.875, [255.0, 0.0, 0.0]),
    (1.0, [128.0, 0.0, 0.0]),
];

/// 256-entry blue-to-red table.
pub fn color_table() -> &'static [Rgba; 256] {
    static TABLE: std::sync::OnceLock<[Rgba; 256]> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [Rgba::BLACK; 256];
        for (i, c) in t.iter_mut().enumerate() {
            let f = i as f64 / 255.0;
            let k = STOPS.windows(2).position(|w| f <= w[1].0).unwrap_or(STOPS.len() - 2);
            let ((f0, c0), (f1, c1)) = (STOPS[k], STOPS[k + 1]);
            let u = (f - f0) / (f1 - f0);
            let ch = |j: usize| (c0[j] + u * (c1[j] - c0[j])).round() as u8;
            *c = Rgba(ch(0), ch(1), ch(2), 255);
        }
        t
    })
}

/// Table entry for a position in `[0, 1]`; values outside are clamped.
pub fn lookup(f: f64) -> Rgba {
    let i = (f.clamp(0.0, 1.0) * 255.0).round() as usize;
    color_table()[i]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_runs_blue_to_red() {
        let t = color_table();
        assert_eq!(t[0], Rgba(0, 0, 143, 255));
        assert_eq!(t[255], Rgba(128, 0, 0, 255));
        assert!(t[32].2 > 200);
        assert!(t[224].0 > 200 && t[224].2 == 0);
        assert_eq!(parse_color("#ff0000"), Rgba(255, 0, 0, 255));
        assert_eq!(parse_color("Blue"), Rgba(31, 119, 180, 255));
        assert_eq!(parse_color("?"), Rgba::BLACK);
    }
}
