//! Drawing targets: an RGBA raster encoded as PNG, and SVG text.

use std::fmt::Write as _;

use base64::Engine as _;
use font8x8::{UnicodeFonts, BASIC_FONTS, GREEK_FONTS, LATIN_FONTS};

use super::color::Rgba;
use crate::dom::Symbol;

/// Raster glyphs are 8×8; SVG text uses a matching nominal size.
pub const GLYPH: f64 = 8.0;
const SVG_FONT_SIZE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Rect {
        Rect { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x && x <= self.right() && y >= self.y && y <= self.bottom()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    Middle,
    End,
}

pub trait Surface {
    fn size(&self) -> (u32, u32);
    fn fill_rect(&mut self, r: Rect, c: Rgba);
    fn stroke_rect(&mut self, r: Rect, c: Rgba);
    /// A polyline clipped to `clip`.
    fn polyline(&mut self, pts: &[(f64, f64)], c: Rgba, width: f64, clip: Rect);
    fn marker(&mut self, x: f64, y: f64, symbol: Symbol, c: Rgba, clip: Rect);
    /// Text centred vertically on `y`; `vertical` reads bottom to top.
    fn text(&mut self, x: f64, y: f64, s: &str, anchor: Anchor, vertical: bool, c: Rgba);
    /// An image of `w`×`h` pixels stretched over `r`.
    fn image(&mut self, r: Rect, w: usize, h: usize, pixels: &[Rgba]);

    fn line(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, c: Rgba) {
        let (w, h) = self.size();
        self.polyline(&[(x0, y0), (x1, y1)], c, 1.0, Rect::new(0.0, 0.0, w as f64, h as f64));
    }
}

/// Liang–Barsky clipping of one segment.
fn clip_segment(p0: (f64, f64), p1: (f64, f64), r: Rect) -> Option<((f64, f64), (f64, f64))> {
    let (dx, dy) = (p1.0 - p0.0, p1.1 - p0.1);
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    for (p, q) in [
        (-dx, p0.0 - r.x),
        (dx, r.right() - p0.0),
        (-dy, p0.1 - r.y),
        (dy, r.bottom() - p0.1),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    (t0 <= t1).then_some(((p0.0 + t0 * dx, p0.1 + t0 * dy), (p0.0 + t1 * dx, p0.1 + t1 * dy)))
}

fn glyph(c: char) -> [u8; 8] {
    BASIC_FONTS
        .get(c)
        .or_else(|| LATIN_FONTS.get(c))
        .or_else(|| GREEK_FONTS.get(c))
        .or_else(|| BASIC_FONTS.get('?'))
        .unwrap_or([0; 8])
}

pub fn text_width(s: &str) -> f64 {
    s.chars().count() as f64 * GLYPH
}

/// `s` shortened with a trailing `..` to fit in `max` pixels.
pub fn fit_text(s: &str, max: f64) -> String {
    if text_width(s) <= max {
        return s.to_string();
    }
    let keep = ((max / GLYPH) as usize).saturating_sub(2);
    let mut out: String = s.chars().take(keep).collect();
    out.push_str("..");
    out
}

/// RGBA pixel buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    width: u32,
    height: u32,
    pixels: Vec<Rgba>,
}

impl Raster {
    pub fn new(width: u32, height: u32, background: Rgba) -> Raster {
        Raster { width, height, pixels: vec![background; (width * height) as usize] }
    }

    pub fn pixel(&self, x: u32, y: u32) -> Rgba {
        self.pixels[(y * self.width + x) as usize]
    }

    pub fn pixels(&self) -> &[Rgba] {
        &self.pixels
    }

    fn put(&mut self, x: i64, y: i64, c: Rgba) {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 || c.3 == 0 {
            return;
        }
        let p = &mut self.pixels[(y as u32 * self.width + x as u32) as usize];
        if c.3 == 255 {
            *p = c;
            return;
        }
        let a = c.3 as u32;
        let mix = |s: u8, d: u8| ((s as u32 * a + d as u32 * (255 - a) + 127) / 255) as u8;
        let out_a = (a + p.3 as u32 * (255 - a) / 255).min(255) as u8;
        *p = Rgba(mix(c.0, p.0), mix(c.1, p.1), mix(c.2, p.2), out_a);
    }

    fn brush(&mut self, x: i64, y: i64, size: i64, c: Rgba) {
        let off = (size - 1) / 2;
        for dy in 0..size {
            for dx in 0..size {
                self.put(x - off + dx, y - off + dy, c);
            }
        }
    }

    fn segment(&mut self, p0: (f64, f64), p1: (f64, f64), c: Rgba, size: i64) {
        let (mut x0, mut y0) = (p0.0.floor() as i64, p0.1.floor() as i64);
        let (x1, y1) = (p1.0.floor() as i64, p1.1.floor() as i64);
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let mut err = dx + dy;
        loop {
            self.brush(x0, y0, size, c);
            if x0 == x1 && y0 == y1 {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x0 += sx;
            }
            if e2 <= dx {
                err += dx;
                y0 += sy;
            }
        }
    }

    /// 8-bit RGBA PNG.
    pub fn encode_png(&self) -> Vec<u8> {
        encode_png(self.width, self.height, &self.pixels)
    }
}

pub fn encode_png(width: u32, height: u32, pixels: &[Rgba]) -> Vec<u8> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, width, height);
        enc.set_color(png::ColorType::Rgba);
        enc.set_depth(png::BitDepth::Eight);
        let mut w = enc.write_header().expect("PNG header into memory");
        let bytes: Vec<u8> = pixels.iter().flat_map(|p| [p.0, p.1, p.2, p.3]).collect();
        w.write_image_data(&bytes).expect("PNG data into memory");
    }
    out
}

impl Surface for Raster {
    fn size(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    fn fill_rect(&mut self, r: Rect, c: Rgba) {
        let (x0, y0) = (r.x.round() as i64, r.y.round() as i64);
        let (x1, y1) = (r.right().round() as i64, r.bottom().round() as i64);
        for y in y0.max(0)..y1.min(self.height as i64) {
            for x in x0.max(0)..x1.min(self.width as i64) {
                self.put(x, y, c);
            }
        }
    }

    fn stroke_rect(&mut self, r: Rect, c: Rgba) {
        let (x0, y0) = (r.x.round() as i64, r.y.round() as i64);
        let (x1, y1) = (r.right().round() as i64 - 1, r.bottom().round() as i64 - 1);
        for x in x0..=x1 {
            self.put(x, y0, c);
            self.put(x, y1, c);
        }
        for y in y0..=y1 {
            self.put(x0, y, c);
            self.put(x1, y, c);
        }
    }

    fn polyline(&mut self, pts: &[(f64, f64)], c: Rgba, width: f64, clip: Rect) {
        let size = width.round().max(1.0) as i64;
        for w in pts.windows(2) {
            if let Some((a, b)) = clip_segment(w[0], w[1], clip) {
                self.segment(a, b, c, size);
            }
        }
        if pts.len() == 1 && clip.contains(pts[0].0, pts[0].1) {
            self.brush(pts[0].0.floor() as i64, pts[0].1.floor() as i64, size, c);
        }
    }

    fn marker(&mut self, x: f64, y: f64, symbol: Symbol, c: Rgba, clip: Rect) {
        if !clip.contains(x, y) {
            return;
        }
        let (cx, cy) = (x.floor() as i64, y.floor() as i64);
        match symbol {
            Symbol::None => self.brush(cx, cy, 2, c),
            Symbol::Square => self.brush(cx, cy, 5, c),
            Symbol::Cross => {
                for d in -2..=2 {
                    self.put(cx + d, cy + d, c);
                    self.put(cx + d, cy - d, c);
                }
            }
            Symbol::Circle => {
                for dy in -2i64..=2 {
                    for dx in -2i64..=2 {
                        let r2 = dx * dx + dy * dy;
                        if (3..=5).contains(&r2) {
                            self.put(cx + dx, cy + dy, c);
                        }
                    }
                }
            }
        }
    }

    fn text(&mut self, x: f64, y: f64, s: &str, anchor: Anchor, vertical: bool, c: Rgba) {
        let len = text_width(s);
        let shift = match anchor {
            Anchor::Start => 0.0,
            Anchor::Middle => len / 2.0,
            Anchor::End => len,
        };
        let (x, y) = (x.round() as i64, y.round() as i64);
        let half = (GLYPH / 2.0) as i64;
        for (i, ch) in s.chars().enumerate() {
            let g = glyph(ch);
            let along = i as i64 * GLYPH as i64 - shift.round() as i64;
            for (row, bits) in g.iter().enumerate() {
                for col in 0..8 {
                    if bits & (1 << col) == 0 {
                        continue;
                    }
                    let (u, v) = (along + col, row as i64 - half);
                    if vertical {
                        self.put(x + v, y - u, c);
                    } else {
                        self.put(x + u, y + v, c);
                    }
                }
            }
        }
    }

    fn image(&mut self, r: Rect, w: usize, h: usize, pixels: &[Rgba]) {
        if w == 0 || h == 0 {
            return;
        }
        let (x0, y0) = (r.x.round() as i64, r.y.round() as i64);
        let (pw, ph) = ((r.right().round() as i64 - x0).max(0), (r.bottom().round() as i64 - y0).max(0));
        for py in 0..ph {
            let sy = (py as usize * h / ph as usize).min(h - 1);
            for px in 0..pw {
                let sx = (px as usize * w / pw as usize).min(w - 1);
                self.put(x0 + px, y0 + py, pixels[sy * w + sx]);
            }
        }
    }
}

/// SVG 1.1 document under construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Svg {
    width: u32,
    height: u32,
    body: String,
    clips: Vec<Rect>,
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn n(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn rgb(c: Rgba) -> String {
    if c.3 == 255 {
        c.hex()
    } else {
        format!("{}\" fill-opacity=\"{}", c.hex(), n(c.3 as f64 / 255.0))
    }
}

impl Svg {
    pub fn new(width: u32, height: u32) -> Svg {
        Svg { width, height, body: String::new(), clips: Vec::new() }
    }

    fn clip_id(&mut self, clip: Rect) -> usize {
        match self.clips.iter().position(|c| *c == clip) {
            Some(i) => i,
            None => {
                self.clips.push(clip);
                self.clips.len() - 1
            }
        }
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = self.width,
            h = self.height
        );
        if !self.clips.is_empty() {
            out.push_str("<defs>\n");
            for (i, c) in self.clips.iter().enumerate() {
                let _ = writeln!(
                    out,
                    r#"<clipPath id="clip{i}"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>"#,
                    n(c.x),
                    n(c.y),
                    n(c.w),
                    n(c.h)
                );
            }
            out.push_str("</defs>\n");
        }
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

impl Surface for Svg {
    fn size(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    fn fill_rect(&mut self, r: Rect, c: Rgba) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            n(r.x),
            n(r.y),
            n(r.w),
            n(r.h),
            rgb(c)
        );
    }

    fn stroke_rect(&mut self, r: Rect, c: Rgba) {
        let _ = writeln!(
            self.body,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="{}"/>"#,
            n(r.x + 0.5),
            n(r.y + 0.5),
            n(r.w - 1.0),
            n(r.h - 1.0),
            c.hex()
        );
    }

    fn polyline(&mut self, pts: &[(f64, f64)], c: Rgba, width: f64, clip: Rect) {
        if pts.is_empty() {
            return;
        }
        let id = self.clip_id(clip);
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{},{}", n(*x), n(*y))).collect();
        let _ = writeln!(
            self.body,
            r#"<polyline clip-path="url(#clip{id})" points="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            coords.join(" "),
            c.hex(),
            n(width)
        );
    }

    fn marker(&mut self, x: f64, y: f64, symbol: Symbol, c: Rgba, clip: Rect) {
        if !clip.contains(x, y) {
            return;
        }
        let (x, y) = (n(x), n(y));
        let col = c.hex();
        let _ = match symbol {
            Symbol::None => writeln!(self.body, r#"<circle cx="{x}" cy="{y}" r="1" fill="{col}"/>"#),
            Symbol::Circle => writeln!(self.body, r#"<circle cx="{x}" cy="{y}" r="2.5" fill="none" stroke="{col}"/>"#),
            Symbol::Square => writeln!(self.body, r#"<rect x="{x}" y="{y}" width="5" height="5" transform="translate(-2.5,-2.5)" fill="{col}"/>"#),
            Symbol::Cross => writeln!(self.body, r#"<path d="M{x},{y}m-2.5,-2.5l5,5m0,-5l-5,5" stroke="{col}"/>"#),
        };
    }

    fn text(&mut self, x: f64, y: f64, s: &str, anchor: Anchor, vertical: bool, c: Rgba) {
        let a = match anchor {
            Anchor::Start => "start",
            Anchor::Middle => "middle",
            Anchor::End => "end",
        };
        let (xs, ys) = (n(x), n(y));
        let rot = if vertical { format!(r#" transform="rotate(-90 {xs} {ys})""#) } else { String::new() };
        let _ = writeln!(
            self.body,
            r#"<text x="{xs}" y="{ys}" font-family="monospace" font-size="{}" text-anchor="{a}" dominant-baseline="middle" fill="{}"{rot}>{}</text>"#,
            n(SVG_FONT_SIZE),
            c.hex(),
            esc(s)
        );
    }

    fn image(&mut self, r: Rect, w: usize, h: usize, pixels: &[Rgba]) {
        if w == 0 || h == 0 {
            return;
        }
        let png = encode_png(w as u32, h as u32, pixels);
        let data = base64::engine::general_purpose::STANDARD.encode(png);
        let _ = writeln!(
            self.body,
            r#"<image x="{}" y="{}" width="{}" height="{}" preserveAspectRatio="none" image-rendering="pixelated" xlink:href="data:image/png;base64,{data}"/>"#,
            n(r.x),
            n(r.y),
            n(r.w),
            n(r.h)
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fitting_text() {
        assert_eq!(fit_text("abc", 24.0), "abc");
        assert_eq!(fit_text("abcdef", 32.0), "ab..");
    }

    #[test]
    fn clipping() {
        let r = Rect::new(0.0, 0.0, 10.0, 10.0);
        assert_eq!(clip_segment((-5.0, 5.0), (15.0, 5.0), r), Some(((0.0, 5.0), (10.0, 5.0))));
        assert_eq!(clip_segment((-5.0, -5.0), (-1.0, 20.0), r), None);
    }

    #[test]
    fn raster_draws_and_encodes() {
        let mut r = Raster::new(20, 10, Rgba::WHITE);
        r.line(0.0, 5.0, 19.0, 5.0, Rgba::BLACK);
        assert_eq!(r.pixel(10, 5), Rgba::BLACK);
        assert_eq!(r.pixel(10, 2), Rgba::WHITE);
        r.text(0.0, 4.0, "A", Anchor::Start, false, Rgba::BLACK);
        let png = r.encode_png();
        assert_eq!(&png[..8], b"\x89PNG\r\n\x1a\n");
    }

    #[test]
    fn svg_text_is_escaped() {
        let mut s = Svg::new(10, 10);
        s.text(1.0, 1.0, "a<b & c", Anchor::Middle, true, Rgba::BLACK);
        let out = s.finish();
        assert!(out.contains(">a&lt;b &amp; c</text>"));
        assert!(out.contains("rotate(-90 1 1)"));
    }
}
