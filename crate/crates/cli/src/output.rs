//! Deterministic artifact writers: CSV with a leading hash record, JSON
//! summaries, and hand-rolled SVG plots. Every file embeds the config hash
//! and the manifest hash.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

pub fn sha256_hex(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

#[derive(Clone, Debug)]
pub struct Stamps {
    pub config_hash: String,
    pub manifest_hash: String,
}

impl Stamps {
    pub fn csv_record(&self) -> String {
        format!(
            "#config_hash={};manifest_hash={}\r\n",
            self.config_hash, self.manifest_hash
        )
    }
}

/// CSV file: one single-field hash record, then the RFC-4180 body.
pub fn write_csv(path: &Path, stamps: &Stamps, body: &str) -> std::io::Result<()> {
    let mut out = stamps.csv_record();
    out.push_str(body);
    std::fs::write(path, out)
}

/// JSON summary with the hashes injected at the top level.
pub fn write_json<T: Serialize>(path: &Path, stamps: &Stamps, value: &T) -> std::io::Result<()> {
    let mut v = serde_json::to_value(value).expect("serializable");
    if let serde_json::Value::Object(map) = &mut v {
        map.insert(
            "config_hash".into(),
            serde_json::Value::String(stamps.config_hash.clone()),
        );
        map.insert(
            "manifest_hash".into(),
            serde_json::Value::String(stamps.manifest_hash.clone()),
        );
    }
    let text = serde_json::to_string_pretty(&v).expect("serializable");
    std::fs::write(path, text + "\n")
}

/// Minimal line plot: one polyline per series over shared x values.
pub fn svg_lines(
    path: &Path,
    stamps: &Stamps,
    title: &str,
    series: &[(&str, &[(f64, f64)])],
) -> std::io::Result<()> {
    let (w, h, ml, mb) = (720.0, 480.0, 70.0, 50.0);
    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, pts)| pts.iter().copied()).collect();
    let (x0, x1) = bounds(all.iter().map(|p| p.0));
    let (y0, y1) = bounds(all.iter().map(|p| p.1));
    let sx = |x: f64| ml + (x - x0) / (x1 - x0).max(1e-300) * (w - ml - 20.0);
    let sy = |y: f64| (h - mb) - (y - y0) / (y1 - y0).max(1e-300) * (h - mb - 30.0);
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

    let mut svg = svg_head(w, h, stamps, title);
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = palette[i % palette.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" fill=\"{color}\">{name}</text>\n",
            w - 190.0,
            40.0 + 16.0 * i as f64
        ));
    }
    svg.push_str(&axes(ml, mb, w, h, x0, x1, y0, y1));
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)
}

/// Histogram of values into `bins` equal-width bins.
pub fn svg_histogram(
    path: &Path,
    stamps: &Stamps,
    title: &str,
    values: &[f64],
    bins: usize,
) -> std::io::Result<()> {
    let (w, h, ml, mb) = (720.0, 480.0, 70.0, 50.0);
    let mut svg = svg_head(w, h, stamps, title);
    if !values.is_empty() && bins > 0 {
        let (lo, hi) = bounds(values.iter().copied());
        let width = (hi - lo).max(1e-300);
        let mut counts = vec![0usize; bins];
        for &v in values {
            let idx = (((v - lo) / width) * bins as f64) as usize;
            counts[idx.min(bins - 1)] += 1;
        }
        let max_count = *counts.iter().max().unwrap() as f64;
        let bar_w = (w - ml - 20.0) / bins as f64;
        for (i, &c) in counts.iter().enumerate() {
            let bar_h = (h - mb - 30.0) * c as f64 / max_count.max(1.0);
            svg.push_str(&format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
                 fill=\"#1f77b4\" stroke=\"#ffffff\"/>\n",
                ml + i as f64 * bar_w,
                (h - mb) - bar_h,
                bar_w,
                bar_h
            ));
        }
        svg.push_str(&axes(ml, mb, w, h, lo, hi, 0.0, max_count));
    }
    svg.push_str("</svg>\n");
    std::fs::write(path, svg)
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn svg_head(w: f64, h: f64, stamps: &Stamps, title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n<desc>config_hash={};manifest_hash={}</desc>\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n\
         <text x=\"{:.1}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{title}</text>\n",
        stamps.config_hash,
        stamps.manifest_hash,
        w / 2.0
    )
}

#[allow(clippy::too_many_arguments)]
fn axes(ml: f64, mb: f64, w: f64, h: f64, x0: f64, x1: f64, y0: f64, y1: f64) -> String {
    format!(
        "<line x1=\"{ml}\" y1=\"{yb}\" x2=\"{xr}\" y2=\"{yb}\" stroke=\"#000\"/>\n\
         <line x1=\"{ml}\" y1=\"{yb}\" x2=\"{ml}\" y2=\"30\" stroke=\"#000\"/>\n\
         <text x=\"{ml}\" y=\"{ybl}\" font-size=\"11\">{x0:.4}</text>\n\
         <text x=\"{xr}\" y=\"{ybl}\" font-size=\"11\" text-anchor=\"end\">{x1:.4}</text>\n\
         <text x=\"5\" y=\"{yb}\" font-size=\"11\">{y0:.4}</text>\n\
         <text x=\"5\" y=\"40\" font-size=\"11\">{y1:.4}</text>\n",
        yb = h - mb,
        xr = w - 20.0,
        ybl = h - mb + 16.0,
    )
}
