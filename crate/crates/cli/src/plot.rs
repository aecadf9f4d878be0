//! SVG figures, each paired with the CSV it is drawn from.
//!
//! `render` depends only on the data, and the CSV stores every value with a
//! round-trip representation, so `from_csv(to_csv(x)).render() == x.render()`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ots_core::boxplot_outlier_flags;

use crate::error::{CliError, Result};
use crate::io::fmt_f64;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 616.0;
const TOP: f64 = 28.0;
const BOTTOM: f64 = 372.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct PlotArtifact {
    pub svg: String,
    pub data_csv: String,
}

impl PlotArtifact {
    /// Writes the SVG to `path` and the data next to it with a `.csv` extension.
    pub fn write(&self, path: &Path) -> Result<PathBuf> {
        let data_path = path.with_extension("csv");
        fs::write(path, &self.svg)?;
        fs::write(&data_path, &self.data_csv)?;
        Ok(data_path)
    }
}

pub trait Plot: Sized {
    fn to_csv(&self) -> String;
    fn from_csv(text: &str) -> Result<Self>;
    fn render(&self) -> String;

    fn artifact(&self) -> PlotArtifact {
        PlotArtifact {
            svg: self.render(),
            data_csv: self.to_csv(),
        }
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| {
            if hi > lo {
                let pad = 0.05 * (hi - lo);
                (lo - pad, hi + pad)
            } else {
                (lo - 1.0, hi + 1.0)
            }
        };
        Self {
            x: widen(x),
            y: widen(y),
        }
    }

    fn px(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (RIGHT - LEFT)
    }

    fn py(&self, v: f64) -> f64 {
        BOTTOM - (v - self.y.0) / (self.y.1 - self.y.0) * (BOTTOM - TOP)
    }
}

fn extent(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

fn open(title: &str, x_label: &str, y_label: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle" font-size="14">{}</text>"#,
        (LEFT + RIGHT) / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        (TOP + BOTTOM) / 2.0,
        escape(y_label)
    );
    s
}

fn y_tick(s: &mut String, frame: &Frame, value: f64, label: &str) {
    let y = frame.py(value);
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
        LEFT - 4.0,
        LEFT - 6.0,
        y + 4.0,
        escape(label)
    );
}

fn x_tick(s: &mut String, frame: &Frame, value: f64, label: &str) {
    let x = frame.px(value);
    let _ = writeln!(
        s,
        r#"<line x1="{x:.2}" y1="{BOTTOM}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
        BOTTOM + 4.0,
        BOTTOM + 16.0,
        escape(label)
    );
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn short(v: f64) -> String {
    format!("{v:.3}")
}

fn records(text: &str, expected: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.iter().ne(expected.iter().copied()) {
        return Err(CliError::Invalid(format!(
            "plot data header must be {}",
            expected.join(",")
        )));
    }
    Ok(reader.records().collect::<std::result::Result<_, _>>()?)
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize) -> Result<T> {
    let raw = record.get(i).unwrap_or("");
    raw.parse()
        .map_err(|_| CliError::Invalid(format!("bad plot data value '{raw}'")))
}

fn csv_text(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("{header}\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// κ̂(h) at lags `1..=H` with the two critical values.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaPlot {
    pub kappas: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
}

impl Plot for KappaPlot {
    fn to_csv(&self) -> String {
        csv_text(
            "lag,kappa,lower,upper",
            self.kappas.iter().enumerate().map(|(i, k)| {
                format!(
                    "{},{},{},{}",
                    i + 1,
                    fmt_f64(*k),
                    fmt_f64(self.lower),
                    fmt_f64(self.upper)
                )
            }),
        )
    }

    fn from_csv(text: &str) -> Result<Self> {
        let rows = records(text, &["lag", "kappa", "lower", "upper"])?;
        let first = rows
            .first()
            .ok_or_else(|| CliError::Invalid("no plot data".into()))?;
        Ok(Self {
            kappas: rows.iter().map(|r| field(r, 1)).collect::<Result<_>>()?,
            lower: field(first, 2)?,
            upper: field(first, 3)?,
        })
    }

    fn render(&self) -> String {
        let h = self.kappas.len() as f64;
        let (lo, hi) = extent(
            self.kappas
                .iter()
                .copied()
                .chain([self.lower, self.upper, 0.0]),
        );
        let frame = Frame::new((0.5, h + 0.5), (lo, hi));
        let mut s = open("serial dependence", "lag", "kappa");
        y_tick(&mut s, &frame, 0.0, "0");
        y_tick(&mut s, &frame, lo, &short(lo));
        y_tick(&mut s, &frame, hi, &short(hi));
        let zero = frame.py(0.0);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{zero:.2}" x2="{RIGHT}" y2="{zero:.2}" stroke="#888"/>"##
        );
        for (i, k) in self.kappas.iter().enumerate() {
            let lag = (i + 1) as f64;
            x_tick(&mut s, &frame, lag, &(i + 1).to_string());
            let (x, y) = (frame.px(lag), frame.py(*k));
            let _ = writeln!(
                s,
                r##"<line class="kappa" x1="{x:.2}" y1="{zero:.2}" x2="{x:.2}" y2="{y:.2}" stroke="#1f77b4" stroke-width="6"/>"##
            );
        }
        for c in [self.lower, self.upper] {
            let y = frame.py(c);
            let _ = writeln!(
                s,
                r##"<line class="critical" x1="{LEFT}" y1="{y:.2}" x2="{RIGHT}" y2="{y:.2}" stroke="#d62728" stroke-dasharray="6 4"/>"##
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// One series drawn against equidistant state levels.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPlot {
    pub states: Vec<String>,
    pub codes: Vec<usize>,
}

impl Plot for SeriesPlot {
    fn to_csv(&self) -> String {
        csv_text(
            "t,code,state",
            self.codes
                .iter()
                .enumerate()
                .map(|(t, &c)| format!("{},{},{}", t + 1, c, self.states[c])),
        )
    }

    fn from_csv(text: &str) -> Result<Self> {
        let rows = records(text, &["t", "code", "state"])?;
        let codes: Vec<usize> = rows.iter().map(|r| field(r, 1)).collect::<Result<_>>()?;
        let top = codes.iter().copied().max().unwrap_or(0);
        let mut states: Vec<String> = (0..=top).map(|i| i.to_string()).collect();
        for (r, &c) in rows.iter().zip(&codes) {
            states[c] = r.get(2).unwrap_or("").to_string();
        }
        Ok(Self { states, codes })
    }

    fn render(&self) -> String {
        let t = self.codes.len() as f64;
        let top = self.states.len().saturating_sub(1) as f64;
        let frame = Frame::new((1.0, t.max(2.0)), (0.0, top));
        let mut s = open("ordinal time series", "t", "state");
        for (i, label) in self.states.iter().enumerate() {
            y_tick(&mut s, &frame, i as f64, label);
            let y = frame.py(i as f64);
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{RIGHT}" y2="{y:.2}" stroke="#ddd"/>"##
            );
        }
        x_tick(&mut s, &frame, 1.0, "1");
        x_tick(&mut s, &frame, t, &self.codes.len().to_string());
        let points: Vec<String> = self
            .codes
            .iter()
            .enumerate()
            .map(|(i, &c)| format!("{:.2},{:.2}", frame.px((i + 1) as f64), frame.py(c as f64)))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline class="series" points="{}" fill="none" stroke="#1f77b4"/>"##,
            points.join(" ")
        );
        for p in &points {
            let (x, y) = p.split_once(',').unwrap_or_default();
            let _ = writeln!(s, r##"<circle cx="{x}" cy="{y}" r="2.5" fill="#1f77b4"/>"##);
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Two-dimensional embedding, coloured by group when labels exist.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPlot {
    pub points: Vec<(f64, f64)>,
    pub groups: Option<Vec<i64>>,
}

impl Plot for ScatterPlot {
    fn to_csv(&self) -> String {
        csv_text(
            "index,x,y,group",
            self.points.iter().enumerate().map(|(i, (x, y))| {
                let g = self
                    .groups
                    .as_ref()
                    .map(|g| g[i].to_string())
                    .unwrap_or_default();
                format!("{},{},{},{}", i + 1, fmt_f64(*x), fmt_f64(*y), g)
            }),
        )
    }

    fn from_csv(text: &str) -> Result<Self> {
        let rows = records(text, &["index", "x", "y", "group"])?;
        let points = rows
            .iter()
            .map(|r| Ok((field(r, 1)?, field(r, 2)?)))
            .collect::<Result<_>>()?;
        let groups =
            if rows.iter().all(|r| r.get(3).is_some_and(|g| !g.is_empty())) && !rows.is_empty() {
                Some(rows.iter().map(|r| field(r, 3)).collect::<Result<_>>()?)
            } else {
                None
            };
        Ok(Self { points, groups })
    }

    fn render(&self) -> String {
        let frame = Frame::new(
            extent(self.points.iter().map(|p| p.0)),
            extent(self.points.iter().map(|p| p.1)),
        );
        let mut s = open("multidimensional scaling", "coordinate 1", "coordinate 2");
        let mut palette: Vec<i64> = self.groups.clone().unwrap_or_default();
        palette.sort_unstable();
        palette.dedup();
        for (i, (x, y)) in self.points.iter().enumerate() {
            let colour = match &self.groups {
                Some(g) => {
                    let slot = palette.binary_search(&g[i]).unwrap_or(0);
                    PALETTE[slot % PALETTE.len()]
                }
                None => PALETTE[0],
            };
            let _ = writeln!(
                s,
                r#"<circle class="point" cx="{:.2}" cy="{:.2}" r="4" fill="{colour}"><title>{}</title></circle>"#,
                frame.px(*x),
                frame.py(*y),
                i + 1
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Outlier scores with the boxplot and its upper fence.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxPlot {
    pub scores: Vec<f64>,
    pub range_coef: f64,
}

impl Plot for BoxPlot {
    fn to_csv(&self) -> String {
        csv_text(
            "index,score,range_coef",
            self.scores
                .iter()
                .enumerate()
                .map(|(i, v)| format!("{},{},{}", i + 1, fmt_f64(*v), fmt_f64(self.range_coef))),
        )
    }

    fn from_csv(text: &str) -> Result<Self> {
        let rows = records(text, &["index", "score", "range_coef"])?;
        let first = rows
            .first()
            .ok_or_else(|| CliError::Invalid("no plot data".into()))?;
        Ok(Self {
            scores: rows.iter().map(|r| field(r, 1)).collect::<Result<_>>()?,
            range_coef: field(first, 2)?,
        })
    }

    fn render(&self) -> String {
        let mut s = open("outlier scores", "", "score");
        let fence = match boxplot_outlier_flags(&self.scores, self.range_coef) {
            Ok(f) => f,
            Err(_) => {
                s.push_str("</svg>\n");
                return s;
            }
        };
        let frame = Frame::new(
            (0.0, 1.0),
            extent(self.scores.iter().copied().chain([fence.upper_fence])),
        );
        let (cx, half) = (frame.px(0.5), 60.0);
        let (yq1, yq3, ymed) = (
            frame.py(fence.q1),
            frame.py(fence.q3),
            frame.py(fence.median),
        );
        y_tick(&mut s, &frame, fence.q1, &short(fence.q1));
        y_tick(&mut s, &frame, fence.q3, &short(fence.q3));
        let _ = writeln!(
            s,
            r#"<rect class="box" x="{:.2}" y="{yq3:.2}" width="{}" height="{:.2}" fill="none" stroke="black"/>"#,
            cx - half,
            2.0 * half,
            yq1 - yq3
        );
        let _ = writeln!(
            s,
            r#"<line class="median" x1="{:.2}" y1="{ymed:.2}" x2="{:.2}" y2="{ymed:.2}" stroke="black" stroke-width="2"/>"#,
            cx - half,
            cx + half
        );
        let yf = frame.py(fence.upper_fence);
        let _ = writeln!(
            s,
            r##"<line class="fence" x1="{LEFT}" y1="{yf:.2}" x2="{RIGHT}" y2="{yf:.2}" stroke="#d62728" stroke-dasharray="6 4"/>"##
        );
        for (i, (v, flagged)) in self.scores.iter().zip(&fence.flags).enumerate() {
            let (class, colour) = if *flagged {
                ("outlier", "#d62728")
            } else {
                ("score", "#1f77b4")
            };
            let _ = writeln!(
                s,
                r#"<circle class="{class}" cx="{cx:.2}" cy="{:.2}" r="3" fill="{colour}"><title>{}</title></circle>"#,
                frame.py(*v),
                i + 1
            );
        }
        s.push_str("</svg>\n");
        s
    }
}
