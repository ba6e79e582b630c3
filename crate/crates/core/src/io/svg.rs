//! Self-contained SVG plots: heatmap with contour overlay, multi-line time
//! series, and a stem-plus-line dual-axis chart for event-driven runs.
//!
//! Heatmap colour ramp: piecewise-linear interpolation through five viridis
//! anchors (#440154, #3b528b, #21918c, #5ec962, #fde725), low to high. Its
//! luminance increases monotonically. Singular cells are drawn gray (#9e9e9e).
//! Amplification maps saturate the ramp at 1/D = 5 so near-singular cells do
//! not compress the rest of the scale. The first contour overlay is a black
//! dashed line, the second a red dash-dot line.
//! Output depends only on the input; coordinates are printed with two decimals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::analysis::{ContourSet, GridField, GridScan};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;

const RAMP: [(u8, u8, u8); 5] = [
    (0x44, 0x01, 0x54),
    (0x3b, 0x52, 0x8b),
    (0x21, 0x91, 0x8c),
    (0x5e, 0xc9, 0x62),
    (0xfd, 0xe7, 0x25),
];
pub const SINGULAR_COLOR: &str = "#9e9e9e";
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Something that can be plotted.
#[derive(Debug, Clone, Copy)]
pub enum PlotArtifact<'a> {
    /// Heatmap of the scan with each contour set overlaid as a dashed polyline.
    Grid {
        scan: &'a GridScan,
        contours: &'a [(String, ContourSet)],
    },
    Contours(&'a [(String, ContourSet)]),
    /// Price paths, legend in slice order.
    Trajectories(&'a [(String, Trajectory)]),
    /// Price path on the left axis, spike magnitudes as stems on the right axis.
    Events {
        trajectory: &'a Trajectory,
        spikes: &'a BTreeMap<usize, f64>,
    },
}

/// Maps `t ∈ [0, 1]` onto the ramp.
pub fn ramp_color(t: f64) -> String {
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let pos = t * (RAMP.len() - 1) as f64;
    let i = (pos.floor() as usize).min(RAMP.len() - 2);
    let f = pos - i as f64;
    let lerp = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * f).round() as u8;
    let (a, b) = (RAMP[i], RAMP[i + 1]);
    format!(
        "#{:02x}{:02x}{:02x}",
        lerp(a.0, b.0),
        lerp(a.1, b.1),
        lerp(a.2, b.2)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        return format!("{v:.2e}");
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Round tick positions covering `[lo, hi]`, about five of them.
fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.05 };
        (lo - pad, hi + pad)
    }
}

/// Data-to-pixel transform for the plot area.
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Frame {
            x: padded(x.0, x.1),
            y: padded(y.0, y.1),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

struct Doc(String);

impl Doc {
    fn new(title: &str) -> Self {
        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(
            s,
            r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            escape(title)
        )
        .unwrap();
        Doc(s)
    }

    fn axes(&mut self, frame: &Frame, x_label: &str, y_label: &str) {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let s = &mut self.0;
        writeln!(
            s,
            r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        )
        .unwrap();
        for xv in nice_ticks(frame.x.0, frame.x.1) {
            let px = frame.px(xv);
            writeln!(
                s,
                r#"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 18.0,
                tick_label(xv)
            )
            .unwrap();
        }
        for yv in nice_ticks(frame.y.0, frame.y.1) {
            let py = frame.py(yv);
            writeln!(
                s,
                r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                tick_label(yv)
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 14.0,
            escape(x_label)
        )
        .unwrap();
        let cy = (y0 + y1) / 2.0;
        writeln!(
            s,
            r#"<text x="14" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 14 {cy:.2})">{}</text>"#,
            escape(y_label)
        )
        .unwrap();
    }

    fn polyline(&mut self, frame: &Frame, pts: &[(f64, f64)], stroke: &str, extra: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        writeln!(
            self.0,
            r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.5"{extra} points="{}"/>"#,
            coords.join(" ")
        )
        .unwrap();
    }

    fn legend(&mut self, entries: &[(String, String, &str)], x_offset: f64) {
        let x = WIDTH - RIGHT + 14.0 + x_offset;
        for (k, (label, color, dash)) in entries.iter().enumerate() {
            let y = TOP + 10.0 + 18.0 * k as f64;
            writeln!(
                self.0,
                r#"<g class="legend-entry"><line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}">{}</text></g>"#,
                x + 22.0,
                x + 28.0,
                y + 4.0,
                escape(label)
            )
            .unwrap();
        }
    }

    fn finish(mut self) -> String {
        self.0.push_str("</svg>\n");
        self.0
    }
}

const DASH: &str = r#" stroke-dasharray="6 4""#;
const DASH_DOT: &str = r#" stroke-dasharray="8 3 2 3""#;
/// Upper end of the colour ramp for amplification maps.
pub const AMPLIFICATION_COLOR_MAX: f64 = 5.0;

fn overlay_style(k: usize) -> (&'static str, &'static str) {
    match k {
        0 => ("black", DASH),
        1 => ("#d62728", DASH_DOT),
        _ => (PALETTE[k % PALETTE.len()], DASH),
    }
}

fn empty(what: &'static str) -> Error {
    Error::domain(what, 0.0, "artifact must be non-empty")
}

fn contour_bounds(sets: &[(String, ContourSet)]) -> Option<((f64, f64), (f64, f64))> {
    let mut it = sets.iter().flat_map(|(_, c)| c.vertices());
    let (b, g) = it.next()?;
    let mut bx = (b, b);
    let mut gy = (g, g);
    for (b, g) in it {
        bx = (bx.0.min(b), bx.1.max(b));
        gy = (gy.0.min(g), gy.1.max(g));
    }
    Some((bx, gy))
}

fn draw_contours(
    doc: &mut Doc,
    frame: &Frame,
    sets: &[(String, ContourSet)],
) -> Vec<(String, String, &'static str)> {
    let mut legend = Vec::new();
    for (k, (label, set)) in sets.iter().enumerate() {
        let (color, dash) = overlay_style(k);
        for line in &set.polylines {
            doc.polyline(frame, line, color, dash);
        }
        legend.push((label.clone(), color.to_string(), dash));
    }
    legend
}

fn grid_svg(scan: &GridScan, contours: &[(String, ContourSet)], title: &str) -> String {
    let spec = &scan.spec;
    let db = if spec.n_beta > 1 {
        spec.beta_step()
    } else {
        1.0
    };
    let dg = if spec.n_g > 1 { spec.g_step() } else { 1.0 };
    let frame = Frame::new(
        (spec.beta_min - db / 2.0, spec.beta_max + db / 2.0),
        (spec.g_min - dg / 2.0, spec.g_max + dg / 2.0),
    );
    let mut doc = Doc::new(title);
    let (lo, mut hi) = scan.range().unwrap_or((0.0, 1.0));
    if scan.field == GridField::Amplification {
        hi = hi.min(AMPLIFICATION_COLOR_MAX.max(lo));
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    let w = frame.px(frame.x.0 + db) - frame.px(frame.x.0);
    let h = frame.py(frame.y.0) - frame.py(frame.y.0 + dg);
    doc.0.push_str("<g shape-rendering=\"crispEdges\">\n");
    for (_, _, beta, g, v) in scan.cells() {
        let fill = match v {
            Some(v) => ramp_color((v - lo) / span),
            None => SINGULAR_COLOR.to_string(),
        };
        writeln!(
            doc.0,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
            frame.px(beta - db / 2.0),
            frame.py(g + dg / 2.0),
            w + 0.3,
            h + 0.3
        )
        .unwrap();
    }
    doc.0.push_str("</g>\n");
    let mut legend = draw_contours(&mut doc, &frame, contours);
    if scan.singular_count() > 0 {
        legend.push(("singular".into(), SINGULAR_COLOR.into(), ""));
    }
    doc.axes(&frame, "beta", "G = N0 * Gamma0");
    doc.legend(&legend, 0.0);

    // colour bar below the legend
    let x = WIDTH - RIGHT + 20.0;
    let top = TOP + 30.0 + 18.0 * legend.len() as f64;
    let bar_h = HEIGHT - BOTTOM - top;
    let steps = 40;
    for k in 0..steps {
        let t = 1.0 - (k as f64 + 0.5) / steps as f64;
        writeln!(
            doc.0,
            r#"<rect x="{x:.2}" y="{:.2}" width="16" height="{:.2}" fill="{}"/>"#,
            top + bar_h * k as f64 / steps as f64,
            bar_h / steps as f64 + 0.3,
            ramp_color(t)
        )
        .unwrap();
    }
    let name = match scan.field {
        GridField::StabilityDenominator => "D",
        GridField::Amplification => "1/D",
    };
    writeln!(
        doc.0,
        r#"<text x="{:.2}" y="{:.2}">{}</text><text x="{:.2}" y="{:.2}">{}</text><text x="{:.2}" y="{:.2}">{name}</text>"#,
        x + 22.0,
        top + 10.0,
        tick_label(hi),
        x + 22.0,
        top + bar_h,
        tick_label(lo),
        x + 22.0,
        top + bar_h / 2.0
    )
    .unwrap();
    doc.finish()
}

fn contours_svg(sets: &[(String, ContourSet)], title: &str) -> Result<String> {
    let (bx, gy) = contour_bounds(sets).ok_or_else(|| empty("contours"))?;
    let frame = Frame::new(bx, gy);
    let mut doc = Doc::new(title);
    let legend = draw_contours(&mut doc, &frame, sets);
    doc.axes(&frame, "beta", "G = N0 * Gamma0");
    doc.legend(&legend, 0.0);
    Ok(doc.finish())
}

fn series_bounds<'a>(series: impl Iterator<Item = &'a Trajectory>) -> ((f64, f64), (f64, f64)) {
    let mut tmax = 0.0f64;
    let mut y = (f64::INFINITY, f64::NEG_INFINITY);
    for tr in series {
        tmax = tmax.max(tr.horizon() as f64);
        for s in &tr.states {
            y = (y.0.min(s.s), y.1.max(s.s));
        }
    }
    ((0.0, tmax), y)
}

fn price_points(tr: &Trajectory) -> Vec<(f64, f64)> {
    tr.states.iter().map(|s| (s.t as f64, s.s)).collect()
}

fn trajectories_svg(series: &[(String, Trajectory)], title: &str) -> Result<String> {
    if series.is_empty() {
        return Err(empty("trajectories"));
    }
    let (x, y) = series_bounds(series.iter().map(|(_, t)| t));
    let frame = Frame::new(x, y);
    let mut doc = Doc::new(title);
    let mut legend = Vec::new();
    for (k, (label, tr)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        doc.polyline(&frame, &price_points(tr), color, "");
        legend.push((label.clone(), color.to_string(), ""));
    }
    doc.axes(&frame, "t", "S_t");
    doc.legend(&legend, 0.0);
    Ok(doc.finish())
}

fn events_svg(tr: &Trajectory, spikes: &BTreeMap<usize, f64>, title: &str) -> String {
    let (x, y) = series_bounds(std::iter::once(tr));
    let frame = Frame::new(x, y);
    let smax = spikes.values().fold(0.0f64, |a, &b| a.max(b));
    let right = Frame::new(x, (0.0, if smax > 0.0 { smax } else { 1.0 }));
    let mut doc = Doc::new(title);
    let stem = PALETTE[1];
    for (&t, &v) in spikes {
        let (px, base, tip) = (right.px(t as f64), right.py(0.0), right.py(v));
        writeln!(
            doc.0,
            r#"<line x1="{px:.2}" y1="{base:.2}" x2="{px:.2}" y2="{tip:.2}" stroke="{stem}"/><circle cx="{px:.2}" cy="{tip:.2}" r="2.5" fill="{stem}"/>"#
        )
        .unwrap();
    }
    doc.polyline(&frame, &price_points(tr), PALETTE[0], "");
    doc.axes(&frame, "t", "S_t");
    // right axis for spike magnitudes
    let xr = WIDTH - RIGHT;
    for v in nice_ticks(right.y.0, right.y.1) {
        let py = right.py(v);
        writeln!(
            doc.0,
            r#"<line x1="{xr:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            xr + 5.0,
            xr + 8.0,
            py + 4.0,
            tick_label(v)
        )
        .unwrap();
    }
    doc.legend(
        &[
            ("price S_t".into(), PALETTE[0].into(), ""),
            ("nu_t (right)".into(), stem.into(), ""),
        ],
        34.0,
    );
    doc.finish()
}

/// Renders an artifact as a standalone SVG document.
pub fn emit_svg(artifact: &PlotArtifact<'_>, title: &str) -> Result<String> {
    match *artifact {
        PlotArtifact::Grid { scan, contours } => {
            if scan.rows() == 0 || scan.cols() == 0 {
                return Err(empty("grid"));
            }
            Ok(grid_svg(scan, contours, title))
        }
        PlotArtifact::Contours(sets) => contours_svg(sets, title),
        PlotArtifact::Trajectories(series) => trajectories_svg(series, title),
        PlotArtifact::Events { trajectory, spikes } => Ok(events_svg(trajectory, spikes, title)),
    }
}
