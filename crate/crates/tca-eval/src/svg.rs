//! Minimal hand-rolled SVG charts: a one-day timeline of densities and
//! clusters, and the threshold-sweep error/energy curve. Deterministic
//! output, fixed float precision.

use std::fmt::Write as _;

use tca_core::{Cluster, DensityPrototype};

use crate::sim::SweepCurve;

fn svg_open(out: &mut String, width: u32, height: u32) {
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">"##
    );
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"##
    );
}

/// One-day timeline: density bars per bin, the density threshold, and the
/// chosen cluster spans.
pub fn timeline_svg(
    proto: &DensityPrototype,
    clusters: &[Cluster],
    d_star: f64,
    selected_ell: u32,
) -> String {
    const W: u32 = 1200;
    const H: u32 = 240;
    const LEFT: f64 = 40.0;
    const TOP: f64 = 20.0;
    const PLOT_W: f64 = 1140.0;
    const PLOT_H: f64 = 150.0;

    let mut out = String::new();
    svg_open(&mut out, W, H);

    let n = proto.len() as f64;
    let max_density = proto.bins().iter().copied().fold(0.0f64, f64::max).max(1e-9);
    let x_of = |bin: f64| LEFT + bin / n * PLOT_W;
    let y_of = |d: f64| TOP + PLOT_H - (d / max_density) * PLOT_H;

    // hour grid every 4 hours
    for hour in (0..=24).step_by(4) {
        let x = x_of(hour as f64 * 60.0 / proto.period() as f64);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.1}" y1="{TOP}" x2="{x:.1}" y2="{:.1}" stroke="#dddddd"/>"##,
            TOP + PLOT_H
        );
        let _ = writeln!(
            out,
            r##"<text x="{x:.1}" y="{:.1}" text-anchor="middle" fill="#555555">{hour:02}:00</text>"##,
            TOP + PLOT_H + 16.0
        );
    }

    // cluster spans
    for c in clusters {
        let x = x_of(c.start_bin as f64);
        let w = x_of(c.end_bin as f64 + 1.0) - x;
        let _ = writeln!(
            out,
            r##"<rect x="{x:.1}" y="{TOP}" width="{w:.1}" height="{PLOT_H}" fill="#4477cc" fill-opacity="0.25"/>"##
        );
    }

    // density bars
    let bar_w = PLOT_W / n;
    for (i, &d) in proto.bins().iter().enumerate() {
        if d <= 0.0 {
            continue;
        }
        let x = x_of(i as f64);
        let y = y_of(d);
        let h = TOP + PLOT_H - y;
        let _ = writeln!(
            out,
            r##"<rect x="{x:.1}" y="{y:.1}" width="{bar_w:.2}" height="{h:.1}" fill="#333333"/>"##
        );
    }

    // density threshold
    let ty = y_of(d_star);
    let _ = writeln!(
        out,
        r##"<line x1="{LEFT}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#cc3333" stroke-dasharray="6,3"/>"##,
        LEFT + PLOT_W
    );
    let _ = writeln!(
        out,
        r##"<text x="{LEFT}" y="{:.1}" fill="#333333">density threshold {d_star:.3}, time threshold {selected_ell} min, {} clusters</text>"##,
        TOP + PLOT_H + 34.0,
        clusters.len()
    );

    out.push_str("</svg>\n");
    out
}

/// Sweep curve: mean error (left axis) and mean energy (right axis)
/// against the density threshold, with the three mode positions marked.
pub fn sweep_svg(curve: &SweepCurve, energy_label: &str) -> String {
    const W: u32 = 900;
    const H: u32 = 420;
    const LEFT: f64 = 60.0;
    const TOP: f64 = 20.0;
    const PLOT_W: f64 = 780.0;
    const PLOT_H: f64 = 320.0;

    let mut out = String::new();
    svg_open(&mut out, W, H);

    let max_d = curve.points.last().map(|p| p.d_star).unwrap_or(1.0).max(1e-12);
    let max_energy = curve.points.iter().map(|p| p.mean_energy).fold(0.0f64, f64::max).max(1e-9);
    let x_of = |d: f64| LEFT + d / max_d * PLOT_W;
    let y_err = |e: f64| TOP + PLOT_H - e.min(1.0) * PLOT_H;
    let y_energy = |e: f64| TOP + PLOT_H - e / max_energy * PLOT_H;

    let _ = writeln!(
        out,
        r##"<rect x="{LEFT}" y="{TOP}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="#999999"/>"##
    );

    // mode markers
    for (label, d) in [
        ("comfort", curve.modes.comfort),
        ("balance", curve.modes.balance),
        ("eco", curve.modes.eco),
    ] {
        let x = x_of(d);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.1}" y1="{TOP}" x2="{x:.1}" y2="{:.1}" stroke="#888888" stroke-dasharray="3,3"/>"##,
            TOP + PLOT_H
        );
        let _ = writeln!(
            out,
            r##"<text x="{x:.1}" y="{:.1}" text-anchor="middle" fill="#555555">{label}</text>"##,
            TOP + PLOT_H + 14.0
        );
    }

    let polyline = |vals: &[(f64, f64)]| -> String {
        let mut points = String::new();
        for &(x, y) in vals {
            let _ = write!(points, "{x:.1},{y:.1} ");
        }
        points.trim_end().to_string()
    };

    let energy_points: Vec<(f64, f64)> = curve
        .points
        .iter()
        .map(|p| (x_of(p.d_star), y_energy(p.mean_energy)))
        .collect();
    let error_points: Vec<(f64, f64)> =
        curve.points.iter().map(|p| (x_of(p.d_star), y_err(p.mean_error))).collect();

    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#3355bb" stroke-width="2"/>"##,
        polyline(&energy_points)
    );
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#cc3333" stroke-width="2" stroke-dasharray="7,4"/>"##,
        polyline(&error_points)
    );

    let _ = writeln!(
        out,
        r##"<text x="{LEFT}" y="{:.1}" fill="#3355bb">solid: mean energy ({energy_label})   max {max_energy:.2}</text>"##,
        TOP + PLOT_H + 40.0
    );
    let _ = writeln!(
        out,
        r##"<text x="{LEFT}" y="{:.1}" fill="#cc3333">dashed: mean error rate (0 to 1)</text>"##,
        TOP + PLOT_H + 56.0
    );
    let _ = writeln!(
        out,
        r##"<text x="{:.1}" y="{:.1}" text-anchor="end" fill="#555555">density threshold up to {max_d:.3}</text>"##,
        LEFT + PLOT_W,
        TOP + PLOT_H + 40.0
    );

    out.push_str("</svg>\n");
    out
}
