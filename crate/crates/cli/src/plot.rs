//! SVG phase portraits and the CSV of every plotted series.

use crate::artifact::Artifact;
use crate::error::{CliError, CliResult};
use crate::json::num;
use lienard_core::analysis::{EquilibriumReport, Stability};
use lienard_core::reduction::LienardForm;
use std::fmt::Write;

const W: f64 = 800.0;
const H: f64 = 600.0;
const PAD: f64 = 50.0;

/// A named polyline (or point set) in plot coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<[f64; 2]>,
    pub style: Style,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Style {
    Nullcline,
    Cycle,
    Arc,
    Connector,
    Trajectory,
    StableEquilibria,
    UnstableEquilibria,
}

impl Style {
    fn is_points(self) -> bool {
        matches!(self, Style::StableEquilibria | Style::UnstableEquilibria)
    }

    fn stroke(self) -> &'static str {
        match self {
            Style::Nullcline => "#999999",
            Style::Cycle => "#c0392b",
            Style::Arc => "#1f4e9c",
            Style::Connector => "#1f4e9c",
            Style::Trajectory => "#2e7d32",
            _ => "#000000",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub title: String,
    pub series: Vec<Series>,
    /// Dashed vertical line at this abscissa.
    pub pole: Option<f64>,
    pub axis_note: String,
}

/// Compresses both axes so values spanning many decades stay visible.
fn signed_log(v: f64) -> f64 {
    v.signum() * v.abs().ln_1p() / std::f64::consts::LN_10
}

fn equilibria_series(eq: &[EquilibriumReport]) -> Vec<Series> {
    let pick = |stable: bool| -> Vec<[f64; 2]> {
        eq.iter()
            .filter(|e| (e.stability == Stability::Stable) == stable)
            .map(|e| [e.x0.unwrap_or(e.location[0]), 0.0])
            .collect()
    };
    vec![
        Series { name: "equilibria_stable".into(), points: pick(true), style: Style::StableEquilibria },
        Series { name: "equilibria_unstable".into(), points: pick(false), style: Style::UnstableEquilibria },
    ]
}

/// `y = 0` and `y = -g/f` over `[lo, hi]`, split where the latter blows up.
fn nullclines(lf: &LienardForm, lo: f64, hi: f64, y_cap: f64) -> Vec<Series> {
    let n = 800;
    let mut out = vec![Series { name: "nullcline_x".into(), points: vec![[lo, 0.0], [hi, 0.0]], style: Style::Nullcline }];
    let mut piece: Vec<[f64; 2]> = Vec::new();
    let mut k = 0;
    let mut flush = |piece: &mut Vec<[f64; 2]>, out: &mut Vec<Series>| {
        if piece.len() > 1 {
            k += 1;
            out.push(Series { name: format!("nullcline_y_{k}"), points: std::mem::take(piece), style: Style::Nullcline });
        }
        piece.clear();
    };
    for i in 0..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let (fx, gx) = (lf.f.eval(x), lf.g.eval(x));
        let y = -gx / fx;
        if y.is_finite() && y.abs() <= y_cap && lf.pole_distance(x) > 1e-9 {
            piece.push([x, y]);
        } else {
            flush(&mut piece, &mut out);
        }
    }
    flush(&mut piece, &mut out);
    out
}

fn extent(series: &[Series]) -> Option<[f64; 4]> {
    let mut b = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
    for p in series.iter().filter(|s| s.style != Style::Nullcline).flat_map(|s| &s.points) {
        if p[0].is_finite() && p[1].is_finite() {
            b = [b[0].min(p[0]), b[1].max(p[0]), b[2].min(p[1]), b[3].max(p[1])];
        }
    }
    b[0].is_finite().then_some(b)
}

pub fn figure(artifact: &Artifact) -> CliResult<Figure> {
    match artifact {
        Artifact::Cycles { lienard, search_box, equilibria, orbits, .. } => {
            let mut series: Vec<Series> = orbits
                .iter()
                .enumerate()
                .map(|(i, o)| Series { name: format!("cycle_{}", i + 1), points: o.clone(), style: Style::Cycle })
                .collect();
            let inside: Vec<EquilibriumReport> = equilibria
                .iter()
                .filter(|e| (search_box[0]..=search_box[1]).contains(&e.x0.unwrap_or(e.location[0])))
                .cloned()
                .collect();
            series.extend(equilibria_series(&inside));
            let ext = extent(&series).unwrap_or([search_box[0], search_box[1], -1.0, 1.0]);
            let (lo, hi) = (ext[0].min(search_box[0]), ext[1].max(search_box[1]));
            let cap = 2.0 * ext[2].abs().max(ext[3].abs()).max(1.0);
            let mut all = nullclines(lienard, lo, hi, cap);
            all.extend(series);
            Ok(Figure {
                title: format!("{} cycle(s)", orbits.len()),
                series: all,
                pole: lienard.pole,
                axis_note: "x, y (Lienard chart)".into(),
            })
        }
        Artifact::Transversal { curve, arcs, .. } => {
            let tr = |pts: &[[f64; 2]]| pts.iter().map(|p| [signed_log(p[0]), signed_log(p[1])]).collect();
            let mut series: Vec<Series> = arcs
                .iter()
                .enumerate()
                .map(|(i, a)| Series { name: format!("arc_{}", i + 1), points: tr(a), style: Style::Arc })
                .collect();
            let x0 = curve.x0;
            series.push(Series {
                name: "connector_upper".into(),
                points: tr(&[[x0, curve.y[4]], [x0, curve.y[5]]]),
                style: Style::Connector,
            });
            series.push(Series {
                name: "connector_lower".into(),
                points: tr(&[[x0, curve.y[6]], [x0, curve.y[7]]]),
                style: Style::Connector,
            });
            series.push(Series {
                name: "nullcline_x".into(),
                points: vec![[signed_log(curve.mu1), 0.0], [signed_log(curve.mu2), 0.0]],
                style: Style::Nullcline,
            });
            Ok(Figure {
                title: "transversal curve".into(),
                series,
                pole: curve.a.is_finite().then(|| signed_log(curve.a)),
                axis_note: "sgn(v) log10(1 + |v|) on both axes".into(),
            })
        }
        Artifact::Trajectory { lienard, states, .. } => {
            let mut series = vec![Series { name: "trajectory".into(), points: states.clone(), style: Style::Trajectory }];
            let pole = lienard.as_ref().and_then(|l| l.pole);
            if let (Some(lf), Some(ext)) = (lienard, extent(&series)) {
                let cap = 2.0 * ext[2].abs().max(ext[3].abs()).max(1.0);
                let mut all = nullclines(lf, ext[0], ext[1], cap);
                all.append(&mut series);
                series = all;
            }
            Ok(Figure { title: "trajectory".into(), series, pole, axis_note: "x, y".into() })
        }
        other => Err(CliError::UnknownArtifact(format!("`{}` cannot be plotted", other.name()))),
    }
}

pub fn render_svg(fig: &Figure) -> String {
    let mut ext = extent(&fig.series).unwrap_or([-1.0, 1.0, -1.0, 1.0]);
    for (lo, hi) in [(0, 1), (2, 3)] {
        let span = (ext[hi] - ext[lo]).max(1e-9);
        ext[lo] -= 0.05 * span;
        ext[hi] += 0.05 * span;
    }
    let sx = |x: f64| PAD + (x - ext[0]) / (ext[1] - ext[0]) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - ext[2]) / (ext[3] - ext[2]) * (H - 2.0 * PAD);
    let inside = |p: &[f64; 2]| p[0] >= ext[0] && p[0] <= ext[1] && p[1] >= ext[2] && p[1] <= ext[3];

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="frame"><rect x="{PAD}" y="{PAD}" width="{}" height="{}"/></clipPath></defs>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(s, r#"<text x="{PAD}" y="30" font-family="sans-serif" font-size="16">{}</text>"#, fig.title);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    for (v, x, y, anchor) in [
        (ext[0], PAD, H - PAD + 18.0, "start"),
        (ext[1], W - PAD, H - PAD + 18.0, "end"),
    ] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{v:.4}</text>"#);
    }
    for (v, y) in [(ext[2], H - PAD), (ext[3], PAD + 10.0)] {
        let _ = writeln!(s, r#"<text x="{}" y="{y}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.4}</text>"#, PAD - 4.0);
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 12.0,
        fig.axis_note
    );
    if let Some(a) = fig.pole.filter(|a| *a > ext[0] && *a < ext[1]) {
        let _ = writeln!(
            s,
            r#"<line id="pole" x1="{x:.3}" y1="{PAD}" x2="{x:.3}" y2="{}" stroke="black" stroke-dasharray="6,4"/>"#,
            H - PAD,
            x = sx(a)
        );
    }
    for ser in &fig.series {
        if ser.style.is_points() {
            let fill = if ser.style == Style::StableEquilibria { "black" } else { "white" };
            let _ = writeln!(s, r#"<g id="{}">"#, ser.name);
            for p in ser.points.iter().filter(|p| inside(p)) {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{fill}" stroke="black"/>"#,
                    sx(p[0]),
                    sy(p[1])
                );
            }
            let _ = writeln!(s, "</g>");
            continue;
        }
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p[0].is_finite() && p[1].is_finite())
            .map(|p| format!("{:.3},{:.3}", sx(p[0]), sy(p[1])))
            .collect();
        let width = if ser.style == Style::Nullcline { 1.0 } else { 1.8 };
        let _ = writeln!(
            s,
            r#"<polyline id="{}" clip-path="url(#frame)" fill="none" stroke="{}" stroke-width="{width}" points="{}"/>"#,
            ser.name,
            ser.style.stroke(),
            pts.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

/// One `name_x,name_y` column pair per series.
pub fn render_csv(fig: &Figure) -> String {
    let mut s = String::new();
    let header: Vec<String> =
        fig.series.iter().flat_map(|ser| [format!("{}_x", ser.name), format!("{}_y", ser.name)]).collect();
    s.push_str(&header.join(","));
    s.push('\n');
    let rows = fig.series.iter().map(|ser| ser.points.len()).max().unwrap_or(0);
    for r in 0..rows {
        let cells: Vec<String> = fig
            .series
            .iter()
            .flat_map(|ser| match ser.points.get(r) {
                Some(p) => [num(p[0]), num(p[1])],
                None => [String::new(), String::new()],
            })
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_matches_polylines() {
        let fig = Figure {
            title: "t".into(),
            series: vec![
                Series { name: "a".into(), points: vec![[0.0, 0.0], [1.0, 1.0]], style: Style::Cycle },
                Series { name: "b".into(), points: vec![[2.0, 0.5]], style: Style::StableEquilibria },
            ],
            pole: Some(0.5),
            axis_note: String::new(),
        };
        let svg = render_svg(&fig);
        let csv = render_csv(&fig);
        assert!(svg.contains(r#"<polyline id="a""#) && svg.contains(r#"<g id="b">"#));
        assert!(svg.contains("stroke-dasharray"));
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "a_x,a_y,b_x,b_y");
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().ends_with(",,"));
    }
}
