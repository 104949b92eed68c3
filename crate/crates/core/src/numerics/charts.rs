//! Agreement between the Liénard chart and the quadratic system it came from.

use super::cycles::{CycleNumeric, CycleOptions};
use super::ode::{integrate, Flow, OdeOptions, Reversed, Section, Termination};
use crate::error::{Error, Result};
use crate::reduction::LienardForm;
use serde::{Deserialize, Serialize};

fn point_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ((p[0] - a[0] - t * dx).powi(2) + (p[1] - a[1] - t * dy).powi(2)).sqrt()
}

fn directed(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    a.iter()
        .map(|&p| {
            b.windows(2)
                .map(|w| point_segment(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two polylines.
pub fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    directed(a, b).max(directed(b, a))
}

fn golden(lo: f64, hi: f64, d: &dyn Fn(f64) -> f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (lo, hi);
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (d(a), d(b));
    for _ in 0..80 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = d(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = d(b);
        }
    }
    fa.min(fb)
}

/// Distance from `p` to the closed curve `c` on `[ts[0], ts.last]`, refined
/// by golden section next to the nearest of the precomputed `pts = c(ts)`.
fn distance_to_curve(p: [f64; 2], ts: &[f64], pts: &[[f64; 2]], c: &dyn Fn(f64) -> [f64; 2]) -> f64 {
    let d = |q: [f64; 2]| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
    let (i, best) = pts
        .iter()
        .enumerate()
        .map(|(i, q)| (i, d(*q)))
        .fold((0, f64::INFINITY), |m, v| if v.1 < m.1 { v } else { m });
    let last = ts.len() - 1;
    let mut spans = vec![];
    if i > 0 {
        spans.push(i - 1);
    }
    if i < last {
        spans.push(i);
    }
    // the curve closes on itself across the ends of the grid
    if i == 0 || i == last {
        spans.push(0);
        spans.push(last - 1);
    }
    let along = |t: f64| d(c(t));
    spans.into_iter().map(|k| golden(ts[k], ts[k + 1], &along)).fold(best, f64::min)
}

/// Hausdorff distance between two parametrised curves, each given with a
/// sampling grid fine enough to isolate nearest points.
pub fn curve_hausdorff(
    (ta, ca): (&[f64], &dyn Fn(f64) -> [f64; 2]),
    (tb, cb): (&[f64], &dyn Fn(f64) -> [f64; 2]),
) -> f64 {
    let pa: Vec<[f64; 2]> = ta.iter().map(|&t| ca(t)).collect();
    let pb: Vec<[f64; 2]> = tb.iter().map(|&t| cb(t)).collect();
    let ab = pa.iter().map(|&p| distance_to_curve(p, tb, &pb, cb)).fold(0.0, f64::max);
    let ba = pb.iter().map(|&p| distance_to_curve(p, ta, &pa, ca)).fold(0.0, f64::max);
    ab.max(ba)
}

/// Liénard field with the original time `t(tau)` carried along.
struct Timed<'a>(&'a LienardForm);

impl Flow<3> for Timed<'_> {
    fn rhs(&self, s: &[f64; 3]) -> [f64; 3] {
        let [dx, dy] = self.0.rhs(s[0], s[1]);
        [dx, dy, self.0.time_factor(s[0]).unwrap_or(f64::NAN)]
    }
    fn singular_distance(&self, s: &[f64; 3]) -> Option<f64> {
        self.0.pole.map(|a| s[0] - a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartCheck {
    pub hausdorff: f64,
    /// Distance between the start and the return of the original orbit.
    pub closure: f64,
}

/// Maps a cycle to the original coordinates and compares it with the orbit
/// of the original system through one of its points.
pub fn chart_consistency(lf: &LienardForm, c: &CycleNumeric, opts: &CycleOptions) -> Result<ChartCheck> {
    let src = lf.source.as_ref().ok_or_else(|| Error::Precondition("no source system".into()))?;
    let n = 4000;
    let ode = OdeOptions { record: true, ..opts.ret.ode };
    let cyc = integrate(lf, [c.section_x, 0.0], [0.0, c.period], &ode, None::<&Section<2>>)?;
    if cyc.last().0 < c.period {
        return Err(Error::NoReturn { x_start: c.section_x, reason: "cycle left the chart".into() });
    }
    let map = |t: f64| {
        let q = cyc.at(t).unwrap_or([f64::NAN; 2]);
        lf.to_original(q).unwrap_or([f64::NAN; 2])
    };
    let p0 = map(0.0);
    if !p0.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("chart map".into()));
    }
    let v = src.input.rhs(p0[0], p0[1]);
    let speed = (v[0] * v[0] + v[1] * v[1]).sqrt();
    if speed == 0.0 {
        return Err(Error::Precondition("cycle passes through an equilibrium".into()));
    }
    let sec = Section { point: p0, normal: [v[0] / speed, v[1] / speed], stop_after: Some(2) };
    let tr = integrate(&src.input, p0, [0.0, 1e4], &ode, Some(&sec))?;
    if tr.termination != Termination::HitSection {
        return Err(Error::NoReturn { x_start: p0[0], reason: "original orbit did not close".into() });
    }
    let (t_end, end) = tr.last();
    let closure = ((end[0] - p0[0]).powi(2) + (end[1] - p0[1]).powi(2)).sqrt();
    let orig = |t: f64| tr.at(t).unwrap_or([f64::NAN; 2]);
    let grid = |t1: f64| -> Vec<f64> { (0..n).map(|i| t1 * i as f64 / (n - 1) as f64).collect() };
    let (ga, gb) = (grid(c.period), grid(t_end));
    let h = curve_hausdorff((&ga, &map), (&gb, &orig));
    Ok(ChartCheck { hausdorff: h, closure })
}

/// Largest distance between the image of a Liénard trajectory and the
/// original trajectory at matching original times, over `tau in [0, tau_end]`
/// or until the arc comes within `pole_margin` of the pole line. Returns the
/// deviation and the `tau` reached.
pub fn compare_trajectories(
    lf: &LienardForm,
    p_original: [f64; 2],
    tau_end: f64,
    samples: usize,
    pole_margin: f64,
    opts: &OdeOptions,
) -> Result<(f64, f64)> {
    let src = lf.source.as_ref().ok_or_else(|| Error::Precondition("no source system".into()))?;
    let z0 = lf
        .from_original(p_original)
        .ok_or_else(|| Error::Precondition("point is not in the chart".into()))?;
    let o = OdeOptions { record: true, pole_guard: opts.pole_guard.max(pole_margin), ..*opts };
    let timed = integrate(&Timed(lf), [z0[0], z0[1], 0.0], [0.0, tau_end], &o, None)?;
    let tau_reached = timed.last().0;
    let pts = timed.sample(samples);
    let t_last = pts.last().map_or(0.0, |p| p[2]);
    let forward = t_last >= 0.0;
    let orig = if forward {
        integrate(&src.input, p_original, [0.0, t_last], &o, None)?
    } else {
        integrate(&Reversed(&src.input), p_original, [0.0, -t_last], &o, None)?
    };
    let t_orig = orig.last().0;
    let mut worst = 0.0f64;
    for p in pts {
        let t = if forward { p[2] } else { -p[2] };
        if t > t_orig {
            break;
        }
        let Some(q) = orig.at(t) else { break };
        let m = lf.to_original([p[0], p[1]]).ok_or_else(|| Error::NonFinite("chart map".into()))?;
        let scale = 1.0 + q[0].abs().max(q[1].abs());
        worst = worst.max(((m[0] - q[0]).powi(2) + (m[1] - q[1]).powi(2)).sqrt() / scale);
    }
    Ok((worst, tau_reached))
}
