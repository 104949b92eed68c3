//! Limit cycles as fixed points of the return map on `{y = 0}`.

use super::ode::{integrate, Section};
use super::poincare::{poincare_return, ReturnOptions, ReturnSample};
use crate::algebra::real_root_values;
use crate::analysis::{CycleCertificate, Region, Stability};
use crate::error::{Error, Result};
use crate::reduction::LienardForm;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleOptions {
    pub scan_points: usize,
    /// Bound on `|P(x) - x|` at an accepted fixed point.
    pub tol: f64,
    pub ret: ReturnOptions,
}

impl Default for CycleOptions {
    fn default() -> Self {
        CycleOptions { scan_points: 400, tol: 1e-8, ret: ReturnOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleNumeric {
    pub section_x: f64,
    /// Both crossings of `{y = 0}`, ascending.
    pub crossings: [f64; 2],
    pub period: f64,
    /// `(x_min, x_max)` along the orbit.
    pub amplitude: (f64, f64),
    pub y_range: (f64, f64),
    /// Derivative of the return map at `section_x`.
    pub multiplier: f64,
    /// With respect to the time of the chart it was found in.
    pub stability: Stability,
    /// `|P(section_x) - section_x|`.
    pub residual: f64,
}

impl CycleNumeric {
    pub fn encloses(&self, x: f64) -> bool {
        self.crossings[0] < x && x < self.crossings[1]
    }
}

/// Abscissas on `{y = 0}` that no cycle can cross: equilibria and singular points.
fn breakpoints(lf: &LienardForm, lo: f64, hi: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = lf.f.singular_points();
    pts.extend(lf.g.singular_points());
    let num = &lf.g.core.numerator;
    if num.degree() <= 4 && !num.is_zero() {
        pts.extend(real_root_values(num).unwrap_or_default());
    } else {
        let n = 20_000;
        let xs: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        for w in xs.windows(2) {
            if lf.g.eval(w[0]) * lf.g.eval(w[1]) < 0.0 {
                pts.push(0.5 * (w[0] + w[1]));
            }
        }
    }
    pts.retain(|p| *p > lo && *p < hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn scan_grid(lo: f64, hi: f64, n: usize, dense_lo: bool, dense_hi: bool) -> Vec<f64> {
    let len = hi - lo;
    let mut xs: Vec<f64> = (1..n.max(2)).map(|i| lo + len * i as f64 / n.max(2) as f64).collect();
    for k in 2..16 {
        let d = len * 0.5f64.powi(k);
        if dense_lo {
            xs.push(lo + d);
        }
        if dense_hi {
            xs.push(hi - d);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn refine(
    lf: &LienardForm,
    (mut a, mut fa): (f64, f64),
    (mut b, mut fb): (f64, f64),
    opts: &CycleOptions,
) -> Option<f64> {
    let d = |x: f64| poincare_return(lf, x, &opts.ret).ok().map(|r| r.displacement());
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    let mut side = 0i8;
    for it in 0..200 {
        let width = (b - a).abs();
        let secant = (fa * b - fb * a) / (fa - fb);
        let x = if it % 4 == 3 || !(secant > a.min(b) && secant < a.max(b)) {
            0.5 * (a + b)
        } else {
            secant
        };
        let fx = d(x)?;
        if fx.abs() < 1e-3 * opts.tol || width < 1e-15 * (1.0 + x.abs()) {
            return Some(x);
        }
        // Illinois update keeps the bracket shrinking from both sides
        if (fx > 0.0) == (fb > 0.0) {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Some(0.5 * (a + b))
}

/// Assembles the cycle through `(x, 0)`.
pub fn describe_cycle(lf: &LienardForm, x: f64, opts: &CycleOptions) -> Result<CycleNumeric> {
    let r: ReturnSample = poincare_return(lf, x, &opts.ret)?;
    let h = 1e-5 * (1.0 + x.abs());
    let plus = poincare_return(lf, x + h, &opts.ret)?;
    let minus = poincare_return(lf, x - h, &opts.ret)?;
    let multiplier = (plus.x_return - minus.x_return) / (2.0 * h);
    let stability = if multiplier.abs() < 1.0 {
        Stability::Stable
    } else if multiplier.abs() > 1.0 {
        Stability::Unstable
    } else {
        Stability::Neutral
    };
    let orbit = cycle_orbit_from(lf, x, r.period, 2000, opts)?;
    let fold = |k: usize| {
        orbit.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[k]), hi.max(p[k])))
    };
    Ok(CycleNumeric {
        section_x: x,
        crossings: [x.min(r.x_half), x.max(r.x_half)],
        period: r.period,
        amplitude: fold(0),
        y_range: fold(1),
        multiplier,
        stability,
        residual: r.displacement().abs(),
    })
}

fn cycle_orbit_from(
    lf: &LienardForm,
    x: f64,
    period: f64,
    n: usize,
    opts: &CycleOptions,
) -> Result<Vec<[f64; 2]>> {
    let ode = super::ode::OdeOptions { record: true, ..opts.ret.ode };
    let tr = integrate(lf, [x, 0.0], [0.0, period], &ode, None::<&Section<2>>)?;
    if tr.last().0 < period {
        return Err(Error::NoReturn { x_start: x, reason: "orbit left the domain".into() });
    }
    let mut pts = tr.sample(n);
    pts.extend(tr.states.iter().copied());
    Ok(pts)
}

/// `n` points along one period, in time order.
pub fn cycle_orbit(lf: &LienardForm, c: &CycleNumeric, n: usize, opts: &CycleOptions) -> Result<Vec<[f64; 2]>> {
    let ode = super::ode::OdeOptions { record: true, ..opts.ret.ode };
    let tr = integrate(lf, [c.section_x, 0.0], [0.0, c.period], &ode, None::<&Section<2>>)?;
    Ok(tr.sample(n))
}

/// Scans `{y = 0} x [lo, hi]`, never bracketing across an equilibrium or pole.
pub fn find_cycles(lf: &LienardForm, search_box: [f64; 2], opts: &CycleOptions) -> Vec<CycleNumeric> {
    let [lo, hi] = search_box;
    if !(hi > lo) {
        return Vec::new();
    }
    let cuts = breakpoints(lf, lo, hi);
    let mut edges = vec![lo];
    edges.extend(cuts.iter().copied());
    edges.push(hi);
    let guard = opts.ret.ode.pole_guard;
    let total = hi - lo;

    let mut grids: Vec<Vec<f64>> = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let margin = 1e-9 * (1.0 + a.abs().max(b.abs())) + 2.0 * guard;
        let (a, b) = (a + margin, b - margin);
        if b <= a {
            continue;
        }
        let n = ((opts.scan_points as f64) * (b - a) / total).ceil() as usize + 2;
        let dense_lo = cuts.contains(&w[0]);
        let dense_hi = cuts.contains(&w[1]);
        let mut g = scan_grid(a, b, n, dense_lo, dense_hi);
        g.retain(|x| lf.pole_distance(*x) > 2.0 * guard);
        grids.push(g);
    }

    let brackets: Vec<((f64, f64), (f64, f64))> = grids
        .par_iter()
        .flat_map_iter(|g| {
            let d: Vec<Option<f64>> = g
                .iter()
                .map(|&x| poincare_return(lf, x, &opts.ret).ok().map(|r| r.displacement()))
                .collect();
            let mut out = Vec::new();
            for i in 1..g.len() {
                if let (Some(p), Some(q)) = (d[i - 1], d[i]) {
                    if p == 0.0 || p * q < 0.0 {
                        out.push(((g[i - 1], p), (g[i], q)));
                    }
                }
            }
            out
        })
        .collect();

    let mut found: Vec<CycleNumeric> = brackets
        .par_iter()
        .filter_map(|&(l, r)| refine(lf, l, r, opts))
        .filter_map(|x| describe_cycle(lf, x, opts).ok())
        .filter(|c| c.residual < opts.tol)
        .collect();
    found.sort_by(|a, b| a.crossings[0].total_cmp(&b.crossings[0]));

    let mut out: Vec<CycleNumeric> = Vec::new();
    for c in found {
        let same = |o: &CycleNumeric| {
            (0..2).all(|k| (o.crossings[k] - c.crossings[k]).abs() <= 1e-6 * (1.0 + c.crossings[k].abs()))
        };
        if !out.iter().any(same) {
            out.push(c);
        }
    }
    out
}

/// A cycle lying where the certificate says one must.
pub fn confirm_certificate<'a>(
    cert: &CycleCertificate,
    cycles: &'a [CycleNumeric],
) -> Option<&'a CycleNumeric> {
    match cert.region {
        Region::Annulus { center, .. } => cycles.iter().find(|c| c.encloses(center[0])),
        Region::HalfPlane { a } => cycles.iter().find(|c| c.amplitude.0 > a),
    }
}
