//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use super::weighted::WeightedFn;
use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Panel { lo, hi, value: k * h, error: ((k - g) * h).abs() }
}

/// Integrates `f` over `[lo, hi]` until the estimated error is below
/// `max(abs_tol, rel_tol * |value|)` or the panel budget runs out.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Quadrature {
    integrate_panels(f, &[lo, hi], abs_tol, rel_tol)
}

/// As [`integrate_adaptive`], starting from the panels between consecutive
/// `breaks` (monotone).
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, breaks: &[f64], abs_tol: f64, rel_tol: f64) -> Quadrature {
    let mut heap = BinaryHeap::new();
    let (mut value, mut error) = (0.0, 0.0);
    for w in breaks.windows(2).filter(|w| w[0] != w[1]) {
        let p = kronrod(&f, w[0], w[1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    if heap.is_empty() {
        return Quadrature { value: 0.0, error: 0.0, intervals: 0 };
    }
    let max_panels = 4000 + heap.len();
    while error > abs_tol.max(rel_tol * value.abs()) && heap.len() < max_panels {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo.min(worst.hi) || mid >= worst.hi.max(worst.lo) {
            heap.push(worst);
            break;
        }
        let left = kronrod(&f, worst.lo, mid);
        let right = kronrod(&f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift of the incremental updates
    let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Quadrature { value, error, intervals: heap.len() }
}

/// Breaks in `[a, b]` whose distance to `r` (outside the interval) doubles
/// from panel to panel.
fn geometric_breaks(a: f64, b: f64, r: f64, out: &mut Vec<f64>) {
    let (near, far, dir) = if r < a { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut d = (near - r).abs();
    let span = (far - r).abs();
    while d < span && out.len() < 4000 {
        out.push(r + dir * d);
        d *= 2.0;
    }
}

/// Panel edges for `[a, b]`, `a < b`: geometric towards nearby singular
/// points and towards infinity, so no first panel hides a steep end.
fn panel_breaks(w: &WeightedFn, a: f64, b: f64) -> Vec<f64> {
    let mut out = vec![a, b];
    for p in w.singular_points() {
        let d = if p < a { a - p } else { p - b };
        if d < b - a {
            geometric_breaks(a, b, p, &mut out);
        }
    }
    if a >= 0.0 {
        geometric_breaks(a, b, -1.0, &mut out);
    } else if b <= 0.0 {
        geometric_breaks(a, b, 1.0, &mut out);
    } else {
        out.push(0.0);
        geometric_breaks(a, 0.0, 1.0, &mut out);
        geometric_breaks(0.0, b, -1.0, &mut out);
    }
    out.retain(|x| *x >= a && *x <= b);
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// `∫_lo^hi w(x) dx` for a weighted function without singular points in the
/// closed interval. Bounds may be given in either order.
pub fn definite_integral(w: &WeightedFn, lo: f64, hi: f64) -> Result<f64> {
    let (a, b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if let Some(&p) = w.singular_points().iter().find(|&&p| p >= a && p <= b) {
        return Err(Error::PoleInInterval { pole: p, lo, hi });
    }
    if w.is_zero() || a == b {
        return Ok(0.0);
    }
    let q = integrate_panels(|x| w.eval(x), &panel_breaks(w, a, b), 1e-13, 1e-13);
    if !q.value.is_finite() {
        return Err(Error::NonFinite(format!("integral over [{lo}, {hi}]")));
    }
    Ok(if lo <= hi { q.value } else { -q.value })
}
