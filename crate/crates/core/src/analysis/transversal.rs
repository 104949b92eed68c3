//! Piecewise level-set curve crossed inward by the Liénard flow on
//! `{x > a}`: eight arcs of `V1..V7` joined at `nu1`, `nu2`, `mu1`, `mu2`
//! and by two vertical connectors at `x0`.

use crate::algebra::{definite_integral, real_roots, WeightedFn};
use crate::error::{Error, Result};
use crate::reduction::LienardForm;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransversalOptions {
    pub initial_epsilon: f64,
    /// Required ratio of the band ordinate floor to the bound it must beat.
    pub safety: f64,
    pub max_halvings: usize,
    pub max_growths: usize,
    pub band_samples: usize,
}

impl Default for TransversalOptions {
    fn default() -> Self {
        TransversalOptions {
            initial_epsilon: 1e-2,
            safety: 1.25,
            max_halvings: 30,
            max_growths: 80,
            band_samples: 2000,
        }
    }
}

/// One arc `y = sign sqrt(base - 2 int_mu^x g + tilt (x - tilt_anchor)) - Phi(x)`
/// with `Phi(x) = int_{phi_anchor}^x f` (zero when there is no anchor).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    /// Index `j` of the region `Omega_j` it bounds.
    pub region: u8,
    /// Index of the function `V_k` it is a level set of.
    pub function: u8,
    pub x_lo: f64,
    pub x_hi: f64,
    pub sign: f64,
    pub phi_anchor: Option<f64>,
    pub mu: f64,
    pub base: f64,
    pub tilt: f64,
    pub tilt_anchor: f64,
}

impl Segment {
    fn y_from(&self, x: f64, int_g: f64, phi: f64) -> f64 {
        let arg = self.base - 2.0 * int_g + self.tilt * (x - self.tilt_anchor);
        self.sign * arg.max(0.0).sqrt() - phi
    }

    pub fn eval(&self, f: &WeightedFn, g: &WeightedFn, x: f64) -> Result<f64> {
        let ig = definite_integral(g, self.mu, x)?;
        let phi = match self.phi_anchor {
            Some(nu) => definite_integral(f, nu, x)?,
            None => 0.0,
        };
        Ok(self.y_from(x, ig, phi))
    }

    /// Points of the arc at `xs`, integrating outward from each anchor.
    pub fn sample(&self, f: &WeightedFn, g: &WeightedFn, xs: &[f64]) -> Result<Vec<[f64; 2]>> {
        let ig = cumulative(g, self.mu, xs)?;
        let phi = match self.phi_anchor {
            Some(nu) => cumulative(f, nu, xs)?,
            None => vec![0.0; xs.len()],
        };
        Ok(xs.iter().zip(ig.iter().zip(&phi)).map(|(&x, (&i, &p))| [x, self.y_from(x, i, p)]).collect())
    }

    /// `V_k'` along the flow at `(x, y)`.
    pub fn vdot(&self, f: &WeightedFn, g: &WeightedFn, x: f64, y: f64, phi: f64, eps: f64) -> f64 {
        match self.function {
            1 => -2.0 * f.eval(x) * y * y,
            2 | 3 => -2.0 * g.eval(x) * phi,
            4 | 5 => -2.0 * g.eval(x) * phi - eps * y,
            _ => -2.0 * g.eval(x) * phi + eps * y,
        }
    }

    /// `grad V_k . (y, -f y - g)` evaluated term by term, with a bound on
    /// the rounding in that sum.
    pub fn raw_inner_product(
        &self,
        f: &WeightedFn,
        g: &WeightedFn,
        x: f64,
        y: f64,
        phi: f64,
        eps: f64,
    ) -> (f64, f64) {
        let (fx, gx) = (f.eval(x), g.eval(x));
        let (vx, vy) = match self.function {
            1 => (2.0 * gx, 2.0 * y),
            k => {
                let tilt = match k {
                    4 | 5 => -eps,
                    6 | 7 => eps,
                    _ => 0.0,
                };
                (2.0 * (y + phi) * fx + 2.0 * gx + tilt, 2.0 * (y + phi))
            }
        };
        let terms = [vx * y, -vy * fx * y, -vy * gx];
        let sum: f64 = terms.iter().sum();
        let mag: f64 = terms.iter().map(|t| t.abs()).sum::<f64>()
            + (2.0 * (y.abs() + phi.abs()) * fx.abs() + 2.0 * gx.abs() + eps) * y.abs();
        (sum, 64.0 * f64::EPSILON * mag)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalCurve {
    pub a: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub x0: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub epsilon: f64,
    /// Common value of `int_{x0}^{mu} g` at both crossings.
    pub level: f64,
    /// `int_{mu1}^{mu2} g`.
    pub balance: f64,
    /// `int_{nu1}^{mu1} f` and `int_{nu2}^{mu2} f`.
    pub h1: f64,
    pub h2: f64,
    /// `y1..y8`.
    pub y: [f64; 8],
    /// Smallest `|y|` on the band `[nu1, nu2]` and the bound it exceeds.
    pub band_floor: f64,
    pub band_bound: f64,
    /// Largest endpoint mismatch between adjacent arcs.
    pub junction_gap: f64,
    pub segments: Vec<Segment>,
    pub f: WeightedFn,
    pub g: WeightedFn,
}

impl TransversalCurve {
    /// `|int_{mu1}^{mu2} g|` relative to the level.
    pub fn balance_residual(&self) -> f64 {
        self.balance.abs() / (1.0 + self.level.abs())
    }

    pub fn matching_holds(&self) -> bool {
        self.y[4] < self.y[5] && self.y[6] > self.y[7]
    }

    /// Closed polyline, clockwise from `(mu1, 0)`, `n` abscissas per arc.
    pub fn polyline(&self, n: usize) -> Result<Vec<[f64; 2]>> {
        let mut pts = Vec::new();
        for (k, seg) in self.segments.iter().enumerate() {
            let mut xs = sample_abscissas(seg.x_lo, seg.x_hi, n, true);
            // upper arcs run left to right, lower arcs right to left
            if k >= 4 {
                xs.reverse();
            }
            let mut arc = seg.sample(&self.f, &self.g, &sorted(&xs))?;
            if k >= 4 {
                arc.reverse();
            }
            pts.extend(arc);
        }
        pts.push(pts[0]);
        Ok(pts)
    }
}

/// `int_anchor^x w` at `xs`, summed outward from `anchor` on each side.
fn cumulative(w: &WeightedFn, anchor: f64, xs: &[f64]) -> Result<Vec<f64>> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&i, &j| (xs[i] - anchor).abs().total_cmp(&(xs[j] - anchor).abs()));
    let mut out = vec![0.0; xs.len()];
    for below in [true, false] {
        let (mut prev, mut acc) = (anchor, 0.0);
        for &i in order.iter().filter(|&&i| (xs[i] < anchor) == below) {
            if xs[i] != prev {
                acc += definite_integral(w, prev, xs[i])?;
                prev = xs[i];
            }
            out[i] = acc;
        }
    }
    Ok(out)
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Abscissas in `[lo, hi]`: a uniform third and two geometric thirds
/// clustering towards each end. Endpoints included when `closed`.
pub fn sample_abscissas(lo: f64, hi: f64, n: usize, closed: bool) -> Vec<f64> {
    let span = hi - lo;
    let m = (n / 3).max(1);
    let mut xs = Vec::with_capacity(n + 2);
    for i in 0..(n - 2 * m) {
        xs.push(lo + span * (i as f64 + 0.5) / (n - 2 * m) as f64);
    }
    for i in 1..=m {
        let d = span * 10f64.powf(-12.0 * i as f64 / m as f64);
        xs.push(lo + d);
        xs.push(hi - d);
    }
    if closed {
        xs.push(lo);
        xs.push(hi);
    }
    xs.retain(|x| *x >= lo && *x <= hi && (closed || (*x > lo && *x < hi)));
    let mut xs = sorted(&xs);
    xs.dedup();
    xs
}

struct Setup<'a> {
    g: &'a WeightedFn,
    a: f64,
    x0: f64,
}

impl Setup<'_> {
    fn big_g(&self, x: f64) -> Result<f64> {
        definite_integral(self.g, self.x0, x)
    }

    /// `x` beyond `start` (towards `a` when `left`) with `G(x) = level`.
    fn solve_level(&self, start: f64, left: bool, level: f64) -> Result<f64> {
        let mut g_prev = self.big_g(start)?;
        let mut prev = start;
        let reach = 1.0 + (start - self.x0).abs();
        for k in 1..2000 {
            let x = if left {
                if self.a.is_finite() {
                    self.a + (start - self.a) * 0.5f64.powi(k)
                } else {
                    start - reach * 2f64.powi(k)
                }
            } else {
                start + reach * 2f64.powi(k)
            };
            if !x.is_finite() || x == prev || (self.a.is_finite() && x <= self.a) {
                break;
            }
            let gx = g_prev + definite_integral(self.g, prev, x)?;
            if gx >= level {
                return self.bisect(prev, g_prev, x, level);
            }
            prev = x;
            g_prev = gx;
        }
        Err(Error::NoBalancedPair(format!(
            "level {level:e} not reached beyond x = {start} ({})",
            if left { "left" } else { "right" }
        )))
    }

    fn bisect(&self, mut near: f64, mut g_near: f64, mut far: f64, level: f64) -> Result<f64> {
        // G(near) < level <= G(far), G monotone in between
        for _ in 0..200 {
            let mid = 0.5 * (near + far);
            if mid == near || mid == far {
                break;
            }
            let gm = g_near + definite_integral(self.g, near, mid)?;
            if gm >= level {
                far = mid;
            } else {
                near = mid;
                g_near = gm;
            }
            if (gm - level).abs() <= 1e-15 * level.abs() {
                return Ok(mid);
            }
        }
        Ok(far)
    }
}

fn violated(msg: impl Into<String>) -> Error {
    Error::ConditionsViolated(msg.into())
}

/// Real zeros of the numerator of `w` inside the open interval.
fn zeros_in(w: &WeightedFn, lo: f64, hi: f64) -> Result<Vec<f64>> {
    let num = &w.core.numerator;
    if num.is_zero() {
        return Ok(vec![lo]);
    }
    if num.degree() == 0 {
        return Ok(Vec::new());
    }
    Ok(real_roots(num)?.into_iter().map(|r| r.value).filter(|&x| x > lo && x < hi).collect())
}

fn positive_on(w: &WeightedFn, lo: f64, hi: f64, sign: f64) -> Result<bool> {
    if !zeros_in(w, lo, hi)?.is_empty() {
        return Ok(false);
    }
    let probe = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0 + lo.abs(),
        (false, true) => hi - 1.0 - hi.abs(),
        (false, false) => 0.0,
    };
    Ok(sign * w.eval(probe) > 0.0)
}

fn check_limits(lf: &LienardForm, a: f64) -> Result<()> {
    let g = &lf.g;
    if a.is_finite() {
        let (c, p) = g.behaviour_right_of(a);
        if !(c < 0.0 && p <= -1.0) {
            return Err(violated(format!(
                "g must tend to -inf with divergent integral at a = {a}; g ~ {c} (x - a)^{p}"
            )));
        }
    } else {
        let (c, p) = g.reflected(0.0).behaviour_at_infinity().ok_or_else(|| {
            violated("growth of g at -inf is not of power type")
        })?;
        if !(c < 0.0 && p > 0.0) {
            return Err(violated("g must tend to -inf as x -> -inf"));
        }
    }
    let (c, p) = g
        .behaviour_at_infinity()
        .ok_or_else(|| violated("growth of g at +inf is not of power type"))?;
    if !(c > 0.0 && p > 0.0) {
        return Err(violated(format!("g must tend to +inf at +inf; g ~ {c} x^{p}")));
    }
    Ok(())
}

/// Default anchors around `x0`: the outermost real zeros of `f` in `(a, inf)`
/// on either side, or `x0` itself when there is none.
pub fn default_anchors(lf: &LienardForm, x0: f64) -> Result<(f64, f64)> {
    let a = lf.pole.unwrap_or(f64::NEG_INFINITY);
    let zeros = zeros_in(&lf.f, a, f64::INFINITY)?;
    let nu1 = zeros.iter().copied().fold(x0, f64::min);
    let nu2 = zeros.iter().copied().fold(x0, f64::max);
    Ok((nu1, nu2))
}

/// Builds the curve. When `int_{nu1}^{nu2} f < 0` the anchors are moved
/// outward (`nu2` doubling its distance from `x0`, `nu1` halving its
/// distance to `a`, alternately) until it is not.
pub fn build_transversal(
    lf: &LienardForm,
    nu1: f64,
    nu2: f64,
    x0: f64,
    opts: &TransversalOptions,
) -> Result<TransversalCurve> {
    let a = lf.pole.unwrap_or(f64::NEG_INFINITY);
    if !(a < nu1 && nu1 <= x0 && x0 <= nu2) {
        return Err(violated(format!("need a < nu1 <= x0 <= nu2, got {a}, {nu1}, {x0}, {nu2}")));
    }
    let (f, g) = (&lf.f, &lf.g);
    if !positive_on(f, a, nu1, 1.0)? {
        return Err(violated(format!("f is not positive on ({a}, {nu1})")));
    }
    if !positive_on(f, nu2, f64::INFINITY, 1.0)? {
        return Err(violated(format!("f is not positive on ({nu2}, inf)")));
    }
    check_limits(lf, a)?;

    let (mut nu1, mut nu2) = (nu1, nu2);
    let mut area = definite_integral(f, nu1, nu2)?;
    let mut round = 0;
    while area < 0.0 {
        if round >= 200 {
            return Err(violated("int_{nu2}^{nu1} f <= 0 cannot be met by moving the anchors"));
        }
        if round % 2 == 0 {
            let next = x0 + 2.0 * (nu2 - x0).max(0.5);
            area += definite_integral(f, nu2, next)?;
            nu2 = next;
        } else {
            let next = if a.is_finite() { 0.5 * (nu1 + a) } else { x0 - 2.0 * (x0 - nu1).max(0.5) };
            area += definite_integral(f, next, nu1)?;
            nu1 = next;
        }
        round += 1;
    }
    if !positive_on(g, a, nu1 + 1e-12 * (1.0 + nu1.abs()), -1.0)? {
        return Err(violated(format!("g is not negative on ({a}, {nu1}]")));
    }
    if !positive_on(g, nu2 - 1e-12 * (1.0 + nu2.abs()), f64::INFINITY, 1.0)? {
        return Err(violated(format!("g is not positive on [{nu2}, inf)")));
    }

    let setup = Setup { g, a, x0 };
    // band data: G, Phi1, Phi2 and the bound on 2 |g Phi_j|
    let n = opts.band_samples.max(16);
    let band: Vec<f64> = (0..=n).map(|i| nu1 + (nu2 - nu1) * i as f64 / n as f64).collect();
    let mut big_g = setup.big_g(nu1)?;
    let mut phi1 = 0.0;
    let mut phi2 = definite_integral(f, nu2, nu1)?;
    let mut g_max = f64::NEG_INFINITY;
    let mut gphi_max = 0.0f64;
    for (i, &x) in band.iter().enumerate() {
        if i > 0 {
            let dg = definite_integral(g, band[i - 1], x)?;
            let df = definite_integral(f, band[i - 1], x)?;
            big_g += dg;
            phi1 += df;
            phi2 += df;
        }
        g_max = g_max.max(big_g);
        let gx = g.eval(x);
        gphi_max = gphi_max.max((2.0 * gx * phi1).abs()).max((2.0 * gx * phi2).abs());
    }

    let mut eps = opts.initial_epsilon;
    let mut level = 1.5 * g_max.max(0.0) + 1.0;
    let mut halvings = 0;
    let mut growths = 0;
    loop {
        let mu1 = setup.solve_level(nu1, true, level)?;
        let mu2 = setup.solve_level(nu2, false, level)?;
        let h1 = definite_integral(f, nu1, mu1)?;
        let h2 = definite_integral(f, nu2, mu2)?;
        let segments = make_segments(nu1, nu2, x0, mu1, mu2, h1, h2, eps);
        let bound = gphi_max / eps;

        let mut floor = f64::INFINITY;
        for k in [1usize, 2, 5, 6] {
            let seg = &segments[k];
            let xs = sample_abscissas(seg.x_lo, seg.x_hi, 400, true);
            for [_, y] in seg.sample(f, g, &xs)? {
                floor = floor.min(y * seg.sign);
            }
        }
        if !(floor > opts.safety * bound) {
            growths += 1;
            if growths > opts.max_growths {
                return Err(Error::NoBalancedPair(format!(
                    "band floor {floor:e} never exceeded {bound:e}"
                )));
            }
            level *= 4.0;
            continue;
        }

        let at = |k: usize, x: f64| segments[k].eval(f, g, x);
        let y = [
            at(0, nu1)?,
            at(3, nu2)?,
            at(4, nu2)?,
            at(7, nu1)?,
            at(1, x0)?,
            at(2, x0)?,
            at(5, x0)?,
            at(6, x0)?,
        ];
        if !(y[4] < y[5] && y[6] > y[7]) {
            halvings += 1;
            if halvings > opts.max_halvings {
                return Err(Error::NoBalancedPair("y5 < y6 and y7 > y8 never both held".into()));
            }
            eps *= 0.5;
            continue;
        }

        let ends = [
            (at(0, nu1)?, at(1, nu1)?),
            (at(2, nu2)?, at(3, nu2)?),
            (at(4, nu2)?, at(5, nu2)?),
            (at(6, nu1)?, at(7, nu1)?),
            (at(0, mu1)?, at(7, mu1)?),
            (at(3, mu2)?, at(4, mu2)?),
        ];
        let scale = 1.0 + y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let junction_gap =
            ends.iter().fold(0.0f64, |m, (p, q)| m.max((p - q).abs())) / scale;
        let balance = definite_integral(g, mu1, mu2)?;
        return Ok(TransversalCurve {
            a,
            nu1,
            nu2,
            x0,
            mu1,
            mu2,
            epsilon: eps,
            level,
            balance,
            h1,
            h2,
            y,
            band_floor: floor,
            band_bound: bound,
            junction_gap,
            segments,
            f: f.clone(),
            g: g.clone(),
        });
    }
}

#[allow(clippy::too_many_arguments)]
fn make_segments(
    nu1: f64,
    nu2: f64,
    x0: f64,
    mu1: f64,
    mu2: f64,
    h1: f64,
    h2: f64,
    eps: f64,
) -> Vec<Segment> {
    let seg = |region, function, x_lo, x_hi, sign, phi_anchor, mu, base, tilt, tilt_anchor| Segment {
        region,
        function,
        x_lo,
        x_hi,
        sign,
        phi_anchor,
        mu,
        base,
        tilt,
        tilt_anchor,
    };
    vec![
        seg(1, 1, mu1, nu1, 1.0, None, mu1, 0.0, 0.0, nu1),
        seg(2, 4, nu1, x0, 1.0, Some(nu1), mu1, 0.0, eps, nu1),
        seg(3, 5, x0, nu2, 1.0, Some(nu2), mu2, h2 * h2, eps, nu2),
        seg(4, 3, nu2, mu2, 1.0, Some(nu2), mu2, h2 * h2, 0.0, nu2),
        seg(5, 1, nu2, mu2, -1.0, None, mu2, 0.0, 0.0, nu2),
        seg(6, 6, x0, nu2, -1.0, Some(nu2), mu2, 0.0, -eps, nu2),
        seg(7, 7, nu1, x0, -1.0, Some(nu1), mu1, h1 * h1, -eps, nu1),
        seg(8, 2, mu1, nu1, -1.0, Some(nu1), mu1, h1 * h1, 0.0, nu1),
    ]
}

/// Outcome of sampling the flow against the curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalityReport {
    pub samples_per_segment: Vec<usize>,
    /// Largest `V_k'` seen on each arc (negative when transversal).
    pub max_vdot: Vec<f64>,
    /// Points where the term-by-term inner product exceeded its rounding bound.
    pub raw_violations: usize,
    pub connectors_inward: bool,
}

impl TransversalityReport {
    pub fn holds(&self) -> bool {
        self.max_vdot.iter().all(|v| *v < 0.0) && self.raw_violations == 0 && self.connectors_inward
    }
}

/// Samples `n` interior points per arc and evaluates `V_k'` there.
pub fn check_transversality(curve: &TransversalCurve, n: usize) -> Result<TransversalityReport> {
    let (f, g) = (&curve.f, &curve.g);
    let mut samples_per_segment = Vec::new();
    let mut max_vdot = Vec::new();
    let mut raw_violations = 0;
    for seg in &curve.segments {
        let xs = sample_abscissas(seg.x_lo, seg.x_hi, n, false);
        let pts = seg.sample(f, g, &xs)?;
        let phis = match seg.phi_anchor {
            Some(nu) => cumulative(f, nu, &xs)?,
            None => vec![0.0; xs.len()],
        };
        let mut worst = f64::NEG_INFINITY;
        let mut used = 0;
        for ([x, y], phi) in pts.into_iter().zip(phis) {
            if y == 0.0 {
                continue;
            }
            used += 1;
            worst = worst.max(seg.vdot(f, g, x, y, phi, curve.epsilon));
            let (raw, tol) = seg.raw_inner_product(f, g, x, y, phi, curve.epsilon);
            if raw > tol {
                raw_violations += 1;
            }
        }
        samples_per_segment.push(used);
        max_vdot.push(worst);
    }
    // flow crosses x = x0 rightwards on the upper connector, leftwards on the lower
    let connectors_inward = curve.y[4] > 0.0 && curve.y[6] < 0.0;
    Ok(TransversalityReport { samples_per_segment, max_vdot, raw_violations, connectors_inward })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;

    #[test]
    fn symmetric_instance_balances_symmetrically() {
        let lf = LienardForm::polynomial(
            Polynomial::new(vec![-1.0, 0.0, 1.0]),
            Polynomial::linear(0.0, 1.0),
        );
        let c = build_transversal(&lf, -1.0, 1.0, 0.0, &TransversalOptions::default()).unwrap();
        assert!((c.mu1 + c.mu2).abs() < 1e-9 * c.mu2, "{} {}", c.mu1, c.mu2);
        assert!(c.matching_holds());
        assert!(c.balance_residual() < 1e-8);
        assert!(c.junction_gap < 1e-8);
        let rep = check_transversality(&c, 1000).unwrap();
        assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn negative_damping_far_right_is_rejected() {
        let lf = LienardForm::polynomial(
            Polynomial::new(vec![1.0, 0.0, -1.0]),
            Polynomial::linear(0.0, 1.0),
        );
        let err = build_transversal(&lf, -1.0, 1.0, 0.0, &TransversalOptions::default());
        assert!(matches!(err, Err(Error::ConditionsViolated(_))));
    }

    #[test]
    fn abscissas_cover_both_ends() {
        let xs = sample_abscissas(1.0, 1e8, 999, false);
        assert!(xs.len() >= 990);
        assert!(xs[0] > 1.0 && xs[0] < 1.0 + 1e-3);
        assert!(*xs.last().unwrap() < 1e8);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }
}
