//! Dormand–Prince 5(4) with dense output, section events, a singular-set
//! guard and an escape radius.

use crate::error::{Error, Result};
use crate::reduction::{LienardForm, QuadraticSystem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    Original,
    Lienard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ReachedTmax,
    HitPoleGuard,
    Escaped,
    HitSection,
}

pub trait Flow<const N: usize>: Sync {
    fn rhs(&self, s: &[f64; N]) -> [f64; N];

    /// Signed distance to the singular set, `None` where the field is regular everywhere.
    fn singular_distance(&self, _s: &[f64; N]) -> Option<f64> {
        None
    }

    fn chart(&self) -> ChartKind {
        ChartKind::Original
    }
}

impl Flow<2> for QuadraticSystem {
    fn rhs(&self, s: &[f64; 2]) -> [f64; 2] {
        QuadraticSystem::rhs(self, s[0], s[1])
    }
}

impl Flow<2> for LienardForm {
    fn rhs(&self, s: &[f64; 2]) -> [f64; 2] {
        LienardForm::rhs(self, s[0], s[1])
    }

    fn singular_distance(&self, s: &[f64; 2]) -> Option<f64> {
        self.pole.map(|a| s[0] - a)
    }

    fn chart(&self) -> ChartKind {
        ChartKind::Lienard
    }
}

/// Closure-backed flow.
pub struct FnFlow<F>(pub F);

impl<const N: usize, F: Fn(&[f64; N]) -> [f64; N] + Sync> Flow<N> for FnFlow<F> {
    fn rhs(&self, s: &[f64; N]) -> [f64; N] {
        (self.0)(s)
    }
}

/// The same field with time reversed.
pub struct Reversed<'a, T: ?Sized>(pub &'a T);

impl<const N: usize, T: Flow<N> + ?Sized> Flow<N> for Reversed<'_, T> {
    fn rhs(&self, s: &[f64; N]) -> [f64; N] {
        self.0.rhs(s).map(|v| -v)
    }
    fn singular_distance(&self, s: &[f64; N]) -> Option<f64> {
        self.0.singular_distance(s)
    }
    fn chart(&self) -> ChartKind {
        self.0.chart()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// Constant step with no error control.
    pub fixed_step: Option<f64>,
    pub pole_guard: f64,
    pub escape_radius: f64,
    pub event_tol: f64,
    /// Keep every accepted step (and its interpolant).
    pub record: bool,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            h_min: 1e-14,
            h_max: f64::INFINITY,
            max_steps: 5_000_000,
            fixed_step: None,
            pole_guard: 1e-6,
            escape_radius: 1e6,
            event_tol: 1e-10,
            record: true,
        }
    }
}

/// Hyperplane `normal . (s - point) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section<const N: usize> {
    pub point: [f64; N],
    pub normal: [f64; N],
    /// Stop at this many crossings.
    pub stop_after: Option<usize>,
}

impl Section<2> {
    /// `{y = 0}`.
    pub fn horizontal(stop_after: Option<usize>) -> Self {
        Section { point: [0.0, 0.0], normal: [0.0, 1.0], stop_after }
    }
}

impl<const N: usize> Section<N> {
    pub fn value(&self, s: &[f64; N]) -> f64 {
        (0..N).map(|i| self.normal[i] * (s[i] - self.point[i])).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing<const N: usize> {
    pub t: f64,
    pub state: [f64; N],
    /// Sign of `normal . F` at the crossing.
    pub direction: f64,
}

/// Continuous extension of one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    rc: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let rc = &self.rc;
        std::array::from_fn(|i| {
            rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub chart: ChartKind,
    pub termination: Termination,
    pub crossings: Vec<Crossing<N>>,
    pub dense: Vec<DenseStep<N>>,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> (f64, [f64; N]) {
        (*self.times.last().unwrap(), *self.states.last().unwrap())
    }

    /// State at `t` inside the recorded span.
    pub fn at(&self, t: f64) -> Option<[f64; N]> {
        let k = self.dense.partition_point(|d| d.t0 + d.h < t);
        let d = self.dense.get(k).or(self.dense.last())?;
        (t >= self.times[0] && t <= *self.times.last()? + 1e-15).then(|| d.eval(t))
    }

    /// `n` states evenly spaced in time, endpoints included.
    pub fn sample(&self, n: usize) -> Vec<[f64; N]> {
        let (t0, t1) = (self.times[0], *self.times.last().unwrap());
        (0..n)
            .filter_map(|i| self.at(t0 + (t1 - t0) * i as f64 / (n - 1).max(1) as f64))
            .collect()
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

struct Step<const N: usize> {
    y1: [f64; N],
    k7: [f64; N],
    err: f64,
    dense: DenseStep<N>,
}

fn dp_step<const N: usize>(
    flow: &(impl Flow<N> + ?Sized),
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    opts: &OdeOptions,
) -> Step<N> {
    let mut k = [[0.0; N]; 7];
    k[0] = *k1;
    for s in 1..7 {
        let ys: [f64; N] =
            std::array::from_fn(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>());
        k[s] = flow.rhs(&ys);
    }
    // row 7 of A holds the fifth-order weights
    let y1: [f64; N] =
        std::array::from_fn(|i| y[i] + h * (0..6).map(|j| A[6][j] * k[j][i]).sum::<f64>());
    let k7 = flow.rhs(&y1);
    k[6] = k7;
    let mut acc = 0.0;
    for i in 0..N {
        let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
        let sc = opts.atol + opts.rtol * y[i].abs().max(y1[i].abs());
        acc += (e / sc).powi(2);
    }
    let err = (acc / N as f64).sqrt();
    let mut rc = [[0.0; N]; 5];
    for i in 0..N {
        let dy = y1[i] - y[i];
        let bspl = h * k[0][i] - dy;
        rc[0][i] = y[i];
        rc[1][i] = dy;
        rc[2][i] = bspl;
        rc[3][i] = dy - h * k7[i] - bspl;
        rc[4][i] = h * (0..7).map(|j| D[j] * k[j][i]).sum::<f64>();
    }
    Step { y1, k7, err, dense: DenseStep { t0: t, h, rc } }
}

fn finite<const N: usize>(s: &[f64; N]) -> bool {
    s.iter().all(|v| v.is_finite())
}

fn norm<const N: usize>(s: &[f64; N]) -> f64 {
    s.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Integrates forward from `t_span[0]` to `t_span[1]`.
pub fn integrate<const N: usize>(
    flow: &(impl Flow<N> + ?Sized),
    state0: [f64; N],
    t_span: [f64; 2],
    opts: &OdeOptions,
    section: Option<&Section<N>>,
) -> Result<Trajectory<N>> {
    let [t0, t1] = t_span;
    if !(t1 >= t0) {
        return Err(Error::Precondition(format!("t_span must be ascending, got [{t0}, {t1}]")));
    }
    if !finite(&state0) {
        return Err(Error::NonFinite("initial state".into()));
    }
    if let Some(d) = flow.singular_distance(&state0) {
        if d.abs() < opts.pole_guard {
            return Err(Error::Precondition(format!(
                "initial state is {d:e} from the pole line, inside the guard {:e}",
                opts.pole_guard
            )));
        }
    }

    let mut traj = Trajectory {
        times: vec![t0],
        states: vec![state0],
        chart: flow.chart(),
        termination: Termination::ReachedTmax,
        crossings: Vec::new(),
        dense: Vec::new(),
    };
    let side = flow.singular_distance(&state0).map_or(1.0, f64::signum);
    let mut t = t0;
    let mut y = state0;
    let mut k1 = flow.rhs(&y);
    let mut last_sign = section.map(|s| s.value(&y)).filter(|v| *v != 0.0).map(f64::signum);

    let mut h = match opts.fixed_step {
        Some(h) => h,
        None => {
            let d0 = norm(&y);
            let d1 = norm(&k1);
            let guess = if d0 > 1e-5 && d1 > 1e-5 { 0.01 * d0 / d1 } else { 1e-4 };
            guess.min(opts.h_max).max(opts.h_min * 10.0)
        }
    };
    let mut rejected_last = false;
    for _ in 0..opts.max_steps {
        if t >= t1 {
            return Ok(traj);
        }
        let last_step = t + h >= t1;
        let hh = if last_step { t1 - t } else { h };
        let step = dp_step(flow, t, &y, &k1, hh, opts);
        let ok_values = finite(&step.y1) && finite(&step.k7) && step.err.is_finite();
        if opts.fixed_step.is_none() {
            if !ok_values || step.err > 1.0 {
                let fac = if ok_values { (0.9 * step.err.powf(-0.2)).max(0.2) } else { 0.25 };
                h = hh * fac;
                rejected_last = true;
                if h < opts.h_min * (1.0 + t.abs()) {
                    return Err(Error::StepSizeUnderflow { t, h });
                }
                continue;
            }
        } else if !ok_values {
            return Err(Error::NonFinite(format!("state at t = {}", t + hh)));
        }

        let t_new = if last_step { t1 } else { t + hh };
        let dense = step.dense;

        // singular-set guard
        if let Some(d) = flow.singular_distance(&step.y1) {
            if side * d < opts.pole_guard {
                let tg = bisect(t, t_new, opts.event_tol, |s| {
                    side * flow.singular_distance(&dense.eval(s)).unwrap_or(f64::INFINITY)
                        - opts.pole_guard
                });
                push(&mut traj, opts, tg, dense.eval(tg), dense);
                traj.termination = Termination::HitPoleGuard;
                return Ok(traj);
            }
        }

        if let Some(sec) = section {
            let v_new = sec.value(&step.y1);
            if let Some(prev) = last_sign {
                if v_new != 0.0 && v_new.signum() != prev || v_new == 0.0 {
                    let tc = bisect(t, t_new, opts.event_tol, |s| sec.value(&dense.eval(s)) * prev);
                    let state = polish_crossing(flow, sec, t, &y, &k1, tc, opts);
                    let dir = sec.value(&flow.rhs(&state.1)).signum();
                    let dir = if dir == 0.0 { -prev } else { dir };
                    traj.crossings.push(Crossing { t: state.0, state: state.1, direction: dir });
                    last_sign = Some(-prev);
                    if sec.stop_after.is_some_and(|n| traj.crossings.len() >= n) {
                        push(&mut traj, opts, state.0, state.1, dense);
                        traj.termination = Termination::HitSection;
                        return Ok(traj);
                    }
                }
            } else if v_new != 0.0 {
                last_sign = Some(v_new.signum());
            }
        }

        push(&mut traj, opts, t_new, step.y1, dense);
        t = t_new;
        y = step.y1;
        k1 = step.k7;

        if norm(&y) > opts.escape_radius {
            traj.termination = Termination::Escaped;
            return Ok(traj);
        }

        if opts.fixed_step.is_none() {
            let mut fac = (0.9 * step.err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
            if rejected_last {
                fac = fac.min(1.0);
            }
            rejected_last = false;
            if !last_step {
                h = (hh * fac).min(opts.h_max);
            }
        }
    }
    Err(Error::NonFinite(format!("step budget {} exhausted at t = {t}", opts.max_steps)))
}

fn push<const N: usize>(traj: &mut Trajectory<N>, opts: &OdeOptions, t: f64, s: [f64; N], d: DenseStep<N>) {
    if opts.record || traj.times.len() < 2 {
        traj.times.push(t);
        traj.states.push(s);
        traj.dense.push(d);
    } else {
        // keep only the endpoints
        traj.times[1] = t;
        traj.states[1] = s;
        traj.dense[0] = d;
    }
}

/// Root of `phi` on `[lo, hi]` given `phi(lo) > 0 >= phi(hi)` (or the reverse).
fn bisect(mut lo: f64, mut hi: f64, tol: f64, phi: impl Fn(f64) -> f64) -> f64 {
    let lo_pos = phi(lo) > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (phi(mid) > 0.0) == lo_pos {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Newton on the section value using full steps from the step start.
fn polish_crossing<const N: usize>(
    flow: &(impl Flow<N> + ?Sized),
    sec: &Section<N>,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    tc: f64,
    opts: &OdeOptions,
) -> (f64, [f64; N]) {
    let mut tc = tc;
    let mut best = (tc, dp_step(flow, t, y, k1, tc - t, opts).y1);
    for _ in 0..4 {
        let s = best.1;
        let v = sec.value(&s);
        let rate = sec.value(&flow.rhs(&s)) - sec.value(&[0.0; N]);
        if v == 0.0 || rate == 0.0 || !rate.is_finite() {
            break;
        }
        let next = tc - v / rate;
        if (next - tc).abs() > 1e-6 * (1.0 + tc.abs()) {
            break;
        }
        tc = next;
        let cand = dp_step(flow, t, y, k1, tc - t, opts).y1;
        if !finite(&cand) || sec.value(&cand).abs() >= v.abs() {
            break;
        }
        best = (tc, cand);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn oscillator() -> FnFlow<impl Fn(&[f64; 2]) -> [f64; 2] + Sync> {
        FnFlow(|s: &[f64; 2]| [s[1], -s[0]])
    }

    #[test]
    fn harmonic_oscillator_is_periodic() {
        let tr = integrate(&oscillator(), [1.0, 0.0], [0.0, TAU], &OdeOptions::default(), None)
            .unwrap();
        let (t, s) = tr.last();
        assert_eq!(t, TAU);
        assert!((s[0] - 1.0).abs() < 1e-7 && s[1].abs() < 1e-7, "{s:?}");
        assert!(tr.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dense_output_tracks_the_solution() {
        let tr =
            integrate(&oscillator(), [1.0, 0.0], [0.0, 10.0], &OdeOptions::default(), None).unwrap();
        for i in 0..200 {
            let t = 10.0 * i as f64 / 199.0;
            let s = tr.at(t).unwrap();
            assert!((s[0] - t.cos()).abs() < 1e-8 && (s[1] + t.sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn section_crossings_are_located() {
        let sec = Section::horizontal(Some(2));
        let tr = integrate(&oscillator(), [1.0, 0.0], [0.0, 100.0], &OdeOptions::default(), Some(&sec))
            .unwrap();
        assert_eq!(tr.termination, Termination::HitSection);
        assert!((tr.crossings[0].t - TAU / 2.0).abs() < 1e-10);
        assert!((tr.crossings[1].t - TAU).abs() < 1e-10);
        assert!(tr.crossings[1].state[1].abs() < 1e-12);
        assert_eq!(tr.crossings[0].direction, 1.0);
        assert_eq!(tr.crossings[1].direction, -1.0);
    }

    #[test]
    fn fifth_order_convergence_with_fixed_steps() {
        let err = |h: f64| {
            let o = OdeOptions { fixed_step: Some(h), ..OdeOptions::default() };
            let (_, s) = integrate(&oscillator(), [1.0, 0.0], [0.0, 4.0], &o, None).unwrap().last();
            ((s[0] - 4f64.cos()).powi(2) + (s[1] + 4f64.sin()).powi(2)).sqrt()
        };
        for h in [0.2, 0.1, 0.05] {
            assert!(err(h) / err(h / 2.0) >= 16.0, "{h}: {} {}", err(h), err(h / 2.0));
        }
    }

    #[test]
    fn escape_and_guard() {
        let blow = FnFlow(|s: &[f64; 2]| [s[0] * s[0], 0.0]);
        let tr = integrate(&blow, [1.0, 0.0], [0.0, 2.0], &OdeOptions::default(), None).unwrap();
        assert_eq!(tr.termination, Termination::Escaped);

        let lf = LienardForm::polynomial(
            crate::algebra::Polynomial::zero(),
            crate::algebra::Polynomial::constant(1.0),
        );
        let mut lf = lf;
        lf.pole = Some(-1.0);
        let tr = integrate(&lf, [0.0, 0.0], [0.0, 10.0], &OdeOptions::default(), None).unwrap();
        assert_eq!(tr.termination, Termination::HitPoleGuard);
        let (_, s) = tr.last();
        assert!((s[0] + 1.0 - 1e-6).abs() < 1e-9, "{s:?}");
        assert!(integrate(&lf, [-1.0 + 1e-7, 0.0], [0.0, 1.0], &OdeOptions::default(), None).is_err());
    }
}
