//! Real roots of polynomials of degree at most four.
//!
//! Closed forms (quadratic formula, Cardano/trigonometric cubic, Ferrari
//! quartic) produce complex candidates; nearly real candidates are polished
//! by Newton's method on the original polynomial and kept when their residual
//! is at rounding level. Candidates closer than `1e-7 (1 + |r|)` are merged
//! and their multiplicities added.

use super::poly::Polynomial;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A real root with its collapsed multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
}

const MERGE_TOL: f64 = 1e-7;
const RESIDUAL_TOL: f64 = 1e-9;

pub fn real_roots(p: &Polynomial) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() > 4 {
        return Err(Error::Precondition(format!(
            "real_roots supports degree <= 4, got {}",
            p.degree()
        )));
    }
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("polynomial coefficient".into()));
    }

    // Factor out exact roots at zero first; they are common in this domain
    // and the closed forms lose a little accuracy on them.
    let zeros_at_origin = p.coeffs().iter().take_while(|&&c| c == 0.0).count();
    let reduced = Polynomial::new(p.coeffs()[zeros_at_origin..].to_vec());

    let lead = reduced.leading();
    let monic: Vec<f64> = reduced.coeffs().iter().map(|c| c / lead).collect();
    let candidates = match reduced.degree() {
        0 => Vec::new(),
        1 => vec![Complex64::new(-monic[0], 0.0)],
        2 => quadratic(Complex64::new(1.0, 0.0), monic[1].into(), monic[0].into()).to_vec(),
        3 => cubic(monic[2], monic[1], monic[0]).to_vec(),
        4 => quartic(monic[3], monic[2], monic[1], monic[0]).to_vec(),
        _ => unreachable!(),
    };

    let scale = 1.0 + p.max_abs_coeff();
    let mut found: Vec<f64> = Vec::with_capacity(4);
    for z in candidates {
        let z = polish_complex(&reduced, z);
        if z.im.abs() > 1e-5 * (1.0 + z.norm()) {
            continue;
        }
        let r = polish_real(&reduced, z.re);
        let resid = p.eval(r).abs();
        if resid <= RESIDUAL_TOL * scale || resid <= 64.0 * f64::EPSILON * horner_bound(p, r) {
            found.push(r);
        }
    }
    found.extend(std::iter::repeat_n(0.0, zeros_at_origin));
    found.sort_by(f64::total_cmp);

    let dp = p.derivative();
    let mut out: Vec<RealRoot> = Vec::new();
    let mut cluster: Vec<f64> = Vec::new();
    for r in found {
        if let Some(&last) = cluster.last() {
            let mid = 0.5 * (r + last);
            // higher multiplicities spread like eps^(1/m); p and p' both at
            // rounding level between two candidates means one multiple root
            let flat = p.eval(mid).abs() <= RESIDUAL_TOL * scale
                && dp.eval(mid).abs() <= 1e-8 * scale;
            if (r - last).abs() > MERGE_TOL * (1.0 + last.abs()) && !flat {
                out.push(collapse(&cluster));
                cluster.clear();
            }
        }
        cluster.push(r);
    }
    if !cluster.is_empty() {
        out.push(collapse(&cluster));
    }
    Ok(out)
}

/// Plain list of distinct real root values.
pub fn real_root_values(p: &Polynomial) -> Result<Vec<f64>> {
    Ok(real_roots(p)?.into_iter().map(|r| r.value).collect())
}

fn collapse(cluster: &[f64]) -> RealRoot {
    // Exact zeros win over the mean of a cluster around the origin.
    let value = if cluster.contains(&0.0) {
        0.0
    } else {
        cluster.iter().sum::<f64>() / cluster.len() as f64
    };
    RealRoot { value, multiplicity: cluster.len() }
}

fn horner_bound(p: &Polynomial, x: f64) -> f64 {
    p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x.abs() + c.abs())
}

fn polish_complex(p: &Polynomial, mut z: Complex64) -> Complex64 {
    for _ in 0..4 {
        let (v, d) = p
            .coeffs()
            .iter()
            .rev()
            .fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(v, d), &c| {
                (v * z + c, d * z + v)
            });
        if d.norm() == 0.0 || !d.is_finite() {
            break;
        }
        let step = v / d;
        if !step.is_finite() {
            break;
        }
        let next = z - step;
        if eval_c(p, next).norm() >= v.norm() {
            break;
        }
        z = next;
    }
    z
}

fn eval_c(p: &Polynomial, z: Complex64) -> Complex64 {
    p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn polish_real(p: &Polynomial, mut x: f64) -> f64 {
    let mut fx = p.eval(x).abs();
    for _ in 0..8 {
        let (v, d) = p.eval_with_derivative(x);
        if d == 0.0 || v == 0.0 {
            break;
        }
        let next = x - v / d;
        let fn_ = p.eval(next).abs();
        if !(fn_ < fx) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    let s = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
    if s.norm() == 0.0 {
        let r = -b / (a * 2.0);
        return [r, r];
    }
    let q = -s / 2.0;
    [q / a, c / q]
}

/// Roots of `x^3 + a x^2 + b x + c`.
fn cubic(a: f64, b: f64, c: f64) -> [Complex64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    let ts: [Complex64; 3] = if p == 0.0 && q == 0.0 {
        [Complex64::new(0.0, 0.0); 3]
    } else if disc > 0.0 {
        let sq = disc.sqrt();
        let w = if q > 0.0 { -q / 2.0 - sq } else { -q / 2.0 + sq };
        let u = w.cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let re = -(u + v) / 2.0;
        let im = 3f64.sqrt() / 2.0 * (u - v);
        [
            Complex64::new(u + v, 0.0),
            Complex64::new(re, im),
            Complex64::new(re, -im),
        ]
    } else {
        // three real roots
        let r = (-p / 3.0).sqrt();
        let arg = if r == 0.0 { 0.0 } else { (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0) };
        let phi = arg.acos();
        let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
        [
            Complex64::new(2.0 * r * (phi / 3.0).cos(), 0.0),
            Complex64::new(2.0 * r * (phi / 3.0 - two_pi_3).cos(), 0.0),
            Complex64::new(2.0 * r * (phi / 3.0 + two_pi_3).cos(), 0.0),
        ]
    };
    ts.map(|t| t - shift)
}

/// Roots of `x^4 + a x^3 + b x^2 + c x + d` (Ferrari).
fn quartic(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 4] {
    let shift = a / 4.0;
    let a2 = a * a;
    let p = b - 3.0 * a2 / 8.0;
    let q = a2 * a / 8.0 - a * b / 2.0 + c;
    let r = -3.0 * a2 * a2 / 256.0 + a2 * b / 16.0 - a * c / 4.0 + d;
    let scale = 1.0 + p.abs() + r.abs().sqrt();
    let one = Complex64::new(1.0, 0.0);

    let ts: [Complex64; 4] = if q.abs() <= 1e-14 * scale * scale.sqrt() {
        // biquadratic in t^2
        let [w1, w2] = quadratic(one, p.into(), r.into());
        [w1.sqrt(), -w1.sqrt(), w2.sqrt(), -w2.sqrt()]
    } else {
        let res = cubic(2.0 * p, p * p - 4.0 * r, -q * q);
        let z = res
            .iter()
            .filter(|z| z.im.abs() <= 1e-9 * (1.0 + z.norm()))
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
            .max(0.0);
        if z <= 0.0 {
            let [w1, w2] = quadratic(one, p.into(), r.into());
            [w1.sqrt(), -w1.sqrt(), w2.sqrt(), -w2.sqrt()]
        } else {
            let s = z.sqrt();
            let u = (p + z - q / s) / 2.0;
            let v = (p + z + q / s) / 2.0;
            let [t1, t2] = quadratic(one, s.into(), u.into());
            let [t3, t4] = quadratic(one, (-s).into(), v.into());
            [t1, t2, t3, t4]
        }
    };
    ts.map(|t| t - shift)
}
