//! Correspondence between the normalized quadratic systems
//! (`b1 = alpha1 = beta1 = 1`, `beta2 = -1`) and the Liénard data
//! `f = (A x + B) x |x + 1|^(q - 2)`,
//! `g = (C1 x^3 + C2 x^2 + C3 x + C4) x (x + 1)^-3 |x + 1|^(2q)`.

use super::lienard::LienardForm;
use super::system::QuadraticSystem;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct LienardCoeffs {
    pub A: f64,
    pub B: f64,
    pub C1: f64,
    pub C2: f64,
    pub C3: f64,
    pub C4: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop4Output {
    pub system: QuadraticSystem,
    /// Left minus right side of the two compatibility conditions.
    pub residuals: [f64; 2],
}

impl Prop4Output {
    pub fn compatible(&self, tol: f64) -> bool {
        self.residuals.iter().all(|r| r.abs() <= tol)
    }
}

/// Reads `A, B, C1..C4, q` off a form reduced from a normalized system.
pub fn lienard_coeffs(lf: &LienardForm) -> Result<LienardCoeffs> {
    let src = lf
        .source
        .as_ref()
        .ok_or_else(|| Error::Precondition("form has no source system".into()))?;
    let s = &src.system;
    if (s.b1, s.alpha1, s.beta1, s.beta2) != (1.0, 1.0, 1.0, -1.0) || !lf.chart.is_base() {
        return Err(Error::Precondition(
            "coefficients are defined for b1 = alpha1 = beta1 = 1, beta2 = -1".into(),
        ));
    }
    // R = (A x + B) x / (1 + x)^2 and P = x (C1 x^3 + ... + C4) / (1 + x)^3
    let r = &lf.r_fn.numerator;
    let p = &lf.p_fn.numerator;
    Ok(LienardCoeffs {
        A: r.coeff(2),
        B: r.coeff(1),
        C1: p.coeff(4),
        C2: p.coeff(3),
        C3: p.coeff(2),
        C4: p.coeff(1),
        q: lf.q,
    })
}

/// Recovers the quadratic system and the two compatibility residuals.
pub fn prop4_map(lc: &LienardCoeffs) -> Result<Prop4Output> {
    let LienardCoeffs { A: a, B: b, C1: c1, C2: c2, C3: c3, C4: c4, q } = *lc;
    let d = 2.0 * q - 1.0;
    if d.abs() < 1e-12 {
        return Err(Error::QDegenerate { q });
    }
    let a1 = 1.0 + (b - a) / d;
    let system = QuadraticSystem {
        a1,
        b1: 1.0,
        c1: 0.0,
        alpha1: 1.0,
        beta1: 1.0,
        a2: -(q + 1.0) * a1 * a1 - a * a1 - c1,
        b2: -a - a1 * (2.0 * q + 1.0),
        c2: -q,
        alpha2: a1 * a1 - 2.0 * a1 + a * (a1 - 1.0) + (2.0 * c1 - c2),
        beta2: -1.0,
    };
    let k = (b - a) / (d * d);
    let residuals = [
        k * ((1.0 - q) * b + (3.0 * q - 2.0) * a) - (2.0 * c2 - 3.0 * c1 - c3),
        k * (b + 2.0 * (q - 1.0) * a) - (c2 - 2.0 * c1 - c4),
    ];
    Ok(Prop4Output { system, residuals })
}
