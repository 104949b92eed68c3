//! Least-squares fits used by the numerical checks.

use super::poincare::{poincare_return, ReturnOptions};
use crate::analysis::jet;
use crate::error::{Error, Result};
use crate::reduction::LienardForm;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Coefficients minimising `|sum_j c_j columns[j] - y|`.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Result<Vec<f64>> {
    let m = y.len();
    if columns.is_empty() || columns.iter().any(|c| c.len() != m) || m < columns.len() {
        return Err(Error::Precondition("least squares needs as many rows as unknowns".into()));
    }
    let a = DMatrix::from_fn(m, columns.len(), |i, j| columns[j][i]);
    let b = DVector::from_column_slice(y);
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::NonFinite(format!("least squares: {e}")))?;
    Ok(sol.iter().copied().collect())
}

/// Linear coefficient of a fit of `y` by `c1 x + ... + c_deg x^deg`.
pub fn slope_through_origin(x: &[f64], y: &[f64], degree: usize) -> Result<f64> {
    let cols: Vec<Vec<f64>> = (1..=degree).map(|k| x.iter().map(|v| v.powi(k as i32)).collect()).collect();
    Ok(least_squares(&cols, y)?[0])
}

/// `y ~ prefactor x^exponent`, fitted in log-log coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn power_fit(points: &[(f64, f64)]) -> Result<PowerFit> {
    if points.iter().any(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::Precondition("power fit needs positive data".into()));
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let c = least_squares(&[vec![1.0; lx.len()], lx], &ly)?;
    Ok(PowerFit { exponent: c[1], prefactor: c[0].exp(), points: points.to_vec() })
}

/// Fit of `|T sqrt(g'(x0)) - 2 pi|` against `|z0|`, starting at `x0 + z0`.
pub fn return_time_expansion(
    lf: &LienardForm,
    x0: f64,
    z0s: &[f64],
    opts: &ReturnOptions,
) -> Result<PowerFit> {
    let g1 = jet(lf, x0).g1;
    if !(g1 > 0.0) {
        return Err(Error::Precondition(format!("g'(x0) = {g1} must be positive")));
    }
    let omega = g1.sqrt();
    let mut pts = Vec::with_capacity(z0s.len());
    for &z in z0s {
        let r = poincare_return(lf, x0 + z, opts)?;
        pts.push((z.abs(), (r.period * omega - TAU).abs()));
    }
    power_fit(&pts)
}
