//! Largest damping at which a certified cycle is still found.

use super::cycles::{confirm_certificate, find_cycles, CycleNumeric, CycleOptions};
use crate::analysis::theorem1_certify;
use crate::reduction::LienardFamily;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub certified: bool,
    pub cycle: Option<CycleNumeric>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub x0: f64,
    pub rows: Vec<SweepRow>,
    /// Largest `|eps|` with a certificate confirmed by a cycle.
    pub largest_confirmed: Option<f64>,
}

/// `n` values of `sign * 10^s`, `s` evenly spaced over `[log10 lo, log10 hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize, sign: f64) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| sign * 10f64.powf(a + (b - a) * i as f64 / (n - 1).max(1) as f64))
        .collect()
}

pub fn epsilon_sweep(
    family: &dyn LienardFamily,
    x0: f64,
    epsilons: &[f64],
    search_box: [f64; 2],
    opts: &CycleOptions,
) -> SweepReport {
    let rows: Vec<SweepRow> = epsilons
        .par_iter()
        .map(|&eps| {
            let cert = theorem1_certify(family, x0, eps).ok().flatten();
            let cycle = match (&cert, family.member(eps)) {
                (Some(c), Ok(lf)) => {
                    let cycles = find_cycles(&lf, search_box, opts);
                    confirm_certificate(c, &cycles).copied()
                }
                _ => None,
            };
            SweepRow { epsilon: eps, certified: cert.is_some(), cycle }
        })
        .collect();
    let largest_confirmed = rows
        .iter()
        .filter(|r| r.cycle.is_some())
        .map(|r| r.epsilon.abs())
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    SweepReport { x0, rows, largest_confirmed }
}
