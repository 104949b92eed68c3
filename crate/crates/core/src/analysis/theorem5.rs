use super::certificate::{CertificateKind, CycleCertificate, Orientation, Region, Relation};
use super::equilibria::{find_equilibria_system, EquilibriumReport};
use crate::error::{Error, Result};
use crate::reduction::QuadraticSystem;
use serde::{Deserialize, Serialize};

pub const CONDITION_NAMES: [&str; 5] = [
    "0 < 2c2 < b1",
    "beta1 > 0",
    "a1 beta1 / b1 > alpha1",
    "a1 (2c2 - b1) / b1 > b2",
    "a1 (b1 b2 - a1 c2) / b1^2 > a2",
];

/// The five half-plane conditions with their margins (positive when the
/// inequality holds). Margins that divide by `b1 = 0` are absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conditions21 {
    pub margins: [Option<f64>; 5],
    pub holds: bool,
}

impl Conditions21 {
    /// Names of the inequalities that fail.
    pub fn violated(&self) -> Vec<&'static str> {
        self.margins
            .iter()
            .zip(CONDITION_NAMES)
            .filter(|(m, _)| !matches!(m, Some(v) if *v > 0.0))
            .map(|(_, n)| n)
            .collect()
    }
}

pub fn conditions21_check(s: &QuadraticSystem) -> Result<Conditions21> {
    s.validate()?;
    if s.c1 != 0.0 {
        return Err(Error::Precondition("conditions need c1 = 0".into()));
    }
    let QuadraticSystem { a1, b1, alpha1, beta1, a2, b2, c2, .. } = *s;
    let first = (2.0 * c2).min(b1 - 2.0 * c2);
    let div = |v: f64| (b1 != 0.0).then_some(v);
    let margins = [
        Some(first),
        Some(beta1),
        div(a1 * beta1 / b1 - alpha1),
        div(a1 * (2.0 * c2 - b1) / b1 - b2),
        div(a1 * (b1 * b2 - a1 * c2) / (b1 * b1) - a2),
    ];
    let holds = margins.iter().all(|m| matches!(m, Some(v) if *v > 0.0));
    Ok(Conditions21 { margins, holds })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem5Outcome {
    pub conditions: Conditions21,
    pub a: f64,
    /// Equilibria with `x > a`.
    pub equilibria: Vec<EquilibriumReport>,
    pub certificate: Option<CycleCertificate>,
}

/// Cycle in `{x > a}`, `a = -beta1/b1`, when the half-plane conditions
/// hold and the only equilibrium there is an unstable focus.
pub fn theorem5_certify(s: &QuadraticSystem) -> Result<Theorem5Outcome> {
    if !(s.b1 > 0.0) {
        return Err(Error::Precondition("theorem 5 needs b1 > 0".into()));
    }
    let conditions = conditions21_check(s)?;
    let a = -s.beta1 / s.b1;
    let equilibria: Vec<EquilibriumReport> = find_equilibria_system(s)?
        .into_iter()
        .filter(|e| e.location[0] > a)
        .collect();
    let certificate = match equilibria.as_slice() {
        [only] if conditions.holds && only.is_unstable_focus() => {
            let mut c = CycleCertificate::new(
                CertificateKind::Theorem5,
                Orientation::Paper,
                Region::HalfPlane { a },
            );
            for (name, m) in CONDITION_NAMES.iter().zip(conditions.margins) {
                let m = m.expect("holds implies every margin is defined");
                c = c.witness(name, m).require(name, name, Relation::Greater, 0.0);
            }
            c = c
                .witness("trace", only.trace)
                .witness("discriminant", only.discriminant)
                .witness("equilibria in half-plane", 1.0)
                .require("unstable", "trace", Relation::Greater, 0.0)
                .require("focus", "discriminant", Relation::Less, 0.0);
            Some(c)
        }
        _ => None,
    };
    Ok(Theorem5Outcome { conditions, a, equilibria, certificate })
}
