//! Documents written by the subcommands and read back by `plot`.

use lienard_core::algebra::{Polynomial, Weight, WeightedFn};
use lienard_core::analysis::{
    CycleCertificate, EquilibriumReport, FocusCriterion, Theorem5Outcome, TransversalCurve,
    TransversalityReport,
};
use lienard_core::numerics::{ChartKind, CycleNumeric, Termination};
use lienard_core::reduction::{LienardForm, QuadraticSystem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Entry {
    pub x0: f64,
    pub certificate: Option<CycleCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbcdEntry {
    pub criterion: Option<FocusCriterion>,
    pub certificate: Option<CycleCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem5Entry {
    pub outcome: Option<Theorem5Outcome>,
    /// Names of the half-plane conditions that fail.
    pub violated: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "artifact", rename_all = "snake_case")]
pub enum Artifact {
    Reduced {
        lienard: LienardForm,
        f_display: String,
        g_display: String,
    },
    Certificates {
        system: QuadraticSystem,
        epsilon: Option<f64>,
        equilibria: Vec<EquilibriumReport>,
        theorem1: Vec<Theorem1Entry>,
        abcd: AbcdEntry,
        theorem5: Theorem5Entry,
    },
    Cycles {
        lienard: LienardForm,
        search_box: [f64; 2],
        equilibria: Vec<EquilibriumReport>,
        cycles: Vec<CycleNumeric>,
        /// One period of each cycle, Liénard chart.
        orbits: Vec<Vec<[f64; 2]>>,
    },
    Transversal {
        lienard: LienardForm,
        curve: TransversalCurve,
        report: TransversalityReport,
        /// Points of each of the eight arcs.
        arcs: Vec<Vec<[f64; 2]>>,
    },
    Trajectory {
        lienard: Option<LienardForm>,
        system: Option<QuadraticSystem>,
        chart: ChartKind,
        termination: Termination,
        times: Vec<f64>,
        states: Vec<[f64; 2]>,
    },
}

impl Artifact {
    pub fn name(&self) -> &'static str {
        match self {
            Artifact::Reduced { .. } => "reduced",
            Artifact::Certificates { .. } => "certificates",
            Artifact::Cycles { .. } => "cycles",
            Artifact::Transversal { .. } => "transversal",
            Artifact::Trajectory { .. } => "trajectory",
        }
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn line_text(offset: f64, slope: f64) -> String {
    match (offset, slope) {
        (o, s) if s == 1.0 => format!("{} + x", fmt_num(o)),
        (o, s) => format!("{} + {}x", fmt_num(o), fmt_num(s)),
    }
}

/// `num * |L|^k` (or `num * sgn(L) |L|^k`) when the rational part is a pure
/// power of the weight's line; the generic form otherwise.
pub fn merged_display(w: &WeightedFn) -> String {
    let core = &w.core;
    match w.weight {
        Weight::Power { base_offset, base_slope, exponent } if core.factored || core.denominator.degree() == 0 => {
            let d = core.denominator.degree();
            if d > 0 {
                let pole = core.poles[0];
                if (pole + base_offset / base_slope).abs() > 1e-12 * (1.0 + pole.abs()) {
                    return w.to_string();
                }
            }
            // (x - p)^d = L^d / slope^d
            let scale = base_slope.powi(d as i32) / core.denominator.leading();
            let num: Polynomial = core.numerator.scale(scale);
            let k = exponent - d as f64;
            let line = line_text(base_offset, base_slope);
            if d % 2 == 0 {
                format!("({num}) |{line}|^{}", fmt_num(k))
            } else {
                format!("({num}) sgn({line}) |{line}|^{}", fmt_num(k))
            }
        }
        Weight::Exp { rate } if core.denominator.degree() == 0 => {
            let num = core.numerator.scale(1.0 / core.denominator.leading());
            if rate == 0.0 {
                format!("{num}")
            } else {
                format!("({num}) exp({}x)", fmt_num(rate))
            }
        }
        _ => w.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lienard_core::reduction::to_lienard;

    #[test]
    fn section3_displays() {
        let s = QuadraticSystem {
            b1: 1.0,
            beta1: 1.0,
            c2: 1.0,
            b2: -1.0,
            alpha1: 1.0 / 3.0,
            alpha2: -1.0 / 3.0,
            beta2: -1.0 / 3.0,
            ..Default::default()
        };
        let lf = to_lienard(&s).unwrap();
        assert_eq!(merged_display(&lf.f), "(x^2 + 2x) |1 + x|^-3");
        let g = merged_display(&lf.g);
        assert!(g.ends_with("sgn(1 + x) |1 + x|^-5"), "{g}");
    }

    #[test]
    fn polynomial_display() {
        let lf = LienardForm::polynomial(Polynomial::zero(), Polynomial::linear(0.0, 1.0));
        assert_eq!(merged_display(&lf.g), "x");
        assert_eq!(merged_display(&lf.f), "0");
    }
}
