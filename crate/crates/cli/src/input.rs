//! Coefficient files: a flat JSON object with the ten coefficients, plus an
//! optional `epsilon` and `direction` for the family `system + epsilon * direction`.

use crate::error::{CliError, CliResult};
use lienard_core::reduction::{LienardForm, QuadraticFamily, QuadraticSystem};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub alpha2: f64,
    pub beta2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Direction {
    pub a1: f64,
    pub b1: f64,
    pub c1: f64,
    pub alpha1: f64,
    pub beta1: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
    pub alpha2: f64,
    pub beta2: f64,
}

impl CoefficientFile {
    pub fn base(&self) -> QuadraticSystem {
        QuadraticSystem::from_array([
            self.a1, self.b1, self.c1, self.alpha1, self.beta1, self.a2, self.b2, self.c2,
            self.alpha2, self.beta2,
        ])
    }

    pub fn family(&self) -> Option<QuadraticFamily> {
        let d = self.direction?;
        Some(QuadraticFamily {
            base: self.base(),
            direction: QuadraticSystem::from_array([
                d.a1, d.b1, d.c1, d.alpha1, d.beta1, d.a2, d.b2, d.c2, d.alpha2, d.beta2,
            ]),
        })
    }

    /// Member at `epsilon` (the override wins over the file).
    pub fn system(&self, epsilon: Option<f64>) -> QuadraticSystem {
        let eps = epsilon.or(self.epsilon).unwrap_or(0.0);
        match self.family() {
            Some(fam) => fam.system(eps),
            None => self.base(),
        }
    }
}

/// Either a coefficient file or the output of `reduce`.
#[derive(Debug, Clone)]
pub enum Input {
    Coefficients(CoefficientFile),
    Reduced(Box<LienardForm>),
}

pub fn parse_coefficients(text: &str) -> CliResult<CoefficientFile> {
    let c: CoefficientFile = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let names = ["a1", "b1", "c1", "alpha1", "beta1", "a2", "b2", "c2", "alpha2", "beta2"];
    for (n, v) in names.iter().zip(c.base().to_array()) {
        if !v.is_finite() {
            return Err(CliError::Parse(format!("field `{n}` is not finite")));
        }
    }
    Ok(c)
}

pub fn parse_input(text: &str) -> CliResult<Input> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    if value.get("artifact").and_then(|a| a.as_str()) == Some("reduced") {
        let lf = value
            .get("lienard")
            .cloned()
            .ok_or_else(|| CliError::Parse("reduced artifact without `lienard`".into()))?;
        let lf: LienardForm = serde_json::from_value(lf).map_err(|e| CliError::Parse(e.to_string()))?;
        return Ok(Input::Reduced(Box::new(lf)));
    }
    parse_coefficients(text).map(Input::Coefficients)
}

pub fn read_input(path: &Path) -> CliResult<Input> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text)
}
