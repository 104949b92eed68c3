//! Return map of the Liénard flow on the section `{y = 0}`.

use super::ode::{integrate, OdeOptions, Section, Termination};
use crate::error::{Error, Result};
use crate::reduction::LienardForm;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnOptions {
    pub ode: OdeOptions,
    pub t_max: f64,
}

impl Default for ReturnOptions {
    fn default() -> Self {
        ReturnOptions {
            ode: OdeOptions { rtol: 1e-11, atol: 1e-13, record: false, ..OdeOptions::default() },
            t_max: 1e7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnSample {
    pub x_start: f64,
    pub x_return: f64,
    /// Time of the second crossing.
    #[serde(rename = "T")]
    pub period: f64,
    /// Abscissa of the first crossing.
    pub x_half: f64,
    /// `y` at the second crossing.
    pub y_return: f64,
}

impl ReturnSample {
    pub fn displacement(&self) -> f64 {
        self.x_return - self.x_start
    }
}

pub fn poincare_return(lf: &LienardForm, x_start: f64, opts: &ReturnOptions) -> Result<ReturnSample> {
    let sec = Section::horizontal(Some(2));
    let tr = integrate(lf, [x_start, 0.0], [0.0, opts.t_max], &opts.ode, Some(&sec))?;
    let reason = match tr.termination {
        Termination::HitSection => None,
        Termination::ReachedTmax => Some("no second crossing before t_max"),
        Termination::HitPoleGuard => Some("reached the pole guard"),
        Termination::Escaped => Some("escaped"),
    };
    if let Some(reason) = reason {
        return Err(Error::NoReturn { x_start, reason: reason.into() });
    }
    let [first, second] = [tr.crossings[0], tr.crossings[1]];
    Ok(ReturnSample {
        x_start,
        x_return: second.state[0],
        period: second.t,
        x_half: first.state[0],
        y_return: second.state[1],
    })
}
