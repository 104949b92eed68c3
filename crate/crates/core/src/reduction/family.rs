use super::lienard::{reduce, LienardForm};
use super::system::QuadraticSystem;
use crate::error::Result;
use serde::{Deserialize, Serialize};

/// One-parameter family of Liénard equations `F(x, eps)`, `G(x, eps)`.
pub trait LienardFamily: Sync {
    fn member(&self, eps: f64) -> Result<LienardForm>;
}

impl<F> LienardFamily for F
where
    F: Fn(f64) -> Result<LienardForm> + Sync,
{
    fn member(&self, eps: f64) -> Result<LienardForm> {
        self(eps)
    }
}

/// Quadratic systems `base + eps * direction`, reduced member by member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFamily {
    pub base: QuadraticSystem,
    pub direction: QuadraticSystem,
}

impl QuadraticFamily {
    pub fn system(&self, eps: f64) -> QuadraticSystem {
        self.base.offset(&self.direction, eps)
    }
}

impl LienardFamily for QuadraticFamily {
    fn member(&self, eps: f64) -> Result<LienardForm> {
        reduce(&self.system(eps))
    }
}
