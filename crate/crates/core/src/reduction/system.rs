use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// `x' = a1 x^2 + b1 xy + c1 y^2 + alpha1 x + beta1 y`,
/// `y' = a2 x^2 + b2 xy + c2 y^2 + alpha2 x + beta2 y`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuadraticSystem {
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

pub const COEFFICIENT_NAMES: [&str; 10] =
    ["a1", "b1", "c1", "alpha1", "beta1", "a2", "b2", "c2", "alpha2", "beta2"];

/// Coefficients `[x^2, xy, y^2, x, y]` of one right-hand side.
type Row = [f64; 5];

impl QuadraticSystem {
    /// Coefficients in the order of [`COEFFICIENT_NAMES`].
    pub fn from_array(c: [f64; 10]) -> Self {
        QuadraticSystem {
            a1: c[0],
            b1: c[1],
            c1: c[2],
            alpha1: c[3],
            beta1: c[4],
            a2: c[5],
            b2: c[6],
            c2: c[7],
            alpha2: c[8],
            beta2: c[9],
        }
    }

    pub fn to_array(&self) -> [f64; 10] {
        [
            self.a1, self.b1, self.c1, self.alpha1, self.beta1, self.a2, self.b2, self.c2,
            self.alpha2, self.beta2,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        match self.to_array().iter().position(|c| !c.is_finite()) {
            Some(i) => Err(Error::NonFinite(format!("coefficient {}", COEFFICIENT_NAMES[i]))),
            None => Ok(()),
        }
    }

    /// Componentwise `self + t * other`; used for one-parameter families.
    pub fn offset(&self, other: &QuadraticSystem, t: f64) -> QuadraticSystem {
        let a = self.to_array();
        let b = other.to_array();
        QuadraticSystem::from_array(std::array::from_fn(|i| a[i] + t * b[i]))
    }

    pub fn rhs(&self, x: f64, y: f64) -> [f64; 2] {
        [
            self.a1 * x * x + self.b1 * x * y + self.c1 * y * y + self.alpha1 * x + self.beta1 * y,
            self.a2 * x * x + self.b2 * x * y + self.c2 * y * y + self.alpha2 * x + self.beta2 * y,
        ]
    }

    pub fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        [
            [
                2.0 * self.a1 * x + self.b1 * y + self.alpha1,
                self.b1 * x + 2.0 * self.c1 * y + self.beta1,
            ],
            [
                2.0 * self.a2 * x + self.b2 * y + self.alpha2,
                self.b2 * x + 2.0 * self.c2 * y + self.beta2,
            ],
        ]
    }

    fn rows(&self) -> (Row, Row) {
        (
            [self.a1, self.b1, self.c1, self.alpha1, self.beta1],
            [self.a2, self.b2, self.c2, self.alpha2, self.beta2],
        )
    }

    fn from_rows(r1: Row, r2: Row) -> Self {
        QuadraticSystem::from_array([
            r1[0], r1[1], r1[2], r1[3], r1[4], r2[0], r2[1], r2[2], r2[3], r2[4],
        ])
    }

    /// System in `X = x + nu y`, `Y = y`.
    pub fn sheared(&self, nu: f64) -> QuadraticSystem {
        // p(X - nu Y, Y) for one right-hand side
        let sub = |r: Row| -> Row {
            let [a, b, c, al, be] = r;
            [a, b - 2.0 * a * nu, a * nu * nu - b * nu + c, al, be - al * nu]
        };
        let (r1, r2) = self.rows();
        let first: Row = std::array::from_fn(|i| r1[i] + nu * r2[i]);
        QuadraticSystem::from_rows(sub(first), sub(r2))
    }

    /// System in `X = y`, `Y = x`.
    pub fn swapped(&self) -> QuadraticSystem {
        let swap = |r: Row| -> Row { [r[2], r[1], r[0], r[4], r[3]] };
        let (r1, r2) = self.rows();
        QuadraticSystem::from_rows(swap(r2), swap(r1))
    }

    /// System in `x = sx X`, `y = sy Y`, `t = st T`.
    pub fn rescaled(&self, sx: f64, sy: f64, st: f64) -> QuadraticSystem {
        let sub = |r: Row, k: f64| -> Row {
            [r[0] * sx * sx * k, r[1] * sx * sy * k, r[2] * sy * sy * k, r[3] * sx * k, r[4] * sy * k]
        };
        let (r1, r2) = self.rows();
        QuadraticSystem::from_rows(sub(r1, st / sx), sub(r2, st / sy))
    }

    /// System in `X = -x`, `Y = -y`: quadratic terms change sign.
    pub fn negated(&self) -> QuadraticSystem {
        let neg = |r: Row| -> Row { [-r[0], -r[1], -r[2], r[3], r[4]] };
        let (r1, r2) = self.rows();
        QuadraticSystem::from_rows(neg(r1), neg(r2))
    }
}
