use super::poly::Polynomial;
use super::roots::real_root_values;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Quotient of two polynomials together with the real roots of the denominator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFn {
    pub numerator: Polynomial,
    pub denominator: Polynomial,
    pub poles: Vec<f64>,
    /// Denominator equals `leading (x - pole)^degree` for its single pole.
    #[serde(default)]
    pub factored: bool,
}

impl RationalFn {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::Precondition("denominator is identically zero".into()));
        }
        let poles = if denominator.degree() == 0 {
            Vec::new()
        } else {
            real_root_values(&denominator)?
        };
        Ok(RationalFn::with_poles(numerator, denominator, poles))
    }

    /// Builds a quotient whose denominator roots are already known.
    pub(crate) fn with_poles(numerator: Polynomial, denominator: Polynomial, poles: Vec<f64>) -> Self {
        let factored = match poles.as_slice() {
            [p] if denominator.degree() > 0 => {
                let d = denominator.degree();
                let pure = Polynomial::from_roots(&vec![*p; d]).scale(denominator.leading());
                let tol = 1e-12 * (1.0 + denominator.max_abs_coeff());
                (0..=d).all(|k| (pure.coeff(k) - denominator.coeff(k)).abs() <= tol)
            }
            _ => false,
        };
        RationalFn { numerator, denominator, poles, factored }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        RationalFn::with_poles(p, Polynomial::constant(1.0), Vec::new())
    }

    pub fn constant(c: f64) -> Self {
        RationalFn::polynomial(Polynomial::constant(c))
    }

    /// `numerator / (offset + slope x)^power`; the pole list is exact.
    pub fn over_linear_power(numerator: Polynomial, offset: f64, slope: f64, power: u32) -> Self {
        let den = Polynomial::linear(offset, slope).powi(power);
        let poles = if slope != 0.0 && power > 0 { vec![-offset / slope] } else { Vec::new() };
        RationalFn::with_poles(numerator, den, poles)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let den = if self.factored {
            // expanded powers cancel catastrophically next to the pole
            self.denominator.leading() * (x - self.poles[0]).powi(self.denominator.degree() as i32)
        } else {
            self.denominator.eval(x)
        };
        self.numerator.eval(x) / den
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn scale(&self, s: f64) -> RationalFn {
        RationalFn::with_poles(self.numerator.scale(s), self.denominator.clone(), self.poles.clone())
    }

    pub fn derivative(&self) -> RationalFn {
        let n = &self.numerator;
        let d = &self.denominator;
        if d.degree() == 0 {
            return RationalFn::with_poles(n.derivative(), d.clone(), self.poles.clone());
        }
        let num = &(&n.derivative() * d) - &(n * &d.derivative());
        RationalFn::with_poles(num, d * d, self.poles.clone())
    }

    /// `r(c0 + c1 x)`
    pub fn compose_affine(&self, c0: f64, c1: f64) -> RationalFn {
        RationalFn::with_poles(
            self.numerator.compose_affine(c0, c1),
            self.denominator.compose_affine(c0, c1),
            self.poles.iter().map(|p| (p - c0) / c1).collect(),
        )
    }
}

/// Positive weight multiplying a rational core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    /// `|base_offset + base_slope x|^exponent`
    Power { base_offset: f64, base_slope: f64, exponent: f64 },
    /// `exp(rate x)`
    Exp { rate: f64 },
}

impl Weight {
    pub fn unit() -> Self {
        Weight::Exp { rate: 0.0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Weight::Power { base_offset, base_slope, exponent } => {
                (base_offset + base_slope * x).abs().powf(exponent)
            }
            Weight::Exp { rate } => (rate * x).exp(),
        }
    }

    /// Zero of the base line of a power weight.
    pub fn singular_point(&self) -> Option<f64> {
        match *self {
            Weight::Power { base_offset, base_slope, .. } => Some(-base_offset / base_slope),
            Weight::Exp { .. } => None,
        }
    }

    /// Same weight with the exponent (or rate) multiplied by `k`.
    pub fn powered(&self, k: f64) -> Weight {
        match *self {
            Weight::Power { base_offset, base_slope, exponent } => {
                Weight::Power { base_offset, base_slope, exponent: exponent * k }
            }
            Weight::Exp { rate } => Weight::Exp { rate: rate * k },
        }
    }
}

/// `core(x) * weight(x)`: the function class of the reduced damping and
/// restoring terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedFn {
    pub core: RationalFn,
    pub weight: Weight,
}

impl WeightedFn {
    pub fn new(core: RationalFn, weight: Weight) -> Result<Self> {
        if let Weight::Power { base_slope, .. } = weight {
            if base_slope == 0.0 {
                return Err(Error::Precondition("power weight needs a nonzero base slope".into()));
            }
        }
        Ok(WeightedFn { core, weight })
    }

    /// Unweighted polynomial.
    pub fn polynomial(p: Polynomial) -> Self {
        WeightedFn { core: RationalFn::polynomial(p), weight: Weight::unit() }
    }

    pub fn zero() -> Self {
        WeightedFn::polynomial(Polynomial::zero())
    }

    pub fn eval(&self, x: f64) -> f64 {
        if self.core.is_zero() {
            return 0.0;
        }
        self.core.eval(x) * self.weight.eval(x)
    }

    pub fn is_zero(&self) -> bool {
        self.core.is_zero()
    }

    /// Every point where the function is undefined: core poles and the
    /// weight's base line.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut pts = self.core.poles.clone();
        if let Some(a) = self.weight.singular_point() {
            if !pts.iter().any(|p| (p - a).abs() <= 1e-12 * (1.0 + a.abs())) {
                pts.push(a);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts
    }

    pub fn is_regular_at(&self, x: f64) -> bool {
        self.singular_points().iter().all(|&p| p != x)
    }

    pub fn scale(&self, s: f64) -> WeightedFn {
        WeightedFn { core: self.core.scale(s), weight: self.weight }
    }

    /// `w(x0 - z)` as a function of `z`.
    pub fn reflected(&self, x0: f64) -> WeightedFn {
        let core = self.core.compose_affine(x0, -1.0);
        match self.weight {
            Weight::Power { base_offset, base_slope, exponent } => WeightedFn {
                core,
                weight: Weight::Power {
                    base_offset: base_offset + base_slope * x0,
                    base_slope: -base_slope,
                    exponent,
                },
            },
            Weight::Exp { rate } => WeightedFn {
                core: core.scale((rate * x0).exp()),
                weight: Weight::Exp { rate: -rate },
            },
        }
    }

    /// Exact derivative, staying inside the class.
    pub fn derivative(&self) -> WeightedFn {
        let n = &self.core.numerator;
        let d = &self.core.denominator;
        let poles = self.singular_points();
        let core = match self.weight {
            Weight::Power { base_offset, base_slope, exponent } => {
                let line = Polynomial::linear(base_offset, base_slope);
                if let Some(k) = power_of_line(d, base_offset, base_slope) {
                    // (N/(c L^k) |L|^e)' = (N' L + (e - k) s N) / (c L^(k+1)) |L|^e
                    let num = &(&n.derivative() * &line)
                        + &n.scale((exponent - k as f64) * base_slope);
                    RationalFn::with_poles(num, d * &line, poles)
                } else {
                    let dn = &(&n.derivative() * d) - &(n * &d.derivative());
                    let num = &(&dn * &line) + &(n * d).scale(exponent * base_slope);
                    RationalFn::with_poles(num, &(d * d) * &line, poles)
                }
            }
            Weight::Exp { rate } => {
                if d.degree() == 0 {
                    let num = &n.derivative() + &n.scale(rate);
                    RationalFn::with_poles(num, d.clone(), poles)
                } else {
                    let dn = &(&n.derivative() * d) - &(n * &d.derivative());
                    let num = &dn + &(n * d).scale(rate);
                    RationalFn::with_poles(num, d * d, poles)
                }
            }
        };
        WeightedFn { core, weight: self.weight }
    }

    /// Leading power-law behaviour `w(x) ~ coef * x^power` as `x -> +inf`.
    /// Only meaningful for power weights and polynomial-growth cores.
    pub fn behaviour_at_infinity(&self) -> Option<(f64, f64)> {
        let n = &self.core.numerator;
        let d = &self.core.denominator;
        if n.is_zero() {
            return Some((0.0, 0.0));
        }
        match self.weight {
            Weight::Power { base_slope, exponent, .. } => Some((
                n.leading() / d.leading() * base_slope.abs().powf(exponent),
                n.degree() as f64 - d.degree() as f64 + exponent,
            )),
            Weight::Exp { rate } if rate == 0.0 => {
                Some((n.leading() / d.leading(), n.degree() as f64 - d.degree() as f64))
            }
            Weight::Exp { .. } => None,
        }
    }

    /// Leading behaviour `w(x) ~ coef * (x - a)^power` as `x -> a+`, where
    /// `a` is a real pole or the weight's base point.
    pub fn behaviour_right_of(&self, a: f64) -> (f64, f64) {
        let (n_order, n_rest) = vanishing_order(&self.core.numerator, a);
        let (d_order, d_rest) = vanishing_order(&self.core.denominator, a);
        let mut coef = n_rest.eval(a) / d_rest.eval(a);
        let mut power = n_order as f64 - d_order as f64;
        match self.weight {
            Weight::Power { base_offset, base_slope, exponent } => {
                let at = base_offset + base_slope * a;
                if at.abs() <= 1e-12 * (1.0 + base_offset.abs()) {
                    coef *= base_slope.abs().powf(exponent);
                    power += exponent;
                } else {
                    coef *= at.abs().powf(exponent);
                }
            }
            Weight::Exp { rate } => coef *= (rate * a).exp(),
        }
        (coef, power)
    }
}

/// `Some(k)` when `d == c (offset + slope x)^k` for some constant `c`.
fn power_of_line(d: &Polynomial, offset: f64, slope: f64) -> Option<usize> {
    let k = d.degree();
    let c = d.leading() / slope.powi(k as i32);
    let candidate = Polynomial::linear(offset, slope).powi(k as u32).scale(c);
    let scale = d.max_abs_coeff().max(candidate.max_abs_coeff());
    let close = (0..=k).all(|i| (d.coeff(i) - candidate.coeff(i)).abs() <= 1e-12 * scale);
    close.then_some(k)
}

/// Order of the zero of `p` at `a`, and `p / (x - a)^order`.
fn vanishing_order(p: &Polynomial, a: f64) -> (usize, Polynomial) {
    let mut q = p.clone();
    let mut order = 0;
    while q.degree() > 0 {
        let bound = q.coeffs().iter().rev().fold(0.0, |acc, c| acc * a.abs() + c.abs());
        let (quot, rem) = q.deflate(a);
        if rem.abs() > 1e-10 * bound {
            break;
        }
        q = quot;
        order += 1;
    }
    (order, q)
}

impl fmt::Display for WeightedFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.core.numerator, self.core.denominator)?;
        match self.weight {
            Weight::Power { base_offset, base_slope, exponent } => {
                write!(f, " * |{base_offset} + {base_slope}x|^{exponent}")
            }
            Weight::Exp { rate } if rate == 0.0 => Ok(()),
            Weight::Exp { rate } => write!(f, " * exp({rate}x)"),
        }
    }
}

/// Derivative of the given order.
pub fn weighted_derive(w: &WeightedFn, order: usize) -> WeightedFn {
    (0..order).fold(w.clone(), |acc, _| acc.derivative())
}
