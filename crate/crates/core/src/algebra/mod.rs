//! Polynomials, rational functions and the weighted class `core(x) * weight(x)`
//! in which the reduced damping and restoring terms live.

mod poly;
mod quadrature;
mod roots;
mod weighted;

pub use poly::Polynomial;
pub use quadrature::{definite_integral, integrate_adaptive, Quadrature};
pub use roots::{real_root_values, real_roots, RealRoot};
pub use weighted::{weighted_derive, RationalFn, Weight, WeightedFn};
