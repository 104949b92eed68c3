//! Reduction of planar quadratic vector fields to a Liénard equation
//! `x'' + f(x) x' + g(x) = 0`, analytic limit-cycle certificates, and the
//! numerical machinery that confirms them.

pub mod algebra;
pub mod analysis;
pub mod error;
pub mod numerics;
pub mod reduction;

pub use error::{Error, Result};
