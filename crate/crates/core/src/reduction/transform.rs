use super::system::QuadraticSystem;
use crate::algebra::{real_roots, Polynomial};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One change of variables, written as new coordinates in terms of old ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum Step {
    /// `X = x + nu y`, `Y = y`
    Shear { nu: f64 },
    /// `X = y`, `Y = x`
    Swap,
    /// `x = sx X`, `y = sy Y`, `t = st T`
    Scale { sx: f64, sy: f64, st: f64 },
    /// `X = -x`, `Y = -y`
    Negate,
}

impl Step {
    fn forward(&self, [x, y]: [f64; 2]) -> [f64; 2] {
        match *self {
            Step::Shear { nu } => [x + nu * y, y],
            Step::Swap => [y, x],
            Step::Scale { sx, sy, .. } => [x / sx, y / sy],
            Step::Negate => [-x, -y],
        }
    }

    fn backward(&self, [x, y]: [f64; 2]) -> [f64; 2] {
        match *self {
            Step::Shear { nu } => [x - nu * y, y],
            Step::Swap => [y, x],
            Step::Scale { sx, sy, .. } => [sx * x, sy * y],
            Step::Negate => [-x, -y],
        }
    }

    fn apply(&self, s: &QuadraticSystem) -> QuadraticSystem {
        match *self {
            Step::Shear { nu } => s.sheared(nu),
            Step::Swap => s.swapped(),
            Step::Scale { sx, sy, st } => s.rescaled(sx, sy, st),
            Step::Negate => s.negated(),
        }
    }
}

/// Every change of variables applied on the way from the input system,
/// in order, plus the data of the shear that removed `c1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformRecord {
    pub nu: f64,
    pub kappa: f64,
    pub rho: f64,
    pub scale_x: f64,
    pub scale_y: f64,
    pub scale_t: f64,
    pub applied_steps: Vec<Step>,
    /// `|kappa - (a1 + nu a2)|`, `|kappa nu^2 + rho nu - (c1 + nu c2)|`,
    /// `|rho + 2 kappa nu - (b1 + nu b2)|` against the sheared system.
    pub residuals: [f64; 3],
}

impl Default for TransformRecord {
    fn default() -> Self {
        TransformRecord::identity()
    }
}

impl TransformRecord {
    pub fn identity() -> Self {
        TransformRecord {
            nu: 0.0,
            kappa: 0.0,
            rho: 0.0,
            scale_x: 1.0,
            scale_y: 1.0,
            scale_t: 1.0,
            applied_steps: Vec::new(),
            residuals: [0.0; 3],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.applied_steps.is_empty()
    }

    /// Maps a point of the input system's phase plane to the final coordinates.
    pub fn from_original(&self, p: [f64; 2]) -> [f64; 2] {
        self.applied_steps.iter().fold(p, |acc, s| s.forward(acc))
    }

    /// Maps a point in the final coordinates back to the input system.
    pub fn to_original(&self, p: [f64; 2]) -> [f64; 2] {
        self.applied_steps.iter().rev().fold(p, |acc, s| s.backward(acc))
    }

    /// `dt_original / dt_final`.
    pub fn time_scale(&self) -> f64 {
        self.applied_steps
            .iter()
            .map(|s| match s {
                Step::Scale { st, .. } => *st,
                _ => 1.0,
            })
            .product()
    }

    /// Replays the recorded steps on `s`.
    pub fn apply(&self, s: &QuadraticSystem) -> QuadraticSystem {
        self.applied_steps.iter().fold(*s, |acc, st| st.apply(&acc))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &TransformRecord) -> TransformRecord {
        let mut steps = self.applied_steps.clone();
        steps.extend_from_slice(&next.applied_steps);
        let has_shear = |r: &TransformRecord| {
            r.applied_steps.iter().any(|s| matches!(s, Step::Shear { .. } | Step::Swap))
        };
        let shear = if has_shear(self) || !has_shear(next) { self } else { next };
        TransformRecord {
            nu: shear.nu,
            kappa: shear.kappa,
            rho: shear.rho,
            residuals: shear.residuals,
            scale_x: self.scale_x * next.scale_x,
            scale_y: self.scale_y * next.scale_y,
            scale_t: self.scale_t * next.scale_t,
            applied_steps: steps,
        }
    }

    pub fn push(&mut self, step: Step) {
        self.applied_steps.push(step);
    }
}

/// Removes the `y^2` term of the first equation.
///
/// `c1 = 0` returns the identity; `a2 = 0` swaps the coordinates; otherwise
/// `X = x + nu y` with `nu` the real root of smallest modulus of
/// `a2 nu^3 + (a1 - b2) nu^2 + (c2 - b1) nu + c1`.
pub fn eliminate_c1(s: &QuadraticSystem) -> Result<(QuadraticSystem, TransformRecord)> {
    s.validate()?;
    let mut rec = TransformRecord::identity();
    if s.c1 == 0.0 {
        rec.kappa = s.a1;
        rec.rho = s.b1;
        return Ok((*s, rec));
    }
    if s.a2 == 0.0 {
        let out = s.swapped();
        rec.push(Step::Swap);
        rec.kappa = out.a1;
        rec.rho = out.b1;
        return Ok((out, rec));
    }
    let cubic = Polynomial::new(vec![s.c1, s.c2 - s.b1, s.a1 - s.b2, s.a2]);
    let nu = real_roots(&cubic)?
        .into_iter()
        .map(|r| r.value)
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))
        .ok_or_else(|| Error::NonFinite("real root of the shear cubic".into()))?;
    let kappa = s.a1 + nu * s.a2;
    let rho = s.b1 + nu * s.b2 - 2.0 * kappa * nu;
    let mut out = s.sheared(nu);
    rec.residuals = [
        (kappa - (s.a1 + nu * s.a2)).abs(),
        (kappa * nu * nu + rho * nu - (s.c1 + nu * s.c2)).abs(),
        (rho + 2.0 * kappa * nu - (s.b1 + nu * s.b2)).abs(),
    ];
    out.a1 = kappa;
    out.b1 = rho;
    out.c1 = 0.0;
    rec.nu = nu;
    rec.kappa = kappa;
    rec.rho = rho;
    rec.push(Step::Shear { nu });
    Ok((out, rec))
}

/// How the first equation treats the line `beta1 + b1 x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineType {
    Invariant,
    Transversal,
    NoLine,
}

pub fn line_type(s: &QuadraticSystem) -> Result<LineType> {
    if s.c1 != 0.0 {
        return Err(Error::Precondition("line_type needs c1 = 0".into()));
    }
    if s.b1 == 0.0 {
        return Ok(LineType::NoLine);
    }
    let x = -s.beta1 / s.b1;
    // x' on the line is a1 x^2 + alpha1 x; y drops out
    let v = s.a1 * x * x + s.alpha1 * x;
    let scale = (s.a1 * x * x).abs() + (s.alpha1 * x).abs();
    Ok(if v.abs() <= 1e-14 * scale || v == 0.0 {
        LineType::Invariant
    } else {
        LineType::Transversal
    })
}

/// Rescales to `b1 = alpha1 = beta1 = 1` via `x = (beta1/b1) X`,
/// `y = (alpha1/b1) Y`, `t = T/alpha1`.
pub fn normalize_unit(s: &QuadraticSystem) -> Result<(QuadraticSystem, TransformRecord)> {
    s.validate()?;
    for (name, v) in [("b1", s.b1), ("beta1", s.beta1), ("alpha1", s.alpha1)] {
        if v == 0.0 {
            return Err(Error::Precondition(format!("normalization needs {name} != 0")));
        }
    }
    let (sx, sy, st) = (s.beta1 / s.b1, s.alpha1 / s.b1, 1.0 / s.alpha1);
    let mut out = s.rescaled(sx, sy, st);
    out.b1 = 1.0;
    out.alpha1 = 1.0;
    out.beta1 = 1.0;
    let mut rec = TransformRecord::identity();
    rec.scale_x = sx;
    rec.scale_y = sy;
    rec.scale_t = st;
    rec.kappa = out.a1;
    rec.rho = out.b1;
    if (sx, sy, st) != (1.0, 1.0, 1.0) {
        rec.push(Step::Scale { sx, sy, st });
    }
    Ok((out, rec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c1_zero_is_identity() {
        let s = QuadraticSystem::from_array([1.0, 2.0, 0.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        let (t, rec) = eliminate_c1(&s).unwrap();
        assert_eq!(t, s);
        assert_eq!(rec.nu, 0.0);
        assert!(rec.is_identity());
    }

    #[test]
    fn unit_cubic_shear() {
        let s = QuadraticSystem { a2: 1.0, c1: -1.0, alpha1: 0.5, beta1: 1.0, ..Default::default() };
        let (t, rec) = eliminate_c1(&s).unwrap();
        assert!((rec.nu - 1.0).abs() < 1e-14);
        assert!((rec.kappa - 1.0).abs() < 1e-14);
        assert!((rec.rho + 2.0).abs() < 1e-14);
        assert_eq!(t.c1, 0.0);
        assert!(rec.residuals.iter().all(|r| *r < 1e-10));
    }

    #[test]
    fn swap_when_a2_vanishes() {
        let s = QuadraticSystem::from_array([0.5, 1.0, 2.0, -1.0, 0.3, 0.0, 0.7, 1.5, 0.2, -0.4]);
        let (t, rec) = eliminate_c1(&s).unwrap();
        assert_eq!(rec.applied_steps, vec![Step::Swap]);
        assert_eq!(t.c1, 0.0);
        assert_eq!((t.a1, t.b1, t.alpha1, t.beta1), (1.5, 0.7, -0.4, 0.2));
        assert_eq!((t.a2, t.b2, t.c2, t.alpha2, t.beta2), (2.0, 1.0, 0.5, 0.3, -1.0));
    }

    #[test]
    fn record_maps_round_trip() {
        let mut rec = TransformRecord::identity();
        rec.push(Step::Shear { nu: 0.7 });
        rec.push(Step::Swap);
        rec.push(Step::Scale { sx: 2.0, sy: -3.0, st: 0.5 });
        rec.push(Step::Negate);
        let p = [0.25, -1.75];
        let q = rec.to_original(rec.from_original(p));
        assert!((q[0] - p[0]).abs() < 1e-15 && (q[1] - p[1]).abs() < 1e-15);
        assert_eq!(rec.time_scale(), 0.5);
    }

    #[test]
    fn line_types() {
        let inv = QuadraticSystem { a1: 1.0, alpha1: 1.0, beta1: 1.0, b1: 1.0, ..Default::default() };
        assert_eq!(line_type(&inv).unwrap(), LineType::Invariant);
        let tr = QuadraticSystem { a1: 1.0, alpha1: -1.0, beta1: 1.0, b1: 1.0, ..Default::default() };
        assert_eq!(line_type(&tr).unwrap(), LineType::Transversal);
        let sec3 = QuadraticSystem { b1: 1.0, beta1: 1.0, alpha1: 1.0 / 3.0, ..Default::default() };
        assert_eq!(line_type(&sec3).unwrap(), LineType::Transversal);
        let none = QuadraticSystem { beta1: 1.0, ..Default::default() };
        assert_eq!(line_type(&none).unwrap(), LineType::NoLine);
        let bad = QuadraticSystem { c1: 1.0, ..Default::default() };
        assert!(line_type(&bad).is_err());
    }

    #[test]
    fn normalization_scales() {
        let s = QuadraticSystem { b1: 2.0, beta1: 4.0, alpha1: 1.0, beta2: 1.0, ..Default::default() };
        let (t, rec) = normalize_unit(&s).unwrap();
        assert_eq!((rec.scale_x, rec.scale_y, rec.scale_t), (2.0, 0.5, 1.0));
        assert_eq!((t.b1, t.alpha1, t.beta1), (1.0, 1.0, 1.0));
        let unit = QuadraticSystem { b1: 1.0, beta1: 1.0, alpha1: 1.0, a2: 0.3, ..Default::default() };
        let (u, rec) = normalize_unit(&unit).unwrap();
        assert_eq!(u, unit);
        assert!(rec.is_identity());
        assert!(normalize_unit(&QuadraticSystem { b1: 1.0, beta1: 1.0, ..Default::default() }).is_err());
    }
}
