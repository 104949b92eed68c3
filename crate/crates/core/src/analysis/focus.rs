use super::certificate::{CertificateKind, CycleCertificate, Orientation, Region, Relation};
use crate::error::{Error, Result};
use crate::reduction::QuadraticSystem;
use serde::{Deserialize, Serialize};

/// Coefficients of the focus test at the origin for `b1 = beta1 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FocusCriterion {
    pub A: f64,
    pub B: f64,
    pub C: f64,
    pub D: f64,
}

impl FocusCriterion {
    pub fn new(s: &QuadraticSystem) -> Self {
        let QuadraticSystem { a1, alpha1, a2, b2, c2, alpha2, beta2, .. } = *s;
        FocusCriterion {
            A: -b2 + 2.0 * a1 * c2 - a1,
            B: -b2 - beta2 + 2.0 * alpha1 * c2 - 2.0 * a1,
            C: -a2 - 2.0 * alpha2 + alpha1 * b2 + a1 * beta2 + alpha1 * beta2
                - c2 * alpha1 * alpha1,
            D: -alpha2 + alpha1 * beta2,
        }
    }

    /// `AD - BC + BD (1 + c2)`; half the Lyapunov quantity at the origin
    /// when `alpha1 + beta2 = 0`.
    pub fn expression(&self, c2: f64) -> f64 {
        self.A * self.D - self.B * self.C + self.B * self.D * (1.0 + c2)
    }
}

/// Small-cycle test at the origin. With `eps = alpha1 + beta2` the damping
/// at the origin is `-eps`, so a cycle needs `eps` of the same sign as the
/// expression: negative for the `Paper` orientation, positive for the
/// mirrored one.
pub fn abcd_criterion(s: &QuadraticSystem) -> Result<(FocusCriterion, Option<CycleCertificate>)> {
    s.validate()?;
    if s.b1 != 1.0 || s.beta1 != 1.0 || s.c1 != 0.0 {
        return Err(Error::Precondition("focus criterion needs b1 = beta1 = 1 and c1 = 0".into()));
    }
    let fc = FocusCriterion::new(s);
    let e = fc.expression(s.c2);
    let eps = s.alpha1 + s.beta2;
    let orientation = if e < 0.0 && eps < 0.0 {
        Orientation::Paper
    } else if e > 0.0 && eps > 0.0 {
        Orientation::Mirrored
    } else {
        return Ok((fc, None));
    };
    if !(fc.D > 0.0) {
        return Ok((fc, None));
    }
    let rel = match orientation {
        Orientation::Paper => Relation::Less,
        Orientation::Mirrored => Relation::Greater,
    };
    let radius = (4.0 * eps * fc.D / e).sqrt();
    let cert = CycleCertificate::new(
        CertificateKind::Abcd,
        orientation,
        Region::Annulus { center: [0.0, 0.0], radius_estimate: radius },
    )
    .witness("A", fc.A)
    .witness("B", fc.B)
    .witness("C", fc.C)
    .witness("D", fc.D)
    .witness("AD-BC+BD(1+c2)", e)
    .witness("alpha1+beta2", eps)
    .require("D > 0", "D", Relation::Greater, 0.0)
    .require("expression sign", "AD-BC+BD(1+c2)", rel, 0.0)
    .require("alpha1+beta2 sign", "alpha1+beta2", rel, 0.0);
    Ok((fc, Some(cert)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn theorem2(eps_hat: f64) -> QuadraticSystem {
        QuadraticSystem {
            b1: 1.0,
            beta1: 1.0,
            c2: 1.0,
            b2: -1.0,
            alpha1: 1.0 / 3.0 - eps_hat,
            alpha2: -1.0 / 3.0,
            beta2: -1.0 / 3.0,
            ..Default::default()
        }
    }

    #[test]
    fn theorem2_values() {
        let (fc, cert) = abcd_criterion(&theorem2(0.0)).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-14;
        assert!(close(fc.A, 1.0) && close(fc.B, 2.0) && close(fc.C, 1.0 / 9.0));
        assert!(close(fc.D, 2.0 / 9.0));
        assert!(close(fc.expression(1.0), 8.0 / 9.0));
        assert!(cert.is_none());
    }

    #[test]
    fn theorem2_sign_convention() {
        let (_, cert) = abcd_criterion(&theorem2(-0.01)).unwrap();
        let cert = cert.unwrap();
        assert_eq!(cert.orientation, Orientation::Mirrored);
        assert!(cert.recheck());
        assert!(abcd_criterion(&theorem2(0.01)).unwrap().1.is_none());
    }

    #[test]
    fn nonpositive_d_gives_nothing() {
        let mut s = theorem2(-0.01);
        s.alpha2 = 1.0;
        let (fc, cert) = abcd_criterion(&s).unwrap();
        assert!(fc.D <= 0.0);
        assert!(cert.is_none());
    }

    #[test]
    fn wrong_normalization_rejected() {
        let mut s = theorem2(0.0);
        s.beta1 = 2.0;
        assert!(abcd_criterion(&s).unwrap_err().is_precondition());
    }
}
