use super::certificate::{CertificateKind, CycleCertificate, Orientation, Region, Relation};
use super::equilibria::jet;
use crate::algebra::weighted_derive;
use crate::error::{Error, Result};
use crate::reduction::{LienardFamily, LienardForm};

/// Residual allowed in `f(x0) = g(x0) = 0`.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// `f''(x0) g'(x0) - g''(x0) f'(x0)`.
pub fn lyapunov_quantity(lf: &LienardForm, x0: f64) -> Result<f64> {
    let (f, g) = (lf.f.eval(x0), lf.g.eval(x0));
    if !(f.abs() <= EQUILIBRIUM_TOL && g.abs() <= EQUILIBRIUM_TOL) {
        return Err(Error::NotAnEquilibrium { x: x0, f, g });
    }
    if lf.f.is_zero() {
        return Ok(0.0);
    }
    let j = jet(lf, x0);
    Ok(2.0 * j.f2 * j.g1 - 2.0 * j.g2 * j.f1)
}

/// Newton continuation of the zero of `G(., eps)` from `x0` in ten equal
/// parameter steps.
pub fn continue_zero(family: &dyn LienardFamily, x0: f64, eps: f64) -> Result<f64> {
    let fail = || Error::NoZeroNearby { x0, eps };
    let mut x = x0;
    for k in 1..=10 {
        let e = eps * k as f64 / 10.0;
        let member = family.member(e)?;
        let dg = weighted_derive(&member.g, 1);
        let mut converged = false;
        for _ in 0..60 {
            let (v, d) = (member.g.eval(x), dg.eval(x));
            if !v.is_finite() || !d.is_finite() || d == 0.0 {
                return Err(fail());
            }
            let step = v / d;
            x -= step;
            if step.abs() <= 1e-14 * (1.0 + x.abs()) {
                converged = true;
                break;
            }
        }
        let moved = (x - x0).abs();
        if !converged || moved > 0.5 * (1.0 + x0.abs()) || member.pole_distance(x) < 1e-6 {
            return Err(fail());
        }
    }
    Ok(x)
}

/// Small-cycle certificate near the equilibrium `x0` of `family.member(0)`
/// for the parameter value `eps`.
pub fn theorem1_certify(
    family: &dyn LienardFamily,
    x0: f64,
    eps: f64,
) -> Result<Option<CycleCertificate>> {
    let base = family.member(0.0)?;
    let l = lyapunov_quantity(&base, x0)?;
    let g1 = jet(&base, x0).g1;
    let x_eps = continue_zero(family, x0, eps)?;
    let f_eps = family.member(eps)?.f.eval(x_eps);

    let orientation = if l < 0.0 && f_eps > 0.0 {
        Orientation::Paper
    } else if l > 0.0 && f_eps < 0.0 {
        Orientation::Mirrored
    } else {
        return Ok(None);
    };
    if !(g1 > 0.0) {
        return Ok(None);
    }
    let (lrel, frel) = match orientation {
        Orientation::Paper => (Relation::Less, Relation::Greater),
        Orientation::Mirrored => (Relation::Greater, Relation::Less),
    };
    let radius = (-8.0 * f_eps * g1 / l).sqrt();
    Ok(Some(
        CycleCertificate::new(
            CertificateKind::Theorem1,
            orientation,
            Region::Annulus { center: [x_eps, 0.0], radius_estimate: radius },
        )
        .witness("L", l)
        .witness("g1", g1)
        .witness("F(x_eps, eps)", f_eps)
        .witness("x0", x0)
        .witness("x_eps", x_eps)
        .witness("eps", eps)
        .require("Lyapunov quantity sign", "L", lrel, 0.0)
        .require("g'(x0) > 0", "g1", Relation::Greater, 0.0)
        .require("damping sign at x_eps", "F(x_eps, eps)", frel, 0.0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;
    use crate::reduction::{QuadraticFamily, QuadraticSystem};

    fn example1(f1: f64, f2: f64, g2: f64, g3: f64) -> impl Fn(f64) -> Result<LienardForm> + Sync {
        move |eps| {
            Ok(LienardForm::polynomial(
                Polynomial::new(vec![eps, f1, f2]),
                Polynomial::new(vec![0.0, 1.0, g2, g3]),
            ))
        }
    }

    fn section3() -> QuadraticFamily {
        QuadraticFamily {
            base: QuadraticSystem {
                b1: 1.0,
                beta1: 1.0,
                c2: 1.0,
                b2: -1.0,
                alpha1: 1.0 / 3.0,
                alpha2: -1.0 / 3.0,
                beta2: -1.0 / 3.0,
                ..Default::default()
            },
            direction: QuadraticSystem { alpha1: -1.0, ..Default::default() },
        }
    }

    #[test]
    fn section3_lyapunov_quantity() {
        let lf = section3().member(0.0).unwrap();
        assert!((lyapunov_quantity(&lf, 0.0).unwrap() - 16.0 / 9.0).abs() < 1e-12);
        assert!((lyapunov_quantity(&lf, -2.0).unwrap() - 16.0 / 9.0).abs() < 1e-12);
        assert!(matches!(lyapunov_quantity(&lf, 1.0), Err(Error::NotAnEquilibrium { .. })));
    }

    #[test]
    fn zero_damping_has_zero_quantity() {
        let lf = LienardForm::polynomial(Polynomial::zero(), Polynomial::new(vec![0.0, 1.0, 0.3]));
        assert_eq!(lyapunov_quantity(&lf, 0.0).unwrap(), 0.0);
        let fam = |_e: f64| Ok(lf.clone());
        assert_eq!(theorem1_certify(&fam, 0.0, 0.01).unwrap(), None);
    }

    #[test]
    fn example1_reference_orientation() {
        // f2 - f1 g2 = 0.5 - 1.5 < 0
        let fam = example1(1.0, 0.5, 1.5, 0.2);
        let c = theorem1_certify(&fam, 0.0, 0.01).unwrap().unwrap();
        assert_eq!(c.orientation, Orientation::Paper);
        assert!(c.recheck());
        assert!((c.value("L").unwrap() - 2.0 * (0.5 - 1.5)).abs() < 1e-12);
        assert_eq!(theorem1_certify(&fam, 0.0, -0.01).unwrap(), None);
    }

    #[test]
    fn section3_mirrored_orientation() {
        let fam = section3();
        let c = theorem1_certify(&fam, 0.0, -0.02).unwrap().unwrap();
        assert_eq!(c.orientation, Orientation::Mirrored);
        assert!((c.value("x_eps").unwrap()).abs() < 1e-14);
        assert!((c.value("F(x_eps, eps)").unwrap() + 0.02).abs() < 1e-12);
        assert_eq!(theorem1_certify(&fam, 0.0, 0.02).unwrap(), None);

        let c2 = theorem1_certify(&fam, -2.0, -0.02).unwrap().unwrap();
        assert_eq!(c2.orientation, Orientation::Mirrored);
        let x_eps = c2.value("x_eps").unwrap();
        assert!((x_eps + 2.0).abs() < 0.1, "{x_eps}");
        let member = fam.member(-0.02).unwrap();
        assert!(member.g.eval(x_eps).abs() < 1e-10);
    }

    #[test]
    fn time_reversal_swaps_orientation() {
        let fam = section3();
        let rev = |e: f64| fam.member(e).map(|l| l.time_reversed());
        let c = theorem1_certify(&rev, 0.0, -0.02).unwrap().unwrap();
        assert_eq!(c.orientation, Orientation::Paper);
    }
}
