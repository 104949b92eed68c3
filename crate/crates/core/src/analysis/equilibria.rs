use crate::algebra::{real_roots, weighted_derive, Polynomial};
use crate::error::{Error, Result};
use crate::reduction::{LienardForm, QuadraticSystem};
use serde::{Deserialize, Serialize};

/// Discriminant band inside which no focus/node verdict is issued.
pub const DISCRIMINANT_TOL: f64 = 1e-10;
/// Trace band inside which a focus is only a center candidate.
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind {
    Focus,
    Node,
    Saddle,
    CenterCandidate,
    /// Degenerate linearization or discriminant within tolerance of zero.
    Border,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    Stable,
    Unstable,
    Neutral,
}

/// Local data `f(x) = f0 + f1 (x - x0) + f2 (x - x0)^2 + ...`, likewise `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub location: [f64; 2],
    /// Abscissa in the Liénard chart, when the report came from one.
    pub x0: Option<f64>,
    pub jet: Option<Jet>,
    pub jacobian: [[f64; 2]; 2],
    pub trace: f64,
    pub determinant: f64,
    pub discriminant: f64,
    pub kind: EquilibriumKind,
    pub stability: Stability,
}

impl EquilibriumReport {
    fn from_jacobian(location: [f64; 2], jacobian: [[f64; 2]; 2]) -> Self {
        let trace = jacobian[0][0] + jacobian[1][1];
        let determinant = jacobian[0][0] * jacobian[1][1] - jacobian[0][1] * jacobian[1][0];
        let discriminant = trace * trace - 4.0 * determinant;
        let (kind, stability) = classify(trace, determinant);
        EquilibriumReport {
            location,
            x0: None,
            jet: None,
            jacobian,
            trace,
            determinant,
            discriminant,
            kind,
            stability,
        }
    }

    pub fn is_unstable_focus(&self) -> bool {
        self.kind == EquilibriumKind::Focus && self.stability == Stability::Unstable
    }
}

/// Linear type from trace and determinant.
pub fn classify(trace: f64, det: f64) -> (EquilibriumKind, Stability) {
    let disc = trace * trace - 4.0 * det;
    let stability = if trace < -TRACE_TOL {
        Stability::Stable
    } else if trace > TRACE_TOL {
        Stability::Unstable
    } else {
        Stability::Neutral
    };
    let kind = if det < -DISCRIMINANT_TOL {
        return (EquilibriumKind::Saddle, Stability::Unstable);
    } else if det.abs() <= DISCRIMINANT_TOL {
        EquilibriumKind::Border
    } else if disc < -DISCRIMINANT_TOL {
        if trace.abs() <= TRACE_TOL {
            EquilibriumKind::CenterCandidate
        } else {
            EquilibriumKind::Focus
        }
    } else if disc > DISCRIMINANT_TOL {
        EquilibriumKind::Node
    } else {
        EquilibriumKind::Border
    };
    (kind, stability)
}

/// Value and first two Taylor coefficients of `f` and `g` at `x0`.
pub fn jet(lf: &LienardForm, x0: f64) -> Jet {
    let d = |w, k| weighted_derive(w, k).eval(x0);
    Jet {
        f0: lf.f.eval(x0),
        f1: d(&lf.f, 1),
        f2: d(&lf.f, 2) / 2.0,
        g0: lf.g.eval(x0),
        g1: d(&lf.g, 1),
        g2: d(&lf.g, 2) / 2.0,
    }
}

/// Equilibria `(x0, 0)` of the Liénard equation: real zeros of `g` off the
/// singular points.
pub fn find_equilibria_lienard(lf: &LienardForm) -> Result<Vec<EquilibriumReport>> {
    let num = &lf.g.core.numerator;
    if num.is_zero() {
        return Err(Error::NonIsolatedEquilibrium);
    }
    if num.degree() > 4 {
        return Err(Error::Precondition(format!(
            "g numerator has degree {} > 4",
            num.degree()
        )));
    }
    let singular = lf.g.singular_points();
    let mut out = Vec::new();
    for r in real_roots(num)? {
        let x0 = r.value;
        let near_singular = singular
            .iter()
            .chain(lf.f.singular_points().iter())
            .any(|p| (p - x0).abs() <= 1e-9 * (1.0 + p.abs()));
        if near_singular {
            continue;
        }
        let j = jet(lf, x0);
        let mut rep =
            EquilibriumReport::from_jacobian([x0, 0.0], [[0.0, 1.0], [-j.g1, -j.f0]]);
        rep.x0 = Some(x0);
        rep.jet = Some(j);
        out.push(rep);
    }
    Ok(out)
}

/// Formal resultant in `y` of `A1 y^2 + B1 y + C1` and `A2 y^2 + B2 y + C2`,
/// with constant `A`, linear `B`, quadratic `C` in `x`.
fn resultant(s: &QuadraticSystem) -> Polynomial {
    let (a1, b1, c1) = (
        Polynomial::constant(s.c1),
        Polynomial::linear(s.beta1, s.b1),
        Polynomial::new(vec![0.0, s.alpha1, s.a1]),
    );
    let (a2, b2, c2) = (
        Polynomial::constant(s.c2),
        Polynomial::linear(s.beta2, s.b2),
        Polynomial::new(vec![0.0, s.alpha2, s.a2]),
    );
    let m = |p: &Polynomial, q: &Polynomial| p * q;
    match (s.c1 != 0.0, s.c2 != 0.0) {
        (true, true) => {
            let ac = &m(&a1, &c2) - &m(&a2, &c1);
            let ab = &m(&a1, &b2) - &m(&a2, &b1);
            let bc = &m(&b1, &c2) - &m(&b2, &c1);
            &m(&ac, &ac) - &m(&ab, &bc)
        }
        (true, false) => {
            &(&m(&a1, &m(&c2, &c2)) - &m(&b1, &m(&b2, &c2))) + &m(&c1, &m(&b2, &b2))
        }
        (false, true) => {
            &(&m(&a2, &m(&c1, &c1)) - &m(&b2, &m(&b1, &c1))) + &m(&c2, &m(&b1, &b1))
        }
        (false, false) => &m(&b1, &c2) - &m(&b2, &c1),
    }
}

fn row_in_y(s: &QuadraticSystem, first: bool, x: f64) -> Polynomial {
    if first {
        Polynomial::new(vec![s.a1 * x * x + s.alpha1 * x, s.b1 * x + s.beta1, s.c1])
    } else {
        Polynomial::new(vec![s.a2 * x * x + s.alpha2 * x, s.b2 * x + s.beta2, s.c2])
    }
}

fn newton_polish(s: &QuadraticSystem, mut p: [f64; 2]) -> [f64; 2] {
    for _ in 0..8 {
        let [u, v] = s.rhs(p[0], p[1]);
        let j = s.jacobian(p[0], p[1]);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (j[1][1] * u - j[0][1] * v) / det;
        let dy = (-j[1][0] * u + j[0][0] * v) / det;
        let next = [p[0] - dx, p[1] - dy];
        let [nu, nv] = s.rhs(next[0], next[1]);
        if nu.hypot(nv) >= u.hypot(v) {
            break;
        }
        p = next;
    }
    p
}

/// All real equilibria of the quadratic system, by elimination of `y`.
pub fn find_equilibria_system(s: &QuadraticSystem) -> Result<Vec<EquilibriumReport>> {
    s.validate()?;
    let res = resultant(s);
    let scale = 1.0 + s.to_array().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if res.max_abs_coeff() <= 1e-14 * scale.powi(4) {
        return Err(Error::NonIsolatedEquilibrium);
    }
    let mut xs: Vec<f64> = if res.degree() == 0 { Vec::new() } else {
        real_roots(&res)?.into_iter().map(|r| r.value).collect()
    };
    // the origin is always an equilibrium; keep it exact
    if !xs.iter().any(|x| x.abs() < 1e-9) {
        xs.push(0.0);
    }

    let mut points: Vec<[f64; 2]> = Vec::new();
    for x in xs {
        let p1 = row_in_y(s, true, x);
        let p2 = row_in_y(s, false, x);
        let tol = 1e-7 * scale * (1.0 + x * x);
        if p1.max_abs_coeff() <= tol && p2.max_abs_coeff() <= tol {
            return Err(Error::NonIsolatedEquilibrium);
        }
        let mut cands = Vec::new();
        for p in [&p1, &p2] {
            if p.max_abs_coeff() > tol && p.degree() > 0 {
                cands.extend(real_roots(p)?.into_iter().map(|r| r.value));
            }
        }
        for y in cands {
            let q = newton_polish(s, [x, y]);
            let [u, v] = s.rhs(q[0], q[1]);
            let size = 1.0 + q[0].abs() + q[1].abs();
            if u.abs().max(v.abs()) <= 1e-8 * scale * size * size
                && !points.iter().any(|o| (o[0] - q[0]).abs() + (o[1] - q[1]).abs() <= 1e-7 * size)
            {
                points.push(q);
            }
        }
    }
    for p in points.iter_mut() {
        if p[0].abs() < 1e-12 && p[1].abs() < 1e-12 {
            *p = [0.0, 0.0];
        }
    }
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    Ok(points
        .into_iter()
        .map(|p| EquilibriumReport::from_jacobian(p, s.jacobian(p[0], p[1])))
        .collect())
}
