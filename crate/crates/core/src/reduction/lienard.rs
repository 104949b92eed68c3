use super::system::QuadraticSystem;
use super::transform::{eliminate_c1, TransformRecord};
use crate::algebra::{Polynomial, RationalFn, Weight, WeightedFn};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Power,
    Exponential,
}

/// Affine chart on top of the reduced equation: chart coordinates
/// `(z, theta, tau)` sit at `x = origin + sign z`, `y = sign time_sign theta`,
/// `t = time_sign tau` of the base Liénard plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub origin: f64,
    pub sign: f64,
    pub time_sign: f64,
}

impl Chart {
    pub const BASE: Chart = Chart { origin: 0.0, sign: 1.0, time_sign: 1.0 };

    pub fn to_base(&self, [z, th]: [f64; 2]) -> [f64; 2] {
        [self.origin + self.sign * z, self.sign * self.time_sign * th]
    }

    pub fn from_base(&self, [x, y]: [f64; 2]) -> [f64; 2] {
        [(x - self.origin) * self.sign, y * self.sign * self.time_sign]
    }

    pub fn is_base(&self) -> bool {
        *self == Chart::BASE
    }
}

/// The quadratic system a reduced form came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Source {
    /// Input system as given.
    pub input: QuadraticSystem,
    /// System with `c1 = 0` that was reduced.
    pub system: QuadraticSystem,
    /// Changes of variables from `input` to `system`.
    pub record: TransformRecord,
}

/// `x' = y`, `y' = -f(x) y - g(x)`, with the intermediate data of the
/// reduction `x' = y`, `y' = -Q y^2 - R y - P`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LienardForm {
    #[serde(rename = "Q")]
    pub q_fn: RationalFn,
    #[serde(rename = "R")]
    pub r_fn: RationalFn,
    #[serde(rename = "P")]
    pub p_fn: RationalFn,
    pub f: WeightedFn,
    pub g: WeightedFn,
    pub q: f64,
    pub pole: Option<f64>,
    pub weight_kind: WeightKind,
    pub chart: Chart,
    pub source: Option<Source>,
}

/// Reduces a system with `c1 = 0`.
pub fn to_lienard(s: &QuadraticSystem) -> Result<LienardForm> {
    s.validate()?;
    if s.c1 != 0.0 {
        return Err(Error::Precondition("reduction needs c1 = 0".into()));
    }
    if s.b1 == 0.0 && s.beta1 == 0.0 {
        return Err(Error::DegenerateFirstEquation);
    }
    let QuadraticSystem { a1, b1, alpha1, beta1, a2, b2, c2, alpha2, beta2, .. } = *s;
    let line = Polynomial::linear(beta1, b1);
    let h_num = Polynomial::new(vec![0.0, alpha1, a1]);

    let q_fn = RationalFn::over_linear_power(Polynomial::constant(-c2), beta1, b1, 1);
    let r_num = Polynomial::new(vec![
        alpha1 * beta1 + beta1 * beta2,
        b2 * beta1 + b1 * beta2 - 2.0 * alpha1 * c2 + 2.0 * a1 * beta1,
        b1 * b2 - 2.0 * a1 * c2 + a1 * b1,
    ]);
    let r_fn = RationalFn::over_linear_power(-&r_num, beta1, b1, 2);
    let p_num = {
        let t1 = &Polynomial::new(vec![0.0, alpha2, a2]) * &line.powi(2);
        let t2 = &(&Polynomial::linear(beta2, b2) * &h_num) * &line;
        let t3 = h_num.powi(2).scale(c2);
        &(&t2 - &t1) - &t3
    };
    let p_fn = RationalFn::over_linear_power(p_num, beta1, b1, 3);

    let (q, weight, weight_kind, pole) = if b1 != 0.0 {
        let q = -c2 / b1;
        let w = Weight::Power { base_offset: beta1, base_slope: b1, exponent: q };
        (q, w, WeightKind::Power, Some(-beta1 / b1))
    } else {
        (0.0, Weight::Exp { rate: -c2 / beta1 }, WeightKind::Exponential, None)
    };
    let f = WeightedFn::new(r_fn.clone(), weight)?;
    let g = WeightedFn::new(p_fn.clone(), weight.powered(2.0))?;
    Ok(LienardForm {
        q_fn,
        r_fn,
        p_fn,
        f,
        g,
        q,
        pole,
        weight_kind,
        chart: Chart::BASE,
        source: Some(Source { input: *s, system: *s, record: TransformRecord::identity() }),
    })
}

/// Eliminates `c1` if needed, then reduces.
pub fn reduce(s: &QuadraticSystem) -> Result<LienardForm> {
    let (t, rec) = eliminate_c1(s)?;
    let mut lf = to_lienard(&t)?;
    lf.source = Some(Source { input: *s, system: t, record: rec });
    Ok(lf)
}

impl LienardForm {
    /// A Liénard equation given directly by `f` and `g`.
    pub fn from_parts(f: WeightedFn, g: WeightedFn) -> LienardForm {
        let pole = f
            .singular_points()
            .into_iter()
            .chain(g.singular_points())
            .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |a| a.max(p))));
        let (q, weight_kind) = match f.weight {
            Weight::Power { exponent, .. } => (exponent, WeightKind::Power),
            Weight::Exp { .. } => (0.0, WeightKind::Exponential),
        };
        LienardForm {
            q_fn: RationalFn::constant(0.0),
            r_fn: f.core.clone(),
            p_fn: g.core.clone(),
            f,
            g,
            q,
            pole,
            weight_kind,
            chart: Chart::BASE,
            source: None,
        }
    }

    /// Polynomial `f` and `g`.
    pub fn polynomial(f: Polynomial, g: Polynomial) -> LienardForm {
        LienardForm::from_parts(WeightedFn::polynomial(f), WeightedFn::polynomial(g))
    }

    pub fn rhs(&self, x: f64, y: f64) -> [f64; 2] {
        [y, -self.f.eval(x) * y - self.g.eval(x)]
    }

    /// Distance from `x` to the pole line, infinite when there is none.
    pub fn pole_distance(&self, x: f64) -> f64 {
        self.pole.map_or(f64::INFINITY, |a| (x - a).abs())
    }

    /// Same equation in `z = x0 - x`, `theta = -y`: `f(x0 - z)` and `-g(x0 - z)`.
    pub fn reflected(&self, x0: f64) -> LienardForm {
        let mut out = self.clone();
        out.f = self.f.reflected(x0);
        out.g = self.g.reflected(x0).scale(-1.0);
        out.pole = self.pole.map(|a| x0 - a);
        let base_origin = self.chart.origin + self.chart.sign * x0;
        out.chart = Chart {
            origin: base_origin,
            sign: -self.chart.sign,
            time_sign: self.chart.time_sign,
        };
        out
    }

    /// Same equation in reversed time, `y -> -y`: `f -> -f`.
    pub fn time_reversed(&self) -> LienardForm {
        let mut out = self.clone();
        out.f = self.f.scale(-1.0);
        out.chart.time_sign = -self.chart.time_sign;
        out
    }

    fn line(&self, x: f64) -> Option<(f64, f64)> {
        self.source.as_ref().map(|s| {
            let sys = &s.system;
            (sys.beta1 + sys.b1 * x, sys.a1 * x * x + sys.alpha1 * x)
        })
    }

    fn base_weight(&self) -> Option<Weight> {
        let s = &self.source.as_ref()?.system;
        Some(if s.b1 != 0.0 {
            Weight::Power { base_offset: s.beta1, base_slope: s.b1, exponent: self.q }
        } else {
            Weight::Exp { rate: -s.c2 / s.beta1 }
        })
    }

    /// Chart point to the reduced (`c1 = 0`) quadratic system.
    pub fn to_system(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        let [x, yt] = self.chart.to_base(p);
        let (l, hn) = self.line(x)?;
        if l == 0.0 {
            return None;
        }
        let w = self.base_weight()?.eval(x);
        Some([x, yt / w - hn / l])
    }

    /// Reduced quadratic system point to this chart.
    pub fn from_system(&self, [x, y]: [f64; 2]) -> Option<[f64; 2]> {
        let (l, hn) = self.line(x)?;
        if l == 0.0 {
            return None;
        }
        let w = self.base_weight()?.eval(x);
        Some(self.chart.from_base([x, (y + hn / l) * w]))
    }

    /// Chart point to the input system's coordinates.
    pub fn to_original(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        let q = self.to_system(p)?;
        Some(self.source.as_ref()?.record.to_original(q))
    }

    pub fn from_original(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        let q = self.source.as_ref()?.record.from_original(p);
        self.from_system(q)
    }

    /// `dt_input / dtau` at a chart abscissa; negative where time runs backwards.
    pub fn time_factor(&self, z: f64) -> Option<f64> {
        let [x, _] = self.chart.to_base([z, 0.0]);
        let (l, _) = self.line(x)?;
        let w = self.base_weight()?.eval(x);
        let rec = &self.source.as_ref()?.record;
        Some(self.chart.time_sign * w / l * rec.time_scale())
    }
}
