use lienard_core::algebra::{
    definite_integral, real_roots, weighted_derive, Polynomial, RationalFn, Weight, WeightedFn,
};
use proptest::prelude::*;

fn power_weighted(num: Vec<f64>, offset: f64, slope: f64, k: u32, exponent: f64) -> WeightedFn {
    WeightedFn::new(
        RationalFn::over_linear_power(Polynomial::new(num), offset, slope, k),
        Weight::Power { base_offset: offset, base_slope: slope, exponent },
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn first_derivative_matches_central_difference(
        num in prop::collection::vec(-3.0f64..3.0, 1..5),
        offset in 0.5f64..2.0,
        slope in prop_oneof![-2.0f64..-0.5, 0.5f64..2.0],
        k in 0u32..4,
        exponent in -3.0f64..3.0,
        t in -3.0f64..3.0,
    ) {
        let w = power_weighted(num, offset, slope, k, exponent);
        let pole = -offset / slope;
        let x = pole + if t >= 0.0 { 0.3 + t } else { t - 0.3 };
        let h = 1e-5;
        let fd = (w.eval(x + h) - w.eval(x - h)) / (2.0 * h);
        let exact = weighted_derive(&w, 1).eval(x);
        let scale = exact.abs().max(w.eval(x).abs()).max(1e-3);
        prop_assert!((fd - exact).abs() <= 1e-5 * scale, "fd {} exact {}", fd, exact);
    }

    #[test]
    fn exponential_weight_derivative_matches_central_difference(
        num in prop::collection::vec(-3.0f64..3.0, 1..5),
        rate in -1.5f64..1.5,
        x in -2.0f64..2.0,
    ) {
        let w = WeightedFn::new(RationalFn::polynomial(Polynomial::new(num)), Weight::Exp { rate }).unwrap();
        let h = 1e-5;
        let fd = (w.eval(x + h) - w.eval(x - h)) / (2.0 * h);
        let exact = weighted_derive(&w, 1).eval(x);
        let scale = exact.abs().max(w.eval(x).abs()).max(1e-3);
        prop_assert!((fd - exact).abs() <= 1e-5 * scale);
    }

    #[test]
    fn second_derivative_matches_differenced_first(
        num in prop::collection::vec(-3.0f64..3.0, 1..4),
        exponent in -2.0f64..2.0,
        x in 0.2f64..3.0,
    ) {
        let w = power_weighted(num, 1.0, 1.0, 2, exponent);
        let d1 = weighted_derive(&w, 1);
        let h = 1e-5;
        let fd = (d1.eval(x + h) - d1.eval(x - h)) / (2.0 * h);
        let exact = weighted_derive(&w, 2).eval(x);
        let scale = exact.abs().max(d1.eval(x).abs()).max(1e-3);
        prop_assert!((fd - exact).abs() <= 1e-5 * scale);
    }

    #[test]
    fn roots_match_dense_scan(
        roots in prop::collection::vec(-95.0f64..95.0, 0..4),
        double in prop::option::of(-95.0f64..95.0),
        lead in prop_oneof![-5.0f64..-0.2, 0.2f64..5.0],
        complex_pair in any::<bool>(),
    ) {
        // keep roots apart so a 10^4-point grid resolves every sign change
        let mut all = roots.clone();
        let mut p = Polynomial::from_roots(&roots);
        if let Some(d) = double {
            if all.len() <= 2 {
                p = &p * &Polynomial::from_roots(&[d, d]);
                all.push(d);
            }
        }
        if complex_pair && p.degree() <= 2 {
            p = &p * &Polynomial::new(vec![1.0, 0.5, 1.0]);
        }
        let mut sorted = all.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assume!(sorted.windows(2).all(|w| w[1] - w[0] > 0.1));
        let p = p.scale(lead);
        prop_assume!(!p.is_zero() && p.degree() > 0);

        let found = real_roots(&p).unwrap();
        let values: Vec<f64> = found.iter().map(|r| r.value).collect();

        let n = 10_000;
        let grid: Vec<f64> = (0..=n).map(|i| -100.0 + 200.0 * i as f64 / n as f64).collect();
        let mut sign_changes = Vec::new();
        for w in grid.windows(2) {
            if p.eval(w[0]).signum() != p.eval(w[1]).signum() {
                sign_changes.push((w[0], w[1]));
            }
        }
        let odd: Vec<&_> = found.iter().filter(|r| r.multiplicity % 2 == 1).collect();
        prop_assert_eq!(odd.len(), sign_changes.len());
        for (r, (lo, hi)) in odd.iter().zip(&sign_changes) {
            prop_assert!(r.value >= lo - 1e-9 && r.value <= hi + 1e-9);
        }
        // tangency points: every even-multiplicity root is a local extremum of p
        for r in found.iter().filter(|r| r.multiplicity % 2 == 0) {
            let h = 1e-2;
            let (l, c, rt) = (p.eval(r.value - h), p.eval(r.value), p.eval(r.value + h));
            prop_assert!(l.signum() == rt.signum() && c.abs() < l.abs().min(rt.abs()));
        }
        for v in &values {
            prop_assert!(all.iter().any(|a| (a - v).abs() <= 1e-4 * (1.0 + a.abs())));
        }
    }

    #[test]
    fn integral_is_additive(
        num in prop::collection::vec(-2.0f64..2.0, 1..4),
        exponent in -2.5f64..2.5,
        a in -0.8f64..0.0,
        b in 0.0f64..1.0,
        c in 1.0f64..4.0,
    ) {
        let w = power_weighted(num, 1.0, 1.0, 1, exponent);
        let ab = definite_integral(&w, a, b).unwrap();
        let bc = definite_integral(&w, b, c).unwrap();
        let ac = definite_integral(&w, a, c).unwrap();
        prop_assert!((ab + bc - ac).abs() <= 1e-9 * (1.0 + ac.abs()));
    }
}

#[test]
fn integral_against_dense_trapezoid() {
    // (1/9)(x^2 + 2x) (1 + x)^-5 |1 + x|^2
    let g = WeightedFn::new(
        RationalFn::over_linear_power(Polynomial::new(vec![0.0, 2.0 / 9.0, 1.0 / 9.0]), 1.0, 1.0, 5),
        Weight::Power { base_offset: 1.0, base_slope: 1.0, exponent: 2.0 },
    )
    .unwrap();
    let (lo, hi) = (-0.5, 0.5);
    let n = 1_000_000;
    let h = (hi - lo) / n as f64;
    let mut trap = 0.5 * (g.eval(lo) + g.eval(hi));
    for i in 1..n {
        trap += g.eval(lo + i as f64 * h);
    }
    trap *= h;
    let value = definite_integral(&g, lo, hi).unwrap();
    assert!((value - trap).abs() < 1e-8, "{value} vs {trap}");
}
