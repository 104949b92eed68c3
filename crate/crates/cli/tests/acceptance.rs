//! One pass/fail line per acceptance criterion. Tolerances and time
//! budgets are fixed here; a failing criterion fails the target.

use lienard_cli::sample::{draw, run_sample, sample_rng, SampleConfig, SampleRegion};
use lienard_core::analysis::{
    abcd_criterion, build_transversal, check_transversality, conditions21_check, continue_zero,
    default_anchors, find_equilibria_lienard, find_equilibria_system, jet, lyapunov_quantity,
    theorem1_certify, theorem5_certify, CycleCertificate, EquilibriumKind, Orientation,
    TransversalOptions,
};
use lienard_core::numerics::{
    compare_trajectories, confirm_certificate, find_cycles, integrate, return_time_expansion,
    slope_through_origin, CycleNumeric, CycleOptions, OdeOptions, ReturnOptions,
};
use lienard_core::reduction::{eliminate_c1, reduce, LienardFamily, LienardForm, QuadraticFamily, QuadraticSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn two_cycle_family() -> QuadraticFamily {
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

/// The same family with time reversed, `x'' - f x' + g = 0`.
fn reversed_member(eps: f64) -> lienard_core::Result<LienardForm> {
    let m = two_cycle_family().member(eps)?;
    Ok(LienardForm::from_parts(m.f.scale(-1.0), m.g))
}

fn half_plane_example() -> QuadraticSystem {
    QuadraticSystem {
        b1: 1.0,
        beta1: 1.0,
        alpha1: -1.0,
        a2: -1.0,
        b2: -1.0,
        c2: 0.25,
        beta2: 2.0,
        alpha2: -1000.0,
        ..Default::default()
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Check = fn() -> Result<Outcome, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn c1_jets() -> Result<Outcome, String> {
    let lf = two_cycle_family().member(0.0).map_err(err)?;
    let mut worst = 0.0f64;
    // the values at -2 are those of the chart reflected about -2
    for chart in [lf.clone(), lf.reflected(-2.0)] {
        let j = jet(&chart, 0.0);
        for (got, want) in [(j.f1, 2.0), (j.g1, 2.0 / 9.0), (2.0 * j.f2, -10.0), (2.0 * j.g2, -2.0)] {
            worst = worst.max((got - want).abs());
        }
    }
    Ok(outcome(worst <= 1e-9, format!("max |jet - printed value| = {worst:.2e} (tol 1e-9)")))
}

fn c2_drift() -> Result<Outcome, String> {
    let fam = two_cycle_family();
    let eps: Vec<f64> = (1..=10).map(|k| 1e-3 * k as f64).collect();
    let mut dx = Vec::new();
    for &e in &eps {
        dx.push(continue_zero(&fam, -2.0, e).map_err(err)? + 2.0);
    }
    let slope = slope_through_origin(&eps, &dx, 3).map_err(err)?;
    let naive = slope_through_origin(&eps, &dx, 1).map_err(err)?;
    Ok(outcome(
        (slope + 3.0).abs() <= 0.1,
        format!("slope {slope:.4} (cubic through origin, eps in [1e-3, 1e-2]; linear-only {naive:.3}), want -3 +- 0.1"),
    ))
}

fn foci_in(s: &QuadraticSystem, lo: f64, hi: f64) -> Result<Vec<f64>, String> {
    Ok(find_equilibria_system(s)
        .map_err(err)?
        .iter()
        .filter(|e| e.kind == EquilibriumKind::Focus && e.location[0] > lo && e.location[0] < hi)
        .map(|e| e.location[0])
        .collect())
}

fn c3_two_cycles() -> Result<Outcome, String> {
    let fam = two_cycle_family();
    let opts = CycleOptions::default();
    let mut lines = Vec::new();
    let mut pass = true;
    for eps in [-0.005, -0.01, -0.02, -0.03, -0.05] {
        let s = fam.system(eps);
        let lf = reduce(&s).map_err(err)?;
        let cycles = find_cycles(&lf, [-3.5, 1.5], &opts);
        let foci = foci_in(&s, -3.5, 1.5)?;
        let enclosed = foci
            .iter()
            .filter(|&&x| cycles.iter().any(|c| c.encloses(x) && c.residual <= 1e-8))
            .count();
        let ok = cycles.len() >= 2 && foci.len() == 2 && enclosed == 2;
        pass &= ok;
        lines.push(format!("eps {eps}: {} cycles, {enclosed}/{} foci enclosed", cycles.len(), foci.len()));
    }
    Ok(outcome(pass, lines.join("; ")))
}

fn c4_half_plane() -> Result<Outcome, String> {
    let s = half_plane_example();
    let cond = conditions21_check(&s).map_err(err)?;
    let out = theorem5_certify(&s).map_err(err)?;
    let unique_focus = matches!(out.equilibria.as_slice(), [e] if e.is_unstable_focus());
    let lf = reduce(&s).map_err(err)?;
    let a = lf.pole.unwrap_or(f64::NEG_INFINITY);
    let cycles = find_cycles(&lf, [a + 1e-2, a + 11.0], &CycleOptions::default());
    let inside = cycles.iter().filter(|c| c.amplitude.0 > a).count();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ode = OdeOptions { record: true, rtol: 1e-9, atol: 1e-11, ..OdeOptions::default() };
    let mut min_x = f64::INFINITY;
    for _ in 0..20 {
        let p = [rng.gen_range(-0.99..3.0), rng.gen_range(-3.0..3.0)];
        let tr = integrate(&s, p, [0.0, 200.0], &ode, None).map_err(err)?;
        min_x = tr.states.iter().map(|q| q[0]).fold(min_x, f64::min);
    }
    let pass = cond.holds && out.certificate.is_some() && unique_focus && inside >= 1 && min_x > -1.0;
    let margins: Vec<String> = cond.margins.iter().map(|m| format!("{:.3}", m.unwrap_or(f64::NAN))).collect();
    Ok(outcome(
        pass,
        format!(
            "margins [{}], unique unstable focus {unique_focus}, {inside} cycle(s) in x > -1, min x over 20 orbits {min_x:.4}",
            margins.join(", ")
        ),
    ))
}

fn c5_return_time() -> Result<Outcome, String> {
    let lf = two_cycle_family().member(0.0).map_err(err)?;
    let z: Vec<f64> = (1..=10).map(|k| 0.02 * k as f64).collect();
    let neg: Vec<f64> = z.iter().map(|v| -v).collect();
    let mut exps = Vec::new();
    for zs in [&z, &neg] {
        exps.push(return_time_expansion(&lf, 0.0, zs, &ReturnOptions::default()).map_err(err)?.exponent);
    }
    let pass = exps.iter().all(|e| (e - 2.0).abs() <= 0.3);
    Ok(outcome(pass, format!("exponent {:.3} (z0 > 0), {:.3} (z0 < 0), want 2 +- 0.3", exps[0], exps[1])))
}

fn c6_reduction() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    // large weight exponents amplify integration error through the chart
    let ode = OdeOptions { rtol: 1e-13, atol: 1e-15, ..OdeOptions::default() };
    let (mut compared, mut attempts, mut worst) = (0, 0, 0.0f64);
    while compared < 500 && attempts < 5000 {
        attempts += 1;
        let s = QuadraticSystem::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        if s.b1.abs() < 0.1 {
            continue;
        }
        let Ok(lf) = reduce(&s) else { continue };
        let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let Ok((dev, _)) = compare_trajectories(&lf, p, 1.0, 50, 0.05, &ode) else { continue };
        worst = worst.max(dev);
        compared += 1;
    }
    let mut c1_worst = 0.0f64;
    let mut eliminated = 0;
    while eliminated < 1000 {
        let s = QuadraticSystem::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        if s.a2 == 0.0 {
            continue;
        }
        let (t, _) = eliminate_c1(&s).map_err(err)?;
        c1_worst = c1_worst.max(t.c1.abs());
        eliminated += 1;
    }
    Ok(outcome(
        compared == 500 && worst <= 1e-6 && c1_worst < 1e-12,
        format!("{compared} trajectory pairs, worst relative gap {worst:.2e} (tol 1e-6, rtol 1e-13); max |c1| after elimination {c1_worst:.1e}"),
    ))
}

fn interior_equilibrium(lf: &LienardForm) -> Result<f64, String> {
    let a = lf.pole.unwrap_or(f64::NEG_INFINITY);
    let xs: Vec<f64> = find_equilibria_lienard(lf)
        .map_err(err)?
        .iter()
        .map(|e| e.x0.unwrap_or(e.location[0]))
        .filter(|x| *x > a)
        .collect();
    match xs.as_slice() {
        [x] => Ok(*x),
        _ => Err(format!("{} equilibria right of the pole", xs.len())),
    }
}

fn c7_transversal() -> Result<Outcome, String> {
    let mut systems = vec![half_plane_example()];
    systems.extend((0..20).map(|i| draw(SampleRegion::Theorem5, &mut sample_rng(99, i))));
    let (mut good, mut min_samples) = (0, usize::MAX);
    let mut failures = Vec::new();
    for (i, s) in systems.iter().enumerate() {
        let mut run = || -> Result<bool, String> {
            if !conditions21_check(s).map_err(err)?.holds {
                return Err("conditions fail".into());
            }
            let lf = reduce(s).map_err(err)?;
            let x0 = interior_equilibrium(&lf)?;
            let (nu1, nu2) = default_anchors(&lf, x0).map_err(err)?;
            let curve = build_transversal(&lf, nu1, nu2, x0, &TransversalOptions::default()).map_err(err)?;
            let rep = check_transversality(&curve, 1000).map_err(err)?;
            let fewest = rep.samples_per_segment.iter().copied().min().unwrap_or(0);
            min_samples = min_samples.min(fewest);
            Ok(rep.holds() && curve.matching_holds() && fewest >= 1000)
        };
        match run() {
            Ok(true) => good += 1,
            Ok(false) => failures.push(format!("#{i} not transversal")),
            Err(e) => failures.push(format!("#{i}: {e}")),
        }
    }
    let mut detail = format!(
        "{good}/{} curves transversal with y5 < y6 and y7 > y8, fewest samples on a segment {min_samples}",
        systems.len()
    );
    if !failures.is_empty() {
        detail.push_str(&format!(" [{}]", failures.join("; ")));
    }
    Ok(outcome(good == systems.len(), detail))
}

fn confirmed(cert: &CycleCertificate, lf: &LienardForm, search: [f64; 2]) -> Option<CycleNumeric> {
    let cycles = find_cycles(lf, search, &CycleOptions::default());
    confirm_certificate(cert, &cycles).copied()
}

fn c8_certificates() -> Result<Outcome, String> {
    let mut issued = Vec::new();
    let eps = -0.01;
    let forward = two_cycle_family();
    let families: [(&str, &dyn LienardFamily); 2] = [("forward", &forward), ("reversed", &reversed_member)];
    for (name, fam) in families {
        let base = fam.member(0.0).map_err(err)?;
        let lf = fam.member(eps).map_err(err)?;
        for x0 in [0.0, -2.0] {
            let x = base.chart.from_base([x0, 0.0])[0];
            if let Some(c) = theorem1_certify(fam, x, eps).map_err(err)? {
                let ok = confirmed(&c, &lf, [-3.5, 1.5]).is_some();
                issued.push((format!("small cycle {name} x0={x0} {:?}", c.orientation), c.orientation, ok));
            }
        }
    }
    let s = two_cycle_family().system(eps);
    if let (_, Some(c)) = abcd_criterion(&s).map_err(err)? {
        let ok = confirmed(&c, &reduce(&s).map_err(err)?, [-3.5, 1.5]).is_some();
        issued.push((format!("focus test {:?}", c.orientation), c.orientation, ok));
    }
    let hp = half_plane_example();
    if let Some(c) = theorem5_certify(&hp).map_err(err)?.certificate {
        let ok = confirmed(&c, &reduce(&hp).map_err(err)?, [-0.99, 10.0]).is_some();
        issued.push(("half plane".into(), c.orientation, ok));
    }
    let both = [Orientation::Paper, Orientation::Mirrored]
        .iter()
        .all(|o| issued.iter().any(|(n, io, _)| n.starts_with("small") && io == o));
    let all_confirmed = issued.iter().all(|(_, _, ok)| *ok);

    // identity at the origin: D = g'(0), AD - BC + BD(1 + c2) = L/2
    let mut instances = vec![two_cycle_family().base];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    while instances.len() < 51 {
        let alpha1 = rng.gen_range(-1.0..1.0);
        let s = QuadraticSystem {
            a1: rng.gen_range(-1.0..1.0),
            b1: 1.0,
            c1: 0.0,
            alpha1,
            beta1: 1.0,
            a2: rng.gen_range(-1.0..1.0),
            b2: rng.gen_range(-1.0..1.0),
            c2: rng.gen_range(-1.0..1.0),
            alpha2: rng.gen_range(-1.0..1.0),
            beta2: -alpha1,
        };
        instances.push(s);
    }
    let mut id_worst = 0.0f64;
    for s in &instances {
        let (fc, _) = abcd_criterion(s).map_err(err)?;
        let lf = reduce(s).map_err(err)?;
        let x0 = lf.chart.from_base([0.0, 0.0])[0];
        let l = lyapunov_quantity(&lf, x0).map_err(err)?;
        let g1 = jet(&lf, x0).g1;
        let scale = 1.0 + fc.D.abs() + l.abs();
        id_worst = id_worst.max((fc.D - g1).abs() / scale).max((fc.expression(s.c2) - l / 2.0).abs() / scale);
    }
    let names: Vec<String> = issued.iter().map(|(n, _, ok)| format!("{n}: {}", if *ok { "confirmed" } else { "NOT confirmed" })).collect();
    Ok(outcome(
        both && all_confirmed && id_worst <= 1e-8,
        format!(
            "{}; both orientations issued {both}; identity residual {id_worst:.1e} over {} instances (tol 1e-8)",
            names.join(", "),
            instances.len()
        ),
    ))
}

fn c9_sampler() -> Result<Outcome, String> {
    let cfg = SampleConfig::new(SampleRegion::Theorem5, 200, 20240601);
    let first = run_sample(&cfg);
    let second = run_sample(&cfg);
    let same = serde_json::to_string(&first).map_err(err)? == serde_json::to_string(&second).map_err(err)?;
    Ok(outcome(
        same && first.n_certified == 200 && first.n_confirmed == 200 && first.n_cycles_found == 200,
        format!(
            "seed {}: certified {}/200, cycles found {}/200, confirmed {}/200, rerun identical {same}",
            cfg.seed, first.n_certified, first.n_cycles_found, first.n_confirmed
        ),
    ))
}

fn main() {
    let criteria: [(u32, &str, f64, Check); 9] = [
        (1, "jet values at both equilibria", 1.0, c1_jets),
        (2, "equilibrium drift slope", 5.0, c2_drift),
        (3, "two cycles around two foci", 60.0, c3_two_cycles),
        (4, "half-plane example", 120.0, c4_half_plane),
        (5, "return-time exponent", 30.0, c5_return_time),
        (6, "reduction soundness", 300.0, c6_reduction),
        (7, "transversal curves", 300.0, c7_transversal),
        (8, "certificates confirmed, focus identity", 300.0, c8_certificates),
        (9, "sampler", 600.0, c9_sampler),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && secs <= budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id} {} {name}: {detail} ({secs:.2} s, budget {budget} s)",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
