//! The six subcommands. Each returns the files it would write, named
//! relative to the output directory.

use crate::artifact::{merged_display, AbcdEntry, Artifact, Theorem1Entry, Theorem5Entry};
use crate::error::{CliError, CliResult};
use crate::input::{read_input, Input};
use crate::json;
use crate::plot::{figure, render_csv, render_svg};
use crate::sample::{run_sample, SampleConfig, SampleRegion};
use lienard_core::analysis::{
    abcd_criterion, build_transversal, check_transversality, conditions21_check, default_anchors,
    find_equilibria_lienard, find_equilibria_system, jet, sample_abscissas, theorem1_certify,
    theorem5_certify, TransversalOptions,
};
use lienard_core::numerics::{cycle_orbit, find_cycles, integrate, CycleOptions, OdeOptions, Section};
use lienard_core::reduction::{eliminate_c1, reduce, LienardForm, QuadraticSystem};
use lienard_core::Error;
use std::path::{Path, PathBuf};

/// Points per cycle orbit in the cycles artifact.
pub const ORBIT_POINTS: usize = 400;
/// Interior samples per arc when checking the transversal curve.
pub const TRANSVERSAL_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub input: Option<PathBuf>,
    pub epsilon: Option<f64>,
    pub search_box: Option<[f64; 2]>,
    pub n: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub region: SampleRegion,
    /// Initial point and time span for a trajectory alongside `cycles`.
    pub trajectory: Option<[f64; 2]>,
    pub t_max: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            input: None,
            epsilon: None,
            search_box: None,
            n: None,
            seed: 0,
            tol: None,
            region: SampleRegion::Theorem5,
            trajectory: None,
            t_max: 50.0,
        }
    }
}

impl Options {
    fn validate(&self) -> CliResult<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!("--tol must be positive, got {t}")));
            }
        }
        if let Some([lo, hi]) = self.search_box {
            if !(lo < hi) {
                return Err(CliError::Config(format!("--box needs x0 < x1, got {lo},{hi}")));
            }
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(CliError::Config(format!("--t-max must be positive, got {}", self.t_max)));
        }
        Ok(())
    }

    fn input(&self) -> CliResult<Input> {
        let path = self.input.as_deref().ok_or_else(|| CliError::Config("--input is required".into()))?;
        read_input(path)
    }

    fn cycle_options(&self) -> CycleOptions {
        let mut o = CycleOptions::default();
        if let Some(t) = self.tol {
            o.tol = t;
        }
        o
    }
}

/// One output file: name and contents.
pub type Output = (String, String);

fn coefficients(input: Input, cmd: &str) -> CliResult<crate::input::CoefficientFile> {
    match input {
        Input::Coefficients(c) => Ok(c),
        Input::Reduced(_) => Err(CliError::Config(format!("`{cmd}` needs a coefficient file"))),
    }
}

fn lienard(input: Input, eps: Option<f64>) -> CliResult<LienardForm> {
    match input {
        Input::Coefficients(c) => Ok(reduce(&c.system(eps))?),
        Input::Reduced(lf) => Ok(*lf),
    }
}

pub fn run_reduce(opts: &Options) -> CliResult<Vec<Output>> {
    opts.validate()?;
    let c = coefficients(opts.input()?, "reduce")?;
    let lf = reduce(&c.system(opts.epsilon))?;
    Ok(vec![("reduce.json".into(), json::to_string(&reduced_artifact(lf)))])
}

pub fn reduced_artifact(lf: LienardForm) -> Artifact {
    Artifact::Reduced { f_display: merged_display(&lf.f), g_display: merged_display(&lf.g), lienard: lf }
}

pub fn run_certify(opts: &Options) -> CliResult<Vec<Output>> {
    opts.validate()?;
    let c = coefficients(opts.input()?, "certify")?;
    let eps = opts.epsilon.or(c.epsilon);
    let system = c.system(opts.epsilon);
    let equilibria = find_equilibria_system(&system)?;

    let mut theorem1 = Vec::new();
    if let (Some(family), Some(eps)) = (c.family(), eps) {
        let base = reduce(&family.system(0.0))?;
        for e in find_equilibria_lienard(&base)? {
            let x0 = e.x0.unwrap_or(e.location[0]);
            if !(jet(&base, x0).g1 > 0.0) {
                continue;
            }
            theorem1.push(match theorem1_certify(&family, x0, eps) {
                Ok(certificate) => Theorem1Entry { x0, certificate, error: None },
                Err(err) => Theorem1Entry { x0, certificate: None, error: Some(err.to_string()) },
            });
        }
    }

    let abcd = match abcd_criterion(&system) {
        Ok((criterion, certificate)) => AbcdEntry { criterion: Some(criterion), certificate, error: None },
        Err(err) => AbcdEntry { criterion: None, certificate: None, error: Some(err.to_string()) },
    };

    let theorem5 = match eliminate_c1(&system).and_then(|(t, _)| theorem5_certify(&t)) {
        Ok(outcome) => Theorem5Entry {
            violated: outcome.conditions.violated().iter().map(|s| s.to_string()).collect(),
            outcome: Some(outcome),
            error: None,
        },
        Err(err) => Theorem5Entry { outcome: None, violated: Vec::new(), error: Some(err.to_string()) },
    };

    let art = Artifact::Certificates { system, epsilon: eps, equilibria, theorem1, abcd, theorem5 };
    Ok(vec![("certify.json".into(), json::to_string(&art))])
}

pub fn cycles_artifact(lf: LienardForm, search_box: [f64; 2], opts: &CycleOptions) -> CliResult<Artifact> {
    let equilibria = find_equilibria_lienard(&lf)?;
    let cycles = find_cycles(&lf, search_box, opts);
    let orbits = cycles.iter().map(|c| cycle_orbit(&lf, c, ORBIT_POINTS, opts)).collect::<Result<Vec<_>, Error>>()?;
    Ok(Artifact::Cycles { lienard: lf, search_box, equilibria, cycles, orbits })
}

pub fn run_cycles(opts: &Options) -> CliResult<Vec<Output>> {
    opts.validate()?;
    let lf = lienard(opts.input()?, opts.epsilon)?;
    let search_box = opts.search_box.unwrap_or([-10.0, 10.0]);
    let copts = opts.cycle_options();
    let mut out = Vec::new();
    if let Some(p0) = opts.trajectory {
        let ode = OdeOptions { record: true, ..copts.ret.ode };
        let tr = integrate(&lf, p0, [0.0, opts.t_max], &ode, None::<&Section<2>>)?;
        let art = Artifact::Trajectory {
            lienard: Some(lf.clone()),
            system: None,
            chart: tr.chart,
            termination: tr.termination,
            times: tr.times.clone(),
            states: tr.states.clone(),
        };
        out.push(("trajectory.json".into(), json::to_string(&art)));
    }
    let art = cycles_artifact(lf, search_box, &copts)?;
    out.insert(0, ("cycles.json".into(), json::to_string(&art)));
    Ok(out)
}

/// The only equilibrium in `{x > a}`.
fn interior_equilibrium(lf: &LienardForm) -> CliResult<f64> {
    let a = lf.pole.unwrap_or(f64::NEG_INFINITY);
    let xs: Vec<f64> = find_equilibria_lienard(lf)?
        .iter()
        .map(|e| e.x0.unwrap_or(e.location[0]))
        .filter(|x| *x > a)
        .collect();
    match xs.as_slice() {
        [x0] => Ok(*x0),
        _ => Err(Error::Precondition(format!("need exactly one equilibrium in x > {a}, found {}", xs.len())).into()),
    }
}

pub fn transversal_artifact(lf: LienardForm, n: usize) -> CliResult<Artifact> {
    let x0 = interior_equilibrium(&lf)?;
    let (nu1, nu2) = default_anchors(&lf, x0)?;
    let curve = build_transversal(&lf, nu1, nu2, x0, &TransversalOptions::default())?;
    let report = check_transversality(&curve, n)?;
    let mut arcs = Vec::new();
    for seg in &curve.segments {
        let mut xs = sample_abscissas(seg.x_lo, seg.x_hi, 200, true);
        xs.sort_by(f64::total_cmp);
        arcs.push(seg.sample(&curve.f, &curve.g, &xs)?);
    }
    Ok(Artifact::Transversal { lienard: lf, curve, report, arcs })
}

pub fn run_transversal(opts: &Options) -> CliResult<Vec<Output>> {
    opts.validate()?;
    let input = opts.input()?;
    if let Input::Coefficients(c) = &input {
        precheck_half_plane(&c.system(opts.epsilon))?;
    }
    let lf = lienard(input, opts.epsilon)?;
    let art = transversal_artifact(lf, opts.n.unwrap_or(TRANSVERSAL_SAMPLES))?;
    Ok(vec![("transversal.json".into(), json::to_string(&art))])
}

/// Names the first failing half-plane inequality when they apply.
fn precheck_half_plane(s: &QuadraticSystem) -> CliResult<()> {
    let (t, _) = eliminate_c1(s)?;
    if !(t.b1 > 0.0) {
        return Ok(());
    }
    let c = conditions21_check(&t)?;
    match c.violated().first() {
        Some(name) => Err(Error::ConditionsViolated(format!("{name} fails")).into()),
        None => Ok(()),
    }
}

pub fn run_sample_cmd(opts: &Options) -> CliResult<Vec<Output>> {
    opts.validate()?;
    let mut cfg = SampleConfig::new(opts.region, opts.n.unwrap_or(200), opts.seed);
    if let Some(t) = opts.tol {
        cfg.cycles.tol = t;
    }
    Ok(vec![("sample.json".into(), json::to_string(&run_sample(&cfg)))])
}

pub fn plot_artifact(art: &Artifact) -> CliResult<Vec<Output>> {
    let fig = figure(art)?;
    Ok(vec![("plot.svg".into(), render_svg(&fig)), ("plot.csv".into(), render_csv(&fig))])
}

pub fn run_plot(opts: &Options) -> CliResult<Vec<Output>> {
    let path = opts.input.as_deref().ok_or_else(|| CliError::Config("--input is required".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    let tag = value.get("artifact").and_then(|t| t.as_str()).unwrap_or("").to_string();
    if !["cycles", "transversal", "trajectory"].contains(&tag.as_str()) {
        let shown = if tag.is_empty() { "no `artifact` tag".to_string() } else { format!("`{tag}` cannot be plotted") };
        return Err(CliError::UnknownArtifact(shown));
    }
    let art: Artifact = serde_json::from_value(value).map_err(|e| CliError::Parse(e.to_string()))?;
    plot_artifact(&art)
}

/// Writes into `dir` when given, otherwise concatenates on stdout.
pub fn emit(outputs: &[Output], dir: Option<&Path>) -> CliResult<()> {
    use std::io::Write;
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            for (name, body) in outputs {
                std::fs::write(dir.join(name), body)?;
            }
        }
        None => {
            if outputs.len() > 1 {
                return Err(CliError::Config("this command writes several files; pass --output DIR".into()));
            }
            let mut out = std::io::stdout().lock();
            for (_, body) in outputs {
                out.write_all(body.as_bytes())?;
            }
        }
    }
    Ok(())
}
