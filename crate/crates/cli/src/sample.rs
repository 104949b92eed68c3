//! Monte-Carlo sampling of coefficient space.

use lienard_core::analysis::{theorem5_certify, CertificateKind};
use lienard_core::numerics::{confirm_certificate, find_cycles, CycleOptions};
use lienard_core::reduction::{eliminate_c1, reduce, QuadraticSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SampleRegion {
    /// Every coefficient uniform in [-1, 1].
    Uniform,
    /// Box inside the half-plane conditions with a unique unstable focus.
    Theorem5,
}

pub const SAMPLE_T_MAX: f64 = 1e4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub region: SampleRegion,
    pub n: usize,
    pub seed: u64,
    /// Run the cycle search on every sample.
    pub search_cycles: bool,
    pub cycles: CycleOptions,
}

impl SampleConfig {
    pub fn new(region: SampleRegion, n: usize, seed: u64) -> Self {
        let mut cycles = CycleOptions::default();
        // draws are fast-turning; a long cap only slows near-centres
        cycles.ret.t_max = SAMPLE_T_MAX;
        SampleConfig {
            region,
            n,
            seed,
            search_cycles: true,
            cycles,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub coefficients: QuadraticSystem,
    pub certificate: Option<CertificateKind>,
    /// Cycles found, restricted to `{x > a}` for the half-plane region.
    pub cycles: usize,
    /// A found cycle lies where the certificate puts one.
    pub confirmed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub region: SampleRegion,
    pub seed: u64,
    pub generator: String,
    pub n_total: usize,
    pub n_certified: usize,
    /// Samples with at least one cycle.
    pub n_cycles_found: usize,
    pub n_confirmed: usize,
    pub records: Vec<SampleRecord>,
}

/// Generator for sample `index`: stream `index` of ChaCha8 keyed by `seed`.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn draw(region: SampleRegion, rng: &mut ChaCha8Rng) -> QuadraticSystem {
    match region {
        SampleRegion::Uniform => QuadraticSystem::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..=1.0))),
        SampleRegion::Theorem5 => {
            let b1 = rng.gen_range(1.0..=2.0);
            let c2 = 0.5 * b1 * rng.gen_range(0.1..=0.9);
            let beta1 = rng.gen_range(0.5..=2.0);
            let alpha1 = rng.gen_range(-1.5..=-0.5);
            let b2 = rng.gen_range(-1.5..=-0.5);
            let a2 = rng.gen_range(-1.5..=-0.5);
            let trace = rng.gen_range(0.1..=1.0);
            let alpha2 = rng.gen_range(-1000.0..=-200.0);
            QuadraticSystem {
                a1: 0.0,
                b1,
                c1: 0.0,
                alpha1,
                beta1,
                a2,
                b2,
                c2,
                alpha2,
                beta2: trace - alpha1,
            }
        }
    }
}

fn evaluate(index: usize, cfg: &SampleConfig) -> SampleRecord {
    let mut rng = sample_rng(cfg.seed, index);
    let s = draw(cfg.region, &mut rng);
    let mut rec = SampleRecord { index, coefficients: s, certificate: None, cycles: 0, confirmed: false, note: None };
    let reduced = match eliminate_c1(&s) {
        Ok((t, _)) => t,
        Err(e) => {
            rec.note = Some(e.to_string());
            return rec;
        }
    };
    let outcome = if reduced.b1 > 0.0 { theorem5_certify(&reduced).ok() } else { None };
    let cert = outcome.as_ref().and_then(|o| o.certificate.clone());
    rec.certificate = cert.as_ref().map(|c| c.kind);
    if !cfg.search_cycles {
        return rec;
    }
    let lf = match reduce(&s) {
        Ok(lf) => lf,
        Err(e) => {
            rec.note = Some(e.to_string());
            return rec;
        }
    };
    let (search, a) = match (cfg.region, lf.pole) {
        (SampleRegion::Theorem5, Some(a)) => ([a + 1e-3, a + 25.0], Some(a)),
        _ => ([-5.0, 5.0], None),
    };
    let cycles = find_cycles(&lf, search, &cfg.cycles);
    rec.cycles = cycles.iter().filter(|c| a.is_none_or(|a| c.amplitude.0 > a)).count();
    rec.confirmed = cert.as_ref().is_some_and(|c| confirm_certificate(c, &cycles).is_some());
    rec
}

pub fn run_sample(cfg: &SampleConfig) -> SampleReport {
    let mut records: Vec<SampleRecord> = (0..cfg.n).into_par_iter().map(|i| evaluate(i, cfg)).collect();
    records.sort_by_key(|r| r.index);
    SampleReport {
        region: cfg.region,
        seed: cfg.seed,
        generator: "ChaCha8, stream = sample index".into(),
        n_total: records.len(),
        n_certified: records.iter().filter(|r| r.certificate.is_some()).count(),
        n_cycles_found: records.iter().filter(|r| r.cycles > 0).count(),
        n_confirmed: records.iter().filter(|r| r.confirmed).count(),
        records,
    }
}
