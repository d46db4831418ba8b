//! End-to-end reproduction runs: `ntests` PLWE-oracle runs followed by
//! `ntests` uniform-oracle runs, each with `M` fresh samples.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::attack::{algorithm2, build_sigma, mult_budget, success_probability, MultBudget, VerdictKind};
use crate::error::Result;
use crate::params::AttackParams;
use crate::ring::NoiseModel;
use crate::rng::derive_seed;
use crate::samplefile::generate_sample_set;
use crate::subring::OracleKind;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub p: u64,
    pub n: u32,
    pub a: u32,
    pub q_min: u64,
    pub noise: NoiseModel,
    pub cutoff: f64,
    pub samples: u32,
    pub ntests: u32,
    pub seed: u64,
    pub root_index: usize,
}

impl ExperimentConfig {
    /// `p = 2, n = 10, q = 24029, sigma = 8, M = 10, ntests = 5`.
    pub fn example1(cutoff: f64, seed: u64) -> Self {
        Self {
            p: 2,
            n: 10,
            a: 2,
            q_min: 24000,
            noise: NoiseModel::std_dev(8.0),
            cutoff,
            samples: 10,
            ntests: 5,
            seed,
            root_index: 0,
        }
    }

    /// As [`Self::example1`] with `n = 11`, `q = 40013`.
    pub fn example2(cutoff: f64, seed: u64) -> Self {
        Self {
            n: 11,
            q_min: 40000,
            ..Self::example1(cutoff, seed)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRecord {
    pub oracle: OracleKind,
    pub run: u32,
    pub seed: u64,
    pub verdict: VerdictKind,
    pub survivors: usize,
    pub mult_count: u64,
    pub setup_mults: u64,
    pub failed: bool,
    pub gen_nanos: u128,
    pub attack_nanos: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub q: u64,
    pub u: u64,
    pub rho: u64,
    pub dimension: usize,
    pub sigma_cardinality: usize,
    pub analytic_success: f64,
    pub budget: MultBudget,
    pub runs: Vec<RunRecord>,
    pub plwe_failures: u32,
    pub uniform_failures: u32,
}

impl ExperimentReport {
    /// Zeroes the wall-clock fields so reports can be compared.
    pub fn strip_timings(&mut self) {
        for r in &mut self.runs {
            r.gen_nanos = 0;
            r.attack_nanos = 0;
        }
    }

    pub fn max_mult_count(&self) -> u64 {
        self.runs.iter().map(|r| r.mult_count - r.setup_mults).max().unwrap_or(0)
    }
}

/// A PLWE run succeeds on a single survivor; a uniform run on none.
pub fn is_failure(oracle: OracleKind, verdict: VerdictKind) -> bool {
    match oracle {
        OracleKind::Plwe => verdict != VerdictKind::Plwe,
        OracleKind::Uniform => verdict != VerdictKind::NotPlwe,
    }
}

fn oracle_label(oracle: OracleKind) -> u64 {
    match oracle {
        OracleKind::Plwe => 1,
        OracleKind::Uniform => 2,
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let (params, _) = AttackParams::search(cfg.p, cfg.n, cfg.a, cfg.q_min, cfg.noise, cfg.root_index)?;
    let ctx = params.trace_context()?;
    let m = params.field.modulus();
    let region = build_sigma(params.p(), cfg.noise.sigma, cfg.cutoff, params.rho, m)?;

    let jobs: Vec<(OracleKind, u32)> = [OracleKind::Plwe, OracleKind::Uniform]
        .into_iter()
        .flat_map(|o| (0..cfg.ntests).map(move |r| (o, r)))
        .collect();
    let runs = jobs
        .into_par_iter()
        .map(|(oracle, run)| {
            let seed = derive_seed(cfg.seed, oracle_label(oracle), run as u64);
            let t0 = Instant::now();
            let (set, _) = generate_sample_set(&params, oracle, cfg.samples, seed)?;
            let gen_nanos = t0.elapsed().as_nanos();
            let t1 = Instant::now();
            let verdict = algorithm2(&set.samples, &region, &ctx)?;
            let attack_nanos = t1.elapsed().as_nanos();
            Ok(RunRecord {
                oracle,
                run,
                seed,
                verdict: verdict.kind,
                survivors: verdict.survivors.len(),
                mult_count: verdict.mult_count,
                setup_mults: verdict.setup_mults,
                failed: is_failure(oracle, verdict.kind),
                gen_nanos,
                attack_nanos,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let failures = |o| runs.iter().filter(|r| r.oracle == o && r.failed).count() as u32;
    Ok(ExperimentReport {
        q: params.q(),
        u: params.u(),
        rho: params.rho,
        dimension: params.dimension(),
        sigma_cardinality: region.cardinality(),
        analytic_success: success_probability(region.cardinality(), params.q(), cfg.samples),
        budget: mult_budget(params.p(), params.q(), cfg.samples as u64),
        plwe_failures: failures(OracleKind::Plwe),
        uniform_failures: failures(OracleKind::Uniform),
        runs,
        config: cfg.clone(),
    })
}
