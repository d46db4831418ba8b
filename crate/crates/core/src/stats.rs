//! Statistical self-tests: chi-square uniformity and guess survival rates.

use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::attack::SmallnessRegion;
use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::rng::{stream, Stream};
use crate::subring::TraceContext;

#[derive(Clone, Debug, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquare {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value > significance
    }
}

/// Pearson goodness-of-fit against the uniform distribution on the bins.
pub fn chi_square_uniform(counts: &[u64]) -> ChiSquare {
    let k = counts.len();
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / k as f64;
    let statistic = counts
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum::<f64>();
    let dof = k - 1;
    let dist = ChiSquared::new(dof as f64).expect("dof >= 1");
    ChiSquare {
        statistic,
        dof,
        p_value: 1.0 - dist.cdf(statistic),
    }
}

/// Histogram of `sum_i lambda_i X_i` over `F_q` with `X_i` i.i.d. uniform.
pub fn uniform_sum_test(modulus: Modulus, lambdas: &[u64], trials: usize, seed: u64) -> Result<ChiSquare> {
    let q = modulus.value();
    if lambdas.iter().all(|&l| modulus.reduce(l) == 0) {
        return Err(Error::InvalidParams(
            "at least one coefficient lambda must be nonzero".into(),
        ));
    }
    let mut rng = stream(seed, Stream::Aux(0));
    let mut counts = vec![0u64; q as usize];
    for _ in 0..trials {
        let s = lambdas.iter().fold(0, |acc, &l| {
            modulus.add(acc, modulus.mul(l, rng.random_range(0..q)))
        });
        counts[s as usize] += 1;
    }
    Ok(chi_square_uniform(&counts))
}

/// `count` coefficients drawn uniformly from `F_q^*`.
pub fn random_nonzero_lambdas(modulus: Modulus, count: usize, seed: u64) -> Vec<u64> {
    let mut rng = stream(seed, Stream::Aux(1));
    (0..count).map(|_| rng.random_range(1..modulus.value())).collect()
}

/// Chi-square on `a(alpha)` for `a` drawn uniformly from `R_q,0`.
pub fn subring_value_test(ctx: &TraceContext, trials: usize, seed: u64) -> ChiSquare {
    let q = ctx.modulus().value();
    let mut rng = stream(seed, Stream::Aux(2));
    let mut counts = vec![0u64; q as usize];
    for _ in 0..trials {
        let a = ctx.sample_uniform_r0(&mut rng);
        let v = ctx
            .alpha_value(&a)
            .expect("same context")
            .expect("sampler stays in R_q,0");
        counts[v as usize] += 1;
    }
    chi_square_uniform(&counts)
}

#[derive(Clone, Debug, Serialize)]
pub struct SurvivalReport {
    pub trials: usize,
    pub survived: usize,
    pub rate: f64,
    /// `|Sigma| / q`
    pub expected: f64,
    pub standard_error: f64,
    /// `(rate - expected) / standard_error`
    pub z: f64,
}

impl SurvivalReport {
    pub fn within(&self, sigmas: f64) -> bool {
        self.z.abs() <= sigmas
    }
}

/// Per-sample survival of the fixed guess `g` on uniform-oracle samples.
pub fn survival_rate_test(
    ctx: &TraceContext,
    region: &SmallnessRegion,
    guess: u64,
    trials: usize,
    seed: u64,
) -> SurvivalReport {
    let m = ctx.modulus();
    let rho = ctx.rho();
    let survived = (0..trials)
        .filter(|&i| {
            let r = ctx.reduce_sample(&ctx.uniform_oracle(seed, i as u32));
            let eval = |c: &[u64]| c.iter().rev().fold(0, |acc, &x| m.add(m.mul(acc, rho), x));
            region.contains(m.sub(eval(&r.b), m.mul(eval(&r.a), guess)))
        })
        .count();
    let expected = region.cardinality() as f64 / m.value() as f64;
    let standard_error = (expected * (1.0 - expected) / trials as f64).sqrt();
    let rate = survived as f64 / trials as f64;
    SurvivalReport {
        trials,
        survived,
        rate,
        expected,
        standard_error,
        z: (rate - expected) / standard_error,
    }
}
