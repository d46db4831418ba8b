//! Library side of the `plwe` command-line driver. Each function returns a
//! serializable report with a human-readable `Display`.

use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::Serialize;

use crate::attack::{algorithm2, build_sigma, mult_budget, success_probability, MultBudget, Verdict};
use crate::error::Result;
use crate::experiment::ExperimentReport;
use crate::field::Modulus;
use crate::params::AttackParams;
use crate::poly::Poly;
use crate::polyeval::{automorphic_bound, eval_with, Strategy};
use crate::ring::NoiseModel;
use crate::rng::{stream, Stream};
use crate::samplefile::{SampleHeader, SampleSetFile};

#[derive(Clone, Debug, Serialize)]
pub struct ParamsSummary {
    pub p: u64,
    pub n: u32,
    pub a: u32,
    pub q: u64,
    pub u: u64,
    pub phi: String,
    pub conductor: u64,
    pub dimension: usize,
    pub factors: String,
    pub factor_constants: Vec<u64>,
    pub roots: Vec<u64>,
    pub rho: u64,
    pub rho_centered: i64,
}

pub fn params_summary(p: u64, n: u32, a: u32, q_min: u64, root_index: usize) -> Result<ParamsSummary> {
    let (params, fact) = AttackParams::search(p, n, a, q_min, NoiseModel::std_dev(0.0), root_index)?;
    let cyc = fact.cyclotomic();
    Ok(ParamsSummary {
        p,
        n,
        a,
        q: params.q(),
        u: params.u(),
        phi: cyc.to_string(),
        conductor: cyc.conductor(),
        dimension: cyc.degree(),
        factors: fact.to_string(),
        factor_constants: fact.constant_terms(),
        roots: fact.roots.clone(),
        rho: params.rho,
        rho_centered: params.field.modulus().centered(params.rho),
    })
}

impl fmt::Display for ParamsSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p        {}", self.p)?;
        writeln!(f, "n        {}", self.n)?;
        writeln!(f, "A        {}", self.a)?;
        writeln!(f, "q        {}  (u = {})", self.q, self.u)?;
        writeln!(f, "Phi      {}", self.phi)?;
        writeln!(f, "m        {}", self.conductor)?;
        writeln!(f, "N        {}", self.dimension)?;
        writeln!(f, "factors  {}", self.factors)?;
        write!(f, "rho      {} ({})", self.rho, self.rho_centered)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AttackOutcome {
    pub header: SampleHeader,
    pub cutoff: f64,
    pub sigma_cardinality: usize,
    pub analytic_success: f64,
    pub budget: MultBudget,
    pub verdict: Verdict,
}

/// Reads a sample file, builds the smallness region and runs the trace attack.
pub fn attack_file(path: &Path, cutoff: f64) -> Result<AttackOutcome> {
    let set = SampleSetFile::read(path)?;
    let params = set.header.params()?;
    let ctx = params.trace_context()?;
    let region = build_sigma(params.p(), params.sigma(), cutoff, params.rho, params.field.modulus())?;
    let verdict = algorithm2(&set.samples, &region, &ctx)?;
    let m = set.samples.len() as u32;
    Ok(AttackOutcome {
        cutoff,
        sigma_cardinality: region.cardinality(),
        analytic_success: success_probability(region.cardinality(), params.q(), m),
        budget: mult_budget(params.p(), params.q(), m as u64),
        verdict,
        header: set.header,
    })
}

impl fmt::Display for AttackOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verdict            {}", self.verdict.kind)?;
        writeln!(f, "survivors          {:?}", self.verdict.survivors)?;
        writeln!(f, "oracle (file)      {}", self.header.oracle)?;
        writeln!(f, "samples            {}", self.header.count)?;
        writeln!(f, "|Sigma|            {} (cutoff {})", self.sigma_cardinality, self.cutoff)?;
        writeln!(f, "1 - (|Sigma|/q)^M  {:.6e}", self.analytic_success)?;
        writeln!(
            f,
            "mults              {} (setup {}, direct bound {}, automorphic budget {})",
            self.verdict.mult_count, self.verdict.setup_mults, self.budget.direct, self.budget.automorphic
        )?;
        Ok(())
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "p={} n={} A={} q={} u={} rho={} N={} sigma={} cutoff={} M={} ntests={} seed={}",
            c.p, c.n, c.a, self.q, self.u, self.rho, self.dimension, c.noise.sigma, c.cutoff, c.samples, c.ntests, c.seed
        )?;
        writeln!(f, "|Sigma| = {}", self.sigma_cardinality)?;
        writeln!(f, "1 - (|Sigma|/q)^M = {:.6e}", self.analytic_success)?;
        writeln!(
            f,
            "mult budget: direct {} / automorphic {}",
            self.budget.direct, self.budget.automorphic
        )?;
        writeln!(f, "{:<8} {:>4} {:<20} {:>9} {:>10} {:>12} {:>12}  fail", "oracle", "run", "verdict", "survivors", "mults", "gen_ms", "attack_ms")?;
        for r in &self.runs {
            writeln!(
                f,
                "{:<8} {:>4} {:<20} {:>9} {:>10} {:>12.3} {:>12.3}  {}",
                r.oracle.to_string(),
                r.run,
                r.verdict.to_string(),
                r.survivors,
                r.mult_count,
                r.gen_nanos as f64 / 1e6,
                r.attack_nanos as f64 / 1e6,
                if r.failed { "yes" } else { "no" }
            )?;
        }
        writeln!(f, "PLWE-oracle failures:    {}/{}", self.plwe_failures, c.ntests)?;
        write!(f, "uniform-oracle failures: {}/{}", self.uniform_failures, c.ntests)
    }
}

pub const BENCH_CSV_HEADER: &str = "strategy,degree,mults,ers_bound,nanos";

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub strategy: Strategy,
    pub degree: usize,
    pub mults: u64,
    pub ers_bound: f64,
    pub nanos: u128,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{:.3},{}",
            self.strategy, self.degree, self.mults, self.ers_bound, self.nanos
        )
    }
}

/// Times each strategy on `trials` random polynomials of the given degree.
/// Every row records the strategy's product count (a function of degree
/// only) and the summed wall time; values are cross-checked between
/// strategies on each trial.
pub fn bench(strategies: &[Strategy], degree: usize, trials: u32, modulus: Modulus, seed: u64) -> Result<Vec<BenchRow>> {
    let q = modulus.value();
    let mut rng = stream(seed, Stream::Aux(3));
    let mut rows: Vec<BenchRow> = strategies
        .iter()
        .map(|&s| BenchRow {
            strategy: s,
            degree,
            mults: 0,
            ers_bound: automorphic_bound(degree, q, 1),
            nanos: 0,
        })
        .collect();
    for _ in 0..trials {
        let mut coeffs: Vec<u64> = (0..=degree).map(|_| rng.random_range(0..q)).collect();
        coeffs[degree] = rng.random_range(1..q);
        let f = Poly::new(coeffs, modulus);
        let x = rng.random_range(0..q);
        let mut reference = None;
        for row in rows.iter_mut() {
            let (value, report) = eval_with(row.strategy, &f, x);
            if *reference.get_or_insert(value) != value {
                return Err(crate::error::Error::InvalidParams(
                    "evaluation strategies disagree".into(),
                ));
            }
            row.mults = report.multiplications;
            row.nanos += report.wall_time.as_nanos();
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_small_instance() {
        let s = params_summary(2, 4, 2, 20, 0).unwrap();
        assert_eq!(s.q, 29);
        assert_eq!(s.factors, "(x^4 + 17)(x^4 + 12)");
        assert_eq!(s.phi, "x^8 + 1");
    }

    #[test]
    fn bench_rows() {
        let m = Modulus::new(24029).unwrap();
        let rows = bench(&[Strategy::Horner, Strategy::Block], 512, 3, m, 1).unwrap();
        assert!(rows[1].mults < rows[0].mults);
        let zero = bench(&[Strategy::Horner, Strategy::Block], 0, 2, m, 1).unwrap();
        assert!(zero.iter().all(|r| r.mults == 0));
        assert_eq!(BENCH_CSV_HEADER, "strategy,degree,mults,ers_bound,nanos");
        assert!(rows[0].csv().starts_with("horner,512,512,"));
    }
}
