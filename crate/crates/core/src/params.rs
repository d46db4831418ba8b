use serde::Serialize;

use crate::cyclotomic::{factor_prime_power_cyclotomic, CyclotomicFactorization};
use crate::error::{Error, Result};
use crate::field::{find_attack_prime, FieldContext};
use crate::ring::NoiseModel;
use crate::subring::TraceContext;

/// One attack instance `(p, n, A, q, u, sigma, rho)`; every derived size
/// comes from here.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AttackParams {
    pub field: FieldContext,
    pub n: u32,
    pub rho: u64,
    pub noise: NoiseModel,
}

impl AttackParams {
    /// Finds the attack prime, factors `Phi_{p^n}` and picks the root at
    /// `root_index` (in generator-power order) as `rho`.
    pub fn search(
        p: u64,
        n: u32,
        a: u32,
        q_min: u64,
        noise: NoiseModel,
        root_index: usize,
    ) -> Result<(Self, CyclotomicFactorization)> {
        let field = find_attack_prime(p, n, a, q_min)?;
        let fact = factor_prime_power_cyclotomic(&field, n)?;
        let rho = *fact.roots.get(root_index).ok_or_else(|| {
            Error::InvalidParams(format!(
                "root index {root_index} out of range (have {} roots)",
                fact.roots.len()
            ))
        })?;
        let params = Self { field, n, rho, noise };
        params.validate()?;
        Ok((params, fact))
    }

    /// Explicit instance, e.g. as recorded in a sample-file header.
    pub fn explicit(q: u64, p: u64, n: u32, a: u32, rho: u64, noise: NoiseModel) -> Result<Self> {
        let field = FieldContext::new(q, p, a)?;
        if n <= a {
            return Err(Error::InvalidParams(format!("need n > A, got n = {n}, A = {a}")));
        }
        let params = Self { field, n, rho, noise };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        self.noise.validate()?;
        self.trace_context().map(|_| ())
    }

    pub fn trace_context(&self) -> Result<TraceContext> {
        TraceContext::new(&self.field, self.n, self.rho)
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn a(&self) -> u32 {
        self.field.a()
    }

    pub fn u(&self) -> u64 {
        self.field.u()
    }

    pub fn sigma(&self) -> f64 {
        self.noise.sigma
    }

    /// `N = p^(n-1)(p-1)`
    pub fn dimension(&self) -> usize {
        (self.p().pow(self.n - 1) * (self.p() - 1)) as usize
    }
}
