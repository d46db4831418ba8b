//! The quotient ring `R_q = F_q[x]/(Phi_{p^n})` and its samplers.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{checked_pow, is_prime, Modulus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingContext {
    modulus: Modulus,
    p: u64,
    n: u32,
}

impl RingContext {
    pub fn new(modulus: Modulus, p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        checked_pow(p, n)?;
        Ok(Self { modulus, p, n })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Ring dimension `N = p^(n-1)(p-1)`.
    pub fn dimension(&self) -> usize {
        (self.p.pow(self.n - 1) * (self.p - 1)) as usize
    }

    fn stride(&self) -> usize {
        self.p.pow(self.n - 1) as usize
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            ctx: *self,
            coeffs: vec![0; self.dimension()],
        }
    }

    pub fn one(&self) -> RingElement {
        self.monomial(0)
    }

    /// `x^k` reduced into `R_q`.
    pub fn monomial(&self, k: usize) -> RingElement {
        let mut wide = vec![0u64; k.max(self.dimension() - 1) + 1];
        wide[k] = 1;
        self.reduce_wide(wide)
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<RingElement> {
        if coeffs.len() != self.dimension() {
            return Err(Error::InvalidParams(format!(
                "expected {} coefficients, got {}",
                self.dimension(),
                coeffs.len()
            )));
        }
        let coeffs = coeffs.into_iter().map(|c| self.modulus.reduce(c)).collect();
        Ok(RingElement { ctx: *self, coeffs })
    }

    pub fn from_i64(&self, coeffs: &[i64]) -> Result<RingElement> {
        self.element(coeffs.iter().map(|&c| self.modulus.from_i64(c)).collect())
    }

    /// Reduces an arbitrary-length coefficient vector modulo `Phi_{p^n}` using
    /// `x^N = -sum_{i=0}^{p-2} x^(i p^(n-1))`.
    fn reduce_wide(&self, mut wide: Vec<u64>) -> RingElement {
        let m = self.modulus;
        let big_n = self.dimension();
        let stride = self.stride();
        for k in (big_n..wide.len()).rev() {
            let c = wide[k];
            if c == 0 {
                continue;
            }
            wide[k] = 0;
            let base = k - big_n;
            for i in 0..(self.p as usize - 1) {
                let idx = base + i * stride;
                wide[idx] = m.sub(wide[idx], c);
            }
        }
        wide.resize(big_n, 0);
        RingElement {
            ctx: *self,
            coeffs: wide,
        }
    }

    /// Coefficients i.i.d. uniform on `F_q`.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        let q = self.modulus.value();
        RingElement {
            ctx: *self,
            coeffs: (0..self.dimension()).map(|_| rng.random_range(0..q)).collect(),
        }
    }

    /// Coefficients `round(N(0, s^2))` reduced mod `q`, with `s` the standard
    /// deviation given by `noise`.
    pub fn sample_gaussian<R: Rng + ?Sized>(&self, noise: &NoiseModel, rng: &mut R) -> Result<RingElement> {
        let raw = sample_gaussian_integers(noise, self.dimension(), rng)?;
        self.from_i64(&raw)
    }
}

/// How the `sigma` parameter is read when sampling errors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaMeaning {
    /// `sigma` is the standard deviation.
    #[default]
    StdDev,
    /// `sigma` is the variance; the standard deviation is `sqrt(sigma)`.
    Variance,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub sigma: f64,
    pub meaning: SigmaMeaning,
}

impl NoiseModel {
    pub fn std_dev(sigma: f64) -> Self {
        Self {
            sigma,
            meaning: SigmaMeaning::StdDev,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "sigma must be finite and non-negative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    pub fn standard_deviation(&self) -> f64 {
        match self.meaning {
            SigmaMeaning::StdDev => self.sigma,
            SigmaMeaning::Variance => self.sigma.sqrt(),
        }
    }
}

/// Rounded continuous Gaussian integers, no tail cut. A zero standard
/// deviation yields all zeros.
pub fn sample_gaussian_integers<R: Rng + ?Sized>(
    noise: &NoiseModel,
    count: usize,
    rng: &mut R,
) -> Result<Vec<i64>> {
    noise.validate()?;
    let s = noise.standard_deviation();
    if s == 0.0 {
        return Ok(vec![0; count]);
    }
    let normal = Normal::new(0.0, s).map_err(|e| Error::InvalidParams(e.to_string()))?;
    Ok((0..count).map(|_| normal.sample(rng).round() as i64).collect())
}

/// Dense residue of `R_q`, exactly `N` canonical coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    ctx: RingContext,
    coeffs: Vec<u64>,
}

impl RingElement {
    pub fn context(&self) -> &RingContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.ctx.modulus;
        Ok(Self {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| m.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.ctx.modulus;
        Ok(Self {
            ctx: self.ctx,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| m.sub(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.ctx.modulus;
        Self {
            ctx: self.ctx,
            coeffs: self.coeffs.iter().map(|&a| m.mul(a, c)).collect(),
        }
    }

    /// Schoolbook product followed by reduction modulo `Phi_{p^n}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.ctx.modulus;
        let big_n = self.ctx.dimension();
        let mut wide = vec![0u64; 2 * big_n - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                wide[i + j] = m.add(wide[i + j], m.mul(a, b));
            }
        }
        Ok(self.ctx.reduce_wide(wide))
    }
}
