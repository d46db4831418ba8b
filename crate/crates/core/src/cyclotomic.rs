//! Prime-power cyclotomic polynomials and their closed-form splitting over
//! `F_q` when `q = 1 + p^A u`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{checked_pow, gcd, primitive_roots_of_unity, FieldContext, Modulus};
use crate::poly::Poly;

/// `Phi_{p^n}(x) = sum_{i<p} x^(i p^(n-1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicPoly {
    pub p: u64,
    pub n: u32,
}

/// Builds `Phi_{p^n}`.
pub fn cyclotomic_poly(p: u64, n: u32) -> Result<CyclotomicPoly> {
    if !crate::field::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    checked_pow(p, n)?;
    Ok(CyclotomicPoly { p, n })
}

impl CyclotomicPoly {
    /// `m = p^n`
    pub fn conductor(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// `N = phi(p^n) = p^(n-1)(p-1)`
    pub fn degree(&self) -> usize {
        (self.p.pow(self.n - 1) * (self.p - 1)) as usize
    }

    /// Spacing `p^(n-1)` between the nonzero coefficients.
    pub fn stride(&self) -> usize {
        self.p.pow(self.n - 1) as usize
    }

    /// Integer coefficients (all 0 or 1), ascending.
    pub fn coefficients(&self) -> Vec<u64> {
        let mut c = vec![0; self.degree() + 1];
        for i in 0..self.p as usize {
            c[i * self.stride()] = 1;
        }
        c
    }

    pub fn reduce(&self, modulus: Modulus) -> Poly {
        Poly::new(self.coefficients(), modulus)
    }
}

impl fmt::Display for CyclotomicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stride = self.stride();
        let terms: Vec<String> = (0..self.p as usize)
            .rev()
            .map(|i| match i * stride {
                0 => "1".to_string(),
                1 => "x".to_string(),
                k => format!("x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// The factorization `Phi_{p^n} = prod_{rho} (x^(p^(n-A)) - rho)` stored by
/// root constants only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclotomicFactorization {
    pub field: FieldContext,
    pub n: u32,
    /// One primitive `p^A`-th root of unity per factor, in generator-power order.
    pub roots: Vec<u64>,
}

impl CyclotomicFactorization {
    /// Degree `p^(n-A)` of every factor.
    pub fn factor_degree(&self) -> usize {
        self.field.p().pow(self.n - self.field.a()) as usize
    }

    pub fn cyclotomic(&self) -> CyclotomicPoly {
        CyclotomicPoly {
            p: self.field.p(),
            n: self.n,
        }
    }

    pub fn factor(&self, rho: u64) -> Poly {
        Poly::binomial(self.factor_degree(), rho, self.field.modulus())
    }

    pub fn factors(&self) -> Vec<Poly> {
        self.roots.iter().map(|&r| self.factor(r)).collect()
    }

    /// Constant terms `q - rho` of the factors, in root order.
    pub fn constant_terms(&self) -> Vec<u64> {
        let m = self.field.modulus();
        self.roots.iter().map(|&r| m.neg(r)).collect()
    }

    /// Multiplies the binomials back together and compares against `Phi_{p^n} mod q`.
    pub fn verify_closure(&self) -> Result<bool> {
        let m = self.field.modulus();
        let product = self
            .factors()
            .iter()
            .try_fold(Poly::one(m), |acc, f| acc.mul(f))?;
        Ok(product == self.cyclotomic().reduce(m))
    }
}

impl fmt::Display for CyclotomicFactorization {
    /// Product form, e.g. `(x^256 + 11937)(x^256 + 12092)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.factor_degree();
        for c in self.constant_terms() {
            match (d, c) {
                (1, 0) => write!(f, "(x)")?,
                (1, c) => write!(f, "(x + {c})")?,
                (d, 0) => write!(f, "(x^{d})")?,
                (d, c) => write!(f, "(x^{d} + {c})")?,
            }
        }
        Ok(())
    }
}

/// Factors `Phi_{p^n}` over `F_q` in closed form and checks the product.
pub fn factor_prime_power_cyclotomic(
    ctx: &FieldContext,
    n: u32,
) -> Result<CyclotomicFactorization> {
    if n <= ctx.a() {
        return Err(Error::InvalidParams(format!(
            "need n > A, got n = {n}, A = {}",
            ctx.a()
        )));
    }
    checked_pow(ctx.p(), n)?;
    let fact = CyclotomicFactorization {
        field: *ctx,
        n,
        roots: primitive_roots_of_unity(ctx),
    };
    if !fact.verify_closure()? {
        return Err(Error::InvalidParams(format!(
            "product of binomials does not reproduce Phi_{}^{} mod {}",
            ctx.p(),
            n,
            ctx.q()
        )));
    }
    Ok(fact)
}

/// Largest degree accepted by [`brute_irreducibility_check`].
pub const MAX_BRUTE_DEGREE: usize = 64;

/// Irreducibility over `F_q` via `gcd(f, x^(q^i) - x) = 1` for all `i <= deg/2`.
pub fn brute_irreducibility_check(f: &Poly) -> Result<bool> {
    let deg = f
        .degree()
        .ok_or_else(|| Error::InvalidParams("zero polynomial".into()))?;
    if deg > MAX_BRUTE_DEGREE {
        return Err(Error::DegreeGuard {
            degree: deg,
            max: MAX_BRUTE_DEGREE,
        });
    }
    if deg == 0 {
        return Ok(false);
    }
    let m = f.modulus();
    let f = f.monic()?;
    let x = Poly::monomial(1, m);
    let mut frob = x.clone(); // x^(q^i) mod f
    for _ in 1..=deg / 2 {
        frob = frob.pow_mod(m.value(), &f)?;
        let g = f.gcd(&frob.sub(&x)?)?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x^(p^(n-k-A)) - rho^v` for `gcd(v, p) = 1`, irreducible over `F_q` for every `k < n - A`.
pub fn tower_binomial(fact: &CyclotomicFactorization, rho: u64, v: u64, k: u32) -> Result<Poly> {
    let p = fact.field.p();
    if gcd(v, p) != 1 || k >= fact.n - fact.field.a() {
        return Err(Error::InvalidParams(format!(
            "need gcd(v, p) = 1 and k < n - A, got v = {v}, k = {k}"
        )));
    }
    let m = fact.field.modulus();
    let deg = p.pow(fact.n - k - fact.field.a()) as usize;
    Ok(Poly::binomial(deg, m.pow(rho, v), m))
}
