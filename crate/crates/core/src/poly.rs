use std::fmt;

use crate::error::{Error, Result};
use crate::field::Modulus;

/// Dense univariate polynomial over `F_q`, coefficients in ascending degree.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<u64>,
    modulus: Modulus,
}

impl Poly {
    pub fn new(coeffs: Vec<u64>, modulus: Modulus) -> Self {
        let coeffs = coeffs.into_iter().map(|c| modulus.reduce(c)).collect();
        let mut p = Self { coeffs, modulus };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64], modulus: Modulus) -> Self {
        Self::new(coeffs.iter().map(|&c| modulus.from_i64(c)).collect(), modulus)
    }

    pub fn zero(modulus: Modulus) -> Self {
        Self { coeffs: Vec::new(), modulus }
    }

    pub fn one(modulus: Modulus) -> Self {
        Self::new(vec![1], modulus)
    }

    /// `x^k`
    pub fn monomial(k: usize, modulus: Modulus) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1;
        Self { coeffs, modulus }
    }

    /// `x^k - c`
    pub fn binomial(k: usize, c: u64, modulus: Modulus) -> Self {
        let mut p = Self::monomial(k, modulus);
        p.coeffs[0] = modulus.sub(p.coeffs[0], modulus.reduce(c));
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.value(),
                right: other.modulus.value(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.modulus;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                m.add(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Ok(Self::new(coeffs, m))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.modulus;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                m.sub(
                    self.coeffs.get(i).copied().unwrap_or(0),
                    other.coeffs.get(i).copied().unwrap_or(0),
                )
            })
            .collect();
        Ok(Self::new(coeffs, m))
    }

    /// Schoolbook product; zero coefficients are skipped so sparse factors
    /// (binomials) multiply in time proportional to their support.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.modulus));
        }
        let m = self.modulus;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    out[i + j] = m.add(out[i + j], m.mul(a, b));
                }
            }
        }
        Ok(Self::new(out, m))
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        Self::new(self.coeffs.iter().map(|&a| m.mul(a, c)).collect(), m)
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check(divisor)?;
        let m = self.modulus;
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidParams("division by the zero polynomial".into()))?;
        let lead_inv = m.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(m), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = m.mul(rem[k], lead_inv);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = m.sub(rem[idx], m.mul(c, b));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quot, m), Self::new(rem, m)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        Ok(self.scale(self.modulus.inv(self.leading())?))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^exp mod modulus_poly`
    pub fn pow_mod(&self, mut exp: u64, modulus_poly: &Self) -> Result<Self> {
        let mut result = Self::one(self.modulus).rem(modulus_poly)?;
        let mut base = self.rem(modulus_poly)?;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base)?.rem(modulus_poly)?;
            }
            base = base.mul(&base)?.rem(modulus_poly)?;
            exp >>= 1;
        }
        Ok(result)
    }

    /// Horner evaluation at a point of `F_q`.
    pub fn eval(&self, x: u64) -> u64 {
        let m = self.modulus;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| m.add(m.mul(acc, x), c))
    }
}

impl fmt::Display for Poly {
    /// Descending-degree rendering with centered coefficients, e.g.
    /// `x^256 + 11937`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let v = self.modulus.centered(c);
            let mag = v.unsigned_abs();
            if first {
                if v < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if v < 0 { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = mag != 1 || k == 0;
            match (k, show_coeff) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "{mag}*x")?,
                (1, false) => write!(f, "x")?,
                (_, true) => write!(f, "{mag}*x^{k}")?,
                (_, false) => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}
