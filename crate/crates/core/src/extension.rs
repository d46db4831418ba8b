//! The extension `F_{q^d} = F_q[x]/(x^d - rho)` and its trace to `F_q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Modulus;

/// Context of the extension field: modulus, degree `d` and the constant `rho`
/// with `alpha^d = rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtField {
    modulus: Modulus,
    degree: usize,
    rho: u64,
}

/// Largest degree the Frobenius trace oracle will handle.
pub const MAX_ORACLE_DEGREE: usize = 16;

impl ExtField {
    /// No irreducibility check is made here; callers obtain `rho` from a
    /// cyclotomic factorization where `x^d - rho` is irreducible.
    pub fn new(modulus: Modulus, degree: usize, rho: u64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidParams("extension degree must be positive".into()));
        }
        let rho = modulus.reduce(rho);
        if rho == 0 {
            return Err(Error::InvalidParams("rho must be nonzero".into()));
        }
        Ok(Self { modulus, degree, rho })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rho(&self) -> u64 {
        self.rho
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<ExtElement> {
        if coeffs.len() != self.degree {
            return Err(Error::InvalidParams(format!(
                "expected {} coefficients, got {}",
                self.degree,
                coeffs.len()
            )));
        }
        let coeffs = coeffs.into_iter().map(|c| self.modulus.reduce(c)).collect();
        Ok(ExtElement { field: *self, coeffs })
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement {
            field: *self,
            coeffs: vec![0; self.degree],
        }
    }

    /// Embeds a base-field scalar.
    pub fn scalar(&self, c: u64) -> ExtElement {
        let mut e = self.zero();
        e.coeffs[0] = self.modulus.reduce(c);
        e
    }

    /// `alpha^k`, reduced with `alpha^d = rho`.
    pub fn alpha_pow(&self, k: usize) -> ExtElement {
        let mut e = self.zero();
        let wraps = (k / self.degree) as u64;
        e.coeffs[k % self.degree] = self.modulus.pow(self.rho, wraps);
        e
    }
}

/// Element of `F_{q^d}` in the power basis `1, alpha, ..., alpha^(d-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement {
    field: ExtField,
    coeffs: Vec<u64>,
}

impl ExtElement {
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Returns the constant coefficient if every other one vanishes.
    pub fn as_base(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then(|| self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.field.modulus;
        Ok(Self {
            field: self.field,
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
        let m = self.field.modulus;
        Ok(Self {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| m.sub(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.field.modulus;
        Self {
            field: self.field,
            coeffs: self.coeffs.iter().map(|&a| m.mul(a, c)).collect(),
        }
    }

    /// Schoolbook product with the fold `alpha^(d+k) = rho alpha^k`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.field.modulus;
        let d = self.field.degree;
        let mut wide = vec![0u64; 2 * d - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                wide[i + j] = m.add(wide[i + j], m.mul(a, b));
            }
        }
        let mut coeffs = wide[..d].to_vec();
        for k in d..2 * d - 1 {
            coeffs[k - d] = m.add(coeffs[k - d], m.mul(wide[k], self.field.rho));
        }
        Ok(Self { field: self.field, coeffs })
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut result = self.field.scalar(1);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            exp >>= 1;
        }
        result
    }

    /// Closed-form trace `d * a_0`: every `alpha^i` with `0 < i < d` has
    /// trace zero because its minimal polynomial is a binomial.
    pub fn trace_fast(&self) -> u64 {
        let m = self.field.modulus;
        m.mul(m.reduce(self.field.degree as u64), self.coeffs[0])
    }

    /// Trace as the sum of the Frobenius conjugates `theta^(q^i)`, `i < d`.
    pub fn trace_frobenius_oracle(&self) -> Result<u64> {
        let d = self.field.degree;
        if d > MAX_ORACLE_DEGREE {
            return Err(Error::DegreeGuard {
                degree: d,
                max: MAX_ORACLE_DEGREE,
            });
        }
        let q = self.field.modulus.value();
        let mut conj = self.clone();
        let mut sum = self.field.zero();
        for _ in 0..d {
            sum = sum.add(&conj)?;
            conj = conj.pow(q);
        }
        Ok(sum
            .as_base()
            .expect("field trace always lands in the base field"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn field(q: u64, d: usize, rho: u64) -> ExtField {
        ExtField::new(Modulus::new(q).unwrap(), d, rho).unwrap()
    }

    #[test]
    fn defining_relation() {
        let f = field(29, 4, 12);
        let prod = f.alpha_pow(3).mul(&f.alpha_pow(1)).unwrap();
        assert_eq!(prod, f.scalar(12));
        let x = f.element(vec![3, 1, 4, 1]).unwrap();
        assert_eq!(x.mul(&f.scalar(1)).unwrap(), x);
    }

    #[test]
    fn difference_of_squares() {
        let f = field(29, 4, 12);
        let a = f.element(vec![1, 1, 0, 0]).unwrap();
        let b = f.element(vec![28, 1, 0, 0]).unwrap();
        assert_eq!(a.mul(&b).unwrap().coeffs(), &[28, 0, 1, 0]);
    }

    #[test]
    fn trace_examples() {
        let f = field(29, 4, 12);
        assert_eq!(f.alpha_pow(1).trace_fast(), 0);
        assert_eq!(f.scalar(1).trace_fast(), 4);
        assert_eq!(f.alpha_pow(4).trace_fast(), 19);
        assert_eq!(f.alpha_pow(4).trace_frobenius_oracle().unwrap(), 19);

        let g = field(13, 2, 5);
        assert_eq!(Modulus::new(13).unwrap().pow(5, 6), 12);
        assert_eq!(g.alpha_pow(1).trace_frobenius_oracle().unwrap(), 0);
        assert_eq!(g.scalar(1).trace_frobenius_oracle().unwrap(), 2);
    }

    #[test]
    fn exhaustive_trace_equivalence_f13_squared() {
        let f = field(13, 2, 5);
        for a0 in 0..13 {
            for a1 in 0..13 {
                let x = f.element(vec![a0, a1]).unwrap();
                assert_eq!(x.trace_fast(), x.trace_frobenius_oracle().unwrap());
            }
        }
    }

    #[test]
    fn trace_vanishes_on_nonconstant_powers() {
        for (q, d, rho) in [(29u64, 4usize, 12u64), (29, 4, 17), (13, 2, 5), (17, 8, 3), (37, 9, 16)] {
            let f = field(q, d, rho);
            for i in 1..d {
                assert_eq!(f.alpha_pow(i).trace_frobenius_oracle().unwrap(), 0, "q={q} i={i}");
            }
        }
    }

    #[test]
    fn guards_and_mismatch() {
        let big = field(97, 17, 5);
        assert!(matches!(
            big.scalar(1).trace_frobenius_oracle(),
            Err(Error::DegreeGuard { degree: 17, .. })
        ));
        let a = field(29, 4, 12).scalar(1);
        let b = field(29, 4, 17).scalar(1);
        assert!(matches!(a.mul(&b), Err(Error::ContextMismatch)));
        assert!(field(29, 4, 12).element(vec![1, 2]).is_err());
    }

    proptest! {
        #[test]
        fn fast_trace_matches_oracle(c in proptest::collection::vec(0u64..29, 4)) {
            let f = field(29, 4, 12);
            let x = f.element(c).unwrap();
            prop_assert_eq!(x.trace_fast(), x.trace_frobenius_oracle().unwrap());
        }

        #[test]
        fn trace_is_linear(
            x in proptest::collection::vec(0u64..29, 4),
            y in proptest::collection::vec(0u64..29, 4),
            l in 0u64..29,
            mu in 0u64..29,
        ) {
            let f = field(29, 4, 12);
            let m = f.modulus();
            let x = f.element(x).unwrap();
            let y = f.element(y).unwrap();
            let lhs = x.scale(l).add(&y.scale(mu)).unwrap().trace_frobenius_oracle().unwrap();
            let rhs = m.add(
                m.mul(l, x.trace_frobenius_oracle().unwrap()),
                m.mul(mu, y.trace_frobenius_oracle().unwrap()),
            );
            prop_assert_eq!(lhs, rhs);
        }
    }
}
