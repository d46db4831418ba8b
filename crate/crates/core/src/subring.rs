//! The attack's view of `R_q`: evaluation at a root `alpha` of
//! `x^(p^(n-2)) - rho`, the subring `R_q,0` of residues with `a(alpha)` in
//! `F_q`, the two sample oracles, and the projection onto
//! `R'_q = F_q[x]/(Phi_{p^2})`.
//!
//! Coefficient `i` of a residue is split as `i = v d + j` with
//! `d = p^(n-2)`, `0 <= j < d` and `0 <= v < p(p-1)`. Since `alpha^d = rho`,
//! block `j` of `a(alpha)` is `sum_v a_(v d + j) rho^v`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{ExtElement, ExtField};
use crate::field::{multiplicative_order, FieldContext, Modulus};
use crate::ring::{NoiseModel, RingContext, RingElement};
use crate::rng::{stream, Stream};

/// Ring, root and extension field of one attack instance (`A = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceContext {
    ring: RingContext,
    ext: ExtField,
    rho: u64,
}

impl TraceContext {
    pub fn new(field: &FieldContext, n: u32, rho: u64) -> Result<Self> {
        if field.a() != 2 {
            return Err(Error::InvalidParams(format!(
                "the trace attack is defined for A = 2, got A = {}",
                field.a()
            )));
        }
        if n <= 2 {
            return Err(Error::InvalidParams(format!("need n > 2, got {n}")));
        }
        let m = field.modulus();
        let p = field.p();
        if multiplicative_order(m, rho) != Some(p * p) {
            return Err(Error::InvalidParams(format!(
                "rho = {rho} is not a primitive {}-th root of unity mod {}",
                p * p,
                m.value()
            )));
        }
        let ring = RingContext::new(m, p, n)?;
        let ext = ExtField::new(m, p.pow(n - 2) as usize, rho)?;
        Ok(Self { ring, ext, rho: m.reduce(rho) })
    }

    pub fn ring(&self) -> &RingContext {
        &self.ring
    }

    pub fn ext(&self) -> &ExtField {
        &self.ext
    }

    pub fn modulus(&self) -> Modulus {
        self.ring.modulus()
    }

    pub fn rho(&self) -> u64 {
        self.rho
    }

    /// `d = p^(n-2)`, the extension degree and coefficient stride.
    pub fn stride(&self) -> usize {
        self.ext.degree()
    }

    /// `p(p-1)`, the number of coefficients per block.
    pub fn blocks(&self) -> usize {
        let p = self.ring.p() as usize;
        p * (p - 1)
    }

    /// `dim R_q,0 = N - (d - 1)`.
    pub fn subring_dimension(&self) -> usize {
        self.ring.dimension() - (self.stride() - 1)
    }

    /// `sum_v coeffs[v d + j] rho^v` by Horner, `p(p-1) - 1` products.
    fn block_sum_counted(&self, coeffs: &[u64], j: usize, mults: &mut u64) -> u64 {
        let m = self.modulus();
        let d = self.stride();
        let top = self.blocks() - 1;
        (0..top).rev().fold(coeffs[top * d + j], |acc, v| {
            *mults += 1;
            m.add(m.mul(acc, self.rho), coeffs[v * d + j])
        })
    }

    fn block_sum(&self, coeffs: &[u64], j: usize) -> u64 {
        self.block_sum_counted(coeffs, j, &mut 0)
    }

    /// `a(alpha)` in the power basis of the extension.
    pub fn eval_at_alpha(&self, a: &RingElement) -> Result<ExtElement> {
        self.eval_at_alpha_counted(a, &mut 0)
    }

    /// As [`Self::eval_at_alpha`], adding the number of `F_q` products to `mults`.
    pub fn eval_at_alpha_counted(&self, a: &RingElement, mults: &mut u64) -> Result<ExtElement> {
        self.check(a)?;
        let coeffs = (0..self.stride())
            .map(|j| self.block_sum_counted(a.coeffs(), j, mults))
            .collect();
        self.ext.element(coeffs)
    }

    /// `a(alpha)` when it lies in `F_q`, computed from block 0 alone.
    pub fn alpha_value(&self, a: &RingElement) -> Result<Option<u64>> {
        self.check(a)?;
        Ok(self.is_member_unchecked(a).then(|| self.block_sum(a.coeffs(), 0)))
    }

    fn check(&self, a: &RingElement) -> Result<()> {
        if a.context() != &self.ring {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    fn is_member_unchecked(&self, a: &RingElement) -> bool {
        (1..self.stride()).all(|j| self.block_sum(a.coeffs(), j) == 0)
    }

    /// `a` is in `R_q,0` iff every block `j >= 1` sums to zero.
    pub fn membership_r0(&self, a: &RingElement) -> bool {
        a.context() == &self.ring && self.is_member_unchecked(a)
    }

    /// Uniform element of `R_q,0`: block 0 is free, and in every other block
    /// the last coefficient is solved from the others.
    pub fn sample_uniform_r0<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        let m = self.modulus();
        let q = m.value();
        let d = self.stride();
        let blocks = self.blocks();
        let big_n = self.ring.dimension();
        let last = blocks - 1;
        let mut coeffs = vec![0u64; big_n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            if i % d == 0 || i / d != last {
                *c = rng.random_range(0..q);
            }
        }
        // a_(last d + j) = -rho^(-last) sum_{v<last} a_(v d + j) rho^v
        let scale = m.neg(m.inv(m.pow(self.rho, last as u64)).expect("rho is a unit"));
        for j in 1..d {
            let partial = (0..last)
                .rev()
                .fold(0, |acc, v| m.add(m.mul(acc, self.rho), coeffs[v * d + j]));
            coeffs[last * d + j] = m.mul(scale, partial);
        }
        self.ring.element(coeffs).expect("dimension matches")
    }

    /// Rows of the linear map whose kernel is `R_q,0`: one row per block
    /// `j = 1..d`, with `rho^v` at column `v d + j`.
    pub fn constraint_matrix(&self) -> Vec<Vec<u64>> {
        let m = self.modulus();
        let d = self.stride();
        (1..d)
            .map(|j| {
                let mut row = vec![0u64; self.ring.dimension()];
                for v in 0..self.blocks() {
                    row[v * d + j] = m.pow(self.rho, v as u64);
                }
                row
            })
            .collect()
    }

    /// `Tr(a(alpha) s)` from the closed-form double sum
    /// `d a_0 s_0 + d sum_{v=1}^{p(p-1)} (sum_j s_j a_(v d - j)) rho^v`.
    pub fn general_trace_pairing(&self, a: &RingElement, s: &ExtElement) -> Result<u64> {
        self.check(a)?;
        if s.field() != &self.ext {
            return Err(Error::ContextMismatch);
        }
        let m = self.modulus();
        let d = self.stride();
        let big_n = self.ring.dimension();
        let (ac, sc) = (a.coeffs(), s.coeffs());
        let mut total = m.mul(ac[0], sc[0]);
        let mut rho_v = 1;
        for v in 1..=self.blocks() {
            rho_v = m.mul(rho_v, self.rho);
            let inner = (0..d)
                .filter(|&j| v * d - j < big_n)
                .fold(0, |acc, j| m.add(acc, m.mul(sc[j], ac[v * d - j])));
            total = m.add(total, m.mul(inner, rho_v));
        }
        Ok(m.mul(m.reduce(d as u64), total))
    }

    /// Projection onto `R'_q`: coefficients at indices `j p^(n-2)`.
    pub fn project(&self, a: &RingElement) -> Vec<u64> {
        let d = self.stride();
        (0..self.blocks()).map(|j| a.coeffs()[j * d]).collect()
    }

    pub fn reduce_sample(&self, s: &Sample) -> ReducedSample {
        ReducedSample {
            a: self.project(&s.a),
            b: self.project(&s.b),
        }
    }

    /// Draws `(a, a s + e)` with `a` uniform on `R_q,0`; the error is
    /// returned alongside for replay checks.
    pub fn plwe_oracle(
        &self,
        secret: &RingElement,
        noise: &NoiseModel,
        seed: u64,
        index: u32,
    ) -> Result<(Sample, RingElement)> {
        self.check(secret)?;
        let a = self.sample_uniform_r0(&mut stream(seed, Stream::Uniform(index)));
        let e = self
            .ring
            .sample_gaussian(noise, &mut stream(seed, Stream::Error(index)))?;
        let b = a.mul(secret)?.add(&e)?;
        let meta = SampleMeta {
            oracle: OracleKind::Plwe,
            seed,
            index,
        };
        Ok((Sample { a, b, meta }, e))
    }

    /// `a` uniform on `R_q,0`, `b` uniform on `R_q`.
    pub fn uniform_oracle(&self, seed: u64, index: u32) -> Sample {
        let a = self.sample_uniform_r0(&mut stream(seed, Stream::Uniform(index)));
        let b = self
            .ring
            .sample_uniform(&mut stream(seed, Stream::UniformB(index)));
        let meta = SampleMeta {
            oracle: OracleKind::Uniform,
            seed,
            index,
        };
        Sample { a, b, meta }
    }

    /// Secret drawn uniformly from `R_q`.
    pub fn sample_secret(&self, seed: u64) -> RingElement {
        self.ring.sample_uniform(&mut stream(seed, Stream::Secret))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Plwe,
    Uniform,
}

impl std::fmt::Display for OracleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OracleKind::Plwe => "plwe",
            OracleKind::Uniform => "uniform",
        })
    }
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plwe" => Ok(OracleKind::Plwe),
            "uniform" => Ok(OracleKind::Uniform),
            other => Err(Error::InvalidParams(format!("unknown oracle '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleMeta {
    pub oracle: OracleKind,
    pub seed: u64,
    pub index: u32,
}

/// A pair `(a, b)` in `R_q,0 x R_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub a: RingElement,
    pub b: RingElement,
    pub meta: SampleMeta,
}

/// A sample projected onto `R'_q`; both vectors have `p(p-1)` entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedSample {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

/// Rank of a matrix over `F_q` by Gaussian elimination.
pub fn rank_mod_q(rows: &[Vec<u64>], m: Modulus) -> usize {
    let mut rows: Vec<Vec<u64>> = rows.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = m.inv(rows[rank][col]).expect("pivot is nonzero");
        for c in rows[rank].iter_mut() {
            *c = m.mul(*c, inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = m.sub(*x, m.mul(f, y));
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::primitive_roots_of_unity;

    fn small() -> TraceContext {
        TraceContext::new(&FieldContext::new(29, 2, 2).unwrap(), 4, 12).unwrap()
    }

    #[test]
    fn membership_examples() {
        let t = small();
        let r = t.ring();
        // support only on multiples of d = 4
        assert!(t.membership_r0(&r.from_i64(&[3, 0, 0, 0, 7, 0, 0, 0]).unwrap()));
        // a = x: constraint a_1 + 12 a_5 = 1
        assert!(!t.membership_r0(&r.monomial(1)));
        // a = x + c x^5 with c = -rho^-1 zeroes it
        let m = t.modulus();
        let c = m.neg(m.inv(12).unwrap());
        let mut coeffs = vec![0; 8];
        coeffs[1] = 1;
        coeffs[5] = c;
        assert!(t.membership_r0(&r.element(coeffs).unwrap()));
    }

    #[test]
    fn uniform_r0_is_in_subring() {
        let t = small();
        let mut rng = stream(3, Stream::Aux(0));
        for _ in 0..200 {
            let a = t.sample_uniform_r0(&mut rng);
            assert!(t.membership_r0(&a));
            let v = t.eval_at_alpha(&a).unwrap();
            assert_eq!(v.as_base(), t.alpha_value(&a).unwrap());
        }
        assert_eq!(t.subring_dimension(), 5);
    }

    #[test]
    fn eval_at_alpha_matches_extension_arithmetic() {
        let t = small();
        let ext = t.ext();
        let mut rng = stream(4, Stream::Aux(0));
        for _ in 0..50 {
            let a = t.ring().sample_uniform(&mut rng);
            let direct = a
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, &c)| ext.alpha_pow(i).scale(c))
                .try_fold(ext.zero(), |acc, x| acc.add(&x))
                .unwrap();
            assert_eq!(t.eval_at_alpha(&a).unwrap(), direct);
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism() {
        let t = small();
        let mut rng = stream(5, Stream::Aux(0));
        for _ in 0..50 {
            let a = t.ring().sample_uniform(&mut rng);
            let b = t.ring().sample_uniform(&mut rng);
            let lhs = t.eval_at_alpha(&a.mul(&b).unwrap()).unwrap();
            let rhs = t.eval_at_alpha(&a).unwrap().mul(&t.eval_at_alpha(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn subring_closure() {
        for (q_min, p, n) in [(20u64, 2u64, 5u32), (50, 3, 3)] {
            let f = crate::field::find_attack_prime(p, n, 2, q_min).unwrap();
            let rho = primitive_roots_of_unity(&f)[0];
            let t = TraceContext::new(&f, n, rho).unwrap();
            let mut rng = stream(6, Stream::Aux(0));
            for _ in 0..50 {
                let x = t.sample_uniform_r0(&mut rng);
                let y = t.sample_uniform_r0(&mut rng);
                assert!(t.membership_r0(&x.add(&y).unwrap()));
                assert!(t.membership_r0(&x.mul(&y).unwrap()));
            }
        }
    }

    #[test]
    fn constraint_rank() {
        let t = small();
        assert_eq!(rank_mod_q(&t.constraint_matrix(), t.modulus()), 3);
    }

    #[test]
    fn projection_indices() {
        let t = small();
        let a = t.ring().element((0..8).collect()).unwrap();
        assert_eq!(t.project(&a), vec![0, 4]);
        let off = t.ring().from_i64(&[0, 1, 2, 3, 0, 5, 6, 7]).unwrap();
        assert_eq!(t.project(&off), vec![0, 0]);
    }

    #[test]
    fn trace_of_b_matches_projection() {
        let t = small();
        let m = t.modulus();
        let d_inv = m.inv(t.stride() as u64).unwrap();
        let mut rng = stream(8, Stream::Aux(0));
        for _ in 0..1000 {
            let b = t.ring().sample_uniform(&mut rng);
            let tr = t.eval_at_alpha(&b).unwrap().trace_frobenius_oracle().unwrap();
            let bp = t.project(&b);
            let at_rho = bp.iter().rev().fold(0, |acc, &c| m.add(m.mul(acc, 12), c));
            assert_eq!(at_rho, m.mul(d_inv, tr));
        }
    }

    #[test]
    fn pairing_examples() {
        let t = small();
        let m = t.modulus();
        assert_eq!(
            t.general_trace_pairing(&t.ring().one(), &t.ext().scalar(1)).unwrap(),
            4
        );
        let mut rng = stream(9, Stream::Aux(0));
        for _ in 0..100 {
            let a = t.sample_uniform_r0(&mut rng);
            let s = t.ext().element((0..4).map(|_| rng.random_range(0..29)).collect()).unwrap();
            let av = t.alpha_value(&a).unwrap().unwrap();
            let tr_s = s.trace_frobenius_oracle().unwrap();
            assert_eq!(t.general_trace_pairing(&a, &s).unwrap(), m.mul(av, tr_s));
        }
    }

    #[test]
    fn plwe_oracle_replays() {
        let t = small();
        let secret = t.sample_secret(1);
        let noise = NoiseModel::std_dev(1.0);
        let (s, e) = t.plwe_oracle(&secret, &noise, 1, 0).unwrap();
        assert!(t.membership_r0(&s.a));
        assert!(s.b.sub(&s.a.mul(&secret).unwrap()).unwrap().sub(&e).unwrap().is_zero());

        let zero = NoiseModel::std_dev(0.0);
        let (s0, _) = t.plwe_oracle(&t.ring().zero(), &zero, 2, 0).unwrap();
        assert!(s0.b.is_zero());
        let (s1, _) = t.plwe_oracle(&t.ring().one(), &zero, 2, 1).unwrap();
        assert_eq!(s1.a, s1.b);
    }

    #[test]
    fn rejects_bad_root() {
        let f = FieldContext::new(29, 2, 2).unwrap();
        assert!(TraceContext::new(&f, 4, 28).is_err());
        assert!(TraceContext::new(&f, 2, 12).is_err());
        let f3 = crate::field::find_attack_prime(2, 5, 3, 20).unwrap();
        assert!(TraceContext::new(&f3, 5, primitive_roots_of_unity(&f3)[0]).is_err());
    }
}
