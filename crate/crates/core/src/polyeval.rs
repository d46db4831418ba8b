//! Polynomial evaluation over `F_q` with exact product counting.
//!
//! `multiplications` counts products where both operands depend on the
//! evaluation point (the costly ones in an extension-field setting);
//! products of a fixed coefficient with a precomputed power are tallied
//! separately as `scalar_multiplications`.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Horner,
    Block,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Horner => "horner",
            Strategy::Block => "block",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub strategy: Strategy,
    pub degree: usize,
    pub multiplications: u64,
    pub scalar_multiplications: u64,
    pub wall_time: Duration,
}

/// Upper bound `2s(sqrt(n(q - 1)) + 1/2)` on `F_q` products for automorphic
/// evaluation of a degree-`n` polynomial with coefficients in `F_{q^s}`.
pub fn automorphic_bound(degree: usize, q: u64, s: u64) -> f64 {
    2.0 * s as f64 * ((degree as f64 * (q - 1) as f64).sqrt() + 0.5)
}

/// Plain Horner: one product per degree.
pub fn horner_eval(f: &Poly, x: u64) -> (u64, EvalReport) {
    let start = Instant::now();
    let m = f.modulus();
    let x = m.reduce(x);
    let c = f.coeffs();
    let mut mults = 0u64;
    let value = match c.split_last() {
        None => 0,
        Some((&top, rest)) => rest.iter().rev().fold(top, |acc, &ci| {
            mults += 1;
            m.add(m.mul(acc, x), ci)
        }),
    };
    let report = EvalReport {
        strategy: Strategy::Horner,
        degree: f.degree().unwrap_or(0),
        multiplications: mults,
        scalar_multiplications: 0,
        wall_time: start.elapsed(),
    };
    (value, report)
}

/// Baby-step/giant-step evaluation: with `k = ceil(sqrt(deg))`, precompute
/// `x^2..x^k`, evaluate each block of `k` coefficients against those powers,
/// then combine the blocks by Horner in `y = x^k`.
pub fn block_eval(f: &Poly, x: u64) -> (u64, EvalReport) {
    let start = Instant::now();
    let m = f.modulus();
    let x = m.reduce(x);
    let c = f.coeffs();
    let degree = f.degree().unwrap_or(0);
    let mut mults = 0u64;
    let mut scalar = 0u64;
    let value = if degree == 0 {
        c.first().copied().unwrap_or(0)
    } else {
        let k = (degree as f64).sqrt().ceil() as usize;
        let k = if k * k < degree { k + 1 } else { k };
        // powers[j] = x^j for j = 0..=k
        let mut powers = Vec::with_capacity(k + 1);
        powers.push(1u64);
        powers.push(x);
        for j in 2..=k {
            powers.push(m.mul(powers[j - 1], x));
            mults += 1;
        }
        let giant = powers[k];
        let block_value = |block: &[u64], scalar: &mut u64| {
            block.iter().enumerate().fold(0, |acc, (j, &cj)| {
                if j == 0 {
                    m.add(acc, cj)
                } else {
                    *scalar += 1;
                    m.add(acc, m.mul(cj, powers[j]))
                }
            })
        };
        let blocks: Vec<&[u64]> = c.chunks(k).collect();
        let (last, rest) = blocks.split_last().expect("degree >= 1");
        let mut acc = block_value(last, &mut scalar);
        for block in rest.iter().rev() {
            acc = m.mul(acc, giant);
            mults += 1;
            acc = m.add(acc, block_value(block, &mut scalar));
        }
        acc
    };
    let report = EvalReport {
        strategy: Strategy::Block,
        degree,
        multiplications: mults,
        scalar_multiplications: scalar,
        wall_time: start.elapsed(),
    };
    (value, report)
}

pub fn eval_with(strategy: Strategy, f: &Poly, x: u64) -> (u64, EvalReport) {
    match strategy {
        Strategy::Horner => horner_eval(f, x),
        Strategy::Block => block_eval(f, x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Modulus;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn horner_examples() {
        let m = Modulus::new(13).unwrap();
        let (v, r) = horner_eval(&Poly::new(vec![1, 0, 1], m), 5);
        assert_eq!((v, r.multiplications), (0, 2));
        let (v, r) = horner_eval(&Poly::new(vec![9], m), 5);
        assert_eq!((v, r.multiplications), (9, 0));
    }

    #[test]
    fn block_small_degrees() {
        let m = Modulus::new(29).unwrap();
        let (v, r) = block_eval(&Poly::new(vec![3, 4], m), 5);
        assert_eq!((v, r.multiplications), (23, 1));
        let (v, r) = block_eval(&Poly::new(vec![7], m), 5);
        assert_eq!((v, r.multiplications), (7, 0));
        let (v, r) = block_eval(&Poly::zero(m), 5);
        assert_eq!((v, r.multiplications), (0, 0));
    }

    #[test]
    fn block_beats_horner_at_1024() {
        let m = Modulus::new(24029).unwrap();
        let mut rng = crate::rng::stream(1, crate::rng::Stream::Aux(0));
        let mut coeffs: Vec<u64> = (0..1025).map(|_| rng.random_range(0..24029)).collect();
        coeffs[1024] = 1;
        let f = Poly::new(coeffs, m);
        let (a, ra) = horner_eval(&f, 12092);
        let (b, rb) = block_eval(&f, 12092);
        assert_eq!(a, b);
        assert_eq!(ra.multiplications, 1024);
        assert_eq!(rb.multiplications, 31 + 32);
        assert!(rb.multiplications < ra.multiplications);
        assert!(rb.multiplications as f64 <= automorphic_bound(1024, 24029, 1));
    }

    #[test]
    fn counts_depend_only_on_degree() {
        let m = Modulus::new(24029).unwrap();
        let mut rng = crate::rng::stream(2, crate::rng::Stream::Aux(0));
        for deg in [1usize, 2, 7, 64, 100, 513] {
            let mut counts = Vec::new();
            for _ in 0..3 {
                let mut c: Vec<u64> = (0..=deg).map(|_| rng.random_range(0..24029)).collect();
                c[deg] = rng.random_range(1..24029);
                let f = Poly::new(c, m);
                let x = rng.random_range(0..24029);
                counts.push((
                    horner_eval(&f, x).1.multiplications,
                    block_eval(&f, x).1.multiplications,
                    block_eval(&f, x).1.scalar_multiplications,
                ));
            }
            assert!(counts.windows(2).all(|w| w[0] == w[1]), "deg {deg}");
            if deg >= 64 {
                assert!(counts[0].1 < counts[0].0);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn strategies_agree(
            coeffs in proptest::collection::vec(0u64..24029, 1..1025),
            x in 0u64..24029,
        ) {
            let f = Poly::new(coeffs, Modulus::new(24029).unwrap());
            prop_assert_eq!(horner_eval(&f, x).0, block_eval(&f, x).0);
            prop_assert_eq!(horner_eval(&f, x).0, f.eval(x));
        }
    }
}
