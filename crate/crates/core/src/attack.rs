//! Smallness region and the two guess-elimination decision algorithms.
//!
//! Both algorithms scan every guess `g` in `F_q` and keep it only if
//! `b - a g` lands in the smallness region for every sample, where `(a, b)`
//! are per-sample scalars: `(a'(rho), b'(rho))` for reduced samples, and
//! `(a(alpha), Tr(b(alpha)) / p^(n-2))` for samples in `R_q,0 x R_q`.
//! The guess space is split into chunks scanned in parallel; survivors and
//! product counts are merged in chunk order so the result does not depend
//! on scheduling.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Modulus;
use crate::subring::{ReducedSample, Sample, TraceContext};

/// Largest enumeration `(2w + 1)^(p(p-1))` that [`build_sigma`] will attempt.
pub const MAX_SIGMA_ENUMERATION: u128 = 1 << 36;

/// Lookup table of likely values of `sum_j e_j rho^j` for small errors.
#[derive(Clone, Debug, PartialEq)]
pub struct SmallnessRegion {
    members: HashSet<u64>,
    /// Half-width `w = floor(c sigma)` of the per-digit window.
    pub width: i64,
    pub cutoff: f64,
    pub sigma: f64,
    pub digits: usize,
}

impl SmallnessRegion {
    pub fn contains(&self, x: u64) -> bool {
        self.members.contains(&x)
    }

    pub fn cardinality(&self) -> usize {
        self.members.len()
    }

    /// Upper bound `(2w + 1)^digits` on the cardinality.
    pub fn enumeration_bound(&self) -> u128 {
        (2 * self.width as u128 + 1).pow(self.digits as u32)
    }

    pub fn sorted_members(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.members.iter().copied().collect();
        v.sort_unstable();
        v
    }
}

/// Enumerates `{ sum_{j<p(p-1)} e_j rho^j : |e_j| <= floor(c sigma) }` mod `q`.
///
/// Fails with [`Error::AttackInapplicable`] when the region covers `q`
/// or more residues.
pub fn build_sigma(p: u64, sigma: f64, cutoff: f64, rho: u64, modulus: Modulus) -> Result<SmallnessRegion> {
    if !(sigma.is_finite() && sigma >= 0.0 && cutoff.is_finite() && cutoff >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "sigma and cutoff must be finite and non-negative, got {sigma}, {cutoff}"
        )));
    }
    let digits = (p * (p - 1)) as usize;
    let width = (cutoff * sigma).floor() as i64;
    let bound = (2 * width as u128 + 1).checked_pow(digits as u32);
    if bound.is_none_or(|b| b > MAX_SIGMA_ENUMERATION) {
        return Err(Error::InvalidParams(format!(
            "smallness region enumeration ({}^{digits}) is too large",
            2 * width + 1
        )));
    }
    // Sumset construction: after step j the set holds every partial sum over
    // the first j digits, so the final set is exactly the region.
    let mut members: HashSet<u64> = HashSet::from([0]);
    let mut rho_j = 1u64;
    for _ in 0..digits {
        let offsets: Vec<u64> = (-width..=width)
            .map(|e| modulus.mul(modulus.from_i64(e), rho_j))
            .collect();
        members = members
            .iter()
            .flat_map(|&s| offsets.iter().map(move |&o| modulus.add(s, o)))
            .collect();
        rho_j = modulus.mul(rho_j, rho);
    }
    if members.len() as u64 >= modulus.value() {
        return Err(Error::AttackInapplicable {
            cardinality: members.len(),
            q: modulus.value(),
        });
    }
    Ok(SmallnessRegion {
        members,
        width,
        cutoff,
        sigma,
        digits,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    Plwe,
    NotPlwe,
    NotEnoughSamples,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Plwe => "PLWE",
            VerdictKind::NotPlwe => "NOT PLWE",
            VerdictKind::NotEnoughSamples => "NOT ENOUGH SAMPLES",
        })
    }
}

/// Outcome of a decision run. `survivors` is the guess set `G`; the kind is
/// a function of its size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub survivors: Vec<u64>,
    /// All `F_q` products performed: `setup_mults` plus one per guess check.
    pub mult_count: u64,
    /// Products spent evaluating the samples before the guess loop.
    pub setup_mults: u64,
}

impl Verdict {
    fn from_scan(survivors: Vec<u64>, setup_mults: u64, scan_mults: u64) -> Self {
        let kind = match survivors.len() {
            0 => VerdictKind::NotPlwe,
            1 => VerdictKind::Plwe,
            _ => VerdictKind::NotEnoughSamples,
        };
        Self {
            kind,
            survivors,
            mult_count: setup_mults + scan_mults,
            setup_mults,
        }
    }

    /// The recovered guess when exactly one survives.
    pub fn guess(&self) -> Option<u64> {
        (self.survivors.len() == 1).then(|| self.survivors[0])
    }
}

const CHUNK: u64 = 4096;

/// Scans every `g` in `F_q`; returns survivors and the number of `a g`
/// products. A guess is dropped at the first sample that rejects it.
fn scan_guesses(pairs: &[(u64, u64)], region: &SmallnessRegion, m: Modulus) -> (Vec<u64>, u64) {
    let q = m.value();
    let chunks: Vec<(Vec<u64>, u64)> = (0..q.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut survivors = Vec::new();
            let mut mults = 0u64;
            for g in c * CHUNK..((c + 1) * CHUNK).min(q) {
                let mut alive = true;
                for &(a, b) in pairs {
                    mults += 1;
                    if !region.contains(m.sub(b, m.mul(a, g))) {
                        alive = false;
                        break;
                    }
                }
                if alive {
                    survivors.push(g);
                }
            }
            (survivors, mults)
        })
        .collect();
    chunks
        .into_iter()
        .fold((Vec::new(), 0), |(mut s, n), (cs, cn)| {
            s.extend(cs);
            (s, n + cn)
        })
}

fn horner_counted(coeffs: &[u64], x: u64, m: Modulus, mults: &mut u64) -> u64 {
    match coeffs.split_last() {
        None => 0,
        Some((&top, rest)) => rest.iter().rev().fold(top, |acc, &c| {
            *mults += 1;
            m.add(m.mul(acc, x), c)
        }),
    }
}

/// Guess elimination on samples of `R'_q = F_q[x]/(Phi_{p^2})`, testing
/// `b'(rho) - a'(rho) g` against the region.
pub fn algorithm1(
    samples: &[ReducedSample],
    region: &SmallnessRegion,
    rho: u64,
    modulus: Modulus,
) -> Result<Verdict> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut setup = 0u64;
    let pairs: Vec<(u64, u64)> = samples
        .iter()
        .map(|s| {
            let a = horner_counted(&s.a, rho, modulus, &mut setup);
            let b = horner_counted(&s.b, rho, modulus, &mut setup);
            (a, b)
        })
        .collect();
    let (survivors, scan) = scan_guesses(&pairs, region, modulus);
    Ok(Verdict::from_scan(survivors, setup, scan))
}

/// The trace decision attack on samples of `R_q,0 x R_q`: for each guess
/// `g` of `Tr(s(alpha)) / p^(n-2)`, test
/// `Tr(b(alpha)) / p^(n-2) - a(alpha) g` against the region.
pub fn algorithm2(samples: &[Sample], region: &SmallnessRegion, ctx: &TraceContext) -> Result<Verdict> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let m = ctx.modulus();
    let d_inv = m.inv(ctx.stride() as u64)?;
    let mut setup = 0u64;
    let mut pairs = Vec::with_capacity(samples.len());
    for (index, s) in samples.iter().enumerate() {
        let a_alpha = ctx.eval_at_alpha_counted(&s.a, &mut setup)?;
        let a = a_alpha.as_base().ok_or(Error::NotInSubring { index })?;
        let b_alpha = ctx.eval_at_alpha_counted(&s.b, &mut setup)?;
        let b = m.mul(b_alpha.trace_fast(), d_inv);
        setup += 2;
        pairs.push((a, b));
    }
    let (survivors, scan) = scan_guesses(&pairs, region, m);
    Ok(Verdict::from_scan(survivors, setup, scan))
}

/// Probability `1 - (|Sigma| / q)^M` that a non-`NOT PLWE` answer is right.
pub fn success_probability(sigma_card: usize, q: u64, m: u32) -> f64 {
    1.0 - (sigma_card as f64 / q as f64).powi(m as i32)
}

/// Worst-case multiplication counts for the trace attack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultBudget {
    /// `ceil((2 sqrt(p(p-1)(q-1)) + 2) M q)`, evaluating with automorphic
    /// evaluation.
    pub automorphic: u64,
    /// `(p(p-1) + 1) M q`, evaluating directly as this crate does.
    pub direct: u64,
}

pub fn mult_budget(p: u64, q: u64, m: u64) -> MultBudget {
    let pp = p * (p - 1);
    let per = 2.0 * ((pp * (q - 1)) as f64).sqrt() + 2.0;
    MultBudget {
        automorphic: (per * m as f64 * q as f64).ceil() as u64,
        direct: (pp + 1) * m * q,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;
    use crate::ring::NoiseModel;

    fn m29() -> Modulus {
        Modulus::new(29).unwrap()
    }

    fn small() -> TraceContext {
        TraceContext::new(&FieldContext::new(29, 2, 2).unwrap(), 4, 12).unwrap()
    }

    /// Digit-tuple enumeration without the sumset shortcut.
    fn brute_region(width: i64, digits: usize, rho: u64, m: Modulus) -> HashSet<u64> {
        let base = (2 * width + 1) as usize;
        let mut out = HashSet::new();
        for idx in 0..base.pow(digits as u32) {
            let mut t = idx;
            let mut acc = 0u64;
            let mut rho_j = 1u64;
            for _ in 0..digits {
                let e = (t % base) as i64 - width;
                t /= base;
                acc = m.add(acc, m.mul(m.from_i64(e), rho_j));
                rho_j = m.mul(rho_j, rho);
            }
            out.insert(acc);
        }
        out
    }

    #[test]
    fn region_small_example() {
        let r = build_sigma(2, 1.0, 2.0, 12, m29()).unwrap();
        assert_eq!(r.cardinality(), 25);
        let mut blocks: Vec<u64> = Vec::new();
        for lo in [3u64, 15, 10, 22] {
            blocks.extend(lo..lo + 5);
        }
        blocks.extend([27, 28, 0, 1, 2]);
        blocks.sort();
        assert_eq!(r.sorted_members(), blocks);
        assert_eq!(r.members, brute_region(2, 2, 12, m29()));
        assert_eq!(build_sigma(2, 1.0, 1.0, 12, m29()).unwrap().cardinality(), 9);
    }

    #[test]
    fn region_degenerate_and_bounds() {
        let r = build_sigma(2, 0.0, 2.0, 12, m29()).unwrap();
        assert_eq!(r.sorted_members(), vec![0]);
        let m = Modulus::new(24029).unwrap();
        let r = build_sigma(2, 8.0, 2.0, 12092, m).unwrap();
        assert!(r.cardinality() as u128 <= 33 * 33);
        assert_eq!(r.enumeration_bound(), 1089);
        assert!(r.contains(0));
        assert!(matches!(
            build_sigma(2, 3.0, 2.0, 12, m29()),
            Err(Error::AttackInapplicable { q: 29, .. })
        ));
    }

    #[test]
    fn region_matches_brute_force_for_p3() {
        let m = Modulus::new(19).unwrap(); // 19 = 1 + 9 * 2
        let rho = 4; // order 9
        assert_eq!(crate::field::multiplicative_order(m, rho), Some(9));
        // w = 0 gives {0}; with 6 digits and w = 1 the region covers F_19
        assert_eq!(build_sigma(3, 0.4, 1.0, rho, m).unwrap().cardinality(), 1);
        let big = Modulus::new(100_003).unwrap();
        let region = build_sigma(3, 1.0, 1.0, 5, big).unwrap();
        assert_eq!(region.members, brute_region(1, 6, 5, big));
    }

    #[test]
    fn exact_samples_single_survivor() {
        let m = m29();
        let region = build_sigma(2, 1.0, 2.0, 12, m).unwrap();
        let g_star = 7u64;
        // b'(x) = a'(x) * g* exactly
        let samples: Vec<ReducedSample> = [[3u64, 5], [1, 9], [20, 2], [4, 4], [11, 0], [6, 13]]
            .iter()
            .map(|a| ReducedSample {
                a: a.to_vec(),
                b: a.iter().map(|&c| m.mul(c, g_star)).collect(),
            })
            .collect();
        let v = algorithm1(&samples, &region, 12, m).unwrap();
        assert!(v.survivors.contains(&g_star));
        assert_ne!(v.kind, VerdictKind::NotPlwe);
        assert!(matches!(algorithm1(&[], &region, 12, m), Err(Error::EmptySamples)));
    }

    #[test]
    fn zero_error_oracle_is_plwe() {
        let t = small();
        let m = t.modulus();
        let region = build_sigma(2, 0.0, 2.0, 12, m).unwrap();
        let secret = t.sample_secret(5);
        let samples: Vec<Sample> = (0..6)
            .map(|i| t.plwe_oracle(&secret, &NoiseModel::std_dev(0.0), 5, i).unwrap().0)
            .collect();
        let v = algorithm2(&samples, &region, &t).unwrap();
        let s_prime = t.project(&secret);
        let truth = m.add(s_prime[0], m.mul(s_prime[1], 12));
        assert_eq!(v.survivors, vec![truth]);
        assert_eq!(v.kind, VerdictKind::Plwe);
        assert_eq!(v.guess(), Some(truth));
    }

    #[test]
    fn algorithm2_rejects_non_members() {
        let t = small();
        let region = build_sigma(2, 1.0, 2.0, 12, t.modulus()).unwrap();
        let mut s = t.uniform_oracle(1, 0);
        s.a = t.ring().monomial(1);
        assert!(matches!(
            algorithm2(&[t.uniform_oracle(1, 1), s], &region, &t),
            Err(Error::NotInSubring { index: 1 })
        ));
        assert!(matches!(algorithm2(&[], &region, &t), Err(Error::EmptySamples)));
    }

    #[test]
    fn survivors_grow_with_cutoff() {
        let t = small();
        let m = t.modulus();
        let samples: Vec<Sample> = (0..4).map(|i| t.uniform_oracle(77, i)).collect();
        let narrow = build_sigma(2, 1.0, 1.0, 12, m).unwrap();
        let wide = build_sigma(2, 1.0, 2.0, 12, m).unwrap();
        let a = algorithm2(&samples, &narrow, &t).unwrap();
        let b = algorithm2(&samples, &wide, &t).unwrap();
        assert!(a.survivors.iter().all(|g| b.survivors.contains(g)));
    }

    #[test]
    fn probability_and_budget() {
        let p = success_probability(1089, 24029, 10);
        let miss = (1089f64 / 24029.0).powi(10);
        assert!((miss - 3.655_289_874_493e-14).abs() < 1e-24, "{miss}");
        assert_eq!(p, 1.0 - miss);
        assert_eq!(success_probability(25, 29, 0), 0.0);
        assert!((success_probability(25, 29, 1) - 4.0 / 29.0).abs() < 1e-15);

        let b = mult_budget(2, 24029, 10);
        let expect = ((2.0 * (2.0f64 * 24028.0).sqrt() + 2.0) * 10.0 * 24029.0).ceil() as u64;
        assert_eq!(b.automorphic, expect);
        assert_eq!(b.direct, 3 * 10 * 24029);
        assert_eq!(mult_budget(2, 24029, 0), MultBudget { automorphic: 0, direct: 0 });
    }

    #[test]
    fn counter_is_exact_and_bounded() {
        let t = small();
        let region = build_sigma(2, 1.0, 2.0, 12, t.modulus()).unwrap();
        let samples: Vec<Sample> = (0..10).map(|i| t.uniform_oracle(3, i)).collect();
        let v = algorithm2(&samples, &region, &t).unwrap();
        // each sample: two evaluations of d blocks with p(p-1)-1 products, plus 2
        assert_eq!(v.setup_mults, 10 * (2 * 4 + 2));
        let budget = mult_budget(2, 29, 10);
        assert!(v.mult_count - v.setup_mults <= budget.direct);
    }
}
