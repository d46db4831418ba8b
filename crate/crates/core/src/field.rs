//! Prime-field arithmetic, attack-prime search and primitive roots of unity.
//!
//! Values are kept as canonical `u64` representatives in `[0, q)`. The hot
//! paths work on raw `u64` through [`Modulus`]; [`FqElement`] is the checked
//! value type that remembers its modulus.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted; products are formed in `u128`.
pub const MAX_MODULUS: u64 = 1 << 63;

/// A prime modulus `q` together with arithmetic on canonical residues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    q: u64,
}

impl Modulus {
    pub fn new(q: u64) -> Result<Self> {
        if q >= MAX_MODULUS {
            return Err(Error::InvalidParams(format!(
                "modulus {q} exceeds 63 bits"
            )));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.q
    }

    /// Reduces a signed integer into `[0, q)`.
    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.q as i64) as u64
    }

    /// Centered representative in `(-q/2, q/2]`.
    #[inline]
    pub fn centered(&self, x: u64) -> i64 {
        let x = x % self.q;
        if x > self.q / 2 {
            x as i64 - self.q as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    pub fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut result = 1 % self.q;
        let mut b = base % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }

    /// Inverse by Fermat's little theorem.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = a % self.q;
        if a == 0 {
            return Err(Error::ZeroInverse(self.q));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn element(&self, value: u64) -> FqElement {
        FqElement {
            value: value % self.q,
            modulus: self.q,
        }
    }
}

/// An element of `F_q` that carries its modulus, so mixing fields is an error
/// rather than silent garbage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FqElement {
    value: u64,
    modulus: u64,
}

impl FqElement {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        modulus.element(value)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        Modulus { q: self.modulus }
    }

    pub fn centered(&self) -> i64 {
        self.modulus().centered(self.value)
    }

    fn check(&self, other: &Self) -> Result<Modulus> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        Ok(self.modulus())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let m = self.check(other)?;
        Ok(m.element(m.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let m = self.check(other)?;
        Ok(m.element(m.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let m = self.check(other)?;
        Ok(m.element(m.mul(self.value, other.value)))
    }

    pub fn pow(&self, exp: u64) -> Self {
        let m = self.modulus();
        m.element(m.pow(self.value, exp))
    }

    pub fn inv(&self) -> Result<Self> {
        let m = self.modulus();
        Ok(m.element(m.inv(self.value)?))
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Deterministic Miller-Rabin for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors by trial division.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2u64;
    while f.saturating_mul(f) <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest generator of `F_q^*`, trying 2, 3, ... in order.
pub fn generator(modulus: Modulus) -> u64 {
    let q = modulus.value();
    if q == 2 {
        return 1;
    }
    let divisors = prime_divisors(q - 1);
    (2..q)
        .find(|&g| divisors.iter().all(|&r| modulus.pow(g, (q - 1) / r) != 1))
        .expect("F_q^* is cyclic")
}

/// The parameters `q = 1 + p^A u` under which `Phi_{p^n}` splits into
/// binomials of degree `p^(n-A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldContext {
    modulus: Modulus,
    p: u64,
    a: u32,
    u: u64,
}

impl FieldContext {
    /// Validates `q` against the splitting hypotheses: `q` and `p` prime,
    /// `p^A | q - 1` and `gcd(u, p) = 1`.
    pub fn new(q: u64, p: u64, a: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::InvalidParams("A must be at least 1".into()));
        }
        let modulus = Modulus::new(q)?;
        let pa = checked_pow(p, a)?;
        if (q - 1) % pa != 0 {
            return Err(Error::InvalidParams(format!(
                "q = {q} is not 1 mod {p}^{a}"
            )));
        }
        let u = (q - 1) / pa;
        if u % p == 0 {
            return Err(Error::InvalidParams(format!(
                "u = {u} is divisible by p = {p}"
            )));
        }
        Ok(Self { modulus, p, a, u })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn q(&self) -> u64 {
        self.modulus.value()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The exponent `A` in `q = 1 + p^A u`.
    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    /// `p^A`
    pub fn root_order(&self) -> u64 {
        self.p.pow(self.a)
    }
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::InvalidParams(format!("{base}^{exp} overflows")))
}

/// Search ceiling for [`find_attack_prime`].
pub const PRIME_SEARCH_CEILING: u64 = 1 << 62;

/// Smallest prime `q >= q_min` with `q = 1 + p^A u` and `gcd(u, p) = 1`.
pub fn find_attack_prime(p: u64, n: u32, a: u32, q_min: u64) -> Result<FieldContext> {
    find_attack_prime_below(p, n, a, q_min, PRIME_SEARCH_CEILING)
}

/// As [`find_attack_prime`] with an explicit search ceiling.
pub fn find_attack_prime_below(
    p: u64,
    n: u32,
    a: u32,
    q_min: u64,
    ceiling: u64,
) -> Result<FieldContext> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a < 1 || n <= a {
        return Err(Error::InvalidParams(format!(
            "need n > A >= 1, got n = {n}, A = {a}"
        )));
    }
    if q_min < 2 {
        return Err(Error::InvalidParams("q_min must be at least 2".into()));
    }
    let pa = checked_pow(p, a)?;
    let ceiling = ceiling.min(PRIME_SEARCH_CEILING);
    // smallest u with 1 + pa*u >= q_min
    let mut u = (q_min - 1).div_ceil(pa).max(1);
    loop {
        let q = match pa.checked_mul(u).and_then(|x| x.checked_add(1)) {
            Some(q) if q < ceiling => q,
            _ => return Err(Error::NoPrimeFound { ceiling }),
        };
        if u % p != 0 && is_prime(q) {
            return FieldContext::new(q, p, a);
        }
        u += 1;
    }
}

/// All primitive `p^A`-th roots of unity in `F_q`, as `g^((q-1)/p^A * v)` for
/// `v` coprime to `p`, in increasing `v` where `g` is the smallest generator.
pub fn primitive_roots_of_unity(ctx: &FieldContext) -> Vec<u64> {
    let m = ctx.modulus();
    let order = ctx.root_order();
    let g = generator(m);
    let zeta = m.pow(g, (ctx.q() - 1) / order);
    (1..order)
        .filter(|v| v % ctx.p() != 0)
        .map(|v| m.pow(zeta, v))
        .collect()
}

/// Multiplicative order of `x` in `F_q^*`.
pub fn multiplicative_order(modulus: Modulus, x: u64) -> Option<u64> {
    let x = modulus.reduce(x);
    if x == 0 {
        return None;
    }
    let mut order = modulus.value() - 1;
    for r in prime_divisors(order) {
        while order % r == 0 && modulus.pow(x, order / r) == 1 {
            order /= r;
        }
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ext_gcd_inverse(a: i64, m: i64) -> i64 {
        let (mut r0, mut r1) = (m, a);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let k = r0 / r1;
            (r0, r1) = (r1, r0 - k * r1);
            (t0, t1) = (t1, t0 - k * t1);
        }
        t0.rem_euclid(m)
    }

    fn naive_prime(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn reference_rho_is_fourth_root() {
        let m = Modulus::new(24029).unwrap();
        assert_eq!(m.mul(12092, 12092), 24028);
        assert_eq!(m.pow(12092, 4), 1);
    }

    #[test]
    fn identity_and_inverse() {
        let m = Modulus::new(29).unwrap();
        for x in 0..29 {
            assert_eq!(m.mul(1, x), x);
        }
        assert_eq!(m.inv(4).unwrap(), 22);
        assert_eq!(ext_gcd_inverse(4, 29), 22);
        assert!(matches!(m.inv(0), Err(Error::ZeroInverse(29))));
    }

    #[test]
    fn checked_elements_reject_mixed_moduli() {
        let a = Modulus::new(29).unwrap().element(3);
        let b = Modulus::new(13).unwrap().element(3);
        assert!(matches!(
            a.mul(&b),
            Err(Error::ModulusMismatch { left: 29, right: 13 })
        ));
        assert_eq!(a.inv().unwrap().value(), 10);
        assert_eq!(a.pow(3).value(), 27);
        assert_eq!(a.sub(&a.pow(2)).unwrap().centered(), -6);
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive_prime(n), "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn attack_primes_for_reference_instances() {
        let c = find_attack_prime(2, 10, 2, 24000).unwrap();
        assert_eq!((c.q(), c.u()), (24029, 6007));
        let c = find_attack_prime(2, 11, 2, 40000).unwrap();
        assert_eq!((c.q(), c.u()), (40013, 10003));
        let c = find_attack_prime(2, 4, 2, 20).unwrap();
        assert_eq!((c.q(), c.u()), (29, 7));
    }

    #[test]
    fn attack_prime_brute_force_scan() {
        for (p, a, q_min) in [(2u64, 2u32, 20u64), (3, 2, 100), (2, 3, 500), (5, 2, 1000)] {
            let pa = p.pow(a);
            let expected = (q_min..)
                .find(|&q| naive_prime(q) && (q - 1) % pa == 0 && ((q - 1) / pa) % p != 0)
                .unwrap();
            assert_eq!(find_attack_prime(p, a + 1, a, q_min).unwrap().q(), expected);
        }
    }

    #[test]
    fn attack_prime_errors() {
        assert!(matches!(
            find_attack_prime(4, 3, 2, 10),
            Err(Error::NotPrime(4))
        ));
        assert!(find_attack_prime(2, 2, 2, 10).is_err());
        assert!(matches!(
            find_attack_prime_below(2, 10, 2, 24000, 24020),
            Err(Error::NoPrimeFound { ceiling: 24020 })
        ));
        assert!(FieldContext::new(17, 2, 2).is_err()); // u = 4 is even
    }

    #[test]
    fn roots_of_unity_examples() {
        let c = FieldContext::new(24029, 2, 2).unwrap();
        let mut r = primitive_roots_of_unity(&c);
        r.sort();
        assert_eq!(r, vec![11937, 12092]);
        let mut r = primitive_roots_of_unity(&FieldContext::new(29, 2, 2).unwrap());
        r.sort();
        assert_eq!(r, vec![12, 17]);
        let mut r = primitive_roots_of_unity(&FieldContext::new(13, 2, 2).unwrap());
        r.sort();
        assert_eq!(r, vec![5, 8]);
    }

    #[test]
    fn roots_have_exact_order_for_small_contexts() {
        for (p, a) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 2)] {
            let ctx = find_attack_prime(p, a + 1, a, 2).unwrap();
            let m = ctx.modulus();
            let roots = primitive_roots_of_unity(&ctx);
            assert_eq!(roots.len() as u64, p.pow(a - 1) * (p - 1));
            for &r in &roots {
                assert_eq!(m.pow(r, p.pow(a)), 1);
                assert_ne!(m.pow(r, p.pow(a - 1)), 1);
                assert_eq!(multiplicative_order(m, r), Some(p.pow(a)));
            }
        }
    }

    proptest! {
        #[test]
        fn found_prime_meets_hypotheses(pi in 0usize..3, a in 1u32..3, q_min in 2u64..200_000) {
            let p = [2u64, 3, 5][pi];
            let ctx = find_attack_prime(p, a + 1, a, q_min).unwrap();
            let q = ctx.q();
            prop_assert!(q >= q_min);
            prop_assert!(naive_prime(q));
            prop_assert_eq!((q - 1) % p.pow(a), 0);
            prop_assert!(((q - 1) / p.pow(a)) % p != 0);
        }

        #[test]
        fn field_ops_are_canonical(a in 0u64..24029, b in 0u64..24029) {
            let m = Modulus::new(24029).unwrap();
            prop_assert!(m.add(a, b) < 24029);
            prop_assert_eq!(m.add(m.sub(a, b), b), a);
            prop_assert_eq!(m.mul(a, b), (a * b) % 24029);
            if a != 0 {
                prop_assert_eq!(m.mul(a, m.inv(a).unwrap()), 1);
            }
        }
    }
}
