//! Trace-based decision attack on PLWE for prime-power cyclotomic rings.
//!
//! For `q = 1 + p^A u` with `gcd(u, p) = 1` and `n > A`, the cyclotomic
//! polynomial `Phi_{p^n}` splits over `F_q` into binomials
//! `x^(p^(n-A)) - rho`, one per primitive `p^A`-th root of unity `rho`. A root
//! `alpha` of one factor lives in `F_{q^(p^(n-A))}`, and the field trace of
//! `alpha^i` vanishes unless `p^(n-A)` divides `i`. For `A = 2` this turns a
//! sample `(a, b = a s + e)` with `a(alpha)` in `F_q` into a scalar relation
//! whose error term is a short combination of `p(p-1)` Gaussian
//! coefficients, small enough to enumerate. Guessing the trace of the secret
//! then distinguishes PLWE samples from uniform ones.
//!
//! Module map:
//!
//! * [`field`]: `F_q` arithmetic, attack-prime search, roots of unity
//! * [`cyclotomic`]: `Phi_{p^n}`, its closed-form factorization, irreducibility checks
//! * [`extension`]: `F_q[x]/(x^d - rho)` and the trace map
//! * [`ring`], [`subring`]: `R_q`, the subring `R_q,0`, oracles and projection to `R'_q`
//! * [`attack`]: smallness region, both decision algorithms, cost accounting
//! * [`polyeval`]: polynomial evaluation strategies with product counts
//! * [`samplefile`], [`experiment`], [`harness`], [`stats`]: persistence, experiment runs, CLI support

pub mod attack;
pub mod cyclotomic;
pub mod error;
pub mod experiment;
pub mod extension;
pub mod field;
pub mod harness;
pub mod params;
pub mod poly;
pub mod polyeval;
pub mod ring;
pub mod rng;
pub mod samplefile;
pub mod stats;
pub mod subring;

pub use attack::{algorithm1, algorithm2, build_sigma, mult_budget, success_probability, SmallnessRegion, Verdict, VerdictKind};
pub use cyclotomic::{brute_irreducibility_check, cyclotomic_poly, factor_prime_power_cyclotomic, CyclotomicFactorization};
pub use error::{Error, Result};
pub use extension::{ExtElement, ExtField};
pub use field::{find_attack_prime, primitive_roots_of_unity, FieldContext, FqElement, Modulus};
pub use params::AttackParams;
pub use poly::Poly;
pub use ring::{NoiseModel, RingContext, RingElement, SigmaMeaning};
pub use subring::{OracleKind, ReducedSample, Sample, TraceContext};
