//! Finds the attack prime for `(p, n, A)` and prints the binomial
//! factorization of `Phi_{p^n}`, checking each factor when it is small enough.
//!
//! cargo run --example factor_cyclotomic -- 2 10 24000

use plwe_trace::cyclotomic::{brute_irreducibility_check, factor_prime_power_cyclotomic, MAX_BRUTE_DEGREE};
use plwe_trace::field::find_attack_prime;

fn main() -> plwe_trace::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let (p, n, q_min) = match args[..] {
        [p, n, q_min] => (p, n as u32, q_min),
        _ => (2, 10, 24000),
    };
    let field = find_attack_prime(p, n, 2, q_min)?;
    let fact = factor_prime_power_cyclotomic(&field, n)?;
    println!("q = {} = 1 + {}^2 * {}", field.q(), p, field.u());
    println!("{} = {}", fact.cyclotomic(), fact);
    let d = fact.factor_degree();
    for (f, c) in fact.factors().iter().zip(fact.constant_terms()) {
        if d <= MAX_BRUTE_DEGREE {
            println!("  x^{d} + {c}: irreducible = {}", brute_irreducibility_check(f)?);
        } else {
            println!("  x^{d} + {c}: beyond the brute-force check");
        }
    }
    Ok(())
}
