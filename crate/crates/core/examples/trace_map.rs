//! The trace on `F_q[x]/(x^d - rho)` only sees the constant coefficient.
//! Compares the closed form with the Frobenius sum on a few elements.

use plwe_trace::{ExtField, Modulus};

fn main() -> plwe_trace::Result<()> {
    let ext = ExtField::new(Modulus::new(29)?, 4, 12)?;
    for k in 0..=4 {
        let a = ext.alpha_pow(k);
        println!("Tr(alpha^{k}) = {:>2}  (Frobenius {:>2})", a.trace_fast(), a.trace_frobenius_oracle()?);
    }
    let theta = ext.element(vec![3, 1, 4, 1])?;
    println!("Tr({:?}) = {} = 4 * 3 mod 29", theta.coeffs(), theta.trace_fast());
    Ok(())
}
