//! Horner against baby-step giant-step evaluation for growing degrees.

use plwe_trace::harness::{bench, BENCH_CSV_HEADER};
use plwe_trace::polyeval::Strategy;
use plwe_trace::Modulus;

fn main() -> plwe_trace::Result<()> {
    let m = Modulus::new(24029)?;
    println!("{BENCH_CSV_HEADER}");
    for degree in [16, 64, 256, 1024, 4096] {
        for row in bench(&[Strategy::Horner, Strategy::Block], degree, 50, m, 5)? {
            println!("{}", row.csv());
        }
    }
    Ok(())
}
