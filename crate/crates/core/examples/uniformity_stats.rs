//! Chi-square checks behind the attack: linear forms of uniform values are
//! uniform, `a(alpha)` is uniform for `a` in `R_q,0`, and a wrong guess
//! survives one uniform sample with probability `|Sigma| / q`.

use plwe_trace::attack::build_sigma;
use plwe_trace::stats::{random_nonzero_lambdas, subring_value_test, survival_rate_test, uniform_sum_test};
use plwe_trace::{AttackParams, Modulus, NoiseModel};

fn main() -> plwe_trace::Result<()> {
    let m = Modulus::new(29)?;
    let lambdas = random_nonzero_lambdas(m, 5, 1);
    let sum = uniform_sum_test(m, &lambdas, 100_000, 2)?;
    println!("sum with lambda = {lambdas:?}: chi2 = {:.2} (dof {}), p = {:.3}", sum.statistic, sum.dof, sum.p_value);

    let (params, _) = AttackParams::search(2, 4, 2, 20, NoiseModel::std_dev(1.0), 0)?;
    let ctx = params.trace_context()?;
    let alpha = subring_value_test(&ctx, 100_000, 3);
    println!("a(alpha): chi2 = {:.2}, p = {:.3}", alpha.statistic, alpha.p_value);

    for cutoff in [1.0, 2.0] {
        let region = build_sigma(2, 1.0, cutoff, params.rho, m)?;
        let r = survival_rate_test(&ctx, &region, 5, 10_000, 4);
        println!(
            "cutoff {cutoff}: |Sigma| = {}, survival {:.4} vs {:.4} (z = {:+.2})",
            region.cardinality(),
            r.rate,
            r.expected,
            r.z
        );
    }
    Ok(())
}
