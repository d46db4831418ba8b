//! One PLWE and one uniform sample set at the first reference instance,
//! attacked with cutoff 3.
//!
//! cargo run --release --example decision_attack

use plwe_trace::attack::{algorithm2, build_sigma, success_probability};
use plwe_trace::samplefile::generate_sample_set;
use plwe_trace::{AttackParams, NoiseModel, OracleKind};

fn main() -> plwe_trace::Result<()> {
    let (params, fact) = AttackParams::search(2, 10, 2, 24000, NoiseModel::std_dev(8.0), 0)?;
    let ctx = params.trace_context()?;
    let region = build_sigma(2, 8.0, 3.0, params.rho, ctx.modulus())?;
    println!("{} over F_{}", fact, params.q());
    println!(
        "|Sigma| = {}, success probability for M = 10: {:.3e}",
        region.cardinality(),
        success_probability(region.cardinality(), params.q(), 10)
    );
    for oracle in [OracleKind::Plwe, OracleKind::Uniform] {
        let (set, _) = generate_sample_set(&params, oracle, 10, 1)?;
        let v = algorithm2(&set.samples, &region, &ctx)?;
        println!(
            "{oracle:>7}: {} with {} survivor(s), {} multiplications",
            v.kind,
            v.survivors.len(),
            v.mult_count
        );
    }
    Ok(())
}
