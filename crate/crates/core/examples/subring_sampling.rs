//! Draws from the subring `R_q,0` and shows that `a(alpha)` lands in `F_q`
//! and equals `a'(rho)` on the projected coefficients.

use plwe_trace::rng::{stream, Stream};
use plwe_trace::{AttackParams, NoiseModel};

fn main() -> plwe_trace::Result<()> {
    let (params, _) = AttackParams::search(2, 4, 2, 20, NoiseModel::std_dev(1.0), 0)?;
    let ctx = params.trace_context()?;
    println!(
        "q = {}, rho = {}, N = {}, dim R_q,0 = {}",
        params.q(),
        ctx.rho(),
        ctx.ring().dimension(),
        ctx.subring_dimension()
    );
    let mut rng = stream(7, Stream::Aux(0));
    for _ in 0..4 {
        let a = ctx.sample_uniform_r0(&mut rng);
        let projected = ctx.project(&a);
        println!(
            "a = {:?}  member = {}  a(alpha) = {:?}  a' = {:?}",
            a.coeffs(),
            ctx.membership_r0(&a),
            ctx.alpha_value(&a)?,
            projected
        );
    }
    let x = ctx.ring().monomial(1);
    println!("x in R_q,0: {}", ctx.membership_r0(&x));
    Ok(())
}
