//! Both reference experiments, five runs per oracle each.
//!
//! cargo run --release --example reproduce_experiment -- [cutoff] [seed]

use plwe_trace::experiment::{run_experiment, ExperimentConfig};

fn main() -> plwe_trace::Result<()> {
    let mut args = std::env::args().skip(1);
    let cutoff: f64 = args.next().map_or(3.0, |a| a.parse().expect("cutoff"));
    let seed: u64 = args.next().map_or(0, |a| a.parse().expect("seed"));
    for cfg in [ExperimentConfig::example1(cutoff, seed), ExperimentConfig::example2(cutoff, seed)] {
        println!("{}\n", run_experiment(&cfg)?);
    }
    Ok(())
}
