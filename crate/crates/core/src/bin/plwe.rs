use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use plwe_trace::attack::build_sigma;
use plwe_trace::experiment::{run_experiment, ExperimentConfig};
use plwe_trace::harness::{attack_file, bench, params_summary, BENCH_CSV_HEADER};
use plwe_trace::polyeval::Strategy;
use plwe_trace::samplefile::generate_sample_set;
use plwe_trace::stats::{random_nonzero_lambdas, subring_value_test, survival_rate_test, uniform_sum_test};
use plwe_trace::{AttackParams, Error, Modulus, NoiseModel, OracleKind, SigmaMeaning};

#[derive(Parser)]
#[command(name = "plwe", version, about = "Trace-based PLWE decision attack toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct InstanceArgs {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long, default_value_t = 10)]
    n: u32,
    #[arg(long = "A", default_value_t = 2)]
    a: u32,
    #[arg(long, default_value_t = 24000)]
    q_min: u64,
    /// Which primitive root of unity to use as rho, in generator-power order.
    #[arg(long, default_value_t = 0)]
    root_index: usize,
}

#[derive(Args, Clone)]
struct NoiseArgs {
    #[arg(long, default_value_t = 8.0)]
    sigma: f64,
    /// Read --sigma as a variance instead of a standard deviation.
    #[arg(long)]
    sigma_is_variance: bool,
}

impl NoiseArgs {
    fn model(&self) -> NoiseModel {
        NoiseModel {
            sigma: self.sigma,
            meaning: if self.sigma_is_variance {
                SigmaMeaning::Variance
            } else {
                SigmaMeaning::StdDev
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Plwe,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatTest {
    UniformSum,
    SubringValue,
    SurvivalRate,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Horner,
    Block,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Find the attack prime and print the factorization of Phi_{p^n}.
    Params(InstanceArgs),
    /// Generate a sample file from the PLWE or uniform oracle.
    Gen {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long, value_enum)]
        oracle: OracleArg,
        #[arg(long = "M", default_value_t = 10)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "out")]
        out: PathBuf,
    },
    /// Run the trace decision attack on a sample file.
    Attack {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        cutoff: f64,
        #[arg(long = "out")]
        out: Option<PathBuf>,
    },
    /// Repeat generation and attack ntests times for each oracle.
    Experiment {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long, default_value_t = 2.0)]
        cutoff: f64,
        #[arg(long = "M", default_value_t = 10)]
        m: u32,
        #[arg(long, default_value_t = 5)]
        ntests: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "out")]
        out: Option<PathBuf>,
    },
    /// Statistical self-tests.
    Stats {
        #[arg(long, value_enum)]
        test: StatTest,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Field modulus for uniform-sum.
        #[arg(long, default_value_t = 29)]
        q: u64,
        /// Comma-separated coefficients for uniform-sum; random nonzero if omitted.
        #[arg(long, value_delimiter = ',')]
        lambdas: Option<Vec<u64>>,
        /// Guess whose survival rate is measured.
        #[arg(long, default_value_t = 0)]
        guess: u64,
        #[arg(long, default_value_t = 2.0)]
        cutoff: f64,
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        noise: NoiseArgs,
    },
    /// Compare evaluation strategies; prints CSV.
    Bench {
        #[arg(long, value_enum, default_value_t = StrategyArg::Both)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 512)]
        degree: usize,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 24029)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit<T: Serialize + std::fmt::Display>(format: Format, value: &T) -> String {
    match format {
        Format::Text => value.to_string(),
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize"),
    }
}

/// Stdout writer that exits quietly when the reader goes away.
fn say(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(4);
    }
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => Ok(std::fs::write(path, format!("{text}\n"))?),
        None => {
            say(text);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct StatsOutput {
    test: &'static str,
    #[serde(flatten)]
    body: serde_json::Value,
    passed: bool,
}

impl std::fmt::Display for StatsOutput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "test {}", self.test)?;
        if let serde_json::Value::Object(map) = &self.body {
            for (k, v) in map {
                writeln!(f, "{k:<16} {v}")?;
            }
        }
        write!(f, "{}", if self.passed { "PASS" } else { "FAIL" })
    }
}

#[derive(Serialize)]
struct GenOutput {
    path: String,
    oracle: String,
    q: u64,
    rho: u64,
    samples: usize,
    secret_commitment: Option<String>,
}

impl std::fmt::Display for GenOutput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "wrote {} {} samples (q = {}, rho = {}) to {}",
            self.samples, self.oracle, self.q, self.rho, self.path
        )
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let format = cli.format;
    match cli.command {
        Command::Params(i) => {
            let summary = params_summary(i.p, i.n, i.a, i.q_min, i.root_index)?;
            say(&emit(format, &summary));
        }
        Command::Gen { instance: i, noise, oracle, m, seed, out } => {
            let (params, _) = AttackParams::search(i.p, i.n, i.a, i.q_min, noise.model(), i.root_index)?;
            let oracle = match oracle {
                OracleArg::Plwe => OracleKind::Plwe,
                OracleArg::Uniform => OracleKind::Uniform,
            };
            let (set, _) = generate_sample_set(&params, oracle, m, seed)?;
            set.write(&out)?;
            let report = GenOutput {
                path: out.display().to_string(),
                oracle: oracle.to_string(),
                q: params.q(),
                rho: params.rho,
                samples: set.samples.len(),
                secret_commitment: set.header.secret_commitment.clone(),
            };
            say(&emit(format, &report));
        }
        Command::Attack { input, cutoff, out } => {
            let outcome = attack_file(&input, cutoff)?;
            write_or_print(out.as_ref(), &emit(format, &outcome))?;
        }
        Command::Experiment { instance: i, noise, cutoff, m, ntests, seed, out } => {
            let cfg = ExperimentConfig {
                p: i.p,
                n: i.n,
                a: i.a,
                q_min: i.q_min,
                noise: noise.model(),
                cutoff,
                samples: m,
                ntests,
                seed,
                root_index: i.root_index,
            };
            let report = run_experiment(&cfg)?;
            write_or_print(out.as_ref(), &emit(format, &report))?;
        }
        Command::Stats { test, trials, seed, q, lambdas, guess, cutoff, instance: i, noise } => {
            let output = match test {
                StatTest::UniformSum => {
                    let modulus = Modulus::new(q)?;
                    let lambdas = lambdas.unwrap_or_else(|| random_nonzero_lambdas(modulus, 8, seed));
                    let r = uniform_sum_test(modulus, &lambdas, trials, seed)?;
                    StatsOutput {
                        test: "uniform-sum",
                        passed: r.passes(0.01),
                        body: serde_json::json!({ "q": q, "lambdas": lambdas, "trials": trials, "statistic": r.statistic, "dof": r.dof, "p_value": r.p_value }),
                    }
                }
                StatTest::SubringValue => {
                    let (params, _) = AttackParams::search(i.p, i.n, i.a, i.q_min, noise.model(), i.root_index)?;
                    let r = subring_value_test(&params.trace_context()?, trials, seed);
                    StatsOutput {
                        test: "subring-value",
                        passed: r.passes(0.01),
                        body: serde_json::json!({ "q": params.q(), "trials": trials, "statistic": r.statistic, "dof": r.dof, "p_value": r.p_value }),
                    }
                }
                StatTest::SurvivalRate => {
                    let (params, _) = AttackParams::search(i.p, i.n, i.a, i.q_min, noise.model(), i.root_index)?;
                    let ctx = params.trace_context()?;
                    let region = build_sigma(params.p(), noise.sigma, cutoff, params.rho, params.field.modulus())?;
                    let r = survival_rate_test(&ctx, &region, guess, trials, seed);
                    StatsOutput {
                        test: "survival-rate",
                        passed: r.within(3.0),
                        body: serde_json::json!({ "q": params.q(), "sigma_cardinality": region.cardinality(), "report": r }),
                    }
                }
            };
            say(&emit(format, &output));
        }
        Command::Bench { strategy, degree, trials, q, seed } => {
            let strategies: &[Strategy] = match strategy {
                StrategyArg::Horner => &[Strategy::Horner],
                StrategyArg::Block => &[Strategy::Block],
                StrategyArg::Both => &[Strategy::Horner, Strategy::Block],
            };
            let rows = bench(strategies, degree, trials, Modulus::new(q)?, seed)?;
            match format {
                Format::Json => say(&serde_json::to_string_pretty(&rows).expect("rows serialize")),
                Format::Text => {
                    say(BENCH_CSV_HEADER);
                    for r in &rows {
                        say(&r.csv());
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
