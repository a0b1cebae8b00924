use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hyperfinsler::cli::{run, OutputMode, RunConfig};
use hyperfinsler::connections::Indicant;

/// Verify hypercomplex-twisted Finsler connections on a chart.
#[derive(Parser, Debug)]
#[command(name = "hyperfinsler", version)]
struct Args {
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Number of random points added to the configured ones.
    #[arg(long, value_name = "K")]
    points: Option<usize>,
    /// Seed for random points and random S, T.
    #[arg(long, value_name = "N", default_value_t = 0)]
    seed: u64,
    /// Tolerance override for a check family, e.g. metricity=1e-6.
    #[arg(long = "tol", value_name = "CHECK=VALUE", value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    /// Draw constant S and T entries in [-1, 1] when the config has none.
    #[arg(long)]
    random_tensors: bool,
    /// Print every C and F block per point after the checks.
    #[arg(long)]
    dump_coeffs: bool,
    /// One JSON record per line.
    #[arg(long)]
    machine: bool,
    /// Negative control: perturb one constrained coefficient by VALUE.
    #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
    perturb: Option<f64>,
    /// Required number of negative eigenvalues of g.
    #[arg(long, value_name = "Q")]
    expected_q: Option<usize>,
    /// Which constructed connection (1 or 3) feeds D.
    #[arg(long, value_name = "A", default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    d_input: u8,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected CHECK=VALUE, got `{s}`"))?;
    let v: f64 = value
        .parse()
        .map_err(|_| format!("invalid tolerance `{value}`"))?;
    if v.is_nan() || v < 0.0 {
        return Err(format!("tolerance must be non-negative, got `{value}`"));
    }
    Ok((name.to_string(), v))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Some(d_input) = Indicant::from_index(args.d_input.into()) else {
        eprintln!("error: --d-input must be 1 or 3");
        return ExitCode::from(2);
    };
    let cfg = RunConfig {
        config_path: args.config,
        tolerance_overrides: args.tol,
        point_count: args.points,
        seed: args.seed,
        output: if args.machine {
            OutputMode::Machine
        } else {
            OutputMode::Human
        },
        random_tensors: args.random_tensors,
        dump_coeffs: args.dump_coeffs,
        perturbation: args.perturb,
        expected_q: args.expected_q,
        d_input,
    };
    let code = run(
        &cfg,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code as u8)
}
