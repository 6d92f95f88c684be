use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tfweyl_cli::config::Command;
use tfweyl_cli::{configure_threads, resolve_config, run, Overrides};

/// Desk-scale time-frequency toolkit: identity suites, phase-space decay
/// diagnostics, Weyl and localization operators, weight-function checks.
#[derive(Parser)]
#[command(name = "tfweyl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run the identity suite and write identities.json + norms.csv.
    Identities(CommonArgs),
    /// Run the Weyl continuity/compactness sweep for a named symbol.
    Diagnose(CommonArgs),
    /// Build a named operator, export its matrix and spectrum.
    Operator(CommonArgs),
    /// Check the weight-function conditions and tabulate the Young conjugate.
    Weights(CommonArgs),
    /// Reproduce the worked examples end to end.
    Demo(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Samples per axis (power of two).
    #[arg(long)]
    n: Option<usize>,
    /// Grid half-extent.
    #[arg(long)]
    l: Option<f64>,
    /// Outer-lattice stride for 4-variable diagnostics.
    #[arg(long)]
    stride: Option<usize>,
    /// Weight family: log1p | power | logpower.
    #[arg(long)]
    weight: Option<String>,
    /// Weight exponent (power, logpower).
    #[arg(long)]
    a: Option<f64>,
    /// Weight scale.
    #[arg(long)]
    c: Option<f64>,
    /// Comma-separated λ list for diagnostics.
    #[arg(long)]
    lambda: Option<String>,
    /// Largest μ in the partner grid.
    #[arg(long)]
    mu_max: Option<f64>,
    /// μ grid step.
    #[arg(long)]
    mu_step: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized oracle lattice points.
    #[arg(long)]
    seed: Option<u64>,
    /// Named case (symbol, operator or demo scenario).
    #[arg(long)]
    case: Option<String>,
}

impl CommonArgs {
    fn into_overrides(self) -> (Option<PathBuf>, Overrides) {
        (
            self.config,
            Overrides {
                n: self.n,
                l: self.l,
                stride: self.stride,
                weight_kind: self.weight,
                a: self.a,
                c: self.c,
                lambda: self.lambda,
                mu_max: self.mu_max,
                mu_step: self.mu_step,
                out: self.out,
                seed: self.seed,
                case: self.case,
            },
        )
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Identities(a) => (Command::Identities, a),
        Sub::Diagnose(a) => (Command::Diagnose, a),
        Sub::Operator(a) => (Command::Operator, a),
        Sub::Weights(a) => (Command::Weights, a),
        Sub::Demo(a) => (Command::Demo, a),
    };
    let (config_path, overrides) = args.into_overrides();
    let cfg = match resolve_config(command, config_path.as_deref(), overrides) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{}", e.message());
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
