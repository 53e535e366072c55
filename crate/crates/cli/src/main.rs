//! Command-line front end: parameter sweeps over the dephasing models,
//! oracle cross-checks, and the invariant check suite.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 check-suite
//! failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod config;
mod grid;
mod output;

use commands::PhotonicPanel;
use config::OhmicConfig;
use grid::GridAxis;
use output::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    CheckFailure,
}

#[derive(Parser)]
#[command(
    name = "qregress",
    version,
    about = "Dephasing dynamics, non-Markovianity measures and regression-theorem diagnostics",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for sweeps (default: machine parallelism). Results
    /// are independent of the thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args)]
struct ModelArgs {
    /// TOML model file; flags below override its values
    #[arg(long, value_name = "PATH")]
    model_file: Option<PathBuf>,

    /// Coupling strength λ
    #[arg(long)]
    lambda: Option<f64>,

    /// Low-frequency exponent s
    #[arg(long)]
    s: Option<f64>,

    /// Cutoff frequency Ω
    #[arg(long)]
    omega: Option<f64>,

    /// Finite inverse temperature β (omit for the zero-temperature limit)
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Sweep axis as name:min:max:count:lin|log (repeatable)
    #[arg(long = "grid", value_name = "SPEC")]
    grid: Vec<String>,

    /// Output path (default: stdout)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PanelArg {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// BLP and RHP non-Markovianity measures over a (lambda, s) grid
    Measures {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Regression-violation estimator Z over a (lambda, s) grid at fixed
    /// t1, t2
    Qrt {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// First time argument (default 1/Ω)
        #[arg(long)]
        t1: Option<f64>,
        /// Second time argument (default 2/Ω)
        #[arg(long)]
        t2: Option<f64>,
        /// Add a z_oracle column from the discretized bath
        #[arg(long)]
        oracle_check: bool,
        /// Mode count of the oracle discretization
        #[arg(long, default_value_t = 4096)]
        modes: usize,
    },
    /// Z (and BLP) sweeps of the photonic Lorentzian-mixture model
    Photonic {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Built-in two-Lorentzian family: `a` varies the width difference
        /// at equal centers (r=1); `b` varies the center distance at equal
        /// widths (r=2). Ignored when --model-file provides a mixture.
        #[arg(long, value_enum, default_value_t = PanelArg::A)]
        panel: PanelArg,
        /// First time argument (default 1)
        #[arg(long)]
        t1: Option<f64>,
    },
    /// Run the cross-validation suite and emit a JSON report
    Check {
        #[command(flatten)]
        model: ModelArgs,
        /// Mode count of the oracle checks
        #[arg(long, default_value_t = 2048)]
        modes: usize,
        /// Output path (default: stdout)
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Compare closed-form gamma, phi and Z against the discretized bath
    Oracle {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// First time argument (default 1/Ω)
        #[arg(long)]
        t1: Option<f64>,
        /// Second time argument (default 2/Ω); use --grid t2:... for a sweep
        #[arg(long)]
        t2: Option<f64>,
        /// Mode count of the discretization
        #[arg(long, default_value_t = 4096)]
        modes: usize,
        /// Discretization window in cutoff units
        #[arg(long, default_value_t = 40.0)]
        omega_max: f64,
    },
}

/// Resolve the ohmic parameters from file and flags (flags win).
fn resolve_ohmic(args: &ModelArgs, command: &str) -> Result<OhmicConfig, CliError> {
    let mut cfg = OhmicConfig {
        lambda: 1.0,
        s: 3.0,
        omega: 1.0,
        beta: None,
    };
    if let Some(path) = &args.model_file {
        let section = config::load_model_file(path)?;
        match section.ohmic {
            Some(file_cfg) => cfg = file_cfg,
            None => {
                return Err(CliError::Usage(format!(
                    "`{command}` needs an ohmic model, but {} defines a lorentzian_mixture",
                    path.display()
                )))
            }
        }
    }
    if let Some(lambda) = args.lambda {
        cfg.lambda = lambda;
    }
    if let Some(s) = args.s {
        cfg.s = s;
    }
    if let Some(omega) = args.omega {
        cfg.omega = omega;
    }
    if let Some(beta) = args.beta {
        cfg.beta = Some(beta);
    }
    // Validate early so bad values surface as usage errors.
    config::spectral_density(cfg.lambda, cfg.s, cfg.omega)?;
    Ok(cfg)
}

fn parse_grids(specs: &[String]) -> Result<Vec<GridAxis>, CliError> {
    specs.iter().map(|s| GridAxis::parse(s)).collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }

    match cli.command {
        Command::Measures { model, output } => {
            let cfg = resolve_ohmic(&model, "measures")?;
            let grids = parse_grids(&output.grid)?;
            commands::cmd_measures(cfg, grids, output.out, output.format.into())
        }
        Command::Qrt {
            model,
            output,
            t1,
            t2,
            oracle_check,
            modes,
        } => {
            let cfg = resolve_ohmic(&model, "qrt")?;
            let grids = parse_grids(&output.grid)?;
            commands::cmd_qrt(
                cfg,
                grids,
                t1,
                t2,
                oracle_check,
                modes,
                output.out,
                output.format.into(),
            )
        }
        Command::Photonic {
            model,
            output,
            panel,
            t1,
        } => {
            if model.lambda.is_some() || model.s.is_some() || model.beta.is_some() {
                return Err(CliError::Usage(
                    "photonic takes a lorentzian_mixture model; --lambda/--s/--beta do not apply"
                        .into(),
                ));
            }
            let mixture = match &model.model_file {
                Some(path) => {
                    let section = config::load_model_file(path)?;
                    match section.lorentzian_mixture {
                        Some(cfg) => Some(cfg),
                        None => {
                            return Err(CliError::Usage(format!(
                                "`photonic` needs a lorentzian_mixture model, but {} defines ohmic",
                                path.display()
                            )))
                        }
                    }
                }
                None => None,
            };
            let grids = parse_grids(&output.grid)?;
            let panel = match panel {
                PanelArg::A => PhotonicPanel::WidthSplit,
                PanelArg::B => PhotonicPanel::CenterSplit,
            };
            commands::cmd_photonic(mixture, panel, grids, t1, output.out, output.format.into())
        }
        Command::Check { model, modes, out } => {
            let cfg = resolve_ohmic(&model, "check")?;
            commands::cmd_check(cfg, modes, out)
        }
        Command::Oracle {
            model,
            output,
            t1,
            t2,
            modes,
            omega_max,
        } => {
            let cfg = resolve_ohmic(&model, "oracle")?;
            let grids = parse_grids(&output.grid)?;
            commands::cmd_oracle(
                cfg,
                grids,
                t1,
                t2,
                modes,
                omega_max,
                output.out,
                output.format.into(),
            )
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            std::process::exit(2);
        }
        Err(CliError::CheckFailure) => {
            eprintln!("check suite failed");
            std::process::exit(3);
        }
    }
}
