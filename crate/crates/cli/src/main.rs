use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hpowers_cli::commands::{self, Outcome, StarArgs};
use hpowers_cli::error::{CliError, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use hpowers_cli::report::emit;
use hpowers_cli::verify::Suite;
use hpowers_cli::Config;

/// Complex powers of elliptic, Heisenberg and contact operators.
#[derive(Parser)]
#[command(name = "hpowers", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Configuration file (sectioned key = value).
    #[arg(long, global = true, env = "HPOWERS_CONFIG")]
    config: Option<PathBuf>,
    /// Report destination; stdout if absent.
    #[arg(long, global = true, env = "HPOWERS_EMIT")]
    emit: Option<PathBuf>,
    /// Seed for all random sampling in invariant checks.
    #[arg(long, global = true, env = "HPOWERS_SEED")]
    seed: Option<u64>,
    /// Worker threads inside a command.
    #[arg(long, global = true, env = "HPOWERS_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Symbol expansion of the complex powers P^s.
    Powers {
        /// Operator symbol as JSON.
        #[arg(long)]
        operator: PathBuf,
        /// Number of lower-order parts; defaults to the configured depth.
        #[arg(long)]
        depth: Option<usize>,
        /// Exponent, e.g. `-0.5+0.25i`.
        #[arg(long, default_value = "0.5+0i", allow_hyphen_values = true)]
        s: String,
    },
    /// Resolvent parametrix terms and their exact verification.
    Resolvent {
        /// Operator symbol as JSON.
        #[arg(long)]
        operator: PathBuf,
        /// Number of lower-order parts; defaults to the configured depth.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Independent oracles for constant-coefficient symbols.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Star product and non-microlocality probes on the Heisenberg group.
    #[command(subcommand)]
    Heisenberg(HeisenbergCommand),
    /// Rumin complex and contact Laplacians on S^3.
    #[command(subcommand)]
    Rumin(RuminCommand),
    /// Run invariant suites.
    Verify {
        #[arg(value_parser = ["seeley", "heisenberg", "rumin", "oracle", "all"])]
        suite: String,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Symbolic difference between the Seeley expansion and the binomial oracle.
    Compare {
        /// Operator symbol as JSON.
        #[arg(long)]
        operator: PathBuf,
        /// Number of lower-order parts; defaults to the configured depth.
        #[arg(long)]
        depth: Option<usize>,
    },
}

#[derive(Subcommand)]
enum HeisenbergCommand {
    /// Degree additivity of the star product.
    Star {
        /// Degree of the left factor.
        #[arg(long, allow_hyphen_values = true)]
        deg1: f64,
        /// Degree of the right factor.
        #[arg(long, allow_hyphen_values = true)]
        deg2: f64,
        /// Nodes per axis of the slice grid.
        #[arg(long)]
        grid: Option<usize>,
        /// Expression for the left factor in `xi0, xi1, xi2, norm`.
        #[arg(long)]
        left: Option<String>,
        /// Expression for the right factor.
        #[arg(long)]
        right: Option<String>,
    },
    /// Response of the star product to a perturbation supported in a cone.
    Probe {
        /// Perturbation cone: `axis=(a,b,c),angle=t[,degree=m]`.
        #[arg(long, default_value = "axis=(0,1,0),angle=0.3")]
        cone: String,
        /// Output covector.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,0,1")]
        xi0: Vec<f64>,
    },
    /// Fraction of the star-product stencil outside the parametric region.
    Gap {
        /// Values of lambda as `start:stop:step`.
        #[arg(long, default_value = "0:2:0.1")]
        lambda_sweep: String,
    },
}

#[derive(Subcommand)]
enum RuminCommand {
    /// Eigenvalue table of one contact Laplacian, as CSV.
    Spectrum {
        /// Form degree: 0, 11, 12 or 2.
        #[arg(long)]
        slot: String,
        /// Highest representation level; defaults to the configured lmax.
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Complex powers of one contact Laplacian, cross-checked.
    Powers {
        /// Form degree: 0, 11, 12 or 2.
        #[arg(long)]
        slot: String,
        /// Exponent, e.g. `-0.5+0i`.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Cross-check to run; only `contour` is available.
        #[arg(long, default_value = "contour")]
        check: String,
    },
    /// All block invariants.
    Verify,
}

fn load_config(g: &Global) -> Result<Config, CliError> {
    let mut cfg = match &g.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(s) = g.seed {
        cfg.run.seed = s;
    }
    if let Some(j) = g.jobs {
        cfg.run.jobs = j;
    }
    if g.emit.is_some() {
        cfg.paths.emit = g.emit.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let cfg = load_config(&cli.global)?;
    let depth = |d: Option<usize>| d.unwrap_or(cfg.seeley.depth);
    match cli.command {
        Command::Powers { operator, depth: d, s } => commands::powers(&cfg, &operator, depth(d), commands::parse_complex(&s)?),
        Command::Resolvent { operator, depth: d } => commands::resolvent(&cfg, &operator, depth(d)),
        Command::Oracle(OracleCommand::Compare { operator, depth: d }) => commands::oracle_compare(&cfg, &operator, depth(d)),
        Command::Heisenberg(h) => match h {
            HeisenbergCommand::Star { deg1, deg2, grid, left, right } => commands::heisenberg_star(
                &cfg,
                StarArgs {
                    deg1,
                    deg2,
                    n: grid.unwrap_or(cfg.grid.n),
                    left: left.as_deref(),
                    right: right.as_deref(),
                },
            ),
            HeisenbergCommand::Probe { cone, xi0 } => match xi0[..] {
                [a, b, c] => commands::heisenberg_probe(&cfg, &cone, [a, b, c]),
                _ => Err(CliError::Usage(format!("--xi0 needs three components, got {}", xi0.len()))),
            },
            HeisenbergCommand::Gap { lambda_sweep } => commands::heisenberg_gap(&cfg, &lambda_sweep),
        },
        Command::Rumin(r) => match r {
            RuminCommand::Spectrum { slot, lmax } => commands::rumin_spectrum(&cfg, &slot, lmax.unwrap_or(cfg.rumin.lmax)),
            RuminCommand::Powers { slot, s, check } => commands::rumin_powers(&cfg, &slot, commands::parse_complex(&s)?, &check),
            RuminCommand::Verify => commands::verify(&cfg, "rumin verify", &[Suite::Rumin]),
        },
        Command::Verify { suite } => {
            let suites: Vec<Suite> = match suite.as_str() {
                "seeley" => vec![Suite::Seeley],
                "heisenberg" => vec![Suite::Heisenberg],
                "rumin" => vec![Suite::Rumin],
                "oracle" => vec![Suite::Oracle],
                _ => Suite::ALL.to_vec(),
            };
            commands::verify(&cfg, &format!("verify {suite}"), &suites)
        }
    }
    .and_then(|out| {
        emit(&out.text, cfg.paths.emit.as_deref())?;
        Ok(out)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(out) => {
            eprint!("{}", out.log);
            ExitCode::from(if out.passed { EXIT_OK } else { EXIT_CHECK_FAILED } as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
