//! Thin command-line front end over [`covlax::cli`].
//!
//! Exit codes: 0 all checks pass, 1 check/gate failure, 2 config parse error,
//! 3 runtime or domain error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use covlax::cli::{
    cmd_clifford, cmd_gate, cmd_integrate, cmd_invariants, cmd_verify_lax, load_config, Report,
    ResolvedRun, RunConfig, SpacetimeSection,
};
use covlax::Error;

#[derive(Parser)]
#[command(
    name = "covlax",
    about = "Lax tensors, Killing-Yano symmetries and constants of motion on curved spacetimes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for reports.
    #[arg(long, global = true, default_value = "covlax-out")]
    out: PathBuf,

    /// Seed for random test points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Multiply every tolerance by this factor.
    #[arg(long, global = true, default_value_t = 1.0)]
    tolerance_scale: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured trajectory and export it as CSV.
    Integrate,
    /// Covariant and ordinary Lax residuals for the configured operators.
    VerifyLax,
    /// Time series of trace invariants, det-identity coefficients and
    /// charged constants.
    Invariants,
    /// Run the registration gates of a spacetime.
    Gate {
        /// Catalog name; overrides the config's spacetime section.
        spacetime: Option<String>,
    },
    /// Gamma-algebra, spin-connection and Clifford Lax checks.
    Clifford,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            for check in &report.checks {
                println!(
                    "{} {}: residual {:.3e} (tolerance {:.3e})",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.name,
                    check.residual,
                    check.tolerance
                );
            }
            if report.all_pass() {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(cli: &Cli) -> covlax::Result<Report> {
    let config: RunConfig = match (&cli.config, &cli.command) {
        (Some(path), _) => load_config(path)?,
        (None, Command::Gate {
            spacetime: Some(name),
        }) => RunConfig {
            spacetime: SpacetimeSection {
                name: name.clone(),
                params: Default::default(),
            },
            hamiltonian: Default::default(),
            initial: None,
            integrator: Default::default(),
            lax: Default::default(),
            observables: vec![],
            tolerances: Default::default(),
        },
        _ => {
            return Err(Error::Config(
                "--config PATH is required (except for `gate <SPACETIME>`)".into(),
            ))
        }
    };
    let config = match &cli.command {
        Command::Gate {
            spacetime: Some(name),
        } => {
            let mut config = config;
            config.spacetime.name = name.clone();
            config
        }
        _ => config,
    };
    let run = ResolvedRun::new(config, cli.tolerance_scale)?;
    match &cli.command {
        Command::Integrate => cmd_integrate(&run, &cli.out),
        Command::VerifyLax => cmd_verify_lax(&run, &cli.out, cli.seed),
        Command::Invariants => cmd_invariants(&run, &cli.out),
        Command::Gate { .. } => cmd_gate(&run, &cli.out),
        Command::Clifford => cmd_clifford(&run, &cli.out),
    }
}
