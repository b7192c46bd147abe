//! `npscreen` — desk-scale adsorption screening over fcc alloy nanoparticle
//! ensembles.

use clap::{Parser, Subcommand};
use npscreen_cli::commands::{
    run_bulkref, run_fit_corrector, run_oracle_compare, run_screen, run_shapes, run_space,
    run_train_mono, SpaceArgs,
};
use npscreen_cli::config::{Overrides, ResolvedConfig};
use npscreen_cli::{CliError, EXIT_NUMERICAL, EXIT_OK, EXIT_PARTIAL};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "npscreen", version, about = "Alloy-nanoparticle adsorption screening")]
struct Cli {
    /// Run configuration JSON; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker thread count override (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replace existing output files.
    #[arg(long, global = true)]
    overwrite: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan per-element bulk lattice constants and atom energies.
    Bulkref,
    /// Fit the per-element linear models from monometallic particles.
    TrainMono,
    /// Screen a seeded alloy ensemble and predict adsorption energies.
    Screen,
    /// Fit the nonlinear corrector on the oracle training split.
    FitCorrector,
    /// Run the direct oracle on the test split and compare predictors.
    OracleCompare,
    /// Check shape universality on octahedra and icosahedra.
    Shapes,
    /// Report exact chemical-space sizes.
    Space(SpaceArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let overrides = Overrides {
        seed: cli.seed,
        workers: cli.workers,
        out: cli.out.clone(),
        overwrite: cli.overwrite,
    };

    let outcome = match &cli.command {
        Command::Space(args) => run_space(args).map(|_| Vec::new()),
        command => match ResolvedConfig::from_cli(cli.config.as_deref(), &overrides) {
            Err(e) => Err(e),
            Ok(cfg) => dispatch(command, &cfg),
        },
    };

    match outcome {
        Ok(skipped) if skipped.is_empty() => ExitCode::from(EXIT_OK as u8),
        Ok(skipped) => {
            eprintln!("partial completion; skipped particles: {skipped:?}");
            ExitCode::from(EXIT_PARTIAL as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Runs a config-based command; the Ok payload lists skipped particle ids.
fn dispatch(command: &Command, cfg: &ResolvedConfig) -> Result<Vec<usize>, CliError> {
    match command {
        Command::Bulkref => run_bulkref(cfg).map(|_| Vec::new()),
        Command::TrainMono => run_train_mono(cfg).map(|_| Vec::new()),
        Command::Screen => run_screen(cfg).map(|r| r.skipped),
        Command::FitCorrector => run_fit_corrector(cfg).map(|_| Vec::new()),
        Command::OracleCompare => run_oracle_compare(cfg).map(|_| Vec::new()),
        Command::Shapes => {
            let report = run_shapes(cfg)?;
            if !report.universality_holds {
                return Err(CliError::Numerical(format!(
                    "shape universality violated: octahedron x{:.2}, icosahedron x{:.2} (limit 1.5)",
                    report.ratio_octahedron, report.ratio_icosahedron
                )));
            }
            Ok(Vec::new())
        }
        Command::Space(_) => unreachable!("handled before config resolution"),
    }
}

// Exit-code sanity: keep the constant visible even though ExitCode::from
// takes u8.
const _: () = assert!(EXIT_NUMERICAL == 3);
