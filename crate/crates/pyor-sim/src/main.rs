use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pyor_sim::{
    band, coverage, density, occupancy, sigma_study, tools, ExperimentConfig, SimError, SimResult,
    VERSION,
};

/// Monte Carlo studies for Pitman-Yor posterior inference.
///
/// Every experiment is described by a JSON config (see `configs/` in the
/// repository) and writes a CSV table plus a `<out>.meta.json` sidecar with
/// the fully resolved config and toolkit version.
#[derive(Parser)]
#[command(name = "pyor-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to the experiment config JSON.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the config's master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Output path; overrides the config's `output_path`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Coverage of uncorrected and bias-corrected credible intervals.
    Coverage,
    /// Raw posterior functional draws (for density plots).
    Density,
    /// Simultaneous credible-band coverage for the CDF.
    BandCoverage,
    /// Distinct-count growth and related occupancy statistics.
    Occupancy,
    /// Spread of the σ estimate and its grid posterior across replications.
    SigmaStudy,
    /// Fit σ to a one-column CSV dataset; prints JSON.
    FitSigma {
        /// Dataset file (one column, optional header).
        data: PathBuf,
    },
    /// Draw realizations from the Pitman-Yor prior.
    SamplePrior,
    /// Posterior functional draws for a dataset file.
    PosteriorDraws {
        /// Dataset file (one column, optional header).
        data: PathBuf,
    },
}

fn load_config(cli: &Cli) -> SimResult<ExperimentConfig> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| SimError::Config("--config is required for this subcommand".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if let Some(seed) = cli.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_path = Some(out.display().to_string());
    }
    Ok(cfg)
}

fn output_path(cfg: &ExperimentConfig) -> SimResult<PathBuf> {
    cfg.output_path
        .as_ref()
        .map(PathBuf::from)
        .ok_or_else(|| SimError::Config("no output path (set output_path or pass --out)".into()))
}

fn write_output(
    path: &Path,
    csv: &str,
    cfg: &ExperimentConfig,
    command: &str,
    extra: serde_json::Value,
) -> SimResult<()> {
    std::fs::write(path, csv)?;
    let sidecar = serde_json::json!({
        "version": VERSION,
        "command": command,
        "config": cfg,
        "extra": extra,
    });
    let meta_path = PathBuf::from(format!("{}.meta.json", path.display()));
    std::fs::write(&meta_path, serde_json::to_string_pretty(&sidecar).unwrap())?;
    eprintln!("wrote {} and {}", path.display(), meta_path.display());
    Ok(())
}

fn run(cli: &Cli) -> SimResult<()> {
    match &cli.command {
        Command::Coverage => {
            let cfg = load_config(cli)?;
            let resolved = cfg.resolve()?;
            let rows = coverage::run_coverage(&resolved)?;
            write_output(
                &output_path(&cfg)?,
                &coverage::to_csv(&rows),
                &cfg,
                "coverage",
                serde_json::json!(null),
            )
        }
        Command::Density => {
            let cfg = load_config(cli)?;
            let resolved = cfg.resolve()?;
            let out = density::run_density(&resolved)?;
            write_output(
                &output_path(&cfg)?,
                &density::to_csv(&out),
                &cfg,
                "density",
                serde_json::json!({"true_pf": out.true_pf, "law": out.law, "n": out.n}),
            )
        }
        Command::BandCoverage => {
            let cfg = load_config(cli)?;
            let resolved = cfg.resolve()?;
            let rows = band::run_band_coverage(&resolved)?;
            write_output(
                &output_path(&cfg)?,
                &band::to_csv(&rows),
                &cfg,
                "band-coverage",
                serde_json::json!(null),
            )
        }
        Command::Occupancy => {
            let cfg = load_config(cli)?;
            let resolved = cfg.resolve()?;
            let rows = occupancy::run_occupancy(&resolved)?;
            write_output(
                &output_path(&cfg)?,
                &occupancy::to_csv(&rows),
                &cfg,
                "occupancy",
                serde_json::json!(null),
            )
        }
        Command::SigmaStudy => {
            let cfg = load_config(cli)?;
            let resolved = cfg.resolve()?;
            let rows = sigma_study::run_sigma_study(&resolved)?;
            write_output(
                &output_path(&cfg)?,
                &sigma_study::to_csv(&rows),
                &cfg,
                "sigma-study",
                serde_json::json!(null),
            )
        }
        Command::FitSigma { data } => {
            // config optional: only M and the grid size matter here
            let (m, grid) = match &cli.config {
                Some(_) => {
                    let cfg = load_config(cli)?;
                    (cfg.m, cfg.sigma_grid_size)
                }
                None => (1.0, 256),
            };
            let report = tools::fit_sigma_file(data, m, grid)?;
            let json = serde_json::to_string_pretty(&report).unwrap();
            match &cli.out {
                Some(path) => std::fs::write(path, json.as_bytes())?,
                None => println!("{json}"),
            }
            Ok(())
        }
        Command::SamplePrior => {
            let cfg = load_config(cli)?;
            let resolved = cfg.resolve()?;
            let csv = tools::sample_prior_csv(&resolved)?;
            write_output(&output_path(&cfg)?, &csv, &cfg, "sample-prior", serde_json::json!(null))
        }
        Command::PosteriorDraws { data } => {
            let cfg = load_config(cli)?;
            let resolved = cfg.resolve()?;
            let csv = tools::posterior_draws_csv(&resolved, data)?;
            write_output(
                &output_path(&cfg)?,
                &csv,
                &cfg,
                "posterior-draws",
                serde_json::json!(null),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: could not size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
