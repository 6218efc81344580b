use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sccp_cli::{presets, run, CliError, ExperimentConfig};

/// Section-centroid, cut-volume and asymptotic-cone experiments on convex bodies.
///
/// Thread count follows RAYON_NUM_THREADS.
#[derive(Parser)]
#[command(name = "sccp", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Section measures and centroids over a direction × level grid.
    Section(Common),
    /// Centroid-curve line fits and the concurrent/parallel verdict.
    Sccp(Common),
    /// Cut volumes, gradient audits, constancy scans.
    Cutvol(Common),
    /// Shell distances to the recession cone and blow-down.
    Asym(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Built-in experiment.
    #[arg(long)]
    preset: Option<String>,
    /// Write <command>.csv and <command>.json here instead of printing.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the command tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the random seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn load(name: &str, common: &Common) -> Result<ExperimentConfig, CliError> {
    let mut config = match (&common.config, &common.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        (None, Some(preset)) => presets::preset(name, preset)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    if config.command.name() != name {
        return Err(CliError::Config(format!("config is for `{}`, not `{name}`", config.command.name())));
    }
    if common.tol.is_some() {
        config.tol = common.tol;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if common.out.is_some() {
        config.out = common.out.clone();
    }
    config.validate()?;
    Ok(config)
}

fn execute(name: &str, common: &Common) -> Result<bool, CliError> {
    let config = load(name, common)?;
    let report = run(&config)?;
    match &config.out {
        Some(dir) => {
            report.write_dir(dir)?;
            eprintln!(
                "{} rows, {} failed; wrote {}",
                report.rows.len(),
                report.diagnostics.len(),
                dir.join(name).with_extension("{csv,json}").display()
            );
        }
        None => {
            let stdout = std::io::stdout().lock();
            match common.format {
                Format::Csv => report.write_csv(stdout)?,
                Format::Json => writeln!(&mut { stdout }, "{}", report.to_json())?,
            }
        }
    }
    Ok(!report.all_failed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Sub::Section(c) => ("section", c),
        Sub::Sccp(c) => ("sccp", c),
        Sub::Cutvol(c) => ("cutvol", c),
        Sub::Asym(c) => ("asym", c),
    };
    match execute(name, common) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("every item failed; see diagnostics");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
