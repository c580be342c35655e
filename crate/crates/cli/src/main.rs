use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stosc_cli::{config, parse_config, preset, presets, run_manifest, write_outputs, CliError, RunManifest, PRESETS};

#[derive(Parser)]
#[command(name = "stosc", version, about = "Stochastic-frequency oscillator ensemble simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration file or a named preset and write its artifacts.
    Simulate {
        /// Path to a `key = value` config, or a preset name (see `presets`).
        target: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads. Affects speed only.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long = "n-traj")]
        n_traj: Option<u64>,
    },
    /// List the built-in presets.
    Presets,
    /// Parse and validate a configuration, printing the effective settings.
    Validate { config: PathBuf },
}

fn load(target: &str) -> Result<RunManifest, CliError> {
    if PRESETS.contains(&target) {
        return preset(target);
    }
    let path = PathBuf::from(target);
    if !path.exists() && !target.contains(['/', '.']) {
        return preset(target);
    }
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path, source })?;
    Ok(parse_config(&text)?)
}

fn simulate(
    target: &str,
    out: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
    dt: Option<f64>,
    n_traj: Option<u64>,
) -> Result<(), CliError> {
    let mut m = load(target)?;
    if let Some(s) = seed {
        m.config.master_seed = s;
    }
    if let Some(dt) = dt {
        m.config.dt = dt;
    }
    if let Some(n) = n_traj {
        m.config.n_trajectories = n;
    }
    if let Some(dir) = out {
        m.output_dir = dir;
    }
    config::validate_manifest(&m).map_err(|(keys, message)| stosc_cli::ConfigError::new(0, keys[0], message))?;
    stosc_cli::preflight(&m.output_dir)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("thread pool");
    let results = pool.install(|| run_manifest(&m))?;
    let files = write_outputs(&m, &results, &m.output_dir)?;
    for f in files {
        emit(&format!("{}\n", f.display()));
    }
    Ok(())
}

// A closed pipe (e.g. `stosc presets | head`) just ends the listing.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { target, out, seed, threads, dt, n_traj } => simulate(&target, out, seed, threads, dt, n_traj),
        Command::Presets => {
            for name in PRESETS {
                emit(&format!("{name:<8} {}\n", presets::describe(name)));
            }
            Ok(())
        }
        Command::Validate { config } => {
            let path = config;
            std::fs::read_to_string(&path)
                .map_err(|source| CliError::Io { path, source })
                .and_then(|text| Ok(parse_config(&text)?))
                .map(|m| emit(&m.to_config_text()))
                .map_err(|e| match e {
                    // An unreadable config is a validation failure, not a runtime one.
                    CliError::Io { .. } => CliError::Config(stosc_cli::ConfigError::new(0, "-", e.to_string())),
                    other => other,
                })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
