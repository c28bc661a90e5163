//! Command-line interface: `run`, `characterize`, `sweep`,
//! `calibrate-qber`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use qkdsim::harness::{
    calibrate_misalignment, curve_csv, emit_report, run_characterization, run_session,
    sweep_scenarios, write_report_files, CharacterizationSweep, DeviceKind, HarnessError,
    ReportFormat, ScenarioConfig,
};

#[derive(Parser)]
#[command(
    name = "qkdsim",
    version,
    about = "Monte Carlo simulator of a polarization-encoded BB84 link"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Records,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeviceArg {
    Ring,
    Voa,
    Polmod,
}

#[derive(Subcommand)]
enum Command {
    /// Run one BB84 session and report its statistics
    Run {
        /// Scenario file (flat `section.key = value` lines)
        #[arg(long)]
        config: PathBuf,
        /// Override the scenario seed
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for report and histogram files
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Sample a device transmission curve
    Characterize {
        #[arg(value_enum)]
        device: DeviceArg,
        /// Sweep axis (ring: wavelength|volts, voa: phase, polmod: theta)
        #[arg(long)]
        axis: String,
        /// Sweep range START:STOP:STEPS
        #[arg(long)]
        range: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run independent sessions over values of one numeric config key
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Dotted config key, e.g. channel.loss_db
        #[arg(long)]
        key: String,
        /// Comma-separated values
        #[arg(long)]
        values: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bisect receiver misalignment until the session QBER hits a target
    CalibrateQber {
        #[arg(long, default_value_t = 0.054)]
        target: f64,
        #[arg(long)]
        config: PathBuf,
    },
}

/// Errors mapped to process exit codes.
enum AppError {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Config(_) => 2,
            AppError::Runtime(_) => 3,
        }
    }

    fn message(&self) -> &anyhow::Error {
        match self {
            AppError::Config(e) | AppError::Runtime(e) => e,
        }
    }
}

fn classify(err: HarnessError) -> AppError {
    match err {
        HarnessError::Config(_) | HarnessError::UnknownAxis { .. } => {
            AppError::Config(anyhow::Error::new(err))
        }
        _ => AppError::Runtime(anyhow::Error::new(err)),
    }
}

fn load_config(path: &Path) -> Result<ScenarioConfig, AppError> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))
        .map_err(AppError::Config)?;
    ScenarioConfig::parse(&text).map_err(|e| AppError::Config(anyhow::Error::new(e)))
}

fn parse_range(raw: &str) -> Result<(f64, f64, usize), AppError> {
    let parts: Vec<&str> = raw.split(':').collect();
    let bad = || {
        AppError::Config(anyhow::anyhow!(
            "range must be START:STOP:STEPS, got `{raw}`"
        ))
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let start = parts[0].parse::<f64>().map_err(|_| bad())?;
    let stop = parts[1].parse::<f64>().map_err(|_| bad())?;
    let steps = parts[2].parse::<usize>().map_err(|_| bad())?;
    Ok((start, stop, steps))
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            format,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let report = run_session(&cfg).map_err(classify)?;
            let format = match format {
                FormatArg::Table => ReportFormat::Table,
                FormatArg::Records => ReportFormat::Records,
            };
            print!("{}", emit_report(&report, format));
            if let Some(dir) = out {
                let written = write_report_files(&report, format, &dir)
                    .context("writing report files")
                    .map_err(AppError::Runtime)?;
                for path in written {
                    eprintln!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::Characterize {
            device,
            axis,
            range,
            config,
            out,
        } => {
            let cfg = match config {
                Some(path) => load_config(&path)?,
                None => ScenarioConfig::default(),
            };
            let (start, stop, steps) = parse_range(&range)?;
            let sweep = CharacterizationSweep {
                device: match device {
                    DeviceArg::Ring => DeviceKind::Ring,
                    DeviceArg::Voa => DeviceKind::Voa,
                    DeviceArg::Polmod => DeviceKind::PolMod,
                },
                axis,
                start,
                stop,
                steps,
            };
            let curves = run_characterization(&sweep, &cfg).map_err(classify)?;
            std::fs::create_dir_all(&out)
                .context("creating output directory")
                .map_err(AppError::Runtime)?;
            for curve in &curves {
                let path = out.join(format!("curve_{}.csv", curve.name));
                std::fs::write(&path, curve_csv(curve))
                    .context("writing curve file")
                    .map_err(AppError::Runtime)?;
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Sweep {
            config,
            key,
            values,
            out,
        } => {
            let cfg = load_config(&config)?;
            let parsed: Result<Vec<f64>, _> =
                values.split(',').map(|v| v.trim().parse::<f64>()).collect();
            let values = parsed.map_err(|_| {
                AppError::Config(anyhow::anyhow!("values must be numbers: {values}"))
            })?;
            let points = sweep_scenarios(&cfg, &key, &values).map_err(classify)?;
            std::fs::create_dir_all(&out)
                .context("creating output directory")
                .map_err(AppError::Runtime)?;
            let mut csv = String::from("x,qber,raw_rate_bps,sifted_rate_bps,secret_rate_bps\n");
            for p in &points {
                let s = &p.report.stats;
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    p.value,
                    s.qber.unwrap_or(f64::NAN),
                    s.raw_rate_bps,
                    s.sifted_rate_bps,
                    s.secret_rate_bps
                ));
                let kv = out.join(format!("metrics_{}.kv", p.value));
                std::fs::write(&kv, emit_report(&p.report, ReportFormat::Records))
                    .context("writing sweep point metrics")
                    .map_err(AppError::Runtime)?;
            }
            let key_slug = key.replace('.', "_");
            let path = out.join(format!("sweep_{key_slug}.csv"));
            std::fs::write(&path, csv)
                .context("writing sweep table")
                .map_err(AppError::Runtime)?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        Command::CalibrateQber { target, config } => {
            let cfg = load_config(&config)?;
            let result = calibrate_misalignment(&cfg, target, 2e-4).map_err(classify)?;
            println!("receiver.misalignment_rad = {}", result.misalignment_rad);
            println!(
                "# achieved QBER {:.6} at seed {}",
                result.achieved_qber, cfg.seed
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {:#}", err.message());
            ExitCode::from(err.code())
        }
    }
}
