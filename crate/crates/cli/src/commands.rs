use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mmwave_lab::absorption::{preset, preset_percentages};
use mmwave_lab::experiments::{run_point_with, sweep, AngleMode, TrialPlan};
use mmwave_lab::geometry::UlaConfig;
use mmwave_lab::{Atmosphere, LinkGeometry, PowerBudget};
use serde::Serialize;

use crate::config::load_experiment;
use crate::data::{bundled_spectra, load_all, SpectrumSource};
use crate::error::{CliError, CliResult};
use crate::output::{format_number, render, write_atomic, OutputFormat, ResultRow};

pub const THREADS_ENV: &str = "MMWAVE_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "mmwave-lab",
    version,
    about = "mmWave MIMO capacity under molecular absorption and re-radiation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the sweep described by a JSON config file.
    Sweep {
        config: PathBuf,
        /// Overrides `output_path`; without either the table goes to stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Overrides `output_format`.
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
    },
    /// Evaluate one operating point and print it as a JSON object.
    Point(PointArgs),
    /// List the built-in standard-atmosphere gas mixtures.
    Presets,
    /// Parse a config file and load its data without running any trials.
    Validate { config: PathBuf },
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct PointArgs {
    /// Elements per array.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Carrier frequency, Hz.
    #[arg(long = "f", default_value_t = 60e9)]
    pub frequency: f64,
    /// Array separation, m.
    #[arg(long = "d", default_value_t = 50.0)]
    pub distance: f64,
    /// Medium absorption coefficient, Np/m (default 0).
    #[arg(long, conflicts_with = "preset")]
    pub k: Option<f64>,
    /// Built-in gas mixture evaluated at the carrier.
    #[arg(long)]
    pub preset: Option<String>,
    /// Spectrum files for --preset (species from the file name); bundled
    /// synthetic spectra when omitted.
    #[arg(long, requires = "preset")]
    pub data: Vec<PathBuf>,
    /// Element spacing, wavelengths.
    #[arg(long, default_value_t = 0.5)]
    pub spacing: f64,
    #[arg(long, default_value_t = 90.0)]
    pub phi_deg: f64,
    #[arg(long, default_value_t = 90.0)]
    pub theta_deg: f64,
    /// Constant reception SNR, dB (default 20).
    #[arg(long, conflicts_with_all = ["power_w", "noise_dbm"])]
    pub snr_db: Option<f64>,
    /// Constant transmit power, W (default 1 in constant-power mode).
    #[arg(long)]
    pub power_w: Option<f64>,
    /// Noise power, dBm (default -100 in constant-power mode).
    #[arg(long)]
    pub noise_dbm: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draw both array orientations uniformly on [0, 180) degrees per trial.
    #[arg(long)]
    pub random_angles: bool,
}

/// Fields printed by `point`.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct PointReport {
    pub n: usize,
    pub frequency_hz: f64,
    pub distance_m: f64,
    pub k_per_m: f64,
    /// `constant_snr` or `constant_power`.
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub snr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub power_w: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub noise_dbm: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub random_angles: bool,
    pub mean_capacity_bps_hz: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_inv_condition: f64,
    pub mean_singular_values: Vec<f64>,
    pub siso_mean_bps_hz: f64,
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Sweep { config, output, format } => cmd_sweep(config, output.clone(), *format, out),
        Command::Point(args) => {
            let report = cmd_point(args)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            writeln!(out, "{text}").map_err(stdout_error)
        }
        Command::Presets => cmd_presets(out),
        Command::Validate { config } => cmd_validate(config, out),
    }
}

fn stdout_error(source: std::io::Error) -> CliError {
    CliError::Output {
        path: "<stdout>".into(),
        source,
    }
}

pub fn cmd_sweep(
    config: &std::path::Path,
    output: Option<PathBuf>,
    format: Option<OutputFormat>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let exp = load_experiment(config)?;
    let rows = sweep(&exp.spec, &exp.plan)?;
    let table: Vec<ResultRow> = rows
        .iter()
        .map(|r| ResultRow::from_sweep(r, &exp.budget_label))
        .collect();
    let bytes = render(&table, format.unwrap_or(exp.output_format));
    match output.or(exp.output_path) {
        Some(path) => write_atomic(&path, &bytes),
        None => out.write_all(&bytes).map_err(stdout_error),
    }
}

pub fn cmd_validate(config: &std::path::Path, out: &mut dyn Write) -> CliResult<()> {
    let exp = load_experiment(config)?;
    exp.spec.validate()?;
    let target = exp
        .output_path
        .map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
    writeln!(
        out,
        "ok: {} sweep points x {} trials -> {target}",
        exp.spec.grid.len(),
        exp.plan.trials
    )
    .map_err(stdout_error)
}

pub fn cmd_point(args: &PointArgs) -> CliResult<PointReport> {
    let usage = |e: mmwave_lab::Error| CliError::Usage(e.to_string());
    if let Some(k) = args.k {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(CliError::Usage(format!("--k must be a non-negative number, got {k}")));
        }
    }
    if !(args.frequency > 0.0) || !args.frequency.is_finite() {
        return Err(CliError::Usage(format!("--f must be positive, got {}", args.frequency)));
    }
    let tx = UlaConfig::new(args.n, args.spacing, args.phi_deg.to_radians()).map_err(usage)?;
    let rx = UlaConfig::new(args.n, args.spacing, args.theta_deg.to_radians()).map_err(usage)?;
    let geometry = LinkGeometry::new(tx, rx, args.distance).map_err(usage)?;

    let constant_power = args.power_w.is_some() || args.noise_dbm.is_some();
    let (budget, snr_db, power_w, noise_dbm) = if constant_power {
        let p = args.power_w.unwrap_or(1.0);
        let n = args.noise_dbm.unwrap_or(-100.0);
        (
            PowerBudget::constant_power_dbm(p, n).map_err(usage)?,
            None,
            Some(p),
            Some(n),
        )
    } else {
        let s = args.snr_db.unwrap_or(20.0);
        (PowerBudget::constant_snr_db(s).map_err(usage)?, Some(s), None, None)
    };
    let plan = TrialPlan::new(args.trials, args.seed).map_err(usage)?;

    let k = match (&args.preset, args.k) {
        (Some(name), _) => {
            let mixture = preset(name).ok_or_else(|| CliError::Usage(format!("unknown preset {name:?}")))?;
            let spectra = if args.data.is_empty() {
                bundled_spectra()
            } else {
                let sources: Vec<SpectrumSource> = args.data.iter().map(SpectrumSource::from_path).collect();
                load_all(&sources)?
            };
            Atmosphere::new(mixture, spectra)?.coefficient(args.frequency)?
        }
        (None, k) => k.unwrap_or(0.0),
    };

    let angles = if args.random_angles {
        AngleMode::RandomPerTrial
    } else {
        AngleMode::Fixed
    };
    let stats = run_point_with(&geometry, args.frequency, k, &budget, &plan, angles)?;
    Ok(PointReport {
        n: args.n,
        frequency_hz: args.frequency,
        distance_m: args.distance,
        k_per_m: k,
        mode: if constant_power {
            "constant_power"
        } else {
            "constant_snr"
        }
        .to_string(),
        snr_db,
        power_w,
        noise_dbm,
        trials: plan.trials,
        seed: plan.seed,
        random_angles: args.random_angles,
        mean_capacity_bps_hz: stats.mean,
        ci_low: stats.ci_low,
        ci_high: stats.ci_high,
        mean_inv_condition: stats.mean_inverse_condition,
        mean_singular_values: stats.mean_singular_values,
        siso_mean_bps_hz: stats.siso_mean,
    })
}

/// Table II layout: percentages as tabulated, then the stored mole fraction.
pub fn cmd_presets(out: &mut dyn Write) -> CliResult<()> {
    let mut text = String::new();
    for (name, rows) in preset_percentages() {
        let mixture = preset::<f64>(name).expect("listed presets resolve");
        text.push_str(&format!("{name}, H=0\n"));
        for (species, pct) in rows {
            let fraction = mixture.fraction(species).expect("species in preset");
            text.push_str(&format!(
                "  {species}: {pct} %  (fraction {})\n",
                format_number(fraction)
            ));
        }
    }
    out.write_all(text.as_bytes()).map_err(stdout_error)
}

/// Applies `MMWAVE_LAB_THREADS` to the global rayon pool; unset or 0 keeps
/// rayon's default of one worker per core.
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got {value:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}
