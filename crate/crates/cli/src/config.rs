//! Experiment files: one JSON document per sweep.
//!
//! ```json
//! {
//!   "experiment": {
//!     "variable": "frequency",
//!     "grid": {"start": 50e9, "stop": 200e9, "step": 0.5e9},
//!     "atmosphere": {"preset": "USA model, tropics"},
//!     "geometry": {"n": 3, "spacing_wavelengths": 0.5, "phi_deg": 90, "theta_deg": 90, "distance_m": 50},
//!     "budget": {"mode": "constant_snr", "snr_db": 20}
//!   },
//!   "trials": 5000,
//!   "seed": 7,
//!   "output_path": "tropics.csv"
//! }
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use mmwave_lab::absorption::preset;
use mmwave_lab::experiments::{
    default_absorption_grid, default_antenna_grid, default_frequency_grid, linear_grid, log_grid, AbsorptionSource,
    AngleMode, SweepVariable, TrialPlan,
};
use mmwave_lab::geometry::UlaConfig;
use mmwave_lab::{Atmosphere, GasMixture, LinkGeometry, PowerBudget, SweepSpec};
use serde::Deserialize;

use crate::data::{bundled_spectra, load_all, resolve, SpectrumSource, BUNDLED_PRESSURE_ATM, BUNDLED_TEMPERATURE_K};
use crate::error::{CliError, CliResult};
use crate::output::OutputFormat;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub data_paths: Vec<DataPath>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub output_format: OutputFormat,
    /// `[low, high]` quantiles for the interval columns.
    #[serde(default)]
    pub percentiles: Option<[f64; 2]>,
}

fn default_trials() -> usize {
    TrialPlan::default().trials
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum DataPath {
    /// Species taken from the file stem.
    Path(PathBuf),
    Entry(DataEntry),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataEntry {
    pub path: PathBuf,
    #[serde(default)]
    pub species: Option<String>,
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
    #[serde(default = "default_pressure")]
    pub pressure_atm: f64,
}

fn default_temperature() -> f64 {
    BUNDLED_TEMPERATURE_K
}

fn default_pressure() -> f64 {
    BUNDLED_PRESSURE_ATM
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableConfig {
    Frequency,
    AbsorptionCoefficient,
    AntennaCount,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridConfig {
    List(Vec<f64>),
    Linear {
        start: f64,
        stop: f64,
        step: f64,
    },
    Log {
        log_start: f64,
        log_stop: f64,
        points_per_decade: usize,
    },
}

/// Exactly one of the three fields.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtmosphereConfig {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub mixture: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    pub k_per_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub n: usize,
    pub spacing_wavelengths: f64,
    pub phi_deg: f64,
    pub theta_deg: f64,
    pub distance_m: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            n: 3,
            spacing_wavelengths: 0.5,
            phi_deg: 90.0,
            theta_deg: 90.0,
            distance_m: 50.0,
        }
    }
}

impl GeometryConfig {
    pub fn build(&self) -> mmwave_lab::Result<LinkGeometry> {
        let tx = UlaConfig::new(self.n, self.spacing_wavelengths, self.phi_deg.to_radians())?;
        let rx = UlaConfig::new(self.n, self.spacing_wavelengths, self.theta_deg.to_radians())?;
        LinkGeometry::new(tx, rx, self.distance_m)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum BudgetConfig {
    ConstantSnr {
        #[serde(default = "default_snr_db")]
        snr_db: f64,
    },
    ConstantPower {
        #[serde(default = "default_power_w")]
        power_w: f64,
        #[serde(default = "default_noise_dbm")]
        noise_dbm: f64,
    },
}

fn default_snr_db() -> f64 {
    20.0
}

fn default_power_w() -> f64 {
    1.0
}

fn default_noise_dbm() -> f64 {
    -100.0
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self::ConstantSnr {
            snr_db: default_snr_db(),
        }
    }
}

impl BudgetConfig {
    pub fn build(&self) -> mmwave_lab::Result<PowerBudget> {
        match *self {
            Self::ConstantSnr { snr_db } => PowerBudget::constant_snr_db(snr_db),
            Self::ConstantPower { power_w, noise_dbm } => PowerBudget::constant_power_dbm(power_w, noise_dbm),
        }
    }

    /// Value of the `snr_db_or_power_mode` column.
    pub fn label(&self) -> String {
        match *self {
            Self::ConstantSnr { snr_db } => crate::output::format_number(snr_db),
            Self::ConstantPower { .. } => "constant_power".to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnglesConfig {
    #[default]
    Fixed,
    RandomPerTrial,
}

impl From<AnglesConfig> for AngleMode {
    fn from(a: AnglesConfig) -> Self {
        match a {
            AnglesConfig::Fixed => AngleMode::Fixed,
            AnglesConfig::RandomPerTrial => AngleMode::RandomPerTrial,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub variable: VariableConfig,
    /// Defaults per variable: 50 to 200 GHz in 0.5 GHz steps, 1e-6 to 10
    /// Np/m at 60 points per decade, or 1 to 16 elements.
    #[serde(default)]
    pub grid: Option<GridConfig>,
    /// Vacuum when absent.
    #[serde(default)]
    pub atmosphere: Option<AtmosphereConfig>,
    #[serde(default = "default_frequency")]
    pub frequency_hz: f64,
    #[serde(default)]
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub angles: AnglesConfig,
}

fn default_frequency() -> f64 {
    60e9
}

/// A config file resolved into a runnable sweep.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub spec: SweepSpec,
    pub plan: TrialPlan,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub budget_label: String,
}

impl RunConfig {
    pub fn from_json(text: &str, path: &Path) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: format!("cannot read: {e}"),
        })?;
        Self::from_json(&text, path)
    }

    /// Loads spectra and builds the sweep; runs nothing.
    pub fn resolve(&self, config_path: &Path) -> CliResult<Experiment> {
        let base = config_path.parent().unwrap_or(Path::new(""));
        let field = |name: &str, e: mmwave_lab::Error| CliError::Config {
            path: config_path.to_path_buf(),
            message: format!("{name}: {e}"),
        };

        let mut plan = TrialPlan {
            trials: self.trials,
            seed: self.seed,
            ..TrialPlan::default()
        };
        if let Some([low, high]) = self.percentiles {
            plan.percentile_low = low;
            plan.percentile_high = high;
        }
        let plan = plan.validated().map_err(|e| field("trials/percentiles", e))?;

        let exp = &self.experiment;
        let geometry = exp.geometry.build().map_err(|e| field("experiment.geometry", e))?;
        let budget = exp.budget.build().map_err(|e| field("experiment.budget", e))?;
        let variable = match exp.variable {
            VariableConfig::Frequency => SweepVariable::Frequency,
            VariableConfig::AbsorptionCoefficient => SweepVariable::AbsorptionCoefficient,
            VariableConfig::AntennaCount => SweepVariable::AntennaCount,
        };
        let grid = match &exp.grid {
            None => match variable {
                SweepVariable::Frequency => default_frequency_grid(),
                SweepVariable::AbsorptionCoefficient => default_absorption_grid(),
                SweepVariable::AntennaCount => default_antenna_grid(),
            },
            Some(GridConfig::List(values)) => values.clone(),
            Some(GridConfig::Linear { start, stop, step }) => {
                linear_grid(*start, *stop, *step).map_err(|e| field("experiment.grid", e))?
            }
            Some(GridConfig::Log {
                log_start,
                log_stop,
                points_per_decade,
            }) => log_grid(*log_start, *log_stop, *points_per_decade).map_err(|e| field("experiment.grid", e))?,
        };

        let sources: Vec<SpectrumSource> = self
            .data_paths
            .iter()
            .map(|d| match d {
                DataPath::Path(p) => SpectrumSource::from_path(resolve(base, p)),
                DataPath::Entry(e) => {
                    let mut s = SpectrumSource::from_path(resolve(base, &e.path));
                    if let Some(species) = &e.species {
                        s.species = species.clone();
                    }
                    s.temperature_k = e.temperature_k;
                    s.pressure_atm = e.pressure_atm;
                    s
                }
            })
            .collect();
        let absorption = build_absorption(exp.atmosphere.as_ref(), &sources, config_path)?;

        let spec = SweepSpec {
            variable,
            grid,
            absorption,
            frequency: exp.frequency_hz,
            geometry,
            budget,
            angles: exp.angles.into(),
        };
        Ok(Experiment {
            spec,
            plan,
            output_path: self.output_path.as_ref().map(|p| resolve(base, p)),
            output_format: self.output_format,
            budget_label: exp.budget.label(),
        })
    }
}

fn build_absorption(
    atmosphere: Option<&AtmosphereConfig>,
    sources: &[SpectrumSource],
    config_path: &Path,
) -> CliResult<AbsorptionSource<f64>> {
    let invalid = |message: String| CliError::Config {
        path: config_path.to_path_buf(),
        message: format!("experiment.atmosphere: {message}"),
    };
    let Some(a) = atmosphere else {
        return Ok(AbsorptionSource::Constant(0.0));
    };
    let mixture = match (&a.preset, &a.mixture, a.k_per_m) {
        (None, None, Some(k)) => {
            if !(k >= 0.0) || !k.is_finite() {
                return Err(invalid(format!("k_per_m must be non-negative, got {k}")));
            }
            return Ok(AbsorptionSource::Constant(k));
        }
        (Some(name), None, None) => preset(name).ok_or_else(|| invalid(format!("unknown preset {name:?}")))?,
        (None, Some(map), None) => GasMixture::new("custom", map.iter().map(|(s, &m)| (s.clone(), m)).collect())
            .map_err(|e| invalid(e.to_string()))?,
        _ => return Err(invalid("set exactly one of preset, mixture or k_per_m".into())),
    };
    let spectra = if sources.is_empty() {
        bundled_spectra()
    } else {
        load_all(sources)?
    };
    Ok(AbsorptionSource::Atmosphere(
        Atmosphere::new(mixture, spectra).map_err(|e| invalid(e.to_string()))?,
    ))
}

/// Parses and resolves a config file in one step.
pub fn load_experiment(path: &Path) -> CliResult<Experiment> {
    RunConfig::load(path)?.resolve(path)
}
