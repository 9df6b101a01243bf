//! Spectrum loading, including the synthetic spectra compiled into the binary.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use mmwave_lab::absorption::parse_spectrum;
use mmwave_lab::AbsorptionSpectrum;

use crate::error::{CliError, CliResult};

/// Conditions the bundled spectra were generated for.
pub const BUNDLED_TEMPERATURE_K: f64 = 273.0;
pub const BUNDLED_PRESSURE_ATM: f64 = 1.0;

const BUNDLED: [(&str, &str); 8] = [
    ("H2O", include_str!("../../../data/spectra/h2o.csv")),
    ("CO2", include_str!("../../../data/spectra/co2.csv")),
    ("O3", include_str!("../../../data/spectra/o3.csv")),
    ("N2O", include_str!("../../../data/spectra/n2o.csv")),
    ("CO", include_str!("../../../data/spectra/co.csv")),
    ("CH4", include_str!("../../../data/spectra/ch4.csv")),
    ("O2", include_str!("../../../data/spectra/o2.csv")),
    ("N2", include_str!("../../../data/spectra/n2.csv")),
];

/// Synthetic Lorentzian spectra for every preset species (273 K, 1 atm).
/// Placeholders for real database exports, not measurements.
pub fn bundled_spectra() -> Vec<AbsorptionSpectrum> {
    BUNDLED
        .iter()
        .map(|(species, text)| {
            parse_spectrum(text.as_bytes(), *species, BUNDLED_TEMPERATURE_K, BUNDLED_PRESSURE_ATM)
                .expect("bundled spectra are well formed")
        })
        .collect()
}

/// One spectrum file and the conditions it was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSource {
    pub path: PathBuf,
    pub species: String,
    pub temperature_k: f64,
    pub pressure_atm: f64,
}

impl SpectrumSource {
    /// Species from the file stem (`o2.csv` is O2), bundled conditions.
    pub fn from_path(path: impl Into<PathBuf>) -> Self {
        let path = path.into();
        let species = path
            .file_stem()
            .map(|s| s.to_string_lossy().to_uppercase())
            .unwrap_or_default();
        Self {
            path,
            species,
            temperature_k: BUNDLED_TEMPERATURE_K,
            pressure_atm: BUNDLED_PRESSURE_ATM,
        }
    }

    pub fn load(&self) -> CliResult<AbsorptionSpectrum> {
        let file = File::open(&self.path).map_err(|e| CliError::Input {
            path: self.path.clone(),
            source: e.into(),
        })?;
        parse_spectrum(
            BufReader::new(file),
            self.species.as_str(),
            self.temperature_k,
            self.pressure_atm,
        )
        .map_err(|source| CliError::Input {
            path: self.path.clone(),
            source,
        })
    }
}

pub fn load_all(sources: &[SpectrumSource]) -> CliResult<Vec<AbsorptionSpectrum>> {
    sources.iter().map(SpectrumSource::load).collect()
}

/// `path` unchanged if absolute, otherwise relative to `base`.
pub fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}
