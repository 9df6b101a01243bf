//! Absorption-coefficient spectra, gas mixtures and the medium coefficient.
//!
//! Frequencies are in hertz and coefficients in nepers per meter, so the
//! absorption loss over `d` meters is `exp(k * d)`.
//!
//! Spectrum files are CSV with the header `frequency_hz,k_per_m`. Lines that
//! start with `#` are comments. Samples must be listed in strictly increasing
//! frequency order; out-of-order input is rejected rather than sorted.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::scalar::Real;

const HEADER: [&str; 2] = ["frequency_hz", "k_per_m"];

/// Sampled absorption coefficient of one molecular species at a fixed
/// temperature and pressure.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionSpectrum<T> {
    species: String,
    temperature: T,
    pressure: T,
    samples: Vec<(T, T)>,
}

/// Medium absorption coefficient at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumCoefficient<T> {
    pub value: T,
    pub frequency: T,
}

impl<T: Real> AbsorptionSpectrum<T> {
    /// Builds a spectrum from `(frequency_hz, k_per_m)` samples.
    pub fn new(species: impl Into<String>, temperature: T, pressure: T, samples: Vec<(T, T)>) -> Result<Self> {
        check_conditions(temperature, pressure)?;
        if samples.len() < 2 {
            return Err(Error::domain("a spectrum needs at least 2 samples"));
        }
        for (i, &(f, k)) in samples.iter().enumerate() {
            if !f.is_finite() || !k.is_finite() {
                return Err(Error::domain(format!("sample {i} is not finite")));
            }
            if k < T::zero() {
                return Err(Error::domain(format!("sample {i}: negative coefficient {k}")));
            }
            if i > 0 && f <= samples[i - 1].0 {
                return Err(Error::Ordering {
                    line: i as u64 + 2,
                    frequency: f.to_f64_lossy(),
                });
            }
        }
        Ok(Self {
            species: species.into(),
            temperature,
            pressure,
            samples,
        })
    }

    pub fn species(&self) -> &str {
        &self.species
    }

    /// Kelvin.
    pub fn temperature(&self) -> T {
        self.temperature
    }

    /// Atmospheres.
    pub fn pressure(&self) -> T {
        self.pressure
    }

    pub fn samples(&self) -> &[(T, T)] {
        &self.samples
    }

    /// Sampled frequency range `(min, max)`.
    pub fn range(&self) -> (T, T) {
        (self.samples[0].0, self.samples[self.samples.len() - 1].0)
    }

    pub fn covers(&self, frequency: T) -> bool {
        let (lo, hi) = self.range();
        frequency >= lo && frequency <= hi
    }

    /// Linear interpolation between the bracketing samples. Exact at sample
    /// points; frequencies outside the sampled range are an error.
    pub fn interpolate(&self, frequency: T) -> Result<MediumCoefficient<T>> {
        if !self.covers(frequency) {
            let (lo, hi) = self.range();
            return Err(Error::Range {
                species: self.species.clone(),
                frequency: frequency.to_f64_lossy(),
                min: lo.to_f64_lossy(),
                max: hi.to_f64_lossy(),
            });
        }
        // First sample with frequency >= the query.
        let idx = self.samples.partition_point(|&(f, _)| f < frequency);
        let (f1, k1) = self.samples[idx];
        let value = if f1 == frequency || idx == 0 {
            k1
        } else {
            let (f0, k0) = self.samples[idx - 1];
            let t = (frequency - f0) / (f1 - f0);
            k0 + t * (k1 - k0)
        };
        Ok(MediumCoefficient { value, frequency })
    }

    /// Writes the spectrum in the same CSV format [`parse_spectrum`] reads.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(HEADER).map_err(csv_io)?;
        for (f, k) in &self.samples {
            w.write_record([f.to_string(), k.to_string()]).map_err(csv_io)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_conditions<T: Real>(temperature: T, pressure: T) -> Result<()> {
    if !(temperature > T::zero()) {
        return Err(Error::domain(format!(
            "temperature must be positive, got {temperature} K"
        )));
    }
    if !(pressure > T::zero()) {
        return Err(Error::domain(format!("pressure must be positive, got {pressure} atm")));
    }
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(e.into())
}

/// Reads a `frequency_hz,k_per_m` CSV spectrum.
pub fn parse_spectrum<T: Real, R: Read>(
    source: R,
    species: &str,
    temperature: T,
    pressure: T,
) -> Result<AbsorptionSpectrum<T>> {
    check_conditions(temperature, pressure)?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(source);

    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: e.position().map_or(1, |p| p.line()),
            message: e.to_string(),
        })?
        .clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::Parse {
            line: headers.position().map_or(1, |p| p.line()),
            message: format!(
                "expected header `{}`, found `{}`",
                HEADER.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut samples: Vec<(T, T)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> Result<T> {
            let raw = record.get(i).ok_or_else(|| Error::Parse {
                line,
                message: format!("missing {name}"),
            })?;
            raw.parse::<T>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line,
                    message: format!("invalid {name} `{raw}`"),
                })
        };
        let f = field(0, "frequency")?;
        let k = field(1, "coefficient")?;
        if k < T::zero() {
            return Err(Error::domain(format!("line {line}: negative coefficient {k}")));
        }
        if let Some(&(prev, _)) = samples.last() {
            if f <= prev {
                return Err(Error::Ordering {
                    line,
                    frequency: f.to_f64_lossy(),
                });
            }
        }
        samples.push((f, k));
    }
    AbsorptionSpectrum::new(species, temperature, pressure, samples)
}

/// Named set of `(species, mole fraction)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct GasMixture<T> {
    name: String,
    components: Vec<(String, T)>,
}

impl<T: Real> GasMixture<T> {
    pub fn new(name: impl Into<String>, components: Vec<(String, T)>) -> Result<Self> {
        let mut sum = T::zero();
        for (i, (species, m)) in components.iter().enumerate() {
            if !(*m >= T::zero() && *m <= T::one()) {
                return Err(Error::domain(format!(
                    "mole fraction of {species} must lie in [0, 1], got {m}"
                )));
            }
            if components[..i].iter().any(|(s, _)| s == species) {
                return Err(Error::domain(format!("species {species} listed twice")));
            }
            sum = sum + *m;
        }
        if sum > T::one() + T::lit(1e-6) {
            return Err(Error::domain(format!("mole fractions sum to {sum}, more than 1")));
        }
        Ok(Self {
            name: name.into(),
            components,
        })
    }

    /// Reads a JSON object mapping species name to mole fraction.
    pub fn from_json(name: impl Into<String>, json: &str) -> Result<Self> {
        let map: BTreeMap<String, f64> = serde_json::from_str(json).map_err(|e| Error::Parse {
            line: e.line() as u64,
            message: e.to_string(),
        })?;
        let components = map.into_iter().map(|(s, m)| (s, T::lit(m))).collect();
        Self::new(name, components)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn components(&self) -> &[(String, T)] {
        &self.components
    }

    pub fn fraction(&self, species: &str) -> Option<T> {
        self.components.iter().find(|(s, _)| s == species).map(|&(_, m)| m)
    }

    pub fn total_fraction(&self) -> T {
        self.components.iter().fold(T::zero(), |acc, &(_, m)| acc + m)
    }

    /// Same components with every fraction multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.components.iter().map(|(s, m)| (s.clone(), *m * factor)).collect(),
        )
    }
}

/// Medium coefficient `k(f) = sum_i m_i k_i(f)`.
pub fn mixture_coefficient<T: Real>(
    mixture: &GasMixture<T>,
    spectra: &[AbsorptionSpectrum<T>],
    frequency: T,
) -> Result<MediumCoefficient<T>> {
    check_consistent(spectra)?;
    let mut value = T::zero();
    for (species, fraction) in &mixture.components {
        let spectrum = spectra
            .iter()
            .find(|s| &s.species == species)
            .ok_or_else(|| Error::MissingSpecies(species.clone()))?;
        value = value + *fraction * spectrum.interpolate(frequency)?.value;
    }
    Ok(MediumCoefficient { value, frequency })
}

fn check_consistent<T: Real>(spectra: &[AbsorptionSpectrum<T>]) -> Result<()> {
    let Some(first) = spectra.first() else {
        return Ok(());
    };
    for s in &spectra[1..] {
        if s.temperature != first.temperature {
            return Err(Error::Consistency(format!(
                "temperature ({} K for {}, {} K for {})",
                first.temperature, first.species, s.temperature, s.species
            )));
        }
        if s.pressure != first.pressure {
            return Err(Error::Consistency(format!(
                "pressure ({} atm for {}, {} atm for {})",
                first.pressure, first.species, s.pressure, s.species
            )));
        }
    }
    Ok(())
}

/// A mixture bound to the spectra of its species.
#[derive(Debug, Clone)]
pub struct Atmosphere<T> {
    mixture: GasMixture<T>,
    spectra: Vec<AbsorptionSpectrum<T>>,
}

impl<T: Real> Atmosphere<T> {
    /// Checks species coverage and temperature/pressure agreement up front.
    pub fn new(mixture: GasMixture<T>, spectra: Vec<AbsorptionSpectrum<T>>) -> Result<Self> {
        check_consistent(&spectra)?;
        for (species, _) in &mixture.components {
            if !spectra.iter().any(|s| &s.species == species) {
                return Err(Error::MissingSpecies(species.clone()));
            }
        }
        Ok(Self { mixture, spectra })
    }

    pub fn mixture(&self) -> &GasMixture<T> {
        &self.mixture
    }

    pub fn spectra(&self) -> &[AbsorptionSpectrum<T>] {
        &self.spectra
    }

    pub fn coefficient(&self, frequency: T) -> Result<T> {
        mixture_coefficient(&self.mixture, &self.spectra, frequency).map(|c| c.value)
    }

    /// Errors with the first spectrum that does not cover `frequency`.
    pub fn check_covers(&self, frequency: T) -> Result<()> {
        for (species, _) in &self.mixture.components {
            if let Some(s) = self.spectra.iter().find(|s| &s.species == species) {
                s.interpolate(frequency)?;
            }
        }
        Ok(())
    }
}

/// Standard-atmosphere mixing ratios at sea level, in percent, for the five
/// USA climate models.
const PRESET_TABLE: [(&str, [(&str, &str); 8]); 5] = [
    (
        "USA model, mean latitude, summer",
        [
            ("H2O", "1.860000"),
            ("CO2", "0.033000"),
            ("O3", "0.000003"),
            ("N2O", "0.000032"),
            ("CO", "0.000015"),
            ("CH4", "0.000170"),
            ("O2", "20.900001"),
            ("N2", "77.206000"),
        ],
    ),
    (
        "USA model, mean latitude, winter",
        [
            ("H2O", "0.432000"),
            ("CO2", "0.033000"),
            ("O3", "0.000003"),
            ("N2O", "0.000032"),
            ("CO", "0.000015"),
            ("CH4", "0.000170"),
            ("O2", "20.900001"),
            ("N2", "78.634779"),
        ],
    ),
    (
        "USA model, high latitude, summer",
        [
            ("H2O", "1.190000"),
            ("CO2", "0.033000"),
            ("O3", "0.000002"),
            ("N2O", "0.000031"),
            ("CO", "0.000015"),
            ("CH4", "0.000170"),
            ("O2", "20.900001"),
            ("N2", "77.876781"),
        ],
    ),
    (
        "USA model, high latitude, winter",
        [
            ("H2O", "0.141000"),
            ("CO2", "0.033000"),
            ("O3", "0.000002"),
            ("N2O", "0.000032"),
            ("CO", "0.000015"),
            ("CH4", "0.000170"),
            ("O2", "20.900001"),
            ("N2", "78.925780"),
        ],
    ),
    (
        "USA model, tropics",
        [
            ("H2O", "2.590000"),
            ("CO2", "0.033000"),
            ("O3", "0.000003"),
            ("N2O", "0.000032"),
            ("CO", "0.000015"),
            ("CH4", "0.000170"),
            ("O2", "20.900001"),
            ("N2", "76.476779"),
        ],
    ),
];

/// Percent values exactly as tabulated, for display at printed precision.
pub fn preset_percentages() -> impl Iterator<Item = (&'static str, &'static [(&'static str, &'static str)])> {
    PRESET_TABLE.iter().map(|(name, rows)| (*name, &rows[..]))
}

/// Shifts the decimal point instead of dividing, so the fraction is the
/// nearest float to the tabulated decimal (`0.141%` gives exactly `0.00141`).
fn percent_to_fraction<T: Real>(pct: &str) -> T {
    format!("{pct}e-2")
        .parse()
        .ok()
        .expect("preset table holds decimal literals")
}

/// The five built-in standard-atmosphere mixtures (percent / 100).
pub fn builtin_presets<T: Real>() -> Vec<GasMixture<T>> {
    PRESET_TABLE
        .iter()
        .map(|(name, rows)| {
            let components = rows
                .iter()
                .map(|&(s, pct)| (s.to_string(), percent_to_fraction(pct)))
                .collect();
            GasMixture::new(*name, components).expect("preset table is valid")
        })
        .collect()
}

/// Looks a preset up by name. A trailing `, H=0` altitude tag is accepted.
pub fn preset<T: Real>(name: &str) -> Option<GasMixture<T>> {
    let wanted = name.trim().trim_end_matches(", H=0");
    builtin_presets()
        .into_iter()
        .find(|m| m.name.eq_ignore_ascii_case(wanted))
}
