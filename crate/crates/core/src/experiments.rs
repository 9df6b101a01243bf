//! Monte-Carlo evaluation of single operating points and parameter sweeps.
//!
//! A point draws `trials` independent sets of re-radiation phases, computes
//! the capacity of each realisation and summarises the distribution. Trials
//! run on the current rayon pool; per-trial results are collected in trial
//! order and reduced sequentially, so output does not depend on the number
//! of worker threads.

use rayon::prelude::*;

use crate::absorption::Atmosphere;
use crate::error::{Error, Result};
use crate::geometry::LinkGeometry;
use crate::linalg::Matrix;
use crate::mimo::{capacity_eig, ChannelTemplate, PowerBudget};
use crate::rng::{TrialStream, SLOT_PAIR_BASE, SLOT_RX_ANGLE, SLOT_SISO, SLOT_TX_ANGLE};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialPlan {
    pub trials: usize,
    pub seed: u64,
    pub percentile_low: f64,
    pub percentile_high: f64,
}

impl Default for TrialPlan {
    fn default() -> Self {
        Self {
            trials: 5000,
            seed: 0,
            percentile_low: 0.05,
            percentile_high: 0.95,
        }
    }
}

impl TrialPlan {
    pub fn new(trials: usize, seed: u64) -> Result<Self> {
        Self {
            trials,
            seed,
            ..Self::default()
        }
        .validated()
    }

    pub fn with_percentiles(self, low: f64, high: f64) -> Result<Self> {
        Self {
            percentile_low: low,
            percentile_high: high,
            ..self
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.trials == 0 {
            return Err(Error::config("trials must be at least 1"));
        }
        if !(0.0 <= self.percentile_low && self.percentile_low < self.percentile_high && self.percentile_high <= 1.0) {
            return Err(Error::config(format!(
                "percentiles must satisfy 0 <= low < high <= 1, got {} and {}",
                self.percentile_low, self.percentile_high
            )));
        }
        Ok(self)
    }
}

/// Summary of one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityStats<T> {
    pub mean: T,
    pub ci_low: T,
    pub ci_high: T,
    pub mean_inverse_condition: T,
    pub mean_singular_values: Vec<T>,
    pub siso_mean: T,
}

/// Array orientations used for each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleMode {
    /// The orientations carried by the geometry.
    #[default]
    Fixed,
    /// Transmitter and receiver angles drawn independently and uniformly on
    /// `[0, pi)` for every trial.
    RandomPerTrial,
}

struct TrialOutcome<T> {
    capacity: T,
    inverse_condition: T,
    singular_values: Vec<T>,
    siso: T,
}

fn to_beta<T: Real>(u: f64) -> T {
    let b = T::lit(u);
    // Narrower types can round up to 1; a full cycle is the same phase.
    if b >= T::one() {
        b - T::one()
    } else {
        b
    }
}

/// Monte-Carlo point with the geometry's own orientations.
pub fn run_point<T: Real>(
    geometry: &LinkGeometry<T>,
    f: T,
    k: T,
    budget: &PowerBudget<T>,
    plan: &TrialPlan,
) -> Result<CapacityStats<T>> {
    run_point_with(geometry, f, k, budget, plan, AngleMode::Fixed)
}

pub fn run_point_with<T: Real>(
    geometry: &LinkGeometry<T>,
    f: T,
    k: T,
    budget: &PowerBudget<T>,
    plan: &TrialPlan,
    angles: AngleMode,
) -> Result<CapacityStats<T>> {
    let plan = plan.validated()?;
    let normalization = budget.normalization();
    let fixed = match angles {
        AngleMode::Fixed => Some(ChannelTemplate::new(geometry, f, k, normalization)?),
        AngleMode::RandomPerTrial => None,
    };
    let siso = ChannelTemplate::new(&LinkGeometry::parallel(1, geometry.separation)?, f, k, normalization)?;
    let (rows, cols) = (geometry.rx_count(), geometry.tx_count());

    let trial = |t: usize| -> Result<TrialOutcome<T>> {
        let mut stream = TrialStream::new(plan.seed, t as u64);
        let drawn;
        let template = match &fixed {
            Some(template) => template,
            None => {
                stream.seek(SLOT_TX_ANGLE);
                let phi = T::PI() * T::lit(stream.next_unit());
                stream.seek(SLOT_RX_ANGLE);
                let theta = T::PI() * T::lit(stream.next_unit());
                drawn = ChannelTemplate::new(&geometry.with_orientations(phi, theta), f, k, normalization)?;
                &drawn
            }
        };
        stream.seek(SLOT_PAIR_BASE);
        let betas = Matrix::from_fn(rows, cols, |_, _| to_beta::<T>(stream.next_unit()));
        let mimo = capacity_eig(&template.realize(&betas)?, budget)?;

        stream.seek(SLOT_SISO);
        let siso_beta = Matrix::filled(1, 1, to_beta::<T>(stream.next_unit()));
        let siso = capacity_eig(&siso.realize(&siso_beta)?, budget)?;
        Ok(TrialOutcome {
            capacity: mimo.capacity,
            inverse_condition: mimo.inverse_condition,
            singular_values: mimo.singular_values,
            siso: siso.capacity,
        })
    };

    let outcomes: Vec<Result<TrialOutcome<T>>> = (0..plan.trials).into_par_iter().map(trial).collect();
    let mut trials = Vec::with_capacity(outcomes.len());
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(o) => trials.push(o),
            Err(Error::Numerical { message, .. }) => {
                return Err(Error::Numerical {
                    trial: Some(t),
                    message,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(summarize(&trials, &plan))
}

/// Mean computed as an offset from the first value, so a constant sample
/// reproduces that constant exactly.
fn shifted_mean<T: Real>(values: impl Iterator<Item = T> + Clone) -> T {
    let mut it = values.clone();
    let Some(first) = it.next() else {
        return T::zero();
    };
    let (sum, n) = values.fold((T::zero(), 0usize), |(s, n), v| (s + (v - first), n + 1));
    first + sum / T::from_count(n)
}

/// Linearly interpolated empirical quantile of sorted data.
fn quantile<T: Real>(sorted: &[T], p: f64) -> T {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        return sorted[lo];
    }
    let w = T::lit(pos - lo as f64);
    sorted[lo] + w * (sorted[hi] - sorted[lo])
}

fn summarize<T: Real>(trials: &[TrialOutcome<T>], plan: &TrialPlan) -> CapacityStats<T> {
    let mut sorted: Vec<T> = trials.iter().map(|t| t.capacity).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite capacity"));
    let width = trials.first().map_or(0, |t| t.singular_values.len());
    CapacityStats {
        mean: shifted_mean(trials.iter().map(|t| t.capacity)),
        ci_low: quantile(&sorted, plan.percentile_low),
        ci_high: quantile(&sorted, plan.percentile_high),
        mean_inverse_condition: shifted_mean(trials.iter().map(|t| t.inverse_condition)),
        mean_singular_values: (0..width)
            .map(|i| shifted_mean(trials.iter().map(move |t| t.singular_values[i])))
            .collect(),
        siso_mean: shifted_mean(trials.iter().map(|t| t.siso)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Frequency,
    AbsorptionCoefficient,
    AntennaCount,
}

/// Where the medium coefficient comes from.
#[derive(Debug, Clone)]
pub enum AbsorptionSource<T> {
    /// Gas mixture with per-species spectra, evaluated at each frequency.
    Atmosphere(Atmosphere<T>),
    /// The same coefficient at every frequency (0 for vacuum).
    Constant(T),
}

impl<T: Real> AbsorptionSource<T> {
    pub fn coefficient(&self, frequency: T) -> Result<T> {
        match self {
            Self::Atmosphere(a) => a.coefficient(frequency),
            Self::Constant(k) => Ok(*k),
        }
    }

    fn check_covers(&self, frequency: T) -> Result<()> {
        match self {
            Self::Atmosphere(a) => a.check_covers(frequency),
            Self::Constant(_) => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec<T> {
    pub variable: SweepVariable,
    /// Hz, Np/m or element count, strictly increasing.
    pub grid: Vec<T>,
    /// Ignored by absorption-coefficient sweeps, which set `k` directly.
    pub absorption: AbsorptionSource<T>,
    /// Carrier for absorption-coefficient and antenna-count sweeps.
    pub frequency: T,
    /// Template; antenna-count sweeps replace the element counts.
    pub geometry: LinkGeometry<T>,
    pub budget: PowerBudget<T>,
    pub angles: AngleMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub value: T,
    pub frequency: T,
    pub absorption: T,
    pub stats: CapacityStats<T>,
}

/// A resolved sweep point.
struct PointSpec<T> {
    value: T,
    frequency: T,
    absorption: T,
    geometry: LinkGeometry<T>,
}

impl<T: Real> SweepSpec<T> {
    /// Resolves every grid value to `(frequency, k, geometry)` without
    /// running any trials. Coverage and grid errors surface here.
    fn points(&self) -> Result<Vec<PointSpec<T>>> {
        if self.grid.is_empty() {
            return Err(Error::config("sweep grid is empty"));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("sweep grid has non-finite values"));
        }
        if self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("sweep grid must be strictly increasing"));
        }
        let positive = |what: &str, v: T| {
            if v > T::zero() {
                Ok(())
            } else {
                Err(Error::config(format!("{what} must be positive, got {v}")))
            }
        };
        match self.variable {
            SweepVariable::Frequency => {
                for &f in &self.grid {
                    positive("frequency", f)?;
                    self.absorption.check_covers(f)?;
                }
                self.grid
                    .iter()
                    .map(|&f| {
                        Ok(PointSpec {
                            value: f,
                            frequency: f,
                            absorption: self.absorption.coefficient(f)?,
                            geometry: self.geometry,
                        })
                    })
                    .collect()
            }
            SweepVariable::AbsorptionCoefficient => {
                positive("frequency", self.frequency)?;
                self.grid
                    .iter()
                    .map(|&k| {
                        if k < T::zero() {
                            return Err(Error::config(format!(
                                "absorption coefficient must be non-negative, got {k}"
                            )));
                        }
                        Ok(PointSpec {
                            value: k,
                            frequency: self.frequency,
                            absorption: k,
                            geometry: self.geometry,
                        })
                    })
                    .collect()
            }
            SweepVariable::AntennaCount => {
                positive("frequency", self.frequency)?;
                self.absorption.check_covers(self.frequency)?;
                let k = self.absorption.coefficient(self.frequency)?;
                self.grid
                    .iter()
                    .map(|&n| {
                        if n < T::one() || n.fract() != T::zero() {
                            return Err(Error::config(format!(
                                "antenna count must be a positive integer, got {n}"
                            )));
                        }
                        let count = n
                            .to_usize()
                            .ok_or_else(|| Error::config(format!("antenna count {n} too large")))?;
                        Ok(PointSpec {
                            value: n,
                            frequency: self.frequency,
                            absorption: k,
                            geometry: self.geometry.with_element_count(count)?,
                        })
                    })
                    .collect()
            }
        }
    }

    /// Checks the sweep can run, without running it.
    pub fn validate(&self) -> Result<()> {
        self.points().map(|_| ())
    }
}

/// One [`CapacityStats`] row per grid value, in grid order.
pub fn sweep<T: Real>(spec: &SweepSpec<T>, plan: &TrialPlan) -> Result<Vec<SweepRow<T>>> {
    let plan = plan.validated()?;
    let points = spec.points()?;
    points
        .into_iter()
        .map(|p| {
            let stats = run_point_with(&p.geometry, p.frequency, p.absorption, &spec.budget, &plan, spec.angles)?;
            Ok(SweepRow {
                value: p.value,
                frequency: p.frequency,
                absorption: p.absorption,
                stats,
            })
        })
        .collect()
}

/// `start, start + step, ...` up to and including `stop` (within rounding).
pub fn linear_grid<T: Real>(start: T, stop: T, step: T) -> Result<Vec<T>> {
    if !(step > T::zero()) || !(stop >= start) {
        return Err(Error::config(format!("bad linear grid {start}..{stop} step {step}")));
    }
    let count = ((stop - start) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0) + 1;
    Ok((0..count).map(|i| start + T::from_count(i) * step).collect())
}

/// Log-spaced grid from `start` to `stop` with `per_decade` points per decade.
pub fn log_grid<T: Real>(start: T, stop: T, per_decade: usize) -> Result<Vec<T>> {
    if !(start > T::zero()) || !(stop >= start) || per_decade == 0 {
        return Err(Error::config(format!(
            "bad log grid {start}..{stop} with {per_decade}/decade"
        )));
    }
    let (lo, hi) = (start.log10(), stop.log10());
    let steps = ((hi - lo) * T::from_count(per_decade) + T::lit(1e-9))
        .floor()
        .to_usize()
        .unwrap_or(0);
    Ok((0..=steps)
        .map(|i| T::lit(10.0).powf(lo + T::from_count(i) / T::from_count(per_decade)))
        .collect())
}

/// 50 to 200 GHz in 0.5 GHz steps.
pub fn default_frequency_grid<T: Real>() -> Vec<T> {
    linear_grid(T::lit(50e9), T::lit(200e9), T::lit(0.5e9)).expect("valid grid")
}

/// 1e-6 to 10 Np/m, 60 points per decade.
pub fn default_absorption_grid<T: Real>() -> Vec<T> {
    log_grid(T::lit(1e-6), T::lit(1e1), 60).expect("valid grid")
}

/// 1 to 16 elements per side.
pub fn default_antenna_grid<T: Real>() -> Vec<T> {
    (1..=16).map(T::from_count).collect()
}
