//! Channel matrix assembly and Shannon capacity without transmitter CSI.
//!
//! Entry `(i, j)` is the transfer function from transmit element `j` to
//! receive element `i` over the exact pair distance `d_ij`, with an
//! independent re-radiation phase per pair.
//!
//! Capacity is `log2 det(I + P/(n_t sigma^2) H H^†)`. It is computed two
//! ways: from a Cholesky factorisation of that Hermitian matrix
//! ([`capacity_det`]) and from the singular values of `H`
//! ([`capacity_eig`]). Each checks the other.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{distance_matrix, DistanceMatrix, LinkGeometry};
use crate::linalg::{hermitian_log2_det, singular_values, CMatrix, Matrix};
use crate::propagation::{los_gain, reradiated_gain, spread_gain, PathConditions};
use crate::scalar::{db_to_linear, dbm_to_watts, Real};

/// Singular values below `RANK_TOLERANCE * sigma_max` do not count towards rank.
pub const RANK_TOLERANCE: f64 = 1e-9;

/// How channel entries are scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Divided by the spread-only gain over the centre distance, `c/(4 pi f D)`.
    /// Received power, and with it the SNR, then does not depend on `k` or `f`.
    ConstantSnr,
    /// Physical gains.
    RawGain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerBudget<T> {
    /// Reception SNR, linear; stands in for `P / sigma^2` on normalised channels.
    ConstantSnr { snr: T },
    /// Total transmit power and noise power, watts.
    ConstantPower { total_power: T, noise_power: T },
}

impl<T: Real> PowerBudget<T> {
    pub fn constant_snr(snr: T) -> Result<Self> {
        if !(snr > T::zero()) || !snr.is_finite() {
            return Err(Error::domain(format!("SNR must be positive, got {snr}")));
        }
        Ok(Self::ConstantSnr { snr })
    }

    pub fn constant_snr_db(snr_db: T) -> Result<Self> {
        Self::constant_snr(db_to_linear(snr_db))
    }

    pub fn constant_power(total_power: T, noise_power: T) -> Result<Self> {
        if !(total_power > T::zero()) || !total_power.is_finite() {
            return Err(Error::domain(format!(
                "transmit power must be positive, got {total_power} W"
            )));
        }
        if !(noise_power > T::zero()) || !noise_power.is_finite() {
            return Err(Error::domain(format!(
                "noise power must be positive, got {noise_power} W"
            )));
        }
        Ok(Self::ConstantPower {
            total_power,
            noise_power,
        })
    }

    pub fn constant_power_dbm(total_power: T, noise_dbm: T) -> Result<Self> {
        Self::constant_power(total_power, dbm_to_watts(noise_dbm))
    }

    /// 1 W transmit power against a -100 dBm noise floor.
    pub fn default_constant_power() -> Self {
        Self::ConstantPower {
            total_power: T::one(),
            noise_power: T::lit(1e-13),
        }
    }

    /// Channel normalisation this budget is defined against.
    pub fn normalization(&self) -> Normalization {
        match self {
            Self::ConstantSnr { .. } => Normalization::ConstantSnr,
            Self::ConstantPower { .. } => Normalization::RawGain,
        }
    }

    /// `P / sigma^2`.
    pub fn power_ratio(&self) -> T {
        match *self {
            Self::ConstantSnr { snr } => snr,
            Self::ConstantPower {
                total_power,
                noise_power,
            } => total_power / noise_power,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix<T> {
    pub entries: CMatrix<T>,
    pub frequency: T,
    pub absorption: T,
    pub normalization: Normalization,
}

impl<T: Real> ChannelMatrix<T> {
    pub fn rx_count(&self) -> usize {
        self.entries.rows()
    }

    pub fn tx_count(&self) -> usize {
        self.entries.cols()
    }

    /// Wraps an arbitrary matrix, e.g. for testing the capacity routines.
    pub fn from_entries(entries: CMatrix<T>, normalization: Normalization) -> Self {
        Self {
            entries,
            frequency: T::zero(),
            absorption: T::zero(),
            normalization,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult<T> {
    /// bit/s/Hz.
    pub capacity: T,
    /// Descending, `min(n_r, n_t)` values.
    pub singular_values: Vec<T>,
    pub rank: usize,
    /// `sigma_min / sigma_max`, 0 when `sigma_min` is numerically zero.
    pub inverse_condition: T,
}

/// The beta-independent parts of a channel: line-of-sight gains and
/// re-radiation magnitudes, already normalised. Realising a channel for a
/// set of phases is then one complex multiply-add per entry.
#[derive(Debug, Clone)]
pub struct ChannelTemplate<T> {
    los: CMatrix<T>,
    reradiated_magnitude: Matrix<T>,
    frequency: T,
    absorption: T,
    normalization: Normalization,
}

impl<T: Real> ChannelTemplate<T> {
    pub fn new(geometry: &LinkGeometry<T>, frequency: T, absorption: T, normalization: Normalization) -> Result<Self> {
        let distances = distance_matrix(geometry, frequency);
        Self::from_distances(&distances, geometry.separation, frequency, absorption, normalization)
    }

    pub fn from_distances(
        distances: &DistanceMatrix<T>,
        separation: T,
        frequency: T,
        absorption: T,
        normalization: Normalization,
    ) -> Result<Self> {
        let scale = match normalization {
            Normalization::ConstantSnr => spread_gain(frequency, separation).recip(),
            Normalization::RawGain => T::one(),
        };
        let (rows, cols) = distances.shape();
        let mut los = CMatrix::filled(rows, cols, Complex::new(T::zero(), T::zero()));
        let mut rerad = Matrix::filled(rows, cols, T::zero());
        for i in 0..rows {
            for j in 0..cols {
                let c = PathConditions::new(frequency, distances.get(i, j), absorption)?;
                los[(i, j)] = los_gain(&c) * scale;
                rerad[(i, j)] = reradiated_gain(&c, T::zero()).norm() * scale;
            }
        }
        Ok(Self {
            los,
            reradiated_magnitude: rerad,
            frequency,
            absorption,
            normalization,
        })
    }

    pub fn shape(&self) -> (usize, usize) {
        self.los.shape()
    }

    /// Channel for the given per-pair phases (`n_r x n_t`, each in `[0, 1)`).
    pub fn realize(&self, betas: &Matrix<T>) -> Result<ChannelMatrix<T>> {
        if betas.shape() != self.shape() {
            return Err(Error::Shape {
                expected: self.shape(),
                actual: betas.shape(),
            });
        }
        let (rows, cols) = self.shape();
        let entries = CMatrix::from_fn(rows, cols, |i, j| {
            let m = self.reradiated_magnitude[(i, j)];
            self.los[(i, j)] + Complex::from_polar(m, T::TAU() * betas[(i, j)])
        });
        Ok(ChannelMatrix {
            entries,
            frequency: self.frequency,
            absorption: self.absorption,
            normalization: self.normalization,
        })
    }
}

/// Builds `H` for `geometry` at frequency `f` and medium coefficient `k`.
pub fn build_channel<T: Real>(
    geometry: &LinkGeometry<T>,
    f: T,
    k: T,
    betas: &Matrix<T>,
    normalization: Normalization,
) -> Result<ChannelMatrix<T>> {
    let expected = (geometry.rx_count(), geometry.tx_count());
    if betas.shape() != expected {
        return Err(Error::Shape {
            expected,
            actual: betas.shape(),
        });
    }
    ChannelTemplate::new(geometry, f, k, normalization)?.realize(betas)
}

/// `P / (n_t sigma^2)`, checking that the budget matches the normalisation.
fn snr_per_stream<T: Real>(channel: &ChannelMatrix<T>, budget: &PowerBudget<T>) -> Result<T> {
    if budget.normalization() != channel.normalization {
        return Err(Error::config(format!(
            "{:?} budget cannot be applied to a {:?} channel",
            budget.normalization(),
            channel.normalization
        )));
    }
    if channel.tx_count() == 0 {
        return Err(Error::config("channel has no transmit antennas"));
    }
    Ok(budget.power_ratio() / T::from_count(channel.tx_count()))
}

/// Capacity via `log2 det(I + P/(n_t sigma^2) H H^†)`.
pub fn capacity_det<T: Real>(channel: &ChannelMatrix<T>, budget: &PowerBudget<T>) -> Result<T> {
    let s = snr_per_stream(channel, budget)?;
    let mut m = channel.entries.gram().scale(s);
    for i in 0..m.rows() {
        m[(i, i)].re = m[(i, i)].re + T::one();
    }
    hermitian_log2_det(&m)
}

/// Capacity as `sum_i log2(1 + P sigma_i^2 / (n_t sigma^2))`, with rank and
/// conditioning diagnostics.
pub fn capacity_eig<T: Real>(channel: &ChannelMatrix<T>, budget: &PowerBudget<T>) -> Result<CapacityResult<T>> {
    let s = snr_per_stream(channel, budget)?;
    let singular_values = singular_values(&channel.entries)?;
    let capacity = singular_values
        .iter()
        .fold(T::zero(), |acc, &sv| acc + (s * sv * sv).ln_1p())
        / T::LN_2();
    let (rank, inverse_condition) = match (singular_values.first(), singular_values.last()) {
        (Some(&max), Some(&min)) if max > T::zero() => {
            let floor = max * T::lit(RANK_TOLERANCE);
            let rank = singular_values.iter().filter(|&&sv| sv > floor).count();
            let inv = if min > floor { min / max } else { T::zero() };
            (rank, inv)
        }
        _ => (0, T::zero()),
    };
    Ok(CapacityResult {
        capacity,
        singular_values,
        rank,
        inverse_condition,
    })
}

/// Capacity of the single-antenna link over `separation` under the same budget.
pub fn siso_reference<T: Real>(budget: &PowerBudget<T>, f: T, separation: T, k: T, beta: T) -> Result<T> {
    let geometry = LinkGeometry::parallel(1, separation)?;
    let betas = Matrix::filled(1, 1, beta);
    let channel = build_channel(&geometry, f, k, &betas, budget.normalization())?;
    Ok(capacity_eig(&channel, budget)?.capacity)
}
