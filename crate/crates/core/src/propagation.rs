//! Spreading and absorption loss, received powers, molecular noise and the
//! complex transfer function of a single antenna pair.
//!
//! The transfer function is the sum of a deterministic line-of-sight term,
//! attenuated by `exp(-k d / 2)` in amplitude, and a re-radiated term whose
//! amplitude carries the absorbed share `(1 - exp(-k d))^(1/2)` and whose
//! phase is `2 pi beta` for a caller-supplied `beta` in `[0, 1)`.
//! Together the two terms always carry the spread-only power `(c / 4 pi f d)^2`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c, wavelength, Real, BOLTZMANN, REFERENCE_TEMPERATURE};

pub type ComplexGain<T> = Complex<T>;

/// Carrier frequency (Hz), path length (m) and medium coefficient (Np/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConditions<T> {
    pub frequency: T,
    pub distance: T,
    pub absorption: T,
}

impl<T: Real> PathConditions<T> {
    pub fn new(frequency: T, distance: T, absorption: T) -> Result<Self> {
        if !(frequency > T::zero()) || !frequency.is_finite() {
            return Err(Error::domain(format!("frequency must be positive, got {frequency}")));
        }
        if !(distance > T::zero()) || !distance.is_finite() {
            return Err(Error::domain(format!("distance must be positive, got {distance}")));
        }
        if !(absorption >= T::zero()) {
            return Err(Error::domain(format!(
                "absorption coefficient must be non-negative, got {absorption}"
            )));
        }
        Ok(Self {
            frequency,
            distance,
            absorption,
        })
    }

    /// `k * d`, the optical depth of the path.
    pub fn optical_depth(&self) -> T {
        self.absorption * self.distance
    }

    /// Spread-only amplitude gain `c / (4 pi f d)`.
    pub fn spread_gain(&self) -> T {
        spread_gain(self.frequency, self.distance)
    }
}

pub(crate) fn spread_gain<T: Real>(f: T, d: T) -> T {
    c::<T>() / (T::lit(4.0) * T::PI() * f * d)
}

/// `(4 pi f d / c)^2`.
pub fn spreading_attenuation<T: Real>(f: T, d: T) -> T {
    spread_gain(f, d).powi(-2)
}

/// `exp(k d)`.
pub fn absorption_attenuation<T: Real>(conditions: &PathConditions<T>) -> T {
    conditions.optical_depth().exp()
}

/// Spreading times absorption loss.
pub fn total_attenuation<T: Real>(conditions: &PathConditions<T>) -> T {
    spreading_attenuation(conditions.frequency, conditions.distance) * absorption_attenuation(conditions)
}

/// Line-of-sight received power for transmit power `p_t`.
pub fn los_received_power<T: Real>(p_t: T, conditions: &PathConditions<T>) -> T {
    let g = conditions.spread_gain();
    p_t * g * g * (-conditions.optical_depth()).exp()
}

/// Absorbed fraction of the spread-only power, `1 - exp(-k d)`.
fn absorbed_fraction<T: Real>(conditions: &PathConditions<T>) -> T {
    -(-conditions.optical_depth()).exp_m1()
}

/// Power re-radiated towards the receiver by the absorbing molecules.
pub fn reradiated_power<T: Real>(p_t: T, conditions: &PathConditions<T>) -> T {
    let g = conditions.spread_gain();
    p_t * absorbed_fraction(conditions) * g * g
}

/// Molecular noise power spectral densities, W/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisePsd<T> {
    pub sky: T,
    pub self_induced: T,
    pub total: T,
}

/// Distance-limit sky noise `k_B T0 (c / (sqrt(4 pi) f))^2`.
///
/// The limit `d -> inf` of `1 - exp(-k d)` is 1 for every `k > 0` and 0 for
/// `k = 0`, so this is discontinuous at zero absorption.
pub fn sky_noise_psd<T: Real>(f: T, k: T) -> T {
    if k > T::zero() {
        let x = c::<T>() / ((T::lit(4.0) * T::PI()).sqrt() * f);
        T::lit(BOLTZMANN) * T::lit(REFERENCE_TEMPERATURE) * x * x
    } else {
        T::zero()
    }
}

/// Sky noise plus the self-induced (signal-correlated) component for a
/// transmit PSD `p_t`.
pub fn noise_psd<T: Real>(p_t: T, conditions: &PathConditions<T>) -> NoisePsd<T> {
    let sky = sky_noise_psd(conditions.frequency, conditions.absorption);
    let self_induced = reradiated_power(p_t, conditions);
    NoisePsd {
        sky,
        self_induced,
        total: sky + self_induced,
    }
}

/// Line-of-sight transfer function with phase `2 pi d / lambda`.
pub fn los_gain<T: Real>(conditions: &PathConditions<T>) -> ComplexGain<T> {
    let magnitude = conditions.spread_gain() * (-conditions.optical_depth() * T::half()).exp();
    let cycles = conditions.distance / wavelength(conditions.frequency);
    Complex::from_polar(magnitude, T::TAU() * cycles.fract())
}

/// Re-radiated transfer function with phase `2 pi beta`.
pub fn reradiated_gain<T: Real>(conditions: &PathConditions<T>, beta: T) -> ComplexGain<T> {
    debug_assert!(beta >= T::zero() && beta < T::one(), "beta {beta} outside [0, 1)");
    let magnitude = conditions.spread_gain() * absorbed_fraction(conditions).sqrt();
    Complex::from_polar(magnitude, T::TAU() * beta)
}

/// Superposition of the line-of-sight and re-radiated terms.
pub fn total_gain<T: Real>(conditions: &PathConditions<T>, beta: T) -> ComplexGain<T> {
    los_gain(conditions) + reradiated_gain(conditions, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::SPEED_OF_LIGHT;

    fn cond(k: f64) -> PathConditions<f64> {
        PathConditions::new(60e9, 50.0, k).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn spreading() {
        let a = spreading_attenuation(60e9, 50.0);
        assert!(close(a, 15_813_238_881.742_723, 1e-12));
        let fspl_db = 20.0 * (4.0 * std::f64::consts::PI * 50.0 * 60e9 / SPEED_OF_LIGHT).log10();
        assert!((10.0 * a.log10() - fspl_db).abs() < 1e-9);
        assert!((fspl_db - 101.990_208).abs() < 1e-6);

        let unit = SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * 60e9);
        assert!(close(spreading_attenuation(60e9, unit), 1.0, 1e-12));
        assert!(close(spreading_attenuation(60e9, 100.0), 4.0 * a, 1e-12));
    }

    #[test]
    fn absorption_loss() {
        assert_eq!(absorption_attenuation(&cond(0.0)), 1.0);
        let a50 = absorption_attenuation(&cond(2.7e-2));
        assert!(close(a50, 3.857_425_530_696_974_5, 1e-12));
        let a100 = absorption_attenuation(&PathConditions::new(60e9, 100.0, 2.7e-2).unwrap());
        assert!(close(a100, a50 * a50, 1e-12));
    }

    #[test]
    fn received_powers() {
        assert!(close(
            los_received_power(1.0, &cond(0.0)),
            6.323_815_174_603_834e-11,
            1e-12
        ));
        assert!(close(
            los_received_power(1.0, &cond(2.7e-2)),
            1.639_387_494_140_741_6e-11,
            1e-12
        ));
        assert_eq!(los_received_power(0.0, &cond(2.7e-2)), 0.0);
        let c = cond(2.7e-2);
        assert!(close(los_received_power(1.0, &c), 1.0 / total_attenuation(&c), 1e-12));

        assert_eq!(reradiated_power(1.0, &cond(0.0)), 0.0);
        assert!(close(
            reradiated_power(1.0, &cond(2.7e-2)),
            4.684_427_680_463_093e-11,
            1e-12
        ));
        assert!(close(
            reradiated_power(1.0, &cond(1e3)),
            6.323_815_174_603_834e-11,
            1e-12
        ));
    }

    #[test]
    fn sky_noise() {
        assert_eq!(sky_noise_psd(60e9, 0.0), 0.0);
        assert!(close(sky_noise_psd(60e9, 2.7e-2), 8.119_027_918_662_493e-27, 1e-12));
        assert!(close(sky_noise_psd(60e9, 1e-9), sky_noise_psd(60e9, 5.0), 0.0));
        assert!(close(sky_noise_psd(120e9, 1.0), sky_noise_psd(60e9, 1.0) / 4.0, 1e-12));

        let n = noise_psd(1.0, &cond(2.7e-2));
        assert_eq!(n.total, n.sky + n.self_induced);
        assert_eq!(n.self_induced, reradiated_power(1.0, &cond(2.7e-2)));
    }

    #[test]
    fn los_gain_values() {
        let f = 60e9;
        let lambda = SPEED_OF_LIGHT / f;
        let d = 10_000.0 * lambda;
        let g = los_gain(&PathConditions::new(f, d, 0.0).unwrap());
        assert!(g.re > 0.0);
        assert!(g.im.abs() < 1e-9 * g.re);
        assert!(close(g.re, SPEED_OF_LIGHT / (4.0 * std::f64::consts::PI * f * d), 1e-9));

        let c = cond(2.7e-2);
        assert!(close(los_gain(&c).norm(), 4.048_935_037_933_73e-6, 1e-12));
        assert!(close(los_gain(&c).norm_sqr() * total_attenuation(&c), 1.0, 1e-12));
    }

    #[test]
    fn reradiated_gain_values() {
        assert_eq!(reradiated_gain(&cond(0.0), 0.37).norm(), 0.0);
        let sat = reradiated_gain(&cond(1e3), 0.25);
        assert!(close(sat.norm(), 7.952_241_932_061_57e-6, 1e-12));
        assert!(sat.re.abs() < 1e-15);
        assert_eq!(total_gain(&cond(0.0), 0.9), los_gain(&cond(0.0)));
    }

    #[test]
    fn aligned_phases_add_magnitudes() {
        let c = cond(2.7e-2);
        let los = los_gain(&c);
        let beta = los.arg().rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU;
        let total = total_gain(&c, beta);
        assert!(close(
            total.norm(),
            los.norm() + reradiated_gain(&c, beta).norm(),
            1e-12
        ));
    }

    #[test]
    fn mean_power_over_random_phase() {
        // The cross term has zero mean, so E|H|^2 is the spread-only power.
        let c = cond(2.7e-2);
        let n = 1_000_000u64;
        let mean = (0..n)
            .map(|i| total_gain(&c, crate::rng::derive_trial_stream(11, i, 0)).norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!(close(mean, c.spread_gain().powi(2), 5e-3));
    }

    #[test]
    fn f32_agrees_with_f64() {
        let c32 = PathConditions::<f32>::new(60e9, 50.0, 2.7e-2).unwrap();
        let c64 = cond(2.7e-2);
        let g32 = reradiated_gain(&c32, 0.3).norm() as f64;
        assert!(close(g32, reradiated_gain(&c64, 0.3).norm(), 1e-5));
        assert!(close(
            spreading_attenuation(60e9f32, 50.0) as f64,
            spreading_attenuation(60e9, 50.0),
            1e-5
        ));
    }

    #[test]
    fn validation() {
        assert!(PathConditions::new(0.0, 1.0, 0.0).is_err());
        assert!(PathConditions::new(1.0, -1.0, 0.0).is_err());
        assert!(PathConditions::new(1.0, 1.0, -1e-3).is_err());
    }
}
