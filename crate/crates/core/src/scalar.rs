//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the physics and linear algebra are written against.
///
/// Implemented for `f32` and `f64`. The Monte-Carlo drivers and the CLI run
/// in `f64`; `f32` is supported for the closed-form routines where the
/// reduced precision is acceptable.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FromStr + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Infallible for the supported types.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count or index.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Reference temperature of the sky-noise model, K.
pub const REFERENCE_TEMPERATURE: f64 = 296.0;

pub(crate) fn c<T: Real>() -> T {
    T::lit(SPEED_OF_LIGHT)
}

/// Free-space wavelength `c / f`.
pub fn wavelength<T: Real>(frequency: T) -> T {
    c::<T>() / frequency
}

/// `10^(db/10)`.
pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// Power in dBm to watts.
pub fn dbm_to_watts<T: Real>(dbm: T) -> T {
    db_to_linear(dbm) * T::lit(1e-3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        assert_eq!(db_to_linear(20.0_f64), 100.0);
        assert!((dbm_to_watts(-100.0_f64) - 1e-13).abs() < 1e-27);
        assert!((wavelength(60e9_f64) - 4.996_540_966_666_667e-3).abs() < 1e-15);
        assert!((wavelength(60e9_f32) - 4.996_541e-3).abs() < 1e-9);
    }
}
