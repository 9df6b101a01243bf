//! Millimeter-wave MIMO capacity with molecular absorption and re-radiation.
//!
//! Resonating atmospheric molecules (oxygen near 60 and 120 GHz, water
//! vapour near 180 GHz) attenuate a line-of-sight signal and re-emit part of
//! the absorbed energy with a random phase. The re-emitted component acts as
//! an extra non-line-of-sight path and raises the rank of an otherwise
//! rank-deficient line-of-sight MIMO channel.
//!
//! Module map:
//!
//! * [`absorption`]: per-species coefficient spectra, gas mixtures, presets.
//! * [`geometry`]: two uniform linear arrays and their element distances.
//! * [`propagation`]: attenuation, received powers, noise PSDs, transfer functions.
//! * [`mimo`]: channel matrix assembly and Shannon capacity.
//! * [`experiments`]: seeded Monte-Carlo points and parameter sweeps.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`). The aliases
//! below fix the scalar for the common cases.

pub mod absorption;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod linalg;
pub mod mimo;
pub mod propagation;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type AbsorptionSpectrum = absorption::AbsorptionSpectrum<f64>;
pub type GasMixture = absorption::GasMixture<f64>;
pub type Atmosphere = absorption::Atmosphere<f64>;
pub type UlaConfig = geometry::UlaConfig<f64>;
pub type LinkGeometry = geometry::LinkGeometry<f64>;
pub type DistanceMatrix = geometry::DistanceMatrix<f64>;
pub type PathConditions = propagation::PathConditions<f64>;
pub type ComplexGain = propagation::ComplexGain<f64>;
pub type ChannelMatrix = mimo::ChannelMatrix<f64>;
pub type CapacityResult = mimo::CapacityResult<f64>;
pub type PowerBudget = mimo::PowerBudget<f64>;
pub type CapacityStats = experiments::CapacityStats<f64>;
pub type SweepSpec = experiments::SweepSpec<f64>;
pub type SweepRow = experiments::SweepRow<f64>;

pub type LinkGeometryF32 = geometry::LinkGeometry<f32>;
pub type PathConditionsF32 = propagation::PathConditions<f32>;
pub type ChannelMatrixF32 = mimo::ChannelMatrix<f32>;
pub type CapacityResultF32 = mimo::CapacityResult<f32>;
