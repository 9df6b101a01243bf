//! Planar placement of two uniform linear arrays.
//!
//! The transmitter array is centred at the origin and the receiver array at
//! `(D, 0)`. Each array's orientation is measured from the link axis as seen
//! from that array: the transmitter angle from the transmitter→receiver
//! direction, the receiver angle from the receiver→transmitter direction.
//! 90° on both sides gives two parallel broadside arrays, and swapping the
//! two angles mirrors the link, transposing the distance matrix. Element
//! spacing is specified in wavelengths and therefore scales with the carrier.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{wavelength, Real};

pub type Point<T> = [T; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UlaConfig<T> {
    pub element_count: usize,
    /// Inter-element spacing as a multiple of the wavelength.
    pub spacing_wavelengths: T,
    /// Radians from the link axis.
    pub orientation: T,
}

impl<T: Real> UlaConfig<T> {
    pub fn new(element_count: usize, spacing_wavelengths: T, orientation: T) -> Result<Self> {
        if element_count == 0 {
            return Err(Error::domain("an array needs at least one element"));
        }
        if !(spacing_wavelengths > T::zero()) || !spacing_wavelengths.is_finite() {
            return Err(Error::domain(format!(
                "element spacing must be positive, got {spacing_wavelengths} wavelengths"
            )));
        }
        if !orientation.is_finite() {
            return Err(Error::domain("orientation must be finite"));
        }
        Ok(Self {
            element_count,
            spacing_wavelengths,
            orientation,
        })
    }

    /// Half-wavelength broadside array.
    pub fn broadside(element_count: usize) -> Result<Self> {
        Self::new(element_count, T::half(), T::FRAC_PI_2())
    }

    pub fn with_orientation(self, orientation: T) -> Self {
        Self { orientation, ..self }
    }

    pub fn with_element_count(self, element_count: usize) -> Result<Self> {
        Self::new(element_count, self.spacing_wavelengths, self.orientation)
    }

    /// Distance between the end elements at the given wavelength.
    pub fn aperture(&self, wavelength: T) -> T {
        T::from_count(self.element_count - 1) * self.spacing_wavelengths * wavelength
    }
}

/// Positions of the array elements, centred on `center` and ordered along
/// `(cos orientation, sin orientation)`.
pub fn element_positions<T: Real>(config: &UlaConfig<T>, center: Point<T>, wavelength: T) -> Vec<Point<T>> {
    let spacing = config.spacing_wavelengths * wavelength;
    let (sin, cos) = config.orientation.sin_cos();
    let mid = T::from_count(config.element_count - 1) * T::half();
    (0..config.element_count)
        .map(|j| {
            let offset = (T::from_count(j) - mid) * spacing;
            [center[0] + offset * cos, center[1] + offset * sin]
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry<T> {
    pub transmitter: UlaConfig<T>,
    pub receiver: UlaConfig<T>,
    /// Centre-to-centre separation in meters.
    pub separation: T,
}

impl<T: Real> LinkGeometry<T> {
    pub fn new(transmitter: UlaConfig<T>, receiver: UlaConfig<T>, separation: T) -> Result<Self> {
        if !(separation > T::zero()) || !separation.is_finite() {
            return Err(Error::domain(format!(
                "array separation must be positive, got {separation} m"
            )));
        }
        Ok(Self {
            transmitter,
            receiver,
            separation,
        })
    }

    /// `n x n` half-wavelength parallel arrays `separation` meters apart.
    pub fn parallel(n: usize, separation: T) -> Result<Self> {
        let ula = UlaConfig::broadside(n)?;
        Self::new(ula, ula, separation)
    }

    pub fn tx_count(&self) -> usize {
        self.transmitter.element_count
    }

    pub fn rx_count(&self) -> usize {
        self.receiver.element_count
    }

    pub fn with_orientations(self, phi: T, theta: T) -> Self {
        Self {
            transmitter: self.transmitter.with_orientation(phi),
            receiver: self.receiver.with_orientation(theta),
            ..self
        }
    }

    pub fn with_element_count(self, n: usize) -> Result<Self> {
        Ok(Self {
            transmitter: self.transmitter.with_element_count(n)?,
            receiver: self.receiver.with_element_count(n)?,
            ..self
        })
    }

    /// Same link with the roles of the two arrays swapped.
    pub fn reversed(self) -> Self {
        Self {
            transmitter: self.receiver,
            receiver: self.transmitter,
            ..self
        }
    }
}

/// `n_r x n_t` matrix of element-to-element distances in meters; entry
/// `(i, j)` is receiver element `i` to transmitter element `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix<T>(pub Matrix<T>);

impl<T: Real> DistanceMatrix<T> {
    pub fn get(&self, rx: usize, tx: usize) -> T {
        self.0[(rx, tx)]
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.0
    }
}

/// Exact Euclidean distances at carrier `frequency` (spacing follows `c/f`).
pub fn distance_matrix<T: Real>(geometry: &LinkGeometry<T>, frequency: T) -> DistanceMatrix<T> {
    let lambda = wavelength(frequency);
    let tx = element_positions(&geometry.transmitter, [T::zero(), T::zero()], lambda);
    // Mirror the receiver angle into the transmitter's frame.
    let receiver = geometry
        .receiver
        .with_orientation(T::PI() - geometry.receiver.orientation);
    let rx = element_positions(&receiver, [geometry.separation, T::zero()], lambda);
    DistanceMatrix(Matrix::from_fn(rx.len(), tx.len(), |i, j| {
        (rx[i][0] - tx[j][0]).hypot(rx[i][1] - tx[j][1])
    }))
}
