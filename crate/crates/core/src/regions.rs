//! Boundary distances between the reactive near-field, the radiative
//! near-field and the far-field.

use crate::geometry::ArrayGeometry;

/// Fraunhofer distance `2 D² / λ` of an aperture with largest dimension `aperture`.
pub fn fraunhofer_distance(aperture: f64, wavelength: f64) -> f64 {
    2.0 * aperture * aperture / wavelength
}

/// Reactive near-field bound of a single element of diagonal `d`: `λ` for
/// electrically small elements (`d < λ`), otherwise `0.62 √(d³/λ)`.
pub fn reactive_distance(d: f64, wavelength: f64) -> f64 {
    if d < wavelength {
        wavelength
    } else {
        0.62 * (d.powi(3) / wavelength).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBounds {
    /// Reactive near-field bound `d_N`.
    pub reactive: f64,
    /// Element Fraunhofer distance `d_F = 2D²/λ`.
    pub fraunhofer: f64,
    /// Twice the aperture diagonal, `d_B = 2W`.
    pub bjornson: f64,
    /// Array Fraunhofer distance `d_FA = 2W²/λ`.
    pub fraunhofer_array: f64,
}

pub fn boundary_distances(geom: &ArrayGeometry) -> RegionBounds {
    let lambda = geom.wavelength();
    let d = geom.element_diagonal();
    let (m, n) = (geom.rows() as f64, geom.cols() as f64);
    let d_f = fraunhofer_distance(d, lambda);
    RegionBounds {
        reactive: reactive_distance(d, lambda),
        fraunhofer: d_f,
        bjornson: 2.0 * geom.aperture_diagonal(),
        fraunhofer_array: 0.5 * (m * m + n * n) * d_f,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Region {
    Reactive,
    RadiativeNearField,
    FarField,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::Reactive => "reactive",
            Region::RadiativeNearField => "radiative-near-field",
            Region::FarField => "far-field",
        }
    }
}

/// Array-level classification of an observation distance, using `d_FA` as
/// the near/far border.
pub fn classify(d: f64, bounds: &RegionBounds) -> Region {
    if d <= bounds.reactive {
        Region::Reactive
    } else if d < bounds.fraunhofer_array {
        Region::RadiativeNearField
    } else {
        Region::FarField
    }
}
