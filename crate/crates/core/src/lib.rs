//! Numerical models for communication arrays operating in the radiative near-field.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: Fresnel integrals, patch quadrature, scalar root finding and a
//!   small dense complex linear-algebra layer.
//! - [`geometry`]: uniform planar (UPA) and linear (ULA) array layouts.
//! - [`regions`]: reactive / Fraunhofer / array-Fraunhofer boundary distances.
//! - [`field`]: electric-field models and channel vectors.
//! - [`beam`]: array gain, beam width, beam depth and gain maps.
//! - [`depth_mux`]: focal-point planning, multi-user channels and zero-forcing.
//! - [`mimo_los`]: line-of-sight MIMO between two ULAs, spacing and capacity.
//!
//! All lengths are in meters, frequencies in hertz, and the field amplitude
//! constant `E0` is normalised to one.

pub mod beam;
pub mod depth_mux;
pub mod error;
pub mod field;
pub mod geometry;
pub mod mimo_los;
pub mod numerics;
pub mod regions;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wave impedance (ohm).
pub const FREE_SPACE_IMPEDANCE: f64 = 376.730_313_412;

/// Wavelength for a carrier frequency, using the exact speed of light.
pub fn wavelength(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / frequency_hz
}
