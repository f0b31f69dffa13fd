//! Planar and linear array layouts.

use crate::error::{domain, Result};
use crate::numerics::Rect;

/// Uniform planar array of `rows x cols` contiguous square elements in the
/// xy-plane, centered at the origin, broadside along +z.
///
/// Columns run along x and rows along y. Element `(m, n)` (zero based) is
/// centered at `((n - (N-1)/2) s, (m - (M-1)/2) s)` with `s` the element side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    rows: usize,
    cols: usize,
    element_side: f64,
    wavelength: f64,
}

/// Builds a UPA; all arguments must be positive.
pub fn build_upa(rows: usize, cols: usize, element_side: f64, wavelength: f64) -> Result<ArrayGeometry> {
    ArrayGeometry::new(rows, cols, element_side, wavelength)
}

impl ArrayGeometry {
    pub fn new(rows: usize, cols: usize, element_side: f64, wavelength: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return domain(format!("array needs at least one row and column, got {rows}x{cols}"));
        }
        if !(element_side > 0.0 && element_side.is_finite()) {
            return domain(format!("element side must be positive, got {element_side}"));
        }
        if !(wavelength > 0.0 && wavelength.is_finite()) {
            return domain(format!("wavelength must be positive, got {wavelength}"));
        }
        Ok(Self { rows, cols, element_side, wavelength })
    }

    /// Same array with the element size given by its diagonal.
    pub fn with_element_diagonal(rows: usize, cols: usize, diagonal: f64, wavelength: f64) -> Result<Self> {
        Self::new(rows, cols, diagonal / std::f64::consts::SQRT_2, wavelength)
    }

    /// Number of rows `M`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns `N`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn element_count(&self) -> usize {
        self.rows * self.cols
    }

    pub fn element_side(&self) -> f64 {
        self.element_side
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Element diagonal `D = s √2`.
    pub fn element_diagonal(&self) -> f64 {
        self.element_side * std::f64::consts::SQRT_2
    }

    /// Element area `A = s²`.
    pub fn element_area(&self) -> f64 {
        self.element_side * self.element_side
    }

    /// Aperture diagonal `W = D √((M² + N²) / 2)`.
    pub fn aperture_diagonal(&self) -> f64 {
        let (m, n) = (self.rows as f64, self.cols as f64);
        self.element_diagonal() * ((m * m + n * n) / 2.0).sqrt()
    }

    /// Width along x and height along y of the whole aperture.
    pub fn extent(&self) -> (f64, f64) {
        (self.cols as f64 * self.element_side, self.rows as f64 * self.element_side)
    }

    pub fn element_center(&self, m: usize, n: usize) -> (f64, f64) {
        let s = self.element_side;
        let x = (n as f64 - 0.5 * (self.cols as f64 - 1.0)) * s;
        let y = (m as f64 - 0.5 * (self.rows as f64 - 1.0)) * s;
        (x, y)
    }

    /// Element centers in row-major `(m, n)` order.
    pub fn element_centers(&self) -> Vec<(f64, f64)> {
        (0..self.rows)
            .flat_map(|m| (0..self.cols).map(move |n| (m, n)))
            .map(|(m, n)| self.element_center(m, n))
            .collect()
    }

    /// Footprint of element `(m, n)`.
    pub fn element_rect(&self, m: usize, n: usize) -> Rect {
        let (x, y) = self.element_center(m, n);
        let h = 0.5 * self.element_side;
        Rect { x_lo: x - h, x_hi: x + h, y_lo: y - h, y_hi: y + h }
    }

    /// Footprint of an element-sized patch centered at the origin (the
    /// reference antenna of the normalised array gain).
    pub fn reference_rect(&self) -> Rect {
        let h = 0.5 * self.element_side;
        Rect { x_lo: -h, x_hi: h, y_lo: -h, y_hi: h }
    }
}

/// Axis along which a ULA is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Uniform linear array of `count` antennas with spacing `spacing`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UlaGeometry {
    count: usize,
    spacing: f64,
    orientation: Axis,
}

impl UlaGeometry {
    pub fn new(count: usize, spacing: f64, orientation: Axis) -> Result<Self> {
        if count == 0 {
            return domain("ULA needs at least one antenna");
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return domain(format!("antenna spacing must be positive, got {spacing}"));
        }
        Ok(Self { count, spacing, orientation })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn orientation(&self) -> Axis {
        self.orientation
    }

    /// End-to-end length `(K - 1) Δ`.
    pub fn length(&self) -> f64 {
        (self.count as f64 - 1.0) * self.spacing
    }
}
