//! Array gain, beam width and beam depth of a focused UPA.
//!
//! Closed forms (focal-plane sinc² pattern, axial Fresnel-integral gain,
//! 3 dB depth interval) live next to the exact patch-integrated gain and the
//! per-element gain maps used to check them.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::field::{channel_vector, patch_power, path_excess, Point3};
use crate::geometry::ArrayGeometry;
use crate::numerics::{fresnel_cs, sinc, solve_scalar_root};
use crate::regions::boundary_distances;
use crate::Complex64;

/// `M² a₃dB` used by the square-array closed form (`8 a₃dB d_FA / d_F = 10`).
pub const SQUARE_A3DB_SCALED: f64 = 1.25;

/// Half-power argument of the normalised `sinc²` (rounded as in the closed forms).
pub const SINC2_HALF_POWER: f64 = 0.443;

/// Focal distance along broadside: finite, or focused at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Focus {
    Finite(f64),
    Infinite,
}

impl Focus {
    pub fn finite(f: f64) -> Result<Self> {
        if f > 0.0 && f.is_finite() {
            Ok(Focus::Finite(f))
        } else if f == f64::INFINITY {
            Ok(Focus::Infinite)
        } else {
            domain(format!("focal distance must be positive, got {f}"))
        }
    }

    /// Distance in meters (`+∞` for [`Focus::Infinite`]).
    pub fn distance(&self) -> f64 {
        match *self {
            Focus::Finite(f) => f,
            Focus::Infinite => f64::INFINITY,
        }
    }

    fn reciprocal(&self) -> f64 {
        match *self {
            Focus::Finite(f) => 1.0 / f,
            Focus::Infinite => 0.0,
        }
    }
}

impl From<f64> for Focus {
    fn from(f: f64) -> Self {
        if f.is_infinite() {
            Focus::Infinite
        } else {
            Focus::Finite(f)
        }
    }
}

/// 3 dB beam width and depth around a focal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamMetrics {
    pub bw_3db: f64,
    /// `z_hi − z_lo`, or `+∞` when the interval is unbounded.
    pub bd_3db: f64,
    pub bd_interval: (f64, f64),
    pub a_3db: f64,
}

/// How `a₃dB` is obtained for beam-depth computations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum A3dbSource {
    /// Square arrays use the closed-form constant `1.25 / M²`; other shapes
    /// use the numerical root.
    #[default]
    Auto,
    /// Always root-find `G(a) = 0.5`.
    Numeric,
    /// A caller-supplied value.
    Fixed(f64),
}

/// Exact normalised array gain of a UPA receiving from `(0, 0, z)`:
/// `Σ|∫E|² / (MN A ∫_ref |E|²)` with the reference patch centered at the origin.
pub fn array_gain_exact(geom: &ArrayGeometry, z: f64, tol: f64) -> Result<f64> {
    let h = channel_vector(geom, z, tol)?;
    let reference = patch_power(&geom.reference_rect(), z, tol)?;
    Ok(h.norm_sqr() / (geom.element_count() as f64 * reference))
}

fn aperture_scale(geom: &ArrayGeometry, count: usize, focal: f64) -> f64 {
    count as f64 / SQRT_2 * geom.element_diagonal() / (geom.wavelength() * focal)
}

/// Focal-plane gain `sinc²((N/√2) D x/(λF)) sinc²((M/√2) D y/(λF))`.
pub fn gain_focal_plane(geom: &ArrayGeometry, focal: f64, x_r: f64, y_r: f64) -> Result<f64> {
    if !(focal > 0.0 && focal.is_finite()) {
        return domain(format!("focal-plane gain needs a finite positive focal distance, got {focal}"));
    }
    let gx = sinc(aperture_scale(geom, geom.cols(), focal) * x_r).powi(2);
    let gy = sinc(aperture_scale(geom, geom.rows(), focal) * y_r).powi(2);
    Ok(gx * gy)
}

/// Closed-form 3 dB beam width along x: `0.886 √2 λF / (N D)`.
pub fn beam_width_3db(geom: &ArrayGeometry, focal: f64) -> Result<f64> {
    if !(focal > 0.0 && focal.is_finite()) {
        return domain(format!("beam width needs a finite positive focal distance, got {focal}"));
    }
    Ok(2.0 * SINC2_HALF_POWER * SQRT_2 * geom.wavelength() * focal
        / (geom.cols() as f64 * geom.element_diagonal()))
}

/// Positive x offset where [`gain_focal_plane`] (with `y = 0`) equals one half,
/// located by root finding.
pub fn focal_plane_half_gain_x(geom: &ArrayGeometry, focal: f64) -> Result<f64> {
    let first_null = 1.0 / aperture_scale(geom, geom.cols(), focal);
    solve_scalar_root(
        |x| gain_focal_plane(geom, focal, x, 0.0).unwrap_or(f64::NAN) - 0.5,
        (0.0, first_null),
        1e-14 * first_null,
    )
}

fn fresnel_power_ratio(count: usize, x: f64) -> f64 {
    // (C² + S²)(u) / u² with u = count √x, which tends to one as u → 0
    let u = count as f64 * x.sqrt();
    if u == 0.0 {
        return 1.0;
    }
    let (c, s) = fresnel_cs(u).expect("finite Fresnel argument");
    (c * c + s * s) / (u * u)
}

/// Axial gain as a function of `x = d_F / (8 z_eff)`:
/// `G(x) = (C²+S²)(M√|x|) (C²+S²)(N√|x|) / (MN x)²`, with `G(0) = 1`.
pub fn g_of_x(rows: usize, cols: usize, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return 0.0;
    }
    let ax = x.abs();
    fresnel_power_ratio(rows, ax) * fresnel_power_ratio(cols, ax)
}

/// Axial gain at `(0, 0, z_r)` when focusing at `focus`.
pub fn gain_axial(geom: &ArrayGeometry, focus: Focus, z_r: f64) -> Result<f64> {
    if !(z_r > 0.0) {
        return domain(format!("receiver distance must be positive, got {z_r}"));
    }
    if let Focus::Finite(f) = focus {
        if !(f > 0.0) {
            return domain(format!("focal distance must be positive, got {f}"));
        }
    }
    let d_f = boundary_distances(geom).fraunhofer;
    // d_F / (8 z_eff) with 1/z_eff = |1/z_r − 1/F|
    let x = d_f / 8.0 * (1.0 / z_r - focus.reciprocal()).abs();
    Ok(g_of_x(geom.rows(), geom.cols(), x))
}

/// Positive root of `G(a) = 0.5`.
pub fn solve_a3db(rows: usize, cols: usize) -> Result<f64> {
    if rows == 0 || cols == 0 {
        return domain("a3dB needs at least one row and column");
    }
    let g = |x: f64| g_of_x(rows, cols, x) - 0.5;
    let big = rows.max(cols) as f64;
    // expand until G drops below 0.25; G(lo) stays above 0.5
    let mut lo = 0.0;
    let mut hi = 1e-3 / (big * big);
    let mut expansions = 0;
    while g_of_x(rows, cols, hi) >= 0.25 {
        if g(hi) > 0.0 {
            lo = hi;
        }
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::Bracket { lo, hi, g_lo: g(lo), g_hi: g(hi) });
        }
    }
    let (g_lo, g_hi) = (g(lo), g(hi));
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(Error::Bracket { lo, hi, g_lo, g_hi });
    }
    solve_scalar_root(g, (lo, hi), 1e-12 * hi)
}

/// `a₃dB` for a geometry under the given rule.
pub fn a3db_for(geom: &ArrayGeometry, source: A3dbSource) -> Result<f64> {
    match source {
        A3dbSource::Fixed(a) if a > 0.0 => Ok(a),
        A3dbSource::Fixed(a) => domain(format!("a3dB must be positive, got {a}")),
        A3dbSource::Auto if geom.is_square() => {
            let m = geom.rows() as f64;
            Ok(SQUARE_A3DB_SCALED / (m * m))
        }
        _ => solve_a3db(geom.rows(), geom.cols()),
    }
}

/// Largest focal distance with a finite beam depth, `d_F / (8 a₃dB)`.
pub fn finite_depth_limit(geom: &ArrayGeometry, a_3db: f64) -> f64 {
    boundary_distances(geom).fraunhofer / (8.0 * a_3db)
}

/// 3 dB depth interval `[d_F F/(d_F + 8aF), d_F F/(d_F − 8aF)]` and its length.
pub fn depth_interval(d_f: f64, a_3db: f64, focus: Focus) -> (f64, f64, f64) {
    match focus {
        Focus::Infinite => (d_f / (8.0 * a_3db), f64::INFINITY, f64::INFINITY),
        Focus::Finite(f) => {
            let lo = d_f * f / (d_f + 8.0 * a_3db * f);
            if f < d_f / (8.0 * a_3db) {
                let hi = d_f * f / (d_f - 8.0 * a_3db * f);
                let bd = 16.0 * a_3db * d_f * f * f / (d_f * d_f - 64.0 * a_3db * a_3db * f * f);
                (lo, hi, bd)
            } else {
                (lo, f64::INFINITY, f64::INFINITY)
            }
        }
    }
}

/// Square-array beam depth `20 d_FA F² / (d_FA² − 100 F²)`, infinite for `F ≥ d_FA/10`.
pub fn square_beam_depth(d_fa: f64, focal: f64) -> f64 {
    if focal < d_fa / 10.0 {
        20.0 * d_fa * focal * focal / (d_fa * d_fa - 100.0 * focal * focal)
    } else {
        f64::INFINITY
    }
}

/// Beam width and depth with `a₃dB` from [`A3dbSource::Auto`].
pub fn beam_depth_3db(geom: &ArrayGeometry, focus: Focus) -> Result<BeamMetrics> {
    beam_depth_3db_with(geom, focus, A3dbSource::Auto)
}

pub fn beam_depth_3db_with(geom: &ArrayGeometry, focus: Focus, source: A3dbSource) -> Result<BeamMetrics> {
    if let Focus::Finite(f) = focus {
        if !(f > 0.0 && f.is_finite()) {
            return domain(format!("focal distance must be positive, got {f}"));
        }
    }
    let a_3db = a3db_for(geom, source)?;
    let d_f = boundary_distances(geom).fraunhofer;
    let (lo, hi, bd) = depth_interval(d_f, a_3db, focus);
    let bw_3db = match focus {
        Focus::Finite(f) => beam_width_3db(geom, f)?,
        Focus::Infinite => f64::INFINITY,
    };
    Ok(BeamMetrics { bw_3db, bd_3db: bd, bd_interval: (lo, hi), a_3db })
}

/// Normalised gain on a grid of `(x, 0, z)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct GainMap {
    pub xs: Vec<f64>,
    pub zs: Vec<f64>,
    /// Row-major: `gains[iz * xs.len() + ix]`.
    pub gains: Vec<f64>,
}

impl GainMap {
    pub fn at(&self, ix: usize, iz: usize) -> f64 {
        self.gains[iz * self.xs.len() + ix]
    }
}

struct FocusedArray {
    centers: Vec<(f64, f64)>,
    focal_excess: Vec<f64>,
    wavenumber: f64,
}

impl FocusedArray {
    fn new(geom: &ArrayGeometry, focus: Focus) -> Self {
        let centers = geom.element_centers();
        let focal_excess = match focus {
            Focus::Finite(f) => path_excess(geom, &Point3::on_axis(f)),
            Focus::Infinite => vec![0.0; centers.len()],
        };
        Self { centers, focal_excess, wavenumber: 2.0 * PI / geom.wavelength() }
    }

    // |h(F)ᴴ h(p)|² / (‖h(F)‖² ‖h(p)‖²) for unit-amplitude spherical-phase vectors
    fn gain(&self, p: &Point3) -> f64 {
        let k = self.wavenumber;
        let mut acc = Complex64::new(0.0, 0.0);
        for ((x, y), ef) in self.centers.iter().zip(&self.focal_excess) {
            let rho2 = (x - p.x) * (x - p.x) + (y - p.y) * (y - p.y);
            let ep = rho2 / ((rho2 + p.z * p.z).sqrt() + p.z);
            acc += Complex64::from_polar(1.0, k * (ef - ep));
        }
        acc.norm_sqr() / (self.centers.len() as f64).powi(2)
    }
}

/// Normalised gain at `point` of a beam matched to `focus`, per-element model.
pub fn gain_at(geom: &ArrayGeometry, focus: Focus, point: Point3) -> Result<f64> {
    if !(point.z > 0.0) {
        return domain(format!("gain point must have z > 0, got {}", point.z));
    }
    Ok(FocusedArray::new(geom, focus).gain(&point))
}

/// Gain heat map over `xs` × `zs` (the `y = 0` plane). Rows (fixed `z`) are
/// evaluated in parallel and returned in order.
pub fn beam_pattern_map(geom: &ArrayGeometry, focus: Focus, xs: &[f64], zs: &[f64]) -> Result<GainMap> {
    if let Some(z) = zs.iter().find(|z| !(**z > 0.0)) {
        return domain(format!("gain map rows need z > 0, got {z}"));
    }
    let arr = FocusedArray::new(geom, focus);
    let rows: Vec<Vec<f64>> = zs
        .par_iter()
        .map(|&z| xs.iter().map(|&x| arr.gain(&Point3::new(x, 0.0, z))).collect())
        .collect();
    Ok(GainMap { xs: xs.to_vec(), zs: zs.to_vec(), gains: rows.into_iter().flatten().collect() })
}
