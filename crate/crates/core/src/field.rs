//! Electric-field models and channel vectors.
//!
//! Two channel models coexist:
//!
//! - patch-integrated coefficients of the exact scalar field, for on-axis
//!   sources ([`channel_coefficient`], [`channel_vector`]);
//! - unit-amplitude per-element vectors with the exact spherical phase, for
//!   arbitrary positions ([`fresnel_channel_vector`]).
//!
//! `E0` is normalised to one everywhere.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::geometry::ArrayGeometry;
use crate::numerics::{integrate_patch, Rect};
use crate::{Complex64, FREE_SPACE_IMPEDANCE};

/// A point in space (meters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub const fn on_axis(z: f64) -> Self {
        Self { x: 0.0, y: 0.0, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    fn sub(&self, o: &Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

/// Distance from `(x, y, 0)` to `p`, split as `p.z + excess` so that the
/// large common part can be kept out of phase computations.
#[inline]
fn distance_excess(x: f64, y: f64, p: &Point3) -> f64 {
    let rho2 = (x - p.x) * (x - p.x) + (y - p.y) * (y - p.y);
    let r = (rho2 + p.z * p.z).sqrt();
    rho2 / (r + p.z.abs())
}

/// `exp(-j k d)` evaluated as `exp(-j k z) exp(-j k (d - z))`.
#[inline]
fn propagation_phase(wavenumber: f64, z: f64, excess: f64) -> Complex64 {
    let common = (wavenumber * z).rem_euclid(2.0 * PI);
    Complex64::from_polar(1.0, -(common + wavenumber * excess))
}

/// Free-space tensor Green's function between `source` and `obs`.
pub fn green_tensor(source: Point3, obs: Point3, wavelength: f64) -> Result<Matrix3<Complex64>> {
    let [far, mid, near] = green_tensor_terms(source, obs, wavelength)?;
    Ok(far + mid + near)
}

/// The three terms of [`green_tensor`], each including the common prefactor:
/// the radiating `(I − d̂d̂ᴴ)` term, the `jλ/(2πd)` term and the `(λ/(2πd))²` term.
pub fn green_tensor_terms(source: Point3, obs: Point3, wavelength: f64) -> Result<[Matrix3<Complex64>; 3]> {
    if !(wavelength > 0.0) {
        return domain(format!("wavelength must be positive, got {wavelength}"));
    }
    let v = obs.sub(&source);
    let d = v.norm();
    if !(d > 0.0) {
        return Err(Error::Singularity("source and observation points coincide".into()));
    }
    let u = [v.x / d, v.y / d, v.z / d];
    let outer = Matrix3::from_fn(|i, j| Complex64::new(u[i] * u[j], 0.0));
    let eye = Matrix3::<Complex64>::identity();
    let j = Complex64::i();
    let prefactor = -(j * FREE_SPACE_IMPEDANCE * Complex64::from_polar(1.0, -2.0 * PI * d / wavelength))
        / (2.0 * wavelength * d);
    let ratio = wavelength / (2.0 * PI * d);
    let transverse = eye - outer;
    let longitudinal = eye - outer * Complex64::new(3.0, 0.0);
    Ok([
        transverse * prefactor,
        longitudinal * (prefactor * j * ratio),
        longitudinal * (prefactor * Complex64::new(-ratio * ratio, 0.0)),
    ])
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        domain(format!("observation distance z must be positive and finite, got {z}"))
    }
}

/// Exact scalar field at `(x, y, 0)` from an isotropic source at `(0, 0, z)`,
/// in units of `E0`.
pub fn efield_exact(x: f64, y: f64, z: f64, wavelength: f64) -> Result<Complex64> {
    check_z(z)?;
    Ok(efield_exact_unchecked(x, y, z, 2.0 * PI / wavelength))
}

#[inline]
fn efield_amplitude(x: f64, y: f64, z: f64) -> f64 {
    let r2 = x * x + y * y + z * z;
    (z * (x * x + z * z)).sqrt() / (r2.powf(1.25) * (4.0 * PI).sqrt())
}

#[inline]
fn efield_exact_unchecked(x: f64, y: f64, z: f64, wavenumber: f64) -> Complex64 {
    let excess = distance_excess(x, y, &Point3::on_axis(z));
    propagation_phase(wavenumber, z, excess) * efield_amplitude(x, y, z)
}

/// Fresnel (paraxial) approximation of [`efield_exact`].
pub fn efield_fresnel(x: f64, y: f64, z: f64, wavelength: f64) -> Result<Complex64> {
    check_z(z)?;
    let k = 2.0 * PI / wavelength;
    let excess = (x * x + y * y) / (2.0 * z);
    Ok(propagation_phase(k, z, excess) / ((4.0 * PI).sqrt() * z))
}

/// Which scalar field model to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldModel {
    Exact,
    Fresnel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// Field normalised by `E0`.
    pub value: Complex64,
    /// Observation point in the array plane and the source distance as `z`.
    pub position: Point3,
}

/// Samples the field of an on-axis source at `position.z` observed at
/// `(position.x, position.y, 0)`.
pub fn sample_field(model: FieldModel, position: Point3, wavelength: f64) -> Result<FieldSample> {
    let value = match model {
        FieldModel::Exact => efield_exact(position.x, position.y, position.z, wavelength)?,
        FieldModel::Fresnel => efield_fresnel(position.x, position.y, position.z, wavelength)?,
    };
    Ok(FieldSample { value, position })
}

/// `h = √(1/A) ∫∫_patch E(x, y) dx dy` for an on-axis source at `source_z`.
pub fn channel_coefficient(patch: &Rect, source_z: f64, wavelength: f64, tol: f64) -> Result<Complex64> {
    check_z(source_z)?;
    let k = 2.0 * PI / wavelength;
    let common = Complex64::from_polar(1.0, -(k * source_z).rem_euclid(2.0 * PI));
    let integral = integrate_patch(
        |x, y| {
            let excess = distance_excess(x, y, &Point3::on_axis(source_z));
            Complex64::from_polar(efield_amplitude(x, y, source_z), -k * excess)
        },
        patch,
        tol,
    )?;
    Ok(common * integral / patch.area().sqrt())
}

/// `∫∫_patch |E(x, y)|² dx dy` for an on-axis source.
pub fn patch_power(patch: &Rect, source_z: f64, tol: f64) -> Result<f64> {
    check_z(source_z)?;
    let v = integrate_patch(
        |x, y| Complex64::new(efield_amplitude(x, y, source_z).powi(2), 0.0),
        patch,
        tol,
    )?;
    Ok(v.re)
}

/// Channel vector of a UPA, one coefficient per element in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    pub coefficients: Vec<Complex64>,
    pub geometry: ArrayGeometry,
    pub source: Point3,
}

impl ChannelVector {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `‖h‖²`, summed in element order.
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `selfᴴ other`.
    pub fn inner(&self, other: &ChannelVector) -> Complex64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Exact patch-integrated channel vector for a source at `(0, 0, source_z)`.
///
/// Channel reciprocity makes this the same whether the array transmits or
/// receives. Elements are evaluated in parallel and assembled in row-major order.
pub fn channel_vector(geom: &ArrayGeometry, source_z: f64, tol: f64) -> Result<ChannelVector> {
    check_z(source_z)?;
    let cols = geom.cols();
    let coefficients = (0..geom.element_count())
        .into_par_iter()
        .map(|i| channel_coefficient(&geom.element_rect(i / cols, i % cols), source_z, geom.wavelength(), tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChannelVector { coefficients, geometry: *geom, source: Point3::on_axis(source_z) })
}

/// Unit-amplitude channel vector with phase `−(2π/λ)‖c_mn − point‖` per element.
pub fn fresnel_channel_vector(geom: &ArrayGeometry, point: Point3) -> Result<ChannelVector> {
    check_z(point.z)?;
    let k = 2.0 * PI / geom.wavelength();
    let coefficients = geom
        .element_centers()
        .into_iter()
        .map(|(x, y)| propagation_phase(k, point.z, distance_excess(x, y, &point)))
        .collect();
    Ok(ChannelVector { coefficients, geometry: *geom, source: point })
}

/// Per-element path excess `‖c_mn − point‖ − z` in row-major order.
pub(crate) fn path_excess(geom: &ArrayGeometry, point: &Point3) -> Vec<f64> {
    geom.element_centers().into_iter().map(|(x, y)| distance_excess(x, y, point)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_upa;
    use crate::regions::boundary_distances;

    fn dot3(m: &Matrix3<Complex64>, v: [f64; 3]) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *o += m[(i, j)] * vj;
            }
        }
        out
    }

    #[test]
    fn transverse_term_annihilates_radial_direction() {
        let s = Point3::new(0.1, -0.2, 0.3);
        let o = Point3::new(1.3, 0.7, 2.9);
        let [far, _, _] = green_tensor_terms(s, o, 0.05).unwrap();
        let v = o.sub(&s);
        let d = v.norm();
        let r = dot3(&far, [v.x / d, v.y / d, v.z / d]);
        assert!(r.iter().all(|c| c.norm() < 1e-12 * far.norm()));
    }

    #[test]
    fn correction_terms_are_small_at_ten_wavelengths() {
        let lambda = 0.1;
        let s = Point3::on_axis(0.0);
        let o = Point3::new(0.3, 0.4, (1.0f64 - 0.25).sqrt());
        let o = Point3::new(o.x * 10.0 * lambda, o.y * 10.0 * lambda, o.z * 10.0 * lambda);
        let [far, mid, near] = green_tensor_terms(s, o, lambda).unwrap();
        // compare per-term amplitude factors on a transverse direction
        let ratio = (mid.norm() + near.norm()) / far.norm();
        let r = 1.0 / (2.0 * PI * 10.0);
        // ‖I − 3d̂d̂ᴴ‖_F = √6 and ‖I − d̂d̂ᴴ‖_F = √2
        let expected = 3f64.sqrt() * (r + r * r);
        assert!((ratio - expected).abs() < 1e-12);
        assert!(r + r * r <= 0.02);
    }

    #[test]
    fn leading_term_scales_as_inverse_distance() {
        let s = Point3::on_axis(0.0);
        let a = green_tensor_terms(s, Point3::new(0.0, 1.0, 1.0), 0.01).unwrap()[0].norm();
        let b = green_tensor_terms(s, Point3::new(0.0, 2.0, 2.0), 0.01).unwrap()[0].norm();
        assert!((a / b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn coincident_points_are_singular() {
        let p = Point3::new(1.0, 2.0, 3.0);
        assert!(matches!(green_tensor(p, p, 0.1), Err(Error::Singularity(_))));
    }

    #[test]
    fn exact_field_on_axis_is_far_field_amplitude() {
        for z in [0.01, 1.0, 37.5, 1e5] {
            let e = efield_exact(0.0, 0.0, z, 0.1).unwrap();
            assert!((e.norm() - 1.0 / ((4.0 * PI).sqrt() * z)).abs() < 1e-14 / z);
        }
    }

    #[test]
    fn exact_field_phase() {
        let (x, y, z, lambda) = (0.3, -0.2, 1.7, 0.05);
        let e = efield_exact(x, y, z, lambda).unwrap();
        let r = (x * x + y * y + z * z as f64).sqrt();
        let expected = Complex64::from_polar(1.0, -2.0 * PI * r / lambda);
        assert!((e / e.norm() - expected).norm() < 1e-12);
    }

    #[test]
    fn exact_and_fresnel_agree_paraxially() {
        let lambda = 1.0;
        let (x, y, z) = (lambda, lambda, 50.0 * lambda);
        let e = efield_exact(x, y, z, lambda).unwrap();
        let f = efield_fresnel(x, y, z, lambda).unwrap();
        assert!((e.norm() / f.norm() - 1.0).abs() < 1e-3);
        assert!((e / f).arg().abs() < 0.02);
        let on_axis = efield_fresnel(0.0, 0.0, z, lambda).unwrap();
        assert!((on_axis - efield_exact(0.0, 0.0, z, lambda).unwrap()).norm() < 1e-15);
        assert_eq!(efield_fresnel(3.0, 1.0, z, lambda).unwrap().norm(), on_axis.norm());
    }

    #[test]
    fn fresnel_phase_error_beyond_array_fraunhofer_distance() {
        let g = build_upa(30, 40, 0.25, 1.0).unwrap();
        let z = boundary_distances(&g).fraunhofer_array;
        let k = 2.0 * PI;
        for (x, y) in g.element_centers() {
            for (dx, dy) in [(-0.125, -0.125), (0.125, 0.125), (0.0, 0.0)] {
                let (px, py) = (x + dx, y + dy);
                let exact = distance_excess(px, py, &Point3::on_axis(z));
                let paraxial = (px * px + py * py) / (2.0 * z);
                assert!(k * (exact - paraxial).abs() <= PI / 8.0);
            }
        }
    }

    #[test]
    fn rejects_non_positive_z() {
        assert!(efield_exact(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(efield_fresnel(0.0, 0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn small_patch_limit() {
        let lambda = 1.0;
        let side = lambda / 4.0;
        let z = 1e4 * lambda;
        let patch = Rect::centered(0.0, 0.0, side).unwrap();
        let h = channel_coefficient(&patch, z, lambda, 1e-10).unwrap();
        let flat = efield_exact(0.0, 0.0, z, lambda).unwrap() * side;
        assert!((h - flat).norm() / flat.norm() < 1e-3);
        let expected_power = side * side / (4.0 * PI * z * z);
        assert!((h.norm_sqr() / expected_power - 1.0).abs() < 1e-3);
    }

    #[test]
    fn patch_integral_matches_a_finer_fixed_grid() {
        // grid-refinement oracle: midpoint rule on a 4x finer grid than a 64x64 reference,
        // extrapolated with the O(h²) midpoint error
        let lambda = 1.0;
        let z = 100.0 * lambda;
        let patch = Rect::new(3.0, 3.25, -2.0, -1.75).unwrap();
        let tol = 1e-8;
        let h = channel_coefficient(&patch, z, lambda, tol).unwrap() * patch.area().sqrt();
        let midpoint = |n: usize| {
            let dx = 0.25 / n as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let x = patch.x_lo + (i as f64 + 0.5) * dx;
                    let y = patch.y_lo + (j as f64 + 0.5) * dx;
                    acc += efield_exact(x, y, z, lambda).unwrap();
                }
            }
            acc * dx * dx
        };
        let coarse = midpoint(64);
        let fine = midpoint(256);
        let richardson = (fine * 16.0 - coarse) / 15.0;
        assert!((h - richardson).norm() <= tol * h.norm(), "{h} vs {richardson}");
    }

    #[test]
    fn mirror_symmetry() {
        let lambda = 1.0;
        let a = Rect::new(1.0, 1.25, 0.5, 0.75).unwrap();
        let b = Rect::new(-1.25, -1.0, 0.5, 0.75).unwrap();
        let ha = channel_coefficient(&a, 7.0, lambda, 1e-10).unwrap();
        let hb = channel_coefficient(&b, 7.0, lambda, 1e-10).unwrap();
        assert!((ha - hb).norm() < 1e-9 * ha.norm());
    }

    #[test]
    fn single_element_vector() {
        let g = build_upa(1, 1, 0.25, 1.0).unwrap();
        let v = channel_vector(&g, 5.0, 1e-9).unwrap();
        let c = channel_coefficient(&g.element_rect(0, 0), 5.0, 1.0, 1e-9).unwrap();
        assert_eq!(v.coefficients, vec![c]);
    }

    #[test]
    fn far_source_gives_flat_coefficients() {
        let g = build_upa(30, 40, 0.25, 1.0).unwrap();
        let z = 10.0 * boundary_distances(&g).fraunhofer_array;
        let v = channel_vector(&g, z, 1e-8).unwrap();
        let mags: Vec<f64> = v.coefficients.iter().map(|c| c.norm()).collect();
        let (lo, hi) = mags.iter().fold((f64::MAX, 0.0f64), |(a, b), &m| (a.min(m), b.max(m)));
        assert!((hi - lo) / hi < 5e-3);
        let reference = v.coefficients[0];
        let spread = v.coefficients.iter().map(|c| (c / reference).arg().abs()).fold(0.0, f64::max);
        assert!(spread <= PI / 8.0);
    }

    #[test]
    fn channel_vector_is_deterministic() {
        let g = build_upa(6, 9, 0.25, 1.0).unwrap();
        let a = channel_vector(&g, 12.0, 1e-9).unwrap();
        let b = channel_vector(&g, 12.0, 1e-9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 54);
    }

    #[test]
    fn tighter_tolerance_changes_norm_by_less_than_coarse_tol() {
        let g = build_upa(10, 12, 0.25, 1.0).unwrap();
        for z in [1.0, 5.0, 40.0] {
            let coarse = channel_vector(&g, z, 1e-6).unwrap().norm_sqr();
            let fine = channel_vector(&g, z, 5e-7).unwrap().norm_sqr();
            assert!((coarse - fine).abs() <= 1e-6 * fine, "z={z}");
        }
    }

    #[test]
    fn per_element_vector_properties() {
        let g = build_upa(8, 6, 0.5, 1.0).unwrap();
        let p = Point3::new(0.7, -0.3, 9.0);
        let h = fresnel_channel_vector(&g, p).unwrap();
        assert!(h.coefficients.iter().all(|c| (c.norm() - 1.0).abs() < 1e-14));
        assert!((h.inner(&h).re / h.norm_sqr() - 1.0).abs() < 1e-14);
        for (c, (x, y)) in h.coefficients.iter().zip(g.element_centers()) {
            let d = ((x - p.x).powi(2) + (y - p.y).powi(2) + p.z * p.z).sqrt();
            let expected = Complex64::from_polar(1.0, -2.0 * PI * d);
            assert!((c - expected).norm() < 1e-10);
        }
        // very distant broadside point: phases flat up to the common factor
        let far = fresnel_channel_vector(&g, Point3::on_axis(1e12)).unwrap();
        let r = far.coefficients[0];
        assert!(far.coefficients.iter().all(|c| (c / r - 1.0).norm() < 1e-6));
    }
}
