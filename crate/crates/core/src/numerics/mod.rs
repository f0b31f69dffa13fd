//! Special functions, quadrature, root finding and dense complex linear algebra.

mod fresnel;
pub mod linalg;
mod quad;
mod roots;

pub use fresnel::{fresnel_cs, fresnel_cs_asymptotic, fresnel_cs_quadrature, FRESNEL_SWITCH};
pub use quad::{gauss_legendre, integrate_1d, integrate_patch, Rect, DEFAULT_TOL};
pub use roots::solve_scalar_root;

/// Normalised sinc, `sin(pi x) / (pi x)`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}
