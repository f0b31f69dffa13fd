use crate::error::{domain, Error, Result};

/// Finds a root of `g` inside `bracket` by bisection safeguarded secant
/// (false position with Illinois damping, falling back to bisection).
///
/// Returns once the bracket is narrower than `tol` or `g` vanishes exactly.
pub fn solve_scalar_root<G>(g: G, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    if !(tol > 0.0) {
        return domain(format!("root tolerance must be positive, got {tol}"));
    }
    let mut g_lo = g(lo);
    let mut g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if !(g_lo * g_hi < 0.0) {
        return Err(Error::Bracket { lo, hi, g_lo, g_hi });
    }
    let mut side = 0i8;
    for _ in 0..500 {
        if hi - lo <= tol {
            break;
        }
        let secant = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        let mid = 0.5 * (lo + hi);
        // keep the secant step only if it lands strictly inside the bracket
        let x = if secant.is_finite() && secant > lo && secant < hi { secant } else { mid };
        let gx = g(x);
        if gx == 0.0 {
            return Ok(x);
        }
        if (gx < 0.0) == (g_lo < 0.0) {
            lo = x;
            g_lo = gx;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            g_hi = gx;
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
        }
        // interleave a bisection to guarantee the bracket shrinks geometrically
        let mid = 0.5 * (lo + hi);
        if hi - lo > tol {
            let gm = g(mid);
            if gm == 0.0 {
                return Ok(mid);
            }
            if (gm < 0.0) == (g_lo < 0.0) {
                lo = mid;
                g_lo = gm;
            } else {
                hi = mid;
                g_hi = gm;
            }
            side = 0;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::sinc;

    #[test]
    fn linear_root() {
        let r = solve_scalar_root(|x| x - 1.0, (0.0, 2.0), 1e-12).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_power_point_of_sinc_squared() {
        let r = solve_scalar_root(|x| sinc(x).powi(2) - 0.5, (0.0, 1.0), 1e-12).unwrap();
        assert!((r - 0.443).abs() < 5e-4, "{r}");
    }

    #[test]
    fn cosine_root() {
        let r = solve_scalar_root(f64::cos, (1.0, 2.0), 1e-12).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change() {
        let r = solve_scalar_root(|x| x * x + 1.0, (-1.0, 1.0), 1e-9);
        assert!(matches!(r, Err(Error::Bracket { .. })));
    }
}
