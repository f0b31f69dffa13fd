use std::sync::OnceLock;

use crate::error::{domain, Error, Result};
use crate::Complex64;

/// Default relative tolerance for patch integration.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Axis-aligned rectangle in the array plane (meters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
}

impl Rect {
    pub fn new(x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64) -> Result<Self> {
        if !(x_lo < x_hi && y_lo < y_hi) {
            return domain(format!(
                "rectangle needs x_lo < x_hi and y_lo < y_hi, got [{x_lo}, {x_hi}] x [{y_lo}, {y_hi}]"
            ));
        }
        Ok(Self { x_lo, x_hi, y_lo, y_hi })
    }

    /// Square of side `side` centered at `(cx, cy)`.
    pub fn centered(cx: f64, cy: f64, side: f64) -> Result<Self> {
        let h = 0.5 * side;
        Self::new(cx - h, cx + h, cy - h, cy + h)
    }

    pub fn area(&self) -> f64 {
        (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)
    }
}

const MIN_ORDER_LOG2: usize = 1;
const MAX_ORDER_LOG2: usize = 8;

/// Gauss-Legendre nodes and weights on `[-1, 1]` for `n` points.
///
/// Newton iteration on the three-term recurrence, seeded with the
/// Tricomi approximation of the roots.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule_table() -> &'static [(Vec<f64>, Vec<f64>)] {
    static TABLE: OnceLock<Vec<(Vec<f64>, Vec<f64>)>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=MAX_ORDER_LOG2).map(|k| gauss_legendre(1 << k)).collect())
}

fn tensor_rule<F>(f: &F, region: &Rect, level: usize) -> (Complex64, f64)
where
    F: Fn(f64, f64) -> Complex64 + ?Sized,
{
    let (nodes, weights) = &rule_table()[level];
    let hx = 0.5 * (region.x_hi - region.x_lo);
    let cx = 0.5 * (region.x_hi + region.x_lo);
    let hy = 0.5 * (region.y_hi - region.y_lo);
    let cy = 0.5 * (region.y_hi + region.y_lo);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for (xi, wi) in nodes.iter().zip(weights) {
        let x = cx + hx * xi;
        for (yj, wj) in nodes.iter().zip(weights) {
            let v = f(x, cy + hy * yj);
            let w = wi * wj;
            sum += v * w;
            abs_sum += v.norm() * w;
        }
    }
    (sum * (hx * hy), abs_sum * hx * hy)
}

/// Integrates a complex function over a rectangle with tensor-product
/// Gauss-Legendre rules of doubling order (2, 4, 8, ... 256 points per axis).
///
/// Accepts the first level whose difference to the previous level is within
/// `tol` relative to `max(|I|, ∫|f|)`.
pub fn integrate_patch<F>(f: F, region: &Rect, tol: f64) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Complex64,
{
    if !(tol > 0.0) {
        return domain(format!("quadrature tolerance must be positive, got {tol}"));
    }
    let (mut prev, _) = tensor_rule(&f, region, MIN_ORDER_LOG2);
    let mut err = f64::INFINITY;
    for level in MIN_ORDER_LOG2 + 1..=MAX_ORDER_LOG2 {
        let (cur, abs_int) = tensor_rule(&f, region, level);
        err = (cur - prev).norm();
        if !cur.re.is_finite() || !cur.im.is_finite() {
            return domain("integrand is not finite on the region");
        }
        if err <= tol * cur.norm().max(abs_int) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Accuracy { best: prev, error: err })
}

// Gauss-Kronrod 7/15 abscissae and weights (positive half, center last).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex function
/// on `[a, b]` to absolute tolerance `abs_tol`.
pub fn integrate_1d<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    const MAX_INTERVALS: usize = 2000;
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total: Complex64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if err <= abs_tol {
            return Ok(total);
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(Error::Accuracy { best: total, error: err });
        }
        let (worst, _) = parts
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}
