//! Depth-domain multiplexing: focal-point planning, multi-user channel
//! assembly, zero-forcing and matched-filter precoding, SINR evaluation.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::beam::{a3db_for, depth_interval, A3dbSource, Focus};
use crate::error::{domain, Error, Result};
use crate::field::{fresnel_channel_vector, Point3};
use crate::geometry::ArrayGeometry;
use crate::numerics::linalg::{frobenius, solve, svd, CMatrix};
use crate::regions::boundary_distances;
use crate::Complex64;

/// Upper bound on `cond(HᴴH)` accepted by [`zf_precoder`].
pub const ZF_CONDITION_LIMIT: f64 = 1e12;

/// SINR reported when the interference-plus-noise term vanishes.
pub const SINR_CAP: f64 = 1e30;

const MAX_FOCAL_POINTS: usize = 100_000;

/// Focal points with contiguous, non-overlapping 3 dB depth intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalPlan {
    /// Descending; the first entry is [`Focus::Infinite`].
    pub focal_points: Vec<Focus>,
    pub intervals: Vec<(f64, f64)>,
    pub d_min: f64,
    pub a_3db: f64,
    /// `d_min` lies below the Björnson distance, where the closed forms lose accuracy.
    pub below_bjornson: bool,
}

impl FocalPlan {
    pub fn len(&self) -> usize {
        self.focal_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focal_points.is_empty()
    }
}

/// Plans focal points with `a₃dB` from [`A3dbSource::Auto`].
pub fn plan_depth_focal_points(geom: &ArrayGeometry, d_min: f64) -> Result<FocalPlan> {
    plan_depth_focal_points_with(geom, d_min, A3dbSource::Auto)
}

/// Greedy far-to-near tiling. The far user covers `[d_F/(8a), ∞)`; each
/// following focal point is chosen so its upper 3 dB endpoint meets the
/// previous lower endpoint, which in reciprocal distance gives
/// `F_k = d_F / (16 k a)`. A point is admitted while `F_k ≥ d_min`.
pub fn plan_depth_focal_points_with(geom: &ArrayGeometry, d_min: f64, source: A3dbSource) -> Result<FocalPlan> {
    if !(d_min > 0.0 && d_min.is_finite()) {
        return domain(format!("d_min must be positive and finite, got {d_min}"));
    }
    let a_3db = a3db_for(geom, source)?;
    let bounds = boundary_distances(geom);
    let d_f = bounds.fraunhofer;
    let c = 8.0 * a_3db / d_f;
    let admit = d_min * (1.0 - 1e-9);

    let (lo, hi, _) = depth_interval(d_f, a_3db, Focus::Infinite);
    let mut focal_points = vec![Focus::Infinite];
    let mut intervals = vec![(lo, hi)];
    for k in 1.. {
        let f = 1.0 / (2.0 * k as f64 * c);
        if f < admit {
            break;
        }
        if k > MAX_FOCAL_POINTS {
            return domain(format!("d_min = {d_min} admits more than {MAX_FOCAL_POINTS} focal points"));
        }
        let kf = k as f64;
        focal_points.push(Focus::Finite(f));
        intervals.push((1.0 / ((2.0 * kf + 1.0) * c), 1.0 / ((2.0 * kf - 1.0) * c)));
    }
    Ok(FocalPlan { focal_points, intervals, d_min, a_3db, below_bjornson: d_min < bounds.bjornson })
}

/// Per-user channel amplitude model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelAmplitude {
    /// One gain `√β_k = λ/(4π d_k)` per user, `d_k` measured from the array center.
    #[default]
    Uniform,
    /// `λ/(4π r_{k,i})` per element.
    PerElement,
}

/// Multi-user channel `H` (MN × K) plus index pairs of coinciding users.
#[derive(Debug, Clone, PartialEq)]
pub struct MuChannel {
    pub h: CMatrix,
    pub degenerate_pairs: Vec<(usize, usize)>,
}

/// Column `k` is the spherical-phase channel of user `k`, scaled by the path gain.
pub fn build_mu_channel(geom: &ArrayGeometry, users: &[Point3], amplitude: ChannelAmplitude) -> Result<MuChannel> {
    if users.is_empty() {
        return domain("at least one user is required");
    }
    let lambda = geom.wavelength();
    let centers = geom.element_centers();
    let columns: Vec<Vec<Complex64>> = users
        .par_iter()
        .map(|&u| {
            let h = fresnel_channel_vector(geom, u)?;
            Ok(match amplitude {
                ChannelAmplitude::Uniform => {
                    let g = lambda / (4.0 * PI * u.norm());
                    h.coefficients.into_iter().map(|c| c * g).collect()
                }
                ChannelAmplitude::PerElement => h
                    .coefficients
                    .into_iter()
                    .zip(&centers)
                    .map(|(c, &(x, y))| {
                        let r = Point3::new(u.x - x, u.y - y, u.z).norm();
                        c * (lambda / (4.0 * PI * r))
                    })
                    .collect(),
            })
        })
        .collect::<Result<_>>()?;

    let n = geom.element_count();
    let h = CMatrix::from_fn(n, users.len(), |i, k| columns[k][i]);
    let mut degenerate_pairs = Vec::new();
    for i in 0..users.len() {
        for j in i + 1..users.len() {
            if users[i] == users[j] {
                degenerate_pairs.push((i, j));
            }
        }
    }
    Ok(MuChannel { h, degenerate_pairs })
}

/// `|h_iᴴ h_j| / (‖h_i‖ ‖h_j‖)` for columns `i`, `j`.
pub fn column_correlation(h: &CMatrix, i: usize, j: usize) -> f64 {
    let a = h.column(i);
    let b = h.column(j);
    a.dotc(&b).norm() / (a.norm() * b.norm())
}

/// Precoder `W` (MN × K) with its scaling factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Precoder {
    pub w: CMatrix,
    pub alpha: f64,
}

/// `cond(HᴴH)`, computed as the squared condition number of `H`.
pub fn gram_condition(h: &CMatrix) -> Result<f64> {
    let s = svd(h)?.singular_values;
    let (max, min) = (s[0], s[s.len() - 1]);
    Ok(if min > 0.0 { (max / min).powi(2) } else { f64::INFINITY })
}

/// `W = αH(HᴴH)⁻¹` with `α` chosen so that `tr(WᴴW) = total_power`.
pub fn zf_precoder(h: &CMatrix, total_power: f64) -> Result<Precoder> {
    check_power(total_power)?;
    if h.ncols() > h.nrows() {
        return Err(Error::Rank(format!("{} users exceed {} antennas", h.ncols(), h.nrows())));
    }
    let cond = gram_condition(h)?;
    if !(cond < ZF_CONDITION_LIMIT) {
        return Err(Error::Rank(format!("cond(HᴴH) = {cond:e} ≥ {ZF_CONDITION_LIMIT:e}; zero-forcing does not exist")));
    }
    let gram = h.adjoint() * h;
    let inv = solve(&gram, &CMatrix::identity(h.ncols(), h.ncols()))?;
    let w0 = h * inv;
    let alpha = total_power.sqrt() / frobenius(&w0);
    Ok(Precoder { w: w0 * Complex64::new(alpha, 0.0), alpha })
}

/// Matched filter `W = αH` with equal power per beam: each column has norm `√(P/K)`.
pub fn mf_precoder(h: &CMatrix, total_power: f64) -> Result<Precoder> {
    check_power(total_power)?;
    let per_beam = (total_power / h.ncols() as f64).sqrt();
    let mut w = h.clone();
    for mut col in w.column_iter_mut() {
        let n = col.norm();
        if n == 0.0 {
            return Err(Error::Rank("zero channel column".into()));
        }
        col /= Complex64::new(n, 0.0);
        col *= Complex64::new(per_beam, 0.0);
    }
    let alpha = per_beam / h.column(0).norm();
    Ok(Precoder { w, alpha })
}

fn check_power(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        domain(format!("total power must be positive, got {p}"))
    }
}

/// Per-user link quality.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrReport {
    pub signal: Vec<f64>,
    pub interference: Vec<f64>,
    pub sinr: Vec<f64>,
    /// `Σ B log₂(1 + SINR_k)` in bit/s.
    pub sum_rate: f64,
}

/// `SINR_k = |h_kᴴw_k|² / (Σ_{i≠k} |h_kᴴw_i|² + noise_power)`, capped at [`SINR_CAP`].
pub fn evaluate_sinr(h: &CMatrix, w: &CMatrix, noise_power: f64, bandwidth: f64) -> Result<SinrReport> {
    if h.shape() != w.shape() {
        return domain(format!("H is {:?} but W is {:?}", h.shape(), w.shape()));
    }
    if !(noise_power >= 0.0) || !(bandwidth > 0.0) {
        return domain("noise power must be ≥ 0 and bandwidth > 0");
    }
    let g = h.adjoint() * w;
    let k = h.ncols();
    let mut signal = Vec::with_capacity(k);
    let mut interference = Vec::with_capacity(k);
    let mut sinr = Vec::with_capacity(k);
    for u in 0..k {
        let s = g[(u, u)].norm_sqr();
        let i: f64 = (0..k).filter(|&j| j != u).map(|j| g[(u, j)].norm_sqr()).sum();
        let denom = i + noise_power;
        signal.push(s);
        interference.push(i);
        sinr.push(if denom > 0.0 { (s / denom).min(SINR_CAP) } else { SINR_CAP });
    }
    let sum_rate = sinr.iter().map(|&s| bandwidth * s.ln_1p() / std::f64::consts::LN_2).sum();
    Ok(SinrReport { signal, interference, sinr, sum_rate })
}

/// A multi-user downlink: geometry, users, channel and precoder.
#[derive(Debug, Clone, PartialEq)]
pub struct MuMimoScene {
    pub geometry: ArrayGeometry,
    pub users: Vec<Point3>,
    pub h: CMatrix,
    pub w: CMatrix,
    pub alpha: f64,
    pub total_power: f64,
}

impl MuMimoScene {
    pub fn zero_forcing(geom: &ArrayGeometry, users: Vec<Point3>, total_power: f64) -> Result<Self> {
        let ch = build_mu_channel(geom, &users, ChannelAmplitude::Uniform)?;
        let p = zf_precoder(&ch.h, total_power)?;
        Ok(Self { geometry: *geom, users, h: ch.h, w: p.w, alpha: p.alpha, total_power })
    }

    pub fn matched_filter(geom: &ArrayGeometry, users: Vec<Point3>, total_power: f64) -> Result<Self> {
        let ch = build_mu_channel(geom, &users, ChannelAmplitude::Uniform)?;
        let p = mf_precoder(&ch.h, total_power)?;
        Ok(Self { geometry: *geom, users, h: ch.h, w: p.w, alpha: p.alpha, total_power })
    }

    /// `‖HᴴW − αI‖_F / |α|`.
    pub fn zf_residual(&self) -> f64 {
        let k = self.h.ncols();
        let g = self.h.adjoint() * &self.w - CMatrix::identity(k, k) * Complex64::new(self.alpha, 0.0);
        frobenius(&g) / self.alpha.abs()
    }

    pub fn sinr(&self, noise_power: f64, bandwidth: f64) -> Result<SinrReport> {
        evaluate_sinr(&self.h, &self.w, noise_power, bandwidth)
    }
}

/// On-axis users at the focal points of a plan; the far user sits at `far_distance`.
pub fn plan_users(plan: &FocalPlan, far_distance: f64) -> Vec<Point3> {
    plan.focal_points
        .iter()
        .map(|f| match f {
            Focus::Finite(d) => Point3::on_axis(*d),
            Focus::Infinite => Point3::on_axis(far_distance),
        })
        .collect()
}

/// The five-user scene at `∞, d_FA/20, /40, /60, /80`, with the far user at `d_FA`.
pub fn five_user_scene_users(geom: &ArrayGeometry) -> Vec<Point3> {
    let d_fa = boundary_distances(geom).fraunhofer_array;
    std::iter::once(d_fa).chain([20.0, 40.0, 60.0, 80.0].map(|k| d_fa / k)).map(Point3::on_axis).collect()
}
