//! Line-of-sight MIMO between two broadside-aligned ULAs: channel synthesis,
//! optimal antenna spacing, eigenstructure and capacity.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::numerics::linalg::{hermitian_eig, svd, CMatrix};
use crate::numerics::solve_scalar_root;
use crate::{wavelength, Complex64};

/// Bandwidth as a fixed value or as a fraction of the carrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandwidthRule {
    Fixed(f64),
    FractionOfCarrier(f64),
}

impl BandwidthRule {
    pub fn bandwidth(&self, carrier: f64) -> f64 {
        match *self {
            BandwidthRule::Fixed(b) => b,
            BandwidthRule::FractionOfCarrier(r) => r * carrier,
        }
    }
}

/// Antenna gain model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainModel {
    #[default]
    Isotropic,
    /// `G = 1/λ` with `λ` in meters: fixed physical area, gain grows with frequency.
    Directive,
}

impl GainModel {
    pub fn gain(&self, wavelength: f64) -> f64 {
        match self {
            GainModel::Isotropic => 1.0,
            GainModel::Directive => 1.0 / wavelength,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams {
    pub carrier_frequency: f64,
    /// `P/N₀` in linear units (Hz).
    pub power_over_noise: f64,
    pub bandwidth_rule: BandwidthRule,
    pub tx_gain: GainModel,
    pub rx_gain: GainModel,
}

impl RadioParams {
    pub fn new(
        carrier_frequency: f64,
        power_over_noise_db: f64,
        bandwidth_rule: BandwidthRule,
        tx_gain: GainModel,
        rx_gain: GainModel,
    ) -> Result<Self> {
        let p = Self {
            carrier_frequency,
            power_over_noise: 10f64.powf(power_over_noise_db / 10.0),
            bandwidth_rule,
            tx_gain,
            rx_gain,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_frequency > 0.0 && self.carrier_frequency.is_finite()) {
            return domain(format!("carrier frequency must be positive, got {}", self.carrier_frequency));
        }
        if !(self.power_over_noise > 0.0 && self.power_over_noise.is_finite()) {
            return domain(format!("P/N0 must be positive, got {}", self.power_over_noise));
        }
        let b = self.bandwidth();
        if !(b > 0.0 && b.is_finite()) {
            return domain(format!("bandwidth must be positive, got {b}"));
        }
        Ok(())
    }

    pub fn wavelength(&self) -> f64 {
        wavelength(self.carrier_frequency)
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth_rule.bandwidth(self.carrier_frequency)
    }

    pub fn gain_product(&self) -> f64 {
        let l = self.wavelength();
        self.tx_gain.gain(l) * self.rx_gain.gain(l)
    }

    pub fn with_carrier(&self, f: f64) -> Self {
        Self { carrier_frequency: f, ..*self }
    }
}

/// Free-space channel gain `G_t G_r (λ/(4πd))²`.
pub fn free_space_gain(gain_product: f64, distance: f64, wavelength: f64) -> f64 {
    gain_product * (wavelength / (4.0 * PI * distance)).powi(2)
}

/// Phase factor used for the exact channel entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// `e^{−j2π(d_{m,k} − d)/λ}`, consistent with the parabolic approximation.
    #[default]
    Propagation,
    /// `e^{−jπ(d_{m,k} − d)/λ}`.
    PaperLiteral,
}

/// Which channel matrix to analyse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelModel {
    #[default]
    Exact,
    Fresnel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LosMimoLink {
    pub k: usize,
    pub spacing: f64,
    pub distance: f64,
    pub wavelength: f64,
    pub h_exact: CMatrix,
    pub h_fresnel: CMatrix,
    /// Gain at the reference distance `d`.
    pub beta: f64,
}

impl LosMimoLink {
    pub fn channel(&self, model: ChannelModel) -> &CMatrix {
        match model {
            ChannelModel::Exact => &self.h_exact,
            ChannelModel::Fresnel => &self.h_fresnel,
        }
    }

    /// Eigenvalues of `HᴴH`, descending.
    pub fn eigenvalues(&self, model: ChannelModel) -> Result<Vec<f64>> {
        let h = self.channel(model);
        Ok(hermitian_eig(&(h.adjoint() * h))?.0.into_iter().map(|v| v.max(0.0)).collect())
    }
}

pub fn build_los_mimo(k: usize, spacing: f64, distance: f64, wavelength: f64, gain_product: f64) -> Result<LosMimoLink> {
    build_los_mimo_with(k, spacing, distance, wavelength, gain_product, PhaseConvention::Propagation)
}

pub fn build_los_mimo_with(
    k: usize,
    spacing: f64,
    distance: f64,
    wavelength: f64,
    gain_product: f64,
    convention: PhaseConvention,
) -> Result<LosMimoLink> {
    if k == 0 {
        return domain("a link needs at least one antenna");
    }
    if !(spacing >= 0.0 && distance > 0.0 && wavelength > 0.0 && gain_product > 0.0) {
        return domain("spacing must be ≥ 0 and distance, wavelength, gains > 0");
    }
    let phase_scale = match convention {
        PhaseConvention::Propagation => 2.0 * PI / wavelength,
        PhaseConvention::PaperLiteral => PI / wavelength,
    };
    let beta = free_space_gain(gain_product, distance, wavelength);
    let h_exact = CMatrix::from_fn(k, k, |m, n| {
        let off = (m as f64 - n as f64) * spacing;
        let d_mk = distance.hypot(off);
        // d_mk − d written as off²/(d_mk + d)
        let excess = off * off / (d_mk + distance);
        Complex64::from_polar(free_space_gain(gain_product, d_mk, wavelength).sqrt(), -phase_scale * excess)
    });
    let h_fresnel = CMatrix::from_fn(k, k, |m, n| {
        let delta = ((m as f64 - n as f64) * spacing).powi(2);
        Complex64::from_polar(beta.sqrt(), -PI * delta / (distance * wavelength))
    });
    Ok(LosMimoLink { k, spacing, distance, wavelength, h_exact, h_fresnel, beta })
}

/// Capacity-maximising spacing `√(λd/K)`.
pub fn optimal_spacing(k: usize, distance: f64, wavelength: f64) -> f64 {
    (wavelength * distance / k as f64).sqrt()
}

/// `|(H̃ᴴH̃)_{k,l}|` from the geometric-series closed form, isotropic gains.
pub fn offdiag_magnitude(k_count: usize, spacing: f64, distance: f64, wavelength: f64, k: usize, l: usize) -> f64 {
    let beta = free_space_gain(1.0, distance, wavelength);
    let theta = (l as f64 - k as f64) * spacing * spacing / (wavelength * distance);
    let t = theta - theta.round();
    if t.abs() < 1e-12 {
        return k_count as f64 * beta;
    }
    beta * ((PI * k_count as f64 * t).sin() / (PI * t).sin()).abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    /// bit/s
    pub capacity: f64,
    /// Fraction of the total power per eigenmode, in the input order.
    pub powers: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// Number of eigenmodes with nonzero power.
    pub k_used: usize,
}

fn rate(bandwidth: f64, gains: &[f64], powers: &[f64]) -> f64 {
    gains.iter().zip(powers).map(|(g, p)| (g * p).ln_1p()).sum::<f64>() * bandwidth / LN_2
}

fn check_capacity_inputs(eigenvalues: &[f64], snr: f64, bandwidth: f64) -> Result<()> {
    if eigenvalues.is_empty() {
        return domain("no eigenvalues");
    }
    if eigenvalues.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
        return domain("eigenvalues must be finite and ≥ 0");
    }
    if !(snr > 0.0 && bandwidth > 0.0) {
        return domain("SNR and bandwidth must be positive");
    }
    Ok(())
}

/// Waterfilling over eigenmodes with total power 1 and per-mode gain `snr·λ_i`.
pub fn capacity_waterfilling(eigenvalues: &[f64], snr: f64, bandwidth: f64) -> Result<CapacityResult> {
    check_capacity_inputs(eigenvalues, snr, bandwidth)?;
    let gains: Vec<f64> = eigenvalues.iter().map(|v| v * snr).collect();
    let mut order: Vec<usize> = (0..gains.len()).filter(|&i| gains[i] > 0.0).collect();
    order.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]));
    let mut powers = vec![0.0; gains.len()];
    if order.is_empty() {
        return Ok(CapacityResult { capacity: 0.0, powers, eigenvalues: eigenvalues.to_vec(), k_used: 0 });
    }
    let mut active = order.len();
    let mut level = 0.0;
    while active > 0 {
        let inv_sum: f64 = order[..active].iter().map(|&i| 1.0 / gains[i]).sum();
        level = (1.0 + inv_sum) / active as f64;
        if level - 1.0 / gains[order[active - 1]] > 0.0 {
            break;
        }
        active -= 1;
    }
    for &i in &order[..active] {
        powers[i] = level - 1.0 / gains[i];
    }
    let capacity = rate(bandwidth, &gains, &powers);
    Ok(CapacityResult { capacity, powers, eigenvalues: eigenvalues.to_vec(), k_used: active })
}

/// Equal power `1/K` on every eigenmode.
pub fn capacity_equal_power(eigenvalues: &[f64], snr: f64, bandwidth: f64) -> Result<CapacityResult> {
    check_capacity_inputs(eigenvalues, snr, bandwidth)?;
    let k = eigenvalues.len();
    let gains: Vec<f64> = eigenvalues.iter().map(|v| v * snr).collect();
    let powers = vec![1.0 / k as f64; k];
    Ok(CapacityResult {
        capacity: rate(bandwidth, &gains, &powers),
        k_used: eigenvalues.iter().filter(|&&v| v > 0.0).count(),
        powers,
        eigenvalues: eigenvalues.to_vec(),
    })
}

/// `B K log₂(1 + Pβ/(BN₀))`: capacity with the optimal spacing.
pub fn capacity_optimal_spacing(k: usize, beta: f64, power_over_noise: f64, bandwidth: f64) -> f64 {
    bandwidth * k as f64 * (power_over_noise * beta / bandwidth).ln_1p() / LN_2
}

/// Single-stream rate `B log₂(1 + Pβ/(BN₀))`.
pub fn single_stream_rate(bandwidth: f64, received_snr_hz: f64) -> f64 {
    bandwidth * (received_snr_hz / bandwidth).ln_1p() / LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthSweep {
    /// `(B, rate)` pairs.
    pub points: Vec<(f64, f64)>,
    /// `log₂(e)·Pβ/N₀`.
    pub limit: f64,
    /// Bandwidth at which the rate reaches 80% of the limit.
    pub b80: f64,
}

pub fn capacity_bandwidth_sweep(power_over_noise: f64, beta: f64, bandwidths: &[f64]) -> Result<BandwidthSweep> {
    let q = power_over_noise * beta;
    if !(q > 0.0 && q.is_finite()) {
        return domain(format!("Pβ/N0 must be positive, got {q}"));
    }
    if let Some(b) = bandwidths.iter().find(|b| !(**b > 0.0)) {
        return domain(format!("bandwidths must be positive, got {b}"));
    }
    let limit = q / LN_2;
    let points = bandwidths.par_iter().map(|&b| (b, single_stream_rate(b, q))).collect();
    let b80 = solve_scalar_root(|b| single_stream_rate(b, q) / limit - 0.8, (q / 10.0, 10.0 * q), 1e-13 * q)?;
    Ok(BandwidthSweep { points, limit, b80 })
}

/// Largest `K ≥ 1` with `√(λd/K)(K − 1) + λ/2 ≤ √A`.
pub fn antennas_for_area(area: f64, distance: f64, wavelength: f64) -> usize {
    let side = area.sqrt();
    let fits = |k: usize| optimal_spacing(k, distance, wavelength) * (k as f64 - 1.0) + wavelength / 2.0 <= side;
    let mut k = 1;
    while k < 10_000_000 && fits(k + 1) {
        k += 1;
    }
    k
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    pub frequency: f64,
    pub wavelength: f64,
    pub k: usize,
    pub spacing: f64,
    pub beta: f64,
    pub bandwidth: f64,
    pub capacity: f64,
}

/// Optimal-spacing capacity for a fixed square array area at each carrier.
pub fn capacity_frequency_sweep(area: f64, distance: f64, freqs: &[f64], radio: &RadioParams) -> Result<Vec<FrequencyPoint>> {
    if freqs.is_empty() {
        return domain("frequency range is empty");
    }
    if !(area > 0.0 && distance > 0.0) {
        return domain("array area and distance must be positive");
    }
    freqs
        .par_iter()
        .map(|&f| {
            let r = radio.with_carrier(f);
            r.validate()?;
            let lambda = r.wavelength();
            let k = antennas_for_area(area, distance, lambda);
            let beta = free_space_gain(r.gain_product(), distance, lambda);
            let bandwidth = r.bandwidth();
            Ok(FrequencyPoint {
                frequency: f,
                wavelength: lambda,
                k,
                spacing: optimal_spacing(k, distance, lambda),
                beta,
                bandwidth,
                capacity: capacity_optimal_spacing(k, beta, r.power_over_noise, bandwidth),
            })
        })
        .collect()
}

/// Spatial degrees of freedom `πA/λ²` of a planar aperture.
pub fn spatial_dof(area: f64, wavelength: f64) -> f64 {
    PI * area / (wavelength * wavelength)
}

pub const MODE_PATTERN_SAMPLES: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeAnalysis {
    /// Eigenvalues of `HᴴH` divided by their sum, descending.
    pub fractions: Vec<f64>,
    /// Angles in radians over `[−π/2, π/2]`.
    pub angles: Vec<f64>,
    /// `patterns[i][j] = |a(θ_j)ᴴ v_i|² / K` for right singular vector `v_i`.
    pub patterns: Vec<Vec<f64>>,
}

pub fn mode_analysis(link: &LosMimoLink, model: ChannelModel) -> Result<ModeAnalysis> {
    mode_analysis_with(link, model, MODE_PATTERN_SAMPLES)
}

pub fn mode_analysis_with(link: &LosMimoLink, model: ChannelModel, samples: usize) -> Result<ModeAnalysis> {
    if samples < 2 {
        return domain("at least two angle samples are required");
    }
    let dec = svd(link.channel(model))?;
    let power: Vec<f64> = dec.singular_values.iter().map(|s| s * s).collect();
    let total: f64 = power.iter().sum();
    if !(total > 0.0) {
        return domain("channel has no energy");
    }
    let fractions = power.iter().map(|p| p / total).collect();
    let angles: Vec<f64> = (0..samples).map(|i| -PI / 2.0 + PI * i as f64 / (samples - 1) as f64).collect();
    let k = link.k;
    let kw = 2.0 * PI * link.spacing / link.wavelength;
    let patterns = (0..dec.v.ncols())
        .map(|i| {
            let v = dec.v.column(i);
            angles
                .iter()
                .map(|&th| {
                    let s = kw * th.sin();
                    let acc: Complex64 = (0..k).map(|n| Complex64::from_polar(1.0, -s * n as f64) * v[n]).sum();
                    acc.norm_sqr() / k as f64
                })
                .collect()
        })
        .collect();
    Ok(ModeAnalysis { fractions, angles, patterns })
}
