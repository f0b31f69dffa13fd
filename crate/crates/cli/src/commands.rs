//! One function per subcommand; each returns the CSV series it emits.

use nearfield::beam::{
    beam_depth_3db_with, beam_pattern_map, beam_width_3db, focal_plane_half_gain_x, g_of_x, gain_axial,
    gain_focal_plane, solve_a3db, A3dbSource, Focus,
};
use nearfield::beam::array_gain_exact;
use nearfield::depth_mux::{
    build_mu_channel, evaluate_sinr, mf_precoder, plan_depth_focal_points_with, plan_users, zf_precoder,
    ChannelAmplitude,
};
use nearfield::field::Point3;
use nearfield::mimo_los::{
    build_los_mimo_with, capacity_bandwidth_sweep, capacity_equal_power, capacity_frequency_sweep,
    capacity_optimal_spacing, capacity_waterfilling, free_space_gain, mode_analysis_with, optimal_spacing,
    spatial_dof, ChannelModel, GainModel, PhaseConvention, MODE_PATTERN_SAMPLES,
};
use nearfield::regions::{classify, RegionBounds};
use nearfield::numerics::linalg::frobenius;
use nearfield::Complex64;
use serde::Deserialize;

use crate::config::{RunConfig, Scene};
use crate::series::CsvSeries;
use crate::units::Length;
use crate::CliError;

const DEFAULT_GAIN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum GridSpacing {
    #[default]
    Log,
    Linear,
}

fn grid(start: f64, stop: f64, points: usize, spacing: GridSpacing, what: &str) -> Result<Vec<f64>, CliError> {
    if points == 0 {
        return Err(CliError::Config(format!("{what}: points must be ≥ 1")));
    }
    if !(start.is_finite() && stop.is_finite()) || (spacing == GridSpacing::Log && !(start > 0.0 && stop > 0.0)) {
        return Err(CliError::Config(format!("{what}: invalid range [{start}, {stop}]")));
    }
    if points == 1 {
        return Ok(vec![start]);
    }
    let t = |i: usize| i as f64 / (points - 1) as f64;
    Ok(match spacing {
        GridSpacing::Linear => (0..points).map(|i| start + (stop - start) * t(i)).collect(),
        GridSpacing::Log => {
            let (a, b) = (start.log10(), stop.log10());
            (0..points).map(|i| 10f64.powf(a + (b - a) * t(i))).collect()
        }
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum A3dbChoice {
    #[default]
    Auto,
    Numeric,
}

impl From<A3dbChoice> for A3dbSource {
    fn from(c: A3dbChoice) -> Self {
        match c {
            A3dbChoice::Auto => A3dbSource::Auto,
            A3dbChoice::Numeric => A3dbSource::Numeric,
        }
    }
}

fn bounds(scene: &Scene) -> RegionBounds {
    scene.ctx.bounds.expect("scene carries bounds")
}

fn focus_of(d: f64) -> Focus {
    Focus::from(d)
}

pub fn regions(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize, Default)]
    #[serde(deny_unknown_fields, default)]
    struct Exp {
        distances: Vec<Length>,
    }
    let scene = cfg.scene("regions")?;
    let exp: Exp = cfg.experiment()?;
    let g = &scene.geometry;
    let b = bounds(&scene);
    let lambda = g.wavelength();
    let mut s = CsvSeries::new(&["name", "meters", "over_lambda", "region"]);
    for (name, v) in [
        ("element_diagonal", g.element_diagonal()),
        ("aperture_diagonal", g.aperture_diagonal()),
        ("reactive", b.reactive),
        ("fraunhofer", b.fraunhofer),
        ("bjornson", b.bjornson),
        ("fraunhofer_array", b.fraunhofer_array),
    ] {
        s.push(vec![name.into(), v.into(), (v / lambda).into(), "".into()]);
    }
    for (i, d) in exp.distances.iter().enumerate() {
        let v = scene.len(d, &format!("experiment.distances[{i}]"))?;
        s.push(vec!["distance".into(), v.into(), (v / lambda).into(), classify(v, &b).label().into()]);
    }
    Ok(s)
}

pub fn gain_sweep(cfg: &RunConfig, tol: Option<f64>) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        z_start: Length,
        z_stop: Length,
        points: usize,
        #[serde(default)]
        spacing: GridSpacing,
        tol: Option<f64>,
    }
    let scene = cfg.scene("gain-sweep")?;
    let exp: Exp = cfg.experiment()?;
    let tol = tol.or(exp.tol).unwrap_or(DEFAULT_GAIN_TOL);
    let b = bounds(&scene);
    let zs = grid(scene.len(&exp.z_start, "experiment.z_start")?, scene.len(&exp.z_stop, "experiment.z_stop")?, exp.points, exp.spacing, "experiment")?;
    let mut s = CsvSeries::new(&["z_m", "z_over_dF", "region", "gain"]);
    s.meta("quadrature_tol", format!("{tol:e}"));
    for z in zs {
        let gain = array_gain_exact(&scene.geometry, z, tol)?;
        s.push(vec![z.into(), (z / b.fraunhofer).into(), classify(z, &b).label().into(), gain.into()]);
    }
    Ok(s)
}

pub fn beam_width(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        focal: Vec<Length>,
        #[serde(default = "default_profile_points")]
        x_points: usize,
        #[serde(default = "default_x_span")]
        x_span: f64,
        #[serde(default = "yes")]
        vector_model: bool,
    }
    let scene = cfg.scene("beam-width")?;
    let exp: Exp = cfg.experiment()?;
    let g = &scene.geometry;
    let d_f = bounds(&scene).fraunhofer;
    let mut s = CsvSeries::new(&[
        "focal_m", "focal_over_dF", "bw_3db_over_dF", "bw_numeric_over_dF", "x_m", "x_over_dF", "gain_closed", "gain_vector",
    ]);
    for (i, f) in exp.focal.iter().enumerate() {
        let f = scene.len(f, &format!("experiment.focal[{i}]"))?;
        let bw = beam_width_3db(g, f)?;
        let bw_num = 2.0 * focal_plane_half_gain_x(g, f)?;
        let xs = grid(-exp.x_span * bw, exp.x_span * bw, exp.x_points, GridSpacing::Linear, "experiment")?;
        let vector = if exp.vector_model {
            beam_pattern_map(g, Focus::Finite(f), &xs, &[f])?.gains
        } else {
            vec![f64::NAN; xs.len()]
        };
        for (x, gv) in xs.iter().zip(vector) {
            s.push(vec![
                f.into(),
                (f / d_f).into(),
                (bw / d_f).into(),
                (bw_num / d_f).into(),
                (*x).into(),
                (x / d_f).into(),
                gain_focal_plane(g, f, *x, 0.0)?.into(),
                gv.into(),
            ]);
        }
    }
    Ok(s)
}

fn default_profile_points() -> usize {
    201
}

fn default_x_span() -> f64 {
    2.0
}

fn yes() -> bool {
    true
}

pub fn beam_depth(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        #[serde(default)]
        focal: Vec<Length>,
        focal_start: Option<Length>,
        focal_stop: Option<Length>,
        #[serde(default)]
        points: usize,
        #[serde(default)]
        spacing: GridSpacing,
        #[serde(default)]
        a3db: A3dbChoice,
    }
    let scene = cfg.scene("beam-depth")?;
    let exp: Exp = cfg.experiment()?;
    let g = &scene.geometry;
    let d_fa = bounds(&scene).fraunhofer_array;
    let mut focal = exp
        .focal
        .iter()
        .enumerate()
        .map(|(i, f)| scene.len(f, &format!("experiment.focal[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if let (Some(a), Some(b)) = (&exp.focal_start, &exp.focal_stop) {
        focal.extend(grid(scene.len(a, "experiment.focal_start")?, scene.len(b, "experiment.focal_stop")?, exp.points, exp.spacing, "experiment")?);
    }
    if focal.is_empty() {
        return Err(CliError::Config("experiment: give focal = [...] or focal_start/focal_stop/points".into()));
    }
    let mut s = CsvSeries::new(&[
        "focal_m", "focal_over_dFA", "a3db", "z_lo_m", "z_hi_m", "bd_m", "bd_over_dFA", "bw_m",
    ]);
    for f in focal {
        let m = beam_depth_3db_with(g, focus_of(f), exp.a3db.into())?;
        s.push(vec![
            f.into(),
            (f / d_fa).into(),
            m.a_3db.into(),
            m.bd_interval.0.into(),
            m.bd_interval.1.into(),
            m.bd_3db.into(),
            (m.bd_3db / d_fa).into(),
            m.bw_3db.into(),
        ]);
    }
    Ok(s)
}

pub fn heatmap(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        focal: Length,
        x_min: Length,
        x_max: Length,
        x_points: usize,
        z_min: Length,
        z_max: Length,
        z_points: usize,
        #[serde(default = "linear")]
        z_spacing: GridSpacing,
    }
    fn linear() -> GridSpacing {
        GridSpacing::Linear
    }
    let scene = cfg.scene("heatmap")?;
    let exp: Exp = cfg.experiment()?;
    let f = scene.len(&exp.focal, "experiment.focal")?;
    let xs = grid(scene.len(&exp.x_min, "experiment.x_min")?, scene.len(&exp.x_max, "experiment.x_max")?, exp.x_points, GridSpacing::Linear, "experiment.x")?;
    let zs = grid(scene.len(&exp.z_min, "experiment.z_min")?, scene.len(&exp.z_max, "experiment.z_max")?, exp.z_points, exp.z_spacing, "experiment.z")?;
    let map = beam_pattern_map(&scene.geometry, focus_of(f), &xs, &zs)?;
    let mut s = CsvSeries::new(&["x_m", "z_m", "gain"]);
    for (iz, z) in zs.iter().enumerate() {
        for (ix, x) in xs.iter().enumerate() {
            s.push(vec![(*x).into(), (*z).into(), map.at(ix, iz).into()]);
        }
    }
    Ok(s)
}

pub fn g_of_x_cmd(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        shapes: Vec<[usize; 2]>,
        x_start: f64,
        x_stop: f64,
        points: usize,
        #[serde(default)]
        spacing: GridSpacing,
    }
    let exp: Exp = cfg.experiment()?;
    let xs = grid(exp.x_start, exp.x_stop, exp.points, exp.spacing, "experiment")?;
    let mut s = CsvSeries::new(&["rows", "cols", "x", "gain", "a3db"]);
    for [m, n] in exp.shapes {
        let a = solve_a3db(m, n)?;
        for &x in &xs {
            s.push(vec![m.into(), n.into(), x.into(), g_of_x(m, n, x).into(), a.into()]);
        }
    }
    Ok(s)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanExp {
    #[serde(default = "bjornson")]
    d_min: Length,
    #[serde(default)]
    a3db: A3dbChoice,
    #[serde(default)]
    profile_points: usize,
    profile_z_min: Option<Length>,
    profile_z_max: Option<Length>,
}

fn bjornson() -> Length {
    "dB".parse().expect("valid token")
}

fn array_fraunhofer() -> Length {
    "dFA".parse().expect("valid token")
}

pub fn depth_plan(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    let scene = cfg.scene("depth-plan")?;
    let exp: PlanExp = cfg.experiment()?;
    let g = &scene.geometry;
    let b = bounds(&scene);
    let d_min = scene.len(&exp.d_min, "experiment.d_min")?;
    let plan = plan_depth_focal_points_with(g, d_min, exp.a3db.into())?;
    if exp.profile_points == 0 {
        let mut s = CsvSeries::new(&["index", "focal_m", "focal_over_dFA", "z_lo_m", "z_hi_m", "z_lo_over_dFA", "z_hi_over_dFA"]);
        s.meta("a3db", format!("{:e}", plan.a_3db));
        s.meta("focal_points", plan.len());
        for (i, (f, (lo, hi))) in plan.focal_points.iter().zip(&plan.intervals).enumerate() {
            let d = f.distance();
            s.push(vec![
                i.into(),
                d.into(),
                (d / b.fraunhofer_array).into(),
                (*lo).into(),
                (*hi).into(),
                (lo / b.fraunhofer_array).into(),
                (hi / b.fraunhofer_array).into(),
            ]);
        }
        return Ok(s);
    }
    let z_min = match &exp.profile_z_min {
        Some(l) => scene.len(l, "experiment.profile_z_min")?,
        None => d_min,
    };
    let z_max = match &exp.profile_z_max {
        Some(l) => scene.len(l, "experiment.profile_z_max")?,
        None => b.fraunhofer_array,
    };
    let zs = grid(z_min, z_max, exp.profile_points, GridSpacing::Log, "experiment.profile")?;
    let mut s = CsvSeries::new(&["focal_index", "focal_m", "z_m", "z_over_dFA", "gain"]);
    s.meta("a3db", format!("{:e}", plan.a_3db));
    for (i, f) in plan.focal_points.iter().enumerate() {
        for &z in &zs {
            s.push(vec![i.into(), f.distance().into(), z.into(), (z / b.fraunhofer_array).into(), gain_axial(g, *f, z)?.into()]);
        }
    }
    Ok(s)
}

pub fn zf_sinr(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        users: Option<Vec<[Length; 3]>>,
        #[serde(default = "bjornson")]
        d_min: Length,
        #[serde(default = "array_fraunhofer")]
        far_user: Length,
        #[serde(default)]
        precoder: PrecoderKind,
        #[serde(default = "unit_power")]
        total_power_w: f64,
        #[serde(default)]
        per_element_amplitude: bool,
    }
    #[derive(Deserialize, Default, Clone, Copy, PartialEq, Eq)]
    #[serde(rename_all = "lowercase")]
    enum PrecoderKind {
        #[default]
        Zf,
        Mf,
    }
    fn unit_power() -> f64 {
        1.0
    }
    let scene = cfg.scene("zf-sinr")?;
    let radio = cfg.radio("zf-sinr")?;
    let exp: Exp = cfg.experiment()?;
    let g = &scene.geometry;
    let users = match &exp.users {
        Some(list) => list
            .iter()
            .enumerate()
            .map(|(i, [x, y, z])| {
                let f = format!("experiment.users[{i}]");
                Ok(Point3::new(scene.len(x, &f)?, scene.len(y, &f)?, scene.len(z, &f)?))
            })
            .collect::<Result<Vec<_>, CliError>>()?,
        None => {
            let plan = plan_depth_focal_points_with(g, scene.len(&exp.d_min, "experiment.d_min")?, A3dbSource::Auto)?;
            plan_users(&plan, scene.len(&exp.far_user, "experiment.far_user")?)
        }
    };
    let carrier = nearfield::SPEED_OF_LIGHT / g.wavelength();
    let params = radio.params(Some(radio.carrier_frequency_hz.unwrap_or(carrier)))?;
    let bandwidth = params.bandwidth();
    let noise = bandwidth * exp.total_power_w / params.power_over_noise;
    let amplitude = if exp.per_element_amplitude { ChannelAmplitude::PerElement } else { ChannelAmplitude::Uniform };
    let ch = build_mu_channel(g, &users, amplitude)?;
    let p = match exp.precoder {
        PrecoderKind::Zf => zf_precoder(&ch.h, exp.total_power_w)?,
        PrecoderKind::Mf => mf_precoder(&ch.h, exp.total_power_w)?,
    };
    let r = evaluate_sinr(&ch.h, &p.w, noise, bandwidth)?;
    let k = users.len();
    let residual = frobenius(&(ch.h.adjoint() * &p.w - nearfield::numerics::linalg::CMatrix::identity(k, k) * Complex64::new(p.alpha, 0.0))) / p.alpha;
    let mut s = CsvSeries::new(&["user", "x_m", "y_m", "z_m", "signal", "interference", "noise", "sinr_db", "rate_bps"]);
    s.meta("precoder", if exp.precoder == PrecoderKind::Zf { "zf" } else { "mf" });
    s.meta("zf_residual", format!("{residual:e}"));
    s.meta("sum_rate_bps", format!("{:e}", r.sum_rate));
    if !ch.degenerate_pairs.is_empty() {
        s.meta("degenerate_pairs", format!("{:?}", ch.degenerate_pairs));
    }
    for (i, u) in users.iter().enumerate() {
        s.push(vec![
            i.into(),
            u.x.into(),
            u.y.into(),
            u.z.into(),
            r.signal[i].into(),
            r.interference[i].into(),
            noise.into(),
            (10.0 * r.sinr[i].log10()).into(),
            (bandwidth * r.sinr[i].ln_1p() / std::f64::consts::LN_2).into(),
        ]);
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SpacingChoice {
    Optimal,
    Length(Length),
}

impl<'de> Deserialize<'de> for SpacingChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.trim() == "optimal" {
            Ok(SpacingChoice::Optimal)
        } else {
            s.parse().map(SpacingChoice::Length).map_err(serde::de::Error::custom)
        }
    }
}

fn optimal() -> SpacingChoice {
    SpacingChoice::Optimal
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModelChoice {
    #[default]
    Exact,
    Fresnel,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum PhaseChoice {
    #[default]
    Propagation,
    Paper,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkExp {
    k: usize,
    distance: Length,
    #[serde(default = "optimal")]
    spacing: SpacingChoice,
    #[serde(default)]
    model: ModelChoice,
    #[serde(default)]
    phase: PhaseChoice,
    #[serde(default = "pattern_samples")]
    samples: usize,
    modes: Option<usize>,
}

fn pattern_samples() -> usize {
    MODE_PATTERN_SAMPLES
}

struct Link {
    link: nearfield::mimo_los::LosMimoLink,
    model: ChannelModel,
    params: nearfield::mimo_los::RadioParams,
}

fn link_from(cfg: &RunConfig, command: &str) -> Result<(Link, LinkExp), CliError> {
    let radio = cfg.radio(command)?;
    let params = radio.params(None)?;
    let exp: LinkExp = cfg.experiment()?;
    let lambda = params.wavelength();
    let d = exp.distance.resolve_plain(Some(lambda)).map_err(|e| CliError::Config(format!("experiment.distance: {e}")))?;
    let spacing = match exp.spacing {
        SpacingChoice::Optimal => optimal_spacing(exp.k.max(1), d, lambda),
        SpacingChoice::Length(l) => l.resolve_plain(Some(lambda)).map_err(|e| CliError::Config(format!("experiment.spacing: {e}")))?,
    };
    let phase = match exp.phase {
        PhaseChoice::Propagation => PhaseConvention::Propagation,
        PhaseChoice::Paper => PhaseConvention::PaperLiteral,
    };
    let link = build_los_mimo_with(exp.k, spacing, d, lambda, params.gain_product(), phase)?;
    let model = match exp.model {
        ModelChoice::Exact => ChannelModel::Exact,
        ModelChoice::Fresnel => ChannelModel::Fresnel,
    };
    Ok((Link { link, model, params }, exp))
}

pub fn los_capacity(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    let (l, _) = link_from(cfg, "los-capacity")?;
    let b = l.params.bandwidth();
    let snr = l.params.power_over_noise / b;
    let eig = l.link.eigenvalues(l.model)?;
    let wf = capacity_waterfilling(&eig, snr, b)?;
    let eq = capacity_equal_power(&eig, snr, b)?;
    let closed = capacity_optimal_spacing(l.link.k, l.link.beta, l.params.power_over_noise, b);
    let total: f64 = eig.iter().sum();
    let mut s = CsvSeries::new(&[
        "mode", "eigenvalue", "fraction", "power_waterfilling", "power_equal",
        "capacity_waterfilling_bps", "capacity_equal_bps", "capacity_closed_form_bps",
    ]);
    s.meta("spacing_m", format!("{:e}", l.link.spacing));
    s.meta("beta", format!("{:e}", l.link.beta));
    for (i, e) in eig.iter().enumerate() {
        s.push(vec![
            i.into(),
            (*e).into(),
            (e / total).into(),
            wf.powers[i].into(),
            eq.powers[i].into(),
            wf.capacity.into(),
            eq.capacity.into(),
            closed.into(),
        ]);
    }
    Ok(s)
}

pub fn mode_patterns(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    let (l, exp) = link_from(cfg, "mode-patterns")?;
    let m = mode_analysis_with(&l.link, l.model, exp.samples)?;
    let modes = exp.modes.unwrap_or(m.patterns.len()).min(m.patterns.len());
    let mut s = CsvSeries::new(&["mode", "fraction", "theta_deg", "pattern"]);
    for i in 0..modes {
        for (th, p) in m.angles.iter().zip(&m.patterns[i]) {
            s.push(vec![i.into(), m.fractions[i].into(), th.to_degrees().into(), (*p).into()]);
        }
    }
    Ok(s)
}

pub fn capacity_vs_bandwidth(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        distance: Length,
        b_start_hz: f64,
        b_stop_hz: f64,
        #[serde(default = "two_hundred")]
        points: usize,
        #[serde(default)]
        spacing: GridSpacing,
    }
    fn two_hundred() -> usize {
        200
    }
    let radio = cfg.radio("capacity-vs-bandwidth")?;
    let exp: Exp = cfg.experiment()?;
    let f = radio.carrier_frequency_hz.ok_or_else(|| CliError::Config("radio.carrier_frequency_hz is required".into()))?;
    let lambda = nearfield::wavelength(f);
    let d = exp.distance.resolve_plain(Some(lambda)).map_err(|e| CliError::Config(format!("experiment.distance: {e}")))?;
    let gp = GainModel::from(radio.tx_gain).gain(lambda) * GainModel::from(radio.rx_gain).gain(lambda);
    let beta = free_space_gain(gp, d, lambda);
    let bs = grid(exp.b_start_hz, exp.b_stop_hz, exp.points, exp.spacing, "experiment")?;
    let sweep = capacity_bandwidth_sweep(radio.power_over_noise(), beta, &bs)?;
    let mut s = CsvSeries::new(&["bandwidth_hz", "rate_bps", "limit_bps", "fraction_of_limit"]);
    s.meta("beta", format!("{beta:e}"));
    s.meta("b80_hz", format!("{:e}", sweep.b80));
    for (b, r) in sweep.points {
        s.push(vec![b.into(), r.into(), sweep.limit.into(), (r / sweep.limit).into()]);
    }
    Ok(s)
}

pub fn capacity_vs_frequency(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        area_m2: f64,
        distance: Length,
        #[serde(default = "f_lo")]
        f_start_hz: f64,
        #[serde(default = "f_hi")]
        f_stop_hz: f64,
        #[serde(default = "hundred")]
        points: usize,
        #[serde(default = "linear")]
        spacing: GridSpacing,
    }
    fn f_lo() -> f64 {
        1e9
    }
    fn f_hi() -> f64 {
        100e9
    }
    fn hundred() -> usize {
        100
    }
    fn linear() -> GridSpacing {
        GridSpacing::Linear
    }
    let radio = cfg.radio("capacity-vs-frequency")?;
    let exp: Exp = cfg.experiment()?;
    let d = exp.distance.resolve_plain(None).map_err(|e| CliError::Config(format!("experiment.distance: {e}")))?;
    let fs = grid(exp.f_start_hz, exp.f_stop_hz, exp.points, exp.spacing, "experiment")?;
    let base = radio.params(Some(fs[0]))?;
    let iso = nearfield::mimo_los::RadioParams { tx_gain: GainModel::Isotropic, rx_gain: GainModel::Isotropic, ..base };
    let dir = nearfield::mimo_los::RadioParams { tx_gain: GainModel::Directive, rx_gain: GainModel::Directive, ..base };
    let a = capacity_frequency_sweep(exp.area_m2, d, &fs, &iso)?;
    let b = capacity_frequency_sweep(exp.area_m2, d, &fs, &dir)?;
    let mut s = CsvSeries::new(&[
        "frequency_hz", "wavelength_m", "k", "spacing_m", "bandwidth_hz", "capacity_isotropic_bps", "capacity_directive_bps", "directive_ratio",
    ]);
    for (p, q) in a.iter().zip(&b) {
        s.push(vec![
            p.frequency.into(),
            p.wavelength.into(),
            p.k.into(),
            p.spacing.into(),
            p.bandwidth.into(),
            p.capacity.into(),
            q.capacity.into(),
            (q.capacity / p.capacity).into(),
        ]);
    }
    Ok(s)
}

pub fn dof(cfg: &RunConfig) -> Result<CsvSeries, CliError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Exp {
        area_m2: f64,
        f_start_hz: f64,
        f_stop_hz: f64,
        points: usize,
        #[serde(default)]
        spacing: GridSpacing,
    }
    let exp: Exp = cfg.experiment()?;
    if !(exp.area_m2 > 0.0) {
        return Err(CliError::Config(format!("experiment.area_m2 must be positive, got {}", exp.area_m2)));
    }
    let mut s = CsvSeries::new(&["frequency_hz", "wavelength_m", "dof"]);
    for f in grid(exp.f_start_hz, exp.f_stop_hz, exp.points, exp.spacing, "experiment")? {
        let l = nearfield::wavelength(f);
        s.push(vec![f.into(), l.into(), spatial_dof(exp.area_m2, l).into()]);
    }
    Ok(s)
}
