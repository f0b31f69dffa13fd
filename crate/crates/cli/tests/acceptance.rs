//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p nearfield-cli --test acceptance`.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use nearfield::beam::{
    array_gain_exact, beam_depth_3db, beam_width_3db, focal_plane_half_gain_x, solve_a3db, square_beam_depth, Focus,
};
use nearfield::depth_mux::{build_mu_channel, five_user_scene_users, plan_depth_focal_points, zf_precoder, ChannelAmplitude, MuMimoScene};
use nearfield::field::Point3;
use nearfield::geometry::{build_upa, ArrayGeometry};
use nearfield::mimo_los::{
    build_los_mimo, capacity_bandwidth_sweep, capacity_frequency_sweep, capacity_optimal_spacing, capacity_waterfilling,
    free_space_gain, offdiag_magnitude, optimal_spacing, single_stream_rate, BandwidthRule, ChannelModel, GainModel,
    RadioParams,
};
use nearfield::regions::{boundary_distances, fraunhofer_distance};
use nearfield::{Complex64, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Subcommand and config name of every committed golden fixture.
const FIGURES: &[(&str, &str)] = &[
    ("regions", "regions_3ghz"),
    ("capacity-vs-bandwidth", "fig1_capacity_bandwidth"),
    ("gain-sweep", "fig4_gain_30x40"),
    ("gain-sweep", "fig4_gain_300x400"),
    ("beam-width", "fig5_beam_width"),
    ("heatmap", "fig6_heatmap"),
    ("depth-plan", "fig7_depth_profile"),
    ("g-of-x", "fig9_g_of_x"),
    ("depth-plan", "fig10_depth_plan_square"),
    ("depth-plan", "fig10_depth_plan_rect"),
    ("mode-patterns", "fig11_mode_patterns"),
    ("capacity-vs-frequency", "fig13_capacity_frequency"),
    ("beam-depth", "beam_depth_square"),
    ("zf-sinr", "zf_sinr_five_users"),
    ("los-capacity", "los_capacity_optimal"),
    ("dof", "dof"),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn nearfield(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_nearfield")).args(args).output().expect("binary runs")
}

fn run_figure(cmd: &str, name: &str, out: &Path) -> Result<String, String> {
    let config = crate_dir().join("configs").join(format!("{name}.toml"));
    let o = nearfield(&[cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    if !o.status.success() {
        return Err(format!("{name}: {}", String::from_utf8_lossy(&o.stderr)));
    }
    std::fs::read_to_string(out).map_err(|e| e.to_string())
}

fn body(csv: &str) -> String {
    csv.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

fn c1_regions() -> Outcome {
    let c = 3e8;
    let l3 = c / 3e9;
    let l30 = c / 30e9;
    let d_f = fraunhofer_distance(2.0 * l3, l3);
    let d_fa3 = fraunhofer_distance(2.0, l3);
    let d_fa30 = fraunhofer_distance(2.0, l30);
    let pass = rel(d_f, 0.8) < 1e-12 && rel(d_fa3, 80.0) < 1e-12 && rel(d_fa30, 800.0) < 1e-12;
    outcome(pass, format!("d_F = {d_f} m, d_FA = {d_fa3} / {d_fa30} m"))
}

fn c2_exact_gain() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (m, n) in [(30, 40), (300, 400)] {
        let g = build_upa(m, n, 0.25, 1.0).unwrap();
        let d_b = boundary_distances(&g).bjornson;
        let at_b = array_gain_exact(&g, d_b, 1e-6).unwrap();
        let far_min = [10.0, 30.0, 100.0, 1e3, 1e4]
            .iter()
            .map(|k| array_gain_exact(&g, k * d_b, 1e-6).unwrap())
            .fold(f64::INFINITY, f64::min);
        pass &= (at_b - 0.96).abs() <= 0.01 && far_min >= 0.995;
        notes.push(format!("{m}x{n}: G(d_B) = {at_b:.4}, min G(z ≥ 10 d_B) = {far_min:.5}"));
    }
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let ran = run_figure("gain-sweep", "fig4_gain_300x400", &dir.path().join("fig4.csv"));
    let secs = start.elapsed().as_secs_f64();
    let rows = ran.as_ref().map(|t| body(t).lines().count() - 1).unwrap_or(0);
    pass &= ran.is_ok() && rows == 40 && secs < 120.0;
    notes.push(format!("300x400 sweep: {rows} points in {secs:.1} s"));
    outcome(pass, notes.join("; "))
}

fn c3_beam_width() -> Outcome {
    let g = build_upa(300, 400, 0.25, 1.0).unwrap();
    let b = boundary_distances(&g);
    let mut pass = true;
    let mut notes = Vec::new();
    for (f, expected) in [(1e3 * b.fraunhofer, 8.86), (b.fraunhofer_array / 25.0, 44.3), (b.fraunhofer_array / 10.0, 110.75)] {
        let bw = beam_width_3db(&g, f).unwrap();
        let numeric = 2.0 * focal_plane_half_gain_x(&g, f).unwrap();
        pass &= rel(bw / b.fraunhofer, expected) <= 5e-3 && rel(numeric, bw) <= 5e-3;
        notes.push(format!("{:.2} d_F (numeric {:.3})", bw / b.fraunhofer, numeric / b.fraunhofer));
    }
    outcome(pass, notes.join(", "))
}

fn c4_beam_depth() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for m in [50, 100, 200] {
        let scaled = solve_a3db(m, m).unwrap() * (m * m) as f64;
        pass &= rel(scaled, 1.25) <= 0.02;
        notes.push(format!("M={m}: M²a = {scaled:.4}"));
    }
    let mut worst: f64 = 0.0;
    for m in [50, 100, 200] {
        let g = ArrayGeometry::with_element_diagonal(m, m, 0.5, 1.0).unwrap();
        let d_fa = boundary_distances(&g).fraunhofer_array;
        for k in [11.0, 15.0, 20.0, 40.0, 80.0, 300.0] {
            let f = d_fa / k;
            worst = worst.max(rel(beam_depth_3db(&g, Focus::Finite(f)).unwrap().bd_3db, square_beam_depth(d_fa, f)));
        }
        for f in [d_fa / 10.0, d_fa / 2.0, 5.0 * d_fa] {
            pass &= beam_depth_3db(&g, Focus::Finite(f)).unwrap().bd_3db.is_infinite();
        }
    }
    pass &= worst <= 1e-6;
    notes.push(format!("general vs square form max rel dev {worst:.1e}"));
    outcome(pass, notes.join(", "))
}

fn c5_depth_plan() -> Outcome {
    let sq = ArrayGeometry::with_element_diagonal(200, 200, 0.5, 1.0).unwrap();
    let b = boundary_distances(&sq);
    let five = plan_depth_focal_points(&sq, b.fraunhofer_array / 85.0).unwrap();
    let mut seq_ok = five.len() == 5 && five.focal_points[0] == Focus::Infinite;
    for (i, k) in [20.0, 40.0, 60.0, 80.0].iter().enumerate() {
        seq_ok &= rel(five.focal_points[i + 1].distance(), b.fraunhofer_array / k) <= 1e-9;
    }
    for (i, k) in [10.0, 30.0, 50.0, 70.0, 90.0].iter().enumerate() {
        seq_ok &= rel(five.intervals[i].0, b.fraunhofer_array / k) <= 1e-9;
        if i > 0 {
            seq_ok &= rel(five.intervals[i].1, five.intervals[i - 1].0) <= 1e-9;
        }
    }
    let square = plan_depth_focal_points(&sq, b.bjornson).unwrap().len();
    let rect_g = ArrayGeometry::with_element_diagonal(80, 500, 0.5, 1.0).unwrap();
    let rect = plan_depth_focal_points(&rect_g, boundary_distances(&rect_g).bjornson).unwrap().len();
    let rect_at_square_dmin = plan_depth_focal_points(&rect_g, b.bjornson).unwrap().len();
    let pass = seq_ok && square == 6 && (7..=9).contains(&rect) && rect > square;
    outcome(
        pass,
        format!(
            "square sequence {}; square count {square}; 80x500 count {rect} (accepted 7-9; {rect_at_square_dmin} at the square's d_B)",
            if seq_ok { "exact" } else { "WRONG" }
        ),
    )
}

fn c6_zero_forcing() -> Outcome {
    let g = ArrayGeometry::with_element_diagonal(200, 200, 0.5, 1.0).unwrap();
    let scene = MuMimoScene::zero_forcing(&g, five_user_scene_users(&g), 1.0).unwrap();
    let residual = scene.zf_residual();
    let r = scene.sinr(0.0, 1.0).unwrap();
    let isr = r.signal.iter().zip(&r.interference).map(|(s, i)| i / s).fold(0.0, f64::max);
    let d_fa = boundary_distances(&g).fraunhofer_array;
    let far = build_mu_channel(&g, &[Point3::on_axis(1e5 * d_fa), Point3::on_axis(2e5 * d_fa)], ChannelAmplitude::Uniform).unwrap();
    let rank = matches!(zf_precoder(&far.h, 1.0), Err(Error::Rank(_)));
    outcome(
        residual <= 1e-9 && isr <= 1e-18 && rank,
        format!("residual {residual:.1e}, max I/S {isr:.1e}, co-angular far users rank error: {rank}"),
    )
}

fn c7_orthogonality() -> Outcome {
    let (lambda, d) = (0.01, 10.0);
    let mut worst_eig: f64 = 0.0;
    for k in [2, 4, 8, 16] {
        let link = build_los_mimo(k, optimal_spacing(k, d, lambda), d, lambda, 1.0).unwrap();
        let bk = link.beta * k as f64;
        for e in link.eigenvalues(ChannelModel::Fresnel).unwrap() {
            worst_eig = worst_eig.max(rel(e, bk));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_sum: f64 = 0.0;
    for _ in 0..100 {
        let kc: usize = rng.gen_range(2..40);
        let k = rng.gen_range(0..kc);
        let l = (k + rng.gen_range(1..kc)) % kc;
        let lam = rng.gen_range(1e-3..0.1);
        let dist = rng.gen_range(1.0..500.0);
        let spacing = rng.gen_range(0.0..3.0) * (lam * dist / kc as f64).sqrt();
        let beta = free_space_gain(1.0, dist, lam);
        let step = 2.0 * std::f64::consts::PI * (k as f64 - l as f64) * spacing * spacing / (dist * lam);
        let brute: Complex64 = (0..kc).map(|m| Complex64::from_polar(1.0, step * m as f64)).sum();
        let dev = (offdiag_magnitude(kc, spacing, dist, lam, k, l) - beta * brute.norm()).abs() / (beta * kc as f64);
        worst_sum = worst_sum.max(dev);
    }
    outcome(
        worst_eig <= 1e-9 && worst_sum <= 1e-10,
        format!("eigenvalue rel dev {worst_eig:.1e}; closed form vs direct sum {worst_sum:.1e} (relative to βK)"),
    )
}

fn c8_capacity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let e = [rng.gen_range(0.01..20.0), rng.gen_range(0.01..20.0)];
        let snr = rng.gen_range(0.05..20.0);
        let wf = capacity_waterfilling(&e, snr, 1.0).unwrap().capacity;
        let grid = (0..=10_000)
            .map(|i| {
                let p = i as f64 / 1e4;
                ((e[0] * snr * p).ln_1p() + (e[1] * snr * (1.0 - p)).ln_1p()) / std::f64::consts::LN_2
            })
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(rel(wf, grid));
    }
    let (p_n0, b) = (10f64.powf(18.903), 1e9);
    let mut worst_closed: f64 = 0.0;
    for k in [1, 2, 4, 8, 16] {
        let link = build_los_mimo(k, optimal_spacing(k, 10.0, 0.01), 10.0, 0.01, 1.0).unwrap();
        let eig = link.eigenvalues(ChannelModel::Fresnel).unwrap();
        let wf = capacity_waterfilling(&eig, p_n0 / b, b).unwrap().capacity;
        worst_closed = worst_closed.max(rel(wf, capacity_optimal_spacing(k, link.beta, p_n0, b)));
    }
    outcome(
        worst <= 1e-6 && worst_closed <= 1e-9,
        format!("waterfilling vs grid {worst:.1e}; equal eigenvalues vs closed form {worst_closed:.1e}"),
    )
}

fn c9_frequency() -> Outcome {
    let radio = |g| RadioParams::new(1e9, 189.03, BandwidthRule::FractionOfCarrier(0.03), g, g).unwrap();
    let freqs: Vec<f64> = (1..=100).map(|i| i as f64 * 1e9).collect();
    let iso = capacity_frequency_sweep(0.01, 10.0, &freqs, &radio(GainModel::Isotropic)).unwrap();
    let caps: Vec<f64> = iso.iter().map(|p| p.capacity).collect();
    let peak = caps.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let unimodal = caps[..=peak].windows(2).all(|w| w[1] > w[0]) && caps[peak..].windows(2).all(|w| w[1] < w[0]);
    let interior = peak > 0 && peak + 1 < caps.len();
    let f_peak = freqs[peak];
    let at70 = [70e9];
    let i70 = capacity_frequency_sweep(0.01, 10.0, &at70, &radio(GainModel::Isotropic)).unwrap()[0];
    let d70 = capacity_frequency_sweep(0.01, 10.0, &at70, &radio(GainModel::Directive)).unwrap()[0];
    let ratio = d70.capacity / i70.capacity;
    let pass = unimodal && interior && (30e9..=50e9).contains(&f_peak) && ratio >= 8.0;
    outcome(
        pass,
        format!(
            "isotropic peak at {:.0} GHz (unique interior: {}); directive/isotropic at 70 GHz = {ratio:.2} (required ≥ 8, K = {})",
            f_peak / 1e9,
            unimodal && interior,
            i70.k
        ),
    )
}

fn c10_bandwidth() -> Outcome {
    let lambda = nearfield::wavelength(3e9);
    let beta = free_space_gain(1.0, 400.0, lambda);
    let p_n0 = 10f64.powf(18.4);
    let bs: Vec<f64> = (0..200).map(|i| 10f64.powf(6.0 + 5.0 * i as f64 / 199.0)).collect();
    let s = capacity_bandwidth_sweep(p_n0, beta, &bs).unwrap();
    let increasing = s.points.windows(2).all(|w| w[1].1 > w[0].1);
    let slopes: Vec<f64> = s.points.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
    let concave = slopes.windows(2).all(|w| w[1] < w[0]);
    let limit_dev = rel(s.limit, std::f64::consts::LOG2_E * p_n0 * beta);
    let b80_dev = rel(single_stream_rate(s.b80, p_n0 * beta), 0.8 * s.limit);
    outcome(
        increasing && concave && limit_dev <= 1e-9 && b80_dev <= 1e-6,
        format!("increasing {increasing}, concave {concave}, limit dev {limit_dev:.1e}, B80 = {:.3e} Hz (dev {b80_dev:.1e})", s.b80),
    )
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    for (cmd, name) in FIGURES {
        let a = dir.path().join(format!("{name}.a.csv"));
        let b = dir.path().join(format!("{name}.b.csv"));
        match (run_figure(cmd, name, &a), run_figure(cmd, name, &b)) {
            (Ok(x), Ok(y)) if body(&x) == body(&y) => {}
            (Ok(_), Ok(_)) => failures.push(format!("{name}: bodies differ")),
            (Err(e), _) | (_, Err(e)) => failures.push(e),
        }
        let golden = crate_dir().join("tests/golden").join(format!("{name}.csv"));
        let o = nearfield(&["compare-golden", a.to_str().unwrap(), golden.to_str().unwrap(), "--tol", "1e-6"]);
        if !o.status.success() {
            failures.push(format!("{name}: {}", String::from_utf8_lossy(&o.stderr).trim()));
        }
    }
    let detail = if failures.is_empty() {
        format!("{} figure outputs byte-identical across runs and within 1e-6 of golden", FIGURES.len())
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("region boundaries", c1_regions),
        ("exact array gain", c2_exact_gain),
        ("beam width", c3_beam_width),
        ("beam depth", c4_beam_depth),
        ("depth plan", c5_depth_plan),
        ("zero-forcing", c6_zero_forcing),
        ("LOS MIMO orthogonality", c7_orthogonality),
        ("capacity", c8_capacity),
        ("capacity vs frequency", c9_frequency),
        ("capacity vs bandwidth", c10_bandwidth),
        ("determinism and golden files", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
