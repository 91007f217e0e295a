//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line straight to stderr (visible without
//! `--nocapture`) before asserting.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::time::{Duration, Instant};

use casimir_cli::{run, Command, RayonExecutor, RunConfig};
use casimir_core::analysis::{default_ratio_grid, fit_low_t, ratio_series};
use casimir_core::asymptotics::{
    correction_coefficient_c2, g_prime_zero_analytic, g_prime_zero_quadrature,
    integral_bx2_quadrature, integral_bx_quadrature, integral_i_quadrature, leading_coefficient_c1,
    power_term_pieces, zeta_minus_three_halves, zeta_route, C2Variant,
};
use casimir_core::dispersion::{DispersionModel, DrudeParameters};
use casimir_core::lifshitz::{
    delta_free_energy, entropy, free_energy, free_energy_t0, Geometry, LifshitzConfig,
    Polarizations,
};
use casimir_core::units::{BOLTZMANN, HBAR, SPEED_OF_LIGHT, ZETA_3};

fn report(n: u32, pass: bool, detail: &str, elapsed: Duration) {
    let _ = writeln!(
        std::io::stderr().lock(),
        "criterion {n}: {} {detail} [{:.2} s]",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn finish(n: u32, ok: bool, detail: String, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    let pass = ok && elapsed <= limit;
    let detail = if ok && !pass {
        format!("{detail}; runtime over {} s", limit.as_secs())
    } else {
        detail
    };
    report(n, pass, &detail, elapsed);
    assert!(pass, "criterion {n}: {detail}");
}

fn gold() -> DrudeParameters {
    DrudeParameters::gold()
}

fn micron() -> Geometry {
    Geometry::new(1e-6).unwrap()
}

fn exec() -> RayonExecutor {
    RayonExecutor::new(1).unwrap()
}

const SECOND: Duration = Duration::from_secs(1);
const MINUTE: Duration = Duration::from_secs(60);

#[test]
fn criterion_01_g_prime_zero() {
    let start = Instant::now();
    let check = g_prime_zero_quadrature().unwrap();
    let analytic = g_prime_zero_analytic();
    let ok = (analytic - -0.096_573_59).abs() < 1e-8 && check.rel_diff() <= 1e-8;
    finish(
        1,
        ok,
        format!(
            "g'(0) = {analytic:.10}, quadrature rel diff {:.2e}",
            check.rel_diff()
        ),
        start,
        SECOND,
    );
}

#[test]
fn criterion_02_closed_form_integrals() {
    let start = Instant::now();
    let i = integral_i_quadrature().unwrap();
    let bx = integral_bx_quadrature().unwrap();
    let bx2 = integral_bx2_quadrature().unwrap();
    let ok = (i.closed_form - 1.0 / 12.0).abs() < 1e-15
        && (bx.closed_form - 1.0 / 12.0).abs() < 1e-15
        && (bx2.closed_form - 8.0 / 105.0).abs() < 1e-15
        && i.rel_diff() <= 1e-8
        && bx.rel_diff() <= 1e-8
        && bx2.rel_diff() <= 1e-8;
    finish(
        2,
        ok,
        format!(
            "I {:.1e}, Bx {:.1e}, Bx^2 {:.1e} relative",
            i.rel_diff(),
            bx.rel_diff(),
            bx2.rel_diff()
        ),
        start,
        SECOND,
    );
}

#[test]
fn criterion_03_c1() {
    let start = Instant::now();
    let c1 = leading_coefficient_c1(&gold());
    let ok = ((c1 - 5.81e-13) / 5.81e-13).abs() <= 0.01;
    finish(3, ok, format!("C1 = {c1:.5e} J/(m^2 K^2)"), start, SECOND);
}

#[test]
fn criterion_04_c2() {
    let start = Instant::now();
    let c2 = |v| correction_coefficient_c2(&gold(), 1e-6, v).unwrap().value;
    let rounded = c2(C2Variant::Rounded);
    let exact = c2(C2Variant::ExactZeta);
    let em = c2(C2Variant::EulerMaclaurin);
    let diff = ((exact - rounded) / rounded).abs();
    let ok = ((rounded - 3.03) / 3.03).abs() <= 0.02
        && ((em - 3.03) / 3.03).abs() <= 0.02
        && diff > 0.0
        && diff <= 3e-3;
    finish(
        4,
        ok,
        format!(
            "C2 = {rounded:.4} (0.204), {em:.4} (Euler-Maclaurin), {exact:.4} (exact zeta); exact vs 0.204 {:.3}%",
            100.0 * diff
        ),
        start,
        SECOND,
    );
}

#[test]
fn criterion_05_euler_maclaurin_pieces() {
    let start = Instant::now();
    let p1 = power_term_pieces(1.5, 1).unwrap();
    let p2 = power_term_pieces(1.5, 2).unwrap();
    let z = zeta_minus_three_halves();
    let ok = (p1.s - 0.1).abs() < 1e-14
        && (p1.delta_s - -0.02552).abs() <= 1e-5
        && (p1.error_estimate - 4.65e-5).abs() <= 1e-7
        && (p2.delta_s - -0.02549).abs() <= 2e-5
        && (z - -0.025485).abs() <= 1e-6;
    finish(
        5,
        ok,
        format!(
            "S = {:.6}, dS(p=1) = {:.6}, estimate {:.4e}, dS(p=2) = {:.6}, zeta(-3/2) = {z:.7}",
            p1.s, p1.delta_s, p1.error_estimate, p2.delta_s
        ),
        start,
        SECOND,
    );
}

#[test]
fn criterion_06_cross_route_identity() {
    let start = Instant::now();
    let route = zeta_route(&gold(), 1e-6, 1.0, 2).unwrap();
    let c1 = leading_coefficient_c1(&gold());
    let c2 = correction_coefficient_c2(&gold(), 1e-6, C2Variant::Rounded)
        .unwrap()
        .value;
    let t2_exact = route.terms[0].coefficient == c1;
    let diff = ((route.terms[1].coefficient - -c1 * c2) / (c1 * c2)).abs();
    finish(
        6,
        t2_exact && diff <= 3e-3,
        format!(
            "T^2 identical: {t2_exact}; T^5/2 coefficients differ by {:.3}%",
            100.0 * diff
        ),
        start,
        SECOND,
    );
}

#[test]
fn criterion_07_ratio_study() {
    let start = Instant::now();
    let model = DispersionModel::Drude(gold());
    let grid = default_ratio_grid();
    let series = ratio_series(
        &model,
        micron(),
        &grid,
        C2Variant::Rounded,
        &LifshitzConfig::default(),
        &exec(),
    )
    .unwrap();
    let max_r = series.iter().map(|p| p.r.abs()).fold(0.0, f64::max);
    let all_valid = series.iter().all(|p| p.is_valid());
    let fit = fit_low_t(&series).unwrap();
    let ok = grid.len() == 12
        && all_valid
        && max_r < 0.2
        && fit.intercept.abs() < 0.05
        && fit.coefficient_of_sqrt_t.abs() < 0.05
        && fit.slope_in_t.is_finite();
    finish(
        7,
        ok,
        format!(
            "max |R| = {max_r:.4}, intercept {:.4}, sqrt(T) coefficient {:.4}, slope {:.4}",
            fit.intercept, fit.coefficient_of_sqrt_t, fit.slope_in_t
        ),
        start,
        30 * MINUTE,
    );
}

#[test]
fn criterion_08_nernst_entropy() {
    let start = Instant::now();
    let model = DispersionModel::Drude(gold());
    let c1 = leading_coefficient_c1(&gold());
    let mut ok = true;
    let mut parts = Vec::new();
    for t in [0.05, 0.1, 0.2] {
        let s = entropy(
            &model,
            micron(),
            t,
            None,
            &LifshitzConfig::default(),
            &exec(),
        )
        .unwrap();
        let bound = 3.0 * c1 * t;
        ok &= s.abs() <= bound;
        parts.push(format!("S({t}) = {s:.3e} (bound {bound:.3e})"));
    }
    finish(8, ok, parts.join(", "), start, 10 * MINUTE);
}

#[test]
fn criterion_09_thermal_enhancement() {
    let start = Instant::now();
    let model = DispersionModel::Drude(gold());
    let cfg = LifshitzConfig::default();
    let f0 = free_energy_t0(&model, micron(), &cfg).unwrap().f_total;
    let f300 = free_energy(&model, micron(), 300.0, Polarizations::BOTH, &cfg, &exec())
        .unwrap()
        .f_total;
    let ratio = f300.abs() / f0.abs();
    finish(
        9,
        (1.10..=1.20).contains(&ratio),
        format!("|F(300 K)|/|F(0)| = {ratio:.4} (F(0) = {f0:.4e}, F(300 K) = {f300:.4e} J/m^2)"),
        start,
        2 * MINUTE,
    );
}

#[test]
fn criterion_10_classical_halving() {
    let start = Instant::now();
    let model = DispersionModel::Drude(gold());
    let a = 1e-6;
    let t = 800.0;
    let f = free_energy(
        &model,
        micron(),
        t,
        Polarizations::BOTH,
        &LifshitzConfig::default(),
        &exec(),
    )
    .unwrap()
    .f_total;
    let target = -ZETA_3 * BOLTZMANN * t / (16.0 * PI * a * a);
    let ratio = f / target;
    finish(
        10,
        (ratio - 1.0).abs() <= 0.05,
        format!("F(800 K) / (-zeta(3) kT / 16 pi a^2) = {ratio:.4}"),
        start,
        MINUTE,
    );
}

#[test]
fn criterion_11_ideal_metal_zero_temperature() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for a in [0.5e-6, 1e-6, 2e-6] {
        let f = free_energy_t0(
            &DispersionModel::IdealMetal,
            Geometry::new(a).unwrap(),
            &LifshitzConfig::default(),
        )
        .unwrap()
        .f_total;
        let want = -PI * PI * HBAR * SPEED_OF_LIGHT / (720.0 * a * a * a);
        worst = worst.max(((f - want) / want).abs());
    }
    finish(
        11,
        worst <= 1e-6,
        format!("worst relative error {worst:.2e}"),
        start,
        MINUTE,
    );
}

#[test]
fn criterion_12_tm_scaling() {
    let start = Instant::now();
    let model = DispersionModel::Drude(gold());
    let ts: Vec<f64> = (0..7).map(|i| 0.5 * 2f64.powf(i as f64 / 2.0)).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &t in &ts {
        let d = delta_free_energy(
            &model,
            micron(),
            t,
            Polarizations::TM,
            &LifshitzConfig::default(),
            &exec(),
        )
        .unwrap();
        xs.push(t.ln());
        ys.push(d.value.abs().ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    finish(
        12,
        (3.5..=4.5).contains(&slope),
        format!("log-log exponent of dF_TM over [0.5, 4] K = {slope:.3}"),
        start,
        10 * MINUTE,
    );
}

#[test]
fn criterion_13_sweep_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (run_id, workers) in [(0, 1), (1, 1), (2, 4)] {
        let mut cfg = RunConfig::default();
        cfg.set("tmin", "0").unwrap();
        cfg.set("tmax", "800").unwrap();
        cfg.set("tcount", "9").unwrap();
        cfg.set("workers", &workers.to_string()).unwrap();
        cfg.set(
            "out",
            dir.path().join(format!("run{run_id}")).to_str().unwrap(),
        )
        .unwrap();
        cfg.validate().unwrap();
        let files = run(Command::Sweep, &cfg).unwrap();
        outputs.push(fs::read(&files[0]).unwrap());
    }
    let ok = outputs.windows(2).all(|w| w[0] == w[1]) && !outputs[0].is_empty();
    finish(
        13,
        ok,
        format!(
            "three sweeps (1, 1 and 4 workers), {} bytes each, identical: {ok}",
            outputs[0].len()
        ),
        start,
        10 * MINUTE,
    );
}
