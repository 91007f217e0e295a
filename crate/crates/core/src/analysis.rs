//! Numerical versus analytic thermal correction, and the Nernst verdict.
//!
//! The ratio `R = (ΔF_th − ΔF_num)/ΔF_th` compares the Padé form
//! `C₁T²/(1 + C₂T^{1/2})` with the computed TE correction. If the computed
//! correction behaves as `D₁(T² − D₂T^{5/2} + D₃T³ + …)` then
//!
//! ```text
//! R = (C₁ − D₁)/C₁ + (D₁/C₁)(D₂ − C₂) T^{1/2} + (D₁/C₁)(C₂D₂ − D₃) T + …
//! ```
//!
//! so a vanishing intercept and √T coefficient certify both C₁ and C₂.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use nalgebra::{DMatrix, DVector};

use crate::asymptotics::{
    correction_coefficient_c2, leading_coefficient_c1, pade_delta_f, C2Variant,
};
use crate::dispersion::{geometric_probes, te_zero_mode_condition, DispersionModel, ZeroModeCheck};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::lifshitz::{delta_free_energy_te, entropy, Geometry, LifshitzConfig};

/// One temperature of the ratio study.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioPoint {
    /// K.
    pub temperature: f64,
    /// J/m²; NaN when the evaluation failed.
    pub delta_f_num: f64,
    pub delta_f_th: f64,
    pub r: f64,
    /// Estimated relative error of `delta_f_num`.
    pub num_rel_error: f64,
    /// Failure description, if any.
    pub note: Option<String>,
}

impl RatioPoint {
    pub fn new(temperature: f64, delta_f_num: f64, delta_f_th: f64) -> Self {
        RatioPoint {
            temperature,
            delta_f_num,
            delta_f_th,
            r: (delta_f_th - delta_f_num) / delta_f_th,
            num_rel_error: 0.0,
            note: None,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.note.is_none() && self.r.is_finite()
    }
}

/// `count` points spaced logarithmically over [min, max].
pub fn log_spaced(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max > min) || count < 2 {
        return Err(Error::validation(
            "log grid needs 0 < min < max and at least two points",
        ));
    }
    let ratio = libm::log(max / min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i == count - 1 {
                max
            } else {
                min * libm::exp(ratio * i as f64)
            }
        })
        .collect())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::validation("temperature grid is empty"));
    }
    if grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) || grid.windows(2).any(|w| !(w[1] > w[0]))
    {
        return Err(Error::validation(
            "temperature grid must be positive and strictly ascending",
        ));
    }
    Ok(())
}

/// Evaluates R on `grid` for a Drude medium. Numerical failures at a
/// point are recorded in that point's `note` rather than aborting.
pub fn ratio_series<E: Executor>(
    model: &DispersionModel,
    geometry: Geometry,
    grid: &[f64],
    variant: C2Variant,
    config: &LifshitzConfig,
    exec: &E,
) -> Result<Vec<RatioPoint>> {
    check_grid(grid)?;
    let params = model
        .drude_parameters()
        .ok_or_else(|| Error::domain("ratio study needs a Drude medium"))?;
    let c1 = leading_coefficient_c1(params);
    let c2 = correction_coefficient_c2(params, geometry.gap(), variant)?.value;
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        let th = pade_delta_f(t, c1, c2)?;
        let point = match delta_free_energy_te(model, geometry, t, config, exec) {
            Ok(d) => RatioPoint {
                num_rel_error: d.rel_error(),
                ..RatioPoint::new(t, d.value, th)
            },
            Err(e) => RatioPoint {
                temperature: t,
                delta_f_num: f64::NAN,
                delta_f_th: th,
                r: f64::NAN,
                num_rel_error: f64::NAN,
                note: Some(e.to_string()),
            },
        };
        out.push(point);
    }
    Ok(out)
}

/// True when |R| does not increase as T decreases.
pub fn ratio_trend_is_monotone(series: &[RatioPoint]) -> bool {
    let valid: Vec<&RatioPoint> = series.iter().filter(|p| p.is_valid()).collect();
    valid.windows(2).all(|w| w[0].r.abs() <= w[1].r.abs())
}

/// Weighted least-squares fit on the basis {1, √T, T}.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coefficients: [f64; 3],
    /// Unweighted residuals `y − fit` per point.
    pub residuals: Vec<f64>,
    pub residual_rms: f64,
}

/// Least squares for `y ≈ c₀ + c₁√T + c₂T` with weights 1/T.
pub fn fit_sqrt_basis(ts: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if ts.len() != ys.len() {
        return Err(Error::validation("fit inputs differ in length"));
    }
    if ts.len() < 5 {
        return Err(Error::validation(format!(
            "low-temperature fit needs at least 5 points, got {}",
            ts.len()
        )));
    }
    let n = ts.len();
    let mut a = DMatrix::<f64>::zeros(n, 3);
    let mut b = DVector::<f64>::zeros(n);
    for (i, (&t, &y)) in ts.iter().zip(ys).enumerate() {
        if !(t > 0.0) || !y.is_finite() {
            return Err(Error::validation("fit needs T > 0 and finite data"));
        }
        let w = libm::sqrt(1.0 / t);
        a[(i, 0)] = w;
        a[(i, 1)] = w * libm::sqrt(t);
        a[(i, 2)] = w * t;
        b[i] = w * y;
    }
    let svd = a.svd(true, true);
    let max = svd.singular_values.max();
    let min = svd.singular_values.min();
    if !(max > 0.0) || min <= 1e-12 * max {
        return Err(Error::RankDeficient(format!(
            "singular values span [{min:e}, {max:e}]"
        )));
    }
    let sol = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let coefficients = [sol[0], sol[1], sol[2]];
    let residuals: Vec<f64> = ts
        .iter()
        .zip(ys)
        .map(|(&t, &y)| {
            y - (coefficients[0] + coefficients[1] * libm::sqrt(t) + coefficients[2] * t)
        })
        .collect();
    let residual_rms = libm::sqrt(residuals.iter().map(|r| r * r).sum::<f64>() / n as f64);
    Ok(LinearFit {
        coefficients,
        residuals,
        residual_rms,
    })
}

/// `D₁`, `D₂`, `D₃` of `ΔF_num = D₁(T² − D₂T^{5/2} + D₃T³)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericCoefficients {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// Fits ΔF_num/T² on {1, √T, T}.
pub fn fit_numeric_coefficients(series: &[RatioPoint]) -> Result<NumericCoefficients> {
    let (ts, ys): (Vec<f64>, Vec<f64>) = series
        .iter()
        .filter(|p| p.delta_f_num.is_finite() && p.note.is_none())
        .map(|p| {
            (
                p.temperature,
                p.delta_f_num / (p.temperature * p.temperature),
            )
        })
        .unzip();
    let fit = fit_sqrt_basis(&ts, &ys)?;
    let [d1, b2, b3] = fit.coefficients;
    Ok(NumericCoefficients {
        d1,
        d2: -b2 / d1,
        d3: b3 / d1,
    })
}

/// Low-temperature fit of R.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioFit {
    pub intercept: f64,
    /// K^{−1/2}.
    pub coefficient_of_sqrt_t: f64,
    /// 1/K.
    pub slope_in_t: f64,
    /// (T_min, T_max) of the points used.
    pub window: (f64, f64),
    pub points_used: usize,
    pub residuals: Vec<f64>,
    pub residual_rms: f64,
    /// Direct fit of ΔF_num, when it succeeds.
    pub numeric: Option<NumericCoefficients>,
}

/// Fits R(T) on {1, √T, T} with weights 1/T. Points with a failure note
/// are skipped; at least five valid points are required.
pub fn fit_low_t(series: &[RatioPoint]) -> Result<RatioFit> {
    let valid: Vec<&RatioPoint> = series.iter().filter(|p| p.is_valid()).collect();
    let ts: Vec<f64> = valid.iter().map(|p| p.temperature).collect();
    let rs: Vec<f64> = valid.iter().map(|p| p.r).collect();
    let fit = fit_sqrt_basis(&ts, &rs)?;
    let window = (
        ts.iter().cloned().fold(f64::INFINITY, f64::min),
        ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    Ok(RatioFit {
        intercept: fit.coefficients[0],
        coefficient_of_sqrt_t: fit.coefficients[1],
        slope_in_t: fit.coefficients[2],
        window,
        points_used: ts.len(),
        residuals: fit.residuals,
        residual_rms: fit.residual_rms,
        numeric: fit_numeric_coefficients(series).ok(),
    })
}

/// Acceptance thresholds on the fitted R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictThresholds {
    pub intercept: f64,
    /// K^{−1/2}.
    pub sqrt_coefficient: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        VerdictThresholds {
            intercept: 0.05,
            sqrt_coefficient: 0.05,
        }
    }
}

impl RatioFit {
    pub fn passes(&self, thresholds: &VerdictThresholds) -> bool {
        self.intercept.abs() < thresholds.intercept
            && self.coefficient_of_sqrt_t.abs() < thresholds.sqrt_coefficient
            && self.slope_in_t.is_finite()
    }
}

/// Inputs of [`nernst_verdict`].
#[derive(Debug, Clone, PartialEq)]
pub struct NernstConfig {
    pub grid: Vec<f64>,
    /// Temperatures for the entropy scan.
    pub entropy_temperatures: Vec<f64>,
    /// Entropy passes when |S| ≤ factor · C₁ · T.
    pub entropy_factor: f64,
    /// Decreasing probe frequencies for the zero-mode check.
    pub probes: Vec<f64>,
    pub thresholds: VerdictThresholds,
    pub variant: C2Variant,
    pub lifshitz: LifshitzConfig,
}

impl Default for NernstConfig {
    fn default() -> Self {
        NernstConfig {
            grid: default_ratio_grid(),
            entropy_temperatures: alloc::vec![0.05, 0.1, 0.2],
            entropy_factor: 3.0,
            probes: geometric_probes(1e13, 10.0, 6),
            thresholds: VerdictThresholds::default(),
            variant: C2Variant::Rounded,
            lifshitz: LifshitzConfig::default(),
        }
    }
}

/// Twelve log-spaced temperatures over [0.05, 1] K.
pub fn default_ratio_grid() -> Vec<f64> {
    log_spaced(0.05, 1.0, 12).expect("static grid")
}

/// Twenty log-spaced temperatures over [0.008, 1] K.
pub fn deep_ratio_grid() -> Vec<f64> {
    log_spaced(0.008, 1.0, 20).expect("static grid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// No analytic reference exists for the model.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// One entropy evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySample {
    pub temperature: f64,
    /// J/(m² K); NaN on failure.
    pub entropy: f64,
    /// `factor · C₁ · T`, when C₁ exists.
    pub bound: Option<f64>,
    pub within_bound: Option<bool>,
    pub note: Option<String>,
}

/// Evidence and outcome of the Nernst check.
#[derive(Debug, Clone, PartialEq)]
pub struct NernstReport {
    pub model: &'static str,
    pub gap: f64,
    pub zero_mode: ZeroModeCheck,
    pub entropy: Vec<EntropySample>,
    pub series: Vec<RatioPoint>,
    pub fit: Option<RatioFit>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub trend_monotone: Option<bool>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Runs the zero-mode check, the entropy scan and, for Drude media, the
/// ratio study with its low-temperature fit.
pub fn nernst_verdict<E: Executor>(
    model: &DispersionModel,
    geometry: Geometry,
    config: &NernstConfig,
    exec: &E,
) -> Result<NernstReport> {
    let zero_mode = te_zero_mode_condition(model, &config.probes)?;
    let mut notes = Vec::new();
    if !zero_mode.satisfied {
        notes.push(
            "TE zero-frequency mode survives: ζ²(ε − 1) does not vanish as ζ → 0, \
             leaving a term linear in T"
                .to_string(),
        );
    }
    let params = model.drude_parameters();
    let c1 = params.map(leading_coefficient_c1);
    let c2 = match params {
        Some(p) => Some(correction_coefficient_c2(p, geometry.gap(), config.variant)?.value),
        None => None,
    };

    let mut entropy_samples = Vec::new();
    for &t in &config.entropy_temperatures {
        let bound = c1.map(|c| config.entropy_factor * c * t);
        let sample = match entropy(model, geometry, t, None, &config.lifshitz, exec) {
            Ok(s) => EntropySample {
                temperature: t,
                entropy: s,
                bound,
                within_bound: bound.map(|b| s.abs() <= b),
                note: None,
            },
            Err(e) => EntropySample {
                temperature: t,
                entropy: f64::NAN,
                bound,
                within_bound: bound.map(|_| false),
                note: Some(e.to_string()),
            },
        };
        entropy_samples.push(sample);
    }

    let mut series = Vec::new();
    let mut fit = None;
    let mut trend = None;
    if params.is_some() {
        series = ratio_series(
            model,
            geometry,
            &config.grid,
            config.variant,
            &config.lifshitz,
            exec,
        )?;
        trend = Some(ratio_trend_is_monotone(&series));
        match fit_low_t(&series) {
            Ok(f) => fit = Some(f),
            Err(e) => notes.push(format!("low-temperature fit failed: {e}")),
        }
    } else {
        notes.push(format!(
            "no analytic T² coefficient for the {} model; ratio study skipped",
            model.name()
        ));
    }

    let entropy_ok = entropy_samples
        .iter()
        .all(|s| s.within_bound.unwrap_or(s.entropy.is_finite()));
    let verdict = if !zero_mode.satisfied {
        Verdict::Fail
    } else if let Some(f) = &fit {
        if entropy_ok && f.passes(&config.thresholds) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    } else if params.is_some() {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };

    Ok(NernstReport {
        model: model.name(),
        gap: geometry.gap(),
        zero_mode,
        entropy: entropy_samples,
        series,
        fit,
        c1,
        c2,
        trend_monotone: trend,
        verdict,
        notes,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "na".to_string(), |x| format!("{x:e}"))
}

impl NernstReport {
    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Nernst verdict: {}", self.verdict.as_str());
        let _ = writeln!(s, "model: {}, gap: {:e} m", self.model, self.gap);
        let _ = writeln!(
            s,
            "TE zero-mode condition: {}",
            if self.zero_mode.satisfied {
                "satisfied"
            } else {
                "violated"
            }
        );
        if let (Some(c1), Some(c2)) = (self.c1, self.c2) {
            let _ = writeln!(s, "C1 = {c1:e} J/(m^2 K^2), C2 = {c2:.4} K^-1/2");
        }
        for e in &self.entropy {
            match (e.bound, &e.note) {
                (_, Some(n)) => {
                    let _ = writeln!(s, "S({} K): failed ({n})", e.temperature);
                }
                (Some(b), None) => {
                    let _ = writeln!(
                        s,
                        "S({} K) = {:e} J/(m^2 K), bound {:e}: {}",
                        e.temperature,
                        e.entropy,
                        b,
                        if e.within_bound == Some(true) {
                            "ok"
                        } else {
                            "exceeded"
                        }
                    );
                }
                (None, None) => {
                    let _ = writeln!(s, "S({} K) = {:e} J/(m^2 K)", e.temperature, e.entropy);
                }
            }
        }
        if let Some(f) = &self.fit {
            let _ = writeln!(
                s,
                "fit of R over [{}, {}] K ({} points): intercept {:.4e}, sqrt(T) {:.4e} K^-1/2, T {:.4e} 1/K, rms {:.2e}",
                f.window.0, f.window.1, f.points_used, f.intercept, f.coefficient_of_sqrt_t, f.slope_in_t, f.residual_rms
            );
            if let Some(d) = f.numeric {
                let _ = writeln!(
                    s,
                    "numerical fit: D1 = {:e}, D2 = {:.4}, D3 = {:.4}",
                    d.d1, d.d2, d.d3
                );
            }
        }
        if let Some(m) = self.trend_monotone {
            let _ = writeln!(
                s,
                "|R| decreases toward T = 0: {}",
                if m { "yes" } else { "no" }
            );
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// Machine-readable `key=value` lines.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verdict={}", self.verdict.as_str());
        let _ = writeln!(s, "model={}", self.model);
        let _ = writeln!(s, "gap_m={:e}", self.gap);
        let _ = writeln!(s, "zero_mode_satisfied={}", self.zero_mode.satisfied);
        let _ = writeln!(s, "c1={}", opt(self.c1));
        let _ = writeln!(s, "c2={}", opt(self.c2));
        for e in &self.entropy {
            let _ = writeln!(s, "entropy_at_{}K={:e}", e.temperature, e.entropy);
            if let Some(b) = e.within_bound {
                let _ = writeln!(s, "entropy_within_bound_at_{}K={b}", e.temperature);
            }
        }
        if let Some(f) = &self.fit {
            let _ = writeln!(s, "fit_intercept={:e}", f.intercept);
            let _ = writeln!(s, "fit_sqrt_coefficient={:e}", f.coefficient_of_sqrt_t);
            let _ = writeln!(s, "fit_slope={:e}", f.slope_in_t);
            let _ = writeln!(s, "fit_rms={:e}", f.residual_rms);
            let _ = writeln!(s, "fit_window_k={},{}", f.window.0, f.window.1);
            if let Some(d) = f.numeric {
                let _ = writeln!(s, "d1={:e}\nd2={:e}\nd3={:e}", d.d1, d.d2, d.d3);
            }
        }
        if let Some(m) = self.trend_monotone {
            let _ = writeln!(s, "trend_monotone={m}");
        }
        s
    }
}
