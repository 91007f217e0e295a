//! Lifshitz free energy per unit area.
//!
//! ```text
//! βF = (1/2π) Σ′ₘ ∫_{ζₘ/c}^∞ q [ln(1 − A e^{−2qa}) + ln(1 − B e^{−2qa})] dq
//! ```
//!
//! The inner integral `G(ζ)` is evaluated in `y = 2qa` on a fixed graded
//! Gauss-Kronrod rule that does not depend on ζ. Quadrature bias is then a
//! smooth function of ζ, which matters for [`delta_free_energy`]: the thermal
//! correction is formed as `Σ′ G(mΔ) − ∫ G(uΔ) du` from one integrand family,
//! so that bias cancels instead of swamping a correction that can be eight
//! orders of magnitude below F itself.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::numeric::quadrature::{
    adaptive_from, adaptive_semi_infinite, gauss_kronrod21, AdaptiveOptions,
};
use crate::numeric::{GaussLegendre, NeumaierSum};
use crate::reflection::Reflector;
use crate::units::{matsubara_step, BOLTZMANN, HBAR, SPEED_OF_LIGHT};

/// Plate separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    a: f64,
}

impl Geometry {
    /// `a` in metres.
    pub fn new(a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() {
            Ok(Geometry { a })
        } else {
            Err(Error::domain(alloc::format!(
                "gap must be positive, got {a:e}"
            )))
        }
    }

    pub fn gap(&self) -> f64 {
        self.a
    }
}

/// Temperature together with β and the Matsubara spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalContext {
    pub temperature: f64,
    /// 1/(kT), 1/J.
    pub beta: f64,
    /// 2πkT/ħ, rad/s.
    pub matsubara_step: f64,
}

impl ThermalContext {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::domain(alloc::format!(
                "Matsubara summation needs T > 0, got {temperature}"
            )));
        }
        Ok(ThermalContext {
            temperature,
            beta: 1.0 / (BOLTZMANN * temperature),
            matsubara_step: matsubara_step(temperature),
        })
    }

    /// ζₘ.
    pub fn frequency(&self, m: usize) -> f64 {
        m as f64 * self.matsubara_step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Te,
    Tm,
}

/// Which polarizations enter a sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Polarizations {
    pub te: bool,
    pub tm: bool,
}

impl Polarizations {
    pub const BOTH: Polarizations = Polarizations { te: true, tm: true };
    pub const TE: Polarizations = Polarizations {
        te: true,
        tm: false,
    };
    pub const TM: Polarizations = Polarizations {
        te: false,
        tm: true,
    };
}

impl From<Polarization> for Polarizations {
    fn from(p: Polarization) -> Self {
        match p {
            Polarization::Te => Polarizations::TE,
            Polarization::Tm => Polarizations::TM,
        }
    }
}

/// Matsubara weight: the m = 0 term counts half.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Half,
    Full,
}

impl Weight {
    pub fn factor(self) -> f64 {
        match self {
            Weight::Half => 0.5,
            Weight::Full => 1.0,
        }
    }

    pub fn for_index(m: usize) -> Self {
        if m == 0 {
            Weight::Half
        } else {
            Weight::Full
        }
    }
}

/// Tolerances and limits for the summation drivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifshitzConfig {
    /// Relative tolerance of each inner q integral.
    pub tol_inner: f64,
    /// Truncation threshold `|term| < tol_sum · |partial|`.
    pub tol_sum: f64,
    /// Relative tolerance demanded of ΔF.
    pub delta_tol: f64,
    /// Hard cap on Matsubara terms.
    pub max_terms: usize,
    /// Terms handed to the executor per batch.
    pub chunk: usize,
}

impl Default for LifshitzConfig {
    fn default() -> Self {
        LifshitzConfig {
            tol_inner: 1e-10,
            tol_sum: 1e-12,
            delta_tol: 1e-4,
            max_terms: 10_000_000,
            chunk: 256,
        }
    }
}

/// Consecutive sub-threshold terms required before truncating a sum.
const TRUNCATION_RUN: usize = 5;
/// Below this fraction of the largest term, G(uΔ) counts as zero in ΔF.
const DELTA_CUTOFF: f64 = 1e-20;
/// Panels beyond y − y₀ = 1 are dropped once they fall below this fraction.
const PANEL_CUTOFF: f64 = 1e-18;

/// Panel edges in `t = y − y₀`: ratio 3 from 3⁻²⁴ up to 1, ratio 2 up to 64.
const INNER_EDGE_COUNT: usize = 32;

fn inner_edges() -> [f64; INNER_EDGE_COUNT] {
    let mut edges = [0.0; INNER_EDGE_COUNT];
    for (i, e) in edges.iter_mut().enumerate().skip(1).take(25) {
        *e = libm::pow(3.0, i as f64 - 25.0);
    }
    for (j, e) in edges.iter_mut().enumerate().skip(26) {
        *e = libm::pow(2.0, (j - 25) as f64);
    }
    edges
}

/// `ln(1 − R e^{−y})` given R and 1 − R.
#[inline]
fn log_one_minus(r: f64, one_minus_r: f64, y: f64) -> f64 {
    let decay = libm::exp(-y);
    let lambda = r * decay;
    if lambda < 0.5 {
        libm::log1p(-lambda)
    } else {
        libm::log(-libm::expm1(-y) + one_minus_r * decay)
    }
}

/// Inner integrals `∫_{ζ/c}^∞ q ln(1 − λ) dq` of one polarization pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValues {
    pub te: f64,
    pub tm: f64,
    pub abs_error: f64,
}

impl ModeValues {
    pub fn total(&self) -> f64 {
        self.te + self.tm
    }
}

/// Evaluates the inner q integral for a fixed model and gap.
#[derive(Debug, Clone)]
pub struct ModeEvaluator<'m> {
    model: &'m DispersionModel,
    gap: f64,
    tol_inner: f64,
    edges: [f64; INNER_EDGE_COUNT],
}

impl<'m> ModeEvaluator<'m> {
    pub fn new(model: &'m DispersionModel, geometry: Geometry, tol_inner: f64) -> Self {
        ModeEvaluator {
            model,
            gap: geometry.gap(),
            tol_inner,
            edges: inner_edges(),
        }
    }

    pub fn evaluate(&self, zeta: f64, pols: Polarizations) -> Result<ModeValues> {
        let reflector = Reflector::new(self.model, zeta)?;
        let y0 = 2.0 * self.gap * zeta / SPEED_OF_LIGHT;
        let mut out = ModeValues {
            te: 0.0,
            tm: 0.0,
            abs_error: 0.0,
        };
        if matches!(reflector, Reflector::Transparent) {
            return Ok(out);
        }
        if pols.te {
            let (v, e) = self.single(&reflector, Polarization::Te, y0)?;
            out.te = v;
            out.abs_error += e;
        }
        if pols.tm {
            let (v, e) = self.single(&reflector, Polarization::Tm, y0)?;
            out.tm = v;
            out.abs_error += e;
        }
        Ok(out)
    }

    fn single(&self, reflector: &Reflector, pol: Polarization, y0: f64) -> Result<(f64, f64)> {
        let inv_2a = 0.5 / self.gap;
        let mut f = |t: f64| {
            let y = y0 + t;
            let q = y * inv_2a;
            let (r, one_minus_r) = match pol {
                Polarization::Te => reflector.te(q),
                Polarization::Tm => reflector.tm(q),
            };
            if r == 0.0 {
                0.0
            } else {
                y * log_one_minus(r, one_minus_r, y)
            }
        };
        let mut total = 0.0;
        let mut error = 0.0;
        for w in self.edges.windows(2) {
            let panel = gauss_kronrod21(&mut f, w[0], w[1]);
            total += panel.value;
            error += panel.abs_error;
            if w[0] >= 1.0 && panel.value.abs() <= PANEL_CUTOFF * total.abs() {
                break;
            }
        }
        if !total.is_finite() {
            return Err(Error::Numerical {
                message: alloc::format!("non-finite mode integral at y0 = {y0:e}"),
                value: total,
                rel_error: f64::INFINITY,
            });
        }
        if error > self.tol_inner * total.abs() && error > f64::MIN_POSITIVE {
            let opts = AdaptiveOptions {
                abs_tol: 0.0,
                rel_tol: self.tol_inner,
                max_panels: 4000,
            };
            let est = adaptive_from(&mut f, &self.edges, opts).map_err(|e| match e {
                Error::Numerical {
                    value, rel_error, ..
                } => Error::Numerical {
                    message: alloc::format!(
                        "mode integral at y0 = {y0:e} did not reach {:e}",
                        self.tol_inner
                    ),
                    value,
                    rel_error,
                },
                other => other,
            })?;
            total = est.value;
            error = est.abs_error;
        }
        let scale = inv_2a * inv_2a;
        Ok((total * scale, error * scale))
    }
}

/// `weight · ∫_{ζ/c}^∞ q ln(1 − λ) dq` in 1/m² for one polarization.
pub fn mode_integral(
    model: &DispersionModel,
    geometry: Geometry,
    zeta: f64,
    polarization: Polarization,
    weight: Weight,
    tol_inner: f64,
) -> Result<f64> {
    let v = ModeEvaluator::new(model, geometry, tol_inner).evaluate(zeta, polarization.into())?;
    let raw = match polarization {
        Polarization::Te => v.te,
        Polarization::Tm => v.tm,
    };
    Ok(weight.factor() * raw)
}

/// Result of a Matsubara summation.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergyBreakdown {
    pub temperature: f64,
    /// J/m².
    pub f_te: f64,
    pub f_tm: f64,
    pub f_total: f64,
    /// Last index included.
    pub m_max: usize,
    /// |weighted term| per index, in the units of F.
    pub term_magnitudes: Vec<f64>,
    /// Estimated relative error of `f_total`.
    pub tol_achieved: f64,
    pub polarizations: Polarizations,
}

/// F(T) by direct Matsubara summation.
pub fn free_energy<E: Executor>(
    model: &DispersionModel,
    geometry: Geometry,
    temperature: f64,
    pols: Polarizations,
    config: &LifshitzConfig,
    exec: &E,
) -> Result<FreeEnergyBreakdown> {
    let ctx = ThermalContext::new(temperature)?;
    let evaluator = ModeEvaluator::new(model, geometry, config.tol_inner);
    let prefactor = 1.0 / (2.0 * PI * ctx.beta);
    let mut te = NeumaierSum::new();
    let mut tm = NeumaierSum::new();
    let mut inner_error = 0.0;
    let mut magnitudes = Vec::new();
    let mut run = 0;
    let mut last_ratio;
    let chunk = config.chunk.max(1);
    let mut start = 0;
    loop {
        let len = chunk.min(config.max_terms + 1 - start);
        let batch = exec.map_range(start, len, |m| evaluator.evaluate(ctx.frequency(m), pols));
        for (offset, values) in batch.into_iter().enumerate() {
            let m = start + offset;
            let v = values?;
            let w = Weight::for_index(m).factor() * prefactor;
            te.add(w * v.te);
            tm.add(w * v.tm);
            inner_error += w * v.abs_error;
            let term = w * v.total();
            magnitudes.push(term.abs());
            let partial = (te.value() + tm.value()).abs();
            last_ratio = if partial > 0.0 {
                term.abs() / partial
            } else {
                0.0
            };
            if term.abs() <= config.tol_sum * partial {
                run += 1;
            } else {
                run = 0;
            }
            if run >= TRUNCATION_RUN {
                let f_te = te.value();
                let f_tm = tm.value();
                let f_total = f_te + f_tm;
                let inner_rel = if f_total != 0.0 {
                    inner_error / f_total.abs()
                } else {
                    0.0
                };
                return Ok(FreeEnergyBreakdown {
                    temperature,
                    f_te,
                    f_tm,
                    f_total,
                    m_max: m,
                    term_magnitudes: magnitudes,
                    tol_achieved: inner_rel.max(last_ratio),
                    polarizations: pols,
                });
            }
        }
        start += len;
        if start > config.max_terms {
            return Err(Error::Truncated {
                terms: config.max_terms,
                partial: te.value() + tm.value(),
            });
        }
    }
}

/// Zero-temperature free energy with its polarization split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroTemperatureEnergy {
    pub f_te: f64,
    pub f_tm: f64,
    pub f_total: f64,
    pub rel_error: f64,
}

/// Relative tolerance of the outer ζ integral in [`free_energy_t0`].
const T0_TOLERANCE: f64 = 1e-9;

/// `F(0) = (ħ/4π²) ∫₀^∞ dζ ∫_{ζ/c}^∞ q [ln(1 − λ_TM) + ln(1 − λ_TE)] dq`.
pub fn free_energy_t0(
    model: &DispersionModel,
    geometry: Geometry,
    config: &LifshitzConfig,
) -> Result<ZeroTemperatureEnergy> {
    let evaluator = ModeEvaluator::new(model, geometry, config.tol_inner);
    let scale = SPEED_OF_LIGHT / (2.0 * geometry.gap());
    let prefactor = HBAR / (4.0 * PI * PI);
    let outer = |pol: Polarization| -> Result<(f64, f64)> {
        let mut failure = None;
        let est = adaptive_semi_infinite(
            |zeta| match evaluator.evaluate(zeta, pol.into()) {
                Ok(v) => v.total(),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            scale,
            AdaptiveOptions::relative(T0_TOLERANCE),
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let est = est?;
        Ok((prefactor * est.value, prefactor * est.abs_error))
    };
    let (f_te, e_te) = outer(Polarization::Te)?;
    let (f_tm, e_tm) = outer(Polarization::Tm)?;
    let f_total = f_te + f_tm;
    Ok(ZeroTemperatureEnergy {
        f_te,
        f_tm,
        f_total,
        rel_error: if f_total != 0.0 {
            (e_te + e_tm) / f_total.abs()
        } else {
            0.0
        },
    })
}

/// Thermal correction `ΔF(T) = F(T) − F(0)` and its two pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaFreeEnergy {
    pub temperature: f64,
    /// J/m².
    pub value: f64,
    /// `Σ′ G(mΔ)` in 1/m².
    pub sum: f64,
    /// `∫₀^∞ G(uΔ) du` in 1/m².
    pub integral: f64,
    /// Last Matsubara index used.
    pub m_max: usize,
    /// Estimated absolute error of `value`.
    pub abs_error: f64,
}

impl DeltaFreeEnergy {
    fn zero(temperature: f64) -> Self {
        DeltaFreeEnergy {
            temperature,
            value: 0.0,
            sum: 0.0,
            integral: 0.0,
            m_max: 0,
            abs_error: 0.0,
        }
    }

    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            0.0
        } else {
            self.abs_error / self.value.abs()
        }
    }
}

/// ΔF(T) for the selected polarizations as `(kT/2π)[Σ′ G(mΔ) − ∫₀^∞ G(uΔ) du]`.
///
/// Both pieces use the same inner evaluator. The sum stops once |G| falls
/// below 10⁻²⁰ of its peak for five consecutive indices; the last index
/// enters with trapezoidal weight ½ and the integral runs to the same point.
/// The integral uses 16-point Gauss-Legendre on panels graded geometrically
/// from u = 2⁻⁵⁰, with a 10-point rule as error check.
pub fn delta_free_energy<E: Executor>(
    model: &DispersionModel,
    geometry: Geometry,
    temperature: f64,
    pols: Polarizations,
    config: &LifshitzConfig,
    exec: &E,
) -> Result<DeltaFreeEnergy> {
    if temperature == 0.0 {
        return Ok(DeltaFreeEnergy::zero(0.0));
    }
    let ctx = ThermalContext::new(temperature)?;
    let step = ctx.matsubara_step;
    let evaluator = ModeEvaluator::new(model, geometry, config.tol_inner);
    let g = |u: f64| evaluator.evaluate(u * step, pols).map(|v| v.total());

    let mut sum = NeumaierSum::new();
    let mut square_sum = 0.0;
    let mut peak: f64 = 0.0;
    let mut run = 0;
    let mut end: Option<(usize, f64)> = None;
    let chunk = config.chunk.max(1);
    let mut start = 0;
    'outer: while start <= config.max_terms {
        let len = chunk.min(config.max_terms + 1 - start);
        let batch = exec.map_range(start, len, |m| g(m as f64));
        for (offset, value) in batch.into_iter().enumerate() {
            let m = start + offset;
            let v = value?;
            peak = peak.max(v.abs());
            if v.abs() <= DELTA_CUTOFF * peak {
                run += 1;
            } else {
                run = 0;
            }
            let w = if m == 0 { 0.5 } else { 1.0 };
            if run >= TRUNCATION_RUN {
                sum.add(0.5 * v);
                end = Some((m, v));
                break 'outer;
            }
            sum.add(w * v);
            square_sum += v * v;
        }
        start += len;
    }
    let Some((m_max, g_end)) = end else {
        return Err(Error::Truncated {
            terms: config.max_terms,
            partial: sum.value() / (2.0 * PI * ctx.beta),
        });
    };
    if peak == 0.0 {
        return Ok(DeltaFreeEnergy::zero(temperature));
    }

    let upper = m_max as f64;
    let natural = SPEED_OF_LIGHT / (2.0 * geometry.gap() * step);
    let edges = continuum_edges(upper, natural);
    let fine = GaussLegendre::new(16);
    let coarse = GaussLegendre::new(10);
    let panels = exec.map_range(0, edges.len() - 1, |i| -> Result<(f64, f64)> {
        let (a, b) = (edges[i], edges[i + 1]);
        let mut hi = NeumaierSum::new();
        for (x, w) in fine.mapped(a, b) {
            hi.add(w * g(x)?);
        }
        let mut lo = NeumaierSum::new();
        for (x, w) in coarse.mapped(a, b) {
            lo.add(w * g(x)?);
        }
        Ok((hi.value(), (hi.value() - lo.value()).abs()))
    });
    let mut integral = NeumaierSum::new();
    let mut integral_error = 0.0;
    for p in panels {
        let (v, e) = p?;
        integral.add(v);
        integral_error += e;
    }

    let prefactor = 1.0 / (2.0 * PI * ctx.beta);
    let sum = sum.value();
    let integral = integral.value();
    let rounding = 16.0 * f64::EPSILON * libm::sqrt(square_sum) * libm::sqrt(m_max as f64 + 1.0);
    let abs_error = prefactor * (integral_error + rounding + g_end.abs());
    let value = prefactor * (sum - integral);
    let result = DeltaFreeEnergy {
        temperature,
        value,
        sum,
        integral,
        m_max,
        abs_error,
    };
    if !value.is_finite() || abs_error > config.delta_tol * value.abs() {
        return Err(Error::Numerical {
            message: alloc::format!(
                "thermal correction at T = {temperature} K missed tolerance {:e} \
                 (sum {sum:e}, integral {integral:e})",
                config.delta_tol
            ),
            value,
            rel_error: result.rel_error(),
        });
    }
    Ok(result)
}

/// Panel edges on [0, upper]: ratio 2 from 2⁻⁵⁰ to 64, then panels no longer
/// than half the current abscissa or half the exponential decay length.
fn continuum_edges(upper: f64, decay_length: f64) -> Vec<f64> {
    let mut edges = Vec::new();
    edges.push(0.0);
    let graded_end = upper.min(64.0);
    let mut x = libm::pow(2.0, -50.0);
    while x < graded_end {
        edges.push(x);
        x *= 2.0;
    }
    edges.push(graded_end);
    let mut last = graded_end;
    while last < upper {
        let width = (0.5 * last).min(0.5 * decay_length).max(1.0);
        last = (last + width).min(upper);
        edges.push(last);
    }
    edges
}

/// ΔF^TE for a Drude medium; see [`delta_free_energy`].
pub fn delta_free_energy_te<E: Executor>(
    model: &DispersionModel,
    geometry: Geometry,
    temperature: f64,
    config: &LifshitzConfig,
    exec: &E,
) -> Result<DeltaFreeEnergy> {
    if model.drude_parameters().is_none() {
        return Err(Error::domain(alloc::format!(
            "TE thermal correction is defined for Drude media, got {}",
            model.name()
        )));
    }
    delta_free_energy(
        model,
        geometry,
        temperature,
        Polarizations::TE,
        config,
        exec,
    )
}

/// Default entropy step `max(10⁻³ K, T/20)`.
pub fn default_entropy_step(temperature: f64) -> f64 {
    (temperature / 20.0).max(1e-3)
}

/// `S = −[F(T + h) − F(T − h)]/(2h)` in J/(m² K), from ΔF so that the
/// T-independent F(0) drops out exactly.
pub fn entropy<E: Executor>(
    model: &DispersionModel,
    geometry: Geometry,
    temperature: f64,
    step: Option<f64>,
    config: &LifshitzConfig,
    exec: &E,
) -> Result<f64> {
    let h = step.unwrap_or_else(|| default_entropy_step(temperature));
    if !(h > 0.0 && temperature > h) {
        return Err(Error::domain(alloc::format!(
            "entropy needs T > h > 0, got T = {temperature}, h = {h}"
        )));
    }
    let up = delta_free_energy(
        model,
        geometry,
        temperature + h,
        Polarizations::BOTH,
        config,
        exec,
    )?;
    let down = delta_free_energy(
        model,
        geometry,
        temperature - h,
        Polarizations::BOTH,
        config,
        exec,
    )?;
    Ok(-(up.value - down.value) / (2.0 * h))
}
