//! Relative permittivity on the imaginary frequency axis.
//!
//! All frequencies are angular frequencies in rad/s. A model is evaluated at
//! `ω = iζ`, where every causal medium has a real permittivity `ε(iζ) ≥ 1`
//! that decreases monotonically towards 1.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::quadrature::{self, AdaptiveOptions};
use crate::numeric::MonotoneCubic;
use crate::units::{ev_to_rad_per_s, SPEED_OF_LIGHT};

/// Drude plasma and relaxation frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct DrudeParameters {
    omega_p: f64,
    nu: f64,
    note: String,
}

impl DrudeParameters {
    /// `omega_p > 0`, `nu > 0`, both in rad/s. A vanishing relaxation rate is
    /// the plasma model and is rejected here; use [`DispersionModel::Plasma`].
    pub fn new(omega_p: f64, nu: f64, note: impl Into<String>) -> Result<Self> {
        if !(omega_p > 0.0) || !omega_p.is_finite() {
            return Err(Error::domain(alloc::format!(
                "plasma frequency must be positive, got {omega_p:e}"
            )));
        }
        if nu == 0.0 {
            return Err(Error::DegenerateModel(
                "relaxation frequency is zero; this is the plasma model".into(),
            ));
        }
        if !(nu > 0.0) || !nu.is_finite() {
            return Err(Error::domain(alloc::format!(
                "relaxation frequency must be positive, got {nu:e}"
            )));
        }
        Ok(DrudeParameters {
            omega_p,
            nu,
            note: note.into(),
        })
    }

    /// Parameters given as photon energies `ħω_p`, `ħν` in eV.
    pub fn from_ev(omega_p_ev: f64, nu_ev: f64, note: impl Into<String>) -> Result<Self> {
        Self::new(ev_to_rad_per_s(omega_p_ev), ev_to_rad_per_s(nu_ev), note)
    }

    /// Gold, ħω_p = 9.03 eV, ħν = 34.5 meV (the "gold-2" preset).
    pub fn gold() -> Self {
        Self::from_ev(9.03, 0.0345, "gold: 9.03 eV / 34.5 meV").expect("valid preset")
    }

    /// Older gold fit, ħω_p = 9.0 eV, ħν = 35 meV (the "gold-1" preset).
    pub fn gold_alternate() -> Self {
        Self::from_ev(9.0, 0.035, "gold: 9.0 eV / 35 meV").expect("valid preset")
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    /// λ_p = 2πc/ω_p in metres.
    pub fn plasma_wavelength(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.omega_p
    }

    pub fn low_frequency_strength(&self) -> LowFrequencyStrength {
        LowFrequencyStrength(self.omega_p * self.omega_p / self.nu)
    }

    /// Drude ε(iζ) − 1 = ω_p² / (ζ(ζ + ν)).
    fn susceptibility(&self, zeta: f64) -> f64 {
        self.omega_p * self.omega_p / (zeta * (zeta + self.nu))
    }
}

/// The low-frequency strength `D = ω_p²/ν` in rad/s: below ν the Drude
/// permittivity behaves as `ε − 1 ≈ D/ζ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LowFrequencyStrength(f64);

impl LowFrequencyStrength {
    pub fn from_rates(omega_p: f64, nu: f64) -> Result<Self> {
        Ok(DrudeParameters::new(omega_p, nu, "")?.low_frequency_strength())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn low_frequency_strength(params: &DrudeParameters) -> LowFrequencyStrength {
    params.low_frequency_strength()
}

/// ε(iζ) as returned by [`DispersionModel::permittivity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Permittivity {
    Finite(f64),
    /// The ideal metal; reflection code maps this to A = B = 1.
    Infinite,
}

impl Permittivity {
    pub fn finite(self) -> Option<f64> {
        match self {
            Permittivity::Finite(e) => Some(e),
            Permittivity::Infinite => None,
        }
    }
}

/// Permittivity samples ε(iζ) on a strictly increasing ζ grid, interpolated
/// monotonically in ln ζ. No extrapolation.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPermittivity {
    zetas: Vec<f64>,
    epsilons: Vec<f64>,
    interp: MonotoneCubic,
}

impl TabulatedPermittivity {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::validation(
                "tabulated permittivity needs at least two samples",
            ));
        }
        let mut zetas = Vec::with_capacity(samples.len());
        let mut epsilons = Vec::with_capacity(samples.len());
        for &(z, e) in samples {
            if !(z > 0.0) || !z.is_finite() {
                return Err(Error::validation(alloc::format!(
                    "tabulated frequency must be positive, got {z:e}"
                )));
            }
            if !(e >= 1.0) || !e.is_finite() {
                return Err(Error::validation(alloc::format!(
                    "tabulated permittivity must be finite and >= 1, got {e:e} at {z:e}"
                )));
            }
            zetas.push(z);
            epsilons.push(e);
        }
        if zetas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::validation(
                "tabulated frequencies must be strictly increasing",
            ));
        }
        let log_z = zetas.iter().map(|&z| libm::log(z)).collect();
        let interp = MonotoneCubic::new(log_z, epsilons.clone())?;
        Ok(TabulatedPermittivity {
            zetas,
            epsilons,
            interp,
        })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.zetas[0], self.zetas[self.zetas.len() - 1])
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.zetas
            .iter()
            .copied()
            .zip(self.epsilons.iter().copied())
    }

    pub fn eval(&self, zeta: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        // exact endpoints survive the log/exp round trip
        let x = if zeta == lo {
            self.interp.domain().0
        } else if zeta == hi {
            self.interp.domain().1
        } else if zeta > lo && zeta < hi {
            libm::log(zeta)
        } else {
            return Err(Error::OutOfRange {
                quantity: "zeta",
                value: zeta,
                min: lo,
                max: hi,
            });
        };
        Ok(self.interp.eval(x)?.max(1.0))
    }
}

/// Dielectric response of the half-spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum DispersionModel {
    Drude(DrudeParameters),
    /// ε = 1 + ω_p²/ζ², the ν → 0 limit of the Drude model.
    Plasma {
        omega_p: f64,
    },
    /// ε = ∞ at every frequency.
    IdealMetal,
    /// ε ≡ 1; no interaction.
    Vacuum,
    Tabulated(TabulatedPermittivity),
}

impl DispersionModel {
    pub fn plasma(omega_p: f64) -> Result<Self> {
        if !(omega_p > 0.0) || !omega_p.is_finite() {
            return Err(Error::domain("plasma frequency must be positive"));
        }
        Ok(DispersionModel::Plasma { omega_p })
    }

    pub fn name(&self) -> &'static str {
        match self {
            DispersionModel::Drude(_) => "drude",
            DispersionModel::Plasma { .. } => "plasma",
            DispersionModel::IdealMetal => "ideal",
            DispersionModel::Vacuum => "vacuum",
            DispersionModel::Tabulated(_) => "table",
        }
    }

    pub fn drude_parameters(&self) -> Option<&DrudeParameters> {
        match self {
            DispersionModel::Drude(p) => Some(p),
            _ => None,
        }
    }

    /// ε(iζ) at `zeta > 0`.
    pub fn permittivity(&self, zeta: f64) -> Result<Permittivity> {
        match self {
            DispersionModel::IdealMetal => Ok(Permittivity::Infinite),
            DispersionModel::Vacuum => Ok(Permittivity::Finite(1.0)),
            DispersionModel::Tabulated(t) => t.eval(zeta).map(Permittivity::Finite),
            DispersionModel::Drude(p) => {
                check_positive_frequency(zeta)?;
                Ok(Permittivity::Finite(1.0 + p.susceptibility(zeta)))
            }
            DispersionModel::Plasma { omega_p } => {
                check_positive_frequency(zeta)?;
                Ok(Permittivity::Finite(
                    1.0 + omega_p * omega_p / (zeta * zeta),
                ))
            }
        }
    }

    /// ζ²[ε(iζ) − 1] in rad²/s², finite for every model but the ideal metal
    /// (`None`). At ζ = 0 this is the static limit: 0 for Drude and tabulated
    /// media, ω_p² for the plasma model.
    pub fn scaled_susceptibility(&self, zeta: f64) -> Result<Option<f64>> {
        if zeta < 0.0 || zeta.is_nan() {
            return Err(Error::domain(alloc::format!(
                "imaginary frequency must be non-negative, got {zeta:e}"
            )));
        }
        Ok(match self {
            DispersionModel::IdealMetal => None,
            DispersionModel::Vacuum => Some(0.0),
            DispersionModel::Drude(p) => Some(p.omega_p * p.omega_p * zeta / (zeta + p.nu)),
            DispersionModel::Plasma { omega_p } => Some(omega_p * omega_p),
            DispersionModel::Tabulated(t) => {
                if zeta == 0.0 {
                    Some(0.0)
                } else {
                    Some(zeta * zeta * (t.eval(zeta)? - 1.0))
                }
            }
        })
    }

    /// True when ε(iζ) diverges as ζ → 0, so that A(ζ = 0) = 1.
    pub fn is_conductor(&self) -> bool {
        !matches!(self, DispersionModel::Vacuum)
    }
}

fn check_positive_frequency(zeta: f64) -> Result<()> {
    if zeta > 0.0 && zeta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(alloc::format!(
            "permittivity needs a positive imaginary frequency, got {zeta:e}"
        )))
    }
}

/// ε(iζ) of `model`; see [`DispersionModel::permittivity`].
pub fn eval_permittivity(model: &DispersionModel, zeta: f64) -> Result<Permittivity> {
    model.permittivity(zeta)
}

/// Outcome of [`te_zero_mode_condition`].
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModeCheck {
    pub satisfied: bool,
    /// ζ²[ε(iζ) − 1] at each probe; +∞ for the ideal metal.
    pub sequence: Vec<f64>,
}

/// Tests whether ζ²[ε(iζ) − 1] → 0 as ζ → 0, the condition under which the
/// zero-frequency TE mode drops out of the Matsubara sum.
///
/// `probe_zetas` must be positive and strictly decreasing. The condition is
/// taken to hold when the sequence decreases strictly along the probes and
/// its local log-log slope over the last two probes is at least 1/2 (the
/// Drude sequence has slope → 1; a finite limit has slope 0).
pub fn te_zero_mode_condition(
    model: &DispersionModel,
    probe_zetas: &[f64],
) -> Result<ZeroModeCheck> {
    if probe_zetas.len() < 2 {
        return Err(Error::validation(
            "zero-mode check needs at least two probes",
        ));
    }
    if probe_zetas.iter().any(|&z| !(z > 0.0)) || probe_zetas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::validation(
            "probe frequencies must be positive and decreasing",
        ));
    }
    let mut sequence = Vec::with_capacity(probe_zetas.len());
    for &z in probe_zetas {
        let value = match model.permittivity(z)? {
            Permittivity::Infinite => f64::INFINITY,
            Permittivity::Finite(e) => z * z * (e - 1.0),
        };
        sequence.push(value);
    }
    let decreasing =
        sequence.iter().all(|v| v.is_finite()) && sequence.windows(2).all(|w| w[1] < w[0]);
    let n = sequence.len();
    let satisfied = decreasing && {
        let (s0, s1) = (sequence[n - 2], sequence[n - 1]);
        if s1 <= 0.0 {
            true
        } else {
            let slope = libm::log(s0 / s1) / libm::log(probe_zetas[n - 2] / probe_zetas[n - 1]);
            slope >= 0.5
        }
    };
    Ok(ZeroModeCheck {
        satisfied,
        sequence,
    })
}

/// Probe frequencies for the zero-mode check: `count` points decreasing
/// geometrically from `start` by `ratio` per step.
pub fn geometric_probes(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    let mut z = start;
    (0..count)
        .map(|_| {
            let v = z;
            z /= ratio;
            v
        })
        .collect()
}

/// Absorption spectrum ε″(ω) on the real axis, mapped to ε(iζ) through the
/// Kramers-Kronig dispersion relation
///
/// ε(iζ) = 1 + (2/π) ∫₀^∞ ω ε″(ω) / (ω² + ζ²) dω.
///
/// Between samples ε″ is interpolated monotonically in log-log coordinates
/// (linear coordinates if the table contains zeros). Beyond either end the
/// spectrum is continued as a power law fitted to the outermost decade.
#[derive(Debug, Clone, PartialEq)]
pub struct LossSpectrum {
    log_omega: Vec<f64>,
    eps_imag: Vec<f64>,
    interp: MonotoneCubic,
    log_scale: bool,
    low_tail: Option<PowerTail>,
    high_tail: Option<PowerTail>,
}

/// ε″(ω) ≈ amplitude · (ω/ω₀)^exponent beyond an end of the table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTail {
    pub omega0: f64,
    pub amplitude: f64,
    pub exponent: f64,
}

impl LossSpectrum {
    pub fn new(table: &[(f64, f64)]) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::validation("loss table needs at least two rows"));
        }
        for &(w, e) in table {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::validation(alloc::format!(
                    "loss table frequency must be positive, got {w:e}"
                )));
            }
            if !(e >= 0.0) || !e.is_finite() {
                return Err(Error::validation(alloc::format!(
                    "loss table needs finite eps'' >= 0, got {e:e} at {w:e}"
                )));
            }
        }
        if table.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::validation(
                "loss table frequencies must be strictly increasing",
            ));
        }
        let log_omega: Vec<f64> = table.iter().map(|&(w, _)| libm::log(w)).collect();
        let eps_imag: Vec<f64> = table.iter().map(|&(_, e)| e).collect();
        let log_scale = eps_imag.iter().all(|&e| e > 0.0);
        let ys = if log_scale {
            eps_imag.iter().map(|&e| libm::log(e)).collect()
        } else {
            eps_imag.clone()
        };
        let interp = MonotoneCubic::new(log_omega.clone(), ys)?;
        let n = table.len();
        let low_tail = fit_tail(&log_omega, &eps_imag, 0..n, true)?;
        let high_tail = fit_tail(&log_omega, &eps_imag, 0..n, false)?;
        if let Some(t) = low_tail {
            if !(t.exponent > -2.0) {
                return Err(Error::validation(alloc::format!(
                    "low-frequency tail exponent {:.3} makes the dispersion integral diverge",
                    t.exponent
                )));
            }
        }
        if let Some(t) = high_tail {
            if !(t.exponent < 0.0) {
                return Err(Error::validation(alloc::format!(
                    "high-frequency tail exponent {:.3} makes the dispersion integral diverge",
                    t.exponent
                )));
            }
        }
        Ok(LossSpectrum {
            log_omega,
            eps_imag,
            interp,
            log_scale,
            low_tail,
            high_tail,
        })
    }

    pub fn range(&self) -> (f64, f64) {
        (
            libm::exp(self.log_omega[0]),
            libm::exp(self.log_omega[self.log_omega.len() - 1]),
        )
    }

    pub fn tails(&self) -> (Option<PowerTail>, Option<PowerTail>) {
        (self.low_tail, self.high_tail)
    }

    fn eps_imag_at_log(&self, s: f64) -> f64 {
        let v = self.interp.eval(s).unwrap_or(0.0);
        if self.log_scale {
            libm::exp(v)
        } else {
            v.max(0.0)
        }
    }

    /// ε(iζ) for ζ > 0.
    pub fn permittivity(&self, zeta: f64) -> Result<f64> {
        check_positive_frequency(zeta)?;
        if self.eps_imag.iter().all(|&e| e == 0.0) {
            return Ok(1.0);
        }
        let log_zeta = libm::log(zeta);
        // ∫ ω² ε″ / (ω² + ζ²) d(ln ω), with ω²/(ω² + ζ²) = 1/(1 + e^{2(ln ζ − s)})
        let log_filter = |s: f64| -softplus(2.0 * (log_zeta - s));
        let kernel = |s: f64, e: f64| libm::exp(log_filter(s)) * e;
        let opts = AdaptiveOptions {
            abs_tol: 0.0,
            rel_tol: 1e-10,
            max_panels: 200_000,
        };
        let mut body = |s: f64| kernel(s, self.eps_imag_at_log(s));
        let inner = quadrature::adaptive_from(&mut body, &self.log_omega, opts)?;
        let mut total = inner.value;
        let s_lo = self.log_omega[0];
        let s_hi = self.log_omega[self.log_omega.len() - 1];
        if let Some(t) = self.low_tail {
            let lw0 = libm::log(t.omega0);
            let f = |u: f64| {
                let s = s_lo - u;
                libm::exp(libm::log(t.amplitude) + t.exponent * (s - lw0) + log_filter(s))
            };
            total += quadrature::adaptive_semi_infinite(f, 0.0, 1.0, opts)?.value;
        }
        if let Some(t) = self.high_tail {
            let lw0 = libm::log(t.omega0);
            let f = |u: f64| {
                let s = s_hi + u;
                libm::exp(libm::log(t.amplitude) + t.exponent * (s - lw0) + log_filter(s))
            };
            total += quadrature::adaptive_semi_infinite(f, 0.0, 1.0, opts)?.value;
        }
        Ok(1.0 + 2.0 / PI * total)
    }

    /// Samples ε(iζ) on the given grid into a tabulated model.
    pub fn tabulate(&self, zetas: &[f64]) -> Result<TabulatedPermittivity> {
        let samples = zetas
            .iter()
            .map(|&z| self.permittivity(z).map(|e| (z, e)))
            .collect::<Result<Vec<_>>>()?;
        TabulatedPermittivity::new(&samples)
    }
}

/// ln(1 + eˣ) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 35.0 {
        x
    } else {
        libm::log1p(libm::exp(x))
    }
}

/// ε(iζ) from a two-column ε″(ω) table; see [`LossSpectrum`].
pub fn kramers_kronig_imaginary_axis(eps_imag_table: &[(f64, f64)], zeta: f64) -> Result<f64> {
    LossSpectrum::new(eps_imag_table)?.permittivity(zeta)
}

/// Least-squares power law over the decade nearest one end of the table.
fn fit_tail(
    log_omega: &[f64],
    eps: &[f64],
    range: core::ops::Range<usize>,
    low_end: bool,
) -> Result<Option<PowerTail>> {
    let n = range.len();
    let end = if low_end { range.start } else { range.end - 1 };
    let s_end = log_omega[end];
    let decade = libm::log(10.0);
    let idx: Vec<usize> = range
        .filter(|&i| (log_omega[i] - s_end).abs() <= decade + 1e-12)
        .collect();
    let idx = if idx.len() >= 2 {
        idx
    } else if low_end {
        alloc::vec![0, 1]
    } else {
        alloc::vec![n - 2, n - 1]
    };
    if idx.iter().any(|&i| eps[i] <= 0.0) {
        // a vanishing edge means no absorption beyond the table
        return Ok(None);
    }
    let m = idx.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &i in &idx {
        let x = log_omega[i] - s_end;
        let y = libm::log(eps[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = m * sxx - sx * sx;
    if denom <= 0.0 {
        return Err(Error::validation(
            "cannot fit a tail to coincident frequencies",
        ));
    }
    let exponent = (m * sxy - sx * sy) / denom;
    let intercept = (sy - exponent * sx) / m;
    Ok(Some(PowerTail {
        omega0: libm::exp(s_end),
        amplitude: libm::exp(intercept),
        exponent,
    }))
}
