//! Low-temperature expansion of the TE free energy of a Drude metal.
//!
//! In the scaled variables `x = qc/√(Dζ)` the TE sum reads
//!
//! ```text
//! βF^TE = C Σ′ₘ g(m),   g(m) = m ∫_{x₀}^∞ x ln(1 − B(x) e^{−αx}) dx,
//! C = ω_p²/(c²ħνβ),     α = 2a√(2πCm),     x₀ = √(ζₘ/D).
//! ```
//!
//! Expanding g in powers of m^{1/2} and applying Euler-Maclaurin summation
//! (shifted to start at m = p, since half-integer powers have singular
//! derivatives at 0) gives `ΔF^TE = C₁T²(1 − C₂T^{1/2} + …)`. The same two
//! coefficients follow from a Mellin representation of the exponential, in
//! which the m-sum collapses onto ζ(−1) and ζ(−3/2).

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dispersion::DrudeParameters;
use crate::error::{Error, Result};
use crate::numeric::quadrature::{adaptive, adaptive_semi_infinite, AdaptiveOptions};
use crate::numeric::special::{gamma, riemann_zeta};
use crate::reflection::scaled_te_coefficient;
use crate::units::{BOLTZMANN, HBAR, SPEED_OF_LIGHT};

/// ζ(−1).
pub const ZETA_MINUS_ONE: f64 = -1.0 / 12.0;

/// Euler-Maclaurin factor as printed with the T^{5/2} coefficient.
pub const ROUNDED_EM_FACTOR: f64 = 0.204;

/// ζ(−3/2) from the functional equation.
pub fn zeta_minus_three_halves() -> f64 {
    riemann_zeta(-1.5)
}

/// `g′(0) = ∫₀^∞ x ln(1 − B(x)) dx = −(2 ln 2 − 1)/4`.
pub fn g_prime_zero_analytic() -> f64 {
    -(2.0 * core::f64::consts::LN_2 - 1.0) / 4.0
}

/// `I = ∫₀^∞ x²B/(1 − B) dx = 1/12`.
pub fn integral_i() -> f64 {
    1.0 / 12.0
}

/// `∫₀^∞ B x dx = 1/12`.
pub fn integral_bx() -> f64 {
    1.0 / 12.0
}

/// `∫₀^∞ B x² dx = 8/105`.
pub fn integral_bx2() -> f64 {
    8.0 / 105.0
}

/// A closed form next to an independent quadrature of the same integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralCheck {
    pub closed_form: f64,
    pub quadrature: f64,
}

impl IntegralCheck {
    pub fn rel_diff(&self) -> f64 {
        ((self.quadrature - self.closed_form) / self.closed_form).abs()
    }
}

const VALIDATION_TOLERANCE: f64 = 1e-12;

/// Integrates `h(t)` over t ∈ [0, ∞) where x = sinh t, so that B = e^{−4t}.
fn sinh_quadrature<H: FnMut(f64) -> f64>(mut h: H) -> Result<f64> {
    Ok(adaptive_semi_infinite(
        |t| if t > SINH_CUTOFF { 0.0 } else { h(t) },
        0.0,
        1.0,
        AdaptiveOptions::relative(VALIDATION_TOLERANCE),
    )?
    .value)
}

/// Beyond this t every integrand here is below e^{−400}; sinh would overflow.
const SINH_CUTOFF: f64 = 200.0;

/// `1 − B` at x = sinh t.
fn one_minus_b(t: f64) -> f64 {
    -libm::expm1(-4.0 * t)
}

/// g′(0) by quadrature after x = sinh t.
pub fn g_prime_zero_quadrature() -> Result<IntegralCheck> {
    let q = sinh_quadrature(|t| libm::sinh(t) * libm::cosh(t) * libm::log1p(-libm::exp(-4.0 * t)))?;
    Ok(IntegralCheck {
        closed_form: g_prime_zero_analytic(),
        quadrature: q,
    })
}

/// g′(0) by quadrature directly in x with `B = (√(1+x²) − x)⁴`.
pub fn g_prime_zero_direct() -> Result<IntegralCheck> {
    let q = adaptive_semi_infinite(
        |x| x * libm::log1p(-scaled_te_coefficient(x)),
        0.0,
        1.0,
        // the algebraic x⁻³ tail limits this form to about ten digits
        AdaptiveOptions::relative(1e-9),
    )?
    .value;
    Ok(IntegralCheck {
        closed_form: g_prime_zero_analytic(),
        quadrature: q,
    })
}

pub fn integral_i_quadrature() -> Result<IntegralCheck> {
    let q = sinh_quadrature(|t| {
        let s = libm::sinh(t);
        s * s * libm::cosh(t) * libm::exp(-4.0 * t) / one_minus_b(t)
    })?;
    Ok(IntegralCheck {
        closed_form: integral_i(),
        quadrature: q,
    })
}

pub fn integral_bx_quadrature() -> Result<IntegralCheck> {
    let q = sinh_quadrature(|t| libm::sinh(t) * libm::cosh(t) * libm::exp(-4.0 * t))?;
    Ok(IntegralCheck {
        closed_form: integral_bx(),
        quadrature: q,
    })
}

pub fn integral_bx2_quadrature() -> Result<IntegralCheck> {
    let q = sinh_quadrature(|t| {
        let s = libm::sinh(t);
        s * s * libm::cosh(t) * libm::exp(-4.0 * t)
    })?;
    Ok(IntegralCheck {
        closed_form: integral_bx2(),
        quadrature: q,
    })
}

/// `C/T = ω_p² k/(c²ħν)` in 1/(m² K).
fn c_per_kelvin(params: &DrudeParameters) -> f64 {
    let wp = params.omega_p();
    wp * wp * BOLTZMANN / (SPEED_OF_LIGHT * SPEED_OF_LIGHT * HBAR * params.nu())
}

/// `C = ω_p² kT/(c²ħν)` in 1/m².
pub fn coefficient_c(params: &DrudeParameters, temperature: f64) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::domain(alloc::format!(
            "coefficient C needs T > 0, got {temperature}"
        )));
    }
    Ok(c_per_kelvin(params) * temperature)
}

/// T² coefficient `−k (C/T) g′(0) ζ(−1)·(−1)`, i.e. `[ω_p²k²/(c²ħν)](2ln2 − 1)/48`,
/// in J/(m² K²).
pub fn leading_coefficient_c1(params: &DrudeParameters) -> f64 {
    t2_coefficient(params)
}

fn t2_coefficient(params: &DrudeParameters) -> f64 {
    -BOLTZMANN * c_per_kelvin(params) * (-g_prime_zero_analytic()) * ZETA_MINUS_ONE
}

/// Which Euler-Maclaurin factor multiplies the T^{1/2} correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum C2Variant {
    /// `−12 ΔS_{3/2}(1)/g′_{3/2}(1)` evaluated from the shifted formula.
    EulerMaclaurin,
    /// The rounded factor 0.204.
    Rounded,
    /// `−8 ζ(−3/2)`, the exact value of the shifted sum.
    ExactZeta,
}

impl C2Variant {
    pub fn factor(self) -> f64 {
        match self {
            C2Variant::EulerMaclaurin => {
                let pieces = power_term_pieces_unchecked(1.5, 1);
                -12.0 * pieces.delta_s / pieces.first_derivative
            }
            C2Variant::Rounded => ROUNDED_EM_FACTOR,
            C2Variant::ExactZeta => -8.0 * zeta_minus_three_halves(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            C2Variant::EulerMaclaurin => "euler-maclaurin",
            C2Variant::Rounded => "rounded-0.204",
            C2Variant::ExactZeta => "exact-zeta",
        }
    }
}

/// T^{1/2} correction coefficient with the factor it was assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionCoefficient {
    /// K^{−1/2}.
    pub value: f64,
    pub factor: f64,
    pub variant: C2Variant,
}

/// `C₂ = f · 3a√(2πC/T) · I/(−g′(0))` in K^{−1/2}.
pub fn correction_coefficient_c2(
    params: &DrudeParameters,
    gap: f64,
    variant: C2Variant,
) -> Result<CorrectionCoefficient> {
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(Error::domain("C₂ needs a positive gap"));
    }
    let factor = variant.factor();
    let value = factor * 3.0 * gap * libm::sqrt(2.0 * PI * c_per_kelvin(params)) * integral_i()
        / (-g_prime_zero_analytic());
    Ok(CorrectionCoefficient {
        value,
        factor,
        variant,
    })
}

/// Padé form `C₁T²/(1 + C₂T^{1/2})` in J/m².
pub fn pade_delta_f(temperature: f64, c1: f64, c2: f64) -> Result<f64> {
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(Error::domain(alloc::format!(
            "Padé form needs T >= 0, got {temperature}"
        )));
    }
    Ok(c1 * temperature * temperature / (1.0 + c2 * libm::sqrt(temperature)))
}

/// `a√C`; the T² term dominates the T^{5/2} term only while this is ≪ 1.
pub fn validity_parameter(params: &DrudeParameters, gap: f64, temperature: f64) -> Result<f64> {
    Ok(gap * libm::sqrt(coefficient_c(params, temperature)?))
}

/// Pieces of the shifted Euler-Maclaurin formula for `g_σ(m) = m^σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMaclaurinPieces {
    pub sigma: f64,
    pub p: usize,
    /// `Σ′_{n<p} g(n) + ½g(p) − ∫₀^p g`.
    pub s: f64,
    /// g′(p).
    pub first_derivative: f64,
    /// g‴(p).
    pub third_derivative: f64,
    /// `S − g′(p)/12 + g‴(p)/720`.
    pub delta_s: f64,
    /// Next term `−g⁽⁵⁾(p)/30240`.
    pub error_estimate: f64,
}

fn falling(sigma: f64, order: usize) -> f64 {
    (0..order).map(|k| sigma - k as f64).product()
}

/// Closed-form pieces for a power term. Requires σ ≥ 0 (the n = 0 term
/// diverges for negative σ) and p ≥ 1.
pub fn power_term_pieces(sigma: f64, p: usize) -> Result<EulerMaclaurinPieces> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(alloc::format!(
            "power term needs σ >= 0, got {sigma}"
        )));
    }
    if p == 0 {
        return Err(Error::domain("shifted start p must be at least 1"));
    }
    Ok(power_term_pieces_unchecked(sigma, p))
}

fn power_term_pieces_unchecked(sigma: f64, p: usize) -> EulerMaclaurinPieces {
    let pf = p as f64;
    let g = |n: f64| {
        if n == 0.0 {
            if sigma == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            libm::pow(n, sigma)
        }
    };
    let mut head = 0.5 * g(0.0);
    for n in 1..p {
        head += g(n as f64);
    }
    let s = head + 0.5 * g(pf) - libm::pow(pf, sigma + 1.0) / (sigma + 1.0);
    let first_derivative = sigma * libm::pow(pf, sigma - 1.0);
    let third_derivative = falling(sigma, 3) * libm::pow(pf, sigma - 3.0);
    let fifth = falling(sigma, 5) * libm::pow(pf, sigma - 5.0);
    EulerMaclaurinPieces {
        sigma,
        p,
        s,
        first_derivative,
        third_derivative,
        delta_s: s - first_derivative / 12.0 + third_derivative / 720.0,
        error_estimate: -fifth / 30240.0,
    }
}

/// g′(p) and g‴(p) for [`euler_maclaurin_shifted`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointDerivatives {
    pub first: f64,
    pub third: f64,
}

impl EndpointDerivatives {
    /// Central finite differences with step `h` (O(h⁴) first, O(h²) third).
    pub fn finite_difference<G: Fn(f64) -> f64>(g: G, at: f64, h: f64) -> Self {
        let f = |k: f64| g(at + k * h);
        let first = (f(-2.0) - 8.0 * f(-1.0) + 8.0 * f(1.0) - f(2.0)) / (12.0 * h);
        let third = (-f(-2.0) + 2.0 * f(-1.0) - 2.0 * f(1.0) + f(2.0)) / (2.0 * h * h * h);
        EndpointDerivatives { first, third }
    }
}

/// Shifted Euler-Maclaurin estimate of `Σ′₀^∞ g(n) − ∫₀^∞ g(u) du`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedEulerMaclaurin {
    pub p: usize,
    /// `½g(0) + Σ_{1≤n<p} g(n)`.
    pub head: f64,
    /// `½g(p)`.
    pub half_end: f64,
    /// `∫₀^p g`.
    pub integral: f64,
    pub s: f64,
    /// `−g′(p)/12`.
    pub first_correction: f64,
    /// `g‴(p)/720`.
    pub third_correction: f64,
    pub value: f64,
}

pub fn euler_maclaurin_shifted<G: Fn(f64) -> f64>(
    g: G,
    p: usize,
    derivatives: EndpointDerivatives,
) -> Result<ShiftedEulerMaclaurin> {
    if p == 0 {
        return Err(Error::domain("shifted start p must be at least 1"));
    }
    let mut head = 0.5 * g(0.0);
    for n in 1..p {
        head += g(n as f64);
    }
    let half_end = 0.5 * g(p as f64);
    let mut integral = 0.0;
    for n in 0..p {
        let est = adaptive(
            &g,
            n as f64,
            (n + 1) as f64,
            AdaptiveOptions {
                abs_tol: 1e-15,
                rel_tol: 1e-13,
                max_panels: 2000,
            },
        )?;
        integral += est.value;
    }
    let s = head + half_end - integral;
    let first_correction = -derivatives.first / 12.0;
    let third_correction = derivatives.third / 720.0;
    let value = s + first_correction + third_correction;
    if !value.is_finite() {
        return Err(Error::Numerical {
            message: "Euler-Maclaurin pieces not finite".into(),
            value,
            rel_error: f64::INFINITY,
        });
    }
    Ok(ShiftedEulerMaclaurin {
        p,
        head,
        half_end,
        integral,
        s,
        first_correction,
        third_correction,
        value,
    })
}

/// The scaled TE summand of a Drude medium at fixed T and gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledTe {
    /// 1/m².
    pub c: f64,
    pub gap: f64,
    /// D = ω_p²/ν, rad/s.
    pub strength: f64,
    /// 2πkT/ħ.
    pub matsubara_step: f64,
}

impl ScaledTe {
    pub fn new(params: &DrudeParameters, gap: f64, temperature: f64) -> Result<Self> {
        if !(gap > 0.0) {
            return Err(Error::domain("gap must be positive"));
        }
        Ok(ScaledTe {
            c: coefficient_c(params, temperature)?,
            gap,
            strength: params.low_frequency_strength().value(),
            matsubara_step: crate::units::matsubara_step(temperature),
        })
    }

    /// `α = 2a√(2πCm)`.
    pub fn alpha(&self, m: f64) -> f64 {
        2.0 * self.gap * libm::sqrt(2.0 * PI * self.c * m)
    }

    /// `x₀ = √(ζₘ/D)`.
    pub fn lower_limit(&self, m: f64) -> f64 {
        libm::sqrt(m * self.matsubara_step / self.strength)
    }

    /// `g(m) = m ∫_{x₀}^∞ x ln(1 − B(x) e^{−αx}) dx`.
    pub fn g(&self, m: f64) -> Result<f64> {
        if !(m >= 0.0) {
            return Err(Error::domain("g(m) needs m >= 0"));
        }
        if m == 0.0 {
            return Ok(0.0);
        }
        let alpha = self.alpha(m);
        let t0 = libm::asinh(self.lower_limit(m));
        // x = sinh t, B = e^{−4t}
        let est = adaptive_semi_infinite(
            |t| {
                if t > SINH_CUTOFF {
                    return 0.0;
                }
                let x = libm::sinh(t);
                x * libm::cosh(t) * libm::log1p(-libm::exp(-4.0 * t - alpha * x))
            },
            t0,
            1.0,
            AdaptiveOptions::relative(1e-12),
        )?;
        Ok(m * est.value)
    }
}

/// One term `coefficient · T^power` of the expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionTerm {
    pub power: f64,
    /// J/(m² K^power).
    pub coefficient: f64,
    /// Value at the requested temperature, J/m².
    pub value: f64,
}

/// Output of [`zeta_route`].
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaRoute {
    pub terms: Vec<ExpansionTerm>,
    /// Why the leading Γ(4) term was dropped.
    pub discarded: &'static str,
}

impl ZetaRoute {
    pub fn sum(&self) -> f64 {
        self.terms.iter().map(|t| t.value).sum()
    }
}

/// ΔF^TE from the Mellin representation: after the m-sum, poles of Γ(s)
/// leave `Γ(4)/((2ax)⁴(2πC)²) + ζ(−1) − 2ax√(2πC) ζ(−3/2) + …`. Resumming
/// all orders in B turns the x integrals into g′(0) and I. Returns the T²
/// and, if `orders >= 2`, the T^{5/2} term.
pub fn zeta_route(
    params: &DrudeParameters,
    gap: f64,
    temperature: f64,
    orders: usize,
) -> Result<ZetaRoute> {
    if !(1..=2).contains(&orders) {
        return Err(Error::validation("zeta route provides one or two orders"));
    }
    if !(gap > 0.0) {
        return Err(Error::domain("gap must be positive"));
    }
    coefficient_c(params, temperature)?;
    let mut terms = Vec::with_capacity(orders);
    let t2 = t2_coefficient(params);
    terms.push(ExpansionTerm {
        power: 2.0,
        coefficient: t2,
        value: t2 * temperature * temperature,
    });
    if orders >= 2 {
        let cpk = c_per_kelvin(params);
        let coefficient = BOLTZMANN
            * cpk
            * 2.0
            * gap
            * libm::sqrt(2.0 * PI * cpk)
            * integral_i()
            * zeta_minus_three_halves();
        terms.push(ExpansionTerm {
            power: 2.5,
            coefficient,
            value: coefficient * libm::pow(temperature, 2.5),
        });
    }
    Ok(ZetaRoute {
        terms,
        discarded: "the Γ(4) pole term diverges at x → 0 because the lower limit x₀ was set to \
                    zero; it is independent of T and is omitted",
    })
}

/// Collected constants of the expansion for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoefficients {
    pub g_prime_0: f64,
    pub i: f64,
    /// J/(m² K²).
    pub c1: f64,
    /// K^{−1/2}, rounded 0.204 factor.
    pub c2: f64,
    pub c2_euler_maclaurin: f64,
    pub c2_exact_zeta: f64,
    pub zeta_minus_one: f64,
    pub zeta_minus_three_halves: f64,
    /// Γ(4) of the discarded pole term.
    pub gamma_4: f64,
}

impl AsymptoticCoefficients {
    pub fn compute(params: &DrudeParameters, gap: f64) -> Result<Self> {
        Ok(AsymptoticCoefficients {
            g_prime_0: g_prime_zero_analytic(),
            i: integral_i(),
            c1: leading_coefficient_c1(params),
            c2: correction_coefficient_c2(params, gap, C2Variant::Rounded)?.value,
            c2_euler_maclaurin: correction_coefficient_c2(params, gap, C2Variant::EulerMaclaurin)?
                .value,
            c2_exact_zeta: correction_coefficient_c2(params, gap, C2Variant::ExactZeta)?.value,
            zeta_minus_one: ZETA_MINUS_ONE,
            zeta_minus_three_halves: zeta_minus_three_halves(),
            gamma_4: gamma(4.0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_prime_zero_value() {
        assert!((g_prime_zero_analytic() + 0.096_573_590_3).abs() < 1e-10);
    }

    #[test]
    fn quadratures_match_closed_forms() {
        for check in [
            g_prime_zero_quadrature().unwrap(),
            g_prime_zero_direct().unwrap(),
            integral_i_quadrature().unwrap(),
            integral_bx_quadrature().unwrap(),
            integral_bx2_quadrature().unwrap(),
        ] {
            assert!(check.rel_diff() < 1e-9, "{check:?}");
        }
    }

    #[test]
    fn c1_matches_closed_form() {
        let p = DrudeParameters::gold();
        let wp = p.omega_p();
        let direct = wp * wp * BOLTZMANN * BOLTZMANN
            / (SPEED_OF_LIGHT * SPEED_OF_LIGHT * HBAR * p.nu())
            * (2.0 * core::f64::consts::LN_2 - 1.0)
            / 48.0;
        assert!((leading_coefficient_c1(&p) / direct - 1.0).abs() < 1e-14);
        assert!((direct / 5.81e-13 - 1.0).abs() < 0.01);
    }

    #[test]
    fn c_is_linear_in_temperature() {
        let p = DrudeParameters::gold();
        let c1 = coefficient_c(&p, 1.0).unwrap();
        let c2 = coefficient_c(&p, 2.0).unwrap();
        assert!((c2 / c1 - 2.0).abs() < 1e-15);
        assert!(coefficient_c(&p, 0.0).is_err());
    }

    #[test]
    fn c2_variants() {
        let p = DrudeParameters::gold();
        let em = correction_coefficient_c2(&p, 1e-6, C2Variant::EulerMaclaurin).unwrap();
        let exact = correction_coefficient_c2(&p, 1e-6, C2Variant::ExactZeta).unwrap();
        let rounded = correction_coefficient_c2(&p, 1e-6, C2Variant::Rounded).unwrap();
        for c in [em, exact, rounded] {
            assert!((c.value / 3.03 - 1.0).abs() < 0.02, "{c:?}");
        }
        assert!((em.factor - 0.204_166_666).abs() < 1e-6);
        let doubled = correction_coefficient_c2(&p, 2e-6, C2Variant::ExactZeta).unwrap();
        assert!((doubled.value / exact.value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn power_pieces_reference_values() {
        let p1 = power_term_pieces(1.5, 1).unwrap();
        assert!((p1.s - 0.1).abs() < 1e-15);
        assert!((p1.delta_s + 0.02552).abs() < 1e-5);
        assert!((p1.error_estimate - 4.65e-5).abs() < 1e-7);
        let p2 = power_term_pieces(1.5, 2).unwrap();
        assert!((p2.delta_s + 0.02549).abs() < 2e-5);
        let lin = power_term_pieces(1.0, 1).unwrap();
        assert_eq!(lin.s, 0.0);
        assert!(power_term_pieces(-0.5, 1).is_err());
        assert!(power_term_pieces(1.0, 0).is_err());
    }

    #[test]
    fn zeta_minus_three_halves_value() {
        assert!((zeta_minus_three_halves() + 0.025_485).abs() < 1e-6);
    }

    #[test]
    fn pade_limits() {
        assert_eq!(pade_delta_f(0.0, 1.0, 3.0).unwrap(), 0.0);
        let v = pade_delta_f(0.01, 5.81e-13, 3.03).unwrap();
        assert!((v - 5.81e-13 * 1e-4 / 1.303).abs() < 1e-28);
        assert!(pade_delta_f(-1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn zeta_route_leading_term_is_c1() {
        let p = DrudeParameters::gold();
        let z = zeta_route(&p, 1e-6, 0.1, 2).unwrap();
        assert_eq!(z.terms[0].coefficient, leading_coefficient_c1(&p));
        assert!(z.terms[1].coefficient < 0.0);
        assert!(zeta_route(&p, 1e-6, 0.1, 3).is_err());
    }

    #[test]
    fn scaled_summand_behaviour() {
        let s = ScaledTe::new(&DrudeParameters::gold(), 1e-6, 0.01).unwrap();
        assert_eq!(s.g(0.0).unwrap(), 0.0);
        let small = 1e-6;
        let g = s.g(small).unwrap();
        assert!(g < 0.0);
        assert!((g / small / g_prime_zero_analytic() - 1.0).abs() < 1e-2);
    }
}
