//! Squared Fresnel reflection coefficients at imaginary frequency.
//!
//! For a vacuum gap between two identical half-spaces the TM and TE squared
//! reflection coefficients are
//!
//! ```text
//! A = ((s − εp)/(s + εp))²,   B = ((s − p)/(s + p))²,
//! s = √(ε − 1 + p²),          p = qc/ζ,
//! ```
//!
//! with `q = √(k⊥² + ζ²/c²)` the decay constant in the gap. Everything here is
//! evaluated through `κ² = ζ²(ε − 1)/c²`, which stays finite as ζ → 0 and
//! lets both coefficients be written without subtracting nearly equal
//! numbers.

use alloc::vec::Vec;

use crate::dispersion::{DispersionModel, DrudeParameters, LowFrequencyStrength, Permittivity};
use crate::error::{Error, Result};
use crate::units::SPEED_OF_LIGHT;

/// Kinematics of one (ζ, q) mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoordinates {
    /// Imaginary frequency, rad/s.
    pub zeta: f64,
    /// Decay constant in the gap, 1/m.
    pub q: f64,
    /// Transverse wavenumber, 1/m.
    pub k_perp: f64,
    pub p: f64,
    pub s: f64,
    /// Scaled TE variable `qc / (ζ √(ε − 1))`.
    pub x: f64,
    /// `2qa`.
    pub y: f64,
    /// `√(ζ/D)` when a Drude strength is supplied.
    pub x0: Option<f64>,
}

impl ModeCoordinates {
    pub fn new(
        epsilon: f64,
        zeta: f64,
        q: f64,
        gap: f64,
        strength: Option<LowFrequencyStrength>,
    ) -> Result<Self> {
        if !(zeta > 0.0) {
            return Err(Error::domain("mode coordinates need ζ > 0"));
        }
        if !(epsilon >= 1.0) {
            return Err(Error::domain("mode coordinates need ε >= 1"));
        }
        let z = zeta / SPEED_OF_LIGHT;
        if !(q >= z) {
            return Err(Error::domain(alloc::format!(
                "decay constant q = {q:e} below ζ/c = {z:e}"
            )));
        }
        if !(gap >= 0.0) {
            return Err(Error::domain("gap must be non-negative"));
        }
        let k_perp = libm::sqrt((q - z) * (q + z));
        let p = q / z;
        let s = libm::sqrt(epsilon - 1.0 + p * p);
        let x = if epsilon > 1.0 {
            p / libm::sqrt(epsilon - 1.0)
        } else {
            f64::INFINITY
        };
        Ok(ModeCoordinates {
            zeta,
            q,
            k_perp,
            p,
            s,
            x,
            y: 2.0 * q * gap,
            x0: strength.map(|d| libm::sqrt(zeta / d.value())),
        })
    }

    pub fn from_k_perp(
        epsilon: f64,
        zeta: f64,
        k_perp: f64,
        gap: f64,
        strength: Option<LowFrequencyStrength>,
    ) -> Result<Self> {
        let z = zeta / SPEED_OF_LIGHT;
        Self::new(
            epsilon,
            zeta,
            libm::sqrt(k_perp * k_perp + z * z),
            gap,
            strength,
        )
    }
}

/// TM (`a`) and TE (`b`) squared reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair {
    pub a: f64,
    pub b: f64,
}

impl ReflectionPair {
    /// Round-trip factors `λ = R e^{−2qa}` for gap `a`.
    pub fn lambdas(&self, q: f64, gap: f64) -> (f64, f64) {
        let damping = libm::exp(-2.0 * q * gap);
        (self.a * damping, self.b * damping)
    }
}

/// Reflection of one medium at one imaginary frequency, prepared for
/// evaluation at many decay constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Reflector {
    /// Both coefficients are identically zero.
    Transparent,
    /// Both coefficients are identically one.
    Perfect,
    /// ζ = 0 limit of a conductor: A = 1, B from the static κ².
    Static { kappa2: f64 },
    Medium {
        /// ζ²(ε − 1)/c², 1/m².
        kappa2: f64,
        /// (ζ/c)², 1/m².
        z2: f64,
    },
}

impl Reflector {
    pub(crate) fn new(model: &DispersionModel, zeta: f64) -> Result<Self> {
        let c2 = SPEED_OF_LIGHT * SPEED_OF_LIGHT;
        let Some(k) = model.scaled_susceptibility(zeta)? else {
            return Ok(Reflector::Perfect);
        };
        let kappa2 = k / c2;
        if zeta == 0.0 {
            return Ok(if model.is_conductor() {
                Reflector::Static { kappa2 }
            } else {
                Reflector::Transparent
            });
        }
        if kappa2 == 0.0 {
            return Ok(Reflector::Transparent);
        }
        Ok(Reflector::Medium {
            kappa2,
            z2: zeta * zeta / c2,
        })
    }

    /// (B, 1 − B) at decay constant `q`.
    #[inline]
    pub(crate) fn te(&self, q: f64) -> (f64, f64) {
        match *self {
            Reflector::Transparent => (0.0, 1.0),
            Reflector::Perfect => (1.0, 0.0),
            Reflector::Static { kappa2 } | Reflector::Medium { kappa2, .. } => {
                te_from_kappa(kappa2, q)
            }
        }
    }

    /// (A, 1 − A) at decay constant `q`.
    #[inline]
    pub(crate) fn tm(&self, q: f64) -> (f64, f64) {
        match *self {
            Reflector::Transparent => (0.0, 1.0),
            Reflector::Perfect | Reflector::Static { .. } => (1.0, 0.0),
            Reflector::Medium { kappa2, z2 } => {
                let big_q = libm::sqrt(q * q + kappa2);
                let sum = big_q + q;
                // εq − Q and εq + Q, with ε = 1 + κ²/z²
                let eps_q = q + kappa2 * q / z2;
                let num = kappa2 * (q * sum - z2) / (z2 * sum);
                let den = eps_q + big_q;
                let ratio = num / den;
                let a = ratio * ratio;
                let one_minus = 4.0 * eps_q * big_q / (den * den);
                (a, one_minus)
            }
        }
    }

    pub(crate) fn pair(&self, q: f64) -> ReflectionPair {
        ReflectionPair {
            a: self.tm(q).0,
            b: self.te(q).0,
        }
    }
}

#[inline]
fn te_from_kappa(kappa2: f64, q: f64) -> (f64, f64) {
    let big_q = libm::sqrt(q * q + kappa2);
    let sum = big_q + q;
    let sum2 = sum * sum;
    let r = kappa2 / sum2;
    (r * r, 4.0 * q * big_q / sum2)
}

/// A and B for permittivity `epsilon` at (ζ, q). Requires `q ≥ ζ/c > 0`.
pub fn fresnel_squared(epsilon: Permittivity, zeta: f64, q: f64) -> Result<ReflectionPair> {
    if !(zeta > 0.0) {
        return Err(Error::domain("Fresnel coefficients need ζ > 0"));
    }
    let z = zeta / SPEED_OF_LIGHT;
    if !(q >= z) {
        return Err(Error::domain(alloc::format!(
            "decay constant q = {q:e} below ζ/c = {z:e}"
        )));
    }
    let reflector = match epsilon {
        Permittivity::Infinite => Reflector::Perfect,
        Permittivity::Finite(e) => {
            if !(e >= 1.0) {
                return Err(Error::domain("Fresnel coefficients need ε >= 1"));
            }
            if e == 1.0 {
                Reflector::Transparent
            } else {
                Reflector::Medium {
                    kappa2: z * z * (e - 1.0),
                    z2: z * z,
                }
            }
        }
    };
    Ok(reflector.pair(q))
}

/// TE coefficient in the scaled low-frequency form
/// `B(x) = (√(1+x²) − x)⁴ = 1/(√(1+x²) + x)⁴`.
pub fn scaled_te_coefficient(x: f64) -> f64 {
    let s = libm::sqrt(1.0 + x * x) + x;
    let s2 = s * s;
    1.0 / (s2 * s2)
}

/// `1 − B(x)` without cancellation at small x.
pub fn scaled_te_complement(x: f64) -> f64 {
    // with x = sinh t, B = e^{−4t}
    -libm::expm1(-4.0 * libm::asinh(x))
}

/// Relative deviation between the full Drude TE coefficient and the scaled
/// form `B(x)` with `x² = q²c²/(Dζ)`. Valid only for ζ < ν/10.
pub fn scaling_consistency(params: &DrudeParameters, zeta: f64, q: f64) -> Result<f64> {
    if !(zeta > 0.0 && zeta < params.nu() / 10.0) {
        return Err(Error::Precondition(alloc::format!(
            "scaled TE form needs ζ < ν/10 = {:e}, got {zeta:e}",
            params.nu() / 10.0
        )));
    }
    let eps = DispersionModel::Drude(params.clone()).permittivity(zeta)?;
    te_scaling_deviation(eps, params.low_frequency_strength(), zeta, q)
}

/// [`scaling_consistency`] for an arbitrary permittivity.
pub fn te_scaling_deviation(
    epsilon: Permittivity,
    strength: LowFrequencyStrength,
    zeta: f64,
    q: f64,
) -> Result<f64> {
    let full = fresnel_squared(epsilon, zeta, q)?.b;
    let x = q * SPEED_OF_LIGHT / libm::sqrt(strength.value() * zeta);
    let scaled = scaled_te_coefficient(x);
    Ok((full - scaled).abs() / scaled)
}

/// A and B on a (ζ, k⊥) grid, row-major in ζ.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSurface {
    pub zetas: Vec<f64>,
    pub k_perps: Vec<f64>,
    pub values: Vec<ReflectionPair>,
}

impl ReflectionSurface {
    pub fn get(&self, zeta_index: usize, k_index: usize) -> ReflectionPair {
        self.values[zeta_index * self.k_perps.len() + k_index]
    }

    /// Rows `(ζ, k⊥, A, B)` in storage order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, ReflectionPair)> + '_ {
        let nk = self.k_perps.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.zetas[i / nk], self.k_perps[i % nk], v))
    }
}

/// Evaluates A and B with `q = √(k⊥² + ζ²/c²)` on every grid point.
/// `zetas` must be positive and `k_perps` non-negative, both ascending.
pub fn reflection_surface(
    model: &DispersionModel,
    zetas: &[f64],
    k_perps: &[f64],
) -> Result<ReflectionSurface> {
    if zetas.is_empty() || k_perps.is_empty() {
        return Err(Error::validation("reflection grids must be non-empty"));
    }
    if zetas.iter().any(|&z| !(z > 0.0)) || k_perps.iter().any(|&k| !(k >= 0.0)) {
        return Err(Error::validation("reflection grid needs ζ > 0 and k⊥ >= 0"));
    }
    if zetas.windows(2).any(|w| !(w[1] > w[0])) || k_perps.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::validation("reflection grids must be ascending"));
    }
    let mut values = Vec::with_capacity(zetas.len() * k_perps.len());
    for &zeta in zetas {
        let reflector = Reflector::new(model, zeta)?;
        let z = zeta / SPEED_OF_LIGHT;
        for &k in k_perps {
            values.push(reflector.pair(libm::sqrt(k * k + z * z)));
        }
    }
    Ok(ReflectionSurface {
        zetas: zetas.to_vec(),
        k_perps: k_perps.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::DrudeParameters;

    fn naive_pair(eps: f64, zeta: f64, q: f64) -> (f64, f64) {
        let p = q * SPEED_OF_LIGHT / zeta;
        let s = libm::sqrt(eps - 1.0 + p * p);
        let a = ((s - eps * p) / (s + eps * p)).powi(2);
        let b = ((s - p) / (s + p)).powi(2);
        (a, b)
    }

    #[test]
    fn vacuum_does_not_reflect() {
        let r = fresnel_squared(Permittivity::Finite(1.0), 1e14, 1e7).unwrap();
        assert_eq!((r.a, r.b), (0.0, 0.0));
    }

    #[test]
    fn ideal_metal_reflects_fully() {
        let r = fresnel_squared(Permittivity::Infinite, 1e14, 1e7).unwrap();
        assert_eq!((r.a, r.b), (1.0, 1.0));
    }

    #[test]
    fn stable_forms_match_textbook_forms() {
        for &(eps, zeta, q) in &[
            (3.0, 1e14, 1e6),
            (1.5, 2e15, 1e7),
            (1e4, 1e13, 3e6),
            (80.0, 1e12, 1e4),
        ] {
            let r = fresnel_squared(Permittivity::Finite(eps), zeta, q).unwrap();
            let (a, b) = naive_pair(eps, zeta, q);
            assert!((r.a - a).abs() < 1e-12 * a.max(1e-300), "A {} vs {a}", r.a);
            assert!((r.b - b).abs() < 1e-12 * b.max(1e-300), "B {} vs {b}", r.b);
        }
    }

    #[test]
    fn normal_incidence_reduces_to_sqrt_epsilon_form() {
        let eps: f64 = 7.3;
        let zeta = 5e14;
        let q = zeta / SPEED_OF_LIGHT;
        let r = fresnel_squared(Permittivity::Finite(eps), zeta, q).unwrap();
        let n = libm::sqrt(eps);
        let expected = ((n - 1.0) / (n + 1.0)).powi(2);
        assert!((r.b - expected).abs() < 1e-14);
        assert!((r.a - expected).abs() < 1e-14);
    }

    #[test]
    fn evanescent_bookkeeping_enforced() {
        let zeta = 1e14;
        let q = 0.5 * zeta / SPEED_OF_LIGHT;
        assert!(matches!(
            fresnel_squared(Permittivity::Finite(2.0), zeta, q),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn drude_low_frequency_limits() {
        let model = DispersionModel::Drude(DrudeParameters::gold());
        let k = 1e6;
        let mut last_b = f64::INFINITY;
        for zeta in [1e10, 1e8, 1e6, 1e4, 1e2] {
            let s = reflection_surface(&model, &[zeta], &[k]).unwrap();
            let r = s.get(0, 0);
            assert!(r.b < last_b);
            last_b = r.b;
            assert!(1.0 - r.a < 1e-4);
        }
        assert!(last_b < 1e-12);
    }

    #[test]
    fn scaled_form_limits() {
        assert_eq!(scaled_te_coefficient(0.0), 1.0);
        let x = 1e3;
        let ratio = scaled_te_coefficient(x) * x.powi(4);
        assert!((ratio - 1.0 / 16.0).abs() < 1e-6);
        for t in [0.01, 0.3, 1.0, 2.5, 6.0] {
            let b = scaled_te_coefficient(libm::sinh(t));
            assert!((b / libm::exp(-4.0 * t) - 1.0).abs() < 1e-13);
            let c = scaled_te_complement(libm::sinh(t));
            assert!((c - (1.0 - libm::exp(-4.0 * t))).abs() < 1e-15);
        }
    }

    #[test]
    fn scaling_consistency_regimes() {
        let p = DrudeParameters::gold();
        let d = p.low_frequency_strength().value();
        for (frac, bound) in [(1e-2, 0.05), (1e-4, 1e-3)] {
            let zeta = p.nu() * frac;
            let scale = libm::sqrt(d * zeta) / SPEED_OF_LIGHT;
            for xq in [0.05, 0.5, 1.0, 3.0, 20.0] {
                let q = (xq * scale).max(zeta / SPEED_OF_LIGHT);
                let dev = scaling_consistency(&p, zeta, q).unwrap();
                assert!(dev < bound, "ζ/ν={frac}, x={xq}: {dev}");
            }
        }
        assert!(matches!(
            scaling_consistency(&p, p.nu() / 5.0, 1e6),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn scaling_exact_when_susceptibility_is_d_over_zeta() {
        let strength = DrudeParameters::gold().low_frequency_strength();
        let zeta = 1e9;
        let eps = 1.0 + strength.value() / zeta;
        for q in [1e4, 1e6, 1e7] {
            let dev = te_scaling_deviation(Permittivity::Finite(eps), strength, zeta, q).unwrap();
            assert!(dev < 1e-12, "{dev}");
        }
    }

    #[test]
    fn vacuum_surface_is_zero_and_ideal_is_one() {
        let zetas = [1e12, 1e14];
        let ks = [0.0, 1e6, 1e7];
        let s = reflection_surface(&DispersionModel::Vacuum, &zetas, &ks).unwrap();
        assert!(s.values.iter().all(|r| r.a == 0.0 && r.b == 0.0));
        let s = reflection_surface(&DispersionModel::IdealMetal, &zetas, &ks).unwrap();
        assert!(s.values.iter().all(|r| r.a == 1.0 && r.b == 1.0));
        assert_eq!(s.rows().count(), 6);
    }

    #[test]
    fn coordinates_are_consistent() {
        let d = DrudeParameters::gold().low_frequency_strength();
        let c = ModeCoordinates::from_k_perp(50.0, 1e14, 2e6, 1e-6, Some(d)).unwrap();
        assert!(c.p >= 1.0 && c.s >= c.p);
        assert!(
            (c.q * c.q - c.k_perp * c.k_perp - (1e14 / SPEED_OF_LIGHT).powi(2)).abs()
                < 1e-6 * c.q * c.q
        );
        assert!((c.y - 2.0 * c.q * 1e-6).abs() < 1e-15);
        assert!((c.x0.unwrap() - libm::sqrt(1e14 / d.value())).abs() < 1e-15);
    }
}
