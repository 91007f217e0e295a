//! Physical constants and unit conversions.
//!
//! Constants are frozen at the four-digit values the reference low-temperature
//! coefficients were computed with, not at the latest CODATA values.

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.0545e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.381e-23;
/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;
/// Elementary charge, C (exact SI value). Used only for eV ↔ rad/s.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;

/// Riemann ζ(3), Apéry's constant.
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// Converts a photon energy in eV to an angular frequency in rad/s.
pub fn ev_to_rad_per_s(energy_ev: f64) -> f64 {
    energy_ev * ELEMENTARY_CHARGE / HBAR
}

/// Inverse of [`ev_to_rad_per_s`].
pub fn rad_per_s_to_ev(omega: f64) -> f64 {
    omega * HBAR / ELEMENTARY_CHARGE
}

/// First Matsubara frequency `2πkT/ħ` in rad/s.
pub fn matsubara_step(temperature: f64) -> f64 {
    2.0 * core::f64::consts::PI * BOLTZMANN * temperature / HBAR
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ev_round_trip() {
        let w = ev_to_rad_per_s(9.03);
        assert!((w / 1.3719e16 - 1.0).abs() < 1e-3);
        assert!((rad_per_s_to_ev(w) - 9.03).abs() < 1e-12);
    }

    #[test]
    fn matsubara_step_at_one_kelvin() {
        // 2π · 1.381e-23 / 1.0545e-34
        let expected = 2.0 * core::f64::consts::PI * 1.381e-23 / 1.0545e-34;
        assert_eq!(matsubara_step(1.0), expected);
        assert!((matsubara_step(1.0) / 8.2285e11 - 1.0).abs() < 1e-4);
    }
}
