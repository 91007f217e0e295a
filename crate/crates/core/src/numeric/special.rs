//! Riemann zeta function on the real axis.

use core::f64::consts::PI;

/// Even-index Bernoulli numbers B₂ … B₁₄.
const BERNOULLI_EVEN: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Gamma function.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Riemann ζ(s) for real s.
///
/// For s ≥ 0 the Dirichlet series is summed directly to N = 12 and the tail
/// is closed with Euler-Maclaurin corrections through B₁₄. For s < 0 the
/// reflection formula ζ(s) = 2ˢ πˢ⁻¹ sin(πs/2) Γ(1−s) ζ(1−s) maps onto the
/// convergent half-plane. Returns +∞ at the pole s = 1.
pub fn riemann_zeta(s: f64) -> f64 {
    if s == 1.0 {
        return f64::INFINITY;
    }
    if s < 0.0 {
        let sine = libm::sin(0.5 * PI * s);
        if sine == 0.0 || (s == libm::floor(s) && (s as i64) % 2 == 0) {
            return 0.0;
        }
        return libm::pow(2.0, s)
            * libm::pow(PI, s - 1.0)
            * sine
            * gamma(1.0 - s)
            * euler_maclaurin_zeta(1.0 - s);
    }
    euler_maclaurin_zeta(s)
}

fn euler_maclaurin_zeta(s: f64) -> f64 {
    const N: usize = 12;
    let n = N as f64;
    let mut head = 0.0;
    // small terms first
    for k in (1..N).rev() {
        head += libm::pow(k as f64, -s);
    }
    let n_pow = libm::pow(n, -s);
    let mut tail = n * n_pow / (s - 1.0) + 0.5 * n_pow;
    // rising factorial s(s+1)…(s+2k−2) / (2k)!  ·  N^{−s−2k+1}
    let mut rising = s;
    let mut factorial = 2.0;
    let mut power = n_pow / n;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        tail += b / factorial * rising * power;
        let j = 2.0 * (k as f64 + 1.0);
        rising *= (s + j - 1.0) * (s + j);
        factorial *= (j + 1.0) * (j + 2.0);
        power /= n * n;
    }
    head + tail
}
