use casimir_core::asymptotics::power_term_pieces;
use casimir_core::dispersion::{DispersionModel, DrudeParameters, Permittivity};
use casimir_core::exec::{Executor, Sequential};
use casimir_core::lifshitz::{free_energy, Geometry, LifshitzConfig, Polarizations};
use casimir_core::numeric::special::riemann_zeta;
use casimir_core::reflection::{
    fresnel_squared, reflection_surface, scaled_te_coefficient, scaled_te_complement,
};
use proptest::prelude::*;

/// Evaluates blocks back to front; results still come back in index order.
struct Backwards;

impl Executor for Backwards {
    fn map_range<T, F>(&self, start: usize, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        let mut v: Vec<T> = (start..start + len).rev().map(f).collect();
        v.reverse();
        v
    }
}

fn gold() -> DispersionModel {
    DispersionModel::Drude(DrudeParameters::gold())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_in_unit_interval(
        log_zeta in 8.0f64..18.0,
        kperp in 0.0f64..1e9,
        log_eps in 0.0f64..12.0,
    ) {
        let zeta = 10f64.powf(log_zeta);
        let q = (kperp * kperp + (zeta / 2.998e8).powi(2)).sqrt();
        let r = fresnel_squared(Permittivity::Finite(10f64.powf(log_eps)), zeta, q).unwrap();
        prop_assert!((0.0..=1.0).contains(&r.a));
        prop_assert!((0.0..=1.0).contains(&r.b));
        prop_assert!(r.b <= r.a + 1e-15);
    }

    #[test]
    fn drude_surface_bounded(log_zeta in 3.0f64..17.0, kperp in 0.0f64..1e8) {
        let s = reflection_surface(&gold(), &[10f64.powf(log_zeta)], &[kperp]).unwrap();
        let p = s.get(0, 0);
        prop_assert!((0.0..=1.0).contains(&p.a) && (0.0..=1.0).contains(&p.b));
    }

    #[test]
    fn scaled_te_pair_sums_to_one(x in 0.0f64..1e6) {
        let b = scaled_te_coefficient(x);
        let c = scaled_te_complement(x);
        prop_assert!((b + c - 1.0).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&b));
    }

    #[test]
    fn polynomial_euler_maclaurin_exact(k in 1usize..=4, p in 1usize..40) {
        let e = power_term_pieces(k as f64, p).unwrap();
        let want = riemann_zeta(-(k as f64));
        let scale = (p as f64).powi(k as i32 + 1);
        prop_assert!((e.delta_s - want).abs() <= 1e-12 * scale.max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn free_energy_is_attractive(t in 20.0f64..800.0, gap_um in 0.3f64..3.0) {
        let g = Geometry::new(gap_um * 1e-6).unwrap();
        let f = free_energy(&gold(), g, t, Polarizations::BOTH, &LifshitzConfig::default(), &Sequential)
            .unwrap();
        prop_assert!(f.f_te <= 0.0 && f.f_tm <= 0.0 && f.f_total <= 0.0);
    }
}

#[test]
fn summation_independent_of_schedule() {
    let g = Geometry::new(1e-6).unwrap();
    let cfg = LifshitzConfig {
        chunk: 7,
        ..LifshitzConfig::default()
    };
    for t in [5.0, 300.0] {
        let a = free_energy(&gold(), g, t, Polarizations::BOTH, &cfg, &Sequential).unwrap();
        let b = free_energy(&gold(), g, t, Polarizations::BOTH, &cfg, &Backwards).unwrap();
        let c = free_energy(&gold(), g, t, Polarizations::BOTH, &cfg, &Sequential).unwrap();
        assert_eq!(a.f_total.to_bits(), b.f_total.to_bits());
        assert_eq!(a.f_total.to_bits(), c.f_total.to_bits());
        assert_eq!(a.m_max, b.m_max);
    }
}
