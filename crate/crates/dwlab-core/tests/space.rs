use num_complex::Complex64;
use proptest::prelude::*;

use dwlab_core::quadrature::build_disk_rule;
use dwlab_core::space::{
    besov_boundary_norm, carleson_check, integral_norm, integral_norm_exact, kernel_pairing,
    multiplier_compression_norm, pick_coeffs, rk_eval, schwarz_pick_check, series_norm, PowerSeries, TrigPoly,
    WeightParam,
};

fn alpha() -> impl Strategy<Value = WeightParam> {
    (1u32..=20).prop_map(|k| WeightParam::new(k as f64 / 20.0).unwrap())
}

fn poly(max_deg: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..=max_deg + 1)
        .prop_map(|v| PowerSeries::new(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_norm_is_a_norm(f in poly(12), g in poly(12), a in alpha(), s in -3.0..3.0f64) {
        let n = series_norm(&f, a);
        prop_assert!((series_norm(&f.scale(Complex64::new(s, 0.0)), a) - s.abs() * n).abs() <= 1e-12 * (1.0 + n));
        prop_assert!(series_norm(&f.add(&g), a) <= n + series_norm(&g, a) + 1e-12);
    }

    #[test]
    fn integral_norm_quadrature_matches_coefficients(f in poly(14), a in alpha()) {
        let rule = build_disk_rule(a, 16, 40).unwrap();
        let q = integral_norm(&f, a, &rule).unwrap();
        let e = integral_norm_exact(&f, a);
        prop_assert!((q - e).abs() <= 1e-12 * e.max(1.0), "{} vs {}", q, e);
    }

    #[test]
    fn compression_is_monotone_in_truncation(phi in poly(8), a in alpha()) {
        let mut prev = 0.0;
        for n in [4, 8, 16, 32] {
            let s = multiplier_compression_norm(&phi, a, n).sigma_max;
            prop_assert!(s >= prev - 1e-12 * s.max(1.0));
            prev = s;
        }
        // <M e_0, e_0> = phi(0)
        prop_assert!(prev >= phi.coeff(0).norm() - 1e-12);
    }

    #[test]
    fn kernel_reproduces_polynomials(f in poly(10), a in alpha(), r in 0.0..0.9f64, t in 0.0..6.28f64) {
        let w = Complex64::from_polar(r, t);
        let v = kernel_pairing(&f, w, a, 40);
        prop_assert!((v - f.eval(w)).norm() <= 1e-13 * (1.0 + f.eval(w).norm()));
    }

    #[test]
    fn kernel_tail_bound_holds(a in alpha(), r in 0.0..0.8f64, t in 0.0..6.28f64) {
        let w = Complex64::from_polar(r, t);
        let z = Complex64::from_polar(0.9, -t / 2.0);
        let short = rk_eval(w, z, a, 20).unwrap();
        let long = rk_eval(w, z, a, 400).unwrap();
        prop_assert!((short.value - long.value).norm() <= short.tail_bound + 1e-14);
    }

    #[test]
    fn multiplier_checks_hold_on_random_multipliers(phi in poly(8), g in poly(6), a in alpha()) {
        let rule = build_disk_rule(a, 24, 48).unwrap();
        prop_assert!(schwarz_pick_check(&phi, a, 32, &rule, 0.05).pass);
        prop_assert!(carleson_check(&phi, &g, a, &rule, 32, 0.05).unwrap().pass);
    }
}

#[test]
fn pick_coefficients_invert_the_kernel_series() {
    for a in [0.25, 0.5, 0.75, 1.0] {
        let al = WeightParam::new(a).unwrap();
        let n = 120;
        let c = pick_coeffs(al, n);
        assert!(c.iter().all(|&x| x > 0.0));
        let k: Vec<f64> = (0..=n).map(|j| ((j + 1) as f64).powf(-a)).collect();
        // (1 - sum c_m x^m) k(x), coefficients 1..N
        for m in 1..=n {
            let s: f64 = k[m] - (1..=m).map(|j| c[j - 1] * k[m - j]).sum::<f64>();
            assert!(s.abs() < 1e-14, "alpha {a}, m {m}: {s}");
        }
    }
}

#[test]
fn besov_and_series_norms_are_equivalent_on_monomials() {
    for a in [0.25, 0.5, 0.75, 1.0] {
        let al = WeightParam::new(a).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for n in 0..=64 {
            let f = PowerSeries::monomial(n, Complex64::new(1.0, 0.0));
            let r = besov_boundary_norm(&TrigPoly::from_power_series(&f), al, 512).unwrap() / series_norm(&f, al);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(lo > 0.5 && hi < 3.0, "alpha {a}: [{lo}, {hi}]");
    }
}
