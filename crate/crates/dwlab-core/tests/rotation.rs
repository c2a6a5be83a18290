use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use dwlab_core::numeric::beta;
use dwlab_core::quadrature::build_radial_rule;
use dwlab_core::rotation::{
    angular_decompose, certify_norm, j_integral, ring_coefficient, schur_witness_check, summarize, write_sweep_csv,
    certify_sweep, Family, OperatorForms, SchurClaim,
};
use dwlab_core::space::BiDegreeSeries;
use dwlab_core::WeightParam;

fn wp(a: f64) -> WeightParam {
    WeightParam::new(a).unwrap()
}

#[test]
fn certified_norms_grow_with_resolution() {
    for (fam, l, a) in [(Family::T, 0, 0.5), (Family::T, -3, 1.0), (Family::B, 4, 0.75), (Family::B, -1, 0.25)] {
        let s: Vec<f64> = [16, 32, 64].iter().map(|&n| certify_norm(fam, l, wp(a), n).unwrap().sigma_max).collect();
        assert!(s[1] >= s[0] * (1.0 - 1e-10) && s[2] >= s[1] * (1.0 - 1e-10), "{fam:?} {l} {a}: {s:?}");
    }
}

#[test]
fn beurling_modes_are_contractions_at_alpha_one() {
    for l in [-5, -1, 0, 1, 2, 3, 8] {
        let s = certify_norm(Family::B, l, wp(1.0), 64).unwrap().sigma_max;
        assert!(s <= 1.0 + 1e-8, "l = {l}: {s}");
        assert!(s > 0.5, "l = {l}: {s}");
    }
}

#[test]
fn small_sweep_passes_and_writes_csv() {
    let rows = certify_sweep(&[Family::T, Family::B], &[wp(1.0)], 3, 32, OperatorForms::default()).unwrap();
    assert_eq!(rows.len(), 14);
    assert!(rows.iter().all(|r| r.pass()));
    let sum = summarize(&rows);
    assert_eq!(sum.len(), 2);
    let mut buf = Vec::new();
    write_sweep_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 15);
    assert!(text.lines().next().unwrap().starts_with("family,"));
}

#[test]
fn schur_claim_one_a_holds() {
    for a in [0.25, 0.5, 0.75, 1.0] {
        let r = schur_witness_check(SchurClaim::IA, wp(a));
        assert!(r.pass, "alpha {a}: {} vs {}", r.max, r.bound);
        // v^2 ln(1/v) peaks at 1/(2e) at v = e^{-1/2}
        let peak = r.v2_ln_inv_v_max.unwrap();
        assert!(peak <= 0.5 / std::f64::consts::E + 1e-12);
        assert!(peak > 0.5 / std::f64::consts::E - 1e-4);
    }
}

#[test]
fn j_integral_against_beta() {
    // w = 0 gives 1/a; w = 1 gives B(a, 2 - alpha)
    for (a, al) in [(1.0, 0.5), (2.5, 0.25), (0.75, 1.0)] {
        assert!((j_integral(a, 0.0, al) - 1.0 / a).abs() < 1e-13);
        assert!((j_integral(a, 1.0, al) - beta(a, 2.0 - al)).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mode_profiles_match_ring_coefficients(
        terms in prop::collection::vec(((0u32..5, 0u32..5), -1.0..1.0f64, -1.0..1.0f64), 1..6),
        a in 0.1..=1.0f64,
    ) {
        let f = BiDegreeSeries::new(terms.into_iter().map(|(jk, x, y)| (jk, Complex64::new(x, y))));
        let rule = Arc::new(build_radial_rule(wp(a), 12).unwrap());
        let bank = angular_decompose(&f, &rule);
        for (&l, v) in &bank.modes {
            for (i, r) in rule.nodes.iter().enumerate() {
                let ring = ring_coefficient(|z| f.eval(z), *r, l, 32);
                prop_assert!((ring - v[i]).norm() < 1e-13, "l {} r {}: {} vs {}", l, r, ring, v[i]);
            }
        }
    }
}
