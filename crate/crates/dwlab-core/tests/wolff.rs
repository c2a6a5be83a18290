use num_complex::Complex64;
use proptest::prelude::*;

use dwlab_core::corpus::{wolff_corpus, DEFAULT_SEED};
use dwlab_core::numeric::cis;
use dwlab_core::space::{PowerSeries, VectorSeries};
use dwlab_core::wolff::{fit_k, mobius_normalize, solve_uh, u_at_points, SolveOptions, WolffInstance};
use dwlab_core::{DwError, WeightParam};

fn wp(a: f64) -> WeightParam {
    WeightParam::new(a).unwrap()
}

fn r(c: &[f64]) -> PowerSeries {
    PowerSeries::from_real(c)
}

#[test]
fn corpus_instances_pass_at_half() {
    for ni in wolff_corpus(wp(0.5), DEFAULT_SEED, 1) {
        let sol = solve_uh(&ni.instance, &SolveOptions::default()).unwrap();
        let rep = &sol.report;
        assert!(rep.pass, "{}: ideal {:e} terms {}", ni.name, rep.ideal_residual, rep.table.terms_pass);
        assert!(rep.ideal_residual <= 1e-10, "{}: {:e}", ni.name, rep.ideal_residual);
    }
}

#[test]
fn solution_off_grid_matches_grid_and_solves_the_ideal() {
    let inst = WolffInstance::new(
        VectorSeries::new(vec![r(&[0.0, 0.5]), r(&[0.5, 0.0, 0.1])]),
        r(&[0.3, 0.2]),
        r(&[1.0, -0.5]),
        wp(0.75),
    );
    let sol = solve_uh(&inst, &SolveOptions::default()).unwrap();
    let pts = sol.rule.points(true);
    let pick: Vec<usize> = (0..pts.len()).step_by(97).collect();
    let sub: Vec<Complex64> = pick.iter().map(|&i| pts[i]).collect();
    let u = u_at_points(&sol.instance, &sol.fits, &sub).unwrap();
    for (k, &i) in pick.iter().enumerate() {
        for (j, comp) in sol.u.iter().enumerate() {
            assert!((u[k][j] - comp.values[i]).norm() < 1e-10, "point {i} comp {j}");
        }
    }
    let rhs = inst.rhs_series();
    let off: Vec<Complex64> = (0..12).map(|k| cis(0.37 + k as f64) * (0.05 + 0.07 * k as f64)).collect();
    let u = u_at_points(&sol.instance, &sol.fits, &off).unwrap();
    for (z, uz) in off.iter().zip(&u) {
        let fz = inst.f.eval(*z);
        let lhs: Complex64 = fz.iter().zip(uz).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs.eval(*z)).norm() < 1e-10);
    }
}

#[test]
fn mobius_normalization_handles_vanishing_h() {
    let inst = WolffInstance::new(
        VectorSeries::new(vec![r(&[0.0, 1.0]), r(&[0.5])]),
        r(&[0.0, 0.5]),
        r(&[1.0]),
        wp(1.0),
    );
    let n = mobius_normalize(&inst).unwrap();
    assert!(n.a.norm() > 0.0);
    assert!(n.instance.big_h.eval(Complex64::new(0.0, 0.0)).norm() > 0.0);
    assert!(n.truncation_error < 1e-12, "{:e}", n.truncation_error);
    let sol = solve_uh(&inst, &SolveOptions { mobius: true, ..Default::default() }).unwrap();
    assert!(sol.report.pass);
    assert_ne!(sol.report.mobius_a, [0.0, 0.0]);
    let zero = WolffInstance::new(inst.f.clone(), PowerSeries::zero(), r(&[1.0]), wp(1.0));
    assert!(matches!(mobius_normalize(&zero), Err(DwError::AllZeroH)));
}

#[test]
fn degenerate_tuple_is_rejected() {
    let inst = WolffInstance::new(VectorSeries::new(vec![r(&[0.0, 1.0]), r(&[0.0, 0.0, 1.0])]), r(&[0.0]), r(&[1.0]), wp(0.5));
    assert!(matches!(solve_uh(&inst, &SolveOptions::default()), Err(DwError::DegenerateF { .. })));
}

#[test]
fn k_fit_recovers_planted_constants() {
    let rows: Vec<(f64, f64, f64)> = [(1.0, 0.25), (1.5, 0.5), (2.0, 0.75), (1.2, 1.0), (3.0, 0.5)]
        .iter()
        .map(|&(m, a)| (2.0 * m + 0.5 / (a * a), m, a))
        .collect();
    let k = fit_k(&rows);
    assert!((k.k1 - 2.0).abs() < 1e-10 && (k.k2 - 0.5).abs() < 1e-10 && k.rms < 1e-10);
    // a negative unconstrained solution is clamped
    let neg: Vec<(f64, f64, f64)> = rows.iter().map(|&(_, m, a)| (m - 0.1 / (a * a), m, a)).collect();
    let k = fit_k(&neg);
    assert!(k.k1 >= 0.0 && k.k2 >= 0.0);
    assert_eq!(fit_k(&[]).samples, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn constant_unit_tuple_gives_conjugate_times_h(
        t in 0.0..(2.0 * std::f64::consts::PI),
        h in prop::collection::vec(-1.0..1.0f64, 1..4),
        a in prop::sample::select(vec![0.25, 0.5, 0.75, 1.0]),
    ) {
        let f = VectorSeries::new(vec![r(&[t.cos()]), r(&[t.sin()])]);
        let inst = WolffInstance::new(f, r(&[1.0]), r(&h), wp(a));
        let opts = SolveOptions { n_r: 16, m: 32, ..Default::default() };
        let sol = solve_uh(&inst, &opts).unwrap();
        let hs = r(&h);
        for (i, z) in sol.rule.points(true).iter().enumerate() {
            let hz = hs.eval(*z);
            prop_assert!((sol.u[0].values[i] - hz * t.cos()).norm() < 1e-12);
            prop_assert!((sol.u[1].values[i] - hz * t.sin()).norm() < 1e-12);
        }
    }
}
