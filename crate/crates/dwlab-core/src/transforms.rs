//! Cauchy and Beurling transforms, harmonic extension and the operator T,
//! all evaluated mode by mode.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DwError, Result};
use crate::numeric::{cis, CompSumC};
use crate::quadrature::DiskRule;
use crate::rotation::{
    bl_functional, cl_functional, tl_functional, BlForm, ModeBank, ModeSeries, RadialPoly, RadialProfile, TlForm,
};
use crate::space::{BiDegreeSeries, TrigPoly};

/// Values of a transform at a set of points, with the per-mode profiles when
/// the points form a disk grid.
#[derive(Debug, Clone)]
pub struct TransformResult {
    pub points: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub modes: Option<ModeBank>,
    pub dbar_residual: Option<f64>,
}

/// Operator acting mode by mode: l -> l - shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeOp {
    Cauchy,
    Beurling(BlForm),
    T(TlForm),
}

impl ModeOp {
    fn shift(self) -> i32 {
        match self {
            ModeOp::Cauchy | ModeOp::T(_) => 1,
            ModeOp::Beurling(_) => 2,
        }
    }

    fn scale(self) -> f64 {
        match self {
            ModeOp::T(_) => 2.0 * PI,
            _ => 1.0,
        }
    }
}

fn mode_value(op: ModeOp, l: i32, p: &RadialPoly, zero_mode: Option<&RadialPoly>, s: f64) -> Complex64 {
    let (m, d) = (p.vanishing_order(), p.u_degree());
    match op {
        ModeOp::Cauchy => cl_functional(l, s, m, d).apply(p),
        ModeOp::Beurling(form) => bl_functional(l, s, m, d, form).apply(p),
        ModeOp::T(TlForm::PrintedZeroMode) if l > 0 => match zero_mode {
            Some(f0) => tl_functional(l, s, f0.vanishing_order(), f0.u_degree(), TlForm::PrintedZeroMode).apply(f0),
            None => Complex64::new(0.0, 0.0),
        },
        ModeOp::T(form) => tl_functional(l, s, m, d, form).apply(p),
    }
}

/// Output profiles keyed by output mode l - shift, sampled at `s`.
fn mode_outputs(op: ModeOp, series: &ModeSeries, s: &[f64]) -> BTreeMap<i32, Vec<Complex64>> {
    let f0 = series.modes.get(&0);
    let scale = op.scale();
    series
        .modes
        .iter()
        .map(|(&l, p)| {
            let v = s.iter().map(|&si| mode_value(op, l, p, f0, si) * scale).collect();
            (l - op.shift(), v)
        })
        .collect()
}

fn synthesize(modes: &BTreeMap<i32, Vec<Complex64>>, idx: usize, theta: f64) -> Complex64 {
    let mut acc = CompSumC::new();
    for (&l, v) in modes {
        acc.add(v[idx] * cis(l as f64 * theta));
    }
    acc.value()
}

fn check_interior(points: &[Complex64]) -> Result<()> {
    for z in points {
        if z.norm() >= 1.0 {
            return Err(DwError::PointOutsideDisk { re: z.re, im: z.im });
        }
    }
    Ok(())
}

/// Evaluate `op` applied to a mode series at arbitrary points of the open disk.
pub fn apply_modes(op: ModeOp, series: &ModeSeries, points: &[Complex64]) -> Result<TransformResult> {
    check_interior(points)?;
    Ok(at_points(op, series, points))
}

/// Evaluate `op` applied to a mode series on a disk grid.
pub fn apply_modes_on_rule(op: ModeOp, series: &ModeSeries, rule: &DiskRule) -> TransformResult {
    on_rule(op, series, rule)
}

/// The s = 1 limit of the mode formulas as a trigonometric polynomial.
pub fn boundary_trace(op: ModeOp, series: &ModeSeries) -> TrigPoly {
    let modes = mode_outputs(op, series, &[1.0]);
    TrigPoly::new(modes.into_iter().map(|(l, v)| (l, v[0])))
}

fn at_points(op: ModeOp, series: &ModeSeries, points: &[Complex64]) -> TransformResult {
    let s: Vec<f64> = points.iter().map(|z| z.norm()).collect();
    let modes = mode_outputs(op, series, &s);
    let values = points.iter().enumerate().map(|(i, z)| synthesize(&modes, i, z.arg())).collect();
    TransformResult { points: points.to_vec(), values, modes: None, dbar_residual: None }
}

/// Grid values are resynthesized from the returned mode bank, so they can be
/// reproduced from it exactly.
fn on_rule(op: ModeOp, series: &ModeSeries, rule: &DiskRule) -> TransformResult {
    let radial = Arc::new(rule.radial.clone());
    let modes = mode_outputs(op, series, &radial.nodes);
    let bank = ModeBank { alpha: rule.alpha(), rule: radial, modes };
    let points = rule.points(true);
    let mut values = Vec::with_capacity(points.len());
    for i in 0..rule.n_r() {
        for j in 0..rule.m {
            values.push(bank.synthesize(i, rule.theta(j)));
        }
    }
    TransformResult { points, values, modes: Some(bank), dbar_residual: None }
}

/// khat(z) = -(1/pi) int_D k(w)/(w - z) dA(w), so that dbar khat = k.
pub fn cauchy_transform(k: &BiDegreeSeries, points: &[Complex64]) -> Result<TransformResult> {
    check_interior(points)?;
    Ok(at_points(ModeOp::Cauchy, &ModeSeries::from_bidegree(k), points))
}

pub fn cauchy_transform_on_rule(k: &BiDegreeSeries, rule: &DiskRule) -> TransformResult {
    on_rule(ModeOp::Cauchy, &ModeSeries::from_bidegree(k), rule)
}

/// Boundary values of khat as a trigonometric polynomial (the s = 1 limit of
/// the mode formulas).
pub fn cauchy_boundary_trace(k: &BiDegreeSeries) -> TrigPoly {
    boundary_trace(ModeOp::Cauchy, &ModeSeries::from_bidegree(k))
}

/// Closed form of the Cauchy transform of a polynomial in z, zbar:
/// z^j zbar^k -> z^j zbar^{k+1}/(k+1) - [j > k] z^{j-k-1}/(k+1).
pub fn cauchy_closed_form(k: &BiDegreeSeries) -> BiDegreeSeries {
    let mut terms = Vec::new();
    for (j, kk, c) in k.terms() {
        let q = c / (kk + 1) as f64;
        terms.push(((j, kk + 1), q));
        if j > kk {
            terms.push(((j - kk - 1, 0), -q));
        }
    }
    BiDegreeSeries::new(terms)
}

/// Fixed interior test set: radii 0.15 .. 0.75 times 8 angles.
pub fn dbar_test_points() -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(32);
    for r in [0.15, 0.35, 0.55, 0.75] {
        for j in 0..8 {
            pts.push(cis(0.3 + 2.0 * PI * j as f64 / 8.0) * r);
        }
    }
    pts
}

#[derive(Debug, Clone, Serialize)]
pub struct DbarResidual {
    pub h: f64,
    pub max_residual: f64,
}

/// max over the test set of |dbar_h khat - k| with a centered difference
/// dbar_h = (D_x + i D_y)/2.
pub fn dbar_residual(k: &BiDegreeSeries, h: f64) -> Result<DbarResidual> {
    let pts = dbar_test_points();
    let (hx, hy) = (Complex64::new(h, 0.0), Complex64::new(0.0, h));
    let mut stencil = Vec::with_capacity(4 * pts.len());
    for z in &pts {
        stencil.extend([z + hx, z - hx, z + hy, z - hy]);
    }
    let khat = cauchy_transform(k, &stencil)?.values;
    let mut max = 0.0f64;
    for (i, z) in pts.iter().enumerate() {
        let v = &khat[4 * i..4 * i + 4];
        let dx = (v[0] - v[1]) / (2.0 * h);
        let dy = (v[2] - v[3]) / (2.0 * h);
        let dbar = (dx + Complex64::i() * dy) * 0.5;
        max = max.max((dbar - k.eval(*z)).norm());
    }
    Ok(DbarResidual { h, max_residual: max })
}

/// Residuals under repeated step halving and the observed orders
/// log2(r_i / r_{i+1}).
pub fn dbar_study(k: &BiDegreeSeries, h0: f64, levels: usize) -> Result<(Vec<DbarResidual>, Vec<f64>)> {
    let mut res = Vec::with_capacity(levels);
    let mut h = h0;
    for _ in 0..levels {
        res.push(dbar_residual(k, h)?);
        h *= 0.5;
    }
    let orders = res.windows(2).map(|w| (w[0].max_residual / w[1].max_residual).log2()).collect();
    Ok((res, orders))
}

/// B(phi) = d/dz of the Cauchy transform, sum_l e^{i(l-2)t} (B_l phi_l)(s).
pub fn beurling_transform(phi: &BiDegreeSeries, points: &[Complex64], form: BlForm) -> Result<TransformResult> {
    check_interior(points)?;
    Ok(at_points(ModeOp::Beurling(form), &ModeSeries::from_bidegree(phi), points))
}

pub fn beurling_transform_on_rule(phi: &BiDegreeSeries, rule: &DiskRule, form: BlForm) -> TransformResult {
    on_rule(ModeOp::Beurling(form), &ModeSeries::from_bidegree(phi), rule)
}

/// Mode profiles of B(phi) at the points s, keyed by output mode l - 2.
pub fn beurling_modes(phi: &BiDegreeSeries, s: &[f64], form: BlForm) -> BTreeMap<i32, Vec<Complex64>> {
    mode_outputs(ModeOp::Beurling(form), &ModeSeries::from_bidegree(phi), s)
}

/// (Tf)(s e^{it}) = 2 pi sum_l e^{i(l-1)t} (T_l f_l)(s).
pub fn operator_t(f: &BiDegreeSeries, points: &[Complex64], form: TlForm) -> Result<TransformResult> {
    check_interior(points)?;
    Ok(at_points(ModeOp::T(form), &ModeSeries::from_bidegree(f), points))
}

pub fn operator_t_on_rule(f: &BiDegreeSeries, rule: &DiskRule, form: TlForm) -> TransformResult {
    on_rule(ModeOp::T(form), &ModeSeries::from_bidegree(f), rule)
}

/// ||f||_{A_alpha} from sampled mode profiles: (2 pi sum_l ||f_l||^2)^{1/2}.
pub fn a_alpha_norm(bank: &ModeBank) -> f64 {
    (2.0 * PI * bank.energy()).sqrt()
}

/// Harmonic extension sum a_n r^{|n|} e^{in theta} of boundary data.
pub fn poisson_extension(boundary: &TrigPoly, points: &[Complex64]) -> TransformResult {
    let values = points.iter().map(|z| poisson_eval(boundary, *z)).collect();
    TransformResult { points: points.to_vec(), values, modes: None, dbar_residual: None }
}

pub fn poisson_eval(boundary: &TrigPoly, z: Complex64) -> Complex64 {
    let (r, th) = (z.norm(), z.arg());
    let mut acc = CompSumC::new();
    for (&n, c) in &boundary.coeffs {
        acc.add(c * r.powi(n.abs()) * cis(n as f64 * th));
    }
    acc.value()
}

/// d/dz of the harmonic extension: the analytic part sum_{n>0} n a_n z^{n-1}.
pub fn poisson_dz(boundary: &TrigPoly, z: Complex64) -> Complex64 {
    let mut acc = CompSumC::new();
    for (&n, c) in boundary.coeffs.range(1..) {
        acc.add(c * n as f64 * z.powi(n - 1));
    }
    acc.value()
}

/// d/dzbar of the harmonic extension: sum_{n<0} |n| a_n zbar^{|n|-1}.
pub fn poisson_dzbar(boundary: &TrigPoly, z: Complex64) -> Complex64 {
    let mut acc = CompSumC::new();
    for (&n, c) in boundary.coeffs.range(..0) {
        acc.add(c * (-n) as f64 * z.conj().powi(-n - 1));
    }
    acc.value()
}

/// Poisson integral with kernel (1-|z|^2)/|1 - e^{-it} z|^2 by the M-point
/// trapezoid rule.
pub fn poisson_integral<G: Fn(f64) -> Complex64>(g: G, z: Complex64, m: usize) -> Complex64 {
    let mut acc = CompSumC::new();
    let num = 1.0 - z.norm_sqr();
    for j in 0..m {
        let t = 2.0 * PI * j as f64 / m as f64;
        let den = (Complex64::new(1.0, 0.0) - cis(-t) * z).norm_sqr();
        acc.add(g(t) * (num / den));
    }
    acc.value() / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_disk_rule;
    use crate::rotation::apply_bl;
    use crate::space::WeightParam;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn sample_series() -> BiDegreeSeries {
        BiDegreeSeries::new([
            ((0, 0), Complex64::new(0.3, -0.2)),
            ((2, 1), c(1.0)),
            ((0, 3), Complex64::new(0.0, 0.5)),
            ((4, 0), c(-0.7)),
            ((1, 2), Complex64::new(0.25, 0.25)),
        ])
    }

    #[test]
    fn cauchy_examples() {
        let pts = dbar_test_points();
        let one = cauchy_transform(&BiDegreeSeries::monomial(0, 0, c(1.0)), &pts).unwrap();
        let wb = cauchy_transform(&BiDegreeSeries::monomial(0, 1, c(1.0)), &pts).unwrap();
        let zero = cauchy_transform(&BiDegreeSeries::zero(), &pts).unwrap();
        for (i, z) in pts.iter().enumerate() {
            assert!((one.values[i] - z.conj()).norm() < 1e-15);
            assert!((wb.values[i] - z.conj() * z.conj() * 0.5).norm() < 1e-15);
            assert_eq!(zero.values[i], c(0.0));
        }
        assert!(cauchy_transform(&BiDegreeSeries::zero(), &[c(1.0)]).is_err());
    }

    #[test]
    fn cauchy_matches_closed_form() {
        let f = sample_series();
        let closed = cauchy_closed_form(&f);
        let pts = dbar_test_points();
        let r = cauchy_transform(&f, &pts).unwrap();
        for (z, v) in pts.iter().zip(&r.values) {
            assert!((v - closed.eval(*z)).norm() < 1e-14);
        }
        let trace = cauchy_boundary_trace(&f);
        for t in [0.0, 1.1, 4.0] {
            assert!((trace.eval(t) - closed.eval(cis(t))).norm() < 1e-14);
        }
    }

    #[test]
    fn dbar_residual_second_order() {
        let f = sample_series();
        let (res, orders) = dbar_study(&f, 1e-2, 3).unwrap();
        assert!(res[0].max_residual > 1e-8);
        for o in orders {
            assert!(o > 1.9, "{o}");
        }
        assert_eq!(dbar_residual(&BiDegreeSeries::zero(), 1e-3).unwrap().max_residual, 0.0);
    }

    #[test]
    fn beurling_examples() {
        let pts = dbar_test_points();
        for f in [BiDegreeSeries::monomial(0, 0, c(1.0)), BiDegreeSeries::monomial(0, 1, c(1.0))] {
            let b = beurling_transform(&f, &pts, BlForm::default()).unwrap();
            assert!(b.values.iter().all(|v| v.norm() < 1e-15));
        }
        // B(w) = zbar; the displayed sign gives -zbar
        let w = BiDegreeSeries::monomial(1, 0, c(1.0));
        let b = beurling_transform(&w, &pts, BlForm::default()).unwrap();
        let bp = beurling_transform(&w, &pts, BlForm::Printed).unwrap();
        for (z, (v, vp)) in pts.iter().zip(b.values.iter().zip(&bp.values)) {
            assert!((v - z.conj()).norm() < 1e-15);
            assert!((vp + z.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn beurling_is_dz_of_cauchy() {
        let f = sample_series();
        let pts = dbar_test_points();
        let b = beurling_transform(&f, &pts, BlForm::default()).unwrap();
        let h = 1e-3;
        for (i, z) in pts.iter().enumerate() {
            let st = [z + h, z - h, z + Complex64::new(0.0, h), z - Complex64::new(0.0, h)];
            let v = cauchy_transform(&f, &st).unwrap().values;
            let dz = ((v[0] - v[1]) / (2.0 * h) - Complex64::i() * (v[2] - v[3]) / (2.0 * h)) * 0.5;
            assert!((dz - b.values[i]).norm() < 1e-5, "{dz} vs {}", b.values[i]);
        }
    }

    #[test]
    fn beurling_modes_match_apply_bl_bitwise() {
        let f = sample_series();
        let s = [0.1, 0.45, 0.8];
        let modes = beurling_modes(&f, &s, BlForm::default());
        for (&l, p) in &ModeSeries::from_bidegree(&f).modes {
            assert_eq!(modes[&(l - 2)], apply_bl(l, p, &s, BlForm::default()).unwrap());
        }
    }

    #[test]
    fn grid_values_resynthesize_from_modes() {
        let f = sample_series();
        let rule = build_disk_rule(WeightParam::new(0.5).unwrap(), 8, 16).unwrap();
        let r = cauchy_transform_on_rule(&f, &rule);
        let bank = r.modes.as_ref().unwrap();
        for i in 0..8 {
            for j in 0..16 {
                assert_eq!(r.values[i * 16 + j], bank.synthesize(i, rule.theta(j)));
            }
        }
        let direct = cauchy_transform(&f, &r.points).unwrap();
        for (a, b) in r.values.iter().zip(&direct.values) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn poisson_examples() {
        let pts = dbar_test_points();
        let one = TrigPoly::new([(0, c(1.0))]);
        let e1 = TrigPoly::new([(1, c(1.0))]);
        let em2 = TrigPoly::new([(-2, c(1.0))]);
        for z in &pts {
            assert!((poisson_eval(&one, *z) - 1.0).norm() < 1e-15);
            assert!((poisson_eval(&e1, *z) - z).norm() < 1e-15);
            assert!((poisson_eval(&em2, *z) - z.conj() * z.conj()).norm() < 1e-15);
            // squared kernel reproduces the extension
            let g = |t: f64| em2.eval(t);
            assert!((poisson_integral(g, *z, 256) - z.conj() * z.conj()).norm() < 1e-12);
        }
        // radial limit
        let data = TrigPoly::new([(3, c(0.5)), (-1, Complex64::new(0.0, 1.0)), (0, c(2.0))]);
        for t in [0.2, 2.5] {
            let v = poisson_eval(&data, cis(t) * 0.999);
            assert!((v - data.eval(t)).norm() < 5e-3);
        }
    }

    #[test]
    fn operator_t_examples() {
        let pts = dbar_test_points();
        let zero = operator_t(&BiDegreeSeries::zero(), &pts, TlForm::default()).unwrap();
        assert!(zero.values.iter().all(|v| *v == c(0.0)));
        let one = operator_t(&BiDegreeSeries::monomial(0, 0, c(1.0)), &pts, TlForm::default()).unwrap();
        assert!(one.values.iter().all(|v| v.norm() < 1e-14));
        let u = operator_t(&BiDegreeSeries::monomial(1, 0, c(1.0)), &pts, TlForm::default()).unwrap();
        assert!(u.values.iter().all(|v| (v - PI).norm() < 1e-13));
    }
}
