use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DwError, Result};
use crate::koszul::build_q;
use crate::numeric::csum;
use crate::quadrature::{build_disk_rule, DiskRule};
use crate::rotation::{decompose_samples, ModeBank};
use crate::space::PowerSeries;
use crate::transforms::{apply_modes, apply_modes_on_rule, dbar_test_points, ModeOp, TransformResult};

use super::fit::{fit_modes, ModeFit};
use super::report::{norm_term_report, TermTable};
use super::{mobius_normalize, SolveOptions, WolffInstance};

pub const SCHEMA: &str = "dwlab.solution.v1";

/// Pointwise data of the instance at one point.
pub(crate) struct PointData {
    pub f: Vec<Complex64>,
    pub df: Vec<Complex64>,
    pub ff: f64,
    /// H^3 h
    pub rhs: Complex64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyticityReport {
    /// sum_{l<0} ||u_l||^2 / sum_l ||u_l||^2 over all components
    pub negative_energy_ratio: f64,
    /// energy outside span{r^l e^{il theta}, l >= 0}, same normalization
    pub non_analytic_ratio: f64,
    /// max centered-difference |dbar u| on the interior test set
    pub dbar_fd_max: f64,
    pub dbar_fd_step: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionReport {
    pub schema: &'static str,
    pub alpha: f64,
    pub n: usize,
    pub mobius_a: [f64; 2],
    pub mobius_truncation_error: f64,
    pub delta: f64,
    pub n_r: usize,
    pub m: usize,
    pub fit_degree: usize,
    pub fit_residual: f64,
    pub fit_tol: f64,
    pub ideal_residual: f64,
    pub ideal_bound: f64,
    pub ideal_pass: bool,
    pub analyticity: AnalyticityReport,
    #[serde(flatten)]
    pub table: TermTable,
    pub pass: bool,
}

pub struct WolffSolution {
    pub instance: WolffInstance,
    pub options: SolveOptions,
    pub rule: DiskRule,
    /// fitted w, one per pair column
    pub fits: Vec<ModeFit>,
    /// Cauchy transform of each fitted w on the grid
    pub w_hat: Vec<TransformResult>,
    /// components of u on the grid (ring-major, `rule.points(true)`)
    pub u: Vec<TransformResult>,
    pub report: SolutionReport,
}

impl WolffInstance {
    pub(crate) fn point(&self, z: Complex64, h3h: &PowerSeries) -> PointData {
        let f = self.f.eval(z);
        let df: Vec<Complex64> = self.f.components.iter().map(|c| c.derivative().eval(z)).collect();
        let ff = csum(f.iter().map(|x| x.norm_sqr()));
        PointData { f, df, ff, rhs: h3h.eval(z) }
    }

    /// H^3 h by exact coefficient convolution.
    pub fn rhs_series(&self) -> PowerSeries {
        self.big_h.pow(3).mul(&self.h)
    }
}

/// w = Q^* F'^* H^3 h / (F F^*)^2 at one point.
pub(crate) fn w_at(p: &PointData) -> Vec<Complex64> {
    let v: Vec<Complex64> = p.df.iter().map(|x| x.conj()).collect();
    let s = p.rhs / (p.ff * p.ff);
    build_q(&p.f).adjoint_apply(&v).into_iter().map(|x| x * s).collect()
}

/// u = F^* H^3 h / F F^* - Q w_hat at one point.
pub(crate) fn u_at(p: &PointData, w_hat: &[Complex64]) -> Vec<Complex64> {
    let first = p.rhs / p.ff;
    let corr = if w_hat.is_empty() { vec![Complex64::new(0.0, 0.0); p.f.len()] } else { build_q(&p.f).apply(w_hat) };
    p.f.iter().zip(corr).map(|(fi, c)| fi.conj() * first - c).collect()
}

fn fit_ladder(samples: &[Vec<Complex64>], rule: &DiskRule, opts: &SolveOptions, d0: usize) -> Result<Vec<ModeFit>> {
    let cap = opts.max_fit_degree.unwrap_or(2 * opts.n_r - 1).min(opts.m / 2 - 1).max(d0);
    let mut d = d0;
    loop {
        let fits: Vec<ModeFit> = samples.iter().map(|s| fit_modes(s, rule, d)).collect();
        let worst = fits.iter().map(|f| f.residual).fold(0.0, f64::max);
        if worst <= opts.fit_tol {
            return Ok(fits);
        }
        if d >= cap {
            return Err(DwError::FitResidualTooLarge { residual: worst, tol: opts.fit_tol, degree: d });
        }
        d = (2 * d).min(cap);
    }
}

/// Evaluate u at arbitrary interior points from the fitted series.
pub fn u_at_points(inst: &WolffInstance, fits: &[ModeFit], points: &[Complex64]) -> Result<Vec<Vec<Complex64>>> {
    let h3h = inst.rhs_series();
    let w_hat: Vec<Vec<Complex64>> = fits
        .iter()
        .map(|f| apply_modes(ModeOp::Cauchy, &f.series, points).map(|r| r.values))
        .collect::<Result<_>>()?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let wz: Vec<Complex64> = w_hat.iter().map(|v| v[i]).collect();
            u_at(&inst.point(*z, &h3h), &wz)
        })
        .collect())
}

pub fn solve_uh(inst: &WolffInstance, opts: &SolveOptions) -> Result<WolffSolution> {
    let (instance, a, trunc_err) = if opts.mobius {
        let n = mobius_normalize(inst)?;
        (n.instance, n.a, n.truncation_error)
    } else {
        (inst.clone(), Complex64::new(0.0, 0.0), 0.0)
    };
    instance.check(opts.delta_floor)?;
    let rule = build_disk_rule(instance.alpha, opts.n_r, opts.m)?;
    let pts = rule.points(true);
    let h3h = instance.rhs_series();
    let data: Vec<PointData> = pts.iter().map(|z| instance.point(*z, &h3h)).collect();
    let n = instance.f.len();
    let pairs = n * (n - 1) / 2;

    let mut samples = vec![Vec::with_capacity(pts.len()); pairs];
    for p in &data {
        for (k, v) in w_at(p).into_iter().enumerate() {
            samples[k].push(v);
        }
    }
    let d0 = opts.fit_degree.unwrap_or((2 * instance.max_degree()).max(2));
    let fits = if pairs == 0 { Vec::new() } else { fit_ladder(&samples, &rule, opts, d0)? };
    let fit_degree = fits.first().map_or(0, |f| f.degree);
    let fit_residual = fits.iter().map(|f| f.residual).fold(0.0, f64::max);

    let w_hat: Vec<TransformResult> =
        fits.iter().map(|f| apply_modes_on_rule(ModeOp::Cauchy, &f.series, &rule)).collect();
    let mut u_vals = vec![Vec::with_capacity(pts.len()); n];
    for (i, p) in data.iter().enumerate() {
        let wz: Vec<Complex64> = w_hat.iter().map(|r| r.values[i]).collect();
        for (k, v) in u_at(p, &wz).into_iter().enumerate() {
            u_vals[k].push(v);
        }
    }
    let radial = Arc::new(rule.radial.clone());
    let u: Vec<TransformResult> = u_vals
        .into_iter()
        .map(|values| {
            let bank = decompose_samples(&values, rule.m, &radial);
            TransformResult { points: pts.clone(), values, modes: Some(bank), dbar_residual: None }
        })
        .collect();

    let ideal_residual = verify_ideal(&instance, &u);
    let max_rhs = data.iter().map(|p| p.rhs.norm()).fold(0.0, f64::max);
    let ideal_bound = 1e-10 * (1.0 + max_rhs);
    let mut analyticity = verify_analyticity(&u);
    let step = 1e-4;
    analyticity.dbar_fd_step = step;
    analyticity.dbar_fd_max = dbar_fd(&instance, &fits, step)?;

    let table = norm_term_report(&instance, &fits, &w_hat, &rule, opts)?;
    let ideal_pass = ideal_residual <= ideal_bound;
    let pass = ideal_pass && table.terms_pass;
    let report = SolutionReport {
        schema: SCHEMA,
        alpha: instance.alpha.value(),
        n,
        mobius_a: [a.re, a.im],
        mobius_truncation_error: trunc_err,
        delta: instance.delta,
        n_r: opts.n_r,
        m: opts.m,
        fit_degree,
        fit_residual,
        fit_tol: opts.fit_tol,
        ideal_residual,
        ideal_bound,
        ideal_pass,
        analyticity,
        table,
        pass,
    };
    Ok(WolffSolution { instance, options: opts.clone(), rule, fits, w_hat, u, report })
}

/// max over the grid of |F u - H^3 h|.
pub fn verify_ideal(inst: &WolffInstance, u: &[TransformResult]) -> f64 {
    let h3h = inst.rhs_series();
    let Some(first) = u.first() else { return 0.0 };
    let mut worst = 0.0f64;
    for (i, z) in first.points.iter().enumerate() {
        let f = inst.f.eval(*z);
        let fu: Complex64 = f.iter().zip(u).map(|(fk, uk)| fk * uk.values[i]).sum();
        worst = worst.max((fu - h3h.eval(*z)).norm());
    }
    worst
}

fn analytic_split(bank: &ModeBank) -> (f64, f64, f64) {
    let w = &bank.rule.weights;
    let r = &bank.rule.nodes;
    let mut total = Vec::new();
    let mut neg = Vec::new();
    let mut off = Vec::new();
    for (&l, v) in &bank.modes {
        let e = csum(v.iter().zip(w).map(|(x, wi)| wi * x.norm_sqr()));
        total.push(e);
        if l < 0 {
            neg.push(e);
            off.push(e);
        } else {
            // remove the projection onto r^l
            let rl: Vec<f64> = r.iter().map(|x| x.powi(l)).collect();
            let nn = csum(rl.iter().zip(w).map(|(p, wi)| wi * p * p));
            let ip: Complex64 = v.iter().zip(rl.iter().zip(w)).map(|(x, (p, wi))| x * (wi * p)).sum();
            let c = ip / nn;
            off.push(csum(v.iter().zip(rl.iter().zip(w)).map(|(x, (p, wi))| wi * (x - c * p).norm_sqr())));
        }
    }
    (csum(total), csum(neg), csum(off))
}

/// Analyticity measures from the mode banks of the components of u.
pub fn verify_analyticity(u: &[TransformResult]) -> AnalyticityReport {
    let (mut total, mut neg, mut off) = (0.0, 0.0, 0.0);
    for c in u {
        if let Some(b) = &c.modes {
            let (t, n, o) = analytic_split(b);
            total += t;
            neg += n;
            off += o;
        }
    }
    let ratio = |x: f64| if total > 0.0 { x / total } else { 0.0 };
    AnalyticityReport {
        negative_energy_ratio: ratio(neg),
        non_analytic_ratio: ratio(off),
        dbar_fd_max: 0.0,
        dbar_fd_step: 0.0,
    }
}

fn dbar_fd(inst: &WolffInstance, fits: &[ModeFit], h: f64) -> Result<f64> {
    let pts = dbar_test_points();
    let mut stencil = Vec::with_capacity(4 * pts.len());
    for z in &pts {
        stencil.extend([z + h, z - h, z + Complex64::new(0.0, h), z - Complex64::new(0.0, h)]);
    }
    let u = u_at_points(inst, fits, &stencil)?;
    let mut worst = 0.0f64;
    for i in 0..pts.len() {
        for k in 0..inst.f.len() {
            let dx = (u[4 * i][k] - u[4 * i + 1][k]) / (2.0 * h);
            let dy = (u[4 * i + 2][k] - u[4 * i + 3][k]) / (2.0 * h);
            worst = worst.max(((dx + Complex64::i() * dy) * 0.5).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{VectorSeries, WeightParam};

    fn r(c: &[f64]) -> PowerSeries {
        PowerSeries::from_real(c)
    }

    fn small() -> SolveOptions {
        SolveOptions { n_r: 16, m: 32, ..SolveOptions::default() }
    }

    #[test]
    fn constant_tuples_give_closed_forms() {
        let a = WeightParam::new(0.5).unwrap();
        let h = r(&[0.3, -1.0, 0.5]);
        let inst = WolffInstance::new(VectorSeries::new(vec![r(&[1.0]), r(&[0.0])]), r(&[1.0]), h.clone(), a);
        let sol = solve_uh(&inst, &small()).unwrap();
        for (i, z) in sol.u[0].points.iter().enumerate() {
            assert!((sol.u[0].values[i] - h.eval(*z)).norm() < 1e-14);
            assert!(sol.u[1].values[i].norm() < 1e-14);
        }
        assert!(sol.report.ideal_residual < 1e-14);

        let inst = WolffInstance::new(VectorSeries::new(vec![r(&[0.6]), r(&[0.8])]), r(&[1.0]), h.clone(), a);
        let sol = solve_uh(&inst, &small()).unwrap();
        for (i, z) in sol.u[0].points.iter().enumerate() {
            let hz = h.eval(*z);
            assert!((sol.u[0].values[i] - hz * 0.6).norm() < 1e-14);
            assert!((sol.u[1].values[i] - hz * 0.8).norm() < 1e-14);
        }
        assert!(sol.report.pass);
    }

    #[test]
    fn pipeline_instance_passes() {
        let a = WeightParam::new(0.5).unwrap();
        let inst =
            WolffInstance::new(VectorSeries::new(vec![r(&[0.0, 0.5]), r(&[0.5])]), r(&[0.0, 0.5]), r(&[1.0]), a);
        let sol = solve_uh(&inst, &SolveOptions::default()).unwrap();
        let rep = &sol.report;
        assert!(rep.pass, "{rep:?}");
        assert!(rep.ideal_residual < 1e-12);
        assert!(rep.analyticity.non_analytic_ratio < 1e-16);
        assert!(rep.analyticity.dbar_fd_max < 1e-6);
    }

    #[test]
    fn planted_defect_is_detected() {
        let a = WeightParam::new(0.5).unwrap();
        let inst =
            WolffInstance::new(VectorSeries::new(vec![r(&[0.0, 0.5]), r(&[0.5])]), r(&[0.0, 0.5]), r(&[1.0]), a);
        let mut sol = solve_uh(&inst, &SolveOptions::default()).unwrap();
        let clean = verify_analyticity(&sol.u).non_analytic_ratio;
        let eps = 1e-3;
        let rule = &sol.rule;
        let comp = &mut sol.u[0];
        for (v, z) in comp.values.iter_mut().zip(&comp.points) {
            *v += z.conj() * eps;
        }
        comp.modes = Some(decompose_samples(&comp.values, rule.m, &Arc::new(rule.radial.clone())));
        let dirty = verify_analyticity(&sol.u);
        assert!(dirty.negative_energy_ratio > 1e-8);
        assert!(dirty.non_analytic_ratio > 1e6 * clean.max(1e-30));
    }
}
