//! The explicit solution u_h of F u = H^3 h for a smooth, nondegenerate
//! tuple F, with its verification and norm-term report.

mod fit;
mod report;
mod solve;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DwError, Result};
use crate::numeric::cis;
use crate::rotation::TlForm;
use crate::space::{PowerSeries, VectorSeries, WeightParam};

pub use fit::{fit_modes, ModeFit};
pub use report::{fit_k, norm_term_report, refinement_study, KFit, RefinementLevel, RefinementStudy, TermRow, TermTable};
pub use solve::{solve_uh, u_at_points, verify_analyticity, verify_ideal, AnalyticityReport, SolutionReport, WolffSolution, SCHEMA};

/// Default floor for min FF* on the verification grid.
pub const DELTA_FLOOR: f64 = 1e-6;

/// Allowed excess in |H|^2 <= FF* from rounding.
const HYPOTHESIS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct WolffInstance {
    pub f: VectorSeries,
    pub big_h: PowerSeries,
    pub h: PowerSeries,
    pub alpha: WeightParam,
    /// min of F F^* over the verification grid
    pub delta: f64,
    /// max of |H|^2 - F F^* over the verification grid
    pub hypothesis_excess: f64,
}

/// Closed-disk grid: 11 radii 0, 0.1, .., 1 times 64 angles.
pub fn verification_grid() -> Vec<Complex64> {
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=10 {
        let r = i as f64 / 10.0;
        for j in 0..64 {
            pts.push(cis(2.0 * std::f64::consts::PI * j as f64 / 64.0) * r);
        }
    }
    pts
}

impl WolffInstance {
    /// Builds the instance and measures delta and the Wolff inequality on the
    /// verification grid. Hypotheses are checked by [`WolffInstance::check`].
    pub fn new(f: VectorSeries, big_h: PowerSeries, h: PowerSeries, alpha: WeightParam) -> Self {
        let mut delta = f64::INFINITY;
        let mut excess = f64::NEG_INFINITY;
        for z in verification_grid() {
            let ff = f.ffstar(z);
            delta = delta.min(ff);
            excess = excess.max(big_h.eval(z).norm_sqr() - ff);
        }
        WolffInstance { f, big_h, h, alpha, delta, hypothesis_excess: excess }
    }

    pub fn check(&self, floor: f64) -> Result<()> {
        if self.f.is_empty() || !(self.delta > floor) {
            return Err(DwError::DegenerateF { delta: self.delta, floor });
        }
        if self.hypothesis_excess > HYPOTHESIS_SLACK {
            return Err(DwError::WolffHypothesis { excess: self.hypothesis_excess });
        }
        Ok(())
    }

    pub fn max_degree(&self) -> usize {
        self.f.max_degree().max(self.big_h.degree()).max(self.h.degree())
    }
}

/// Result of precomposing the data with beta(z) = (a - z)/(1 - conj(a) z).
#[derive(Debug, Clone)]
pub struct Normalized {
    pub instance: WolffInstance,
    pub a: Complex64,
    /// max over the circle of |g(beta(z)) - (g o beta)_N(z)| over F and H
    pub truncation_error: f64,
}

/// Truncation degree of precomposed series.
pub const MOBIUS_TRUNC: usize = 64;

/// Taylor polynomial of beta of degree n.
fn mobius_series(a: Complex64, n: usize) -> PowerSeries {
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    let ab = a.conj();
    // (a - z) sum (conj(a) z)^k
    let mut p = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        c[k] += a * p;
        if k < n {
            c[k + 1] -= p;
        }
        p *= ab;
    }
    PowerSeries::new(c)
}

/// (g o b) truncated to degree n, by Horner with truncation at each step.
pub fn compose_truncated(g: &PowerSeries, b: &PowerSeries, n: usize) -> PowerSeries {
    let mut acc = PowerSeries::zero();
    for c in g.coeffs().iter().rev() {
        acc = acc.mul(b).truncate(n).add(&PowerSeries::constant(*c));
    }
    acc
}

fn mobius_point(a: Complex64, z: Complex64) -> Complex64 {
    (a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Candidate centers: radii 0.25 and 0.5 times 16 angles.
fn mobius_candidates() -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(32);
    for r in [0.25, 0.5] {
        for j in 0..16 {
            pts.push(cis(2.0 * std::f64::consts::PI * (j as f64 + 0.5) / 16.0) * r);
        }
    }
    pts
}

/// Replace F, H by F o beta, H o beta so that H(0) != 0. h is left as is.
pub fn mobius_normalize(inst: &WolffInstance) -> Result<Normalized> {
    if inst.big_h.eval(Complex64::new(0.0, 0.0)).norm() > 0.0 {
        return Ok(Normalized { instance: inst.clone(), a: Complex64::new(0.0, 0.0), truncation_error: 0.0 });
    }
    let (a, best) = mobius_candidates()
        .into_iter()
        .map(|a| (a, inst.big_h.eval(a).norm()))
        .fold((Complex64::new(0.0, 0.0), 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if best <= 1e-14 * inst.big_h.max_abs_coeff().max(1.0) || best == 0.0 {
        return Err(DwError::AllZeroH);
    }
    let b = mobius_series(a, MOBIUS_TRUNC);
    let comps: Vec<PowerSeries> =
        inst.f.components.iter().map(|g| compose_truncated(g, &b, MOBIUS_TRUNC)).collect();
    let big_h = compose_truncated(&inst.big_h, &b, MOBIUS_TRUNC);
    let mut err = 0.0f64;
    for j in 0..256 {
        let z = cis(2.0 * std::f64::consts::PI * j as f64 / 256.0);
        let w = mobius_point(a, z);
        for (g, gb) in inst.f.components.iter().zip(&comps) {
            err = err.max((g.eval(w) - gb.eval(z)).norm());
        }
        err = err.max((inst.big_h.eval(w) - big_h.eval(z)).norm());
    }
    let f = VectorSeries::new(comps);
    Ok(Normalized { instance: WolffInstance::new(f, big_h, inst.h.clone(), inst.alpha), a, truncation_error: err })
}

/// Solver settings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    pub n_r: usize,
    pub m: usize,
    /// starting fit degree; defaults to 2 x the max input degree (at least 2)
    pub fit_degree: Option<usize>,
    /// largest fit degree tried; defaults to 2 n_r - 1, never above M/2 - 1
    pub max_fit_degree: Option<usize>,
    pub fit_tol: f64,
    pub delta_floor: f64,
    pub tau: f64,
    /// truncation for multiplier compressions
    pub trunc: usize,
    pub mobius: bool,
    #[serde(skip)]
    pub t_form: TlForm,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            n_r: 48,
            m: 128,
            fit_degree: None,
            max_fit_degree: None,
            fit_tol: 1e-8,
            delta_floor: DELTA_FLOOR,
            tau: crate::space::DEFAULT_TAU,
            trunc: 32,
            mobius: false,
            t_form: TlForm::KernelConsistent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn wp(a: f64) -> WeightParam {
        WeightParam::new(a).unwrap()
    }

    #[test]
    fn instance_checks() {
        let f = VectorSeries::new(vec![PowerSeries::from_real(&[0.0, 0.5]), PowerSeries::from_real(&[0.5])]);
        let inst = WolffInstance::new(f.clone(), PowerSeries::from_real(&[0.0, 0.5]), PowerSeries::from_real(&[1.0]), wp(1.0));
        assert!((inst.delta - 0.25).abs() < 1e-15);
        inst.check(DELTA_FLOOR).unwrap();
        let bad = WolffInstance::new(f, PowerSeries::from_real(&[0.8]), PowerSeries::from_real(&[1.0]), wp(1.0));
        assert!(matches!(bad.check(DELTA_FLOOR), Err(DwError::WolffHypothesis { .. })));
        let degenerate = WolffInstance::new(
            VectorSeries::new(vec![PowerSeries::from_real(&[0.0, 1.0])]),
            PowerSeries::zero(),
            PowerSeries::from_real(&[1.0]),
            wp(1.0),
        );
        assert!(matches!(degenerate.check(DELTA_FLOOR), Err(DwError::DegenerateF { .. })));
    }

    #[test]
    fn mobius_examples() {
        let f = VectorSeries::new(vec![PowerSeries::from_real(&[0.0, 0.5]), PowerSeries::from_real(&[0.5])]);
        let inst = WolffInstance::new(f.clone(), PowerSeries::from_real(&[0.25]), PowerSeries::from_real(&[1.0]), wp(0.5));
        let n = mobius_normalize(&inst).unwrap();
        assert_eq!(n.a, c(0.0));
        assert_eq!(n.instance.big_h, inst.big_h);

        let g = VectorSeries::new(vec![PowerSeries::from_real(&[0.0, 1.0]), PowerSeries::from_real(&[0.5])]);
        let inst = WolffInstance::new(g, PowerSeries::from_real(&[0.0, 1.0]), PowerSeries::from_real(&[1.0]), wp(0.5));
        let n = mobius_normalize(&inst).unwrap();
        assert!(n.a.norm() > 0.0);
        assert!((n.instance.big_h.coeff(0) - n.a).norm() < 1e-15);
        assert!(n.truncation_error < 1e-15);
        // the inequality survives the change of variables
        n.instance.check(DELTA_FLOOR).unwrap();

        let zero = WolffInstance::new(f, PowerSeries::zero(), PowerSeries::from_real(&[1.0]), wp(0.5));
        assert!(matches!(mobius_normalize(&zero), Err(DwError::AllZeroH)));
    }

    #[test]
    fn mobius_series_is_beta() {
        let a = Complex64::new(0.3, -0.2);
        let b = mobius_series(a, 60);
        for z in [c(0.0), Complex64::new(0.5, 0.5), cis(1.0)] {
            assert!((b.eval(z) - mobius_point(a, z)).norm() < 1e-14);
        }
    }
}
