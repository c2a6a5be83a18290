//! Discretized norms of T_l and B_l on L^2_alpha[0,1].
//!
//! The domain is spanned by the first n orthonormal profiles of mode l,
//! phi_k(r) = r^m c p_k(2r^2 - 1) with p_k orthonormal for (1-x)^a (1+x)^m,
//! a = 1 - alpha, m = |l|. Images are r^{|l'|} times a polynomial in r^2
//! (l' the output mode), so a Gauss-Jacobi rule with b = |l'| integrates
//! |A phi|^2 exactly and the singular values of the sampled matrix are those
//! of the compressed operator.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DwError, Result};
use crate::linalg::{sigma_max_squared, POWER_MAX_ITER, POWER_TOL};
use crate::numeric::rel_diff;
use crate::quadrature::{gauss_jacobi, JacobiFamily};
use crate::space::WeightParam;

use super::operators::{bl_functional, tl_functional, BlForm, Functional, TlForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    T,
    B,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::T => "T",
            Family::B => "B",
        }
    }

    /// angular shift from input to output mode
    pub fn shift(self) -> i32 {
        match self {
            Family::T => 1,
            Family::B => 2,
        }
    }

    /// uniform bound over l
    pub fn uniform_bound(self, alpha: WeightParam) -> f64 {
        let a = alpha.value();
        match self {
            Family::T => 8.0 / (a * a),
            Family::B => 23.0 / a,
        }
    }

    /// sharper bound stated for the individual case containing l
    pub fn case_bound(self, l: i32, alpha: WeightParam) -> f64 {
        let a = alpha.value();
        match self {
            Family::T if l == 0 || l > 1 => 5.0 / (a * a),
            Family::T if l < 0 => 6.0 + 2.0 / (a * a),
            Family::T => 8.0 / (a * a),
            Family::B if l < 2 => 7.0,
            Family::B => 15.0 + 8.0 / a,
        }
    }
}

impl std::str::FromStr for Family {
    type Err = DwError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "t" => Ok(Family::T),
            "B" | "b" => Ok(Family::B),
            _ => Err(DwError::Parse(format!("unknown operator family {s:?} (expected T or B)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OperatorForms {
    pub t: TlForm,
    pub b: BlForm,
}

/// Compressed mode operator with its largest singular value.
#[derive(Debug, Clone, Serialize)]
pub struct RadialOperator {
    pub family: Family,
    pub l: i32,
    pub alpha: WeightParam,
    pub n_r: usize,
    #[serde(skip)]
    pub matrix: DMatrix<f64>,
    pub sigma_max: f64,
    pub iterations: usize,
}

fn functional(family: Family, l: i32, s: f64, d: usize, forms: OperatorForms) -> Functional {
    let m = l.unsigned_abs();
    match family {
        Family::T => tl_functional(l, s, m, d, forms.t),
        Family::B => bl_functional(l, s, m, d, forms.b),
    }
}

/// Sampled matrix of the compressed operator: rows are range nodes with
/// square-root weights, columns are the orthonormal domain profiles.
pub fn operator_matrix(
    family: Family,
    l: i32,
    alpha: WeightParam,
    n_r: usize,
    forms: OperatorForms,
) -> Result<DMatrix<f64>> {
    if n_r < 16 {
        return Err(DwError::InvalidArgument(format!("certification needs n_r >= 16, got {n_r}")));
    }
    let a = 1.0 - alpha.value();
    let m = l.unsigned_abs();
    let lo = (l - family.shift()).unsigned_abs();
    let dom = JacobiFamily::new(n_r, a, m as f64);
    let norm = 2f64.powf(0.5 * (a + m as f64 + 2.0));
    let extra = if family == Family::T && l <= 0 { m as usize } else { 0 };
    let n_rows = n_r + 4 + extra;
    let (x, wx) = gauss_jacobi(n_rows, a, lo as f64)?;
    let wscale = 0.5 * 2f64.powf(-a - lo as f64 - 1.0);
    let mut mat = DMatrix::<f64>::zeros(n_rows, n_r);
    let mut p = vec![0.0; n_r];
    let mut col = vec![0.0; n_r];
    for i in 0..n_rows {
        let s = (0.5 * (1.0 + x[i])).sqrt();
        let fl = functional(family, l, s, n_r - 1, forms);
        col.iter_mut().for_each(|c| *c = 0.0);
        let mut add = |r: f64, w: f64| {
            dom.eval_orthonormal(2.0 * r * r - 1.0, &mut p);
            let rm = norm * r.powi(m as i32) * w;
            for k in 0..n_r {
                col[k] += rm * p[k];
            }
        };
        for (r, w) in fl.nodes.iter().zip(&fl.weights) {
            add(*r, *w);
        }
        if fl.local != 0.0 {
            add(s, fl.local);
        }
        let row_scale = (wscale * wx[i]).sqrt() / s.powi(lo as i32);
        for k in 0..n_r {
            mat[(i, k)] = col[k] * row_scale;
        }
    }
    Ok(mat)
}

pub fn certify_norm_with(
    family: Family,
    l: i32,
    alpha: WeightParam,
    n_r: usize,
    forms: OperatorForms,
) -> Result<RadialOperator> {
    let matrix = operator_matrix(family, l, alpha, n_r, forms)?;
    let pr = sigma_max_squared(&matrix, POWER_SQUARINGS, POWER_TOL, POWER_MAX_ITER)?;
    Ok(RadialOperator { family, l, alpha, n_r, matrix, sigma_max: pr.sigma, iterations: pr.iterations })
}

pub fn certify_norm(family: Family, l: i32, alpha: WeightParam, n_r: usize) -> Result<RadialOperator> {
    certify_norm_with(family, l, alpha, n_r, OperatorForms::default())
}

/// Squarings of M^T M before power iteration; top singular values of these
/// operators cluster, which stalls plain iteration.
pub const POWER_SQUARINGS: u32 = 10;

/// Relative change allowed between n_r and 2 n_r.
pub const STABILITY_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Serialize)]
pub struct CertifyRow {
    pub family: Family,
    pub alpha: f64,
    pub l: i32,
    pub n_r: usize,
    pub sigma_max: f64,
    pub paper_bound: f64,
    pub margin: f64,
    pub case_bound: f64,
    pub sigma_refined: f64,
    pub rel_change: f64,
    pub within_bound: bool,
    pub within_case_bound: bool,
    pub stable: bool,
}

impl CertifyRow {
    pub fn pass(&self) -> bool {
        self.within_bound && self.within_case_bound
    }
}

/// Certify one (family, l, alpha) at n_r and 2 n_r.
pub fn certify_row(
    family: Family,
    l: i32,
    alpha: WeightParam,
    n_r: usize,
    forms: OperatorForms,
) -> Result<CertifyRow> {
    let coarse = certify_norm_with(family, l, alpha, n_r, forms)?;
    let fine = certify_norm_with(family, l, alpha, 2 * n_r, forms)?;
    let bound = family.uniform_bound(alpha);
    let case_bound = family.case_bound(l, alpha);
    let rel_change = rel_diff(coarse.sigma_max, fine.sigma_max);
    Ok(CertifyRow {
        family,
        alpha: alpha.value(),
        l,
        n_r,
        sigma_max: coarse.sigma_max,
        paper_bound: bound,
        margin: bound - fine.sigma_max.max(coarse.sigma_max),
        case_bound,
        sigma_refined: fine.sigma_max,
        rel_change,
        within_bound: coarse.sigma_max <= bound && fine.sigma_max <= bound,
        within_case_bound: coarse.sigma_max <= case_bound && fine.sigma_max <= case_bound,
        stable: rel_change <= STABILITY_TOL,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub family: Family,
    pub alpha: f64,
    pub max_sigma: f64,
    pub argmax_l: i32,
    pub bound: f64,
    pub all_within_bound: bool,
    pub all_within_case_bound: bool,
    pub all_stable: bool,
}

/// All rows for the given families, alphas and |l| <= lmax, in parallel.
/// Rows come back ordered by (family, alpha, l).
pub fn certify_sweep(
    families: &[Family],
    alphas: &[WeightParam],
    lmax: i32,
    n_r: usize,
    forms: OperatorForms,
) -> Result<Vec<CertifyRow>> {
    let mut tasks = Vec::new();
    let mut fams = families.to_vec();
    fams.sort();
    fams.dedup();
    let mut als = alphas.to_vec();
    als.sort_by(|a, b| a.value().total_cmp(&b.value()));
    als.dedup();
    for &f in &fams {
        for &a in &als {
            for l in -lmax..=lmax {
                tasks.push((f, a, l));
            }
        }
    }
    tasks.par_iter().map(|&(f, a, l)| certify_row(f, l, a, n_r, forms)).collect()
}

pub fn summarize(rows: &[CertifyRow]) -> Vec<SweepSummary> {
    let mut out: Vec<SweepSummary> = Vec::new();
    for r in rows {
        let sigma = r.sigma_max.max(r.sigma_refined);
        match out.last_mut() {
            Some(s) if s.family == r.family && s.alpha == r.alpha => {
                if sigma > s.max_sigma {
                    s.max_sigma = sigma;
                    s.argmax_l = r.l;
                }
                s.all_within_bound &= r.within_bound;
                s.all_within_case_bound &= r.within_case_bound;
                s.all_stable &= r.stable;
            }
            _ => out.push(SweepSummary {
                family: r.family,
                alpha: r.alpha,
                max_sigma: sigma,
                argmax_l: r.l,
                bound: r.paper_bound,
                all_within_bound: r.within_bound,
                all_within_case_bound: r.within_case_bound,
                all_stable: r.stable,
            }),
        }
    }
    out
}

pub fn write_sweep_csv<W: Write>(rows: &[CertifyRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "family",
        "alpha",
        "l",
        "n_r",
        "sigma_max",
        "paper_bound",
        "margin",
        "case_bound",
        "sigma_2n",
        "rel_change",
    ])?;
    for r in rows {
        wtr.write_record([
            r.family.name().to_string(),
            format!("{:.16e}", r.alpha),
            r.l.to_string(),
            r.n_r.to_string(),
            format!("{:.16e}", r.sigma_max),
            format!("{:.16e}", r.paper_bound),
            format!("{:.16e}", r.margin),
            format!("{:.16e}", r.case_bound),
            format!("{:.16e}", r.sigma_refined),
            format!("{:.16e}", r.rel_change),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
