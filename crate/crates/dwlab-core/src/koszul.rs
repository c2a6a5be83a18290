//! The pair-column matrix Q built from a row vector C, with QQ* = CC* I - C*C
//! and CQ = 0.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DwError, Result};
use crate::numeric::CompSumC;
use crate::quadrature::{integrate_disk, DiskRule};
use crate::space::{besov_boundary_norm, multiplier_compression_norm, TrigPoly, VectorSeries, WeightParam};
use crate::transforms::poisson_eval;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// n x n(n-1)/2 matrix; column (i,j), i < j, holds c_j at row i and -c_i at
/// row j. Columns are in lexicographic order of (i,j).
#[derive(Debug, Clone, PartialEq)]
pub struct PairColumnMatrix {
    pub c: Vec<Complex64>,
}

/// One nonzero entry (row, column pair, value).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub pair: (usize, usize),
    pub re: f64,
    pub im: f64,
}

/// Sparse serialized form of a [`PairColumnMatrix`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SparseQ {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Triplet>,
}

pub fn build_q(c: &[Complex64]) -> PairColumnMatrix {
    PairColumnMatrix { c: c.to_vec() }
}

/// Lexicographic column index of the pair (i,j), i < j < n.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl PairColumnMatrix {
    pub fn rows(&self) -> usize {
        self.c.len()
    }

    pub fn cols(&self) -> usize {
        let n = self.rows();
        n * n.saturating_sub(1) / 2
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.rows();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut q = DMatrix::zeros(self.rows(), self.cols());
        for (k, (i, j)) in self.pairs().enumerate() {
            q[(i, k)] = self.c[j];
            q[(j, k)] = -self.c[i];
        }
        q
    }

    /// Q w for a pair-indexed vector w.
    pub fn apply(&self, w: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(w.len(), self.cols());
        let mut out = vec![czero(); self.rows()];
        for (k, (i, j)) in self.pairs().enumerate() {
            out[i] += self.c[j] * w[k];
            out[j] -= self.c[i] * w[k];
        }
        out
    }

    /// Q* v for a row-indexed vector v.
    pub fn adjoint_apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.rows());
        self.pairs().map(|(i, j)| self.c[j].conj() * v[i] - self.c[i].conj() * v[j]).collect()
    }

    /// Nonzero entries in column order.
    pub fn sparse(&self) -> SparseQ {
        let mut entries = Vec::with_capacity(2 * self.cols());
        for (k, (i, j)) in self.pairs().enumerate() {
            for (row, v) in [(i, self.c[j]), (j, -self.c[i])] {
                if v != czero() {
                    entries.push(Triplet { row, col: k, pair: (i, j), re: v.re, im: v.im });
                }
            }
        }
        SparseQ { rows: self.rows(), cols: self.cols(), entries }
    }

    pub fn nnz(&self) -> usize {
        self.sparse().entries.len()
    }

    /// Numerical rank by counting singular values above 1e-10 sigma_1.
    pub fn rank(&self) -> usize {
        if self.cols() == 0 {
            return 0;
        }
        let sv = self.to_dense().singular_values();
        let top = sv.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > 1e-10 * top).count()
    }

    /// max |QQ* - (CC*) I + C*C| entrywise, computed densely.
    pub fn identity_deviation(&self) -> f64 {
        let n = self.rows();
        let q = self.to_dense();
        let qq = &q * q.adjoint();
        let cc: f64 = self.c.iter().map(|x| x.norm_sqr()).sum();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut rhs = -self.c[a].conj() * self.c[b];
                if a == b {
                    rhs += cc;
                }
                worst = worst.max((qq[(a, b)] - rhs).norm());
            }
        }
        worst
    }

    /// max |(CQ)_k|, where C is the row vector c.
    pub fn cq_residual(&self) -> f64 {
        self.pairs().map(|(i, j)| (self.c[i] * self.c[j] - self.c[j] * self.c[i]).norm()).fold(0.0, f64::max)
    }
}

/// Q(z) = Q built from F(z).
pub fn q_field(f: &VectorSeries, z: Complex64) -> Result<PairColumnMatrix> {
    if z.norm() >= 1.0 {
        return Err(DwError::PointOutsideDisk { re: z.re, im: z.im });
    }
    Ok(build_q(&f.eval(z)))
}

/// Q'(z): Q is linear in C, so Q' is Q built from F'(z).
pub fn q_derivative(f: &VectorSeries, z: Complex64) -> Result<PairColumnMatrix> {
    if z.norm() >= 1.0 {
        return Err(DwError::PointOutsideDisk { re: z.re, im: z.im });
    }
    Ok(build_q(&f.derivative().eval(z)))
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma2Report {
    pub lhs: f64,
    pub rhs: f64,
    pub tau: f64,
    pub pass: bool,
    /// compression norms of the f_j at the truncation used
    pub compression_norms: Vec<f64>,
    pub normalized: bool,
}

/// Truncation for the normalization surrogate.
const NORMALIZATION_TRUNC: usize = 32;

/// int ||Q'(z) w(z)||^2 dA_alpha with w the harmonic extension of boundary
/// data (one trigonometric polynomial per pair column), against
/// 8 sum ||w_k||^2_{HD_alpha}.
pub fn lemma2_check(
    f: &VectorSeries,
    w: &[TrigPoly],
    alpha: WeightParam,
    rule: &DiskRule,
    tau: f64,
) -> Result<Lemma2Report> {
    if rule.alpha() != alpha {
        return Err(DwError::AlphaMismatch { rule: rule.alpha().value(), requested: alpha.value() });
    }
    let n = f.len();
    if w.len() != n * n.saturating_sub(1) / 2 {
        return Err(DwError::InvalidArgument(format!(
            "expected {} boundary components, got {}",
            n * n.saturating_sub(1) / 2,
            w.len()
        )));
    }
    let df = f.derivative();
    let lhs = integrate_disk(
        |z| {
            let q = build_q(&df.eval(z));
            let wz: Vec<Complex64> = w.iter().map(|t| poisson_eval(t, z)).collect();
            q.apply(&wz).iter().map(|v| v.norm_sqr()).sum::<f64>().into()
        },
        rule,
        true,
    )
    .re;
    let mut hd = CompSumC::new();
    for t in w {
        let m = (8 * t.max_mode() as usize).max(64);
        hd.add(besov_boundary_norm(t, alpha, m)?.powi(2).into());
    }
    let rhs = 8.0 * hd.value().re;
    let compression_norms: Vec<f64> = f
        .components
        .iter()
        .map(|c| multiplier_compression_norm(c, alpha, NORMALIZATION_TRUNC.max(c.degree() + 1)).sigma_max)
        .collect();
    let normalized = compression_norms.iter().all(|&s| s <= 1.0 + tau);
    Ok(Lemma2Report { lhs, rhs, tau, pass: lhs <= rhs * (1.0 + tau), compression_norms, normalized })
}
