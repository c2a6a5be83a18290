use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use std::f64::consts::PI;

use crate::linalg::sigma_max_svd;
use crate::numeric::{beta, csum};
use crate::quadrature::{integrate_disk, DiskRule};

use super::{series_norm, PowerSeries, VectorSeries, WeightParam};

/// Compression of M_phi to span{z^0..z^N}.
#[derive(Debug, Clone, Serialize)]
pub struct MultiplierCompression {
    #[serde(skip)]
    pub phi: PowerSeries,
    pub alpha: WeightParam,
    pub n: usize,
    pub sigma_max: f64,
}

/// Matrix of M_phi in the orthonormal basis e_n = z^n/(n+1)^{alpha/2},
/// restricted and compressed to span{z^0..z^N}.
pub fn multiplier_matrix(phi: &PowerSeries, alpha: WeightParam, n: usize) -> DMatrix<Complex64> {
    let h = 0.5 * alpha.value();
    DMatrix::from_fn(n + 1, n + 1, |j, k| {
        if j < k {
            Complex64::new(0.0, 0.0)
        } else {
            phi.coeff(j - k) * (((j + 1) as f64) / ((k + 1) as f64)).powf(h)
        }
    })
}

/// ||z^n||^2 in the integral form int |f|^2 dsigma + int |f'|^2 dA_alpha:
/// 1 + n^2 pi B(n, 2 - alpha).
pub fn integral_norm_weights(alpha: WeightParam, n: usize) -> Vec<f64> {
    let b = 2.0 - alpha.value();
    (0..=n)
        .map(|k| if k == 0 { 1.0 } else { 1.0 + (k * k) as f64 * PI * beta(k as f64, b) })
        .collect()
}

/// Integral-form norm of a polynomial, exact from its coefficients.
pub fn integral_norm_exact(f: &PowerSeries, alpha: WeightParam) -> f64 {
    let w = integral_norm_weights(alpha, f.degree());
    csum(f.coeffs().iter().zip(&w).map(|(c, k)| k * c.norm_sqr())).sqrt()
}

/// M_phi compressed to span{z^0..z^N} in the orthonormal basis z^n/sqrt(kappa_n).
pub fn multiplier_matrix_with(phi: &PowerSeries, kappa: &[f64]) -> DMatrix<Complex64> {
    let d = kappa.len();
    DMatrix::from_fn(d, d, |j, k| {
        if j < k {
            Complex64::new(0.0, 0.0)
        } else {
            phi.coeff(j - k) * (kappa[j] / kappa[k]).sqrt()
        }
    })
}

/// Block compression with basis weights kappa (one block per entry).
pub fn block_compression_norm_with(entries: &[Vec<Option<PowerSeries>>], kappa: &[f64]) -> f64 {
    let rows = entries.len();
    let cols = entries.first().map_or(0, |r| r.len());
    let d = kappa.len();
    let mut big = DMatrix::<Complex64>::zeros(rows * d, cols * d);
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if let Some(phi) = e {
                big.view_mut((i * d, j * d), (d, d)).copy_from(&multiplier_matrix_with(phi, kappa));
            }
        }
    }
    sigma_max_svd(&big)
}

pub fn multiplier_compression_norm(phi: &PowerSeries, alpha: WeightParam, n: usize) -> MultiplierCompression {
    let sigma_max = sigma_max_svd(&multiplier_matrix(phi, alpha, n));
    MultiplierCompression { phi: phi.clone(), alpha, n, sigma_max }
}

/// Compression of a matrix of multipliers (rows x cols of optional entries).
pub fn block_compression_norm(entries: &[Vec<Option<PowerSeries>>], alpha: WeightParam, n: usize) -> f64 {
    let rows = entries.len();
    let cols = entries.first().map_or(0, |r| r.len());
    let d = n + 1;
    let mut big = DMatrix::<Complex64>::zeros(rows * d, cols * d);
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if let Some(phi) = e {
                let b = multiplier_matrix(phi, alpha, n);
                big.view_mut((i * d, j * d), (d, d)).copy_from(&b);
            }
        }
    }
    sigma_max_svd(&big)
}

/// Column operator h -> (f_1 h, ..., f_n h) compressed to degree N.
pub fn column_compression_norm(f: &VectorSeries, alpha: WeightParam, n: usize) -> f64 {
    let entries: Vec<Vec<Option<PowerSeries>>> = f.components.iter().map(|c| vec![Some(c.clone())]).collect();
    block_compression_norm(&entries, alpha, n)
}

#[derive(Debug, Clone, Serialize)]
pub struct SchwarzPickReport {
    pub lhs_max: f64,
    pub sigma_max: f64,
    pub tau: f64,
    pub pass: bool,
}

/// max (1-|z|^2)|phi'(z)| over the grid (and the origin) against the compression norm.
pub fn schwarz_pick_check(
    phi: &PowerSeries,
    alpha: WeightParam,
    n: usize,
    grid: &DiskRule,
    tau: f64,
) -> SchwarzPickReport {
    let d = phi.derivative();
    let mut pts = grid.points(true);
    pts.push(Complex64::new(0.0, 0.0));
    let lhs_max = pts
        .iter()
        .map(|z| (1.0 - z.norm_sqr()) * d.eval(*z).norm())
        .fold(0.0, f64::max);
    let sigma_max = multiplier_compression_norm(phi, alpha, n).sigma_max;
    SchwarzPickReport { lhs_max, sigma_max, tau, pass: lhs_max <= sigma_max * (1.0 + tau) }
}

#[derive(Debug, Clone, Serialize)]
pub struct CarlesonReport {
    pub lhs: f64,
    pub rhs: f64,
    pub tau: f64,
    pub pass: bool,
}

/// int |H'|^2 |g|^2 dA_alpha against 4 sigma_max(H)^2 ||g||^2.
pub fn carleson_check(
    h: &PowerSeries,
    g: &PowerSeries,
    alpha: WeightParam,
    rule: &DiskRule,
    n: usize,
    tau: f64,
) -> Result<CarlesonReport> {
    if rule.alpha() != alpha {
        return Err(crate::error::DwError::AlphaMismatch { rule: rule.alpha().value(), requested: alpha.value() });
    }
    let dh = h.derivative();
    let lhs = integrate_disk(|z| (dh.eval(z).norm_sqr() * g.eval(z).norm_sqr()).into(), rule, true).re;
    let s = multiplier_compression_norm(h, alpha, n).sigma_max;
    let rhs = 4.0 * s * s * series_norm(g, alpha).powi(2);
    Ok(CarlesonReport { lhs, rhs, tau, pass: lhs <= rhs * (1.0 + tau) })
}
