//! Symmetric tridiagonal eigenvalues (implicit QL) and power iteration.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::error::{DwError, Result};

/// Eigen-decomposition of a symmetric tridiagonal matrix, tracking only the
/// first component of each normalized eigenvector (all Golub-Welsch needs).
///
/// `diag` has length n, `off` has length n-1 (sub-diagonal).
/// Returns eigenvalues ascending together with first components.
pub fn tridiag_eigen_first(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((vec![], vec![]));
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(&off[..n - 1]);
    // z holds the first row of the accumulated rotation matrix
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    let max_iter = 60 * n.max(1);
    let mut total = 0usize;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            total += 1;
            if iter > 60 || total > max_iter {
                return Err(DwError::EigenNoConvergence { iterations: total });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    Ok((idx.iter().map(|&i| d[i]).collect(), idx.iter().map(|&i| z[i]).collect()))
}

#[derive(Debug, Clone)]
pub struct PowerResult {
    pub sigma: f64,
    pub iterations: usize,
    /// right singular vector estimate
    pub vector: Vec<f64>,
}

pub const POWER_TOL: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 10_000;

fn start_vector<T: ComplexField<RealField = f64>>(n: usize) -> DVector<T> {
    // deterministic, not orthogonal to anything structured
    let v = DVector::from_fn(n, |i, _| {
        T::from_real(1.0 + (0.754_877_666_246_692_7 * (i as f64 + 1.0)).fract())
    });
    let nv = v.norm();
    v.unscale(nv)
}

/// Largest singular value of `a` by power iteration on A^H A.
/// Convergence is declared when successive Rayleigh quotients agree to `tol`
/// relatively.
pub fn sigma_max<T>(a: &DMatrix<T>, tol: f64, max_iter: usize) -> Result<PowerResult>
where
    T: ComplexField<RealField = f64> + Copy,
{
    sigma_max_squared(a, 0, tol, max_iter)
}

/// Power iteration driven by (A^H A)^{2^q}, formed by q rescaled squarings.
/// Rayleigh quotients are still taken with A^H A, so the stopping rule is the
/// same as for plain iteration; clustered top singular values separate 2^q
/// times faster per step.
pub fn sigma_max_squared<T>(a: &DMatrix<T>, q: u32, tol: f64, max_iter: usize) -> Result<PowerResult>
where
    T: ComplexField<RealField = f64> + Copy,
{
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return Ok(PowerResult { sigma: 0.0, iterations: 0, vector: vec![] });
    }
    let g = a.ad_mul(a);
    let mut h = g.clone();
    for _ in 0..q {
        h = &h * &h;
        let s = h.iter().map(|v| v.modulus()).fold(0.0, f64::max);
        if s == 0.0 {
            break;
        }
        h.unscale_mut(s);
    }
    let mut x: DVector<T> = start_vector(n);
    let mut last: Vec<f64> = Vec::new();
    let mut prev = f64::NAN;
    for it in 1..=max_iter {
        let y = &h * &x;
        let ny = y.norm();
        if ny == 0.0 {
            return Ok(PowerResult { sigma: 0.0, iterations: it, vector: vec![0.0; n] });
        }
        x = y.unscale(ny);
        let lambda = x.dotc(&(&g * &x)).real().max(0.0);
        last.push(lambda);
        if last.len() > 5 {
            last.remove(0);
        }
        if prev.is_finite() && (lambda - prev).abs() <= tol * lambda.abs() {
            return Ok(PowerResult {
                sigma: lambda.sqrt(),
                iterations: it,
                vector: x.iter().map(|v| v.modulus()).collect(),
            });
        }
        prev = lambda;
    }
    Err(DwError::PowerIterationStall { iterations: max_iter, last })
}

/// Largest singular value from a full SVD; used for cross-checks.
pub fn sigma_max_svd<T>(a: &DMatrix<T>) -> f64
where
    T: ComplexField<RealField = f64> + Copy,
{
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn tridiagonal_eigenvalues_of_laplacian() {
        let n = 12;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let (ev, z) = tridiag_eigen_first(&d, &e).unwrap();
        for (k, lam) in ev.iter().enumerate() {
            let theta = (k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
            assert!((lam - (2.0 - 2.0 * theta.cos())).abs() < 1e-13);
        }
        // first components square-sum to one
        let s: f64 = z.iter().map(|v| v * v).sum();
        assert!((s - 1.0).abs() < 1e-13);
    }

    #[test]
    fn power_iteration_matches_svd() {
        let a = DMatrix::from_fn(7, 5, |i, j| Complex64::new((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.05));
        let p = sigma_max(&a, 1e-13, 10_000).unwrap();
        let s = sigma_max_svd(&a);
        assert!((p.sigma - s).abs() < 1e-9 * s);
    }

    #[test]
    fn squaring_resolves_clustered_values() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![0.7, 1.0, 0.99, 0.5]));
        assert!(sigma_max(&a, 1e-14, 200).is_err());
        let p = sigma_max_squared(&a, 10, 1e-14, 200).unwrap();
        assert!((p.sigma - 1.0).abs() < 1e-12, "{}", p.sigma);
    }

    #[test]
    fn stall_is_reported() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 0.999_999, 0.5]));
        match sigma_max(&a, 1e-300, 20) {
            Err(DwError::PowerIterationStall { iterations, last }) => {
                assert_eq!(iterations, 20);
                assert_eq!(last.len(), 5);
            }
            other => panic!("expected stall, got {other:?}"),
        }
    }
}
