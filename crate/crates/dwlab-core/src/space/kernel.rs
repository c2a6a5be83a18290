use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DwError, Result};
use crate::numeric::{csum, CompSumC};

use super::{PowerSeries, WeightParam};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelValue {
    pub value: Complex64,
    /// bound on the neglected tail sum_{n>N} |z wbar|^n
    pub tail_bound: f64,
}

/// Partial sum of K_w(z) = sum (z wbar)^n / (n+1)^alpha through degree N.
pub fn rk_eval(w: Complex64, z: Complex64, alpha: WeightParam, n: usize) -> Result<KernelValue> {
    for p in [w, z] {
        if p.norm() >= 1.0 {
            return Err(DwError::PointOutsideDisk { re: p.re, im: p.im });
        }
    }
    let x = z * w.conj();
    let a = alpha.value();
    let mut acc = CompSumC::new();
    let mut xn = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        acc.add(xn / ((k + 1) as f64).powf(a));
        xn *= x;
    }
    let r = x.norm();
    Ok(KernelValue { value: acc.value(), tail_bound: r.powi(n as i32 + 1) / (1.0 - r) })
}

/// <f, K_w> in D_alpha computed from coefficients, with K_w truncated at N.
pub fn kernel_pairing(f: &PowerSeries, w: Complex64, alpha: WeightParam, n: usize) -> Complex64 {
    let a = alpha.value();
    let mut acc = CompSumC::new();
    let mut wn = Complex64::new(1.0, 0.0);
    for (k, c) in f.coeffs().iter().enumerate().take(n + 1) {
        let weight = ((k + 1) as f64).powf(a);
        // coefficient of K_w is wbar^k/(k+1)^alpha; the pairing conjugates it
        let kc = wn.conj() / weight;
        acc.add(c * kc.conj() * weight);
        wn *= w;
    }
    acc.value()
}

/// c_1..c_N with 1/k(x) = 1 - sum c_n x^n, k(x) = sum (n+1)^{-alpha} x^n.
pub fn pick_coeffs(alpha: WeightParam, n: usize) -> Vec<f64> {
    let a = alpha.value();
    let k: Vec<f64> = (0..=n).map(|j| ((j + 1) as f64).powf(-a)).collect();
    // c_m = k_m - sum_{j=1}^{m-1} k_j c_{m-j}
    let mut c = vec![0.0; n + 1];
    for m in 1..=n {
        let s = csum((1..m).map(|j| k[j] * c[m - j]));
        c[m] = k[m] - s;
    }
    c.remove(0);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp(a: f64) -> WeightParam {
        WeightParam::new(a).unwrap()
    }

    #[test]
    fn kernel_examples() {
        let k = rk_eval(Complex64::new(0.0, 0.0), Complex64::new(0.7, 0.1), wp(0.5), 10).unwrap();
        assert_eq!(k.value, Complex64::new(1.0, 0.0));
        let h = Complex64::new(0.5, 0.0);
        let k = rk_eval(h, h, wp(1.0), 200).unwrap();
        assert!((k.value.re - (-(0.75f64).ln() / 0.25)).abs() < 1e-14);
        assert!((k.value.re - 1.150_728_289_807_123_7).abs() < 1e-13);
        assert!(rk_eval(Complex64::new(1.0, 0.0), h, wp(1.0), 3).is_err());
    }

    #[test]
    fn reproducing_property() {
        let f = PowerSeries::monomial(2, Complex64::new(1.0, 0.0));
        let w = Complex64::new(0.3, 0.1);
        let p = kernel_pairing(&f, w, wp(0.7), 50);
        assert!((p - w * w).norm() < 1e-15);
    }

    #[test]
    fn pick_leading_coefficients() {
        let c = pick_coeffs(wp(1.0), 5);
        assert!((c[0] - 0.5).abs() < 1e-16);
        assert!((c[1] - 1.0 / 12.0).abs() < 1e-16);
        // next terms of 1 - x/(-log(1-x)): 1/24, 19/720, 3/160
        assert!((c[2] - 1.0 / 24.0).abs() < 1e-16);
        assert!((c[3] - 19.0 / 720.0).abs() < 1e-16);
        assert!((c[4] - 3.0 / 160.0).abs() < 1e-16);
    }
}
