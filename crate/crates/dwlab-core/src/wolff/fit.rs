//! Least-squares fit of grid samples by a polynomial in z, zbar of total
//! bi-degree D, carried out mode by mode.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numeric::csum;
use crate::quadrature::DiskRule;
use crate::rotation::{decompose_samples, ModeSeries, RadialPoly};

#[derive(Debug, Clone)]
pub struct ModeFit {
    pub series: ModeSeries,
    pub degree: usize,
    /// grid least-squares norm of samples - fit, relative to the samples
    pub residual: f64,
}

/// Shifted Legendre values P_0..P_d at x = 2u - 1.
fn legendre_row(u: f64, d: usize, out: &mut [f64]) {
    let x = 2.0 * u - 1.0;
    out[0] = 1.0;
    if d >= 1 {
        out[1] = x;
    }
    for k in 2..=d {
        let kf = k as f64;
        out[k] = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
    }
}

/// Fit ring-major samples on `rule.points(true)` by sum over |l| <= D of
/// r^{|l|} g_l(r^2) e^{il theta}, deg g_l <= (D - |l|)/2, minimizing the
/// weighted grid norm. Modes are orthogonal on the grid, so this is one small
/// problem per mode.
pub fn fit_modes(samples: &[Complex64], rule: &DiskRule, degree: usize) -> ModeFit {
    let radial = Arc::new(rule.radial.clone());
    let bank = decompose_samples(samples, rule.m, &radial);
    let w = &radial.weights;
    let n_r = radial.len();
    let energy = |v: &[Complex64]| csum(v.iter().zip(w).map(|(x, wi)| wi * x.norm_sqr()));
    let total = csum(bank.modes.values().map(|v| energy(v)));
    let mut miss = Vec::new();
    let mut series = ModeSeries::default();
    for (&l, v) in &bank.modes {
        let al = l.unsigned_abs() as usize;
        if al > degree {
            miss.push(energy(v));
            continue;
        }
        let d = ((degree - al) / 2).min(n_r - 1);
        let mut a = DMatrix::<f64>::zeros(n_r, d + 1);
        let mut b = DMatrix::<f64>::zeros(n_r, 2);
        let mut row = vec![0.0; d + 1];
        for i in 0..n_r {
            let sw = w[i].sqrt();
            let rl = radial.nodes[i].powi(al as i32);
            legendre_row(radial.u[i], d, &mut row);
            for k in 0..=d {
                a[(i, k)] = sw * rl * row[k];
            }
            b[(i, 0)] = sw * v[i].re;
            b[(i, 1)] = sw * v[i].im;
        }
        let svd = a.clone().svd(true, true);
        let x = svd.solve(&b, 1e-14 * svd.singular_values.max()).expect("svd has both factors");
        let coeffs: Vec<Complex64> = (0..=d).map(|k| Complex64::new(x[(k, 0)], x[(k, 1)])).collect();
        let p = RadialPoly::legendre(al as u32, coeffs);
        let fitted = &a * &x;
        let r = csum((0..n_r).map(|i| (b[(i, 0)] - fitted[(i, 0)]).powi(2) + (b[(i, 1)] - fitted[(i, 1)]).powi(2)));
        miss.push(r);
        if !p.is_zero() {
            series.modes.insert(l, p);
        }
    }
    let residual = if total > 0.0 { (csum(miss) / total).sqrt() } else { 0.0 };
    ModeFit { series, degree, residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::build_disk_rule;
    use crate::space::{BiDegreeSeries, WeightParam};

    #[test]
    fn reproduces_polynomials() {
        let f = BiDegreeSeries::new([
            ((0, 0), Complex64::new(0.3, 0.1)),
            ((3, 1), Complex64::new(1.0, 0.0)),
            ((0, 2), Complex64::new(0.0, -0.5)),
            ((2, 2), Complex64::new(0.25, 0.0)),
        ]);
        let rule = build_disk_rule(WeightParam::new(0.7).unwrap(), 16, 32).unwrap();
        let samples: Vec<Complex64> = rule.points(true).iter().map(|z| f.eval(*z)).collect();
        let fit = fit_modes(&samples, &rule, 4);
        assert!(fit.residual < 1e-13, "{}", fit.residual);
        for z in [Complex64::new(0.2, 0.5), Complex64::new(-0.7, 0.1)] {
            assert!((fit.series.eval(z) - f.eval(z)).norm() < 1e-13);
        }
        // degree 3 misses the bi-degree (2,2) term
        assert!(fit_modes(&samples, &rule, 3).residual > 1e-3);
    }

    #[test]
    fn smooth_data_converges_geometrically() {
        let rule = build_disk_rule(WeightParam::new(1.0).unwrap(), 32, 64).unwrap();
        let samples: Vec<Complex64> =
            rule.points(true).iter().map(|z| z.powi(3) / (1.0 + z.norm_sqr()).powi(2) * 0.5).collect();
        let r: Vec<f64> = [7, 11, 15].iter().map(|&d| fit_modes(&samples, &rule, d).residual).collect();
        assert!(r[1] < r[0] / 20.0 && r[2] < r[1] / 20.0, "{r:?}");
    }
}
