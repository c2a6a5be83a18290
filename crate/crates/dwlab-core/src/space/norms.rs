use std::f64::consts::PI;

use crate::error::{DwError, Result};
use crate::numeric::{csum, rel_diff};
use crate::quadrature::{integrate_circle, integrate_disk, DiskRule, JacobiFamily};

use super::{PowerSeries, TrigPoly, WeightParam};

/// (sum (n+1)^alpha |a_n|^2)^{1/2}
pub fn series_norm(f: &PowerSeries, alpha: WeightParam) -> f64 {
    let a = alpha.value();
    csum(f.coeffs().iter().enumerate().map(|(n, c)| ((n + 1) as f64).powf(a) * c.norm_sqr())).sqrt()
}

/// (int |f|^2 dsigma + int |f'|^2 dA_alpha)^{1/2} by quadrature.
pub fn integral_norm(f: &PowerSeries, alpha: WeightParam, rule: &DiskRule) -> Result<f64> {
    if rule.alpha() != alpha {
        return Err(DwError::AlphaMismatch { rule: rule.alpha().value(), requested: alpha.value() });
    }
    let df = f.derivative();
    let boundary = integrate_circle(|z| f.eval(z).norm_sqr().into(), rule.m.max(2 * f.degree() + 2)).re;
    let interior = integrate_disk(|z| df.eval(z).norm_sqr().into(), rule, true).re;
    Ok((boundary + interior).sqrt())
}

fn besov_integral(alpha: f64, n: u32, q: usize) -> Result<f64> {
    // (1/pi) int_0^pi s^{1-a} g(s) ds with s = pi(1+x)/2
    let fam = JacobiFamily::new(q, 0.0, 1.0 - alpha);
    let (x, w) = fam.gauss()?;
    let nf = n as f64;
    let vals = x.iter().zip(&w).map(|(xi, wi)| {
        let s = 0.5 * PI * (1.0 + xi);
        let num = 2.0 * (0.5 * nf * s).sin() / s;
        let den = s / (2.0 * (0.5 * s).sin());
        wi * num * num * den.powf(1.0 + alpha)
    });
    Ok(csum(vals) * (0.5 * PI).powf(2.0 - alpha) / PI)
}

/// c_alpha(n) = (1/2pi) int |e^{ins}-1|^2 / |e^{is}-1|^{1+alpha} ds, with a
/// refinement self-check. `q` is the node count of the base rule.
pub fn besov_constant(alpha: WeightParam, n: i32, q: usize) -> Result<f64> {
    let n = n.unsigned_abs();
    if n == 0 {
        return Ok(0.0);
    }
    let q = q.max(16);
    let a = besov_integral(alpha.value(), n, q)?;
    let b = besov_integral(alpha.value(), n, 2 * q)?;
    if rel_diff(a, b) > 1e-10 {
        return Err(DwError::QuadratureInconsistent(format!(
            "c_alpha({n}) at alpha = {}: {a} vs {b}",
            alpha.value()
        )));
    }
    Ok(b)
}

/// Boundary (Besov) form of the norm, evaluated mode-wise.
pub fn besov_boundary_norm(f: &TrigPoly, alpha: WeightParam, m: usize) -> Result<f64> {
    let need = 8 * f.max_mode() as usize;
    if m < need {
        return Err(DwError::InvalidArgument(format!(
            "angular resolution {m} below 8 * max mode = {need}"
        )));
    }
    let mut terms = Vec::with_capacity(f.coeffs.len());
    for (&n, c) in &f.coeffs {
        let cn = besov_constant(alpha, n, m / 2)?;
        terms.push(c.norm_sqr() * (1.0 + cn));
    }
    Ok(csum(terms).sqrt())
}
