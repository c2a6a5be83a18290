//! Radial mode operators. Every operator is evaluated at a point s as a
//! linear functional L(f) = sum_q w_q f(r_q) + local * f(s), with Gauss rules
//! sized by the polynomial degree of the integrand.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DwError, Result};
use crate::numeric::CompSumC;
use crate::quadrature::gauss_legendre;

use super::RadialProfile;

/// Reading of the l > 0 branch of T_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TlForm {
    /// (1/(1-s^2)) int_s^1 (s/r)^{l-1} f_l(r) dr, the branch the kernel produces
    #[default]
    KernelConsistent,
    /// as displayed, with the extra r dr measure, applied to f_l
    PrintedMeasure,
    /// as displayed, with r dr, applied to the l = 0 profile
    PrintedZeroMode,
}

/// Sign of the local term of B_l for l >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum BlForm {
    /// + f_l(s), which is what d/dz of the Cauchy transform gives
    #[default]
    KernelConsistent,
    /// - f_l(s) as displayed
    Printed,
}

/// Extra Gauss points when the integrand is not a polynomial.
const NONPOLY_EXTRA: usize = 40;

/// Quadrature functional for a mode operator at one point s.
#[derive(Debug, Clone, Default)]
pub struct Functional {
    pub s: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub local: f64,
}

impl Functional {
    fn new(s: f64) -> Self {
        Functional { s, ..Default::default() }
    }

    pub fn apply(&self, f: &dyn RadialProfile) -> Complex64 {
        let mut acc = CompSumC::new();
        for (r, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(f.eval(*r) * *w);
        }
        if self.local != 0.0 {
            acc.add(f.eval(self.s) * self.local);
        }
        acc.value()
    }

    /// coef * int_0^1 t^p f(s t) dt, exact for f = r^m g(r^2), deg g <= d
    fn t_integral(&mut self, p: i32, coef: f64, m: u32, d: usize) {
        let deg = p.max(0) as usize + m as usize + 2 * d;
        let n = deg / 2 + 1;
        let rule = gauss_legendre(n);
        for (x, w) in rule.0.iter().zip(&rule.1) {
            let t = 0.5 * (1.0 + x);
            self.nodes.push(self.s * t);
            self.weights.push(coef * 0.5 * w * t.powi(p));
        }
    }

    /// coef * int_s^1 k(r) f(r) dr where k(r) r^m is a polynomial of degree
    /// `pow + m` in r when that is non-negative
    fn r_integral<K: Fn(f64) -> f64>(&mut self, pow: i32, kernel: K, coef: f64, m: u32, d: usize) {
        let e = pow + m as i32;
        let n = if e >= 0 {
            (e as usize + 2 * d) / 2 + 1
        } else {
            (2 * d + e.unsigned_abs() as usize) / 2 + 1 + NONPOLY_EXTRA
        };
        let rule = gauss_legendre(n);
        let h = 0.5 * (1.0 - self.s);
        for (x, w) in rule.0.iter().zip(&rule.1) {
            let r = self.s + h * (1.0 + x);
            self.nodes.push(r);
            self.weights.push(coef * h * w * kernel(r));
        }
    }
}

/// Functional for (T_l f)(s), f of vanishing order m and u-degree d.
pub fn tl_functional(l: i32, s: f64, m: u32, d: usize, form: TlForm) -> Functional {
    let mut fl = Functional::new(s);
    if l <= 0 {
        let k = (-l) as usize;
        let geo: f64 = (0..=k).map(|n| s.powi(2 * n as i32)).sum();
        // int_0^s (r/s)^{1-l} f dr = s int_0^1 t^{1-l} f(st) dt
        fl.t_integral(1 - l, -geo * s, m, d);
        if s < 1.0 {
            let c = 1.0 / (1.0 - s * s);
            fl.r_integral(1 - l, |r| (r * s).powi(1 - l), c, m, d);
        }
    } else if s < 1.0 {
        let c = 1.0 / (1.0 - s * s);
        match form {
            TlForm::KernelConsistent => fl.r_integral(1 - l, |r| (s / r).powi(l - 1), c, m, d),
            TlForm::PrintedMeasure | TlForm::PrintedZeroMode => {
                fl.r_integral(2 - l, |r| (s / r).powi(l - 1) * r, c, m, d)
            }
        }
    }
    fl
}

/// Functional for (B_l f)(s).
pub fn bl_functional(l: i32, s: f64, m: u32, d: usize, form: BlForm) -> Functional {
    let mut fl = Functional::new(s);
    let sign = match form {
        BlForm::KernelConsistent => 1.0,
        BlForm::Printed => -1.0,
    };
    if l == 0 {
        // -(2/s^2) int_0^s f r dr
        fl.t_integral(1, -2.0, m, d);
        fl.local = 1.0;
    } else if l < 0 {
        // -2(1-l) s^{l-2} int_0^s f r^{1-l} dr
        fl.t_integral(1 - l, -2.0 * (1 - l) as f64, m, d);
        fl.local = 1.0;
    } else {
        if l >= 2 {
            // -2(l-1) s^{l-2} int_s^1 f r^{1-l} dr
            fl.r_integral(1 - l, |r| (s / r).powi(l - 2) / r, -2.0 * (l - 1) as f64, m, d);
        }
        fl.local = sign;
    }
    fl
}

/// Functional for the mode l -> l-1 piece of the Cauchy transform.
pub fn cl_functional(l: i32, s: f64, m: u32, d: usize) -> Functional {
    let mut fl = Functional::new(s);
    if l <= 0 {
        // 2 s^{l-1} int_0^s f r^{1-l} dr
        fl.t_integral(1 - l, 2.0 * s, m, d);
    } else {
        // -2 s^{l-1} int_s^1 f r^{1-l} dr
        fl.r_integral(1 - l, |r| (s / r).powi(l - 1), -2.0, m, d);
    }
    fl
}

fn profile_shape(f: &dyn RadialProfile) -> (u32, usize) {
    (f.vanishing_order(), f.u_degree())
}

pub fn apply_tl(l: i32, f: &dyn RadialProfile, s: &[f64], form: TlForm) -> Vec<Complex64> {
    let (m, d) = profile_shape(f);
    s.iter().map(|&si| tl_functional(l, si, m, d, form).apply(f)).collect()
}

/// B_l applied at the points s. For l < 0 the profile must vanish to order |l|.
pub fn apply_bl(l: i32, f: &dyn RadialProfile, s: &[f64], form: BlForm) -> Result<Vec<Complex64>> {
    if l < 0 && !f.check_vanishing(l.unsigned_abs()) {
        return Err(DwError::VanishingOrder { l, order: f.vanishing_order() });
    }
    let (m, d) = profile_shape(f);
    Ok(s.iter().map(|&si| bl_functional(l, si, m, d, form).apply(f)).collect())
}

pub fn apply_cl(l: i32, f: &dyn RadialProfile, s: &[f64]) -> Vec<Complex64> {
    let (m, d) = profile_shape(f);
    s.iter().map(|&si| cl_functional(l, si, m, d).apply(f)).collect()
}
