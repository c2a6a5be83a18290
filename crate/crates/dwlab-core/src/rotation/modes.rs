//! Angular modes f(r e^{i theta}) = sum_l f_l(r) e^{i l theta}.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::Result;
use crate::numeric::{cis, csum, CompSumC};
use crate::quadrature::RadialRule;
use crate::space::{BiDegreeSeries, WeightParam};

/// A radial profile of the form r^m g(r^2), g a polynomial.
pub trait RadialProfile: Sync {
    fn eval(&self, r: f64) -> Complex64;
    /// declared vanishing order m at the origin
    fn vanishing_order(&self) -> u32;
    /// degree of g in u = r^2
    fn u_degree(&self) -> usize;
    /// numerical check that the profile vanishes to `order` at 0
    fn check_vanishing(&self, order: u32) -> bool {
        self.vanishing_order() >= order
    }
}

/// Basis used for the polynomial factor g(u).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyBasis {
    /// g(u) = sum c_k u^k
    Monomial,
    /// g(u) = sum c_k P_k(2u - 1), shifted Legendre
    Legendre,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialPoly {
    pub m: u32,
    pub basis: PolyBasis,
    pub coeffs: Vec<Complex64>,
}

impl RadialPoly {
    pub fn monomial(m: u32, coeffs: Vec<Complex64>) -> Self {
        RadialPoly { m, basis: PolyBasis::Monomial, coeffs }
    }

    pub fn legendre(m: u32, coeffs: Vec<Complex64>) -> Self {
        RadialPoly { m, basis: PolyBasis::Legendre, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    fn g(&self, u: f64) -> Complex64 {
        match self.basis {
            PolyBasis::Monomial => self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |a, c| a * u + c),
            PolyBasis::Legendre => {
                let x = 2.0 * u - 1.0;
                let mut acc = CompSumC::new();
                let (mut p0, mut p1) = (1.0, x);
                for (k, c) in self.coeffs.iter().enumerate() {
                    let pk = match k {
                        0 => 1.0,
                        1 => x,
                        _ => {
                            let kf = k as f64;
                            let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                            p0 = p1;
                            p1 = p2;
                            p2
                        }
                    };
                    acc.add(c * pk);
                }
                acc.value()
            }
        }
    }
}

impl RadialProfile for RadialPoly {
    fn eval(&self, r: f64) -> Complex64 {
        self.g(r * r) * r.powi(self.m as i32)
    }
    fn vanishing_order(&self) -> u32 {
        self.m
    }
    fn u_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Exact mode representation of a bi-degree polynomial.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModeSeries {
    pub modes: BTreeMap<i32, RadialPoly>,
}

impl ModeSeries {
    /// Regroup a_{jk} z^j zbar^k by l = j - k: r^{j+k} = r^{|l|} u^{min(j,k)}.
    pub fn from_bidegree(f: &BiDegreeSeries) -> Self {
        let mut modes: BTreeMap<i32, RadialPoly> = BTreeMap::new();
        for (j, k, c) in f.terms() {
            let l = j as i32 - k as i32;
            let idx = j.min(k) as usize;
            let p = modes
                .entry(l)
                .or_insert_with(|| RadialPoly::monomial(l.unsigned_abs(), vec![]));
            if p.coeffs.len() <= idx {
                p.coeffs.resize(idx + 1, Complex64::new(0.0, 0.0));
            }
            p.coeffs[idx] += c;
        }
        ModeSeries { modes }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let r = z.norm();
        let th = z.arg();
        let mut acc = CompSumC::new();
        for (&l, p) in &self.modes {
            acc.add(p.eval(r) * cis(l as f64 * th));
        }
        acc.value()
    }

    pub fn sample(&self, rule: &Arc<RadialRule>) -> ModeBank {
        let modes = self
            .modes
            .iter()
            .map(|(&l, p)| (l, rule.nodes.iter().map(|&r| p.eval(r)).collect()))
            .collect();
        ModeBank { alpha: rule.alpha, rule: rule.clone(), modes }
    }
}

/// Per-mode radial profiles sampled at the nodes of a radial rule.
#[derive(Debug, Clone)]
pub struct ModeBank {
    pub alpha: WeightParam,
    pub rule: Arc<RadialRule>,
    pub modes: BTreeMap<i32, Vec<Complex64>>,
}

impl ModeBank {
    /// sum_l ||f_l||^2 in L^2_alpha[0,1]
    pub fn energy(&self) -> f64 {
        csum(self.modes.values().map(|v| self.mode_energy_of(v)))
    }

    pub fn mode_energy(&self, l: i32) -> f64 {
        self.modes.get(&l).map_or(0.0, |v| self.mode_energy_of(v))
    }

    fn mode_energy_of(&self, v: &[Complex64]) -> f64 {
        csum(v.iter().zip(&self.rule.weights).map(|(f, w)| w * f.norm_sqr()))
    }

    /// Energy carried by modes l < 0.
    pub fn negative_energy(&self) -> f64 {
        csum(self.modes.range(..0).map(|(_, v)| self.mode_energy_of(v)))
    }

    /// sum_l f_l(r_i) e^{i l theta} at ring i
    pub fn synthesize(&self, ring: usize, theta: f64) -> Complex64 {
        let mut acc = CompSumC::new();
        for (&l, v) in &self.modes {
            acc.add(v[ring] * cis(l as f64 * theta));
        }
        acc.value()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["l", "r_i", "re", "im"])?;
        for (&l, v) in &self.modes {
            for (r, f) in self.rule.nodes.iter().zip(v) {
                wtr.write_record([
                    l.to_string(),
                    format!("{r:.16e}"),
                    format!("{:.16e}", f.re),
                    format!("{:.16e}", f.im),
                ])?;
            }
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Exact regrouping of f by angular mode, profiles sampled at the rule nodes.
pub fn angular_decompose(f: &BiDegreeSeries, rule: &Arc<RadialRule>) -> ModeBank {
    ModeSeries::from_bidegree(f).sample(rule)
}

/// Mode decomposition of ring samples (ring-major, M angles per ring) by FFT.
/// Modes are reported for |l| < M/2; the Nyquist mode is split evenly.
pub fn decompose_samples(values: &[Complex64], m: usize, rule: &Arc<RadialRule>) -> ModeBank {
    let n_r = rule.len();
    assert_eq!(values.len(), n_r * m, "sample count does not match rule");
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(m);
    let mut modes: BTreeMap<i32, Vec<Complex64>> = BTreeMap::new();
    let half = (m / 2) as i32;
    let lo = -(half - if m % 2 == 0 { 0 } else { 0 });
    for l in lo..=half {
        if m % 2 == 0 && l == half {
            continue;
        }
        modes.insert(l, vec![Complex64::new(0.0, 0.0); n_r]);
    }
    for i in 0..n_r {
        let mut buf: Vec<Complex64> = values[i * m..(i + 1) * m].to_vec();
        fft.process(&mut buf);
        for (&l, v) in modes.iter_mut() {
            let idx = l.rem_euclid(m as i32) as usize;
            let mut c = buf[idx] / m as f64;
            if m % 2 == 0 && l.abs() == half {
                c *= 0.5;
            }
            v[i] = c;
        }
    }
    ModeBank { alpha: rule.alpha, rule: rule.clone(), modes }
}

/// Profile known only by samples at the nodes of a radial rule; evaluated by
/// barycentric interpolation of f(r)/r^{|l|} in u = r^2.
#[derive(Debug, Clone)]
pub struct SampledProfile {
    pub l: i32,
    u: Vec<f64>,
    r: Vec<f64>,
    values: Vec<Complex64>,
    g: Vec<Complex64>,
    bary: Vec<f64>,
}

impl SampledProfile {
    pub fn new(l: i32, rule: &RadialRule, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), rule.len());
        let m = l.unsigned_abs() as i32;
        let g = values.iter().zip(&rule.nodes).map(|(v, r)| v / r.powi(m)).collect();
        let n = rule.len();
        let logs: Vec<(f64, f64)> = (0..n)
            .map(|i| {
                let mut lg = 0.0;
                let mut sign = 1.0;
                for j in 0..n {
                    if i != j {
                        let d = rule.u[i] - rule.u[j];
                        lg -= d.abs().ln();
                        if d < 0.0 {
                            sign = -sign;
                        }
                    }
                }
                (lg, sign)
            })
            .collect();
        let mx = logs.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
        let bary = logs.iter().map(|(lg, s)| s * (lg - mx).exp()).collect();
        SampledProfile { l, u: rule.u.clone(), r: rule.nodes.clone(), values, g, bary }
    }

    /// Local power-law order estimated from the two innermost samples.
    pub fn observed_order(&self) -> f64 {
        let (a, b) = (self.values[0].norm(), self.values[1].norm());
        if a == 0.0 {
            return f64::INFINITY;
        }
        (b / a).ln() / (self.r[1] / self.r[0]).ln()
    }
}

impl RadialProfile for SampledProfile {
    fn eval(&self, r: f64) -> Complex64 {
        let u = r * r;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for i in 0..self.u.len() {
            let d = u - self.u[i];
            if d == 0.0 {
                return self.values[i] * (r / self.r[i]).powi(self.l.unsigned_abs() as i32);
            }
            let t = self.bary[i] / d;
            num += self.g[i] * t;
            den += t;
        }
        num / den * r.powi(self.l.unsigned_abs() as i32)
    }
    fn vanishing_order(&self) -> u32 {
        self.l.unsigned_abs()
    }
    fn u_degree(&self) -> usize {
        self.u.len() - 1
    }
    fn check_vanishing(&self, order: u32) -> bool {
        self.observed_order() >= order as f64 - 0.5
    }
}

/// Mode-l Fourier coefficient of f on the circle of radius r by trapezoid.
pub fn ring_coefficient<F: Fn(Complex64) -> Complex64>(f: F, r: f64, l: i32, m: usize) -> Complex64 {
    let mut acc = CompSumC::new();
    for j in 0..m {
        let th = 2.0 * PI * j as f64 / m as f64;
        acc.add(f(cis(th) * r) * cis(-(l as f64) * th));
    }
    acc.value() / m as f64
}
