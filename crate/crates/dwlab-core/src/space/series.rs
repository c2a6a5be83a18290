use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Coefficients below this modulus are structural zeros.
pub const TRIM_TOL: f64 = 1e-300;

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Analytic polynomial sum a_n z^n.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        for c in coeffs.iter_mut() {
            if c.norm() < TRIM_TOL {
                *c = czero();
            }
        }
        while coeffs.last().is_some_and(|c| *c == czero()) {
            coeffs.pop();
        }
        PowerSeries { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        PowerSeries { coeffs: vec![] }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(n: usize, c: Complex64) -> Self {
        let mut v = vec![czero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_else(czero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero series has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(czero(), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c * n as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    /// Exact coefficient convolution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![czero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn truncate(&self, degree: usize) -> Self {
        Self::new(self.coeffs.iter().take(degree + 1).cloned().collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(Complex64::new(1.0, 0.0));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Smooth function sum a_{jk} z^j zbar^k on the closed disk.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiDegreeSeries {
    coeffs: BTreeMap<(u32, u32), Complex64>,
}

impl BiDegreeSeries {
    pub fn new<I: IntoIterator<Item = ((u32, u32), Complex64)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (jk, c) in terms {
            *coeffs.entry(jk).or_insert_with(czero) += c;
        }
        coeffs.retain(|_, c: &mut Complex64| c.norm() >= TRIM_TOL);
        BiDegreeSeries { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(j: u32, k: u32, c: Complex64) -> Self {
        Self::new([((j, k), c)])
    }

    pub fn from_power_series(f: &PowerSeries) -> Self {
        Self::new(f.coeffs().iter().enumerate().map(|(j, c)| ((j as u32, 0), *c)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        self.coeffs.iter().map(|(&(j, k), &c)| (j, k, c))
    }

    pub fn coeff(&self, j: u32, k: u32) -> Complex64 {
        self.coeffs.get(&(j, k)).copied().unwrap_or_else(czero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// max (j + k) over the support
    pub fn total_degree(&self) -> u32 {
        self.coeffs.keys().map(|(j, k)| j + k).max().unwrap_or(0)
    }

    /// The k = 0 slice is the whole series.
    pub fn is_analytic(&self) -> bool {
        self.coeffs.keys().all(|&(_, k)| k == 0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        let mut acc = czero();
        for (&(j, k), c) in &self.coeffs {
            acc += c * z.powu(j) * zb.powu(k);
        }
        acc
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|(&jk, c)| (jk, c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coeffs.iter().chain(other.coeffs.iter()).map(|(&jk, &c)| (jk, c)))
    }
}

/// Finite tuple (f_1, ..., f_n) of analytic polynomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VectorSeries {
    pub components: Vec<PowerSeries>,
}

impl VectorSeries {
    pub fn new(components: Vec<PowerSeries>) -> Self {
        VectorSeries { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn eval(&self, z: Complex64) -> Vec<Complex64> {
        self.components.iter().map(|f| f.eval(z)).collect()
    }

    pub fn derivative(&self) -> Self {
        VectorSeries::new(self.components.iter().map(|f| f.derivative()).collect())
    }

    /// F(z) F(z)^* = sum |f_j(z)|^2
    pub fn ffstar(&self, z: Complex64) -> f64 {
        crate::numeric::csum(self.components.iter().map(|f| f.eval(z).norm_sqr()))
    }

    pub fn max_degree(&self) -> usize {
        self.components.iter().map(|f| f.degree()).max().unwrap_or(0)
    }
}

/// Trigonometric polynomial sum a_n e^{int}.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly {
    pub coeffs: BTreeMap<i32, Complex64>,
}

impl TrigPoly {
    pub fn new<I: IntoIterator<Item = (i32, Complex64)>>(terms: I) -> Self {
        let mut coeffs = BTreeMap::new();
        for (n, c) in terms {
            *coeffs.entry(n).or_insert_with(czero) += c;
        }
        coeffs.retain(|_, c: &mut Complex64| c.norm() >= TRIM_TOL);
        TrigPoly { coeffs }
    }

    pub fn from_power_series(f: &PowerSeries) -> Self {
        Self::new(f.coeffs().iter().enumerate().map(|(n, c)| (n as i32, *c)))
    }

    pub fn max_mode(&self) -> u32 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, c)| c * crate::numeric::cis(n as f64 * t))
            .fold(czero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trimming_and_degree() {
        let f = PowerSeries::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-301, 0.0), c(0.0, 0.0)]);
        assert_eq!(f.degree(), 1);
        assert_eq!(PowerSeries::zero().degree(), 0);
        assert!(PowerSeries::new(vec![c(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn evaluation_and_algebra() {
        let f = PowerSeries::from_real(&[1.0, 2.0, 3.0]);
        let z = c(0.3, -0.2);
        assert!((f.eval(z) - (1.0 + z * 2.0 + z * z * 3.0)).norm() < 1e-15);
        assert_eq!(f.derivative(), PowerSeries::from_real(&[2.0, 6.0]));
        let g = f.mul(&f);
        assert!((g.eval(z) - f.eval(z) * f.eval(z)).norm() < 1e-14);
        assert!((f.pow(3).eval(z) - f.eval(z).powu(3)).norm() < 1e-13);
    }

    #[test]
    fn bidegree_embeds_power_series() {
        let f = PowerSeries::from_real(&[0.5, -1.0, 0.25]);
        let b = BiDegreeSeries::from_power_series(&f);
        assert!(b.is_analytic());
        let z = c(-0.4, 0.1);
        assert!((b.eval(z) - f.eval(z)).norm() < 1e-15);
        let m = BiDegreeSeries::monomial(2, 1, c(1.0, 0.0));
        assert!((m.eval(z) - z * z * z.conj()).norm() < 1e-15);
    }
}
