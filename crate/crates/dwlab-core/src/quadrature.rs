//! Quadrature on [0,1], the disk and the circle.
//!
//! Radial rules integrate against (1-r^2)^{1-alpha} r dr. With u = r^2 this is
//! (1/2)(1-u)^{1-alpha} du, a Jacobi weight, so the nodes come from the
//! Golub-Welsch eigenproblem of the Jacobi recurrence.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{DwError, Result};
use crate::linalg::tridiag_eigen_first;
use crate::numeric::{cis, ln_gamma, CompSum, CompSumC};
use crate::space::WeightParam;

/// Three-term recurrence of the Jacobi weight (1-x)^a (1+x)^b on [-1,1].
#[derive(Debug, Clone)]
pub struct JacobiFamily {
    pub a: f64,
    pub b: f64,
    /// diagonal recurrence coefficients alpha_0..alpha_{n-1}
    pub diag: Vec<f64>,
    /// sqrt(beta_k) for k = 1..n-1 (index k-1)
    pub off: Vec<f64>,
    /// total mass of the weight
    pub mu0: f64,
}

impl JacobiFamily {
    pub fn new(n: usize, a: f64, b: f64) -> Self {
        let ab = a + b;
        let mut diag = Vec::with_capacity(n);
        for k in 0..n {
            let kf = k as f64;
            let v = if k == 0 {
                (b - a) / (ab + 2.0)
            } else {
                (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            };
            diag.push(v);
        }
        let mut off = Vec::with_capacity(n.saturating_sub(1));
        for k in 1..n {
            let kf = k as f64;
            let beta = if k == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * kf + ab;
                4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            off.push(beta.sqrt());
        }
        let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(ab + 2.0))
        .exp();
        JacobiFamily { a, b, diag, off, mu0 }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Orthonormal polynomials p_0..p_{n-1} at x (orthonormal for the weight on [-1,1]).
    pub fn eval_orthonormal(&self, x: f64, out: &mut [f64]) {
        let n = out.len().min(self.len());
        if n == 0 {
            return;
        }
        out[0] = 1.0 / self.mu0.sqrt();
        if n == 1 {
            return;
        }
        out[1] = (x - self.diag[0]) * out[0] / self.off[0];
        for k in 1..n - 1 {
            out[k + 1] = ((x - self.diag[k]) * out[k] - self.off[k - 1] * out[k - 1]) / self.off[k];
        }
    }

    /// Gauss nodes and weights on [-1,1].
    pub fn gauss(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let (x, z) = tridiag_eigen_first(&self.diag, &self.off)?;
        let w = z.iter().map(|v| self.mu0 * v * v).collect();
        Ok((x, w))
    }
}

/// Gauss-Jacobi rule for (1-x)^a (1+x)^b on [-1,1].
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    JacobiFamily::new(n, a, b).gauss()
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

/// Cached Gauss-Legendre rule on [-1,1].
pub fn gauss_legendre(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("rule cache poisoned").get(&n) {
        return r.clone();
    }
    let (x, w) = gauss_jacobi(n, 0.0, 0.0).expect("Gauss-Legendre eigenproblem failed");
    // symmetrize: the rule is exactly symmetric
    let mut xs = x.clone();
    let mut ws = w.clone();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let xv = 0.5 * (x[j] - x[i]);
        let wv = 0.5 * (w[i] + w[j]);
        xs[i] = -xv;
        xs[j] = xv;
        ws[i] = wv;
        ws[j] = wv;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    let r = Arc::new((xs, ws));
    cache.lock().expect("rule cache poisoned").insert(n, r.clone());
    r
}

/// Integrate a smooth function on [a,b] with an n-point Gauss-Legendre rule.
pub fn gl_integrate<T, F>(f: F, a: f64, b: f64, n: usize) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
    F: Fn(f64) -> T,
{
    let rule = gauss_legendre(n);
    let (x, w) = (&rule.0, &rule.1);
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    let mut acc = T::default();
    for i in 0..x.len() {
        acc = acc + f(c + h * x[i]) * (w[i] * h);
    }
    acc
}

/// Radial rule for (1-r^2)^{1-alpha} r dr on (0,1).
#[derive(Debug, Clone)]
pub struct RadialRule {
    pub alpha: WeightParam,
    pub nodes: Vec<f64>,
    /// u_i = r_i^2
    pub u: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest k such that r^{2k} is integrated exactly.
    pub fn exactness(&self) -> usize {
        2 * self.len() - 1
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut s = CompSum::new();
        for (r, w) in self.nodes.iter().zip(&self.weights) {
            s.add(w * f(*r));
        }
        s.value()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["r_i", "w_i"])?;
        for (r, w) in self.nodes.iter().zip(&self.weights) {
            wtr.write_record([format!("{r:.16e}"), format!("{w:.16e}")])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn build_radial_rule(alpha: WeightParam, n_r: usize) -> Result<RadialRule> {
    if n_r < 4 {
        return Err(DwError::InvalidArgument(format!("radial rule needs n_r >= 4, got {n_r}")));
    }
    let a = 1.0 - alpha.value();
    let (x, wx) = gauss_jacobi(n_r, a, 0.0)?;
    // int_0^1 g(u)(1-u)^a du = 2^{-a-1} int g((x+1)/2) (1-x)^a dx, and the
    // radial measure is half of (1-u)^a du.
    let scale = 0.5 * 2f64.powf(-a - 1.0);
    let mut u = Vec::with_capacity(n_r);
    let mut nodes = Vec::with_capacity(n_r);
    let mut weights = Vec::with_capacity(n_r);
    for (xi, wi) in x.iter().zip(&wx) {
        let ui = 0.5 * (xi + 1.0);
        u.push(ui);
        nodes.push(ui.sqrt());
        weights.push(scale * wi);
    }
    if nodes.iter().any(|&r| !(r > 0.0 && r < 1.0)) || weights.iter().any(|&w| !(w > 0.0)) {
        return Err(DwError::QuadratureInconsistent(format!(
            "radial rule n_r = {n_r} produced boundary nodes or non-positive weights"
        )));
    }
    Ok(RadialRule { alpha, nodes, u, weights })
}

/// Tensor rule on the disk: radial Gauss nodes times a uniform angular grid.
#[derive(Debug, Clone)]
pub struct DiskRule {
    pub radial: RadialRule,
    /// Same size rule for the unweighted measure r dr (alpha = 1).
    pub plain: RadialRule,
    pub m: usize,
}

impl DiskRule {
    pub fn alpha(&self) -> WeightParam {
        self.radial.alpha
    }

    pub fn n_r(&self) -> usize {
        self.radial.len()
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.m as f64
    }

    fn radial_for(&self, weighted: bool) -> &RadialRule {
        if weighted {
            &self.radial
        } else {
            &self.plain
        }
    }

    /// Grid points in ring-major order (all angles of ring 0, then ring 1, ...).
    pub fn points(&self, weighted: bool) -> Vec<Complex64> {
        let rad = self.radial_for(weighted);
        let mut pts = Vec::with_capacity(rad.len() * self.m);
        for &r in &rad.nodes {
            for j in 0..self.m {
                pts.push(cis(self.theta(j)) * r);
            }
        }
        pts
    }

    /// Boundary circle points e^{i theta_j}.
    pub fn circle_points(&self) -> Vec<Complex64> {
        (0..self.m).map(|j| cis(self.theta(j))).collect()
    }
}

pub fn build_disk_rule(alpha: WeightParam, n_r: usize, m: usize) -> Result<DiskRule> {
    if m < 1 {
        return Err(DwError::InvalidArgument("angular count must be positive".into()));
    }
    let radial = build_radial_rule(alpha, n_r)?;
    let plain = if alpha.value() == 1.0 {
        radial.clone()
    } else {
        build_radial_rule(WeightParam::new(1.0)?, n_r)?
    };
    Ok(DiskRule { radial, plain, m })
}

/// Integral of f over the disk against dA_alpha (weighted) or planar dA.
pub fn integrate_disk<F: Fn(Complex64) -> Complex64>(f: F, rule: &DiskRule, weighted: bool) -> Complex64 {
    let rad = rule.radial_for(weighted);
    let dth = 2.0 * PI / rule.m as f64;
    let mut acc = CompSumC::new();
    for (r, w) in rad.nodes.iter().zip(&rad.weights) {
        let mut ring = CompSumC::new();
        for j in 0..rule.m {
            ring.add(f(cis(rule.theta(j)) * *r));
        }
        acc.add(ring.value() * (w * dth));
    }
    acc.value()
}

/// Same as `integrate_disk` for samples laid out as `rule.points(weighted)`.
pub fn integrate_samples(values: &[Complex64], rule: &DiskRule, weighted: bool) -> Complex64 {
    let rad = rule.radial_for(weighted);
    assert_eq!(values.len(), rad.len() * rule.m, "sample count does not match the rule");
    let dth = 2.0 * PI / rule.m as f64;
    let mut acc = CompSumC::new();
    for (i, w) in rad.weights.iter().enumerate() {
        let ring = crate::numeric::csum_c(values[i * rule.m..(i + 1) * rule.m].iter().cloned());
        acc.add(ring * (w * dth));
    }
    acc.value()
}

/// Integral of f over the circle against d sigma = dt/2pi with M points.
pub fn integrate_circle<F: Fn(Complex64) -> Complex64>(f: F, m: usize) -> Complex64 {
    let mut acc = CompSumC::new();
    for j in 0..m {
        acc.add(f(cis(2.0 * PI * j as f64 / m as f64)));
    }
    acc.value() / m as f64
}

/// Refinement family for `refine_until`.
#[derive(Debug, Clone, Copy)]
pub struct RuleFamily {
    pub alpha: WeightParam,
    pub n_r: usize,
    pub m: usize,
    pub weighted: bool,
    pub max_n_r: usize,
}

impl RuleFamily {
    pub fn new(alpha: WeightParam) -> Self {
        RuleFamily { alpha, n_r: 8, m: 16, weighted: true, max_n_r: 2048 }
    }
}

#[derive(Debug, Clone)]
pub struct Refined {
    pub value: Complex64,
    pub gap: f64,
    pub n_r: usize,
    pub m: usize,
    pub iterates: Vec<f64>,
    pub gaps: Vec<f64>,
}

/// Doubles n_r and M until successive values agree to `tol` relatively.
pub fn refine_until<F: Fn(Complex64) -> Complex64>(f: F, family: RuleFamily, tol: f64) -> Result<Refined> {
    if !(tol > 0.0) {
        return Err(DwError::InvalidArgument("tolerance must be positive".into()));
    }
    let mut n_r = family.n_r.max(4);
    let mut m = family.m.max(1);
    let mut prev: Option<Complex64> = None;
    let mut iterates = Vec::new();
    let mut gaps = Vec::new();
    while n_r <= family.max_n_r {
        let rule = build_disk_rule(family.alpha, n_r, m)?;
        let v = integrate_disk(&f, &rule, family.weighted);
        iterates.push(v.norm());
        if let Some(p) = prev {
            let scale = v.norm().max(p.norm());
            let gap = if scale == 0.0 { 0.0 } else { (v - p).norm() / scale };
            gaps.push(gap);
            if gap <= tol {
                return Ok(Refined { value: v, gap, n_r, m, iterates, gaps });
            }
        }
        prev = Some(v);
        n_r *= 2;
        m *= 2;
    }
    Err(DwError::NonConvergence { tol, iterates })
}

/// Adaptive Gauss-Kronrod (7,15) on [a,b].
pub fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    const XK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_4,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_5,
        0.0,
    ];
    const WK: [f64; 8] = [
        0.022_935_322_010_529_22,
        0.063_092_092_629_978_55,
        0.104_790_010_322_250_2,
        0.140_653_259_715_525_9,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_4,
        0.204_432_940_075_298_9,
        0.209_482_141_084_728_0,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_7,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];
    let seg = |lo: f64, hi: f64| -> (f64, f64) {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let fc = f(c);
        let mut k = WK[7] * fc;
        let mut g = WG[3] * fc;
        for i in 0..7 {
            let d = h * XK[i];
            let s = f(c - d) + f(c + d);
            k += WK[i] * s;
            if i % 2 == 1 {
                g += WG[i / 2] * s;
            }
        }
        (k * h, ((k - g) * h).abs())
    };
    let mut stack = vec![(a, b, 0u32)];
    let mut total = CompSum::new();
    let mut err = 0.0;
    let whole = seg(a, b).0.abs();
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = seg(lo, hi);
        let target = abs_tol.max(rel_tol * whole) * (hi - lo) / (b - a);
        if e <= target || depth >= 48 || hi - lo < 1e-15 * (b - a).abs() {
            total.add(v);
            err += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    (total.value(), err)
}

/// int_a^b g(x) (b-x)^e dx for e > -1, via b - x = (b-a) t^{1/(e+1)}.
pub fn integrate_right_power<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64, e: f64, rel_tol: f64) -> f64 {
    let len = b - a;
    if len <= 0.0 {
        return 0.0;
    }
    let p = 1.0 / (e + 1.0);
    let h = |t: f64| g(b - len * t.powf(p));
    let (v, _) = adaptive_gk(&h, 0.0, 1.0, 0.0, rel_tol);
    v * len.powf(e + 1.0) / (e + 1.0)
}
