use serde::Serialize;

use crate::numeric::csum;

use super::WeightParam;

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub m: u32,
    pub alpha: f64,
    pub n: usize,
    /// sum_{n<=N} n^{-2 m alpha}, bounds the sup norm of the truncation
    pub sup_bound: f64,
    /// D_alpha series norm of the truncation
    pub series_norm: f64,
}

/// Truncations of sum z^{n^{4m+1}} / n^{2 m alpha}. The series is never
/// materialized (its degrees overflow); both quantities are closed-form sums.
/// m = 0 selects floor(1/alpha) + 1.
pub fn gap_series(m: u32, alpha: WeightParam, n: usize) -> GapReport {
    let a = alpha.value();
    let m = if m == 0 { (1.0 / a).floor() as u32 + 1 } else { m };
    let p = (4 * m + 1) as f64;
    let q = 2.0 * m as f64 * a;
    let sup_bound = csum((1..=n).map(|k| (k as f64).powf(-q)));
    // (deg+1)^alpha |coef|^2 with deg = k^p, computed in logs
    let sq = csum((1..=n).map(|k| {
        let lk = (k as f64).ln();
        let log_deg1 = p * lk + (-p * lk).exp().ln_1p();
        (a * log_deg1 - 2.0 * q * lk).exp()
    }));
    GapReport { m, alpha: a, n, sup_bound, series_norm: sq.sqrt() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_term() {
        for &a in &[0.3, 1.0] {
            let r = gap_series(0, WeightParam::new(a).unwrap(), 1);
            assert_eq!(r.sup_bound, 1.0);
            assert!((r.series_norm - 2f64.powf(a / 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn standard_choice_of_m() {
        assert_eq!(gap_series(0, WeightParam::new(1.0).unwrap(), 1).m, 2);
        assert_eq!(gap_series(0, WeightParam::new(0.25).unwrap(), 1).m, 5);
        assert_eq!(gap_series(0, WeightParam::new(0.3).unwrap(), 1).m, 4);
    }

    #[test]
    fn partial_sum_oracle() {
        let r = gap_series(2, WeightParam::new(1.0).unwrap(), 50);
        let direct: f64 = (1..=50).map(|n| { let n = n as f64; (n.powi(9) + 1.0) / n.powi(8) }).sum();
        assert!((r.series_norm.powi(2) - direct).abs() < 1e-12 * direct);
        assert!(r.series_norm.powi(2) >= 50.0 * 51.0 / 2.0);
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!(r.sup_bound <= zeta4);
    }
}
