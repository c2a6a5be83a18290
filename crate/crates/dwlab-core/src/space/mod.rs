//! The weighted Dirichlet space D_alpha: series types, norms, kernel and
//! multiplier compressions.

mod gap;
mod kernel;
mod multiplier;
mod norms;
mod series;

use serde::{Deserialize, Serialize};

use crate::error::{DwError, Result};

pub use gap::{gap_series, GapReport};
pub use kernel::{kernel_pairing, pick_coeffs, rk_eval, KernelValue};
pub use multiplier::{
    block_compression_norm, block_compression_norm_with, carleson_check, column_compression_norm, multiplier_compression_norm,
    integral_norm_exact, integral_norm_weights, multiplier_matrix, multiplier_matrix_with, schwarz_pick_check, CarlesonReport, MultiplierCompression, SchwarzPickReport,
};
pub use norms::{besov_boundary_norm, besov_constant, integral_norm, series_norm};
pub use series::{BiDegreeSeries, PowerSeries, TrigPoly, VectorSeries, TRIM_TOL};

/// Default slack for checks with a compression on the large side.
pub const DEFAULT_TAU: f64 = 0.05;

/// The exponent alpha in (0,1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct WeightParam(f64);

impl WeightParam {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(WeightParam(alpha))
        } else {
            Err(DwError::InvalidAlpha(alpha))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for WeightParam {
    type Error = DwError;
    fn try_from(v: f64) -> Result<Self> {
        WeightParam::new(v)
    }
}

impl From<WeightParam> for f64 {
    fn from(w: WeightParam) -> f64 {
        w.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_range() {
        assert!(WeightParam::new(1.0).is_ok());
        assert!(WeightParam::new(1e-9).is_ok());
        for bad in [0.0, -0.5, 1.5, f64::NAN, f64::INFINITY] {
            assert!(matches!(WeightParam::new(bad), Err(DwError::InvalidAlpha(_))));
        }
    }
}
