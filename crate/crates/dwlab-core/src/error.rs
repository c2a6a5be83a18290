use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DwError {
    #[error("alpha = {0} is outside (0,1]")]
    InvalidAlpha(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("tridiagonal eigenproblem did not converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("refinement did not reach tolerance {tol:e}; iterates {iterates:?}")]
    NonConvergence { tol: f64, iterates: Vec<f64> },

    #[error("power iteration stalled after {iterations} iterations; last Rayleigh quotients {last:?}")]
    PowerIterationStall { iterations: usize, last: Vec<f64> },

    #[error("evaluation point {re}+{im}i is not inside the open unit disk")]
    PointOutsideDisk { re: f64, im: f64 },

    #[error("radial profile for mode {l} does not vanish to order {order} at the origin")]
    VanishingOrder { l: i32, order: u32 },

    #[error("quadrature self-consistency check failed: {0}")]
    QuadratureInconsistent(String),

    #[error("rule built for alpha = {rule} used with alpha = {requested}")]
    AlphaMismatch { rule: f64, requested: f64 },

    #[error("H vanishes on the whole search grid")]
    AllZeroH,

    #[error("degenerate tuple: min FF* = {delta:e} is below the floor {floor:e}")]
    DegenerateF { delta: f64, floor: f64 },

    #[error("Wolff hypothesis |H|^2 <= FF* fails on the grid (worst excess {excess:e})")]
    WolffHypothesis { excess: f64 },

    #[error("bi-degree fit residual {residual:e} exceeds tolerance {tol:e} at degree {degree}")]
    FitResidualTooLarge { residual: f64, tol: f64, degree: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, DwError>;

impl From<std::io::Error> for DwError {
    fn from(e: std::io::Error) -> Self {
        DwError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for DwError {
    fn from(e: serde_json::Error) -> Self {
        DwError::Parse(e.to_string())
    }
}

impl From<csv::Error> for DwError {
    fn from(e: csv::Error) -> Self {
        DwError::Io(e.to_string())
    }
}
