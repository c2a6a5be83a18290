use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dwlab_core::corpus::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "dwlab", version, about = "Weighted Dirichlet space numerics: certification, solves and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify sigma_max of the mode operators T_l and B_l against their bounds
    Certify(CertifyArgs),
    /// Solve F u = H^3 h for a JSON instance and verify the solution
    Solve(SolveArgs),
    /// Space checks: pick, gap, carleson, schwarz-pick, equivalence
    Space(SpaceArgs),
    /// Apply the Cauchy or Beurling transform, the operator T or the Poisson extension
    Transform(TransformArgs),
    /// Self-checks of the disk quadrature rules
    Quadcheck(QuadArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// write the report here instead of stdout
    #[arg(long = "out")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BForm {
    Kernel,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TForm {
    Kernel,
    PrintedMeasure,
    PrintedZeroMode,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CertifyArgs {
    /// operator families, T and/or B
    #[arg(long, value_delimiter = ',', default_value = "T,B")]
    pub family: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 64)]
    pub lmax: i32,
    /// discretization size; each row is also computed at 2 n_r
    #[arg(long = "nr", default_value_t = 64)]
    pub n_r: usize,
    #[arg(long, value_enum, default_value = "kernel")]
    pub b_form: BForm,
    #[arg(long, value_enum, default_value = "kernel")]
    pub t_form: TForm,
    /// also run the nine Schur witness checks for each alpha
    #[arg(long)]
    pub schur: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    /// instance JSON: {"alpha", "F", "H", "h", "options"}
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "nr")]
    pub n_r: Option<usize>,
    #[arg(long)]
    pub angular: Option<usize>,
    #[arg(long)]
    pub trunc: Option<usize>,
    /// fit residual tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// precompose with a disk automorphism so that H(0) != 0
    #[arg(long)]
    pub mobius: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpaceArgs {
    #[arg(long, value_delimiter = ',', default_value = "pick,gap,carleson,schwarz-pick,equivalence")]
    pub check: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
    pub alpha: Vec<f64>,
    /// truncation for pick coefficients and the gap series
    #[arg(long = "N", default_value_t = 200)]
    pub n: usize,
    /// compression degree for multiplier norms
    #[arg(long, default_value_t = 32)]
    pub trunc: usize,
    #[arg(long = "nr", default_value_t = 32)]
    pub n_r: usize,
    #[arg(long, default_value_t = 64)]
    pub angular: usize,
    #[arg(long, default_value_t = 0.05)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// multiplier corpus; only "default" exists
    #[arg(long, default_value = "default")]
    pub corpus: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformOp {
    Cauchy,
    Beurling,
    T,
    Poisson,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub op: TransformOp,
    /// {"terms": [...]} for cauchy/beurling/t, {"modes": [...]} for poisson
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long = "nr", default_value_t = 48)]
    pub n_r: usize,
    #[arg(long, default_value_t = 128)]
    pub angular: usize,
    /// bound on the dbar residual of the Cauchy transform at step 1e-4
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "kernel")]
    pub b_form: BForm,
    #[arg(long, value_enum, default_value = "kernel")]
    pub t_form: TForm,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
    pub alpha: Vec<f64>,
    #[arg(long = "nr", default_value_t = 64)]
    pub n_r: usize,
    #[arg(long, default_value_t = 256)]
    pub angular: usize,
    /// target for the refinement check on |z|^(1/2)
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// also write the radial rule (r_i, w_i) of the first alpha here
    #[arg(long)]
    pub rule_csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Everything a run depends on; reports embed it verbatim.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig<'a, T: Serialize> {
    pub command: &'static str,
    pub settings: &'a T,
}
