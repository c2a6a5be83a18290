//! Method of rotations: angular modes, the radial operators T_l and B_l,
//! their certified norms and the scalar Schur-test inequalities.

mod certify;
mod modes;
mod operators;
mod schur;

pub use certify::{
    certify_norm, certify_norm_with, certify_row, certify_sweep, operator_matrix, summarize, write_sweep_csv,
    CertifyRow, Family, OperatorForms, RadialOperator, SweepSummary, STABILITY_TOL,
};
pub use modes::{
    angular_decompose, decompose_samples, ring_coefficient, ModeBank, ModeSeries, PolyBasis, RadialPoly,
    RadialProfile, SampledProfile,
};
pub use operators::{
    apply_bl, apply_cl, apply_tl, bl_functional, cl_functional, tl_functional, BlForm, Functional, TlForm,
};
pub use schur::{j_integral, schur_witness_check, SchurClaim, SchurReport, SchurRow, GRID, L_MAX, SLACK};
