//! Numerics for weighted Dirichlet spaces D_alpha on the unit disk.

pub mod corpus;
pub mod error;
pub mod io;
pub mod koszul;
pub mod linalg;
pub mod numeric;
pub mod quadrature;
pub mod rotation;
pub mod space;
pub mod transforms;
pub mod wolff;

pub use error::{DwError, Result};
pub use space::WeightParam;
