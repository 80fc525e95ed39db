//! Exact computation of conservation laws of the elliptic equation `u_{z zbar} = -f(u)`.

pub mod conslaw;
pub mod error;
pub mod forms;
pub mod jetring;
pub mod linalg;
pub mod numcheck;
pub mod operators;
pub mod psrecursion;
pub mod scalar;
pub mod symmetry;

pub use error::{Error, ParseError, Result};
pub use jetring::{parse_expr, render, DiffPoly, Format, Monomial, PotentialModel, VarId, Wd};
pub use scalar::GaussScalar;
