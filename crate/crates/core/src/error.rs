use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("not a solution of the linearized equation: E(P) = {residual}")]
    NotInKernel { residual: String },
    #[error("polynomial is not weighted-homogeneous of degree {expected}")]
    NotHomogeneous { expected: i64 },
    #[error("polynomial depends on z or zbar explicitly")]
    ExplicitZ,
    #[error("generating function mixes holomorphic and antiholomorphic jets or depends on u: symmetry without conservation law")]
    NotMixedFree,
    #[error("degree {0} is not supported here")]
    UnsupportedDegree(i64),
    #[error("degree must be nonzero; use the classical weight-zero law")]
    ZeroDegree,
    #[error("symmetry depth {depth} too small to check index {index}")]
    InsufficientDepth { depth: usize, index: usize },
    #[error("form of degree {0} where a 1-form is required")]
    FormDegree(usize),
    #[error("index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("numeric integration diverged at step {step} (x = {x})")]
    Diverged { step: usize, x: f64 },
    #[error("invalid numeric setup: {0}")]
    BadSetup(String),
}

pub type Result<T> = std::result::Result<T, Error>;
