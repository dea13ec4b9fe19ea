use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("not a unit imaginary octonion (|I·I + 1| = {residual:e})")]
    NotUnitImaginary { residual: f64 },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("unit is not perpendicular to the slice (residual {residual:e})")]
    NotPerpendicular { residual: f64 },

    #[error("operands are not in a common quaternionic slice (residual {residual:e})")]
    NotInSlice { residual: f64 },

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("point too close to the boundary: distance {distance:e} < required {required:e}")]
    TooCloseToBoundary { distance: f64, required: f64 },

    #[error("kernel singularity: |ξ − q| = {distance:e}")]
    Singularity { distance: f64 },

    #[error("multi-index order {order} exceeds capacity {cap}")]
    Capacity { order: usize, cap: usize },

    #[error("function is not slice Dirac-regular (CF residual {residual:e} > {tolerance:e})")]
    NotRegular { residual: f64, tolerance: f64 },

    #[error("stem has no exact polynomial form: {0}")]
    NotPolynomial(String),

    #[error("stem JSON parse error in {location}: {message}")]
    StemParse { location: String, message: String },

    #[error("unknown stem `{name}`; registered: {available}")]
    UnknownStem { name: String, available: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
