//! Error type shared across the crate.

/// Errors raised by mesh construction, assembly, solves and scenario setup.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("mesh needs at least one interior node")]
    EmptyMesh,

    #[error("quadrature order must be at least 1, got {order}")]
    InvalidQuadratureOrder { order: usize },

    #[error("evaluation point {x} lies outside [0, 1]")]
    OutOfDomain { x: f64 },

    #[error("value vector has length {got}, mesh has {expected} interior nodes")]
    ValueLengthMismatch { expected: usize, got: usize },

    #[error("band lengths inconsistent: sub {sub}, diag {diag}, super {sup}, rhs {rhs}")]
    BandLengthMismatch {
        sub: usize,
        diag: usize,
        sup: usize,
        rhs: usize,
    },

    #[error("diagonal entry {value} at row {row} is not strictly positive")]
    NonPositiveDiagonal { row: usize, value: f64 },

    #[error("near-zero pivot {pivot:e} at row {row}")]
    NearZeroPivot { row: usize, pivot: f64 },

    #[error("coefficient {name}({x}, {mu}) = {value} violates [{lo}, {hi}]")]
    CoefficientOutOfBounds {
        name: &'static str,
        x: f64,
        mu: f64,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("subdomain ({a}, {b}) is empty or not contained in [0, 1]")]
    InvalidSubdomain { a: f64, b: f64 },

    #[error("exponent p = {p} must be at least 1")]
    InvalidExponent { p: f64 },

    #[error("homogeneity degree {p} must be positive")]
    InvalidHomogeneity { p: f64 },

    #[error("perturbation amplitude eps = {eps} must lie in [0, 1)")]
    InvalidPerturbation { eps: f64 },

    #[error("G is not positive on the requested range near mu = {mu}; coefficient undefined")]
    NonPositiveG { mu: f64 },

    #[error("normalization l(psi) = {value} must be positive")]
    NonPositiveNormalization { value: f64 },

    #[error("structural precondition violated: {0}")]
    StructureMismatch(&'static str),

    #[error("rate fit needs at least 3 usable records, got {got}")]
    TooFewRecords { got: usize },

    #[error("iteration did not converge: {status}")]
    NotConverged { status: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
