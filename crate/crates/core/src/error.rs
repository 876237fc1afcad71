use thiserror::Error;

/// Errors raised by the focusing toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("zero-length or zero-norm vector")]
    ZeroVector,

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    /// The Gram is numerically singular: crosstalk is maximised at some control point.
    #[error("singular Gram: gramian / Hadamard bound = {ratio:e}")]
    SingularGram { ratio: f64 },

    #[error("Jacobi eigendecomposition did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("coincident points (distance {distance:e} m)")]
    CoincidentPoints { distance: f64 },

    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible geometry: {0}")]
    Infeasible(String),

    #[error("system is not in an ideal focusing state: {0}")]
    NotIdeal(String),

    /// Branch index excluded because it lands on a grating lobe (`n = zL`).
    #[error("excluded branch n = {n}: multiple of L = {l}")]
    ExcludedBranch { n: i64, l: usize },

    #[error("arcsine domain violated: |{value}| > 1 ({context})")]
    ArcsineDomain { value: f64, context: String },

    #[error("grating offset between control points {i} and {j}: difference {difference} is a multiple of L = {l}")]
    GratingOffset {
        i: usize,
        j: usize,
        difference: f64,
        l: usize,
    },

    #[error(
        "offset difference between control points {i} and {j} is not an integer: {difference}"
    )]
    NonIntegerOffset { i: usize, j: usize, difference: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
