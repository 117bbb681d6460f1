use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix is not Hermitian: max |e_ij - conj(e_ji)| = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge for a {dim}x{dim} matrix with operator norm <= {norm_bound:.3e}")]
    EigNonConvergence { dim: usize, norm_bound: f64 },

    #[error("not an effect: eigenvalue {eigenvalue} outside [0, 1]")]
    NotAnEffect { eigenvalue: f64 },

    #[error("not a projection: eigenvalue {eigenvalue} is not near {{0, 1}}")]
    NotAProjection { eigenvalue: f64 },

    #[error("not invertible: min |eigenvalue| = {min_abs_eigenvalue:.3e}")]
    Singular { min_abs_eigenvalue: f64 },

    #[error("not positive semidefinite: min eigenvalue = {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("not partially ortho-coexistent: violating eigenvalue {violating_eigenvalue:.3e}")]
    NotPartiallyOrthoCoexistent { violating_eigenvalue: f64 },

    #[error("pair is not absolutely compatible: defect norm = {defect_norm:.3e}")]
    NotAbsCompatible { defect_norm: f64 },

    #[error("pair is not x0-compatible: {reason}")]
    NotX0Compatible { reason: String },

    #[error("pair not x0-strict: min eigenvalue {min_eigenvalue:.3e} of {which}")]
    NotX0Strict { which: &'static str, min_eigenvalue: f64 },

    #[error("not a strict absolutely compatible pair: {detail}")]
    NotStrictPair { detail: String },

    #[error("strict-pair block split is unbalanced: {lower} below vs {upper} above")]
    BlockDimMismatch { lower: usize, upper: usize },

    #[error("six-block remainder is not a strict compatible pair: strictness residual {strict_residual:.3e}, defect norm {defect_norm:.3e}")]
    SixBlockRemainder { strict_residual: f64, defect_norm: f64 },

    #[error("operator does not commute with the target: commutator norm {residual:.3e}")]
    NotCommuting { residual: f64 },

    #[error("shift operator norm {norm} is not < 1")]
    ShiftNormTooLarge { norm: f64 },

    #[error("expected a 2x2 matrix, got {dim}x{dim}")]
    NotTwoByTwo { dim: usize },

    #[error("matrix trace {trace} is not 1")]
    TraceNotOne { trace: f64 },

    #[error("points do not form an internal couple: containment slack {slack:.3e}")]
    NotInternalCouple { slack: f64 },

    #[error("degenerate couple: the two points coincide")]
    DegenerateCouple,

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },
}

impl Error {
    pub(crate) fn invalid(what: impl Into<String>) -> Self {
        Error::InvalidParameter { what: what.into() }
    }
}
