use thiserror::Error;

/// Errors raised by the engine. Variants map onto the CLI exit codes:
/// input problems are "bad input", `NonConvergence` is numerical failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("unsupported genus {0} (need g >= 2)")]
    UnsupportedGenus(usize),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("ball radius {radius} exceeds configured maximum {max}")]
    RadiusTooLarge { radius: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("jacobian grid has {points} points, above the cap {cap}")]
    GridTooLarge { points: u128, cap: u128 },
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("sampler did not converge after {attempts} attempts (last residual {residual:.3e})")]
    NonConvergence { attempts: usize, residual: f64 },
    #[error("operator is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("ensemble mismatch: {0}")]
    EnsembleMismatch(String),
    #[error("point {0} is outside the open disk")]
    OutsideDisk(String),
    #[error("cutoff {0} too small: the Dirichlet face set is not stable")]
    CutoffTooSmall(usize),
    #[error("point could not be unfolded within word-length cutoff {0}")]
    UnfoldFailed(usize),
    #[error("quadrature produced no nodes")]
    EmptyQuadrature,
    #[error("support of the wave function reaches the cutoff shell (radius {0})")]
    SupportExceedsCutoff(usize),
    #[error("finite-difference stencil leaves the cell interior")]
    StencilOutsideCell,
    #[error("point is not in the closed fundamental cell")]
    NotInCell,
    #[error("flux {0} is not an integer")]
    NonIntegralFlux(f64),
    #[error("character twist check failed (deviation {0:.3e})")]
    TwistInconsistent(f64),
    #[error("checksum mismatch: expected {expected}, found {found}")]
    Checksum { expected: String, found: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
