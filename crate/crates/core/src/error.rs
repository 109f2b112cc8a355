//! Error type shared by all modules.

use thiserror::Error;

/// Errors from model validation, solvers, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameter set or malformed request.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Drift matrix has an eigenvalue with nonnegative real part.
    #[error("unstable system: max Re(lambda) = {max_re:.3e}")]
    Unstable {
        /// Largest real part over the spectrum.
        max_re: f64,
    },
    /// A stability criterion was queried outside its validity regime.
    #[error("stability criterion not applicable: {0}")]
    CriterionNotApplicable(String),
    /// Shifted Lyapunov operator has a (near-)zero eigenvalue.
    #[error("resonant Lyapunov operator: min |lambda_i + lambda_j + mu| = {0:.3e}")]
    ResonantLyapunov(f64),
    /// A shifted reservoir resolvent is singular.
    #[error("resonant pole in reservoir kernel at shift {0}")]
    ResonantPole(String),
    /// LAPACK eigensolver failure.
    #[error("eigensolver failure: {0}")]
    Eigensolver(String),
    /// LAPACK linear-solve failure.
    #[error("linear solve failure: {0}")]
    LinearSolve(String),
    /// A solve succeeded but its residual exceeds the certified tolerance.
    #[error("residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge {
        /// Measured relative residual.
        residual: f64,
        /// Tolerance that was violated.
        tol: f64,
    },
    /// Covariance matrix violates the uncertainty relation.
    #[error("covariance matrix is not physical: {0}")]
    NonPhysical(String),
    /// Optimization found no stable, valid point.
    #[error("no feasible point found in optimization domain")]
    NoFeasiblePoint,
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
