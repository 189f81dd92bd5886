use thiserror::Error;

/// Errors raised by the spectral toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition on the inputs was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The window radius is zero where a positive radius is required.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// An energy lies outside the spectral window of the geometry.
    #[error("energy {energy} lies outside the spectral window ({lower}, {upper})")]
    OutOfWindow { energy: f64, lower: f64, upper: f64 },

    /// Adaptive quadrature exhausted its budget.
    #[error("quadrature did not converge: estimate {estimate:e}, achieved error {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    /// A radial profile does not have the plateau structure the tail scaling needs.
    #[error("malformed profile: {0}")]
    MalformedProfile(String),

    /// The mesh does not conform to the reduced problem.
    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),

    /// The shifted operator could not be factorized.
    #[error("factorization failed: {0}")]
    Factorization(String),

    /// The eigensolver ran out of iterations.
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// The variational search found no negative energy.
    #[error("no certificate found (best energy {best:e})")]
    NoCertificate { best: f64 },
}

pub type Result<T> = std::result::Result<T, SpectralError>;
