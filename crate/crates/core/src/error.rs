use thiserror::Error;

#[derive(Clone, Debug, Error)]
pub enum TodaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("root of B left the real axis (|Im| = {0:e})")]
    NonRealRoot(f64),
    #[error("degenerate spectral curve: branch points {0} and {1} coincide")]
    DegenerateCurve(f64, f64),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("integrator step failure at tau = {0}")]
    StepFailure(f64),
    #[error("grid resolution disagreement {0:e} exceeds tolerance")]
    ResolutionFailure(f64),
    #[error("neither sign of t2 gives a small Baxter residual ({0:e}, {1:e})")]
    SignAmbiguity(f64, f64),
    #[error("integral not converged: {0}")]
    ConvergenceFailure(String),
    #[error("no sign change bracketing the root in [{0}, {1}]")]
    BracketFailure(f64, f64),
    #[error("polynomial is not symmetric")]
    NotSymmetric,
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, TodaError>;
