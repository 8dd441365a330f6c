use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid medium: {0}")]
    InvalidMedium(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("operation not defined for medium kind {0}")]
    WrongMediumKind(&'static str),
    #[error("transition dipole is not transverse to the velocity (|v·d| = {residual:e})")]
    TransversalityViolation { residual: f64 },
    #[error("quadrature did not converge: |estimate| = {estimate:e}, error = {error:e}")]
    NonConvergence { estimate: f64, error: f64 },
    #[error("reflection-coefficient denominator vanishes")]
    DegenerateDenominator,
    #[error("finite-difference step below the noise floor")]
    StepTooSmall,
    #[error("retarded formula requires a nonzero transition frequency")]
    MissingFrequency,
}

pub type Result<T> = std::result::Result<T, Error>;
