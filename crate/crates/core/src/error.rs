//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// θ ≡ 0 (mod 2π): the denominator has a double root at x = 1 and the
    /// integral is infinite.
    #[error("SingularTheta: theta is a multiple of 2π, the integral is infinite")]
    SingularTheta,

    #[error("Excluded: {0}")]
    Excluded(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("NearPole: |sin(πb)| = {0:e} is below the pole threshold")]
    NearPole(f64),

    #[error("DegenerateBeta: |sin β| = {0:e} is below the denominator threshold")]
    DegenerateBeta(f64),

    #[error("NotIntegerExponents: decomposition needs integer n and p (got n = {n}, p = {p})")]
    NotIntegerExponents { n: f64, p: String },

    #[error("BranchError: {0}")]
    Branch(String),

    #[error("NonIntegrable: {0}")]
    NonIntegrable(String),

    #[error("PoleTooClose: mZ = {0} is within 1e-3 of π/2")]
    PoleTooClose(f64),

    #[error("quadrature budget exhausted after {0} integrand evaluations")]
    BudgetExceeded(usize),

    #[error("ToleranceUnreachable: {0}")]
    ToleranceUnreachable(String),

    #[error("SlowConvergence: {0}")]
    SlowConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
