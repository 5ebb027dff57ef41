use thiserror::Error;

use crate::operators::Gauge;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid helix parameters: {0}")]
    InvalidSpec(String),

    #[error("tube is not embedded: epsilon = rho0 * kappa = {0} must be < 1")]
    EmbeddingViolation(f64),

    #[error("curvature and torsion both vanish; the base curve has no Frenet frame")]
    DegenerateCurve,

    #[error("zero torsion leaves the s-period undefined; supply an explicit period")]
    DegeneratePeriod,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("gauge mismatch: operator expects {expected:?}, field is {found:?}")]
    GaugeMismatch { expected: Gauge, found: Gauge },

    #[error("near resonance: |k_eff^2 - (k + K_m)^2| = {denominator:.3e} <= {tolerance:.3e}; use the two-band treatment")]
    NearResonance { denominator: f64, tolerance: f64 },

    #[error("reciprocal vector ({m_s}, {m_phi}) is not on the K1 ray")]
    OffRay { m_s: i32, m_phi: i32 },

    #[error("outside validity region of the near-boundary expansion: K^2 G^2 / U^2 = {ratio:.3e} (limit 0.1)")]
    OutOfValidity { ratio: f64 },

    #[error("effective-mass Hessian is singular: det = {det:.3e}")]
    SingularMass { det: f64 },

    #[error("matrix dimension {dim} exceeds the configured limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
