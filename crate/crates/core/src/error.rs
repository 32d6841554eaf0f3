//! Error taxonomy shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The raw parametrization has a near-zero speed somewhere; no
    /// arc-length parametrization exists.
    #[error("curve is not regular: |dΓ/dparam| = {speed:.3e} at parameter {param:.6}")]
    NonRegularCurve { param: f64, speed: f64 },

    /// Two well-separated parameters map to (nearly) the same point.
    #[error("curve is not injective: samples {i} and {j} are {dist:.3e} apart")]
    NonInjectiveCurve { i: usize, j: usize, dist: f64 },

    /// Periodic closure of the curve (value or derivatives) fails.
    #[error("curve closure violated: {detail}")]
    ClosureViolated { detail: String },

    /// The residual of n' = κΓ' exceeds its tolerance; signals a sign or
    /// smoothness bug in the input data.
    #[error("frame identity n' = κΓ' violated: residual {residual:.3e} > tol {tol:.3e}")]
    FrameIdentityViolated { residual: f64, tol: f64 },

    /// Fan triangulation from the chosen pole self-intersects; the caller
    /// must supply a viewpoint pole.
    #[error("enclosed-area orientation ambiguous: region is not star-shaped from the pole")]
    OrientationAmbiguous,

    /// Synthetic curvature windows (plateau plus transition) overlap.
    #[error("curvature windows overlap: m = {m}, eps = {eps}, length = {length}")]
    WindowOverlap { m: usize, eps: f64, length: f64 },

    /// An eigenvalue solve did not converge within its sweep budget.
    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),

    /// An eigenvalue sits within numerical noise of zero, so the number of
    /// summands in the accumulation constant is uncertain.
    #[error(
        "eigenvalue {index} = {value:.6e} is within noise ({noise:.3e}) of zero; \
         summand count uncertain"
    )]
    NearZeroEigenvalue {
        index: usize,
        value: f64,
        noise: f64,
    },

    /// The negative-energy matching equation has no root; the ground state
    /// of the interval model is non-negative.
    #[error("no negative-energy root of the matching equation for L = {half_length}")]
    NoNegativeRoot { half_length: f64 },

    /// Adaptive step of the oscillation counter underflowed.
    #[error("stiff radial integration: step underflow at tau = {tau:.6}")]
    StiffIntegration { tau: f64 },

    /// Doubling the artificial wall changed a bound-state count, so the
    /// reported count is not wall-converged.
    #[error("wall too close: count changed from {count} to {count_doubled} on doubling the wall")]
    WallTooClose { count: usize, count_doubled: usize },

    /// Precondition violation or malformed input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
