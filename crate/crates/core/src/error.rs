use thiserror::Error;

/// Errors raised anywhere in the solver. The message prefix names the
/// module the error originates from.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("potentials: {family} is not defined at t = {t}")]
    Domain { family: &'static str, t: f64 },

    #[error("potentials: invalid potential: {0}")]
    InvalidPotential(String),

    #[error("potentials: invalid problem: {0}")]
    InvalidProblem(String),

    #[error("potentials: {side} tail {tail} does not match the {family} potential (expected {expected})")]
    TailMismatch { side: &'static str, tail: String, family: &'static str, expected: String },

    #[error("angular: integration stopped at t = {t} after {steps} steps")]
    IntegrationFailure { t: f64, steps: usize },

    #[error("angular: invalid integrator settings: {0}")]
    InvalidConfig(String),

    #[error("angular: the scaled flow needs E < 0 relative to the tails, got {energy}")]
    ScaledEnergy { energy: f64 },

    #[error("cues: energy {energy} is not below the threshold {threshold}")]
    NotBelowThreshold { energy: f64, threshold: f64 },

    #[error("cues: asymptotic form needs a positive radicand, t = {t} is too small")]
    CueRadicand { t: f64 },

    #[error("cues: {0}")]
    CueMisuse(String),

    #[error("spectrum: no interval end with cue residual below {tol:e} and V - E above kappa (last residual {residual:e} at [{a}, {b}])")]
    IntervalSelection { residual: f64, tol: f64, a: f64, b: f64 },

    #[error("spectrum: defect angle decreased from {gamma_lo} at E = {e_lo} to {gamma_hi} at E = {e_hi}")]
    NonMonotone { e_lo: f64, e_hi: f64, gamma_lo: f64, gamma_hi: f64 },

    #[error("spectrum: invalid energy range [{e_min}, {e_max}]")]
    EnergyRange { e_min: f64, e_max: f64 },

    #[error("spectrum: t = {t} lies outside the working interval [{a}, {b}]")]
    OutsideInterval { t: f64, a: f64, b: f64 },

    #[error("spectrum: no eigenvalue with branch index {0} in the requested range")]
    MissingBranch(usize),

    #[error("oracle: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
