//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong in a computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Adaptive quadrature ran out of subdivisions before reaching its tolerance.
    #[error("quadrature used {used} subdivisions; estimated error {estimated_error:e} exceeds tolerance {tolerance:e}")]
    InsufficientSubdivisions {
        used: usize,
        estimated_error: f64,
        tolerance: f64,
    },

    /// A replica point landed exactly on a point of the original lattice.
    #[error("lattice points {i} and {j} coincide after translation")]
    CoincidentPoints { i: usize, j: usize },

    /// The ODE step size fell below the representable resolution.
    #[error("step size underflow at t = {t:e} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    /// The Gaussian width parameter reached a non-positive value.
    #[error("width parameter collapsed (a = {a:e}) at t = {t:e}")]
    Collapse { t: f64, a: f64 },

    /// The integrator exceeded its step budget.
    #[error("step budget of {max_steps} exhausted at t = {t:e}")]
    TooManySteps { t: f64, max_steps: usize },

    /// A scalar root finder could not bracket a sign change.
    #[error("no root in bracket [{lo:e}, {hi:e}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    /// The free and gravitating widths never separated within the horizon.
    #[error("no separation crossing before horizon {horizon:e} s")]
    NoCrossing { horizon: f64 },

    /// The shooting scan found no eigenvalue bracket for the requested node count.
    #[error("shooting failed to bracket a state with {nodes} nodes")]
    ShootingBracket { nodes: usize },

    /// The radial grid is too short or too coarse to resolve the state.
    #[error("state with {nodes} nodes is not resolved on the grid: {reason}")]
    UnresolvedState { nodes: usize, reason: String },

    /// The least-squares problem has no unique solution.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::InsufficientSubdivisions { .. } => "insufficient_subdivisions",
            Error::CoincidentPoints { .. } => "coincident_points",
            Error::StepSizeUnderflow { .. } => "step_size_underflow",
            Error::Collapse { .. } => "collapse",
            Error::TooManySteps { .. } => "too_many_steps",
            Error::NoRootInBracket { .. } => "no_root_in_bracket",
            Error::NoCrossing { .. } => "no_crossing",
            Error::ShootingBracket { .. } => "shooting_bracket",
            Error::UnresolvedState { .. } => "unresolved_state",
            Error::DegenerateFit(_) => "degenerate_fit",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
