use num_complex::Complex64;

use crate::expr::{EvalError, ParseError};

/// Failures of the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("no Denjoy-Wolff point found: {0}")]
    NoDwFound(String),
    #[error("trajectory left the disk at t = {t}: |u| = {modulus}")]
    DiskExit { t: f64, modulus: f64 },
    #[error("step size collapsed below {min_step} at t = {t}")]
    StepUnderflow { t: f64, min_step: f64 },
    #[error("interior Denjoy-Wolff point is parabolic: |f'(tau)| = {modulus}")]
    ParabolicInterior { modulus: f64 },
    #[error("point at distance {distance} from tau is outside the trusted jet radius {radius}")]
    OutOfJetRange { distance: f64, radius: f64 },
    #[error("function has zeros in the disk (winding count {winding})")]
    InteriorZero { winding: i64 },
    #[error("expansion coefficient of order {order} does not converge")]
    DivergentCoefficient { order: usize },
    #[error("pole on the unit circle at {at}")]
    PoleOnBoundary { at: Complex64 },
    #[error("sample {at} lies on the branch cut")]
    BranchCut { at: Complex64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("g vanishes on {fraction:.3} of the grid")]
    DegenerateG { fraction: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("function vanishes on the contour near {at}")]
    ZeroOnContour { at: Complex64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
