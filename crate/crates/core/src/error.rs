use thiserror::Error;

use crate::roots::RootSet;

#[derive(Debug, Error)]
pub enum Error {
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("numerator and denominator share a root (approximate gcd degree {gcd_degree})")]
    NotCoprime { gcd_degree: usize },
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("r-bar composed with r is the identity; the instance has a continuum of zeros")]
    DegenerateComposition,
    #[error("polynomial is constant; it has no roots")]
    DegreeZero,
    #[error("root finder did not converge for {} of {} roots", .0.unconverged(), .0.roots.len())]
    DidNotConverge(Box<RootSet>),
    #[error("deg(r) = {degree} after the shift; at least 2 is required")]
    DegreeTooLow { degree: usize },
    #[error("candidate {re:+e}{im:+e}i sits on a pole and is nearly a zero")]
    PoleDegenerate { re: f64, im: f64 },
    #[error("point is not a zero (residual {residual:e} > {tol:e})")]
    NotAZero { residual: f64, tol: f64 },
    #[error("function is (numerically) zero on the contour; min modulus {min_modulus:e}")]
    ZeroOnCurve { min_modulus: f64 },
    #[error("function is not finite on the contour")]
    NotFiniteOnCurve,
    #[error("unwrapped phase change {value} is not within 0.01 of an integer")]
    NonIntegerWinding { value: f64 },
    #[error("sample budget of {budget} exceeded while tracking the argument")]
    SampleBudgetExceeded { budget: usize },
    #[error("no sign change of |r'|^2 - 1 inside the window")]
    EmptyWindow,
    #[error("{unresolved} orbit(s) unresolved after the step budget")]
    OrbitBudgetExceeded { unresolved: usize },
    #[error("degrees (n_p, n_q) = ({n_p}, {n_q}) are out of scope; max degree must be at least 2")]
    OutOfScope { n_p: usize, n_q: usize },
    #[error("operation requires {expected}, got (n_p, n_q) = ({n_p}, {n_q})")]
    WrongCase {
        expected: &'static str,
        n_p: usize,
        n_q: usize,
    },
    #[error("duplicate lens position {re}{im:+}i")]
    DuplicatePosition { re: f64, im: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("random instance generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("invalid instance file: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
