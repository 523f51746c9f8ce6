use thiserror::Error;

/// Errors raised by the polynomial, measure and asymptotics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finder did not converge after {iterations} iterations (worst relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error(
        "ambiguous unit-circle classification: root {re}{im:+}i lies {distance:e} from the circle (tolerance {tolerance:e})"
    )]
    AmbiguousClassification {
        re: f64,
        im: f64,
        distance: f64,
        tolerance: f64,
    },

    #[error("cannot construct root windows: {0}")]
    WindowConstruction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
