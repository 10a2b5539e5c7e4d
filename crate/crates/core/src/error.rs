use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("curve coefficient p must be negative and finite, got p = {p}, q = {q}")]
    InvalidCurve { p: f64, q: f64 },

    #[error("invalid numeric config: {field} {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("invalid point pair: {0}")]
    InvalidPoint(String),

    #[error("polynomial is not coercive (needs even degree and positive leading coefficient)")]
    NonCoercive,

    #[error("quartic is not admissible: {0}")]
    NotAdmissible(String),

    #[error("could not bracket the maximizer of the biconjugate objective at xi = {xi}")]
    BracketFailure { xi: f64 },

    #[error("polynomial is not convex and one-signed on the requested ray starting at {x0}")]
    NotMonotone { x0: f64 },

    #[error("pair is outside the convergence region (margin = {margin:e})")]
    NotInConvergenceRegion { margin: f64 },

    #[error("pair (x = {x}, r = {r}) is not in the singular set")]
    NotSingularPair { x: f64, r: f64 },

    #[error("pair (x = {x}, r = {r}) matches none of the local structure cases")]
    WrongCase { x: f64, r: f64 },

    #[error("boundary pair (x = {x}, r = {r}) is outside the singular set but has margin {margin:e}")]
    Inconsistent { x: f64, r: f64, margin: f64 },
}
