use thiserror::Error;

/// Errors raised by the geometry, measure and check layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An index or argument lies outside the range an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// Bad construction parameters (grid sizes, family parameters, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// The support function does not describe a convex body at some node.
    #[error("convexity violation at node {node}: reverse Weingarten eigenvalues ({min_eigen:.3e}, {max_eigen:.3e})")]
    Convexity {
        node: usize,
        min_eigen: f64,
        max_eigen: f64,
    },

    /// A radial function is non-positive, or a translated radial graph is no
    /// longer star-shaped about the origin.
    #[error("star-shapedness violation: {0}")]
    StarShaped(String),

    /// A parametric curve has (numerically) vanishing speed.
    #[error("regularity error at node {node}: |X'(t)| = {speed:.3e}")]
    Regularity { node: usize, speed: f64 },

    /// A pointwise weight or function was evaluated outside its domain.
    #[error("domain error at node {node}: {message}")]
    NodeDomain { node: usize, message: String },

    /// A curvature sign hypothesis required by the operation fails.
    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    /// Caller misuse: unknown ids, mismatched grids, empty inputs.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
