//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Closed forms built on Γ(s−1) are undefined for s ≤ 1.
    #[error("closed form undefined for s = {s} (requires s > 1); use the quadrature backend")]
    UnsupportedExponent { s: f64 },

    #[error("ill-conditioned {what}: magnitude {magnitude:.3e} below {limit:.1e}")]
    IllConditioned {
        what: &'static str,
        magnitude: f64,
        limit: f64,
    },

    #[error(
        "quadrature did not converge: achieved error estimate {achieved:.3e}, target {target:.3e}"
    )]
    QuadratureNonConvergence { achieved: f64, target: f64 },

    #[error("ODE step size underflow at t = {t}")]
    IntegrationFailure { t: f64 },

    /// Raised by backends that cannot factor the exact two-time correlator
    /// into (γ(t2,t1), φ(t2,t1)).
    #[error("two-time correlation factors are not available for this backend")]
    TwoTimeUnsupported,
}

pub type Result<T> = std::result::Result<T, Error>;
