use crate::C64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A nome or base outside the open unit disc.
    #[error("{name} = {value} is outside the unit disc (|{name}| = {modulus})")]
    NomeDomain {
        name: &'static str,
        value: C64,
        modulus: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// A denominator factor of the elliptic gamma product fell below the
    /// pole guard.
    #[error("argument {z} lies within {distance:e} of the elliptic gamma pole lattice")]
    PoleProximity { z: C64, distance: f64 },

    /// A theta factor that has to be inverted is numerically zero.
    #[error("degenerate parameters: {what} vanishes (|value| = {modulus:e})")]
    Degenerate { what: String, modulus: f64 },

    /// A quantity is too large or too small for double precision.
    #[error("{what} is not representable in double precision")]
    Overflow { what: String },

    #[error("parameter constraint violated: {0}")]
    Constraint(String),

    #[error("input pair violates the Bailey relation: residual {residual:e} exceeds {tolerance:e}")]
    PairViolation { residual: f64, tolerance: f64 },

    #[error("quadrature did not converge with {nodes} nodes (last relative change {change:e})")]
    NonConvergence { nodes: usize, change: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Attach an index context (e.g. a matrix entry) to degeneracy errors.
    pub(crate) fn at(self, context: impl std::fmt::Display) -> Self {
        match self {
            Error::Degenerate { what, modulus } => Error::Degenerate {
                what: format!("{what} at {context}"),
                modulus,
            },
            other => other,
        }
    }

    /// True for errors that come from the parameters rather than from the
    /// numerics; the campaign sampler redraws on these.
    pub fn is_inadmissible(&self) -> bool {
        matches!(
            self,
            Error::PoleProximity { .. }
                | Error::Degenerate { .. }
                | Error::Constraint(_)
                | Error::NomeDomain { .. }
                | Error::Domain(_)
                | Error::Overflow { .. }
        )
    }
}
