use thiserror::Error;

/// Which solvability inequality a parameter set violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Unsolvable {
    /// `V* <= 0`, i.e. `mu_R1 <= mu_R0`.
    NonPositiveVstar,
    /// `V* <= V**`, i.e. `mu_inf <= mu*`.
    VstarNotAboveVstarstar,
}

impl Unsolvable {
    /// Short name of the violated inequality on the velocity scales.
    pub fn inequality(self) -> &'static str {
        match self {
            Unsolvable::NonPositiveVstar => "V* <= 0",
            Unsolvable::VstarNotAboveVstarstar => "V* <= V**",
        }
    }

    /// The same condition written on the chemical potentials.
    pub fn requirement(self) -> &'static str {
        match self {
            Unsolvable::NonPositiveVstar => "mu_R1 > mu_R0 is required",
            Unsolvable::VstarNotAboveVstarstar => "mu_inf > mu* is required",
        }
    }
}

impl std::fmt::Display for Unsolvable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({})", self.inequality(), self.requirement())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("stretch must be positive, got {0}")]
    NonPositiveStretch(f64),

    #[error("stretch must be at least 1, got {0}")]
    StretchBelowOne(f64),

    #[error("material coordinate {z} lies below the growth surface {z0}")]
    ParticleNotInBody { z: f64, z0: f64 },

    #[error("radius {r} lies outside [{lo}, {hi}]")]
    RadiusOutOfRange { r: f64, lo: f64, hi: f64 },

    #[error("invalid shell geometry r0={r0}, r1={r1}")]
    InvalidGeometry { r0: f64, r1: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no treadmilling state: {0}")]
    NoTreadmillingState(Unsolvable),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("grid scan found {count} sign changes, expected exactly one")]
    OracleInconsistent { count: usize },

    #[error("estimate unavailable: {0}")]
    EstimateUnavailable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
