use thiserror::Error;

use crate::symplectic::PhasePoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// `det(M + 1)` vanishes: the Cayley representation does not exist.
    #[error("caustic: |det(M + 1)| = {det:e} is below {tol:e}")]
    Caustic { det: f64, tol: f64 },

    #[error("map is not hyperbolic: |trace| = {trace} <= 2")]
    NotHyperbolic { trace: f64 },

    #[error("det(M^{period} - 1) = 0, periodic points of period {period} are not isolated")]
    DegenerateMap { period: u32 },

    #[error("point ({}, {}) is not a periodic point of period {period}", point.p, point.q)]
    NotPeriodic { point: PhasePoint, period: u32 },

    #[error("point ({}, {}) is not a fixed point of the map", point.p, point.q)]
    NotFixedPoint { point: PhasePoint },

    #[error("reflection operators on the center lattice need odd N, got N = {n}")]
    EvenNUnsupported { n: usize },

    #[error("no k <= {kmax} with U^k proportional to the identity")]
    NotFound { kmax: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
