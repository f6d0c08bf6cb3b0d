//! Decay rates: the rank-one generating function and its radius, zeros of
//! the higher-rank exponential sum, and continued fractions of log ratios.

use rug::Integer;
use thiserror::Error;

pub mod cf;
pub mod dirichlet;
pub mod poly;
pub mod series;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("scheme is not rank one")]
    NotRankOne,
    #[error("scheme is rank one; a higher-rank scheme is required")]
    NotHigherRank,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("invalid power basis: {0}")]
    InvalidBasis(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("f vanishes (numerically) on the contour near {re} + {im}i")]
    BoundaryZero { re: f64, im: f64 },
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("enclosure exhausted after {certified} certified partial quotients")]
    PrecisionExhausted { certified: usize, quotients: Vec<Integer> },
    #[error("rational input: the expansion terminates after {} partial quotients", quotients.len())]
    RationalInput { quotients: Vec<Integer> },
}
