//! Strictly decreasing grids of `lambda` values.

use rug::ops::Pow;
use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{EnumError, Ladder};
use crate::rational::{pow, serde_rational};
use crate::scheme::Scheme;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid must contain at least one value")]
    Empty,
    #[error("grid ratio must lie in (0, 1)")]
    BadRatio,
    #[error("grid start must lie in (0, 1]")]
    BadStart,
    #[error(transparent)]
    Enumerate(#[from] EnumError),
}

/// How a grid is generated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridSpec {
    /// `ratio^from, ..., ratio^to`.
    Geometric {
        #[serde(with = "serde_rational")]
        ratio: Rational,
        from: u32,
        to: u32,
    },
    /// `10^-from, ..., 10^-to`.
    Decade { from: u32, to: u32 },
    /// Ladder values `l_from, ..., l_to` of the scheme.
    Ladder { from: usize, to: usize },
}

impl GridSpec {
    pub fn build(&self, scheme: &Scheme, budget: usize) -> Result<Vec<Rational>, GridError> {
        let values: Vec<Rational> = match self {
            GridSpec::Geometric { ratio, from, to } => {
                if *ratio <= 0 || *ratio >= 1 {
                    return Err(GridError::BadRatio);
                }
                (*from..=*to).map(|k| pow(ratio, k)).collect()
            }
            GridSpec::Decade { from, to } => {
                (*from..=*to).map(|k| Rational::from((1, rug::Integer::from(10).pow(k)))).collect()
            }
            GridSpec::Ladder { from, to } => {
                let mut ladder = Ladder::new(scheme, budget);
                let mut out = Vec::new();
                for i in 0..=*to {
                    let v = ladder.next_value()?;
                    if i >= *from {
                        out.push(v);
                    }
                }
                out
            }
        };
        if values.is_empty() {
            return Err(GridError::Empty);
        }
        if values[0] > 1 || values[0] <= 0 {
            return Err(GridError::BadStart);
        }
        Ok(values)
    }
}

/// True if the values are strictly decreasing.
pub fn is_strictly_decreasing(values: &[Rational]) -> bool {
    values.windows(2).all(|w| w[0] > w[1])
}
