//! TOML scheme files.
//!
//! ```toml
//! schema_version = 1
//! name = "half-third-tail"
//!
//! [[blocks]]
//! kind = "atom"
//! length = "1/2"
//!
//! [[blocks]]
//! kind = "tail"
//! first = "1/3"
//! ratio = "1/3"
//! direction = "asc"
//! ```
//!
//! Every number is an exact `"p/q"` string, so a write/read cycle reproduces
//! the scheme exactly.

use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{build_scheme, BlockSpec, Direction, Scheme, SchemeError};
use crate::rational::serde_rational;

pub const SCHEME_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SchemeFileError {
    #[error("malformed scheme file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("could not serialize scheme: {0}")]
    Write(#[from] toml::ser::Error),
    #[error("unsupported scheme schema_version {0} (expected {SCHEME_SCHEMA_VERSION})")]
    Version(u32),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", deny_unknown_fields)]
enum BlockRecord {
    #[serde(rename = "atom")]
    Atom {
        #[serde(with = "serde_rational")]
        length: Rational,
    },
    #[serde(rename = "tail")]
    Tail {
        #[serde(with = "serde_rational")]
        first: Rational,
        #[serde(with = "serde_rational")]
        ratio: Rational,
        direction: Direction,
    },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct SchemeRecord {
    schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    blocks: Vec<BlockRecord>,
}

/// Parses and validates a scheme file. Returns the optional name with the scheme.
pub fn parse_scheme_toml(text: &str) -> Result<(Option<String>, Scheme), SchemeFileError> {
    from_record(toml::from_str(text)?)
}

/// Same as [`parse_scheme_toml`] for an already parsed table.
pub fn parse_scheme_table(table: toml::Table) -> Result<(Option<String>, Scheme), SchemeFileError> {
    from_record(table.try_into()?)
}

fn from_record(record: SchemeRecord) -> Result<(Option<String>, Scheme), SchemeFileError> {
    if record.schema_version != SCHEME_SCHEMA_VERSION {
        return Err(SchemeFileError::Version(record.schema_version));
    }
    let blocks: Vec<BlockSpec> = record
        .blocks
        .into_iter()
        .map(|b| match b {
            BlockRecord::Atom { length } => BlockSpec::Atom { length },
            BlockRecord::Tail { first, ratio, direction } => BlockSpec::GeoTail { first, ratio, direction },
        })
        .collect();
    Ok((record.name, build_scheme(&blocks)?))
}

pub fn scheme_to_toml(scheme: &Scheme, name: Option<&str>) -> Result<String, SchemeFileError> {
    let record = SchemeRecord {
        schema_version: SCHEME_SCHEMA_VERSION,
        name: name.map(str::to_string),
        blocks: scheme
            .blocks()
            .iter()
            .map(|b| match b {
                BlockSpec::Atom { length } => BlockRecord::Atom { length: length.clone() },
                BlockSpec::GeoTail { first, ratio, direction } => {
                    BlockRecord::Tail { first: first.clone(), ratio: ratio.clone(), direction: *direction }
                }
            })
            .collect(),
    };
    Ok(toml::to_string(&record)?)
}
