use kakutani::discrepancy::DiscrepancyError;
use kakutani::enumerate::EnumError;
use kakutani::grid::GridError;
use kakutani::scheme::file::SchemeFileError;
use kakutani::scheme::SchemeError;
use kakutani::spectral::SpectralError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const INVARIANT: i32 = 4;
    pub const NUMERIC: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    /// A scheme failed validation. `kind` names the violated rule.
    #[error("invalid scheme ({kind}): {message}")]
    Scheme { kind: &'static str, message: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("numeric certification failure: {0}")]
    Numeric(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Scheme { .. } | CliError::Io { .. } => exit::CONFIG,
            CliError::Budget(_) => exit::BUDGET,
            CliError::Invariant(_) => exit::INVARIANT,
            CliError::Numeric(_) => exit::NUMERIC,
        }
    }

    /// Stable machine-readable name.
    pub fn code_name(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Scheme { .. } => "scheme",
            CliError::Io { .. } => "io",
            CliError::Budget(_) => "budget",
            CliError::Invariant(_) => "invariant",
            CliError::Numeric(_) => "numeric",
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            EnumError::NonPositiveLambda => CliError::Config(e.to_string()),
        }
    }
}

impl From<GridError> for CliError {
    fn from(e: GridError) -> Self {
        match e {
            GridError::Enumerate(inner) => inner.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        let kind = match e {
            SchemeError::MassNotOne { .. } => "MassNotOne",
            SchemeError::DegenerateBlock { .. } => "DegenerateBlock",
            SchemeError::InvalidSymbol { .. } => "InvalidSymbol",
        };
        CliError::Scheme { kind, message: e.to_string() }
    }
}

impl From<SchemeFileError> for CliError {
    fn from(e: SchemeFileError) -> Self {
        match e {
            SchemeFileError::Scheme(inner) => inner.into(),
            other => CliError::Scheme { kind: "Malformed", message: other.to_string() },
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::NotRankOne | SpectralError::NotHigherRank | SpectralError::Domain(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<DiscrepancyError> for CliError {
    fn from(e: DiscrepancyError) -> Self {
        match e {
            DiscrepancyError::Enum(inner) => inner.into(),
            DiscrepancyError::Spectral(inner) => inner.into(),
            DiscrepancyError::InvalidInterval => CliError::Config(e.to_string()),
            DiscrepancyError::EmptyPointSet => CliError::Invariant(e.to_string()),
            DiscrepancyError::DegenerateData(_) => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io { path: "csv buffer".into(), source: std::io::Error::other(e.to_string()) }
    }
}
