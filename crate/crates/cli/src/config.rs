//! TOML experiment configs, merged with command-line flags.
//!
//! ```toml
//! schema_version = 1
//! precision = 200
//! budget = 20000000
//!
//! [scheme]
//! name = "half-sixth-third"
//!
//! [discrepancy]
//! grid = { kind = "decade", from = 1, to = 5 }
//! ```

use std::path::{Path, PathBuf};

use kakutani::enumerate::DEFAULT_BUDGET;
use kakutani::grid::GridSpec;
use kakutani::rational::parse_rational;
use kakutani::scheme::catalog;
use kakutani::scheme::file::{parse_scheme_table, parse_scheme_toml};
use kakutani::scheme::Scheme;
use rug::{Integer, Rational};
use serde::Deserialize;

use crate::error::CliError;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
pub const MIN_PRECISION: u32 = 64;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub schema_version: u32,
    pub precision: Option<u32>,
    pub threads: Option<usize>,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
    pub scheme: Option<SchemeSource>,
    #[serde(default)]
    pub partitions: PartitionsSection,
    #[serde(default)]
    pub points: PointsSection,
    #[serde(default)]
    pub count: CountSection,
    #[serde(default)]
    pub analyze: AnalyzeSection,
    #[serde(default)]
    pub discrepancy: DiscrepancySection,
}

/// Exactly one of `name` (bundled), `file` or an inline `blocks` list.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSource {
    pub name: Option<String>,
    pub file: Option<PathBuf>,
    pub blocks: Option<toml::Value>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionsSection {
    pub levels: Option<usize>,
    pub min_length: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsSection {
    pub lambda: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountSection {
    pub grid: Option<GridSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeSection {
    pub eps: Option<Vec<String>>,
    pub taylor_terms: Option<usize>,
    pub max_denominator: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscrepancySection {
    pub grid: Option<GridSpec>,
    pub hypothesis: Option<Hypothesis>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// Geometric for rank one, log-power otherwise.
    #[default]
    Auto,
    Geometric,
    LogPower,
}

pub fn load_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let cfg: FileConfig = toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if cfg.schema_version != CONFIG_SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "unsupported schema_version {} (expected {CONFIG_SCHEMA_VERSION})",
            cfg.schema_version
        )));
    }
    Ok(cfg)
}

pub fn parse_rational_arg(what: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Config(format!("{what}: {e}")))
}

/// Parses `decade:FROM:TO`, `geometric:RATIO:FROM:TO` or `ladder:FROM:TO`.
pub fn parse_grid(text: &str) -> Result<GridSpec, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::Config(format!("bad grid {text:?}; expected decade:FROM:TO, geometric:RATIO:FROM:TO or ladder:FROM:TO"));
    let num = |s: &str| s.trim().parse::<u32>().map_err(|_| bad());
    match parts.as_slice() {
        ["decade", a, b] => Ok(GridSpec::Decade { from: num(a)?, to: num(b)? }),
        ["geometric", r, a, b] => Ok(GridSpec::Geometric {
            ratio: parse_rational_arg("grid ratio", r)?,
            from: num(a)?,
            to: num(b)?,
        }),
        ["ladder", a, b] => Ok(GridSpec::Ladder { from: num(a)? as usize, to: num(b)? as usize }),
        _ => Err(bad()),
    }
}

/// A bundled scheme name or a path to a scheme file.
pub fn load_scheme_arg(text: &str) -> Result<(String, Scheme), CliError> {
    if let Some(s) = catalog::by_name(text) {
        return Ok((text.to_string(), s));
    }
    let path = Path::new(text);
    if path.exists() {
        return load_scheme_file(path);
    }
    Err(CliError::Config(format!(
        "unknown scheme {text:?}; bundled names: {}",
        catalog::NAMES.join(", ")
    )))
}

fn load_scheme_file(path: &Path) -> Result<(String, Scheme), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let (name, scheme) = parse_scheme_toml(&text)?;
    let name = name.unwrap_or_else(|| path.file_stem().map_or("scheme".into(), |s| s.to_string_lossy().into()));
    Ok((name, scheme))
}

impl SchemeSource {
    pub fn load(&self, base_dir: &Path) -> Result<(String, Scheme), CliError> {
        match (&self.name, &self.file, &self.blocks) {
            (Some(n), None, None) => catalog::by_name(n)
                .map(|s| (n.clone(), s))
                .ok_or_else(|| CliError::Config(format!("unknown bundled scheme {n:?}"))),
            (None, Some(f), None) => load_scheme_file(&base_dir.join(f)),
            (name, None, Some(blocks)) => {
                let mut table = toml::Table::new();
                table.insert("schema_version".into(), toml::Value::Integer(1));
                table.insert("blocks".into(), blocks.clone());
                let (_, scheme) = parse_scheme_table(table)?;
                Ok((name.clone().unwrap_or_else(|| "inline".into()), scheme))
            }
            _ => Err(CliError::Config("[scheme] needs exactly one of name, file or blocks".into())),
        }
    }
}

/// Fully resolved settings shared by all commands.
#[derive(Debug, Clone)]
pub struct Settings {
    pub scheme_name: String,
    pub scheme: Scheme,
    pub precision: u32,
    pub threads: Option<usize>,
    pub budget: usize,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub levels: usize,
    pub min_length: Rational,
    pub lambda: Rational,
    pub count_grid: GridSpec,
    pub eps: Vec<Rational>,
    pub taylor_terms: usize,
    pub max_denominator: Integer,
    pub discrepancy_grid: GridSpec,
    pub hypothesis: Hypothesis,
}

/// Values given on the command line; they override the config file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub threads: Option<usize>,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
    pub svg: bool,
    pub scheme: Option<String>,
    pub levels: Option<usize>,
    pub min_length: Option<String>,
    pub lambda: Option<String>,
    pub grid: Option<String>,
    pub eps: Vec<String>,
    pub hypothesis: Option<Hypothesis>,
}

pub fn resolve(file: Option<(&Path, FileConfig)>, o: &Overrides) -> Result<Settings, CliError> {
    let (base_dir, cfg) = match file {
        Some((path, cfg)) => (path.parent().map(Path::to_path_buf).unwrap_or_default(), cfg),
        None => (PathBuf::from("."), FileConfig { schema_version: CONFIG_SCHEMA_VERSION, ..Default::default() }),
    };
    let (scheme_name, scheme) = match (&o.scheme, &cfg.scheme) {
        (Some(arg), _) => load_scheme_arg(arg)?,
        (None, Some(src)) => src.load(&base_dir)?,
        (None, None) => ("dyadic".to_string(), catalog::dyadic()),
    };
    let precision = o.precision.or(cfg.precision).unwrap_or(200);
    if precision < MIN_PRECISION {
        return Err(CliError::Config(format!("precision must be at least {MIN_PRECISION} bits")));
    }
    let threads = o.threads.or(cfg.threads);
    if threads == Some(0) {
        return Err(CliError::Config("threads must be positive".into()));
    }
    let out = o.out.clone().or_else(|| cfg.out.as_ref().map(|p| base_dir.join(p)));
    let grid_override = o.grid.as_deref().map(parse_grid).transpose()?;
    let eps_text: Vec<String> = if !o.eps.is_empty() {
        o.eps.clone()
    } else {
        cfg.analyze.eps.clone().unwrap_or_else(|| vec!["1/10".into(), "1/4".into(), "1/2".into()])
    };
    let eps = eps_text
        .iter()
        .map(|e| parse_rational_arg("eps", e))
        .collect::<Result<Vec<_>, _>>()?;
    if eps.is_empty() || eps.iter().any(|e| *e <= 0 || *e >= 1) {
        return Err(CliError::Config("eps values must lie in (0, 1)".into()));
    }
    let min_length = parse_rational_arg(
        "min_length",
        o.min_length.as_deref().or(cfg.partitions.min_length.as_deref()).unwrap_or("1/1000000"),
    )?;
    let lambda = parse_rational_arg("lambda", o.lambda.as_deref().or(cfg.points.lambda.as_deref()).unwrap_or("1/100"))?;
    if min_length <= 0 || lambda <= 0 {
        return Err(CliError::Config("lengths must be positive".into()));
    }
    Ok(Settings {
        scheme_name,
        scheme,
        precision,
        threads,
        budget: o.budget.or(cfg.budget).unwrap_or(DEFAULT_BUDGET),
        out,
        svg: o.svg || cfg.svg.unwrap_or(false),
        levels: o.levels.or(cfg.partitions.levels).unwrap_or(7),
        min_length,
        lambda,
        count_grid: grid_override.clone().or(cfg.count.grid).unwrap_or(GridSpec::Decade { from: 0, to: 5 }),
        eps,
        taylor_terms: cfg.analyze.taylor_terms.unwrap_or(20),
        max_denominator: Integer::from(cfg.analyze.max_denominator.unwrap_or(1_000_000_000)),
        discrepancy_grid: grid_override.or(cfg.discrepancy.grid).unwrap_or(GridSpec::Decade { from: 1, to: 5 }),
        hypothesis: o.hypothesis.or(cfg.discrepancy.hypothesis).unwrap_or_default(),
    })
}
