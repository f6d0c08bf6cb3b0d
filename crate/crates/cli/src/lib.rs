//! Command-line front end for the `kakutani` library.

pub mod commands;
pub mod config;
pub mod error;
pub mod svg;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use kakutani::scheme::catalog;

use crate::commands::{Artifact, CommandOutput};
use crate::config::{load_file_config, resolve, Hypothesis, Overrides, Settings};
use crate::error::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "kakutani", version, about = "Splitting-procedure partitions, counts, spectra and discrepancy")]
pub struct Cli {
    /// TOML experiment config.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, value_name = "BITS")]
    pub precision: Option<u32>,
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Maximum number of words or points held at once.
    #[arg(long, global = true, value_name = "N")]
    pub budget: Option<usize>,
    /// Directory for output files. Without it the main table goes to stdout.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Also write SVG figures (needs --out).
    #[arg(long, global = true)]
    pub svg: bool,
    /// Bundled scheme name or path to a scheme file.
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Interval rows of the first partitions.
    Partitions {
        #[arg(long)]
        levels: Option<usize>,
        /// Intervals shorter than this are folded into a hidden-mass row.
        #[arg(long)]
        min_length: Option<String>,
    },
    /// Left endpoints of all intervals of length at least lambda.
    Points {
        #[arg(long)]
        lambda: Option<String>,
    },
    /// Word counts along a grid, with the predicted renewal constant.
    Count {
        /// decade:FROM:TO, geometric:RATIO:FROM:TO or ladder:FROM:TO
        #[arg(long)]
        grid: Option<String>,
    },
    /// Rank, entropy, spectral and approximation report as JSON.
    Analyze {
        #[arg(long, value_delimiter = ',')]
        eps: Vec<String>,
    },
    /// Discrepancy curve and decay fit.
    Discrepancy {
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, value_enum)]
        hypothesis: Option<Hypothesis>,
    },
    /// Run the invariant battery.
    Verify,
}

/// What a run produced. `failures` counts failed invariants.
#[derive(Debug)]
pub struct Outcome {
    pub output: CommandOutput,
    pub failures: usize,
    /// Resolved output directory, if any.
    pub out: Option<PathBuf>,
}

fn overrides(cli: &Cli) -> Overrides {
    let mut o = Overrides {
        precision: cli.precision,
        threads: cli.threads,
        budget: cli.budget,
        out: cli.out.clone(),
        svg: cli.svg,
        scheme: cli.scheme.clone(),
        ..Default::default()
    };
    match &cli.command {
        Command::Partitions { levels, min_length } => {
            o.levels = *levels;
            o.min_length = min_length.clone();
        }
        Command::Points { lambda } => o.lambda = lambda.clone(),
        Command::Count { grid } => o.grid = grid.clone(),
        Command::Analyze { eps } => o.eps = eps.clone(),
        Command::Discrepancy { grid, hypothesis } => {
            o.grid = grid.clone();
            o.hypothesis = *hypothesis;
        }
        Command::Verify => {}
    }
    o
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn verify(cli: &Cli, o: &Overrides) -> Result<Outcome, CliError> {
    let file = cli.config.as_ref().map(|p| load_file_config(p).map(|c| (p.as_path(), c))).transpose()?;
    let explicit = o.scheme.is_some() || file.as_ref().is_some_and(|(_, c)| c.scheme.is_some());
    let settings = match resolve(file, o) {
        Ok(s) => s,
        Err(CliError::Scheme { kind, message }) => {
            let text = format!("FAIL scheme {kind} [configured scheme]: {message}\n1 checks, 1 failed\n");
            let output = CommandOutput {
                artifacts: vec![Artifact { name: "verify.txt".into(), contents: text }],
                summary: "scheme failed validation".into(),
            };
            return Ok(Outcome { output, failures: 1, out: o.out.clone() });
        }
        Err(e) => return Err(e),
    };
    let schemes: Vec<_> = if explicit {
        vec![(settings.scheme_name.clone(), settings.scheme.clone())]
    } else {
        catalog::bundled().into_iter().map(|(n, s)| (n.to_string(), s)).collect()
    };
    let (text, failures) =
        in_pool(settings.threads, || verify::run_battery(&schemes, settings.budget, settings.precision))??;
    let summary = format!("{} schemes checked, {failures} failures", schemes.len());
    let output = CommandOutput { artifacts: vec![Artifact { name: "verify.txt".into(), contents: text }], summary };
    Ok(Outcome { output, failures, out: settings.out })
}

/// Resolves settings and runs the selected command without touching the
/// file system beyond reading inputs.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let o = overrides(cli);
    if matches!(cli.command, Command::Verify) {
        return verify(cli, &o);
    }
    let file = cli.config.as_ref().map(|p| load_file_config(p).map(|c| (p.as_path(), c))).transpose()?;
    let s: Settings = resolve(file, &o)?;
    if s.svg && s.out.is_none() {
        return Err(CliError::Config("--svg needs --out".into()));
    }
    let output = in_pool(s.threads, || match &cli.command {
        Command::Partitions { .. } => commands::partitions(&s),
        Command::Points { .. } => commands::points(&s),
        Command::Count { .. } => commands::count(&s),
        Command::Analyze { .. } => commands::analyze_cmd(&s),
        Command::Discrepancy { .. } => commands::discrepancy(&s),
        Command::Verify => unreachable!("handled above"),
    })??;
    Ok(Outcome { output, failures: 0, out: s.out })
}

fn emit(dir: Option<&PathBuf>, output: &CommandOutput) -> Result<(), CliError> {
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
            for a in &output.artifacts {
                let path = dir.join(&a.name);
                std::fs::write(&path, &a.contents)
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if let Some(a) = output.artifacts.first() {
                stdout
                    .write_all(a.contents.as_bytes())
                    .map_err(|source| CliError::Io { path: "stdout".into(), source })?;
            }
        }
    }
    eprintln!("{}", output.summary);
    Ok(())
}

/// Runs a parsed command line, writes its output and returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|outcome| {
        emit(outcome.out.as_ref(), &outcome.output)?;
        Ok(outcome.failures)
    });
    match result {
        Ok(0) => exit::OK,
        Ok(_) => exit::INVARIANT,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.code_name());
            e.exit_code()
        }
    }
}
