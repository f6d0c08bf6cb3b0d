//! Subcommand bodies. Each returns its artifacts in memory; writing them
//! out is left to the caller so that output is identical however it is
//! delivered.

use kakutani::analysis::{analyze, digits_for, AnalysisOptions};
use kakutani::discrepancy::{curve_values, discrepancy_curve, fit_decay, DecayHypothesis};
use kakutani::enumerate::{count_a, partition_level, point_set, PartitionSlice};
use kakutani::grid::{is_strictly_decreasing, GridSpec};
use kakutani::rational::{format_rational, to_f64};
use kakutani::renewal::{predicted_limit, rank_report};
use kakutani::scheme::Scheme;
use rug::Rational;
use serde_json::json;

use crate::config::{Hypothesis, Settings};
use crate::error::CliError;
use crate::svg;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// The first artifact is the primary one (printed when there is no output
/// directory). `summary` is a short human-readable note.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub artifacts: Vec<Artifact>,
    pub summary: String,
}

fn artifact(name: &str, contents: String) -> Artifact {
    Artifact { name: name.to_string(), contents }
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: "csv buffer".into(),
        source: std::io::Error::other(e.to_string()),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn build_grid(spec: &GridSpec, scheme: &Scheme, budget: usize) -> Result<Vec<Rational>, CliError> {
    let grid = spec.build(scheme, budget)?;
    if !is_strictly_decreasing(&grid) {
        return Err(CliError::Config("grid must be strictly decreasing".into()));
    }
    Ok(grid)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Sorted endpoints of the listed members of a partition slice.
pub fn slice_endpoints(slice: &PartitionSlice) -> Vec<Rational> {
    let mut ends: Vec<Rational> = slice.intervals.iter().flat_map(|i| [i.left.clone(), i.right()]).collect();
    ends.sort();
    ends.dedup();
    ends
}

pub fn partition_slices(s: &Settings) -> Result<Vec<PartitionSlice>, CliError> {
    (0..=s.levels)
        .map(|n| partition_level(&s.scheme, n, &s.min_length, s.budget).map_err(CliError::from))
        .collect()
}

pub fn partitions(s: &Settings) -> Result<CommandOutput, CliError> {
    let slices = partition_slices(s)?;
    let mut rows = Vec::new();
    let mut truncated = 0;
    for slice in &slices {
        for i in &slice.intervals {
            rows.push(vec![
                slice.level.to_string(),
                format_rational(&i.left),
                format_rational(&i.right()),
                format_rational(&i.length),
                i.word.to_string(),
            ]);
        }
        if slice.hidden_mass != 0 {
            truncated += 1;
            rows.push(vec![
                slice.level.to_string(),
                String::new(),
                String::new(),
                format_rational(&slice.hidden_mass),
                "hidden".to_string(),
            ]);
        }
    }
    let mut artifacts = vec![artifact("partitions.csv", csv_string(&["level", "left", "right", "length", "word"], rows)?)];
    if s.svg {
        let levels: Vec<Vec<Rational>> = slices.iter().map(slice_endpoints).collect();
        artifacts.push(artifact("partitions.svg", svg::partition_figure(&levels)));
    }
    let mut summary = format!("{}: levels 0..={}", s.scheme_name, s.levels);
    if truncated > 0 {
        summary.push_str(&format!(
            "; {truncated} levels truncated below length {}",
            format_rational(&s.min_length)
        ));
    }
    Ok(CommandOutput { artifacts, summary })
}

pub fn points(s: &Settings) -> Result<CommandOutput, CliError> {
    let ps = point_set(&s.scheme, &s.lambda, s.budget)?;
    let rows = ps
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| vec![i.to_string(), format_rational(p), to_f64(p).to_string()])
        .collect();
    Ok(CommandOutput {
        artifacts: vec![artifact("points.csv", csv_string(&["index", "point_exact", "point_float"], rows)?)],
        summary: format!("{}: {} points at lambda = {}", s.scheme_name, ps.len(), format_rational(&s.lambda)),
    })
}

pub fn count(s: &Settings) -> Result<CommandOutput, CliError> {
    let grid = build_grid(&s.count_grid, &s.scheme, s.budget)?;
    let limit = predicted_limit(&s.scheme, s.precision);
    let digits = digits_for(s.precision);
    let constant = limit.constant.to_decimal(digits);
    let mut rows = Vec::new();
    for l in &grid {
        let a = count_a(&s.scheme, l, s.budget)?;
        let x = point_set(&s.scheme, l, s.budget)?.len();
        let scaled = Rational::from(l * &a);
        rows.push(vec![
            format_rational(l),
            to_f64(l).to_string(),
            a.to_string(),
            x.to_string(),
            format_rational(&scaled),
            to_f64(&scaled).to_string(),
            constant.clone(),
        ]);
    }
    let header =
        ["lambda_exact", "lambda_float", "count_a", "count_x", "scaled_exact", "scaled_float", "predicted_constant"];
    let mut summary = format!("{}: predicted constant {constant}", s.scheme_name);
    if let Some(note) = &limit.note {
        summary.push_str(&format!(" (1/H = {}); {note}", limit.inverse_entropy.to_decimal(digits)));
    }
    Ok(CommandOutput { artifacts: vec![artifact("count.csv", csv_string(&header, rows)?)], summary })
}

pub fn analysis_options(s: &Settings) -> AnalysisOptions {
    AnalysisOptions {
        prec: s.precision,
        eps_sweep: s.eps.clone(),
        taylor_terms: s.taylor_terms,
        max_denominator: s.max_denominator.clone(),
    }
}

pub fn analyze_cmd(s: &Settings) -> Result<CommandOutput, CliError> {
    let doc = analyze(&s.scheme, Some(&s.scheme_name), &analysis_options(s))?;
    let summary = format!("{}: rank {}", s.scheme_name, doc["rank"]["rank"]);
    Ok(CommandOutput { artifacts: vec![artifact("analysis.json", pretty(&doc))], summary })
}

pub fn discrepancy(s: &Settings) -> Result<CommandOutput, CliError> {
    let grid = build_grid(&s.discrepancy_grid, &s.scheme, s.budget)?;
    let curve = discrepancy_curve(&s.scheme, &grid, s.budget)?;
    let rows = curve
        .iter()
        .map(|d| {
            vec![
                format_rational(&d.lambda),
                to_f64(&d.lambda).to_string(),
                d.n_points.to_string(),
                format_rational(&d.extreme),
                d.extreme_f64().to_string(),
                d.star_f64().to_string(),
            ]
        })
        .collect();
    let header = ["lambda_exact", "lambda_float", "n_points", "extreme_exact", "extreme_float", "star_float"];
    let rank = rank_report(&s.scheme);
    let hypothesis = match (s.hypothesis, rank.minimal_base.clone().filter(|_| rank.is_rank_one())) {
        (Hypothesis::Auto | Hypothesis::Geometric, Some(base)) => DecayHypothesis::Geometric { base },
        (Hypothesis::Geometric, None) => {
            return Err(CliError::Config("the geometric hypothesis needs a rank-one scheme".into()))
        }
        _ => DecayHypothesis::LogPower,
    };
    let fit = fit_decay(&curve_values(&curve), &hypothesis)?;
    let doc = json!({
        "scheme": s.scheme_name,
        "rank_one": rank.is_rank_one(),
        "hypothesis": hypothesis,
        "fit": fit,
    });
    let mut artifacts = vec![artifact("discrepancy.csv", csv_string(&header, rows)?), artifact("fit.json", pretty(&doc))];
    if s.svg {
        let pts: Vec<(f64, f64)> = curve.iter().map(|d| (1.0 / to_f64(&d.lambda), d.extreme_f64())).collect();
        artifacts.push(artifact("discrepancy.svg", svg::log_log_plot(&pts, "1/lambda", "extreme discrepancy")));
    }
    let summary = format!("{}: {:?}, residual {:.3e}", s.scheme_name, fit.model, fit.residual);
    Ok(CommandOutput { artifacts, summary })
}
