//! Invariant battery run by `kakutani verify`.

use kakutani::discrepancy::{extreme_discrepancy, mu_measure};
use kakutani::enumerate::{count_a, enumerate_a, partition_level, point_set};
use kakutani::renewal::{entropy, rank_report};
use kakutani::scheme::Scheme;
use kakutani::spectral::dirichlet::f_eval;
use rug::{Complex, Float, Rational};

use crate::error::CliError;

/// Length scale used for the enumeration checks.
const CHECK_LAMBDA: (u32, u32) = (1, 1000);
const CHECK_LEVELS: usize = 5;
/// Grid points used for the pairwise discrepancy check.
const PAIR_SAMPLE: usize = 60;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub module: &'static str,
    pub invariant: &'static str,
    pub instance: String,
    /// `None` on success, otherwise what went wrong.
    pub failure: Option<String>,
}

impl CheckLine {
    pub fn render(&self) -> String {
        match &self.failure {
            None => format!("PASS {} {} [{}]", self.module, self.invariant, self.instance),
            Some(why) => format!("FAIL {} {} [{}]: {why}", self.module, self.invariant, self.instance),
        }
    }
}

fn line(module: &'static str, invariant: &'static str, instance: &str, ok: bool, why: impl FnOnce() -> String) -> CheckLine {
    CheckLine { module, invariant, instance: instance.to_string(), failure: (!ok).then(why) }
}

/// Runs every check on one scheme. Budget errors abort the run; all other
/// outcomes become lines.
pub fn check_scheme(name: &str, scheme: &Scheme, budget: usize, prec: u32) -> Result<Vec<CheckLine>, CliError> {
    let mut out = Vec::new();
    let lambda = Rational::from(CHECK_LAMBDA);

    let mass: Rational = scheme.blocks().iter().map(|b| b.mass()).sum();
    out.push(line("scheme", "mass-one", name, mass == 1, || format!("MassNotOne: total {mass}")));

    let words = enumerate_a(scheme, &lambda, budget)?;
    let count = count_a(scheme, &lambda, budget)?;
    out.push(line("enumerate", "enumeration-matches-count", name, count == words.len(), || {
        format!("{} words, count {count}", words.len())
    }));
    let all_long = words.iter().all(|w| scheme.word_alpha(w) >= lambda);
    out.push(line("enumerate", "words-above-lambda", name, all_long, || "a word shorter than lambda".into()));

    let points = point_set(scheme, &lambda, budget)?;
    let expected = match scheme.zero_symbol() {
        Some(z) => count.clone() - count_a(scheme, &Rational::from(&lambda / &scheme.alpha(z)), budget)?,
        None => count.clone(),
    };
    out.push(line("enumerate", "point-count-identity", name, expected == points.len(), || {
        format!("{} points, expected {expected}", points.len())
    }));
    let in_range = points.points.windows(2).all(|w| w[0] < w[1])
        && points.points.first().is_some_and(|p| *p >= 0)
        && points.points.last().is_some_and(|p| *p < 1);
    out.push(line("enumerate", "points-sorted-in-unit-interval", name, in_range, || "out of order or range".into()));

    let min_length = Rational::from((1, 1_000_000));
    let mut partition_failure = None;
    for n in 0..=CHECK_LEVELS {
        let slice = partition_level(scheme, n, &min_length, budget)?;
        let listed: Rational = slice.intervals.iter().map(|i| i.length.clone()).sum();
        if Rational::from(&listed + &slice.hidden_mass) != 1 {
            partition_failure = Some(format!("level {n} mass {}", Rational::from(&listed + &slice.hidden_mass)));
            break;
        }
        let mut sorted: Vec<_> = slice.intervals.iter().collect();
        sorted.sort_by(|a, b| a.left.cmp(&b.left));
        if sorted.windows(2).any(|w| w[0].right() > w[1].left) {
            partition_failure = Some(format!("level {n} has overlapping intervals"));
            break;
        }
    }
    let ok = partition_failure.is_none();
    out.push(line("enumerate", "partitions-tile", name, ok, || partition_failure.unwrap_or_default()));

    match extreme_discrepancy(&points) {
        Ok(d) => {
            let bounded = d.extreme > 0 && d.extreme <= 1 && d.star <= d.extreme;
            out.push(line("discrepancy", "value-bounds", name, bounded, || {
                format!("extreme {} star {}", d.extreme, d.star)
            }));
            let step = points.len().div_ceil(PAIR_SAMPLE).max(1);
            let mut cuts: Vec<Rational> = points.points.iter().step_by(step).cloned().collect();
            cuts.push(Rational::from(1));
            let mut worst = Rational::new();
            for (i, a) in cuts.iter().enumerate() {
                for b in &cuts[i + 1..] {
                    let mu = mu_measure(&points, a, b).map_err(CliError::from)?;
                    let gap = Rational::from(&mu - &Rational::from(b - a)).abs();
                    if gap > worst {
                        worst = gap;
                    }
                }
            }
            out.push(line("discrepancy", "dominates-sampled-intervals", name, worst <= d.extreme, || {
                format!("interval gap {worst} exceeds {}", d.extreme)
            }));
        }
        Err(e) => out.push(line("discrepancy", "value-bounds", name, false, || e.to_string())),
    }

    let h = entropy(scheme, prec).value;
    out.push(line("renewal", "entropy-positive", name, h.certainly_gt(&kakutani::real::Real::from_int(0, prec)), || {
        format!("H = {}", h.to_decimal(10))
    }));
    let rank = rank_report(scheme);
    let base_ok = !rank.is_rank_one() || rank.minimal_base.as_ref().is_some_and(|x| *x > 0 && *x < 1);
    out.push(line("renewal", "rank-one-base-in-unit-interval", name, base_ok, || "bad minimal base".into()));

    let one = Complex::with_val(prec, (1, 0));
    match f_eval(scheme, &one) {
        Ok((f, err)) => {
            let modulus = Float::with_val(prec, f.abs_ref());
            out.push(line("spectral", "f-vanishes-at-one", name, modulus <= err, || {
                format!("|f(1)| = {} > {}", modulus.to_f64(), err.to_f64())
            }));
        }
        Err(e) => out.push(line("spectral", "f-vanishes-at-one", name, false, || e.to_string())),
    }
    Ok(out)
}

/// Runs the battery on each scheme and renders the report.
pub fn run_battery(schemes: &[(String, Scheme)], budget: usize, prec: u32) -> Result<(String, usize), CliError> {
    let mut text = String::new();
    let mut failures = 0;
    let mut total = 0;
    for (name, scheme) in schemes {
        for l in check_scheme(name, scheme, budget, prec)? {
            total += 1;
            failures += usize::from(l.failure.is_some());
            text.push_str(&l.render());
            text.push('\n');
        }
    }
    text.push_str(&format!("{} checks, {failures} failed\n", total));
    Ok((text, failures))
}
