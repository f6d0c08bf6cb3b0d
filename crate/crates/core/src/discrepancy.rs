//! Exact discrepancy of the empirical measures on `X_lambda`, curves over a
//! grid of `lambda` and decay fits.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{point_set, EnumError, PointSet};
use crate::fit::{least_squares, LinearFit};
use crate::rational::to_f64;
use crate::real::Real;
use crate::renewal::rank_report;
use crate::scheme::{Scheme, Symbol};
use crate::spectral::cf::{estimate_bad_approx_r, irrational_pair, predicted_p_star, BadApproxEstimate};
use crate::spectral::series::{rho_bound, PowerBasis};
use crate::spectral::SpectralError;

/// Grid points dropped from the start of every fit.
pub const FIT_SKIP: usize = 3;
/// Slack allowed when comparing a fitted rate with a predicted one.
pub const RATE_TOLERANCE: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscrepancyError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("interval must satisfy 0 <= a < b <= 1")]
    InvalidInterval,
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// `mu_lambda([a, b))`: the fraction of points in `[a, b)`.
pub fn mu_measure(points: &PointSet, a: &Rational, b: &Rational) -> Result<Rational, DiscrepancyError> {
    if points.is_empty() {
        return Err(DiscrepancyError::EmptyPointSet);
    }
    if !(*a >= 0 && a < b && *b <= 1) {
        return Err(DiscrepancyError::InvalidInterval);
    }
    Ok(Rational::from((points.count_in(a, b) as u64, points.len() as u64)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyValue {
    #[serde(with = "crate::rational::serde_rational")]
    pub lambda: Rational,
    pub n_points: usize,
    /// Sup over all subintervals.
    #[serde(with = "crate::rational::serde_rational")]
    pub extreme: Rational,
    /// Sup over intervals anchored at 0.
    #[serde(with = "crate::rational::serde_rational")]
    pub star: Rational,
}

impl DiscrepancyValue {
    pub fn extreme_f64(&self) -> f64 {
        to_f64(&self.extreme)
    }

    pub fn star_f64(&self) -> f64 {
        to_f64(&self.star)
    }
}

/// `(extreme, star)` of a finite set in `[0, 1)`. Unsorted input is sorted
/// and deduplicated first.
pub fn discrepancies(points: &[Rational]) -> Result<(Rational, Rational), DiscrepancyError> {
    if points.is_empty() {
        return Err(DiscrepancyError::EmptyPointSet);
    }
    let sorted;
    let xs = if points.windows(2).all(|w| w[0] < w[1]) {
        points
    } else {
        let mut v = points.to_vec();
        v.sort();
        v.dedup();
        sorted = v;
        &sorted[..]
    };
    let n = Integer::from(xs.len());
    let mut dmax: Option<Rational> = None;
    let mut dmin: Option<Rational> = None;
    let mut star = Rational::new();
    for (k, x) in xs.iter().enumerate() {
        let above = Rational::from((Integer::from(k + 1), n.clone())) - x;
        let below = x - Rational::from((Integer::from(k), n.clone()));
        if above > star {
            star = above.clone();
        }
        if below > star {
            star = below;
        }
        if dmax.as_ref().is_none_or(|m| above > *m) {
            dmax = Some(above.clone());
        }
        if dmin.as_ref().is_none_or(|m| above < *m) {
            dmin = Some(above);
        }
    }
    let extreme = Rational::from((1, n)) + dmax.unwrap() - dmin.unwrap();
    Ok((extreme, star))
}

pub fn extreme_discrepancy(points: &PointSet) -> Result<DiscrepancyValue, DiscrepancyError> {
    let (extreme, star) = discrepancies(&points.points)?;
    Ok(DiscrepancyValue { lambda: points.lambda.clone(), n_points: points.len(), extreme, star })
}

/// Point sets and discrepancies along a grid, in grid order.
pub fn discrepancy_curve(
    scheme: &Scheme,
    grid: &[Rational],
    budget: usize,
) -> Result<Vec<DiscrepancyValue>, DiscrepancyError> {
    grid.par_iter()
        .map(|l| extreme_discrepancy(&point_set(scheme, l, budget)?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayHypothesis {
    /// `D ~ C rho^n` with `lambda = base^n`.
    Geometric {
        #[serde(with = "crate::rational::serde_rational")]
        base: Rational,
    },
    /// `D ~ C (-ln lambda)^(-P)`.
    LogPower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayModel {
    Geometric { rho_hat: f64 },
    LogPower { p_hat: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridValue {
    #[serde(with = "crate::rational::serde_rational")]
    pub lambda: Rational,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub model: DecayModel,
    /// RMS residual of the log-linear fit.
    pub residual: f64,
    /// Points skipped at the start of the grid.
    pub skipped: usize,
    pub grid: Vec<GridValue>,
}

/// Least-squares fit of `ln D` against `n = ln lambda / ln base`
/// (geometric) or against `ln(-ln lambda)` (log-power), skipping the first
/// [`FIT_SKIP`] points.
pub fn fit_decay(curve: &[GridValue], hypothesis: &DecayHypothesis) -> Result<DecayFit, DiscrepancyError> {
    if curve.len() < 5 {
        return Err(DiscrepancyError::DegenerateData(format!("{} points, need at least 5", curve.len())));
    }
    if let Some(p) = curve.iter().find(|p| !(p.value.is_finite() && p.value > 0.0)) {
        return Err(DiscrepancyError::DegenerateData(format!("value {} at lambda {}", p.value, p.lambda)));
    }
    let window = &curve[FIT_SKIP..];
    let ys: Vec<f64> = window.iter().map(|p| p.value.ln()).collect();
    let ln_lambda = |p: &GridValue| Real::from_rational(&p.lambda, 128).ln().to_f64();
    let xs: Vec<f64> = match hypothesis {
        DecayHypothesis::Geometric { base } => {
            let lb = Real::from_rational(base, 128).ln().to_f64();
            window.iter().map(|p| ln_lambda(p) / lb).collect()
        }
        DecayHypothesis::LogPower => window.iter().map(|p| (-ln_lambda(p)).ln()).collect(),
    };
    let LinearFit { slope, residual, .. } = least_squares(&xs, &ys)
        .ok_or_else(|| DiscrepancyError::DegenerateData("abscissae do not vary".into()))?;
    let model = match hypothesis {
        DecayHypothesis::Geometric { .. } => DecayModel::Geometric { rho_hat: slope.exp() },
        DecayHypothesis::LogPower => DecayModel::LogPower { p_hat: -slope },
    };
    Ok(DecayFit { model, residual, skipped: FIT_SKIP, grid: curve.to_vec() })
}

pub fn curve_values(curve: &[DiscrepancyValue]) -> Vec<GridValue> {
    curve.iter().map(|d| GridValue { lambda: d.lambda.clone(), value: d.extreme_f64() }).collect()
}

pub const UPPER_BOUND_CAVEAT: &str =
    "the predicted exponent is an upper bound on the guaranteed rate; observed decay may be faster";

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "rank", rename_all = "snake_case")]
pub enum TheoremReport {
    RankOne {
        /// Admissible rates `(x / R*, 1)` as decimal strings.
        rho_interval: (String, String),
        fit: DecayFit,
        rho_hat: f64,
        below_one: bool,
        /// `rho_hat <= 1 + tolerance`.
        within_sup: bool,
        /// `rho_hat <= x / R* + tolerance`.
        within_inf: bool,
    },
    Higher {
        pair: (String, String),
        estimate: BadApproxEstimate,
        /// `None` when `r_hat >= 1/2`.
        p_star: Option<f64>,
        fit: DecayFit,
        p_hat: f64,
        positive: bool,
        /// `p_hat <= p_star`, when `p_star` exists.
        within_prediction: Option<bool>,
        caveat: String,
    },
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub budget: usize,
    pub prec: u32,
    /// Denominator budget for the continued fraction of the log ratio.
    pub max_denominator: Integer,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            budget: crate::enumerate::DEFAULT_BUDGET,
            prec: 200,
            max_denominator: Integer::from(1_000_000_000u64),
        }
    }
}

/// Compares the discrepancy decay along `grid` with the predicted rate:
/// geometric for rank one, logarithmic otherwise.
pub fn theorem_check(
    scheme: &Scheme,
    eps: &Rational,
    grid: &[Rational],
    opts: &CheckOptions,
) -> Result<TheoremReport, DiscrepancyError> {
    let curve = curve_values(&discrepancy_curve(scheme, grid, opts.budget)?);
    let report = rank_report(scheme);
    if report.is_rank_one() {
        let basis = PowerBasis::from_scheme(scheme)?;
        let (lo, hi) = rho_bound(&basis, &Real::from_rational(eps, opts.prec))?;
        let base = report.minimal_base.expect("rank one has a base");
        let fit = fit_decay(&curve, &DecayHypothesis::Geometric { base })?;
        let DecayModel::Geometric { rho_hat } = fit.model else { unreachable!() };
        Ok(TheoremReport::RankOne {
            rho_interval: (lo.to_decimal(12), hi.to_decimal(12)),
            rho_hat,
            below_one: rho_hat < 1.0,
            within_sup: rho_hat <= hi.hi().to_f64() + RATE_TOLERANCE,
            within_inf: rho_hat <= lo.hi().to_f64() + RATE_TOLERANCE,
            fit,
        })
    } else {
        let pair: (Symbol, Symbol) = irrational_pair(scheme)
            .ok_or_else(|| DiscrepancyError::DegenerateData("no pair with irrational log ratio".into()))?;
        let estimate = estimate_bad_approx_r(scheme, pair, &opts.max_denominator, None)?;
        let p_star = predicted_p_star(estimate.r_hat).ok();
        let fit = fit_decay(&curve, &DecayHypothesis::LogPower)?;
        let DecayModel::LogPower { p_hat } = fit.model else { unreachable!() };
        Ok(TheoremReport::Higher {
            pair: (pair.0.to_string(), pair.1.to_string()),
            estimate,
            p_star,
            p_hat,
            positive: p_hat > 0.0,
            within_prediction: p_star.map(|p| p_hat <= p),
            caveat: UPPER_BOUND_CAVEAT.into(),
            fit,
        })
    }
}
