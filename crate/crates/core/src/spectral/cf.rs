//! Certified continued fractions and the empirical badly-approximable
//! exponent of `ln alpha_j / ln alpha_k`.

use rug::float::Round;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use super::SpectralError;
use crate::real::Real;
use crate::renewal::rational_log_ratio;
use crate::scheme::{Scheme, Symbol};

#[derive(Clone, Debug)]
pub enum CfInput {
    Exact(Rational),
    Enclosed(Real),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CfStop {
    MaxTerms,
    MaxDenominator,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    /// `a_0; a_1, a_2, ...`
    pub quotients: Vec<Integer>,
    /// Convergent denominators `q_0, q_1, ...`, one per quotient.
    pub denominators: Vec<Integer>,
    pub stop: CfStop,
}

/// Convergent denominators of a quotient list.
pub fn denominators(quotients: &[Integer]) -> Vec<Integer> {
    let (mut prev, mut cur) = (Integer::from(0), Integer::from(1));
    let mut out = Vec::with_capacity(quotients.len());
    for (m, a) in quotients.iter().enumerate() {
        if m > 0 {
            let next = Integer::from(a * &cur) + &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        out.push(cur.clone());
    }
    out
}

/// Partial quotients of `x`, each emitted only once the enclosure fixes it.
///
/// Stops after `max_terms` quotients or before the first convergent
/// denominator exceeding `max_denominator`.
pub fn continued_fraction(
    x: &CfInput,
    max_terms: usize,
    max_denominator: &Integer,
) -> Result<ContinuedFraction, SpectralError> {
    let mut quotients: Vec<Integer> = Vec::new();
    let (mut q_prev, mut q_cur) = (Integer::from(0), Integer::from(1));
    let mut push = |a: Integer, quotients: &mut Vec<Integer>| -> bool {
        if !quotients.is_empty() {
            let next = Integer::from(&a * &q_cur) + &q_prev;
            if next > *max_denominator {
                return false;
            }
            q_prev = std::mem::replace(&mut q_cur, next);
        }
        quotients.push(a);
        true
    };
    let finish = |quotients: Vec<Integer>, stop| {
        let denominators = denominators(&quotients);
        Ok(ContinuedFraction { quotients, denominators, stop })
    };
    match x {
        CfInput::Exact(q) => {
            let mut r = q.clone();
            loop {
                if quotients.len() >= max_terms {
                    return finish(quotients, CfStop::MaxTerms);
                }
                let a = Integer::from(r.floor_ref());
                r -= &a;
                if !push(a, &mut quotients) {
                    return finish(quotients, CfStop::MaxDenominator);
                }
                if r == 0 {
                    return Err(SpectralError::RationalInput { quotients });
                }
                r.recip_mut();
            }
        }
        CfInput::Enclosed(real) => {
            let prec = real.prec();
            let (mut lo, mut hi) = (real.lo().clone(), real.hi().clone());
            loop {
                if quotients.len() >= max_terms {
                    return finish(quotients, CfStop::MaxTerms);
                }
                let exhausted = |quotients: Vec<Integer>| SpectralError::PrecisionExhausted {
                    certified: quotients.len(),
                    quotients,
                };
                if !lo.is_finite() || !hi.is_finite() {
                    return Err(exhausted(quotients));
                }
                let a = lo.to_integer_round(Round::Down).unwrap().0;
                let b = hi.to_integer_round(Round::Down).unwrap().0;
                if a != b || lo == a {
                    return Err(exhausted(quotients));
                }
                // x - a lies in (0, 1): invert with outward rounding
                let f_lo = Float::with_val_round(prec, &lo - &a, Round::Down).0;
                let f_hi = Float::with_val_round(prec, &hi - &a, Round::Up).0;
                if !push(a, &mut quotients) {
                    return finish(quotients, CfStop::MaxDenominator);
                }
                lo = Float::with_val_round(prec, f_hi.recip_ref(), Round::Down).0;
                hi = Float::with_val_round(prec, f_lo.recip_ref(), Round::Up).0;
            }
        }
    }
}

/// `max ln(a_{m+1}) / ln(q_m)` over convergents with `q_m >= min_denominator`
/// (and `q_m > 1`), with the maximizing `(q_m, a_{m+1})`.
pub fn r_hat_from_quotients(
    quotients: &[Integer],
    min_denominator: &Integer,
) -> Option<(f64, Integer, Integer)> {
    let qs = denominators(quotients);
    let mut best: Option<(f64, Integer, Integer)> = None;
    for m in 0..quotients.len().saturating_sub(1) {
        let q = &qs[m];
        if *q <= 1 || q < min_denominator {
            continue;
        }
        let a = &quotients[m + 1];
        let r = a.to_f64().ln() / q.to_f64().ln();
        if best.as_ref().is_none_or(|b| r > b.0) {
            best = Some((r, q.clone(), a.clone()));
        }
    }
    best
}

/// An empirical estimate, not a proof: it only sees the convergents below
/// the denominator budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BadApproxEstimate {
    pub gamma: f64,
    pub r_hat: f64,
    /// Largest certified convergent denominator.
    pub certified_up_to: String,
    /// Convergents below this were ignored.
    pub min_denominator: String,
    /// The convergent attaining `r_hat`, as `(q_m, a_{m+1})`.
    pub worst: Option<(String, String)>,
    pub quotients: Vec<String>,
}

/// Denominators below `sqrt(max_denominator)` are ignored by default.
pub fn default_min_denominator(max_denominator: &Integer) -> Integer {
    Integer::from(max_denominator.sqrt_ref())
}

/// Estimates `r` such that `ln alpha_j / ln alpha_k` is `(2 + r)`-badly
/// approximable, from its convergents with denominators up to
/// `max_denominator`.
pub fn estimate_bad_approx_r(
    scheme: &Scheme,
    pair: (Symbol, Symbol),
    max_denominator: &Integer,
    min_denominator: Option<&Integer>,
) -> Result<BadApproxEstimate, SpectralError> {
    for s in [pair.0, pair.1] {
        scheme.check_symbol(s).map_err(|e| SpectralError::Domain(e.to_string()))?;
    }
    let (aj, ak) = (scheme.alpha(pair.0), scheme.alpha(pair.1));
    if aj == ak {
        return Err(SpectralError::Domain("the pair must have distinct lengths".into()));
    }
    if let Some(g) = rational_log_ratio(&aj, &ak) {
        return continued_fraction(&CfInput::Exact(g), usize::MAX, max_denominator).and_then(|_| {
            Err(SpectralError::Certification("rational ratio exceeded the denominator budget".into()))
        });
    }
    let mut prec = 4 * max_denominator.significant_bits() + 64;
    let cf = loop {
        let gamma = Real::from_rational(&aj, prec).ln().div(&Real::from_rational(&ak, prec).ln());
        match continued_fraction(&CfInput::Enclosed(gamma), usize::MAX, max_denominator) {
            Ok(cf) => break cf,
            Err(SpectralError::PrecisionExhausted { .. }) if prec < 1 << 16 => prec *= 2,
            Err(e) => return Err(e),
        }
    };
    let min_den = min_denominator.cloned().unwrap_or_else(|| default_min_denominator(max_denominator));
    let best = r_hat_from_quotients(&cf.quotients, &min_den);
    Ok(BadApproxEstimate {
        gamma: aj.to_f64().ln() / ak.to_f64().ln(),
        r_hat: best.as_ref().map_or(0.0, |b| b.0.max(0.0)),
        certified_up_to: cf.denominators.last().map_or("1".into(), |q| q.to_string()),
        min_denominator: min_den.to_string(),
        worst: best.map(|(_, q, a)| (q.to_string(), a.to_string())),
        quotients: cf.quotients.iter().map(|a| a.to_string()).collect(),
    })
}

/// The first pair of symbols (in canonical order, depths 0 and 1 of each
/// block) whose log ratio is irrational.
pub fn irrational_pair(scheme: &Scheme) -> Option<(Symbol, Symbol)> {
    let mut candidates = Vec::new();
    for (b, block) in scheme.blocks().iter().enumerate() {
        candidates.push(Symbol::new(b, 0));
        if matches!(block, crate::scheme::BlockSpec::GeoTail { .. }) {
            candidates.push(Symbol::new(b, 1));
        }
    }
    for (i, &s) in candidates.iter().enumerate() {
        for &t in &candidates[i + 1..] {
            if rational_log_ratio(&scheme.alpha(s), &scheme.alpha(t)).is_none() {
                return Some((s, t));
            }
        }
    }
    None
}

/// `(1 - 2r) / (8 (1 + r))` for `0 <= r < 1/2`.
pub fn predicted_p_star(r: f64) -> Result<f64, SpectralError> {
    if !(0.0..0.5).contains(&r) {
        return Err(SpectralError::Domain(format!("r = {r} outside [0, 1/2)")));
    }
    Ok((1.0 - 2.0 * r) / (8.0 * (1.0 + r)))
}
