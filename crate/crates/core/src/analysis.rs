//! One JSON document summarizing a scheme: rank, entropy, renewal
//! constants and the predicted discrepancy decay rates.

use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

use crate::rational::format_rational;
use crate::real::Real;
use crate::renewal::{entropy, predicted_limit, rank_report, LATTICE_NOTE};
use crate::scheme::file::scheme_to_toml;
use crate::scheme::Scheme;
use crate::spectral::cf::{estimate_bad_approx_r, irrational_pair, predicted_p_star};
use crate::spectral::series::{
    default_eps_sweep, radius_r_star, rho_bound, taylor_g, PowerBasis, RStar, RootKind, SeriesCoeffs,
};
use crate::spectral::SpectralError;

#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    pub prec: u32,
    pub eps_sweep: Vec<Rational>,
    /// Taylor coefficients `b_0..b_n` listed for rank one.
    pub taylor_terms: usize,
    pub max_denominator: Integer,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            prec: 200,
            eps_sweep: default_eps_sweep(),
            taylor_terms: 20,
            max_denominator: Integer::from(1_000_000_000u64),
        }
    }
}

/// Decimal digits printed for a working precision.
pub fn digits_for(prec: u32) -> usize {
    ((prec as f64 * std::f64::consts::LOG10_2) as usize).saturating_sub(10).clamp(6, 60)
}

fn float_sci(f: &Float) -> String {
    format!("{:e}", f.to_f64())
}

fn r_star_json(r: &RStar, digits: usize) -> Value {
    let roots: Vec<Value> = r
        .roots
        .iter()
        .map(|(disc, kind)| {
            json!({
                "re": disc.center.real().to_string_radix(10, Some(digits)),
                "im": disc.center.imag().to_string_radix(10, Some(digits)),
                "radius": float_sci(&disc.radius),
                "count": disc.count,
                "kind": match kind {
                    RootKind::Base => "base",
                    RootKind::Spurious => "spurious",
                    RootKind::Genuine => "genuine",
                },
            })
        })
        .collect();
    json!({
        "eps": r.eps.to_decimal(digits),
        "summability_radius": r.summability_radius.to_decimal(digits),
        "r_star": r.value.to_decimal(digits),
        "root_limited": r.root_limited,
        "roots": roots,
    })
}

pub fn analyze(scheme: &Scheme, name: Option<&str>, opts: &AnalysisOptions) -> Result<Value, SpectralError> {
    let prec = opts.prec;
    let digits = digits_for(prec);
    let rank = rank_report(scheme);
    let h = entropy(scheme, prec);
    let limit = predicted_limit(scheme, prec);
    let mut doc = json!({
        "scheme": {
            "name": name,
            "definition": scheme_to_toml(scheme, name).ok(),
        },
        "precision": { "bits": prec, "digits": digits },
        "rank": rank.to_json(),
        "entropy": { "value": h.value.to_decimal(digits), "terms": h.terms },
        "limit": limit.to_json(digits),
        "constant_note": LATTICE_NOTE,
    });
    if rank.is_rank_one() {
        let basis = PowerBasis::from_scheme(scheme)?;
        let coeffs = match taylor_g(&basis, opts.taylor_terms) {
            SeriesCoeffs::Exact(v) => v.iter().map(format_rational).collect::<Vec<_>>(),
            SeriesCoeffs::Enclosed(v) => v.iter().map(|r| r.to_decimal(digits)).collect(),
        };
        let rf = crate::spectral::series::denominator_series(&basis);
        let mut sweep = Vec::new();
        let mut best: Option<(RStar, Rational)> = None;
        for e in &opts.eps_sweep {
            let r = radius_r_star(&basis, &Real::from_rational(e, prec))?;
            sweep.push(r_star_json(&r, digits));
            if best.as_ref().is_none_or(|(b, _)| r.value.mid() > b.value.mid()) {
                best = Some((r, e.clone()));
            }
        }
        let (best, best_eps) = best.ok_or_else(|| SpectralError::Domain("empty eps sweep".into()))?;
        let (lo, hi) = rho_bound(&basis, &Real::from_rational(&best_eps, prec))?;
        doc["rank_one"] = json!({
            "power_sum": { "numerator": rf.numerator.to_string(), "denominator": rf.denominator.to_string() },
            "taylor_coefficients": coeffs,
            "r_star_sweep": sweep,
            "best": { "eps": format_rational(&best_eps), "r_star": best.value.to_decimal(digits) },
            "rho_interval": [lo.to_decimal(digits), hi.to_decimal(digits)],
        });
    } else if let Some(pair) = irrational_pair(scheme) {
        let est = estimate_bad_approx_r(scheme, pair, &opts.max_denominator, None)?;
        let p_star = predicted_p_star(est.r_hat).ok();
        doc["higher_rank"] = json!({
            "pair": [pair.0.to_string(), pair.1.to_string()],
            "bad_approximation": est,
            "estimate_note": "empirical, from the convergents below the denominator budget; not a proof",
            "p_star": p_star,
        });
    }
    Ok(doc)
}
