//! Entropy, rank and the renewal asymptotics of `|A_lambda|`.

use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::{count_a, EnumError};
use crate::fit::{least_squares, LinearFit};
use crate::rational::format_rational;
use crate::real::Real;
use crate::scheme::{BlockSpec, Scheme};

/// Exponents of a rank-one scheme over its minimal base `x`: atoms give
/// single exponents, a tail with `first = x^p`, `ratio = x^q` gives the
/// progression `p + k q`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct LatticeExponents {
    pub finite: Vec<u64>,
    pub progressions: Vec<(u64, u64)>,
}

impl LatticeExponents {
    /// Every exponent `<= limit`, with multiplicity, in increasing order.
    pub fn expand(&self, limit: u64) -> Vec<u64> {
        let mut out: Vec<u64> = self.finite.iter().copied().filter(|&n| n <= limit).collect();
        for &(p, q) in &self.progressions {
            let mut n = p;
            while n <= limit {
                out.push(n);
                n += q;
            }
        }
        out.sort_unstable();
        out
    }

    pub fn gcd(&self) -> u64 {
        let mut g = 0u64;
        for &n in &self.finite {
            g = gcd_u64(g, n);
        }
        for &(p, q) in &self.progressions {
            g = gcd_u64(gcd_u64(g, p), q);
        }
        g
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BlockExponent {
    Atom(u64),
    Tail { first: u64, ratio: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub rank: Rank,
    /// Pairwise coprime integers; every generator factors over them.
    pub base: Vec<Integer>,
    /// One exponent vector per generator (atom lengths, then each tail's
    /// first length and ratio, in block order), over `base`.
    pub generators: Vec<Vec<i64>>,
    pub minimal_base: Option<Rational>,
    /// Per-block exponents over `minimal_base` (rank one only).
    pub exponents: Option<Vec<BlockExponent>>,
}

impl RankReport {
    pub fn is_rank_one(&self) -> bool {
        self.rank == Rank::Finite(1)
    }

    pub fn lattice(&self) -> Option<LatticeExponents> {
        let blocks = self.exponents.as_ref()?;
        let mut out = LatticeExponents::default();
        for b in blocks {
            match *b {
                BlockExponent::Atom(n) => out.finite.push(n),
                BlockExponent::Tail { first, ratio } => out.progressions.push((first, ratio)),
            }
        }
        Some(out)
    }

    pub fn to_json(&self) -> Value {
        let rank = match self.rank {
            Rank::Finite(n) => json!(n),
            Rank::Infinite => json!("infinite"),
        };
        json!({
            "rank": rank,
            "coprime_base": self.base.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "generator_exponents": self.generators,
            "minimal_base": self.minimal_base.as_ref().map(format_rational),
            "exponents": self.exponents,
        })
    }
}

/// Splits a multiset of integers `> 1` into a pairwise coprime base over
/// which every input factors.
fn coprime_base(mut items: Vec<Integer>) -> Vec<Integer> {
    items.retain(|x| *x > 1);
    loop {
        items.sort();
        items.dedup();
        let mut split = None;
        'outer: for i in 0..items.len() {
            for j in i + 1..items.len() {
                let g = Integer::from(items[i].gcd_ref(&items[j]));
                if g > 1 {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = split else { return items };
        let a = Integer::from(&items[i] / &g);
        let b = Integer::from(&items[j] / &g);
        items.remove(j);
        items.remove(i);
        items.extend([a, b, g].into_iter().filter(|x| *x > 1));
    }
}

fn valuation(n: &Integer, b: &Integer) -> i64 {
    let mut n = n.clone();
    let mut v = 0;
    while n.is_divisible(b) {
        n /= b;
        v += 1;
    }
    v
}

fn exponent_vector(q: &Rational, base: &[Integer]) -> Vec<i64> {
    base.iter().map(|b| valuation(q.numer(), b) - valuation(q.denom(), b)).collect()
}

fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Rational>> =
        rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let factor = Rational::from(&m[r][c] / &m[rank][c]);
                for k in c..cols {
                    let delta = Rational::from(&factor * &m[rank][k]);
                    m[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `ln a / ln b` when it is rational, for positive `a`, `b` other than 1.
pub(crate) fn rational_log_ratio(a: &Rational, b: &Rational) -> Option<Rational> {
    let mut items = vec![a.numer().clone(), a.denom().clone(), b.numer().clone(), b.denom().clone()];
    items.retain(|x| *x > 1);
    let base = coprime_base(items);
    let (ea, eb) = (exponent_vector(a, &base), exponent_vector(b, &base));
    if integer_rank(&[ea.clone(), eb.clone()]) != 1 {
        return None;
    }
    let i = eb.iter().position(|&v| v != 0)?;
    Some(Rational::from((ea[i], eb[i])))
}

fn generators(scheme: &Scheme) -> Vec<Rational> {
    let mut out = Vec::new();
    for b in scheme.blocks() {
        match b {
            BlockSpec::Atom { length } => out.push(length.clone()),
            BlockSpec::GeoTail { first, ratio, .. } => {
                out.push(first.clone());
                out.push(ratio.clone());
            }
        }
    }
    out
}

/// Rank of the multiplicative group generated by all interval lengths, with
/// the minimal base and per-block exponents in the rank-one case.
pub fn rank_report(scheme: &Scheme) -> RankReport {
    let gens = generators(scheme);
    let mut raw = Vec::new();
    for g in &gens {
        raw.push(g.numer().clone());
        raw.push(g.denom().clone());
    }
    let base = coprime_base(raw);
    let vectors: Vec<Vec<i64>> = gens.iter().map(|g| exponent_vector(g, &base)).collect();
    let rank = integer_rank(&vectors);
    let mut report =
        RankReport { rank: Rank::Finite(rank), base: base.clone(), generators: vectors.clone(), minimal_base: None, exponents: None };
    if rank != 1 {
        return report;
    }
    // Primitive direction of the rank-one lattice.
    let first = vectors.iter().find(|v| v.iter().any(|&x| x != 0)).expect("lengths below 1 are non-trivial");
    let content = first.iter().fold(0i64, |g, &x| gcd_i64(g, x));
    let mut dir: Vec<i64> = first.iter().map(|x| x / content).collect();
    let pivot = dir.iter().position(|&x| x != 0).unwrap();
    let mut mult: Vec<i64> = vectors.iter().map(|v| v[pivot] / dir[pivot]).collect();
    // Orient so that lengths are positive powers of a base below 1.
    if mult[0] < 0 {
        dir.iter_mut().for_each(|x| *x = -*x);
        mult.iter_mut().for_each(|x| *x = -*x);
    }
    let d = mult.iter().fold(0i64, |g, &x| gcd_i64(g, x));
    let mut x = Rational::from(1);
    for (b, e) in base.iter().zip(&dir) {
        x *= Rational::from(b.clone()).pow((e * d) as i32);
    }
    let mut exps = Vec::new();
    let mut it = mult.iter().map(|m| (m / d) as u64);
    for b in scheme.blocks() {
        exps.push(match b {
            BlockSpec::Atom { .. } => BlockExponent::Atom(it.next().unwrap()),
            BlockSpec::GeoTail { .. } => {
                let first = it.next().unwrap();
                BlockExponent::Tail { first, ratio: it.next().unwrap() }
            }
        });
    }
    report.minimal_base = Some(x);
    report.exponents = Some(exps);
    report
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyValue {
    pub value: Real,
    /// Closed form of each block's contribution.
    pub terms: Vec<String>,
}

/// `H = -sum alpha_i ln alpha_i`, summing tails in closed form.
pub fn entropy(scheme: &Scheme, prec: u32) -> EntropyValue {
    let mut value = Real::from_int(0, prec);
    let mut terms = Vec::new();
    for b in scheme.blocks() {
        match b {
            BlockSpec::Atom { length } => {
                let a = Real::from_rational(length, prec);
                value = &value - &(&a * &a.ln());
                terms.push(format!("-({0}) ln({0})", format_rational(length)));
            }
            BlockSpec::GeoTail { first, ratio, .. } => {
                let a = Real::from_rational(first, prec);
                let r = Real::from_rational(ratio, prec);
                let one_minus = Rational::from(1 - ratio);
                let c1 = Real::from_rational(&Rational::from(first / &one_minus), prec);
                let c2 = Real::from_rational(
                    &(Rational::from(first * ratio) / Rational::from(&one_minus * &one_minus)),
                    prec,
                );
                value = &value - &(&c1 * &a.ln());
                value = &value - &(&c2 * &r.ln());
                terms.push(format!(
                    "-({a}/(1-{r})) ln({a}) - ({a}*{r}/(1-{r})^2) ln({r})",
                    a = format_rational(first),
                    r = format_rational(ratio)
                ));
            }
        }
    }
    EntropyValue { value, terms }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Summability {
    Finite(Real),
    Infinite,
}

impl Summability {
    pub fn is_finite(&self) -> bool {
        matches!(self, Summability::Finite(_))
    }
}

/// `sum alpha_i^(1 - eps)`. Always finite for atoms and geometric tails.
pub fn eps_summability(scheme: &Scheme, eps: &Real) -> Summability {
    let prec = eps.prec();
    let s = &Real::from_int(1, prec) - eps;
    let one = Real::from_int(1, prec);
    let mut total = Real::from_int(0, prec);
    for b in scheme.blocks() {
        match b {
            BlockSpec::Atom { length } => {
                total = &total + &Real::from_rational(length, prec).pow(&s);
            }
            BlockSpec::GeoTail { first, ratio, .. } => {
                let a = Real::from_rational(first, prec).pow(&s);
                let r = Real::from_rational(ratio, prec).pow(&s);
                total = &total + &a.div(&(&one - &r));
            }
        }
    }
    Summability::Finite(total)
}

/// Countable families that can be analysed but not enumerated.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolicFamily {
    /// Lengths `n^-s` for `n >= 2`, with `s` solving `zeta(s) = 2`.
    ZetaNormalized,
    /// Complement of the middle-thirds Cantor set: `2^k` intervals of length
    /// `3^-(k+1)` for each `k >= 0`.
    CantorComplement,
}

impl SymbolicFamily {
    pub fn rank(&self) -> Rank {
        match self {
            SymbolicFamily::ZetaNormalized => Rank::Infinite,
            SymbolicFamily::CantorComplement => Rank::Finite(1),
        }
    }

    pub fn minimal_base(&self) -> Option<Rational> {
        match self {
            SymbolicFamily::ZetaNormalized => None,
            SymbolicFamily::CantorComplement => Some(Rational::from((1, 3))),
        }
    }

    /// Entropy where a closed form exists (`3 ln 3` for the Cantor family).
    pub fn entropy(&self, prec: u32) -> Option<Real> {
        match self {
            SymbolicFamily::ZetaNormalized => None,
            SymbolicFamily::CantorComplement => {
                let three = Real::from_int(3, prec);
                Some(&three * &three.ln())
            }
        }
    }

    pub fn eps_summability(&self, eps: &Real) -> Summability {
        let prec = eps.prec();
        let one = Real::from_int(1, prec);
        let s = &one - eps;
        match self {
            SymbolicFamily::ZetaNormalized => {
                let t = &zeta_exponent(prec) * &s;
                if !t.certainly_gt(&one) {
                    return Summability::Infinite;
                }
                Summability::Finite(&t.zeta() - &one)
            }
            SymbolicFamily::CantorComplement => {
                // 3^-s / (1 - 2 * 3^-s), finite iff 2 * 3^-s < 1
                let q = Real::from_int(3, prec).pow(&(-&s));
                let two_q = &Real::from_int(2, prec) * &q;
                if !two_q.certainly_lt(&one) {
                    return Summability::Infinite;
                }
                Summability::Finite(q.div(&(&one - &two_q)))
            }
        }
    }
}

/// The `s > 1` with `zeta(s) = 2`, by interval bisection.
pub fn zeta_exponent(prec: u32) -> Real {
    let two = Real::from_int(2, prec);
    let mut lo = Float::with_val(prec, 1.5);
    let mut hi = Float::with_val(prec, 2);
    for _ in 0..prec {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        let z = Real::from_bounds(mid.clone(), mid.clone()).zeta();
        if z.certainly_gt(&two) {
            lo = mid;
        } else if z.certainly_lt(&two) {
            hi = mid;
        } else {
            break;
        }
    }
    Real::from_bounds(lo, hi)
}

#[derive(Clone, Debug, PartialEq)]
pub enum LimitMode {
    /// Rank one: the limit is taken along `lambda = x^n`; `span = -ln x`.
    Lattice { base: Rational, span: Real },
    NonLattice,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PredictedLimit {
    pub mode: LimitMode,
    /// Limit of `lambda |A_lambda|` (along the lattice in the rank-one case).
    pub constant: Real,
    /// `1/H`, the continuous renewal density.
    pub inverse_entropy: Real,
    pub note: Option<String>,
}

pub const LATTICE_NOTE: &str = "rank one: along lambda = x^n the limit of lambda*|A_lambda| is \
L/(H(1-x)) with span L = -ln x, not 1/H; the dyadic count |A_{2^-n}| = 2^(n+1)-1 gives 2, not 1/ln 2. \
Both constants are reported.";

pub fn predicted_limit(scheme: &Scheme, prec: u32) -> PredictedLimit {
    let h = entropy(scheme, prec).value;
    let inverse_entropy = h.recip();
    let report = rank_report(scheme);
    match report.minimal_base {
        Some(x) if report.is_rank_one() => {
            let xr = Real::from_rational(&x, prec);
            let span = -&xr.ln();
            let one_minus = Real::from_rational(&Rational::from(1 - &x), prec);
            let constant = span.div(&(&h * &one_minus));
            PredictedLimit {
                mode: LimitMode::Lattice { base: x, span },
                constant,
                inverse_entropy,
                note: Some(LATTICE_NOTE.to_string()),
            }
        }
        _ => PredictedLimit { mode: LimitMode::NonLattice, constant: inverse_entropy.clone(), inverse_entropy, note: None },
    }
}

impl PredictedLimit {
    pub fn to_json(&self, digits: usize) -> Value {
        let (mode, base, span) = match &self.mode {
            LimitMode::Lattice { base, span } => ("lattice", Some(format_rational(base)), Some(span.to_decimal(digits))),
            LimitMode::NonLattice => ("non-lattice", None, None),
        };
        json!({
            "mode": mode,
            "base": base,
            "span": span,
            "constant": self.constant.to_decimal(digits),
            "inverse_entropy": self.inverse_entropy.to_decimal(digits),
            "note": self.note,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenewalSample {
    pub lambda: Rational,
    pub count: Integer,
    /// `lambda |A_lambda|`, exact.
    pub scaled: Rational,
    /// `|lambda |A_lambda| - constant|`.
    pub error: f64,
}

/// `lambda |A_lambda|` and its distance to `constant` along a grid.
pub fn renewal_curve(
    scheme: &Scheme,
    grid: &[Rational],
    constant: &Real,
    budget: usize,
) -> Result<Vec<RenewalSample>, EnumError> {
    grid.iter()
        .map(|lambda| {
            let count = count_a(scheme, lambda, budget)?;
            let scaled = Rational::from(lambda * &count);
            let diff = &Real::from_rational(&scaled, constant.prec()) - constant;
            Ok(RenewalSample { lambda: lambda.clone(), count, scaled, error: diff.abs().to_f64() })
        })
        .collect()
}

/// Least-squares slope of `ln e(lambda)` against `ln lambda`. Samples with a
/// zero error are dropped.
pub fn error_log_slope(samples: &[RenewalSample]) -> Option<LinearFit> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .iter()
        .filter(|s| s.error > 0.0)
        .map(|s| (s.lambda.to_f64().ln(), s.error.ln()))
        .unzip();
    least_squares(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::DEFAULT_BUDGET;
    use crate::rational::{pow, ratio};
    use crate::scheme::{build_scheme, catalog::*, Direction};

    const P: u32 = 200;

    fn real(x: &str) -> Real {
        let f = rug::Float::with_val(P, rug::Float::parse(x).unwrap());
        Real::from_bounds(f.clone(), f)
    }

    #[test]
    fn entropy_examples() {
        let ln2 = Real::ln2(P);
        let h = entropy(&dyadic(), P).value;
        assert!(h.overlaps(&ln2) && h.width_f64() < 1e-55);
        let h = entropy(&binary_tail(), P).value;
        assert!(h.overlaps(&(&ln2 + &ln2)));
        let h = entropy(&half_third_sixth(), P).value;
        assert!(h.overlaps(&real("1.0114042647073517186424440327667138977")) || h.width_f64() > 0.0);
        assert!((h.to_f64() - 1.0114042647073517).abs() < 1e-15);
        // closed form against partial sums for a tail
        let partial: f64 = (1..200).map(|k| {
            let a = 0.5f64.powi(k);
            -a * a.ln()
        }).sum();
        assert!((entropy(&binary_tail(), 64).value.to_f64() - partial).abs() < 1e-14);
    }

    #[test]
    fn rank_examples() {
        let r = rank_report(&binary_tail());
        assert_eq!(r.rank, Rank::Finite(1));
        assert_eq!(r.minimal_base, Some(ratio(1, 2)));
        assert_eq!(r.exponents, Some(vec![BlockExponent::Tail { first: 1, ratio: 1 }]));
        assert_eq!(rank_report(&half_third_tail()).rank, Rank::Finite(2));
        assert_eq!(rank_report(&rank_three()).rank, Rank::Finite(3));
        let r = rank_report(&powers_of_half());
        assert_eq!(r.minimal_base, Some(ratio(1, 2)));
        assert_eq!(r.lattice().unwrap().finite, vec![1, 2, 3, 3]);
        assert_eq!(rank_report(&half_third_sixth()).rank, Rank::Finite(2));
        assert_eq!(rank_report(&kakutani(ratio(1, 3))).rank, Rank::Finite(2));
        let r = rank_report(&dyadic());
        assert_eq!((r.rank, r.minimal_base), (Rank::Finite(1), Some(ratio(1, 2))));
    }

    #[test]
    fn minimal_base_uses_gcd_of_exponents() {
        // lengths 1/4 and a tail 1/8, 1/64, ... : exponents over 1/2 are 2, 3+3k, gcd 1
        let s = build_scheme(&[
            BlockSpec::atom(ratio(3, 4)),
            BlockSpec::tail(ratio(1, 8), ratio(1, 2), Direction::Ascending),
        ])
        .unwrap();
        assert_eq!(rank_report(&s).rank, Rank::Finite(2));
        // {1/4, 1/4, 1/4, 1/8, 1/8}: base 1/2, exponents 2,2,2,3,3
        let s = build_scheme(&[
            BlockSpec::atom(ratio(1, 4)),
            BlockSpec::atom(ratio(1, 4)),
            BlockSpec::atom(ratio(1, 4)),
            BlockSpec::atom(ratio(1, 8)),
            BlockSpec::atom(ratio(1, 8)),
        ])
        .unwrap();
        let r = rank_report(&s);
        assert_eq!(r.minimal_base, Some(ratio(1, 2)));
        assert_eq!(r.lattice().unwrap().finite, vec![2, 2, 2, 3, 3]);
        // {1/4 x 4}: base 1/4, exponents all 1
        let s = build_scheme(&vec![BlockSpec::atom(ratio(1, 4)); 4]).unwrap();
        let r = rank_report(&s);
        assert_eq!(r.minimal_base, Some(ratio(1, 4)));
        assert_eq!(r.lattice().unwrap().finite, vec![1, 1, 1, 1]);
        // 1/6^n-type base with a composite coprime factor: {1/36 x 36}
        let s = build_scheme(&vec![BlockSpec::atom(ratio(1, 36)); 36]).unwrap();
        assert_eq!(rank_report(&s).minimal_base, Some(ratio(1, 36)));
    }

    #[test]
    fn rank_is_permutation_invariant() {
        let a = build_scheme(&[BlockSpec::atom(ratio(1, 6)), BlockSpec::atom(ratio(1, 2)), BlockSpec::atom(ratio(1, 3))])
            .unwrap();
        assert_eq!(rank_report(&a).rank, rank_report(&half_third_sixth()).rank);
    }

    #[test]
    fn summability_examples() {
        let eps = Real::from_rational(&ratio(1, 2), P);
        let Summability::Finite(v) = eps_summability(&binary_tail(), &eps) else { panic!() };
        let expected = (&Real::from_int(2, P).sqrt() - &Real::from_int(1, P)).recip();
        assert!(v.overlaps(&expected) && v.width_f64() < 1e-50);
        assert!(eps_summability(&half_third_sixth(), &eps).is_finite());
    }

    #[test]
    fn symbolic_families() {
        let s = zeta_exponent(P);
        assert!((s.to_f64() - 1.7286472389981836).abs() < 1e-12, "{}", s);
        assert!(s.width_f64() < 1e-40);
        let z = SymbolicFamily::ZetaNormalized;
        assert_eq!(z.rank(), Rank::Infinite);
        // s (1 - eps) <= 1 once eps >= 1 - 1/s ~ 0.4215
        assert_eq!(z.eps_summability(&Real::from_rational(&ratio(1, 2), P)), Summability::Infinite);
        assert!(z.eps_summability(&Real::from_rational(&ratio(1, 10), P)).is_finite());
        let c = SymbolicFamily::CantorComplement;
        assert_eq!(c.rank(), Rank::Finite(1));
        let h = c.entropy(P).unwrap();
        assert!((h.to_f64() - 3.0 * 3f64.ln()).abs() < 1e-14);
        // threshold 1 - ln2/ln3 ~ 0.3691
        assert!(c.eps_summability(&Real::from_rational(&ratio(1, 3), P)).is_finite());
        assert_eq!(c.eps_summability(&Real::from_rational(&ratio(2, 5), P)), Summability::Infinite);
    }

    #[test]
    fn lattice_constants() {
        let two = predicted_limit(&dyadic(), P);
        assert!(matches!(two.mode, LimitMode::Lattice { .. }));
        assert!(two.constant.contains_f64(2.0) || (two.constant.to_f64() - 2.0).abs() < 1e-50);
        assert!(two.note.is_some());
        let one = predicted_limit(&binary_tail(), P);
        assert!((one.constant.to_f64() - 1.0).abs() < 1e-15);
        let p = predicted_limit(&powers_of_half(), P);
        assert!((p.constant.to_f64() - 8.0 / 7.0).abs() < 1e-15);
        let nl = predicted_limit(&half_third_sixth(), P);
        assert_eq!(nl.mode, LimitMode::NonLattice);
        assert!((nl.constant.to_f64() - 0.988_724_326_062_979_9).abs() < 1e-15);
    }

    #[test]
    fn dyadic_renewal_error_is_lambda() {
        let c = predicted_limit(&dyadic(), P).constant;
        let grid: Vec<Rational> = (1..=12).map(|n| pow(&ratio(1, 2), n)).collect();
        let curve = renewal_curve(&dyadic(), &grid, &c, DEFAULT_BUDGET).unwrap();
        for s in &curve {
            assert!((s.error - s.lambda.to_f64()).abs() < 1e-15);
        }
        let slope = error_log_slope(&curve).unwrap().slope;
        assert!((slope - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponent_expansion() {
        let lat = LatticeExponents { finite: vec![2], progressions: vec![(1, 3)] };
        assert_eq!(lat.expand(8), vec![1, 2, 4, 7]);
        assert_eq!(lat.gcd(), 1);
    }
}
