//! Rank-one generating function `g(z) = (z - x) sum_n |A_{x^n}| z^n`, its
//! Taylor coefficients and radius of holomorphy.

use rug::float::Round;
use rug::{Float, Integer, Rational};

use super::poly::{certified_roots, Poly, RootDisc};
use super::SpectralError;
use crate::real::Real;
use crate::renewal::{rank_report, LatticeExponents};
use crate::scheme::Scheme;

#[derive(Clone, Debug, PartialEq)]
pub enum BaseValue {
    Exact(Rational),
    Enclosed(Real),
}

impl BaseValue {
    pub fn to_real(&self, prec: u32) -> Real {
        match self {
            BaseValue::Exact(q) => Real::from_rational(q, prec),
            BaseValue::Enclosed(r) => r.clone(),
        }
    }
}

/// Lengths `x^{n_j}` over a base `x in (0, 1)` solving `sum_j x^{n_j} = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerBasis {
    pub exponents: LatticeExponents,
    pub base: BaseValue,
}

impl PowerBasis {
    /// The basis of a rank-one scheme, with its exact rational base.
    pub fn from_scheme(scheme: &Scheme) -> Result<PowerBasis, SpectralError> {
        let report = rank_report(scheme);
        if !report.is_rank_one() {
            return Err(SpectralError::NotRankOne);
        }
        match (report.lattice(), report.minimal_base) {
            (Some(exponents), Some(x)) => {
                Ok(PowerBasis { exponents, base: BaseValue::Exact(x) })
            }
            _ => Err(SpectralError::NotRankOne),
        }
    }

    /// A basis given by exponents only; the base is the root of
    /// `sum_j z^{n_j} = 1` in `(0, 1)`, enclosed by interval bisection.
    pub fn from_exponents(exponents: LatticeExponents, prec: u32) -> Result<PowerBasis, SpectralError> {
        if exponents.gcd() != 1 {
            return Err(SpectralError::InvalidBasis("exponents must have gcd 1".into()));
        }
        if exponents.finite.contains(&0) || exponents.progressions.iter().any(|&(p, q)| p == 0 || q == 0) {
            return Err(SpectralError::InvalidBasis("exponents must be positive".into()));
        }
        let total_at_one = exponents.finite.len();
        if exponents.progressions.is_empty() && total_at_one < 2 {
            return Err(SpectralError::InvalidBasis("no root of the power sum in (0, 1)".into()));
        }
        let one = Real::from_int(1, prec);
        let mut lo = Float::with_val(prec, 0);
        let mut hi = Float::with_val(prec, 1);
        for _ in 0..prec {
            let mid = Float::with_val(prec, &lo + &hi) / 2u32;
            let v = power_sum(&exponents, &Real::from_bounds(mid.clone(), mid.clone()));
            if v.certainly_lt(&one) {
                lo = mid;
            } else if v.certainly_gt(&one) {
                hi = mid;
            } else {
                break;
            }
        }
        Ok(PowerBasis { exponents, base: BaseValue::Enclosed(Real::from_bounds(lo, hi)) })
    }
}

/// `sum_j x^{n_j}` with tails in closed form.
fn power_sum(e: &LatticeExponents, x: &Real) -> Real {
    let prec = x.prec();
    let one = Real::from_int(1, prec);
    let mut total = Real::from_int(0, prec);
    for &n in &e.finite {
        total = &total + &x.powi(n as u32);
    }
    for &(p, q) in &e.progressions {
        total = &total + &x.powi(p as u32).div(&(&one - &x.powi(q as u32)));
    }
    total
}

/// `numerator / denominator` with integer polynomial parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: Poly,
    pub denominator: Poly,
}

/// `sum_j z^{n_j} - 1` as `N / D`, where a tail `p + k q` contributes
/// `z^p / (1 - z^q)` and `D = prod (1 - z^q)` over the tails.
pub fn denominator_series(basis: &PowerBasis) -> RationalFunction {
    let e = &basis.exponents;
    let factors: Vec<Poly> = e
        .progressions
        .iter()
        .map(|&(_, q)| Poly::one().sub(&Poly::monomial(q as usize)))
        .collect();
    let denominator = factors.iter().fold(Poly::one(), |acc, f| acc.mul(f));
    let mut finite = Poly::from_i64(&[-1]);
    for &n in &e.finite {
        finite = finite.add(&Poly::monomial(n as usize));
    }
    let mut numerator = finite.mul(&denominator);
    for (t, &(p, _)) in e.progressions.iter().enumerate() {
        let mut term = Poly::monomial(p as usize);
        for (s, f) in factors.iter().enumerate() {
            if s != t {
                term = term.mul(f);
            }
        }
        numerator = numerator.add(&term);
    }
    RationalFunction { numerator, denominator }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SeriesCoeffs {
    Exact(Vec<Rational>),
    Enclosed(Vec<Real>),
}

impl SeriesCoeffs {
    pub fn len(&self) -> usize {
        match self {
            SeriesCoeffs::Exact(v) => v.len(),
            SeriesCoeffs::Enclosed(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_reals(&self, prec: u32) -> Vec<Real> {
        match self {
            SeriesCoeffs::Exact(v) => v.iter().map(|q| Real::from_rational(q, prec)).collect(),
            SeriesCoeffs::Enclosed(v) => v.clone(),
        }
    }
}

/// `b_0, ..., b_n` of `g(z) = (z - x) D(z) / ((z - 1) N(z))` by power series
/// division; exact when the base is rational.
pub fn taylor_g(basis: &PowerBasis, n: usize) -> SeriesCoeffs {
    let rf = denominator_series(basis);
    let divisor = Poly::from_i64(&[-1, 1]).mul(&rf.numerator);
    let b: Vec<Integer> = divisor.coeffs().to_vec();
    debug_assert_eq!(b[0], 1);
    let d = rf.denominator.coeffs();
    match &basis.base {
        BaseValue::Exact(x) => {
            // (z - x) D(z)
            let mut a = vec![Rational::new(); d.len() + 1];
            for (k, c) in d.iter().enumerate() {
                a[k + 1] += Rational::from(c.clone());
                a[k] -= Rational::from(x * c);
            }
            let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
            for m in 0..=n {
                let mut v = a.get(m).cloned().unwrap_or_default();
                for k in 1..b.len().min(m + 1) {
                    v -= Rational::from(&out[m - k] * &b[k]);
                }
                out.push(v);
            }
            SeriesCoeffs::Exact(out)
        }
        BaseValue::Enclosed(x) => {
            let prec = x.prec();
            let zero = Real::from_int(0, prec);
            let mut a = vec![zero.clone(); d.len() + 1];
            for (k, c) in d.iter().enumerate() {
                let c = Real::from_integer(c, prec);
                a[k + 1] = &a[k + 1] + &c;
                a[k] = &a[k] - &(x * &c);
            }
            let mut out: Vec<Real> = Vec::with_capacity(n + 1);
            for m in 0..=n {
                let mut v = a.get(m).cloned().unwrap_or_else(|| zero.clone());
                for k in 1..b.len().min(m + 1) {
                    v = &v - &(&out[m - k] * &Real::from_integer(&b[k], prec));
                }
                out.push(v);
            }
            SeriesCoeffs::Enclosed(out)
        }
    }
}

/// Classification of a root of the cleared numerator `N`.
#[derive(Clone, Debug, PartialEq)]
pub enum RootKind {
    /// The disc holding the base `x` itself.
    Base,
    /// Also a zero of the cleared denominator; not a root of the series.
    Spurious,
    Genuine,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RStar {
    pub eps: Real,
    /// `x^(1 - eps)`.
    pub summability_radius: Real,
    pub value: Real,
    /// Every certified root of `N`, with its classification.
    pub roots: Vec<(RootDisc, RootKind)>,
    /// True when a genuine root (not the summability radius) sets `R*`.
    pub root_limited: bool,
}

/// `R* = min(x^(1-eps), |z|)` over genuine roots `z != x` of the power sum
/// inside that radius.
pub fn radius_r_star(basis: &PowerBasis, eps: &Real) -> Result<RStar, SpectralError> {
    let prec = eps.prec();
    if !eps.is_positive() || !eps.certainly_lt(&Real::from_int(1, prec)) {
        return Err(SpectralError::Domain("eps must lie in (0, 1)".into()));
    }
    let x = basis.base.to_real(prec);
    let one = Real::from_int(1, prec);
    let summability_radius = x.pow(&(&one - eps));
    let rf = denominator_series(basis);
    let discs = certified_roots(&rf.numerator, prec)?;
    let mut value = summability_radius.clone();
    let mut root_limited = false;
    let mut roots = Vec::new();
    for disc in discs {
        let kind = if disc.contains_real(x.lo(), x.hi()) {
            RootKind::Base
        } else if may_vanish(&rf.denominator, &disc) {
            RootKind::Spurious
        } else {
            RootKind::Genuine
        };
        if kind == RootKind::Genuine {
            let (lo, hi) = disc.modulus_bounds();
            let m = Real::from_bounds(lo, hi);
            if !m.certainly_gt(&value) {
                root_limited = root_limited || m.certainly_lt(&summability_radius);
                value = value.min(&m);
            }
        }
        roots.push((disc, kind));
    }
    if roots.iter().filter(|(_, k)| *k == RootKind::Base).count() != 1 {
        return Err(SpectralError::Certification("base root not isolated".into()));
    }
    Ok(RStar { eps: eps.clone(), summability_radius, value, roots, root_limited })
}

/// Could the polynomial vanish somewhere on the disc? Uses
/// `|D(z)| >= |D(c)| - r sup|D'|` with a crude bound on `D'`.
fn may_vanish(d: &Poly, disc: &RootDisc) -> bool {
    let prec = disc.radius.prec();
    let v = d.eval_complex(&disc.center);
    let mag = Float::with_val(prec, v.abs_ref());
    let (_, rmax) = disc.modulus_bounds();
    let deriv = d.derivative();
    let mut bound = Float::new(prec);
    for c in deriv.coeffs().iter().rev() {
        bound = Float::with_val_round(prec, &bound * &rmax, Round::Up).0;
        bound += Float::with_val(prec, c).abs();
    }
    let slack = Float::with_val(prec, Float::u_exp(1, -(prec as i32) / 2));
    mag <= bound * &disc.radius + slack
}

/// The admissible rates `(x / R*, 1)`.
pub fn rho_bound(basis: &PowerBasis, eps: &Real) -> Result<(Real, Real), SpectralError> {
    let r = radius_r_star(basis, eps)?;
    let prec = eps.prec();
    let x = basis.base.to_real(prec);
    let lower = x.div(&r.value);
    let one = Real::from_int(1, prec);
    if !lower.certainly_lt(&one) {
        return Err(SpectralError::Certification("x / R* is not below 1".into()));
    }
    Ok((lower, one))
}

/// Evaluates `R*` for every `eps` in the sweep and keeps the largest.
pub fn best_r_star(basis: &PowerBasis, sweep: &[Rational], prec: u32) -> Result<RStar, SpectralError> {
    let mut best: Option<RStar> = None;
    for e in sweep {
        let r = radius_r_star(basis, &Real::from_rational(e, prec))?;
        if best.as_ref().is_none_or(|b| r.value.mid() > b.value.mid()) {
            best = Some(r);
        }
    }
    best.ok_or_else(|| SpectralError::Domain("empty eps sweep".into()))
}

/// The sweep used by the analysis report.
pub fn default_eps_sweep() -> Vec<Rational> {
    vec![Rational::from((1, 10)), Rational::from((1, 4)), Rational::from((1, 2))]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{count_a, DEFAULT_BUDGET};
    use crate::rational::{pow, ratio};
    use crate::scheme::catalog::*;

    const P: u32 = 200;

    #[test]
    fn denominator_series_examples() {
        let d = denominator_series(&PowerBasis::from_scheme(&dyadic()).unwrap());
        assert_eq!(d.numerator, Poly::from_i64(&[-1, 2]));
        assert_eq!(d.denominator, Poly::one());
        let t = denominator_series(&PowerBasis::from_scheme(&binary_tail()).unwrap());
        assert_eq!(t.numerator, Poly::from_i64(&[-1, 2]));
        assert_eq!(t.denominator, Poly::from_i64(&[1, -1]));
        let p = denominator_series(&PowerBasis::from_scheme(&powers_of_half()).unwrap());
        assert_eq!(p.numerator, Poly::from_i64(&[-1, 2]).mul(&Poly::from_i64(&[1, 1, 1])));
        assert!(matches!(PowerBasis::from_scheme(&half_third_sixth()), Err(SpectralError::NotRankOne)));
    }

    fn exact(c: SeriesCoeffs) -> Vec<Rational> {
        match c {
            SeriesCoeffs::Exact(v) => v,
            _ => panic!("expected exact coefficients"),
        }
    }

    #[test]
    fn taylor_examples() {
        let b = exact(taylor_g(&PowerBasis::from_scheme(&dyadic()).unwrap(), 50));
        assert!(b.iter().all(|c| *c == ratio(-1, 2)));
        let b = exact(taylor_g(&PowerBasis::from_scheme(&binary_tail()).unwrap(), 50));
        assert_eq!(b[0], ratio(-1, 2));
        assert!(b[1..].iter().all(|c| *c == 0));
        let basis = PowerBasis::from_scheme(&powers_of_half()).unwrap();
        let b = exact(taylor_g(&basis, 0));
        assert_eq!(b[0], ratio(-1, 2));
    }

    #[test]
    fn taylor_matches_counts() {
        for s in [dyadic(), binary_tail(), powers_of_half()] {
            let basis = PowerBasis::from_scheme(&s).unwrap();
            let BaseValue::Exact(x) = basis.base.clone() else { panic!() };
            let b = exact(taylor_g(&basis, 30));
            let counts: Vec<Integer> =
                (0..=30u32).map(|n| count_a(&s, &pow(&x, n), DEFAULT_BUDGET).unwrap()).collect();
            for n in 0..=30usize {
                let prev = if n == 0 { Rational::new() } else { Rational::from(counts[n - 1].clone()) };
                let expect = prev - Rational::from(&x * &counts[n]);
                assert_eq!(b[n], expect, "n = {n}");
            }
        }
    }

    #[test]
    fn golden_basis() {
        let basis = PowerBasis::from_exponents(LatticeExponents { finite: vec![1, 2], progressions: vec![] }, P).unwrap();
        let x = basis.base.to_real(P);
        let golden = (&Real::from_int(5, P).sqrt() - &Real::from_int(1, P)).div(&Real::from_int(2, P));
        assert!(x.overlaps(&golden));
        assert!(x.width_f64() < 1e-55);
        let r = radius_r_star(&basis, &Real::from_rational(&ratio(1, 2), P)).unwrap();
        assert!(!r.root_limited);
        assert!((r.value.to_f64() - x.to_f64().sqrt()).abs() < 1e-15);
        let SeriesCoeffs::Enclosed(b) = taylor_g(&basis, 10) else { panic!() };
        assert!((b[0].to_f64() + x.to_f64()).abs() < 1e-15);
        assert!(PowerBasis::from_exponents(LatticeExponents { finite: vec![2, 4], progressions: vec![] }, P).is_err());
    }

    #[test]
    fn r_star_examples() {
        let basis = PowerBasis::from_scheme(&powers_of_half()).unwrap();
        let r = radius_r_star(&basis, &Real::from_rational(&ratio(1, 4), P)).unwrap();
        let expect = Real::from_rational(&ratio(1, 2), P).pow(&Real::from_rational(&ratio(3, 4), P));
        assert!(r.value.overlaps(&expect));
        assert!((r.value.to_f64() - 0.5946035575013605).abs() < 1e-15);
        let genuine: Vec<_> = r.roots.iter().filter(|(_, k)| *k == RootKind::Genuine).collect();
        assert_eq!(genuine.len(), 2);
        for (d, _) in genuine {
            let (lo, hi) = d.modulus_bounds();
            assert!(lo <= 1 && hi >= 1);
            assert!(d.radius < 1e-20);
        }
        let dy = PowerBasis::from_scheme(&dyadic()).unwrap();
        let r = radius_r_star(&dy, &Real::from_rational(&ratio(1, 2), P)).unwrap();
        assert_eq!(r.roots.len(), 1);
        let (lo, _) = rho_bound(&dy, &Real::from_rational(&ratio(1, 2), P)).unwrap();
        assert!((lo.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let (lo, _) = rho_bound(&basis, &Real::from_rational(&ratio(1, 4), P)).unwrap();
        assert!((lo.to_f64() - 0.5f64.powf(0.25)).abs() < 1e-15);
        let tail = PowerBasis::from_scheme(&binary_tail()).unwrap();
        let (lo, _) = rho_bound(&tail, &Real::from_rational(&ratio(1, 2), P)).unwrap();
        assert!((lo.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn spurious_roots_are_flagged() {
        // exponents 1 and 2 + 2k: z + z^2 / (1 - z^2) - 1
        let basis = PowerBasis::from_exponents(LatticeExponents { finite: vec![1], progressions: vec![(2, 2)] }, P).unwrap();
        let rf = denominator_series(&basis);
        // N = (z - 1)(1 - z^2) + z^2 shares no root with D
        let r = radius_r_star(&basis, &Real::from_rational(&ratio(1, 2), P)).unwrap();
        assert!(r.roots.iter().all(|(_, k)| *k != RootKind::Spurious));
        assert!(!rf.numerator.is_zero());
        // a numerator with a planted root of D
        let planted = Poly::from_i64(&[1, 1]).mul(&rf.numerator);
        let discs = certified_roots(&planted, P).unwrap();
        let minus_one = discs.iter().find(|d| d.contains_real(&Float::with_val(P, -1), &Float::with_val(P, -1))).unwrap();
        assert!(may_vanish(&rf.denominator, minus_one));
    }

    #[test]
    fn coefficient_decay_bound() {
        // |b_n| R^n stays bounded for R = (x + R*) / 2
        let basis = PowerBasis::from_scheme(&powers_of_half()).unwrap();
        let r = best_r_star(&basis, &default_eps_sweep(), P).unwrap();
        let x = 0.5;
        let big_r = (x + r.value.to_f64()) / 2.0;
        let b = exact(taylor_g(&basis, 200));
        let sup = b.iter().enumerate().map(|(n, c)| c.to_f64().abs() * big_r.powi(n as i32)).fold(0.0, f64::max);
        assert!(sup.is_finite() && sup < 10.0);
    }
}
