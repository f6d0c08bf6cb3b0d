//! The exponential sum `f(z) = sum_j alpha_j^z - 1` and its zeros.
//!
//! Tails are summed in closed form, `a^z / (1 - r^z)`. Zero counts come from
//! the argument principle: the argument of `f` is tracked along each edge with
//! steps short enough that `f` cannot wind around 0 in between, using the
//! bound `|f'| <= sum |ln alpha| alpha^sigma` on the box. Boxes are bisected
//! until they hold at most one zero, which is then refined by Newton's method
//! and certified by Rouche's theorem on a small disc.

use num_complex::Complex64;
use rug::float::Round;
use rug::{Complex, Float, Rational};
use serde::Serialize;

use super::SpectralError;
use crate::renewal::rank_report;
use crate::scheme::{BlockSpec, Scheme, Symbol};

/// Rounding slack factor for double precision evaluation.
const F64_SLACK: f64 = 64.0 * f64::EPSILON;
/// Below this certified modulus an edge is treated as passing through a zero.
const BOUNDARY_TOL: f64 = 1e-9;
/// Offset applied to an internal split line that hits a zero.
pub const SPLIT_JITTER: f64 = 1e-6;

#[derive(Clone, Debug)]
enum Term {
    Atom { ln_a: f64, exact: Rational },
    Tail { ln_a: f64, ln_r: f64, first: Rational, ratio: Rational },
}

/// Precomputed logarithms of the scheme's blocks.
#[derive(Clone, Debug)]
pub struct Dirichlet {
    terms: Vec<Term>,
    has_tail: bool,
}

impl Dirichlet {
    pub fn new(scheme: &Scheme) -> Dirichlet {
        let terms: Vec<Term> = scheme
            .blocks()
            .iter()
            .map(|b| match b {
                BlockSpec::Atom { length } => Term::Atom { ln_a: length.to_f64().ln(), exact: length.clone() },
                BlockSpec::GeoTail { first, ratio, .. } => Term::Tail {
                    ln_a: first.to_f64().ln(),
                    ln_r: ratio.to_f64().ln(),
                    first: first.clone(),
                    ratio: ratio.clone(),
                },
            })
            .collect();
        let has_tail = terms.iter().any(|t| matches!(t, Term::Tail { .. }));
        Dirichlet { terms, has_tail }
    }

    fn check_domain(&self, re: f64) -> Result<(), SpectralError> {
        if self.has_tail && re <= 0.0 {
            return Err(SpectralError::Domain("tails only converge for Re z > 0".into()));
        }
        Ok(())
    }

    /// Double precision value with an error bound.
    pub fn eval_f64(&self, z: Complex64) -> Result<(Complex64, f64), SpectralError> {
        self.check_domain(z.re)?;
        let mut sum = Complex64::new(-1.0, 0.0);
        let mut err = F64_SLACK;
        let size = 1.0 + z.norm();
        for t in &self.terms {
            match *t {
                Term::Atom { ln_a, .. } => {
                    let v = (z * ln_a).exp();
                    sum += v;
                    err += F64_SLACK * size * (1.0 + ln_a.abs()) * v.norm();
                }
                Term::Tail { ln_a, ln_r, .. } => {
                    let num = (z * ln_a).exp();
                    let rz = (z * ln_r).exp();
                    let den = Complex64::new(1.0, 0.0) - rz;
                    let v = num / den;
                    sum += v;
                    let gap = 1.0 - rz.norm();
                    err += F64_SLACK * size * (1.0 + ln_a.abs() + ln_r.abs()) * num.norm() / (gap * gap);
                }
            }
        }
        Ok((sum, err))
    }

    /// Upper bound for `|f'|` on `Re z >= sigma`.
    pub fn derivative_bound(&self, sigma: f64) -> f64 {
        let mut m = 0.0;
        for t in &self.terms {
            match *t {
                Term::Atom { ln_a, .. } => m += ln_a.abs() * (ln_a * sigma).exp(),
                Term::Tail { ln_a, ln_r, .. } => {
                    let a = (ln_a * sigma).exp();
                    let rho = (ln_r * sigma).exp();
                    m += a * (ln_a.abs() / (1.0 - rho) + ln_r.abs() * rho / ((1.0 - rho) * (1.0 - rho)));
                }
            }
        }
        m * (1.0 + 1e-12)
    }

    /// Upper bound for `|f''|` on `Re z >= sigma`.
    pub fn second_derivative_bound(&self, sigma: f64) -> f64 {
        let mut m = 0.0;
        for t in &self.terms {
            match *t {
                Term::Atom { ln_a, .. } => m += ln_a * ln_a * (ln_a * sigma).exp(),
                Term::Tail { ln_a, ln_r, .. } => {
                    let (la, lr) = (ln_a.abs(), ln_r.abs());
                    let a = (ln_a * sigma).exp();
                    let rho = (ln_r * sigma).exp();
                    let g = 1.0 - rho;
                    m += a * (la * la / g + 2.0 * la * lr * rho / (g * g) + lr * lr * rho * (1.0 + rho) / (g * g * g));
                }
            }
        }
        m * (1.0 + 1e-12)
    }

    /// `(f(z), f'(z), error bound)` at the precision of `z`.
    pub fn eval_mp(&self, z: &Complex) -> Result<(Complex, Complex, Float), SpectralError> {
        let prec = z.prec().0;
        self.check_domain(z.real().to_f64())?;
        let mut f = Complex::with_val(prec, -1);
        let mut df = Complex::new(prec);
        let mut magnitude = Float::with_val(prec, 1);
        let ln = |q: &Rational| Float::with_val(prec, q).ln();
        for t in &self.terms {
            match t {
                Term::Atom { exact, .. } => {
                    let l = ln(exact);
                    let v = Complex::with_val(prec, z * &l).exp();
                    magnitude += Float::with_val(prec, v.abs_ref());
                    df += Complex::with_val(prec, &v * &l);
                    f += v;
                }
                Term::Tail { first, ratio, .. } => {
                    let (la, lr) = (ln(first), ln(ratio));
                    let az = Complex::with_val(prec, z * &la).exp();
                    let rz = Complex::with_val(prec, z * &lr).exp();
                    let den = Complex::with_val(prec, 1) - &rz;
                    let v = Complex::with_val(prec, &az / &den);
                    // d/dz a^z/(1 - r^z) = v (ln a + ln r r^z / (1 - r^z))
                    let inner = Complex::with_val(prec, &rz * &lr) / &den + &la;
                    df += Complex::with_val(prec, &v * &inner);
                    let gap = Float::with_val(prec, den.abs_ref());
                    magnitude += Float::with_val(prec, v.abs_ref()) / gap;
                    f += v;
                }
            }
        }
        let size = Float::with_val(prec, z.abs_ref()) + 1u32;
        let n = self.terms.len() as u32 + 4;
        let err = magnitude * size * (64 * n) * Float::with_val(prec, Float::u_exp(1, -(prec as i32)));
        Ok((f, df, err))
    }
}

/// `f(z) = sum alpha_j^z - 1` with a certified error radius.
pub fn f_eval(scheme: &Scheme, z: &Complex) -> Result<(Complex, Float), SpectralError> {
    let (f, _, err) = Dirichlet::new(scheme).eval_mp(z)?;
    Ok((f, err))
}

/// Axis-aligned rectangle `[re_min, re_max] x [im_min, im_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Rect {
        Rect { re_min, re_max, im_min, im_max }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn contains_disc(&self, c: Complex64, r: f64) -> bool {
        c.re - r > self.re_min && c.re + r < self.re_max && c.im - r > self.im_min && c.im + r < self.im_max
    }

    fn center(&self) -> Complex64 {
        Complex64::new((self.re_min + self.re_max) / 2.0, (self.im_min + self.im_max) / 2.0)
    }

    fn half_diagonal(&self) -> f64 {
        0.5 * (self.re_max - self.re_min).hypot(self.im_max - self.im_min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroEnclosure {
    pub center: Complex,
    pub radius: Float,
    pub multiplicity: usize,
    /// True when Rouche's theorem isolates exactly one simple zero in the
    /// disc; false for an unresolved cluster reported by its box.
    pub isolated: bool,
}

impl ZeroEnclosure {
    pub fn re(&self) -> f64 {
        self.center.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.center.imag().to_f64()
    }

    pub fn radius_f64(&self) -> f64 {
        self.radius.to_f64()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroList {
    pub rect: Rect,
    /// Winding number of `f` around the rectangle.
    pub winding: i64,
    /// Sorted by real part, then imaginary part.
    pub zeros: Vec<ZeroEnclosure>,
}

impl ZeroList {
    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ZeroSearch {
    pub prec: u32,
    /// Boxes smaller than this are reported as clusters.
    pub min_box: f64,
    pub max_steps_per_edge: usize,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        ZeroSearch { prec: 200, min_box: 1e-9, max_steps_per_edge: 5_000_000 }
    }
}

struct Searcher<'a> {
    d: &'a Dirichlet,
    opts: ZeroSearch,
    m1: f64,
}

impl Searcher<'_> {
    /// Change of `arg f` along the segment `a -> b`, in radians.
    fn edge_arg(&self, a: Complex64, b: Complex64) -> Result<f64, SpectralError> {
        let len = (b - a).norm();
        let dir = (b - a) / len;
        let (mut fz, mut err) = self.d.eval_f64(a)?;
        let mut t = 0.0;
        let mut total = 0.0;
        let mut steps = 0usize;
        while t < len {
            let m = fz.norm() - err;
            if m < BOUNDARY_TOL {
                let at = a + dir * t;
                return Err(SpectralError::BoundaryZero { re: at.re, im: at.im });
            }
            let h = (0.5 * m / self.m1).min(len - t);
            t = if len - t <= h { len } else { t + h };
            let z = if t >= len { b } else { a + dir * t };
            let (fn_, en) = self.d.eval_f64(z)?;
            total += (fn_ / fz).arg();
            fz = fn_;
            err = en;
            steps += 1;
            if steps > self.opts.max_steps_per_edge {
                return Err(SpectralError::Certification("edge step budget exhausted".into()));
            }
        }
        Ok(total)
    }

    fn winding(&self, r: &Rect) -> Result<i64, SpectralError> {
        let c = r.corners();
        let mut total = 0.0;
        for k in 0..4 {
            total += self.edge_arg(c[k], c[(k + 1) % 4])?;
        }
        let w = total / (2.0 * std::f64::consts::PI);
        let rounded = w.round();
        if (w - rounded).abs() > 1e-6 {
            return Err(SpectralError::Certification(format!("non-integral winding {w}")));
        }
        Ok(rounded as i64)
    }

    /// Newton refinement from the box center and a Rouche disc, if both
    /// succeed inside the box.
    fn isolate(&self, r: &Rect) -> Option<ZeroEnclosure> {
        let prec = self.opts.prec;
        let c = r.center();
        let mut z = Complex::with_val(prec, (c.re, c.im));
        let tol = Float::with_val(prec, Float::u_exp(1, -(prec as i32) + 24));
        let mut converged = false;
        for _ in 0..200 {
            let (f, df, _) = self.d.eval_mp(&z).ok()?;
            let step = Complex::with_val(prec, &f / &df);
            if !step.real().is_finite() || !step.imag().is_finite() {
                return None;
            }
            z -= &step;
            let size = Float::with_val(prec, step.abs_ref());
            let re = z.real().to_f64();
            if re < r.re_min - 1.0 || re > r.re_max + 1.0 || re <= 0.0 && self.d.has_tail {
                return None;
            }
            if size < tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
        let (f, df, err) = self.d.eval_mp(&z).ok()?;
        let fa = Float::with_val(prec, f.abs_ref()) + &err;
        let da = Float::with_val(prec, df.abs_ref());
        if da == 0 {
            return None;
        }
        let floor = Float::with_val(prec, Float::u_exp(1, -(prec as i32) / 2));
        let mut radius = Float::with_val_round(prec, &fa / &da, Round::Up).0 * 2u32;
        if radius < floor {
            radius = floor;
        }
        let zc = Complex64::new(z.real().to_f64(), z.imag().to_f64());
        let rf = radius.to_f64();
        if !r.contains_disc(zc, rf.max(1e-15) * 2.0) {
            return None;
        }
        // Rouche: |f'(z*)| r > |f(z*)| + err + M2 r^2 / 2
        let m2 = Float::with_val(prec, self.d.second_derivative_bound(zc.re - rf));
        let lhs = Float::with_val_round(prec, &da * &radius, Round::Down).0;
        let quad = Float::with_val_round(prec, &radius * &radius, Round::Up).0 * m2 / 2u32;
        let rhs = Float::with_val_round(prec, &fa + &quad, Round::Up).0;
        if lhs <= rhs {
            return None;
        }
        Some(ZeroEnclosure { center: z, radius, multiplicity: 1, isolated: true })
    }

    fn split(&self, r: &Rect) -> Result<(Rect, i64, Rect, i64), SpectralError> {
        let wide = r.re_max - r.re_min >= r.im_max - r.im_min;
        let mut last = None;
        for k in 0..9 {
            let shift = SPLIT_JITTER * ((k + 1) / 2) as f64 * if k % 2 == 0 { 1.0 } else { -1.0 };
            let (a, b) = if wide {
                let m = 0.5 * (r.re_min + r.re_max) + shift * (r.re_max - r.re_min);
                (Rect { re_max: m, ..*r }, Rect { re_min: m, ..*r })
            } else {
                let m = 0.5 * (r.im_min + r.im_max) + shift * (r.im_max - r.im_min);
                (Rect { im_max: m, ..*r }, Rect { im_min: m, ..*r })
            };
            match (self.winding(&a), self.winding(&b)) {
                (Ok(wa), Ok(wb)) => return Ok((a, wa, b, wb)),
                (Err(e @ SpectralError::BoundaryZero { .. }), _) | (_, Err(e @ SpectralError::BoundaryZero { .. })) => {
                    last = Some(e)
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        Err(last.unwrap())
    }

    fn search(&self, r: Rect, count: i64, out: &mut Vec<ZeroEnclosure>) -> Result<(), SpectralError> {
        if count == 0 {
            return Ok(());
        }
        if count < 0 {
            return Err(SpectralError::Certification("negative winding number".into()));
        }
        if count == 1 {
            if let Some(z) = self.isolate(&r) {
                out.push(z);
                return Ok(());
            }
        }
        if r.half_diagonal() < self.opts.min_box {
            let c = r.center();
            let prec = self.opts.prec;
            out.push(ZeroEnclosure {
                center: Complex::with_val(prec, (c.re, c.im)),
                radius: Float::with_val(prec, r.half_diagonal()),
                multiplicity: count as usize,
                isolated: false,
            });
            return Ok(());
        }
        let (a, wa, b, wb) = self.split(&r)?;
        if wa + wb != count {
            return Err(SpectralError::Certification("winding numbers of halves do not add up".into()));
        }
        self.search(a, wa, out)?;
        self.search(b, wb, out)
    }
}

/// Zeros of `f` inside `rect`, each isolated in a certified disc.
pub fn find_zeros(scheme: &Scheme, rect: Rect, opts: ZeroSearch) -> Result<ZeroList, SpectralError> {
    if !(rect.re_min < rect.re_max && rect.im_min < rect.im_max) {
        return Err(SpectralError::Domain("empty rectangle".into()));
    }
    let d = Dirichlet::new(scheme);
    d.check_domain(rect.re_min)?;
    let searcher = Searcher { d: &d, opts, m1: d.derivative_bound(rect.re_min) };
    let winding = searcher.winding(&rect)?;
    let mut zeros = Vec::new();
    searcher.search(rect, winding, &mut zeros)?;
    zeros.sort_by(|a, b| {
        a.re().partial_cmp(&b.re()).unwrap().then(a.im().partial_cmp(&b.im()).unwrap())
    });
    Ok(ZeroList { rect, winding, zeros })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroRegionReport {
    /// `min u |v|^(2 + 2r)` over the tested zeros; `None` stands for `+inf`
    /// (no zero tested).
    pub fitted_c: Option<f64>,
    /// Zeros with `|v|` above the threshold.
    pub tested: usize,
    /// `2 pi / ln(1 / beta)`.
    pub threshold: f64,
    /// Zeros with `Re z >= 1`, as `(re, im)`.
    pub violations: Vec<(f64, f64)>,
}

impl ZeroRegionReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty() && self.fitted_c.is_none_or(|c| c > 0.0)
    }
}

/// Checks `u > 0` and fits `C` in `|v|^(2 + 2r) >= C / u` for zeros
/// `z = 1 - u + i v` with `|v| > 2 pi / ln(1 / beta)`, `beta = min(alpha_j, alpha_k)`.
pub fn zero_region_check(
    scheme: &Scheme,
    zeros: &ZeroList,
    pair: (Symbol, Symbol),
    r: f64,
) -> Result<ZeroRegionReport, SpectralError> {
    if rank_report(scheme).is_rank_one() {
        return Err(SpectralError::NotHigherRank);
    }
    for s in [pair.0, pair.1] {
        scheme.check_symbol(s).map_err(|e| SpectralError::Domain(e.to_string()))?;
    }
    let beta = scheme.alpha(pair.0).min(scheme.alpha(pair.1)).to_f64();
    let threshold = 2.0 * std::f64::consts::PI / (1.0 / beta).ln();
    let mut fitted: Option<f64> = None;
    let mut tested = 0;
    let mut violations = Vec::new();
    for z in &zeros.zeros {
        let (re, v) = (z.re(), z.im());
        if v.abs() <= threshold {
            continue;
        }
        tested += 1;
        let u = 1.0 - re;
        if u <= 0.0 {
            violations.push((re, v));
            continue;
        }
        let c = u * v.abs().powf(2.0 + 2.0 * r);
        fitted = Some(fitted.map_or(c, |f: f64| f.min(c)));
    }
    Ok(ZeroRegionReport { fitted_c: fitted, tested, threshold, violations })
}
