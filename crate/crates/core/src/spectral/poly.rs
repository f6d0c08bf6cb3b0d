//! Integer polynomials and certified isolation of their complex roots.

use std::fmt;

use rug::float::Round;
use rug::{Complex, Float, Integer, Rational};

use super::SpectralError;

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Integer>);

impl Poly {
    pub fn new(mut coeffs: Vec<Integer>) -> Poly {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn one() -> Poly {
        Poly::from_i64(&[1])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Poly {
        let mut c = vec![Integer::new(); n + 1];
        c[n] = Integer::from(1);
        Poly(c)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Integer {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly(Vec::new());
        }
        let mut out = vec![Integer::new(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| Integer::from(c * k as u64)).collect())
    }

    pub fn eval_rational(&self, z: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.0.iter().rev() {
            acc = Rational::from(&acc * z) + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let prec = z.prec();
        let mut acc = Complex::new(prec);
        for c in self.0.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// Upper bound for the rounding error of [`Poly::eval_complex`] at `z`:
    /// `4 (n + 1) u sum |c_k| |z|^k` with unit roundoff `u = 2^(1 - prec)`.
    fn eval_error_bound(&self, z: &Complex) -> Float {
        let prec = z.prec().0;
        let r = modulus(z, prec, Round::Up);
        let mut acc = Float::new(prec);
        for c in self.0.iter().rev() {
            acc = Float::with_val_round(prec, &acc * &r, Round::Up).0;
            acc += Float::with_val(prec, c).abs();
        }
        let n = self.0.len() as u32 + 1;
        acc * (4 * n) * Float::with_val(prec, Float::u_exp(1, 1 - prec as i32))
    }

    fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(|c| Rational::from(c.clone())).collect()
    }

    /// Integer polynomial with content 1 and positive leading coefficient,
    /// proportional to the given rational one.
    fn from_rational_primitive(q: &[Rational]) -> Poly {
        let mut lcm = Integer::from(1);
        for c in q {
            lcm.lcm_mut(c.denom());
        }
        let mut ints: Vec<Integer> = q.iter().map(|c| c.numer() * (&lcm / Integer::from(c.denom()))).collect();
        let mut content = Integer::new();
        for c in &ints {
            content.gcd_mut(c);
        }
        if content != 0 {
            for c in ints.iter_mut() {
                *c /= &content;
            }
        }
        let mut p = Poly::new(ints);
        if p.0.last().is_some_and(|c| *c < 0) {
            p = Poly::new(p.0.into_iter().map(|c| -c).collect());
        }
        p
    }

    /// `p / gcd(p, p')`: the same roots, each simple.
    pub fn squarefree(&self) -> Poly {
        if self.degree() < 1 {
            return self.clone();
        }
        let g = qgcd(self.to_rational(), self.derivative().to_rational());
        let (q, _) = qdivrem(&self.to_rational(), &g);
        Poly::from_rational_primitive(&q)
    }
}

fn qtrim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.last().is_some_and(|c| *c == 0) {
        v.pop();
    }
    v
}

fn qdivrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = qtrim(b.to_vec());
    let mut r = qtrim(a.to_vec());
    let lead = b.last().expect("division by zero polynomial").clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::new(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = Rational::from(r.last().unwrap() / &lead);
        for (k, c) in b.iter().enumerate() {
            r[shift + k] -= Rational::from(&factor * c);
        }
        q[shift] = factor;
        r.pop();
        r = qtrim(r);
    }
    (q, r)
}

fn qgcd(mut a: Vec<Rational>, mut b: Vec<Rational>) -> Vec<Rational> {
    a = qtrim(a);
    b = qtrim(b);
    while !b.is_empty() {
        let (_, r) = qdivrem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(|| Rational::from(1));
    a.into_iter().map(|c| c / &lead).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = mag != 1 || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{k}")?,
            }
        }
        Ok(())
    }
}

fn modulus(z: &Complex, prec: u32, round: Round) -> Float {
    Float::with_val_round(prec, z.abs_ref(), round).0
}

/// A closed disc in the complex plane.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDisc {
    pub center: Complex,
    pub radius: Float,
    /// Number of roots (with multiplicity) inside the disc.
    pub count: usize,
}

impl RootDisc {
    /// Enclosure of `|z|` over the disc, as `(lower, upper)`.
    pub fn modulus_bounds(&self) -> (Float, Float) {
        let prec = self.radius.prec();
        let m = modulus(&self.center, prec, Round::Nearest);
        let lo = Float::with_val_round(prec, &m - &self.radius, Round::Down).0;
        let hi = Float::with_val_round(prec, &m + &self.radius, Round::Up).0;
        let zero = Float::new(prec);
        (if lo < 0 { zero } else { lo }, hi)
    }

    pub fn contains_real(&self, lo: &Float, hi: &Float) -> bool {
        // distance from center to the real segment [lo, hi]
        let prec = self.radius.prec();
        let re = self.center.real();
        let dx = if re < lo {
            Float::with_val(prec, lo - re)
        } else if re > hi {
            Float::with_val(prec, re - hi)
        } else {
            Float::new(prec)
        };
        let dy = Float::with_val(prec, self.center.imag().abs_ref());
        let d = Float::with_val(prec, dx.hypot(&dy));
        d <= self.radius
    }
}

/// Roots of `p` with certified enclosures.
///
/// The squarefree part is solved with the Aberth-Ehrlich iteration; each
/// approximation `z_i` then gets the inclusion radius
/// `n |p(z_i)| / (|a_n| prod_{j != i} |z_i - z_j|)` (inflated by the
/// evaluation error bound). The union of these discs holds every root and
/// each connected component of `k` discs holds exactly `k` roots; components
/// are merged into a single disc. Roots are those of the squarefree part, so
/// repeated roots of `p` appear once.
pub fn certified_roots(p: &Poly, prec: u32) -> Result<Vec<RootDisc>, SpectralError> {
    let q = p.squarefree();
    let n = q.degree();
    if q.is_zero() {
        return Err(SpectralError::ZeroPolynomial);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let work = prec + 32;
    let roots = aberth(&q, work)?;
    let lead = Float::with_val(work, q.coeff(n)).abs();
    let mut discs = Vec::with_capacity(n);
    for (i, z) in roots.iter().enumerate() {
        let pz = q.eval_complex(z);
        let err = q.eval_error_bound(z);
        let num = (modulus(&pz, work, Round::Up) + err) * n as u32;
        let mut den = lead.clone();
        for (j, w) in roots.iter().enumerate() {
            if i != j {
                let d = Complex::with_val(work, z - w);
                den *= modulus(&d, work, Round::Down);
            }
        }
        let radius = if den == 0 { Float::with_val(work, f64::INFINITY) } else { Float::with_val_round(work, &num / &den, Round::Up).0 };
        // absorb the rounding of the final products
        let radius = radius * Float::with_val(work, 1.0 + 1e-20) + Float::with_val(work, Float::u_exp(1, -(prec as i32)));
        discs.push(RootDisc { center: z.clone(), radius, count: 1 });
    }
    Ok(merge_overlapping(discs))
}

fn discs_overlap(a: &RootDisc, b: &RootDisc) -> bool {
    let prec = a.radius.prec();
    let d = Complex::with_val(prec, &a.center - &b.center);
    let dist = modulus(&d, prec, Round::Down);
    dist <= Float::with_val_round(prec, &a.radius + &b.radius, Round::Up).0
}

fn merge_overlapping(mut discs: Vec<RootDisc>) -> Vec<RootDisc> {
    loop {
        let mut merged = false;
        'outer: for i in 0..discs.len() {
            for j in i + 1..discs.len() {
                if discs_overlap(&discs[i], &discs[j]) {
                    let b = discs.remove(j);
                    let a = discs.remove(i);
                    discs.push(enclosing(&a, &b));
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            return discs;
        }
    }
}

fn enclosing(a: &RootDisc, b: &RootDisc) -> RootDisc {
    let prec = a.radius.prec();
    let center = Complex::with_val(prec, &a.center + &b.center) / 2u32;
    let da = Complex::with_val(prec, &center - &a.center).abs().real().clone();
    let db = Complex::with_val(prec, &center - &b.center).abs().real().clone();
    let ra = Float::with_val_round(prec, &da + &a.radius, Round::Up).0;
    let rb = Float::with_val_round(prec, &db + &b.radius, Round::Up).0;
    let radius = if ra > rb { ra } else { rb } * Float::with_val(prec, 1.0 + 1e-20);
    RootDisc { center, radius, count: a.count + b.count }
}

fn aberth(p: &Poly, prec: u32) -> Result<Vec<Complex>, SpectralError> {
    let n = p.degree();
    let dp = p.derivative();
    // Start on a circle of radius given by a Fujiwara-type bound.
    let lead = p.coeff(n).to_f64().abs();
    let mut bound: f64 = 0.0;
    for k in 0..n {
        let c = p.coeff(k).to_f64().abs() / lead;
        bound = bound.max(c.powf(1.0 / (n - k) as f64));
    }
    let radius = (2.0 * bound).max(1e-3);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex::with_val(prec, (radius * theta.cos(), radius * theta.sin()))
        })
        .collect();
    let tol = Float::with_val(prec, Float::u_exp(1, -(prec as i32) + 16));
    for _ in 0..2000 {
        let mut worst = Float::new(prec);
        for i in 0..n {
            let pz = p.eval_complex(&z[i]);
            if pz.real().is_zero() && pz.imag().is_zero() {
                continue;
            }
            let dpz = dp.eval_complex(&z[i]);
            let ratio = Complex::with_val(prec, &pz / &dpz);
            let mut sum = Complex::new(prec);
            for j in 0..n {
                if i != j {
                    let d = Complex::with_val(prec, &z[i] - &z[j]);
                    sum += d.recip();
                }
            }
            let denom = Complex::with_val(prec, 1) - Complex::with_val(prec, &ratio * &sum);
            let step = ratio / denom;
            let size = Float::with_val(prec, step.abs_ref());
            let scale = Float::with_val(prec, z[i].abs_ref()).max(&Float::with_val(prec, 1));
            let rel = size / scale;
            if rel > worst {
                worst = rel;
            }
            z[i] -= step;
        }
        if !worst.is_finite() {
            return Err(SpectralError::RootFinding("non-finite iterate".into()));
        }
        if worst < tol {
            return Ok(z);
        }
    }
    Err(SpectralError::RootFinding("Aberth iteration did not converge".into()))
}
