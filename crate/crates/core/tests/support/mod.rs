//! Shared test helpers: independent oracles and random inputs.
#![allow(dead_code)]

use kakutani::rational::ratio;
use kakutani::scheme::{build_scheme, BlockSpec, Direction, Scheme, Symbol, Word};
use rand::Rng;
use rug::{Integer, Rational};

/// Brute-force `(extreme, star)`: every interval with endpoints in
/// `points ∪ {0, 1}`, in all four open/closed variants.
pub fn discrepancy_oracle(points: &[Rational]) -> (Rational, Rational) {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    let mut cands = vec![Rational::new()];
    cands.extend(pts.iter().cloned());
    cands.push(Rational::from(1));
    cands.sort();
    cands.dedup();
    // lower(c) = #points < c, upper(c) = #points <= c
    let lower: Vec<i64> = cands.iter().map(|c| pts.partition_point(|p| p < c) as i64).collect();
    let upper: Vec<i64> = cands.iter().map(|c| pts.partition_point(|p| p <= c) as i64).collect();
    let mut denom = Integer::from(1);
    for c in &cands {
        denom.lcm_mut(c.denom());
    }
    let scaled: Vec<Integer> = cands.iter().map(|c| Integer::from(c.numer() * &denom) / c.denom()).collect();
    let nn = n as i64;
    let best_num = if denom.significant_bits() + 16 < 100 {
        let d = denom.to_i128().unwrap();
        let s: Vec<i128> = scaled.iter().map(|v| v.to_i128().unwrap()).collect();
        let mut best: i128 = 0;
        for i in 0..cands.len() {
            for j in i..cands.len() {
                let len = (s[j] - s[i]) * nn as i128;
                let counts = [
                    upper[j] - lower[i],
                    (lower[j] - upper[i]).max(0),
                    lower[j] - lower[i],
                    upper[j] - upper[i],
                ];
                for c in counts {
                    let v = (c as i128 * d - len).abs();
                    best = best.max(v);
                }
            }
        }
        Integer::from(best)
    } else {
        let mut best = Integer::new();
        for i in 0..cands.len() {
            for j in i..cands.len() {
                let len = Integer::from(&scaled[j] - &scaled[i]) * nn;
                for c in [upper[j] - lower[i], (lower[j] - upper[i]).max(0), lower[j] - lower[i], upper[j] - upper[i]] {
                    let v = (Integer::from(&denom * c) - &len).abs();
                    if v > best {
                        best = v;
                    }
                }
            }
        }
        best
    };
    let extreme = Rational::from((best_num, Integer::from(&denom * nn)));
    let mut star = Rational::new();
    for (k, c) in cands.iter().enumerate() {
        for cnt in [lower[k], upper[k]] {
            let v = (Rational::from((cnt, nn)) - c).abs();
            if v > star {
                star = v;
            }
        }
    }
    (extreme, star)
}

/// A random finite scheme with `2..=5` atoms of integer weights.
pub fn random_finite_scheme<R: Rng>(rng: &mut R) -> Scheme {
    let k = rng.random_range(2..=5);
    let w: Vec<i64> = (0..k).map(|_| rng.random_range(1..=9)).collect();
    let total: i64 = w.iter().sum();
    build_scheme(&w.iter().map(|&x| BlockSpec::atom(ratio(x, total))).collect::<Vec<_>>()).unwrap()
}

/// An atom followed by a geometric tail carrying the remaining mass.
pub fn random_tail_scheme<R: Rng>(rng: &mut R) -> Scheme {
    let q = rng.random_range(3..=9);
    let p = rng.random_range(1..q);
    let atom = ratio(p, q);
    let r = ratio(1, rng.random_range(2..=4));
    let first = Rational::from(1 - &atom) * Rational::from(1 - &r);
    let dir = if rng.random_bool(0.5) { Direction::Ascending } else { Direction::Descending };
    let tail = BlockSpec::tail(first, r, dir);
    let blocks = if rng.random_bool(0.5) { vec![BlockSpec::atom(atom), tail] } else { vec![tail, BlockSpec::atom(atom)] };
    build_scheme(&blocks).unwrap()
}

pub fn random_scheme<R: Rng>(rng: &mut R) -> Scheme {
    if rng.random_bool(0.3) {
        random_tail_scheme(rng)
    } else {
        random_finite_scheme(rng)
    }
}

pub fn random_symbol<R: Rng>(scheme: &Scheme, rng: &mut R) -> Symbol {
    let b = rng.random_range(0..scheme.blocks().len());
    let depth = match scheme.blocks()[b] {
        BlockSpec::Atom { .. } => 0,
        BlockSpec::GeoTail { .. } => rng.random_range(0..3),
    };
    Symbol::new(b, depth)
}

pub fn random_word<R: Rng>(scheme: &Scheme, max_len: usize, rng: &mut R) -> Word {
    let len = rng.random_range(0..=max_len);
    Word((0..len).map(|_| random_symbol(scheme, rng)).collect())
}

/// A random lambda in `[1/den_max, 1]` with a small denominator.
pub fn random_lambda<R: Rng>(rng: &mut R, den_max: i64) -> Rational {
    let q = rng.random_range(2..=den_max);
    ratio(rng.random_range(1..q.min(4) + 1).min(q), q)
}
