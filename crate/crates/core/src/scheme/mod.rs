//! Partitions of `[0, 1]` as ordered families of orientation-preserving
//! similarities `T_i(x) = alpha_i * x + c_i`.
//!
//! A [`Scheme`] is compiled from a finite list of [`BlockSpec`]s. An atom is a
//! single interval; a geometric tail is the countable family of intervals with
//! lengths `first * ratio^k`, laid side by side. Symbols are `(block, depth)`
//! pairs, with depth 0 for atoms, and every length and endpoint is an exact
//! rational.

pub mod catalog;
pub mod file;

use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, pow};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("block lengths sum to {total}, not 1")]
    MassNotOne { total: String },
    #[error("block {index} is degenerate: {reason}")]
    DegenerateBlock { index: usize, reason: String },
    #[error("symbol ({block}, {depth}) does not exist in this scheme")]
    InvalidSymbol { block: usize, depth: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Lengths shrink to the right; the tail accumulates at the block's right end.
    #[serde(rename = "asc")]
    Ascending,
    /// Lengths shrink to the left; the tail accumulates at the block's left end.
    #[serde(rename = "desc")]
    Descending,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlockSpec {
    Atom { length: Rational },
    GeoTail { first: Rational, ratio: Rational, direction: Direction },
}

impl BlockSpec {
    pub fn atom(length: Rational) -> BlockSpec {
        BlockSpec::Atom { length }
    }

    pub fn tail(first: Rational, ratio: Rational, direction: Direction) -> BlockSpec {
        BlockSpec::GeoTail { first, ratio, direction }
    }

    /// Total length covered by the block.
    pub fn mass(&self) -> Rational {
        match self {
            BlockSpec::Atom { length } => length.clone(),
            BlockSpec::GeoTail { first, ratio, .. } => first / Rational::from(1 - ratio),
        }
    }

    fn validate(&self, index: usize) -> Result<(), SchemeError> {
        let bad = |reason: &str| SchemeError::DegenerateBlock { index, reason: reason.to_string() };
        match self {
            BlockSpec::Atom { length } => {
                if *length <= 0 || *length >= 1 {
                    return Err(bad("atom length must lie in (0, 1)"));
                }
            }
            BlockSpec::GeoTail { first, ratio, .. } => {
                if *first <= 0 {
                    return Err(bad("tail first length must be positive"));
                }
                if *ratio <= 0 || *ratio >= 1 {
                    return Err(bad("tail ratio must lie in (0, 1)"));
                }
                if self.mass() > 1 {
                    return Err(bad("tail mass first/(1-ratio) must not exceed 1"));
                }
            }
        }
        Ok(())
    }
}

/// One element of the (countable) alphabet: block index plus depth inside a
/// tail. Ordering is the canonical one: block, then depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol {
    pub block: usize,
    pub depth: u32,
}

impl Symbol {
    pub fn new(block: usize, depth: u32) -> Symbol {
        Symbol { block, depth }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.block, self.depth)
    }
}

/// A finite word over the scheme's alphabet; `T_v = T_{v_1} o ... o T_{v_k}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scheme {
    blocks: Vec<BlockSpec>,
    offsets: Vec<Rational>,
    zero_symbol: Option<Symbol>,
}

/// Compiles a block list into a scheme, checking that the lengths sum to
/// exactly one.
pub fn build_scheme(blocks: &[BlockSpec]) -> Result<Scheme, SchemeError> {
    for (i, b) in blocks.iter().enumerate() {
        b.validate(i)?;
    }
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut total = Rational::new();
    for b in blocks {
        offsets.push(total.clone());
        total += b.mass();
    }
    if total != 1 {
        return Err(SchemeError::MassNotOne { total: format_rational(&total) });
    }
    let zero_symbol = match blocks.first() {
        Some(BlockSpec::Atom { .. }) => Some(Symbol::new(0, 0)),
        Some(BlockSpec::GeoTail { direction: Direction::Ascending, .. }) => Some(Symbol::new(0, 0)),
        _ => None,
    };
    Ok(Scheme { blocks: blocks.to_vec(), offsets, zero_symbol })
}

impl Scheme {
    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    /// The symbol whose map fixes 0, if any.
    pub fn zero_symbol(&self) -> Option<Symbol> {
        self.zero_symbol
    }

    pub fn is_finite(&self) -> bool {
        self.blocks.iter().all(|b| matches!(b, BlockSpec::Atom { .. }))
    }

    pub fn tail_count(&self) -> usize {
        self.blocks.iter().filter(|b| matches!(b, BlockSpec::GeoTail { .. })).count()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        match self.blocks.get(s.block) {
            Some(BlockSpec::Atom { .. }) => s.depth == 0,
            Some(BlockSpec::GeoTail { .. }) => true,
            None => false,
        }
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<(), SchemeError> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(SchemeError::InvalidSymbol { block: s.block, depth: s.depth })
        }
    }

    /// Contraction ratio of a symbol. Panics on a symbol outside the scheme.
    pub fn alpha(&self, s: Symbol) -> Rational {
        match &self.blocks[s.block] {
            BlockSpec::Atom { length } => {
                assert_eq!(s.depth, 0, "atoms only have depth 0");
                length.clone()
            }
            BlockSpec::GeoTail { first, ratio, .. } => first * pow(ratio, s.depth),
        }
    }

    /// Translation part `c_i`, i.e. the left end of `T_i[0, 1]`.
    pub fn left(&self, s: Symbol) -> Rational {
        let offset = &self.offsets[s.block];
        match &self.blocks[s.block] {
            BlockSpec::Atom { .. } => offset.clone(),
            BlockSpec::GeoTail { first, ratio, direction } => {
                let one_minus = Rational::from(1 - ratio);
                match direction {
                    // offset + first (1 - r^k) / (1 - r)
                    Direction::Ascending => {
                        let done = 1 - pow(ratio, s.depth);
                        offset + (first * done) / one_minus
                    }
                    // offset + first r^(k+1) / (1 - r): everything deeper sits to the left
                    Direction::Descending => {
                        let deeper = first * pow(ratio, s.depth + 1);
                        offset + deeper / one_minus
                    }
                }
            }
        }
    }

    /// Largest contraction ratio in the scheme.
    pub fn max_alpha(&self) -> Rational {
        self.blocks
            .iter()
            .map(|b| match b {
                BlockSpec::Atom { length } => length.clone(),
                BlockSpec::GeoTail { first, .. } => first.clone(),
            })
            .max()
            .expect("schemes are non-empty")
    }

    /// Deepest tail depth whose length is still `>= lambda`, or `None` if even
    /// the first interval is shorter.
    fn tail_depth_limit(first: &Rational, ratio: &Rational, lambda: &Rational) -> Option<u32> {
        if first < lambda {
            return None;
        }
        let mut len = first.clone();
        let mut depth = 0u32;
        loop {
            let next = Rational::from(&len * ratio);
            if next < *lambda {
                return Some(depth);
            }
            len = next;
            depth += 1;
        }
    }

    /// Symbols with `alpha >= lambda`, in left-to-right position order.
    pub fn truncated_alphabet(&self, lambda: &Rational) -> Vec<Symbol> {
        let mut out = Vec::new();
        for (block, b) in self.blocks.iter().enumerate() {
            match b {
                BlockSpec::Atom { length } => {
                    if length >= lambda {
                        out.push(Symbol::new(block, 0));
                    }
                }
                BlockSpec::GeoTail { first, ratio, direction } => {
                    if let Some(max) = Self::tail_depth_limit(first, ratio, lambda) {
                        match direction {
                            Direction::Ascending => out.extend((0..=max).map(|d| Symbol::new(block, d))),
                            Direction::Descending => out.extend((0..=max).rev().map(|d| Symbol::new(block, d))),
                        }
                    }
                }
            }
        }
        out
    }

    /// Symbols with `alpha >= lambda` paired with their ratio, in canonical
    /// (block, depth) order.
    pub fn symbols_with_alpha(&self, lambda: &Rational) -> Vec<(Symbol, Rational)> {
        let mut out: Vec<(Symbol, Rational)> =
            self.truncated_alphabet(lambda).into_iter().map(|s| (s, self.alpha(s))).collect();
        out.sort_by_key(|a| a.0);
        out
    }

    /// Distinct ratio values `>= lambda` with multiplicities, largest first.
    pub fn alpha_values(&self, lambda: &Rational) -> Vec<(Rational, u64)> {
        let mut vals: Vec<Rational> = self.truncated_alphabet(lambda).into_iter().map(|s| self.alpha(s)).collect();
        vals.sort_by(|a, b| b.cmp(a));
        let mut out: Vec<(Rational, u64)> = Vec::new();
        for v in vals {
            match out.last_mut() {
                Some((last, m)) if *last == v => *m += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub fn word_alpha(&self, word: &Word) -> Rational {
        let mut acc = Rational::from(1);
        for &s in word.symbols() {
            acc *= self.alpha(s);
        }
        acc
    }

    /// `T_v(0)`, by the right-to-left fold `t <- c(s) + alpha(s) t`.
    pub fn word_left_endpoint(&self, word: &Word) -> Rational {
        let mut t = Rational::new();
        for &s in word.symbols().iter().rev() {
            t = self.left(s) + (self.alpha(s) * &t);
        }
        t
    }

    /// Applies `T_s` to a point.
    pub fn apply(&self, s: Symbol, x: &Rational) -> Rational {
        self.left(s) + (self.alpha(s) * x)
    }
}

/// Free-function form of [`Scheme::truncated_alphabet`].
pub fn truncated_alphabet(scheme: &Scheme, lambda: &Rational) -> Vec<Symbol> {
    scheme.truncated_alphabet(lambda)
}

pub fn word_alpha(scheme: &Scheme, word: &Word) -> Rational {
    scheme.word_alpha(word)
}

pub fn word_left_endpoint(scheme: &Scheme, word: &Word) -> Rational {
    scheme.word_left_endpoint(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use catalog::*;
    use proptest::prelude::*;

    fn w(symbols: &[(usize, u32)]) -> Word {
        Word(symbols.iter().map(|&(b, d)| Symbol::new(b, d)).collect())
    }

    #[test]
    fn kakutani_third_maps() {
        let s = kakutani(ratio(1, 3));
        assert_eq!(s.alpha(Symbol::new(0, 0)), ratio(1, 3));
        assert_eq!(s.alpha(Symbol::new(1, 0)), ratio(2, 3));
        assert_eq!(s.left(Symbol::new(0, 0)), ratio(0, 1));
        assert_eq!(s.left(Symbol::new(1, 0)), ratio(1, 3));
        assert_eq!(s.zero_symbol(), Some(Symbol::new(0, 0)));
    }

    #[test]
    fn half_sixth_third_maps() {
        let s = half_sixth_third();
        let alphas: Vec<_> = (0..3).map(|b| s.alpha(Symbol::new(b, 0))).collect();
        let lefts: Vec<_> = (0..3).map(|b| s.left(Symbol::new(b, 0))).collect();
        assert_eq!(alphas, vec![ratio(1, 2), ratio(1, 6), ratio(1, 3)]);
        assert_eq!(lefts, vec![ratio(0, 1), ratio(1, 2), ratio(2, 3)]);
    }

    #[test]
    fn half_third_tail_tail_positions() {
        let s = half_third_tail();
        for k in 0..6u32 {
            let sym = Symbol::new(1, k);
            let third_k = pow(&ratio(1, 3), k);
            assert_eq!(s.alpha(sym), Rational::from(&third_k / 3));
            assert_eq!(s.left(sym), (1 - Rational::from(&third_k / 2)));
        }
    }

    #[test]
    fn descending_tail_accumulates_at_left() {
        let s = binary_tail_descending();
        assert_eq!(s.zero_symbol(), None);
        // depth 0 is the rightmost interval [1/2, 1)
        assert_eq!(s.left(Symbol::new(0, 0)), ratio(1, 2));
        assert_eq!(s.left(Symbol::new(0, 1)), ratio(1, 4));
        assert_eq!(s.left(Symbol::new(0, 5)), ratio(1, 64));
        let alphabet = s.truncated_alphabet(&ratio(1, 8));
        assert_eq!(alphabet, vec![Symbol::new(0, 2), Symbol::new(0, 1), Symbol::new(0, 0)]);
    }

    #[test]
    fn mass_must_be_one() {
        let err = build_scheme(&[BlockSpec::atom(ratio(1, 2)), BlockSpec::atom(ratio(1, 3))]).unwrap_err();
        assert_eq!(err, SchemeError::MassNotOne { total: "5/6".into() });
        assert!(matches!(build_scheme(&[]), Err(SchemeError::MassNotOne { .. })));
    }

    #[test]
    fn degenerate_blocks_rejected() {
        let e = build_scheme(&[BlockSpec::atom(ratio(1, 1))]).unwrap_err();
        assert!(matches!(e, SchemeError::DegenerateBlock { index: 0, .. }));
        let e = build_scheme(&[
            BlockSpec::atom(ratio(1, 2)),
            BlockSpec::tail(ratio(1, 4), ratio(1, 1), Direction::Ascending),
        ])
        .unwrap_err();
        assert!(matches!(e, SchemeError::DegenerateBlock { index: 1, .. }));
        let e = build_scheme(&[BlockSpec::atom(ratio(-1, 2)), BlockSpec::atom(ratio(3, 2))]).unwrap_err();
        assert!(matches!(e, SchemeError::DegenerateBlock { index: 0, .. }));
    }

    #[test]
    fn truncated_alphabet_examples() {
        let s = kakutani(ratio(1, 3));
        assert_eq!(s.truncated_alphabet(&ratio(1, 2)), vec![Symbol::new(1, 0)]);
        assert!(s.truncated_alphabet(&ratio(2, 1)).is_empty());
        let f3 = half_third_tail();
        let lens: Vec<_> = f3.truncated_alphabet(&ratio(1, 10)).into_iter().map(|x| f3.alpha(x)).collect();
        assert_eq!(lens, vec![ratio(1, 2), ratio(1, 3), ratio(1, 9)]);
    }

    #[test]
    fn word_examples() {
        let s = kakutani(ratio(1, 3));
        assert_eq!(s.word_alpha(&Word::empty()), ratio(1, 1));
        assert_eq!(s.word_left_endpoint(&Word::empty()), ratio(0, 1));
        assert_eq!(s.word_alpha(&w(&[(1, 0), (1, 0)])), ratio(4, 9));
        assert_eq!(s.word_left_endpoint(&w(&[(1, 0), (1, 0)])), ratio(5, 9));
        assert_eq!(s.word_left_endpoint(&w(&[(1, 0), (1, 0), (1, 0)])), ratio(19, 27));
        let f2 = half_sixth_third();
        assert_eq!(f2.word_alpha(&w(&[(0, 0), (2, 0)])), ratio(1, 6));
    }

    #[test]
    fn catalog_masses_are_exact() {
        for (name, s) in bundled() {
            let total: Rational = s.blocks().iter().map(|b| b.mass()).sum();
            assert_eq!(total, 1, "{name}");
        }
    }

    fn scheme_strategy() -> impl Strategy<Value = Scheme> {
        prop::sample::select(bundled().into_iter().map(|(_, s)| s).collect::<Vec<_>>())
    }

    fn word_strategy(s: &Scheme) -> impl Strategy<Value = Word> + Clone {
        let choices: Vec<Symbol> = s.truncated_alphabet(&ratio(1, 100));
        prop::collection::vec(prop::sample::select(choices), 0..5).prop_map(Word)
    }

    proptest! {
        #[test]
        fn affine_composition_law((s, v, u) in scheme_strategy().prop_flat_map(|s| {
            let ws = word_strategy(&s);
            (Just(s), ws.clone(), ws)
        })) {
            let joined = v.concat(&u);
            let expected = s.word_left_endpoint(&v) + s.word_alpha(&v) * s.word_left_endpoint(&u);
            prop_assert_eq!(s.word_left_endpoint(&joined), expected);
            prop_assert_eq!(s.word_alpha(&joined), s.word_alpha(&v) * s.word_alpha(&u));
        }

        #[test]
        fn prefix_free_words_are_disjoint((s, v, u) in scheme_strategy().prop_flat_map(|s| {
            let ws = word_strategy(&s);
            (Just(s), ws.clone(), ws)
        })) {
            let is_prefix = |p: &Word, q: &Word| q.symbols().starts_with(p.symbols());
            if is_prefix(&v, &u) || is_prefix(&u, &v) {
                return Ok(());
            }
            let (a, b) = (s.word_left_endpoint(&v), s.word_left_endpoint(&u));
            let (la, lb) = (s.word_alpha(&v), s.word_alpha(&u));
            let disjoint = Rational::from(&a + &la) <= b || Rational::from(&b + &lb) <= a;
            prop_assert!(disjoint);
        }

        #[test]
        fn endpoints_stay_in_unit_interval((s, v) in scheme_strategy().prop_flat_map(|s| {
            let ws = word_strategy(&s);
            (Just(s), ws)
        })) {
            let left = s.word_left_endpoint(&v);
            prop_assert!(left >= 0);
            prop_assert!((&left + s.word_alpha(&v)) <= 1);
        }
    }

    #[test]
    fn truncated_mass_lower_bound() {
        // Missing mass: each short atom is below lambda, each tail's short part
        // is below lambda / (1 - ratio).
        for (name, s) in bundled() {
            let max_ratio = s
                .blocks()
                .iter()
                .filter_map(|b| match b {
                    BlockSpec::GeoTail { ratio, .. } => Some(ratio.clone()),
                    _ => None,
                })
                .max()
                .unwrap_or_else(Rational::new);
            for k in 1..12 {
                let lambda = pow(&ratio(1, 2), k);
                let sum: Rational = s.truncated_alphabet(&lambda).into_iter().map(|x| s.alpha(x)).sum();
                let short_atoms = s
                    .blocks()
                    .iter()
                    .filter(|b| matches!(b, BlockSpec::Atom { length } if *length < lambda))
                    .count();
                let slack = Rational::from(s.tail_count() as i64) * &lambda / Rational::from(1 - &max_ratio)
                    + Rational::from(short_atoms as i64) * &lambda;
                assert!(sum >= (1 - slack), "{name} at 2^-{k}");
            }
        }
    }
}
