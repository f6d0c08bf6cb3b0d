//! Named example schemes used throughout the tests, the guide and the CLI.

use rug::Rational;

use super::{build_scheme, BlockSpec, Direction, Scheme};
use crate::rational::ratio;

fn must(blocks: &[BlockSpec]) -> Scheme {
    build_scheme(blocks).expect("catalog schemes are valid")
}

/// `{1/2, 1/2}`: plain dyadic splitting.
pub fn dyadic() -> Scheme {
    kakutani(ratio(1, 2))
}

/// The alpha-Kakutani scheme: split `[0,1]` as `[0, alpha] U [alpha, 1]`.
pub fn kakutani(alpha: Rational) -> Scheme {
    let rest = Rational::from(1 - &alpha);
    must(&[BlockSpec::atom(alpha), BlockSpec::atom(rest)])
}

/// `{[0,1/2], [1/2,2/3], [2/3,1]}`.
pub fn half_sixth_third() -> Scheme {
    must(&[BlockSpec::atom(ratio(1, 2)), BlockSpec::atom(ratio(1, 6)), BlockSpec::atom(ratio(1, 3))])
}

/// `{[0,1/2]}` followed by intervals of length `3^-(k+1)` accumulating at 1.
pub fn half_third_tail() -> Scheme {
    must(&[BlockSpec::atom(ratio(1, 2)), BlockSpec::tail(ratio(1, 3), ratio(1, 3), Direction::Ascending)])
}

/// `{1/2, 1/4, 1/8, 1/8}`, rank one with base 1/2.
pub fn powers_of_half() -> Scheme {
    must(&[
        BlockSpec::atom(ratio(1, 2)),
        BlockSpec::atom(ratio(1, 4)),
        BlockSpec::atom(ratio(1, 8)),
        BlockSpec::atom(ratio(1, 8)),
    ])
}

/// `{1/2, 1/3, 1/6}`, rank two.
pub fn half_third_sixth() -> Scheme {
    must(&[BlockSpec::atom(ratio(1, 2)), BlockSpec::atom(ratio(1, 3)), BlockSpec::atom(ratio(1, 6))])
}

/// Lengths `2^-k`, `k >= 1`, accumulating at 1.
pub fn binary_tail() -> Scheme {
    must(&[BlockSpec::tail(ratio(1, 2), ratio(1, 2), Direction::Ascending)])
}

/// Lengths `2^-k`, `k >= 1`, accumulating at 0; no map fixes 0.
pub fn binary_tail_descending() -> Scheme {
    must(&[BlockSpec::tail(ratio(1, 2), ratio(1, 2), Direction::Descending)])
}

/// `{1/2} U {1/3} U {7^-k}_{k>=1}`, rank three.
pub fn rank_three() -> Scheme {
    must(&[
        BlockSpec::atom(ratio(1, 2)),
        BlockSpec::atom(ratio(1, 3)),
        BlockSpec::tail(ratio(1, 7), ratio(1, 7), Direction::Ascending),
    ])
}

/// Every named scheme, in a stable order.
pub fn bundled() -> Vec<(&'static str, Scheme)> {
    NAMES.iter().map(|&n| (n, by_name(n).unwrap())).collect()
}

pub const NAMES: &[&str] = &[
    "dyadic",
    "kakutani-third",
    "half-sixth-third",
    "half-third-tail",
    "powers-of-half",
    "half-third-sixth",
    "binary-tail",
    "binary-tail-desc",
    "rank-three",
];

pub fn by_name(name: &str) -> Option<Scheme> {
    Some(match name {
        "dyadic" => dyadic(),
        "kakutani-third" => kakutani(ratio(1, 3)),
        "half-sixth-third" => half_sixth_third(),
        "half-third-tail" => half_third_tail(),
        "powers-of-half" => powers_of_half(),
        "half-third-sixth" => half_third_sixth(),
        "binary-tail" => binary_tail(),
        "binary-tail-desc" => binary_tail_descending(),
        "rank-three" => rank_three(),
        _ => return None,
    })
}
