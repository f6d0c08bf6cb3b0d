//! Word sets `A_lambda = {v : alpha_v >= lambda}`, their left endpoints
//! `X_lambda`, the ladder of distinct word lengths and slices of the
//! refinement partitions `P_n`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::renewal::LatticeExponents;
use crate::scheme::{BlockSpec, Scheme, Symbol, Word};

/// Default cap on emitted words, memo entries or heap pops.
pub const DEFAULT_BUDGET: usize = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("budget of {budget} {what} exceeded")]
    BudgetExceeded { budget: usize, what: &'static str },
    #[error("lambda must be positive")]
    NonPositiveLambda,
}

fn check_lambda(lambda: &Rational) -> Result<(), EnumError> {
    if *lambda <= 0 {
        Err(EnumError::NonPositiveLambda)
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSet {
    #[serde(with = "crate::rational::serde_rational")]
    pub lambda: Rational,
    #[serde(serialize_with = "serialize_points")]
    pub points: Vec<Rational>,
}

fn serialize_points<S: serde::Serializer>(points: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(points.len()))?;
    for p in points {
        seq.serialize_element(&crate::rational::format_rational(p))?;
    }
    seq.end()
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points in `[a, b)`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        let lo = self.points.partition_point(|p| p < a);
        let hi = self.points.partition_point(|p| p < b);
        hi.saturating_sub(lo)
    }
}

/// Symbol table restricted to `alpha >= lambda`, in canonical order.
struct Alphabet {
    entries: Vec<(Symbol, Rational, Rational)>,
}

impl Alphabet {
    fn new(scheme: &Scheme, lambda: &Rational) -> Alphabet {
        let entries = scheme
            .symbols_with_alpha(lambda)
            .into_iter()
            .map(|(s, a)| {
                let left = scheme.left(s);
                (s, a, left)
            })
            .collect();
        Alphabet { entries }
    }
}

struct Node {
    word: Vec<Symbol>,
    alpha: Rational,
    left: Rational,
}

/// Depth-first walk over `A_lambda` below `root`. The visitor sees each word
/// with its length and left endpoint; a shared counter enforces the budget.
fn walk<F>(
    alphabet: &Alphabet,
    lambda: &Rational,
    root: Node,
    counter: &AtomicUsize,
    budget: usize,
    visit: &mut F,
) -> Result<(), EnumError>
where
    F: FnMut(&[Symbol], &Rational, &Rational),
{
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if counter.fetch_add(1, AtomicOrdering::Relaxed) >= budget {
            return Err(EnumError::BudgetExceeded { budget, what: "words" });
        }
        visit(&node.word, &node.alpha, &node.left);
        let threshold = Rational::from(lambda / &node.alpha);
        // Push in reverse so that the canonical first child is expanded first.
        for (s, a, c) in alphabet.entries.iter().rev() {
            if *a < threshold {
                continue;
            }
            let mut word = node.word.clone();
            word.push(*s);
            let left = &node.left + Rational::from(&node.alpha * c);
            stack.push(Node { word, alpha: Rational::from(&node.alpha * a), left });
        }
    }
    Ok(())
}

fn root_node() -> Node {
    Node { word: Vec::new(), alpha: Rational::from(1), left: Rational::new() }
}

/// All words with `alpha_v >= lambda`, in depth-first order with children in
/// canonical symbol order.
pub fn enumerate_a(scheme: &Scheme, lambda: &Rational, budget: usize) -> Result<Vec<Word>, EnumError> {
    check_lambda(lambda)?;
    if *lambda > 1 {
        return Ok(Vec::new());
    }
    let alphabet = Alphabet::new(scheme, lambda);
    let counter = AtomicUsize::new(0);
    let mut out = Vec::new();
    walk(&alphabet, lambda, root_node(), &counter, budget, &mut |w, _, _| out.push(Word(w.to_vec())))?;
    Ok(out)
}

/// `|A_lambda|` by memoized recursion
/// `|A_mu| = [mu <= 1] + sum_{alpha_i >= mu} |A_{mu / alpha_i}|`.
/// `budget` caps the number of distinct memo keys.
pub fn count_a(scheme: &Scheme, lambda: &Rational, budget: usize) -> Result<Integer, EnumError> {
    check_lambda(lambda)?;
    if *lambda > 1 {
        return Ok(Integer::new());
    }
    let values = scheme.alpha_values(lambda);
    // Collect every reachable key lambda / alpha_v.
    let mut seen: HashSet<Rational> = HashSet::new();
    let mut stack = vec![lambda.clone()];
    seen.insert(lambda.clone());
    while let Some(mu) = stack.pop() {
        for (a, _) in values.iter() {
            if *a < mu {
                break;
            }
            let next = Rational::from(&mu / a);
            if next <= 1 && !seen.contains(&next) {
                if seen.len() >= budget {
                    return Err(EnumError::BudgetExceeded { budget, what: "memo entries" });
                }
                seen.insert(next.clone());
                stack.push(next);
            }
        }
    }
    let mut keys: Vec<Rational> = seen.into_iter().collect();
    keys.sort_by(|a, b| b.cmp(a));
    let mut memo: HashMap<Rational, Integer> = HashMap::with_capacity(keys.len());
    for mu in keys {
        let mut total = Integer::from(1);
        for (a, mult) in values.iter() {
            if *a < mu {
                break;
            }
            let next = Rational::from(&mu / a);
            if let Some(c) = memo.get(&next) {
                total += Integer::from(c * *mult);
            }
        }
        memo.insert(mu, total);
    }
    Ok(memo.remove(lambda).expect("lambda is a key"))
}

/// `|A_{x^m}|` for `m = 0..=max_m` on a rank-one lattice, via
/// `a(m) = 1 + sum_j a(m - n_j)` with geometric tails folded into per-residue
/// prefix sums.
pub fn count_a_lattice(exponents: &LatticeExponents, max_m: usize) -> Vec<Integer> {
    let mut a: Vec<Integer> = Vec::with_capacity(max_m + 1);
    // prefix[t][m] = a(m) + a(m - q_t) + a(m - 2 q_t) + ...
    let mut prefix: Vec<Vec<Integer>> = vec![Vec::with_capacity(max_m + 1); exponents.progressions.len()];
    for m in 0..=max_m {
        let mut total = Integer::from(1);
        for &n in &exponents.finite {
            let n = n as usize;
            if n <= m {
                total += &a[m - n];
            }
        }
        for (t, &(p, _)) in exponents.progressions.iter().enumerate() {
            let p = p as usize;
            if p <= m {
                total += &prefix[t][m - p];
            }
        }
        for (t, &(_, q)) in exponents.progressions.iter().enumerate() {
            let q = q as usize;
            let mut s = total.clone();
            if q <= m {
                s += &prefix[t][m - q];
            }
            prefix[t].push(s);
        }
        a.push(total);
    }
    a
}

fn collect_endpoints(
    scheme: &Scheme,
    lambda: &Rational,
    budget: usize,
    parallel: bool,
) -> Result<Vec<Rational>, EnumError> {
    let alphabet = Alphabet::new(scheme, lambda);
    let zero = scheme.zero_symbol();
    let counter = AtomicUsize::new(0);
    let keep = |w: &[Symbol]| w.last().copied() != zero || w.is_empty();

    // The empty word, then one subtree per first symbol.
    counter.fetch_add(1, AtomicOrdering::Relaxed);
    let roots: Vec<Node> = alphabet
        .entries
        .iter()
        .map(|(s, a, c)| Node { word: vec![*s], alpha: a.clone(), left: c.clone() })
        .collect();
    let run = |root: Node| -> Result<Vec<Rational>, EnumError> {
        let mut pts = Vec::new();
        walk(&alphabet, lambda, root, &counter, budget, &mut |w, _, left| {
            if keep(w) {
                pts.push(left.clone());
            }
        })?;
        Ok(pts)
    };
    let chunks: Vec<Vec<Rational>> = if parallel {
        roots.into_par_iter().map(run).collect::<Result<_, _>>()?
    } else {
        roots.into_iter().map(run).collect::<Result<_, _>>()?
    };
    let mut points = vec![Rational::new()];
    for c in chunks {
        points.extend(c);
    }
    points.par_sort_unstable();
    points.dedup();
    Ok(points)
}

/// `X_lambda`: sorted distinct left endpoints `T_v(0)` over `A_lambda`.
/// Words ending in the zero-fixing symbol are skipped since they repeat their
/// parent's endpoint. Subtrees are walked in parallel on the current rayon pool.
pub fn point_set(scheme: &Scheme, lambda: &Rational, budget: usize) -> Result<PointSet, EnumError> {
    point_set_impl(scheme, lambda, budget, true)
}

/// Single-threaded reference version of [`point_set`].
pub fn point_set_serial(scheme: &Scheme, lambda: &Rational, budget: usize) -> Result<PointSet, EnumError> {
    point_set_impl(scheme, lambda, budget, false)
}

fn point_set_impl(scheme: &Scheme, lambda: &Rational, budget: usize, parallel: bool) -> Result<PointSet, EnumError> {
    check_lambda(lambda)?;
    let points = if *lambda > 1 { Vec::new() } else { collect_endpoints(scheme, lambda, budget, parallel)? };
    Ok(PointSet { lambda: lambda.clone(), points })
}

/// Distinct word lengths in decreasing order, produced lazily by a best-first
/// search over the product semigroup.
pub struct Ladder<'a> {
    generators: Generators<'a>,
    emitted: Vec<Rational>,
    heap: BinaryHeap<Entry>,
    pops: usize,
    budget: usize,
}

#[derive(PartialEq, Eq)]
struct Entry {
    value: Rational,
    parent: usize,
    generator: usize,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .cmp(&other.value)
            .then_with(|| other.parent.cmp(&self.parent))
            .then_with(|| other.generator.cmp(&self.generator))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distinct single-symbol lengths in decreasing order, extended on demand.
struct Generators<'a> {
    scheme: &'a Scheme,
    values: Vec<Rational>,
    /// Next depth to emit per block (atoms use depth 0 only).
    cursor: Vec<Option<u32>>,
}

impl<'a> Generators<'a> {
    fn new(scheme: &'a Scheme) -> Self {
        let cursor = scheme.blocks().iter().map(|_| Some(0)).collect();
        Generators { scheme, values: Vec::new(), cursor }
    }

    fn get(&mut self, i: usize) -> Option<&Rational> {
        while self.values.len() <= i {
            if !self.advance() {
                return None;
            }
        }
        self.values.get(i)
    }

    fn advance(&mut self) -> bool {
        let best = self
            .cursor
            .iter()
            .enumerate()
            .filter_map(|(b, d)| d.map(|d| self.scheme.alpha(Symbol::new(b, d))))
            .max();
        let Some(best) = best else { return false };
        for (b, d) in self.cursor.iter_mut().enumerate() {
            if let Some(depth) = *d {
                if self.scheme.alpha(Symbol::new(b, depth)) == best {
                    *d = match self.scheme.blocks()[b] {
                        BlockSpec::Atom { .. } => None,
                        BlockSpec::GeoTail { .. } => Some(depth + 1),
                    };
                }
            }
        }
        self.values.push(best);
        true
    }
}

impl<'a> Ladder<'a> {
    pub fn new(scheme: &'a Scheme, budget: usize) -> Self {
        let mut heap = BinaryHeap::new();
        heap.push(Entry { value: Rational::from(1), parent: usize::MAX, generator: 0 });
        Ladder { generators: Generators::new(scheme), emitted: Vec::new(), heap, pops: 0, budget }
    }

    /// Next distinct length, or an error once the pop budget is used up.
    pub fn next_value(&mut self) -> Result<Rational, EnumError> {
        loop {
            if self.pops >= self.budget {
                return Err(EnumError::BudgetExceeded { budget: self.budget, what: "ladder steps" });
            }
            self.pops += 1;
            let entry = self.heap.pop().expect("the ladder never runs dry");
            if entry.parent != usize::MAX {
                let next_gen = entry.generator + 1;
                if let Some(g) = self.generators.get(next_gen) {
                    let value = Rational::from(&self.emitted[entry.parent] * g);
                    self.heap.push(Entry { value, parent: entry.parent, generator: next_gen });
                }
            }
            if self.emitted.last() == Some(&entry.value) {
                continue;
            }
            let idx = self.emitted.len();
            if let Some(g) = self.generators.get(0) {
                let value = Rational::from(&entry.value * g);
                self.heap.push(Entry { value, parent: idx, generator: 0 });
            }
            self.emitted.push(entry.value.clone());
            return Ok(entry.value);
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.emitted
    }
}

/// `[l_0, ..., l_n]`.
pub fn length_ladder(scheme: &Scheme, n: usize, budget: usize) -> Result<Vec<Rational>, EnumError> {
    let mut ladder = Ladder::new(scheme, budget);
    for _ in 0..=n {
        ladder.next_value()?;
    }
    Ok(ladder.emitted)
}

/// The index `n` with `l_n >= lambda > l_{n+1}`.
pub fn n_of_lambda(scheme: &Scheme, lambda: &Rational, budget: usize) -> Result<usize, EnumError> {
    check_lambda(lambda)?;
    let mut ladder = Ladder::new(scheme, budget);
    let mut count = 0usize;
    while ladder.next_value()? >= *lambda {
        count += 1;
    }
    Ok(count.saturating_sub(1))
}

/// `L_n = X_{l_n}`.
pub fn l_n(scheme: &Scheme, n: usize, budget: usize) -> Result<PointSet, EnumError> {
    let ladder = length_ladder(scheme, n, budget)?;
    point_set(scheme, ladder.last().unwrap(), budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInterval {
    pub word: Word,
    pub left: Rational,
    pub length: Rational,
}

impl PartitionInterval {
    pub fn right(&self) -> Rational {
        Rational::from(&self.left + &self.length)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSlice {
    pub level: usize,
    /// Members of `P_n` with length `>= min_len`, sorted by left endpoint.
    pub intervals: Vec<PartitionInterval>,
    /// Total length of the members that were not listed.
    pub hidden_mass: Rational,
}

/// Members of `P_n` of length at least `min_len`: the words `v` with
/// `alpha_v < l_{n-1} <= alpha_parent(v)`, or the empty word for `n = 0`.
pub fn partition_level(
    scheme: &Scheme,
    n: usize,
    min_len: &Rational,
    budget: usize,
) -> Result<PartitionSlice, EnumError> {
    check_lambda(min_len)?;
    if n == 0 {
        let whole = PartitionInterval { word: Word::empty(), left: Rational::new(), length: Rational::from(1) };
        let intervals = if *min_len <= 1 { vec![whole] } else { Vec::new() };
        let hidden_mass = if intervals.is_empty() { Rational::from(1) } else { Rational::new() };
        return Ok(PartitionSlice { level: 0, intervals, hidden_mass });
    }
    let ladder = length_ladder(scheme, n - 1, budget)?;
    let split = ladder.last().unwrap().clone();
    let children = Alphabet::new(scheme, min_len);
    let mut intervals = Vec::new();
    let mut shown = Rational::new();
    let counter = AtomicUsize::new(0);
    let internal = Alphabet::new(scheme, &split);
    walk(&internal, &split, root_node(), &counter, budget, &mut |w, alpha, left| {
        let floor = Rational::from(min_len / alpha);
        for (s, a, c) in &children.entries {
            if *a < floor {
                continue;
            }
            let length = Rational::from(alpha * a);
            if length >= split {
                continue;
            }
            let mut word = w.to_vec();
            word.push(*s);
            shown += &length;
            intervals.push(PartitionInterval {
                word: Word(word),
                left: (left + Rational::from(alpha * c)),
                length,
            });
        }
    })?;
    if intervals.len() > budget {
        return Err(EnumError::BudgetExceeded { budget, what: "intervals" });
    }
    intervals.sort_by(|a, b| a.left.cmp(&b.left));
    Ok(PartitionSlice { level: n, intervals, hidden_mass: (1 - shown) })
}

/// Endpoints `T_v(0)` and `T_v(1)` of every interval split by stage `n + 1`,
/// i.e. of all words with `alpha_v >= l_n`; sorted and deduplicated.
pub fn split_endpoints(scheme: &Scheme, n: usize, budget: usize) -> Result<Vec<Rational>, EnumError> {
    let ladder = length_ladder(scheme, n, budget)?;
    let lambda = ladder.last().unwrap().clone();
    let alphabet = Alphabet::new(scheme, &lambda);
    let counter = AtomicUsize::new(0);
    let mut pts = Vec::new();
    walk(&alphabet, &lambda, root_node(), &counter, budget, &mut |_, alpha, left| {
        pts.push(left.clone());
        pts.push(Rational::from(left + alpha));
    })?;
    pts.sort();
    pts.dedup();
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{pow, ratio};
    use crate::scheme::catalog::*;

    const B: usize = DEFAULT_BUDGET;

    fn rs(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(p, q)| ratio(p, q)).collect()
    }

    #[test]
    fn kakutani_third_small_sets() {
        let s = kakutani(ratio(1, 3));
        let words = enumerate_a(&s, &ratio(1, 3), B).unwrap();
        let shown: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, vec!["()", "(0.0)", "(1.0)", "(1.0,1.0)"]);
        assert_eq!(count_a(&s, &ratio(1, 3), B).unwrap(), 4);
        let x = point_set(&s, &ratio(1, 3), B).unwrap();
        assert_eq!(x.points, rs(&[(0, 1), (1, 3), (5, 9)]));
    }

    #[test]
    fn lambda_above_one_is_empty() {
        for (_, s) in bundled() {
            assert!(enumerate_a(&s, &ratio(2, 1), B).unwrap().is_empty());
            assert_eq!(count_a(&s, &ratio(2, 1), B).unwrap(), 0);
            assert_eq!(count_a(&s, &ratio(1, 1), B).unwrap(), 1);
            assert!(point_set(&s, &ratio(2, 1), B).unwrap().is_empty());
        }
    }

    #[test]
    fn non_positive_lambda_rejected() {
        assert_eq!(count_a(&dyadic(), &ratio(0, 1), B), Err(EnumError::NonPositiveLambda));
        assert!(point_set(&dyadic(), &ratio(-1, 2), B).is_err());
    }

    #[test]
    fn dyadic_counts_and_points() {
        let s = dyadic();
        assert_eq!(count_a(&s, &ratio(1, 8), B).unwrap(), 15);
        for n in 0..8u32 {
            let lam = pow(&ratio(1, 2), n);
            assert_eq!(enumerate_a(&s, &lam, B).unwrap().len(), (1usize << (n + 1)) - 1);
            let pts = point_set(&s, &lam, B).unwrap();
            let expect: Vec<Rational> = (0..1i64 << n).map(|k| ratio(k, 1 << n)).collect();
            assert_eq!(pts.points, expect);
        }
    }

    #[test]
    fn binary_tail_counts() {
        let s = binary_tail();
        for n in 0..=12u32 {
            let lam = pow(&ratio(1, 2), n);
            assert_eq!(count_a(&s, &lam, B).unwrap(), Integer::from(1u64 << n));
        }
    }

    #[test]
    fn half_sixth_third_points_contain_labels() {
        let pts = point_set(&half_sixth_third(), &ratio(1, 6), B).unwrap();
        assert_eq!(pts.points, rs(&[(0, 1), (1, 3), (1, 2), (2, 3)]));
        // 1/4 = T_0 T_1 (0) needs a word of length 1/12
        let pts = point_set(&half_sixth_third(), &ratio(1, 12), B).unwrap();
        for p in rs(&[(0, 1), (1, 4), (1, 3), (1, 2), (2, 3)]) {
            assert!(pts.points.contains(&p), "{p}");
        }
    }

    #[test]
    fn ladders() {
        assert_eq!(
            length_ladder(&kakutani(ratio(1, 3)), 4, B).unwrap(),
            rs(&[(1, 1), (2, 3), (4, 9), (1, 3), (8, 27)])
        );
        assert_eq!(length_ladder(&dyadic(), 3, B).unwrap(), rs(&[(1, 1), (1, 2), (1, 4), (1, 8)]));
        assert_eq!(length_ladder(&half_sixth_third(), 3, B).unwrap(), rs(&[(1, 1), (1, 2), (1, 3), (1, 4)]));
        assert_eq!(
            length_ladder(&half_third_tail(), 5, B).unwrap(),
            rs(&[(1, 1), (1, 2), (1, 3), (1, 4), (1, 6), (1, 8)])
        );
        assert_eq!(length_ladder(&binary_tail(), 3, B).unwrap(), rs(&[(1, 1), (1, 2), (1, 4), (1, 8)]));
    }

    #[test]
    fn ladder_index() {
        let s = kakutani(ratio(1, 3));
        // l_3 = 1/3 >= 3/10 > l_4 = 8/27
        assert_eq!(n_of_lambda(&s, &ratio(3, 10), B).unwrap(), 3);
        assert_eq!(n_of_lambda(&s, &ratio(2, 5), B).unwrap(), 2);
        assert_eq!(n_of_lambda(&s, &ratio(1, 1), B).unwrap(), 0);
        assert_eq!(n_of_lambda(&dyadic(), &ratio(1, 4), B).unwrap(), 2);
        assert_eq!(n_of_lambda(&half_third_tail(), &ratio(1, 3), B).unwrap(), 2);
    }

    #[test]
    fn l_n_examples() {
        let s = kakutani(ratio(1, 3));
        assert_eq!(l_n(&s, 0, B).unwrap().points, rs(&[(0, 1)]));
        assert_eq!(l_n(&s, 1, B).unwrap().points, rs(&[(0, 1), (1, 3)]));
        assert_eq!(l_n(&half_third_tail(), 1, B).unwrap().points, rs(&[(0, 1)]));
        assert_eq!(l_n(&half_third_tail(), 2, B).unwrap().points, rs(&[(0, 1), (1, 2)]));
    }

    fn rows(slice: &PartitionSlice) -> Vec<(Rational, Rational)> {
        slice.intervals.iter().map(|i| (i.left.clone(), i.right())).collect()
    }

    #[test]
    fn partition_examples() {
        let p = partition_level(&kakutani(ratio(1, 3)), 2, &ratio(1, 100), B).unwrap();
        assert_eq!(
            rows(&p),
            vec![(ratio(0, 1), ratio(1, 3)), (ratio(1, 3), ratio(5, 9)), (ratio(5, 9), ratio(1, 1))]
        );
        assert_eq!(p.hidden_mass, 0);
        let p = partition_level(&half_sixth_third(), 1, &ratio(1, 100), B).unwrap();
        assert_eq!(
            rows(&p),
            vec![(ratio(0, 1), ratio(1, 2)), (ratio(1, 2), ratio(2, 3)), (ratio(2, 3), ratio(1, 1))]
        );
        for (_, s) in bundled() {
            let p = partition_level(&s, 0, &ratio(1, 1000), B).unwrap();
            assert_eq!(rows(&p), vec![(ratio(0, 1), ratio(1, 1))]);
        }
    }

    #[test]
    fn partition_hidden_mass_matches_tail_closed_form() {
        // P_1 of the figure-3 scheme: shown tail depths k with 3^-(k+1) >= 3^-6.
        let p = partition_level(&half_third_tail(), 1, &pow(&ratio(1, 3), 6), B).unwrap();
        assert_eq!(p.intervals.len(), 7);
        assert_eq!(p.hidden_mass, (pow(&ratio(1, 3), 6) / 2));
    }

    #[test]
    fn half_third_tail_split_endpoint_rows() {
        let s = half_third_tail();
        let expected: Vec<Vec<(i64, i64)>> = vec![
            vec![(0, 1), (1, 1)],
            vec![(0, 1), (1, 2), (1, 1)],
            vec![(0, 1), (1, 2), (5, 6), (1, 1)],
            vec![(0, 1), (1, 4), (1, 2), (5, 6), (1, 1)],
            vec![(0, 1), (1, 4), (5, 12), (1, 2), (2, 3), (5, 6), (1, 1)],
            vec![(0, 1), (1, 8), (1, 4), (5, 12), (1, 2), (2, 3), (5, 6), (1, 1)],
            vec![(0, 1), (1, 8), (1, 4), (5, 12), (1, 2), (2, 3), (7, 9), (5, 6), (17, 18), (1, 1)],
            vec![
                (0, 1),
                (1, 8),
                (5, 24),
                (1, 4),
                (1, 3),
                (5, 12),
                (1, 2),
                (7, 12),
                (2, 3),
                (7, 9),
                (5, 6),
                (17, 18),
                (1, 1),
            ],
        ];
        for (n, row) in expected.iter().enumerate() {
            assert_eq!(split_endpoints(&s, n, B).unwrap(), rs(row), "row {n}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = dyadic();
        let lam = pow(&ratio(1, 2), 10);
        assert!(matches!(enumerate_a(&s, &lam, 100), Err(EnumError::BudgetExceeded { .. })));
        assert!(matches!(point_set(&s, &lam, 100), Err(EnumError::BudgetExceeded { .. })));
        assert!(matches!(count_a(&s, &lam, 3), Err(EnumError::BudgetExceeded { .. })));
        assert!(matches!(length_ladder(&s, 10, 5), Err(EnumError::BudgetExceeded { .. })));
    }

    #[test]
    fn lattice_counts_match_memo() {
        let lat = LatticeExponents { finite: vec![1, 2, 3, 3], progressions: vec![] };
        let counts = count_a_lattice(&lat, 20);
        for (m, c) in counts.iter().enumerate() {
            let lam = pow(&ratio(1, 2), m as u32);
            assert_eq!(*c, count_a(&powers_of_half(), &lam, B).unwrap(), "m = {m}");
        }
        let tail = LatticeExponents { finite: vec![], progressions: vec![(1, 1)] };
        let counts = count_a_lattice(&tail, 20);
        for (m, c) in counts.iter().enumerate() {
            assert_eq!(*c, Integer::from(1u64 << m));
        }
    }

    #[test]
    fn serial_and_parallel_agree() {
        for (_, s) in bundled() {
            let lam = ratio(1, 300);
            assert_eq!(point_set(&s, &lam, B).unwrap(), point_set_serial(&s, &lam, B).unwrap());
        }
    }

    #[test]
    fn point_set_json_uses_rational_strings() {
        let x = point_set(&kakutani(ratio(1, 3)), &ratio(1, 3), B).unwrap();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"lambda":"1/3","points":["0/1","1/3","5/9"]}"#);
    }
}
