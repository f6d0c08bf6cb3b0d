mod support;

use kakutani::discrepancy::{discrepancies, discrepancy_curve, extreme_discrepancy};
use kakutani::enumerate::{point_set, Ladder};
use kakutani::rational::{pow, ratio};
use kakutani::scheme::catalog::{bundled, dyadic, half_third_tail, kakutani};
use proptest::prelude::*;
use rug::Rational;
use support::discrepancy_oracle;

fn point_set_strategy() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((0i64..1000, 1i64..1000), 1..=64)
        .prop_map(|v| v.into_iter().map(|(p, q)| ratio(p % q, q)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fast_formula_matches_oracle(points in point_set_strategy()) {
        prop_assert_eq!(discrepancies(&points).unwrap(), discrepancy_oracle(&points));
    }

    #[test]
    fn order_does_not_matter(mut points in point_set_strategy(), seed in any::<u64>()) {
        let before = discrepancies(&points).unwrap();
        let k = points.len();
        points.rotate_left((seed as usize) % k);
        points.reverse();
        prop_assert_eq!(discrepancies(&points).unwrap(), before);
    }

    #[test]
    fn value_bounds(points in point_set_strategy()) {
        let (e, s) = discrepancies(&points).unwrap();
        let mut pts = points.clone();
        pts.sort();
        pts.dedup();
        prop_assert!(s <= e && e <= 1);
        prop_assert!(e >= Rational::from((1, 2 * pts.len() as u64)));
    }
}

#[test]
fn bundled_point_sets_match_oracle() {
    for (name, s) in bundled() {
        let mut ladder = Ladder::new(&s, 1 << 24);
        loop {
            let l = ladder.next_value().unwrap();
            let ps = point_set(&s, &l, 1 << 24).unwrap();
            if ps.len() > 4096 {
                break;
            }
            assert_eq!(discrepancies(&ps.points).unwrap(), discrepancy_oracle(&ps.points), "{name} at {l}");
        }
    }
}

#[test]
fn single_point() {
    assert_eq!(discrepancies(&[Rational::new()]).unwrap(), (ratio(1, 1), ratio(1, 1)));
}

#[test]
fn dyadic_is_exact() {
    for n in 1..=12 {
        let d = extreme_discrepancy(&point_set(&dyadic(), &pow(&ratio(1, 2), n), 1 << 20).unwrap()).unwrap();
        assert_eq!(d.extreme, pow(&ratio(1, 2), n));
    }
}

#[test]
fn curves_trend_to_zero() {
    let third = kakutani(ratio(1, 3));
    let ladder: Vec<Rational> = {
        let mut l = Ladder::new(&third, 1 << 20);
        (0..40).map(|_| l.next_value().unwrap()).collect()
    };
    let c = discrepancy_curve(&third, &ladder, 1 << 20).unwrap();
    assert!(c.iter().all(|d| d.extreme > 0));
    let head = c[..5].iter().map(|d| d.extreme.clone()).max().unwrap();
    let tail = c[c.len() - 5..].iter().map(|d| d.extreme.clone()).max().unwrap();
    assert!(tail < head);
    let grid: Vec<Rational> = (1..=9).map(|n| pow(&ratio(1, 3), n)).collect();
    let c = discrepancy_curve(&half_third_tail(), &grid, 1 << 20).unwrap();
    assert!(c.last().unwrap().extreme < c[0].extreme);
    assert!(c.last().unwrap().extreme_f64() < 0.05);
}

#[test]
fn windowed_maxima_do_not_grow_along_the_ladder() {
    for (name, s) in bundled() {
        let mut l = Ladder::new(&s, 1 << 22);
        let mut c = Vec::new();
        loop {
            let d = extreme_discrepancy(&point_set(&s, &l.next_value().unwrap(), 1 << 22).unwrap()).unwrap();
            if d.n_points > 20_000 {
                break;
            }
            c.push(d);
        }
        assert!(c.len() >= 10, "{name}");
        let head = c[..5].iter().map(|d| d.extreme.clone()).max().unwrap();
        let tail = c[c.len() - 5..].iter().map(|d| d.extreme.clone()).max().unwrap();
        assert!(tail <= head, "{name}");
    }
}
