use kakutani::enumerate::count_a;
use kakutani::rational::{pow, ratio};
use kakutani::real::Real;
use kakutani::renewal::{error_log_slope, predicted_limit, rank_report, renewal_curve, LimitMode};
use kakutani::scheme::catalog::{binary_tail, dyadic, half_third_sixth, powers_of_half, rank_three};
use rug::Rational;

const BUDGET: usize = 1 << 24;

fn scaled(s: &kakutani::scheme::Scheme, l: &Rational) -> f64 {
    Rational::from(l * count_a(s, l, BUDGET).unwrap()).to_f64()
}

#[test]
fn lattice_limits_along_powers_of_the_base() {
    for s in [dyadic(), powers_of_half(), binary_tail()] {
        let limit = predicted_limit(&s, 128);
        let LimitMode::Lattice { base, .. } = &limit.mode else { panic!() };
        let c = limit.constant.to_f64();
        let errs: Vec<f64> = (10..=40).map(|k| (scaled(&s, &pow(base, k)) - c).abs() / c).collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        assert!(*errs.last().unwrap() < 1e-6);
        assert!(limit.note.is_some());
    }
    assert!((scaled(&dyadic(), &pow(&ratio(1, 2), 20)) - 2.0).abs() < 0.02);
    for n in 0..=30 {
        let l = pow(&ratio(1, 2), n);
        assert_eq!(Rational::from(&l * count_a(&binary_tail(), &l, BUDGET).unwrap()), 1);
    }
}

#[test]
fn non_lattice_limit_is_inverse_entropy() {
    let s = half_third_sixth();
    let limit = predicted_limit(&s, 128);
    assert_eq!(limit.mode, LimitMode::NonLattice);
    let c = limit.constant.to_f64();
    assert!((c - 0.988_724_326_062_979_8).abs() < 1e-15);
    assert!((scaled(&s, &pow(&ratio(1, 10), 6)) - c).abs() / c < 0.02);
    // the average over a log-spaced window is much closer than single samples
    let grid: Vec<Rational> = (200..=260).map(|k| pow(&ratio(9, 10), k)).collect();
    let mean = grid.iter().map(|l| scaled(&s, l)).sum::<f64>() / grid.len() as f64;
    assert!((mean - c).abs() / c < 0.01);
}

#[test]
fn higher_rank_error_decays_slower_than_any_power() {
    let s = half_third_sixth();
    let c = predicted_limit(&s, 128).constant;
    let grid: Vec<Rational> = (4..=437).map(|k| pow(&ratio(9, 10), k)).collect();
    let fit = error_log_slope(&renewal_curve(&s, &grid, &c, BUDGET).unwrap()).unwrap();
    assert!(fit.slope.abs() < 0.05, "slope {}", fit.slope);
    let d = dyadic();
    let grid: Vec<Rational> = (4..=60).map(|k| pow(&ratio(1, 2), k)).collect();
    let c = Real::from_int(2, 128);
    let fit = error_log_slope(&renewal_curve(&d, &grid, &c, BUDGET).unwrap()).unwrap();
    assert!(fit.slope > 0.5);
}

#[test]
fn rank_three_scheme_is_not_lattice() {
    let s = rank_three();
    assert!(!rank_report(&s).is_rank_one());
    assert_eq!(predicted_limit(&s, 128).mode, LimitMode::NonLattice);
}
