use bridge_loe::fredholm::{
    fgoe, fgoe_certified, finite_n_scaled_cdf, tw_limit_compare, FgoeConfig, DEFAULT_ORDER, DEFAULT_TRUNCATION,
    DOUBLING_TOL, FGOE_AT_ZERO,
};
use bridge_loe::Execution;

fn f(r: f64) -> f64 {
    fgoe(r, DEFAULT_ORDER, DEFAULT_TRUNCATION).unwrap()
}

#[test]
fn value_at_zero() {
    assert!((f(0.0) - FGOE_AT_ZERO).abs() < 1e-10, "{}", f(0.0));
}

#[test]
fn tails() {
    assert!(f(-10.0) < 1e-5);
    assert!(f(-10.0) >= 0.0);
    // 1 − F(5) is dominated by the trace ½∫_5^∞ Ai = 2.2871513708e-5
    // (independent 30-digit quadrature); the squared trace is ~5e-10
    assert!((f(5.0) - (1.0 - 2.287_151_370_8e-5)).abs() < 1e-9, "{}", f(5.0));
    assert!(f(9.0) > 1.0 - 1e-6);
}

#[test]
fn doubling_certificate_is_reported() {
    for r in [-6.0, -2.0, 0.0, 1.5, 4.0] {
        let e = fgoe_certified(r, DEFAULT_ORDER, DEFAULT_TRUNCATION).unwrap();
        assert!(e.doubling_change < DOUBLING_TOL, "r={r}: {e:?}");
        assert!(e.m >= DEFAULT_ORDER);
    }
}

#[test]
fn monotone_on_hundred_points() {
    let vals: Vec<f64> = (0..100).map(|i| f(-8.0 + 14.0 * i as f64 / 99.0)).collect();
    for w in vals.windows(2) {
        assert!(w[1] >= w[0] - 1e-12, "{w:?}");
    }
    assert!(vals.iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)));
}

#[test]
fn larger_n_is_closer_at_zero() {
    let lim = FGOE_AT_ZERO;
    let g16 = finite_n_scaled_cdf(16, 0.0).unwrap();
    let g64 = finite_n_scaled_cdf(64, 0.0).unwrap();
    assert!((g64 - lim).abs() < (g16 - lim).abs(), "G16={g16} G64={g64}");
}

#[test]
fn sup_error_decreases_and_scalings_agree() {
    let grid: Vec<f64> = (0..=30).map(|i| -4.0 + 0.2 * i as f64).collect();
    let c = tw_limit_compare(&[8, 16, 32], &grid, FgoeConfig::default(), Execution::Parallel).unwrap();
    let e = &c.sup_err_bridge;
    assert!(e[0] > e[1] && e[1] > e[2], "{e:?}");
    assert!(e[2] <= 0.1);
    assert!(c.matched_err.iter().all(|&m| m <= 1e-9), "{:?}", c.matched_err);
    // the LOE soft-edge law converges too, more slowly
    assert!(c.sup_err_loe[2] < c.sup_err_loe[0]);
}

#[test]
fn rejects_bad_input() {
    assert!(tw_limit_compare(&[], &[0.0], FgoeConfig::default(), Execution::Sequential).is_err());
    assert!(tw_limit_compare(&[2], &[0.0], FgoeConfig::default(), Execution::Sequential).is_err());
    assert!(tw_limit_compare(&[8], &[-9.0], FgoeConfig::default(), Execution::Sequential).is_err());
    assert!(finite_n_scaled_cdf(4, -100.0).is_err());
}
