use bridge_loe::kernelmat::exact::{conjugated_htilde, h_closed_form, h_laguerre_form};
use bridge_loe::kernelmat::{
    build_H, build_H_with_nodes, build_Htilde, build_L_R1_R2, build_L_quadrature, build_S_pair, loe_side_kernel,
    maxheight_cdf,
};
use bridge_loe::linalg::det_I_minus;
use nalgebra::DMatrix;

const RS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

fn max_abs(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

#[test]
fn conjugation_reproduces_h() {
    let mut worst: f64 = 0.0;
    for n in 1..=16 {
        for &r in &RS {
            let h = build_H(n, r).unwrap();
            let c = conjugated_htilde(n, r).unwrap();
            worst = worst.max(max_abs(&h.entries, &c));
        }
    }
    assert!(worst <= 1e-9, "‖S⁻¹H̃S − H‖ = {worst:e}");
}

#[test]
fn float_conjugation_is_consistent_where_well_conditioned() {
    // plain f64 products, r near 1 and moderate N: the exact route is not
    // needed here, and both agree
    for n in 1..=8 {
        let r = 1.0;
        let (s, si) = build_S_pair(n, r).unwrap();
        let ht = build_Htilde(n, r).unwrap();
        let prod = &si.entries * &ht.entries * &s.entries;
        let e = max_abs(&prod, &build_H(n, r).unwrap().entries);
        assert!(e < 1e-9, "N={n}: {e:e}");
    }
}

#[test]
fn laguerre_form_matches_quadrature() {
    let mut worst: f64 = 0.0;
    for n in 1..=20 {
        for &r in &RS {
            let h = build_H(n, r).unwrap();
            worst = worst.max(max_abs(&h.entries, &h_laguerre_form(n, r).unwrap()));
        }
    }
    assert!(worst <= 1e-9, "Laguerre form vs quadrature {worst:e}");
}

#[test]
fn closed_form_matches_quadrature() {
    let mut worst: f64 = 0.0;
    for n in [1, 5, 12, 25] {
        for &r in &[0.0, 0.25, 1.0, 2.0, 4.0] {
            let h = build_H(n, r).unwrap();
            worst = worst.max(max_abs(&h.entries, &h_closed_form(n, r).unwrap()));
        }
    }
    assert!(worst <= 1e-12, "closed form vs quadrature {worst:e}");
}

#[test]
fn htilde_squared_is_l() {
    let mut worst: f64 = 0.0;
    for n in 1..=16 {
        for &r in &RS {
            let (l, _) = build_L_R1_R2(n, r).unwrap();
            let q = build_L_quadrature(n, r).unwrap();
            worst = worst.max(max_abs(&l.entries, &q.entries));
        }
    }
    assert!(worst <= 1e-8, "H̃² vs ∫ψψ {worst:e}");
}

#[test]
fn determinant_identity() {
    let mut worst: f64 = 0.0;
    for n in 1..=16 {
        for &r in &RS {
            let a = det_I_minus(&build_H(n, r).unwrap().entries).unwrap();
            let (l, ev) = build_L_R1_R2(n, r).unwrap();
            let b = det_I_minus(&loe_side_kernel(&l, &ev)).unwrap();
            worst = worst.max((a * a - b).abs() / b.abs().max(1.0));
        }
    }
    assert!(worst <= 1e-9, "det identity {worst:e}");
}

#[test]
fn node_count_independence() {
    for n in 1..=40 {
        for &r in &[0.0, 0.7, 3.0] {
            let a = build_H_with_nodes(n, r, n).unwrap();
            let b = build_H_with_nodes(n, r, 2 * n).unwrap();
            let e = max_abs(&a.entries, &b.entries);
            assert!(e <= 1e-12, "N={n} r={r}: {e:e}");
        }
    }
}

#[test]
fn half_order_rule_is_not_exact() {
    // ⌈N/2⌉+1 nodes integrate degree ≤ N+1 only; the corner entries have
    // degree 2N−2, so for N ≥ 4 that order is visibly wrong
    let n = 8;
    let a = build_H_with_nodes(n, 1.0, n.div_ceil(2) + 1).unwrap();
    let b = build_H_with_nodes(n, 1.0, 2 * n).unwrap();
    assert!(max_abs(&a.entries, &b.entries) > 1e-6);
}

#[test]
fn h_and_l_symmetric() {
    for n in [1, 4, 9, 16] {
        for &r in &RS {
            let h = build_H(n, r).unwrap().entries;
            assert!(max_abs(&h, &h.transpose()) <= 1e-12);
            let (l, _) = build_L_R1_R2(n, r).unwrap();
            assert!(max_abs(&l.entries, &l.entries.transpose()) <= 1e-12);
        }
    }
}

#[test]
fn limits_of_the_maxheight_law() {
    for n in 1..=12 {
        let lo = maxheight_cdf(n, 1e-6).unwrap();
        let hi = maxheight_cdf(n, (n as f64).sqrt() + 5.0).unwrap();
        assert!(lo.abs() < 1e-11, "N={n}: F(1e-6) = {lo:e}");
        assert!((hi - 1.0).abs() < 1e-12, "N={n}: F(√N+5) = {hi}");
    }
}

#[test]
fn maxheight_monotone_on_fine_grid() {
    for n in [2, 3, 6, 10] {
        let mut prev = 0.0;
        for i in 1..=400 {
            let m = 0.01 * i as f64;
            let v = maxheight_cdf(n, m).unwrap();
            assert!(v >= prev, "N={n} m={m}: {v} < {prev}");
            prev = v;
        }
    }
}

mod invariants {
    use super::*;
    use bridge_loe::kernelmat::loe_cdf;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn determinant_identity_at_random_radii(n in 1usize..=12, r in 0.25f64..4.0) {
            let lhs = det_I_minus(&build_H(n, r).unwrap().entries).unwrap().powi(2);
            let (l, ev) = build_L_R1_R2(n, r).unwrap();
            let rhs = det_I_minus(&loe_side_kernel(&l, &ev)).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0), "N={} r={}: {} vs {}", n, r, lhs, rhs);
        }

        #[test]
        fn htilde_vanishes_above_the_anti_diagonal(n in 1usize..=16, r in 0.1f64..5.0) {
            let h = build_Htilde(n, r).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if i + j + 1 < n {
                        prop_assert_eq!(h.get(i, j), 0.0);
                    }
                    // depends on i + j only
                    if i + 1 < n && j > 0 {
                        prop_assert_eq!(h.get(i, j), h.get(i + 1, j - 1));
                    }
                }
            }
        }

        #[test]
        fn maxheight_law_is_a_distribution(n in 1usize..=10, a in 0.05f64..4.0, b in 0.05f64..4.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (p, q) = (maxheight_cdf(n, lo).unwrap(), maxheight_cdf(n, hi).unwrap());
            prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
            prop_assert!(p <= q + 1e-12);
        }

        #[test]
        fn maxheight_law_equals_loe_law_at_four_m_squared(n in 1usize..=8, m in 0.1f64..3.0) {
            // P(max B_N ≤ m) = P(λ_LOE ≤ 4m²)
            let p = maxheight_cdf(n, m).unwrap();
            let q = loe_cdf(n, 4.0 * m * m).unwrap();
            prop_assert!((p - q).abs() <= 1e-9, "{} vs {}", p, q);
        }
    }
}
