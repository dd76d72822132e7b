use super::check_finite;
use crate::error::{arg_err, Result};

fn check_nonneg(x: f64, what: &str) -> Result<()> {
    check_finite(x, what)?;
    if x < 0.0 {
        return arg_err(format!("{what} must be non-negative, got {x}"));
    }
    Ok(())
}

/// Laguerre polynomials `L_0(x), …, L_{n_max}(x)` (no exponential factor).
///
/// Only meant for small `x`, where the polynomials themselves are moderate.
pub fn laguerre_poly_row(n_max: usize, x: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n_max + 1);
    row.push(1.0);
    extend_laguerre(&mut row, n_max, x);
    row
}

/// Laguerre functions `ψ_n(x) = e^{-x/2} L_n(x)` for `n = 0..=n_max`.
pub fn laguerre_psi_row(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_nonneg(x, "x")?;
    let mut row = Vec::with_capacity(n_max + 1);
    row.push((-0.5 * x).exp());
    extend_laguerre(&mut row, n_max, x);
    Ok(row)
}

// (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}; linear, so the weight carried by
// row[0] propagates unchanged.
fn extend_laguerre(row: &mut Vec<f64>, n_max: usize, x: f64) {
    if n_max == 0 {
        return;
    }
    row.push((1.0 - x) * row[0]);
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * row[k] - kf * row[k - 1]) / (kf + 1.0);
        row.push(next);
    }
}

/// Antiderivatives `Ψ_n(s) = ∫_0^s ψ_n(x) dx` for `n = 0..=n_max`.
///
/// Uses `Ψ_{n+1} = 2(ψ_n − ψ_{n+1}) − Ψ_n`, which follows from
/// `L'_{n+1} − L'_n = −L_n` and `L_n(0) = 1`.
pub fn laguerre_psi_integral_row(n_max: usize, s: f64) -> Result<Vec<f64>> {
    check_nonneg(s, "s")?;
    let psi = laguerre_psi_row(n_max + 1, s)?;
    let mut out = Vec::with_capacity(n_max + 1);
    // 1 - e^{-s/2} without cancellation for small s
    out.push(-2.0 * (-0.5 * s).exp_m1());
    for n in 0..n_max {
        out.push(2.0 * (psi[n] - psi[n + 1]) - out[n]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate_adaptive, quadrature_rule, QuadratureKind};

    #[test]
    fn psi0_and_psi1_at_two() {
        let e = (-1.0f64).exp();
        let row = laguerre_psi_row(1, 2.0).unwrap();
        assert!((row[0] - e).abs() < 1e-16);
        assert!((row[1] + e).abs() < 1e-16);
        assert!((row[0] - 0.367_879_44).abs() < 1e-8);
    }

    #[test]
    fn negative_argument_rejected() {
        assert!(laguerre_psi_row(2, -0.1).is_err());
        assert!(laguerre_psi_integral_row(2, -1e-12).is_err());
        assert!(laguerre_psi_row(2, f64::NAN).is_err());
    }

    #[test]
    fn integral_base_cases() {
        let r = 1.0;
        let row = laguerre_psi_integral_row(0, 2.0 * r * r).unwrap();
        assert!((row[0] - 2.0 * (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((row[0] - 1.264_241_12).abs() < 1e-8);
        assert_eq!(laguerre_psi_integral_row(0, 0.0).unwrap(), vec![0.0]);
        // every Ψ_n vanishes at 0
        assert!(laguerre_psi_integral_row(12, 0.0).unwrap().iter().all(|&v| v == 0.0));
    }

    fn mapped_legendre(a: f64, b: f64, m: usize) -> (Vec<f64>, Vec<f64>) {
        let rule = quadrature_rule(QuadratureKind::GaussLegendre, m).unwrap();
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        (rule.nodes.iter().map(|t| c + h * t).collect(), rule.weights.iter().map(|w| h * w).collect())
    }

    fn psi_gram_error(n_max: usize) -> f64 {
        // Split [0, 250] into panels: ψ_n² is smooth but oscillatory near the
        // origin and decays slowly, so one panel would need a huge order.
        let mut acc = vec![vec![0.0; n_max + 1]; n_max + 1];
        let edges = [0.0, 10.0, 25.0, 50.0, 100.0, 175.0, 250.0];
        for w in edges.windows(2) {
            let (xs, ws) = mapped_legendre(w[0], w[1], 96);
            for (x, wt) in xs.iter().zip(&ws) {
                let row = laguerre_psi_row(n_max, *x).unwrap();
                for n in 0..=n_max {
                    for m in 0..=n_max {
                        acc[n][m] += wt * row[n] * row[m];
                    }
                }
            }
        }
        let mut worst: f64 = 0.0;
        for (n, accn) in acc.iter().enumerate() {
            for (m, v) in accn.iter().enumerate() {
                worst = worst.max((v - if n == m { 1.0 } else { 0.0 }).abs());
            }
        }
        worst
    }

    #[test]
    fn orthonormal_on_truncated_half_line() {
        let e20 = psi_gram_error(20);
        assert!(e20 < 1e-8, "n ≤ 20 gram defect {e20}");
        let e30 = psi_gram_error(30);
        assert!(e30 < 1e-8, "n ≤ 30 gram defect {e30}");
    }

    #[test]
    fn row_at_5_is_finite_and_bounded() {
        // |ψ_n| ≤ 1 on [0,∞)
        let row = laguerre_psi_row(20, 5.0).unwrap();
        assert!(row.iter().all(|v| v.abs() <= 1.0));
    }

    #[test]
    fn integral_row_matches_adaptive_quadrature() {
        let row = laguerre_psi_integral_row(10, 3.7).unwrap();
        for (n, v) in row.iter().enumerate() {
            let q = integrate_adaptive(|x| laguerre_psi_row(n, x).unwrap()[n], 0.0, 3.7, 1e-14).unwrap();
            assert!((v - q).abs() < 1e-10, "n={n}: {v} vs {q}");
        }
    }

    #[test]
    fn integral_recurrence_over_grid() {
        let mut worst: f64 = 0.0;
        for i in 1..=200 {
            let s = 0.1 * i as f64;
            let row = laguerre_psi_integral_row(20, s).unwrap();
            for (n, v) in row.iter().enumerate() {
                let q = integrate_adaptive(|x| laguerre_psi_row(n, x).unwrap()[n], 0.0, s, 1e-13).unwrap();
                worst = worst.max((v - q).abs());
            }
        }
        assert!(worst < 1e-9, "Ψ recurrence vs quadrature {worst}");
    }

    #[test]
    fn explicit_polynomial_small_degree() {
        // L_2 = 1 - 2x + x²/2, L_3 = 1 - 3x + 3x²/2 - x³/6
        for &x in &[0.0, 0.3, 1.0, 4.5, 11.0] {
            let l = laguerre_poly_row(3, x);
            assert!((l[2] - (1.0 - 2.0 * x + 0.5 * x * x)).abs() < 1e-12);
            assert!((l[3] - (1.0 - 3.0 * x + 1.5 * x * x - x * x * x / 6.0)).abs() < 1e-11);
        }
    }
}
