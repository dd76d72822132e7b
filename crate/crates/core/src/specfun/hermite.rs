use std::f64::consts::PI;

use super::check_finite;
use crate::error::Result;

/// `π^{-1/4}`, the value of `p_0`.
pub(crate) const PI_M4: f64 = 0.751_125_544_464_942_5;

/// Hermite functions `φ_0(x), …, φ_{n_max}(x)`, orthonormal on ℝ.
pub fn hermite_phi_row(n_max: usize, x: f64) -> Result<Vec<f64>> {
    check_finite(x, "x")?;
    let mut row = Vec::with_capacity(n_max + 1);
    row.push(PI_M4 * (-0.5 * x * x).exp());
    extend_hermite(&mut row, n_max, x);
    Ok(row)
}

/// `φ_n(x)` for a single degree.
pub fn hermite_phi(n: usize, x: f64) -> Result<f64> {
    Ok(hermite_phi_row(n, x)?[n])
}

/// Normalised Hermite polynomials `p_0(x), …, p_{n_max}(x)` without the
/// Gaussian factor. Only safe where `|x|` is moderate; quadrature sums use
/// these at shifted Gauss–Hermite nodes.
pub fn hermite_poly_row(n_max: usize, x: f64) -> Vec<f64> {
    let mut row = Vec::with_capacity(n_max + 1);
    row.push(PI_M4);
    extend_hermite(&mut row, n_max, x);
    row
}

fn extend_hermite(row: &mut Vec<f64>, n_max: usize, x: f64) {
    if n_max == 0 {
        return;
    }
    row.push(std::f64::consts::SQRT_2 * x * row[0]);
    for k in 1..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * row[k] - (kf / (kf + 1.0)).sqrt() * row[k - 1];
        row.push(next);
    }
}

#[allow(dead_code)]
pub(crate) fn phi0_norm() -> f64 {
    PI.powf(-0.25)
}
