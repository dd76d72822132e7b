//! Small dense linear algebra: determinants of `I − M` and eigenvalues of
//! real symmetric matrices by cyclic Jacobi rotation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Pivots smaller than this in magnitude are treated as a breakdown.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Maximum number of full Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 30;

/// `(sign, ln|det(I − M)|)` from an LU factorisation with partial pivoting.
///
/// The log form never underflows, which matters deep in the left tail of
/// the distribution functions where the determinant is far below 1e-300
/// long before any single pivot is.
pub fn log_det_i_minus(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    if !m.is_square() {
        return Err(Error::Argument(format!("matrix is {}×{}, not square", m.nrows(), m.ncols())));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Argument("matrix has non-finite entries".into()));
    }
    let n = m.nrows();
    let a = DMatrix::<f64>::identity(n, n) - m;
    let lu = a.lu();
    let u = lu.u();
    let mut sign = if lu.p().determinant::<f64>() < 0.0 { -1.0 } else { 1.0 };
    let mut log_abs = 0.0;
    for i in 0..n {
        let d = u[(i, i)];
        if d.abs() < PIVOT_FLOOR {
            return Err(Error::Numeric(format!("LU pivot {i} is {d:e}; I − M is numerically singular")));
        }
        if d < 0.0 {
            sign = -sign;
        }
        log_abs += d.abs().ln();
    }
    Ok((sign, log_abs))
}

/// Signed `det(I − M)`.
#[allow(non_snake_case)]
pub fn det_I_minus(m: &DMatrix<f64>) -> Result<f64> {
    let (sign, log_abs) = log_det_i_minus(m)?;
    Ok(sign * log_abs.exp())
}

/// Eigenvalues of a real symmetric `n×n` matrix stored row-major in `a`
/// (overwritten). Returned in ascending order.
///
/// Cyclic Jacobi: sweep over all `(p,q)` pairs, annihilating each
/// off-diagonal entry in turn, until the off-diagonal Frobenius norm is below
/// `1e-11 · ‖A‖_F`.
pub fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n, "buffer does not hold an n×n matrix");
    let total: f64 = a.iter().map(|v| v * v).sum::<f64>();
    if !total.is_finite() {
        return Err(Error::Argument("matrix has non-finite entries".into()));
    }
    let target = (1e-11 * 1e-11) * total;
    for _sweep in 0..=MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        // the strict upper triangle is half of the off-diagonal mass
        if 2.0 * off <= target {
            let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            ev.sort_by(f64::total_cmp);
            return Ok(ev);
        }
        if _sweep == MAX_SWEEPS {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let nkp = c * akp - s * akq;
                    let nkq = s * akp + c * akq;
                    a[k * n + p] = nkp;
                    a[p * n + k] = nkp;
                    a[k * n + q] = nkq;
                    a[q * n + k] = nkq;
                }
            }
        }
    }
    Err(Error::Convergence(format!("Jacobi iteration did not converge in {MAX_SWEEPS} sweeps (n = {n})")))
}

/// Largest eigenvalue of a symmetric matrix (row-major, overwritten).
pub fn jacobi_max_eigenvalue(a: &mut [f64], n: usize) -> Result<f64> {
    Ok(*jacobi_eigenvalues(a, n)?.last().expect("n ≥ 1"))
}

/// Real symmetric `2n×2n` embedding `[[X, −Y], [Y, X]]` of the Hermitian
/// matrix `X + iY` (row-major inputs). Every eigenvalue of `X + iY` appears
/// twice in the embedding.
pub fn hermitian_embedding(re: &[f64], im: &[f64], n: usize, out: &mut [f64]) {
    let m = 2 * n;
    debug_assert_eq!(out.len(), m * m);
    for i in 0..n {
        for j in 0..n {
            let x = re[i * n + j];
            let y = im[i * n + j];
            out[i * m + j] = x;
            out[(i + n) * m + j + n] = x;
            out[i * m + j + n] = -y;
            out[(i + n) * m + j] = y;
        }
    }
}

/// Frobenius norm of a row-major buffer.
pub fn frobenius(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}
