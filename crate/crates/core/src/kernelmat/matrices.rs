use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::exact::ln_factorial;
use crate::error::{arg_err, Result};
use crate::specfun::{
    hermite_phi_row, laguerre_psi_integral_row, laguerre_psi_row, quadrature_rule, row_at, QuadratureKind,
    MAX_QUADRATURE_ORDER,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatrixSymbol {
    H,
    Htilde,
    S,
    Sinv,
    L,
    Q,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    pub symbol: MatrixSymbol,
    pub n: usize,
    pub r: f64,
    pub entries: DMatrix<f64>,
}

impl KernelMatrix {
    fn new(symbol: MatrixSymbol, r: f64, entries: DMatrix<f64>) -> Self {
        Self { symbol, n: entries.nrows(), r, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }
}

/// Vectors attached to the rank-one parts of the determinant formulas.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVectors {
    pub n: usize,
    pub r: f64,
    /// `ψ_j(2r²)`
    pub r1: DVector<f64>,
    /// `Ψ_j(2r²) = ∫_0^{2r²} ψ_j`
    pub r2: DVector<f64>,
    /// `(−1)^{N−1}` in every slot
    pub u: DVector<f64>,
    /// `2(−1)^i`
    pub v: DVector<f64>,
}

impl EdgeVectors {
    fn build(n: usize, r: f64) -> Result<Self> {
        let x = 2.0 * r * r;
        let psi = laguerre_psi_row(n - 1, x)?;
        let big_psi = laguerre_psi_integral_row(n - 1, x)?;
        let su = if n % 2 == 1 { 1.0 } else { -1.0 };
        Ok(Self {
            n,
            r,
            r1: DVector::from_vec(psi),
            r2: DVector::from_vec(big_psi),
            u: DVector::from_element(n, su),
            v: DVector::from_fn(n, |i, _| if i % 2 == 0 { 2.0 } else { -2.0 }),
        })
    }
}

pub(crate) fn check_dims(n: usize, r: f64) -> Result<()> {
    if n == 0 {
        return arg_err("matrix dimension N must be at least 1");
    }
    if !r.is_finite() || r < 0.0 {
        return arg_err(format!("r must be finite and non-negative, got {r}"));
    }
    Ok(())
}

/// Default Gauss–Hermite order for an `N×N` matrix `H`.
///
/// Entry `(j,k)` is a degree-`j+k` polynomial against `e^{−u²}`, so `N`
/// nodes are exact for the whole matrix; one more costs nothing.
pub fn default_h_nodes(n: usize) -> usize {
    (n + 1).min(MAX_QUADRATURE_ORDER)
}

/// `H_{jk} = ∫ φ_j(x) φ_k(2r − x) dx`.
#[allow(non_snake_case)]
pub fn build_H(n: usize, r: f64) -> Result<KernelMatrix> {
    build_H_with_nodes(n, r, default_h_nodes(n))
}

/// `H` by shifted Gauss–Hermite quadrature with an explicit node count.
///
/// With `x = u + r` the integrand is `e^{−r²} e^{−u²} p_j(u+r) p_k(r−u)`;
/// evaluating the Hermite *functions* at the shifted nodes and using the
/// scaled weights `w e^{u²}` gives the same sum without overflow.
#[allow(non_snake_case)]
pub fn build_H_with_nodes(n: usize, r: f64, nodes: usize) -> Result<KernelMatrix> {
    check_dims(n, r)?;
    let rule = quadrature_rule(QuadratureKind::GaussHermite, nodes)?;
    let m = rule.order();
    let mut plus = DMatrix::<f64>::zeros(n, m);
    let mut minus = DMatrix::<f64>::zeros(n, m);
    for (i, (&u, &w)) in rule.nodes.iter().zip(rule.scaled_weights()).enumerate() {
        let a = hermite_phi_row(n - 1, u + r)?;
        let b = hermite_phi_row(n - 1, r - u)?;
        for j in 0..n {
            plus[(j, i)] = w * a[j];
            minus[(j, i)] = b[j];
        }
    }
    let mut h = &plus * minus.transpose();
    // exact symmetry: the quadrature is symmetric only up to rounding
    for j in 0..n {
        for k in j + 1..n {
            let s = 0.5 * (h[(j, k)] + h[(k, j)]);
            h[(j, k)] = s;
            h[(k, j)] = s;
        }
    }
    Ok(KernelMatrix::new(MatrixSymbol::H, r, h))
}

/// `H̃_{ij} = (−1)^N (ψ_{i+j−N} − ψ_{i+j−N+1})(2r²)`, zero above the
/// anti-diagonal.
#[allow(non_snake_case)]
pub fn build_Htilde(n: usize, r: f64) -> Result<KernelMatrix> {
    check_dims(n, r)?;
    let psi = laguerre_psi_row(n, 2.0 * r * r)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let ni = n as i64;
    let band: Vec<f64> = (0..2 * ni - 1)
        .map(|s| {
            if s < ni - 1 {
                0.0
            } else {
                sign * (row_at(&psi, s - ni) - row_at(&psi, s - ni + 1))
            }
        })
        .collect();
    let m = DMatrix::from_fn(n, n, |i, j| band[i + j]);
    Ok(KernelMatrix::new(MatrixSymbol::Htilde, r, m))
}

/// `c_k = r^{N−1−k} (2^{N−1−k} k! / (N−1)!)^{1/2}`, evaluated in log space.
pub(crate) fn c_coefficients(n: usize, r: f64) -> Vec<f64> {
    let lnr = r.ln();
    let lf_top = ln_factorial(n - 1);
    (0..n)
        .map(|k| {
            let p = (n - 1 - k) as f64;
            (p * lnr + 0.5 * (p * std::f64::consts::LN_2 + ln_factorial(k) - lf_top)).exp()
        })
        .collect()
}

/// The upper-triangular conjugating matrix `S` and its closed-form inverse.
#[allow(non_snake_case)]
pub fn build_S_pair(n: usize, r: f64) -> Result<(KernelMatrix, KernelMatrix)> {
    check_dims(n, r)?;
    if r == 0.0 {
        return arg_err("S is singular at r = 0");
    }
    let c = c_coefficients(n, r);
    let ni = n as i64;
    let entry = |i: usize, j: usize| -> f64 {
        if j < i {
            return 0.0;
        }
        let b = super::exact::binom(ni - 1 - i as i64, (j - i) as i64);
        let b = num_traits::ToPrimitive::to_f64(&b).expect("binomial fits f64");
        if (n - 1 + j) % 2 == 0 {
            b
        } else {
            -b
        }
    };
    let s = DMatrix::from_fn(n, n, |i, j| c[j] * entry(i, j));
    let sinv = DMatrix::from_fn(n, n, |i, j| entry(i, j) / c[i]);
    Ok((KernelMatrix::new(MatrixSymbol::S, r, s), KernelMatrix::new(MatrixSymbol::Sinv, r, sinv)))
}

/// `L = H̃²` together with `R₁ = ψ(2r²)` and `R₂ = Ψ(2r²)`.
#[allow(non_snake_case)]
pub fn build_L_R1_R2(n: usize, r: f64) -> Result<(KernelMatrix, EdgeVectors)> {
    let ht = build_Htilde(n, r)?;
    let l = &ht.entries * &ht.entries;
    Ok((KernelMatrix::new(MatrixSymbol::L, r, l), EdgeVectors::build(n, r)?))
}

/// `L_{jk} = ∫_{2r²}^∞ ψ_j ψ_k` by composite Gauss–Legendre in `t = x − 2r²`
/// on `[0, 250]`. Independent of `H̃`; used to verify `H̃² = L`.
#[allow(non_snake_case)]
pub fn build_L_quadrature(n: usize, r: f64) -> Result<KernelMatrix> {
    check_dims(n, r)?;
    let x0 = 2.0 * r * r;
    let rule = quadrature_rule(QuadratureKind::GaussLegendre, 96)?;
    let edges = [0.0, 5.0, 12.0, 25.0, 50.0, 100.0, 175.0, 250.0];
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for w in edges.windows(2) {
        let (ts, ws) = rule.mapped(w[0], w[1]);
        for (t, wt) in ts.iter().zip(&ws) {
            let row = laguerre_psi_row(n - 1, x0 + t)?;
            let v = DVector::from_vec(row);
            acc += *wt * &v * v.transpose();
        }
    }
    Ok(KernelMatrix::new(MatrixSymbol::L, r, acc))
}

/// `Q` (zero above the diagonal, `−2r` on it, `−4r` below) with `u`, `v`.
#[allow(non_snake_case)]
pub fn build_Q_u_v(n: usize, r: f64) -> Result<(KernelMatrix, EdgeVectors)> {
    if n == 0 {
        return arg_err("matrix dimension N must be at least 1");
    }
    let q = DMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Equal => -2.0 * r,
        std::cmp::Ordering::Greater => -4.0 * r,
    });
    // the edge vectors only depend on r through 2r², so r < 0 is harmless
    Ok((KernelMatrix::new(MatrixSymbol::Q, r, q), EdgeVectors::build(n, r.abs())?))
}
