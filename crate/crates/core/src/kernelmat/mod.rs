//! The finite matrices behind the exact distribution functions and the
//! determinant formulas built from them.
//!
//! `H` is the Hermite-basis matrix of `K ϱ_r K` (with `ϱ_r f(x) = f(2r−x)`),
//! `H̃` its Laguerre-basis conjugate, and `L`, `R₁`, `R₂` the pieces of the
//! LOE-side determinant. For every `N ≥ 1` and `r > 0`,
//!
//! ```text
//! det(I − H)² = det(I − L − R₁ ⊗ R₂),
//! ```
//!
//! and `det(I − H)` at `r = √2·m` is the probability that the top of `N`
//! non-intersecting Brownian bridges stays below `m`.

mod distribution;
pub mod exact;
mod matrices;

pub use distribution::{cdf_table, loe_cdf, loe_cdf_routes, maxheight_cdf, CdfKind, DistributionTable, LoeRoutes};
pub use matrices::{
    build_H, build_H_with_nodes, build_Htilde, build_L_R1_R2, build_L_quadrature, build_Q_u_v, build_S_pair,
    default_h_nodes, EdgeVectors, KernelMatrix, MatrixSymbol,
};

use nalgebra::DMatrix;

use crate::error::Result;

/// `det(I − M)` for a kernel matrix.
#[allow(non_snake_case)]
pub fn det_I_minus(m: &KernelMatrix) -> Result<f64> {
    crate::linalg::det_I_minus(&m.entries)
}

/// `L + R₁ R₂ᵀ`; its `det(I − ·)` is the squared LOE distribution function.
pub fn loe_side_kernel(l: &KernelMatrix, ev: &EdgeVectors) -> DMatrix<f64> {
    &l.entries + &ev.r1 * ev.r2.transpose()
}
