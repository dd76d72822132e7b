//! Scalar special functions and quadrature rules.
//!
//! Hermite functions `φ_n(x) = e^{-x²/2} p_n(x)` and Laguerre functions
//! `ψ_n(x) = e^{-x/2} L_n(x)` are both orthonormal, with positive leading
//! coefficients for `p_n` and the usual `L_n(0) = 1` normalisation. Rows are
//! produced by three-term recurrences that carry the exponential weight from
//! the first term, so nothing overflows for the degrees used here.

mod airy;
mod hermite;
mod laguerre;
mod quadrature;

pub use airy::{airy_ai, airy_ai_asymptotic, airy_ai_maclaurin, AIRY_DOMAIN, AIRY_SWITCH};
#[allow(unused_imports)]
pub(crate) use airy::ai_unchecked;
pub use hermite::{hermite_phi, hermite_phi_row, hermite_poly_row};
pub use laguerre::{laguerre_poly_row, laguerre_psi_integral_row, laguerre_psi_row};
pub use quadrature::{
    integrate_adaptive, integrate_panels, quadrature_rule, QuadratureKind, QuadratureRule,
    MAX_QUADRATURE_ORDER,
};

use crate::error::{arg_err, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthoFamily {
    HermitePhi,
    LaguerrePsi,
    LaguerrePsiIntegral,
}

/// One member of an orthonormal function family. Negative degrees are
/// permitted and evaluate to zero everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrthoFunctionId {
    pub family: OrthoFamily,
    pub degree: i64,
}

impl OrthoFunctionId {
    pub fn new(family: OrthoFamily, degree: i64) -> Self {
        Self { family, degree }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if self.degree < 0 {
            return Ok(0.0);
        }
        let n = self.degree as usize;
        let row = match self.family {
            OrthoFamily::HermitePhi => hermite_phi_row(n, x)?,
            OrthoFamily::LaguerrePsi => laguerre_psi_row(n, x)?,
            OrthoFamily::LaguerrePsiIntegral => laguerre_psi_integral_row(n, x)?,
        };
        Ok(row[n])
    }
}

/// Index into a row with the "negative degree is zero" convention.
#[inline]
pub fn row_at(row: &[f64], n: i64) -> f64 {
    if n < 0 {
        0.0
    } else {
        row[n as usize]
    }
}

pub(crate) fn check_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        arg_err(format!("{what} must be finite, got {x}"))
    }
}
