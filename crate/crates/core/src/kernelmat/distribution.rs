use serde::Serialize;

use super::exact::{det_i_minus_htilde_exact, det_loe_side_exact, rational, to_f64_robust};
use super::matrices::{build_H, build_L_R1_R2};
use super::loe_side_kernel;
use crate::error::{arg_err, Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::linalg::det_I_minus;

/// Agreement demanded between the two LOE routes, on the squared scale and
/// relative to `max(1, det)`.
pub const ROUTE_TOL: f64 = 1e-9;

/// Below this value a floating-point determinant is dominated by
/// cancellation (its absolute error is ~1e-16), so the left tail switches
/// to the exact Laguerre-basis route.
pub const TAIL_THRESHOLD: f64 = 1e-6;

/// Largest `N` for which the exact tail route is used.
pub const TAIL_EXACT_MAX_N: usize = 40;

/// `P(max_t B_N(t) ≤ m) = det(I − H)` at `r = √2·m`. Unclamped.
///
/// In the far left tail (`det < 1e-6`, `N ≤ 40`) the value is recomputed as
/// `det(I − H̃)` in rational arithmetic at `x = 2r² = 4m²`, which keeps full
/// relative accuracy where the `f64` LU result is pure rounding noise.
pub fn maxheight_cdf(n: usize, m: f64) -> Result<f64> {
    if n == 0 {
        return arg_err("N must be at least 1");
    }
    if m.is_nan() {
        return arg_err("m is NaN");
    }
    if m <= 0.0 {
        return Ok(0.0);
    }
    if m == f64::INFINITY {
        return Ok(1.0);
    }
    let h = build_H(n, std::f64::consts::SQRT_2 * m)?;
    let det = det_I_minus(&h.entries)?;
    if det < TAIL_THRESHOLD && n <= TAIL_EXACT_MAX_N {
        let mq = rational(m)?;
        let x = &mq * &mq * rational(4.0)?;
        return Ok(to_f64_robust(&det_i_minus_htilde_exact(n, &x)));
    }
    Ok(det)
}

/// Both evaluations of `F_{LOE,N}(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoeRoutes {
    /// `det(I − L − R₁ ⊗ R₂)`, i.e. the square of the distribution function
    pub squared: f64,
    /// `det(I − H)` at the same `r`
    pub hermite: f64,
}

impl LoeRoutes {
    pub fn discrepancy(&self) -> f64 {
        (self.squared - self.hermite * self.hermite).abs() / self.squared.abs().max(1.0)
    }
}

pub fn loe_cdf_routes(n: usize, s: f64) -> Result<LoeRoutes> {
    if n == 0 {
        return arg_err("N must be at least 1");
    }
    if !s.is_finite() || s <= 0.0 {
        return arg_err(format!("routes need a finite positive s, got {s}"));
    }
    let r = (0.5 * s).sqrt();
    let (l, ev) = build_L_R1_R2(n, r)?;
    let squared = det_I_minus(&loe_side_kernel(&l, &ev))?;
    let hermite = det_I_minus(&build_H(n, r)?.entries)?;
    if squared < TAIL_THRESHOLD && n <= TAIL_EXACT_MAX_N {
        // x = 2r² = s exactly
        let x = rational(s)?;
        return Ok(LoeRoutes {
            squared: to_f64_robust(&det_loe_side_exact(n, &x)),
            hermite: to_f64_robust(&det_i_minus_htilde_exact(n, &x)),
        });
    }
    Ok(LoeRoutes { squared, hermite })
}

/// Distribution function of the largest eigenvalue of an `N×N` LOE matrix
/// `XᵀX`, `X` being `(N+1)×N` standard Gaussian.
///
/// Evaluated as `√det(I − L − R₁⊗R₂)` at `r = √(s/2)`, and cross-checked
/// against `det(I − H)` (in the far left tail both are evaluated exactly
/// in the Laguerre basis, see [`maxheight_cdf`]); a disagreement beyond 100× the nominal tolerance is
/// reported as a consistency error rather than returned.
pub fn loe_cdf(n: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return arg_err("N must be at least 1");
    }
    if s.is_nan() {
        return arg_err("s is NaN");
    }
    if s <= 0.0 {
        return Ok(0.0);
    }
    if s == f64::INFINITY {
        return Ok(1.0);
    }
    let routes = loe_cdf_routes(n, s)?;
    if routes.discrepancy() > 100.0 * ROUTE_TOL {
        return Err(Error::Consistency(format!(
            "LOE routes disagree at N={n}, s={s}: det(I−L−R1⊗R2) = {:e}, det(I−H)² = {:e}",
            routes.squared,
            routes.hermite * routes.hermite
        )));
    }
    Ok(routes.squared.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CdfKind {
    /// law of `max_t B_N(t)`
    Maxheight,
    /// law of the largest LOE eigenvalue
    Loe,
}

impl CdfKind {
    pub fn eval(self, n: usize, x: f64) -> Result<f64> {
        match self {
            CdfKind::Maxheight => maxheight_cdf(n, x),
            CdfKind::Loe => loe_cdf(n, x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionTable {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Dips smaller than this between consecutive clamped values are rounding
/// and are flattened; anything larger is an error.
pub const MONOTONE_SLACK: f64 = 1e-12;

impl DistributionTable {
    /// Builds a table from raw values: clamps to `[0,1]` and enforces
    /// monotonicity within [`MONOTONE_SLACK`].
    pub fn from_raw(label: impl Into<String>, args: &[f64], raw: &[f64]) -> Result<Self> {
        let label = label.into();
        let mut points = Vec::with_capacity(args.len());
        let mut running = 0.0f64;
        for (&x, &p) in args.iter().zip(raw) {
            let c = p.clamp(0.0, 1.0);
            if c < running - MONOTONE_SLACK {
                return Err(Error::Numeric(format!(
                    "{label}: distribution decreases by {:e} at argument {x}",
                    running - c
                )));
            }
            running = running.max(c);
            points.push((x, running));
        }
        Ok(Self { label, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Piecewise-linear interpolation, constant outside the table.
    pub fn interpolate(&self, x: f64) -> f64 {
        let pts = &self.points;
        match pts.partition_point(|p| p.0 <= x) {
            0 => pts.first().map_or(0.0, |p| p.1),
            k if k == pts.len() => pts[k - 1].1,
            k => {
                let (x0, y0) = pts[k - 1];
                let (x1, y1) = pts[k];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }
}

/// Tabulates a distribution function on a sorted grid. Grid points are
/// evaluated independently (in parallel when requested); the table does not
/// depend on the execution mode.
pub fn cdf_table(kind: CdfKind, n: usize, grid: &[f64], exec: Execution) -> Result<DistributionTable> {
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return arg_err("grid must be sorted and free of NaN");
    }
    let raw = try_map_indexed(grid.len(), exec, |i| kind.eval(n, grid[i]))?;
    let label = match kind {
        CdfKind::Maxheight => format!("maxheight N={n}"),
        CdfKind::Loe => format!("loe N={n}"),
    };
    DistributionTable::from_raw(label, grid, &raw)
}
