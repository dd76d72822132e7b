//! Kolmogorov–Smirnov distances.

use crate::error::{arg_err, Error, Result};
use crate::exec::{map_indexed, Execution};

use super::SampleSummary;

/// Smallest sample size accepted by the KS routines.
pub const MIN_KS_SAMPLES: usize = 10;

/// `sup_x |F_n(x) − F(x)|` evaluated at the sample points, using both the
/// value and the left limit of the empirical step function.
pub fn ks_statistic(summary: &SampleSummary, cdf: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    ks_sorted(summary.samples(), cdf)
}

pub(crate) fn ks_sorted(xs: &[f64], cdf: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let n = xs.len();
    if n < MIN_KS_SAMPLES {
        return arg_err(format!("KS needs at least {MIN_KS_SAMPLES} samples, got {n}"));
    }
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    Ok(d)
}

/// Two-sample KS distance between sorted samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() < MIN_KS_SAMPLES || b.len() < MIN_KS_SAMPLES {
        return arg_err("both samples need at least 10 points");
    }
    if a.windows(2).any(|w| w[1] < w[0]) || b.windows(2).any(|w| w[1] < w[0]) {
        return arg_err("samples must be sorted");
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Number of evaluation points for the crossing-corrected KS distance.
pub const CORRECTED_KS_POINTS: usize = 2000;

/// KS distance between the crossing-corrected empirical CDF and `cdf`.
///
/// The corrected estimate is continuous, so the supremum is taken over an
/// even grid of [`CORRECTED_KS_POINTS`] points spanning the samples plus
/// every sample point.
pub fn ks_statistic_corrected(
    summary: &SampleSummary,
    cdf: impl Fn(f64) -> Result<f64> + Sync,
    exec: Execution,
) -> Result<f64> {
    let xs = summary.samples();
    if xs.len() < MIN_KS_SAMPLES {
        return arg_err(format!("KS needs at least {MIN_KS_SAMPLES} samples, got {}", xs.len()));
    }
    if !summary.is_crossing_corrected() {
        return Err(Error::Argument("summary carries no crossing-correction data".into()));
    }
    let lo = xs[0];
    let hi = xs[xs.len() - 1] + summary.crossing_window();
    let step = (hi - lo) / (CORRECTED_KS_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..CORRECTED_KS_POINTS).map(|i| lo + step * i as f64).collect();
    let gaps = map_indexed(grid.len(), exec, |i| -> Result<f64> {
        let r = grid[i];
        Ok((summary.corrected_cdf(r)? - cdf(r)?).abs())
    });
    gaps.into_iter().try_fold(0.0f64, |d, g| Ok(d.max(g?)))
}
