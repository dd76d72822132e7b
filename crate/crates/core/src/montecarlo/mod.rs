//! Monte Carlo oracles for the exact laws.
//!
//! Two samplers: the largest eigenvalue of an LOE matrix `XᵀX` and the
//! maximum of `N` non-intersecting Brownian bridges, realised as the top
//! eigenvalue of a Hermitian Brownian bridge. Every sample `i` draws from its
//! own ChaCha stream `(seed, i)`, so a [`SampleSummary`] is a pure function of
//! its inputs whatever the thread count.

mod bridge;
mod grid;
mod stats;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

pub use bridge::{
    hermitian_spectrum, sample_bridge_draw, sample_bridge_draws_nested, sample_bridge_path, sample_bridge_spectra,
    sample_bridges_max, sample_gue_eigenvalues, BridgeDraw, HermitianSpectrum, Segment, CROSSING_WINDOW_FACTOR,
};
pub use grid::{
    from_dyson, time_change_from_dyson, time_change_to_dyson, to_dyson, DysonPath, PathGrid, DEFAULT_INTERVALS,
    DEFAULT_S_MAX,
};
pub use stats::{ks_statistic, ks_statistic_corrected, ks_two_sample, CORRECTED_KS_POINTS, MIN_KS_SAMPLES};

use crate::error::{arg_err, Error, Result};
use crate::exec::{try_map_indexed, Execution};
use crate::kernelmat::maxheight_cdf;
use crate::linalg::jacobi_max_eigenvalue;
use crate::specfun::integrate_panels;

/// Default master seed.
pub const DEFAULT_SEED: u64 = 0x5EED_0001;

/// Identifies one independent random stream: the master seed picks the key,
/// the index picks the ChaCha stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RngStream {
    pub seed: u64,
    pub index: u64,
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        Self { seed, index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.index);
        rng
    }
}

/// One draw of the largest eigenvalue of `XᵀX`, `X` an `(N+1)×N` standard
/// Gaussian matrix.
pub fn sample_loe_max(n: usize, stream: RngStream) -> Result<f64> {
    if n == 0 {
        return arg_err("N must be at least 1");
    }
    let mut rng = stream.rng();
    let rows = n + 1;
    let x: Vec<f64> = (0..rows * n).map(|_| rng.sample(StandardNormal)).collect();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v: f64 = (0..rows).map(|k| x[k * n + i] * x[k * n + j]).sum();
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    jacobi_max_eigenvalue(&mut m, n)
}

/// Sorted samples with their provenance and, for bridge maxima, the data for
/// the crossing-corrected CDF estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSummary {
    pub label: String,
    seed: u64,
    samples: Vec<f64>,
    /// per sorted sample, the segments near its maximum
    segments: Option<Vec<Vec<Segment>>>,
    window: f64,
}

impl SampleSummary {
    /// Builds a summary from unsorted samples.
    pub fn new(label: impl Into<String>, seed: u64, samples: Vec<f64>) -> Result<Self> {
        let draws = samples.into_iter().map(|max| BridgeDraw { max, segments: Vec::new() }).collect();
        Self::build(label.into(), seed, draws, None)
    }

    fn build(label: String, seed: u64, mut draws: Vec<BridgeDraw>, window: Option<f64>) -> Result<Self> {
        if draws.is_empty() {
            return arg_err("a summary needs at least one sample");
        }
        if draws.iter().any(|d| !d.max.is_finite()) {
            return Err(Error::Numeric("non-finite sample".into()));
        }
        draws.sort_by(|a, b| a.max.total_cmp(&b.max));
        let samples = draws.iter().map(|d| d.max).collect();
        let segments = window.map(|_| draws.into_iter().map(|d| d.segments).collect());
        Ok(Self { label, seed, samples, segments, window: window.unwrap_or(0.0) })
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn is_crossing_corrected(&self) -> bool {
        self.segments.is_some()
    }

    /// Distance below a sample maximum beyond which grid segments are
    /// ignored by the crossing correction.
    pub fn crossing_window(&self) -> f64 {
        self.window
    }

    /// Right-continuous empirical CDF `#{x_i ≤ x}/n`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.n() as f64
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.n() as f64
    }

    /// Crossing-corrected estimate of `P(max ≤ r)`: each sample below `r`
    /// counts with the probability that none of the Brownian bridges
    /// interpolating its near-maximal grid segments crosses `r`.
    pub fn corrected_cdf(&self, r: f64) -> Result<f64> {
        let segs = self
            .segments
            .as_ref()
            .ok_or_else(|| Error::Argument("summary carries no crossing-correction data".into()))?;
        let below = self.samples.partition_point(|&s| s <= r);
        let safe = self.samples.partition_point(|&s| s <= r - self.window);
        let mut total = safe as f64;
        for seg in &segs[safe..below] {
            total += seg.iter().map(|s| 1.0 - s.crossing_probability(r)).product::<f64>();
        }
        Ok(total / self.n() as f64)
    }

    /// The summary of `c·X` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return arg_err(format!("scale must be positive, got {c}"));
        }
        let segments = self.segments.as_ref().map(|all| {
            all.iter()
                .map(|v| v.iter().map(|s| Segment { a: c * s.a, b: c * s.b, var: c * c * s.var }).collect())
                .collect()
        });
        Ok(Self {
            label: self.label.clone(),
            seed: self.seed,
            samples: self.samples.iter().map(|x| c * x).collect(),
            segments,
            window: c * self.window,
        })
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return arg_err("need at least one sample");
    }
    Ok(())
}

/// `samples` LOE top eigenvalues; sample `i` uses stream `(seed, i)`.
pub fn loe_summary(n: usize, samples: usize, seed: u64, exec: Execution) -> Result<SampleSummary> {
    check_samples(samples)?;
    let xs = try_map_indexed(samples, exec, |i| sample_loe_max(n, RngStream::new(seed, i as u64)))?;
    SampleSummary::new(format!("loe N={n}"), seed, xs)
}

/// `samples` bridge maxima on `grid`; sample `i` uses stream `(seed, i)`.
pub fn bridge_summary(n: usize, grid: &PathGrid, samples: usize, seed: u64, exec: Execution) -> Result<SampleSummary> {
    check_samples(samples)?;
    let draws = try_map_indexed(samples, exec, |i| sample_bridge_draw(n, grid, RngStream::new(seed, i as u64)))?;
    let window = grid.crossing_correction.then(|| (CROSSING_WINDOW_FACTOR * grid.max_step()).sqrt());
    SampleSummary::build(format!("bridges N={n} K={}", grid.intervals()), seed, draws, window)
}

/// One level of a grid-refinement study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementRow {
    pub k: usize,
    pub max_step: f64,
    pub mean_max: f64,
    pub ks_plain: f64,
    pub ks_corrected: f64,
}

/// Discretisation study of the bridge maximum over nested grids driven by the
/// same Brownian paths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementStudy {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// `E[max_t B_N(t)] = ∫_0^∞ (1 − F(m)) dm` from the exact law
    pub exact_mean: f64,
    pub rows: Vec<RefinementRow>,
    /// Aitken extrapolation of the mean over the three finest grids, when the
    /// successive differences shrink geometrically
    pub extrapolated_mean: Option<f64>,
}

/// Runs the refinement study for the grid sizes `k_list` (each dividing the
/// largest), uniform in `s` on `[−s_max, s_max]`.
pub fn grid_refinement_study(
    n: usize,
    k_list: &[usize],
    s_max: f64,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<RefinementStudy> {
    check_samples(samples)?;
    let mut ks: Vec<usize> = k_list.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let k_max = *ks.last().ok_or_else(|| Error::Argument("empty grid list".into()))?;
    let fine = PathGrid::uniform_in_s(k_max, s_max, true)?;
    let strides: Vec<usize> = ks.iter().map(|&k| if k > 0 { k_max / k } else { 0 }).collect();
    if ks.iter().zip(&strides).any(|(&k, &s)| s == 0 || k * s != k_max) {
        return arg_err(format!("every K must divide the largest ({k_max})"));
    }
    let draws = try_map_indexed(samples, exec, |i| {
        sample_bridge_draws_nested(n, &fine, &strides, RngStream::new(seed, i as u64))
    })?;
    let cdf = |m: f64| maxheight_cdf(n, m);
    let mut rows = Vec::with_capacity(ks.len());
    for (level, (&k, &stride)) in ks.iter().zip(&strides).enumerate() {
        let grid = fine.subsample(stride)?;
        let window = (CROSSING_WINDOW_FACTOR * grid.max_step()).sqrt();
        let level_draws = draws.iter().map(|d| d[level].clone()).collect();
        let summary = SampleSummary::build(format!("bridges N={n} K={k}"), seed, level_draws, Some(window))?;
        rows.push(RefinementRow {
            k,
            max_step: grid.max_step(),
            mean_max: summary.mean(),
            ks_plain: ks_statistic(&summary, cdf)?,
            ks_corrected: ks_statistic_corrected(&summary, cdf, exec)?,
        });
    }
    let extrapolated_mean = match rows.as_slice() {
        [.., a, b, c] => {
            let (d1, d2) = (b.mean_max - a.mean_max, c.mean_max - b.mean_max);
            let q = d2 / d1;
            (d1 != 0.0 && q > 0.0 && q < 1.0).then(|| c.mean_max + d2 * q / (1.0 - q))
        }
        _ => None,
    };
    Ok(RefinementStudy { n, samples, seed, exact_mean: exact_mean_max(n)?, rows, extrapolated_mean })
}

/// `E[max_t B_N(t)]` from the exact distribution function.
pub fn exact_mean_max(n: usize) -> Result<f64> {
    let upper = (n as f64).sqrt() + 8.0;
    let failure = std::cell::RefCell::new(None);
    let v = integrate_panels(
        |m| match maxheight_cdf(n, m) {
            Ok(p) => 1.0 - p,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        upper,
        64,
        16,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => v,
    }
}
