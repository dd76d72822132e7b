//! Time grids on `[0, 1]` and the bridge ↔ stationary Dyson time change.

use serde::Serialize;

use crate::error::{arg_err, Error, Result};

/// Default number of grid intervals for bridge sampling.
pub const DEFAULT_INTERVALS: usize = 2000;

/// Half-width of the `s`-window used by [`PathGrid::uniform_in_s`]. The two
/// outermost interior points sit at `t ≈ e^{-7} ≈ 9e-4` from the pinned ends,
/// which is finer than the spacing in the middle of the grid.
pub const DEFAULT_S_MAX: f64 = 3.5;

/// Strictly increasing times `0 = t_0 < … < t_K = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathGrid {
    times: Vec<f64>,
    pub crossing_correction: bool,
}

impl PathGrid {
    pub fn new(times: Vec<f64>, crossing_correction: bool) -> Result<Self> {
        if times.len() < 3 {
            return arg_err(format!("a path grid needs K ≥ 2 intervals, got {}", times.len().saturating_sub(1)));
        }
        if times[0] != 0.0 || *times.last().unwrap() != 1.0 {
            return arg_err("grid must start at exactly 0 and end at exactly 1");
        }
        if let Some(w) = times.windows(2).find(|w| !(w[1] > w[0])) {
            return arg_err(format!("grid is not strictly increasing near t = {}", w[0]));
        }
        Ok(Self { times, crossing_correction })
    }

    /// `K` equal steps in `t`.
    pub fn uniform(k: usize, crossing_correction: bool) -> Result<Self> {
        if k < 2 {
            return arg_err("K must be at least 2");
        }
        let mut times: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
        times[k] = 1.0;
        Self::new(times, crossing_correction)
    }

    /// `K` intervals: the interior points are `t_i = 1/(1 + e^{-2 s_i})` with
    /// `s_i = −S + 2S·i/K`, i.e. equally spaced in the Dyson time `s`. The
    /// outer points `s = ±S` are replaced by the pinned ends `t = 0, 1`.
    ///
    /// Grids with `K` and `2K` intervals are nested (every other point of the
    /// finer grid).
    pub fn uniform_in_s(k: usize, s_max: f64, crossing_correction: bool) -> Result<Self> {
        if k < 2 {
            return arg_err("K must be at least 2");
        }
        if !(s_max > 0.0 && s_max.is_finite()) {
            return arg_err(format!("s-window half-width must be positive, got {s_max}"));
        }
        let mut times = Vec::with_capacity(k + 1);
        times.push(0.0);
        for i in 1..k {
            let s = -s_max + 2.0 * s_max * i as f64 / k as f64;
            times.push(1.0 / (1.0 + (-2.0 * s).exp()));
        }
        times.push(1.0);
        Self::new(times, crossing_correction)
    }

    /// The default sampling grid: `K = 2000`, uniform in `s` on `[−3.5, 3.5]`,
    /// with crossing correction.
    pub fn default_bridge() -> Self {
        Self::uniform_in_s(DEFAULT_INTERVALS, DEFAULT_S_MAX, true).expect("valid constants")
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of intervals `K`.
    pub fn intervals(&self) -> usize {
        self.times.len() - 1
    }

    pub fn max_step(&self) -> f64 {
        self.times.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }

    /// Every `stride`-th point of this grid (always keeping `t = 1`).
    pub fn subsample(&self, stride: usize) -> Result<Self> {
        if stride == 0 || self.intervals() % stride != 0 {
            return arg_err(format!("stride {stride} does not divide K = {}", self.intervals()));
        }
        Self::new(self.times.iter().copied().step_by(stride).collect(), self.crossing_correction)
    }
}

/// `(t, B) ↦ (s, λ)` with `s = ½ log(t/(1−t))` and `λ = B/√(2t(1−t))`.
pub fn to_dyson(t: f64, b: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("time change needs t in (0, 1), got {t}")));
    }
    Ok((0.5 * (t / (1.0 - t)).ln(), b / (2.0 * t * (1.0 - t)).sqrt()))
}

/// Inverse of [`to_dyson`].
pub fn from_dyson(s: f64, lambda: f64) -> (f64, f64) {
    let t = 1.0 / (1.0 + (-2.0 * s).exp());
    (t, lambda * (2.0 * t * (1.0 - t)).sqrt())
}

/// A path on the Dyson time axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DysonPath {
    pub s: Vec<f64>,
    pub lambda: Vec<f64>,
}

impl DysonPath {
    /// Whether `λ(s) ≤ r·cosh(s)` holds at every grid point.
    pub fn below_cosh_barrier(&self, r: f64) -> bool {
        self.s.iter().zip(&self.lambda).all(|(&s, &l)| l <= r * s.cosh())
    }
}

/// Maps a path sampled at interior times `t ∈ (0, 1)` to the Dyson axis.
pub fn time_change_to_dyson(times: &[f64], values: &[f64]) -> Result<DysonPath> {
    if times.len() != values.len() {
        return arg_err("times and values differ in length");
    }
    let mut s = Vec::with_capacity(times.len());
    let mut lambda = Vec::with_capacity(times.len());
    for (&t, &b) in times.iter().zip(values) {
        let (si, li) = to_dyson(t, b)?;
        s.push(si);
        lambda.push(li);
    }
    Ok(DysonPath { s, lambda })
}

/// Inverse of [`time_change_to_dyson`]: returns `(times, values)`.
pub fn time_change_from_dyson(path: &DysonPath) -> (Vec<f64>, Vec<f64>) {
    path.s.iter().zip(&path.lambda).map(|(&s, &l)| from_dyson(s, l)).unzip()
}
