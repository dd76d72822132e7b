//! Non-intersecting Brownian bridges as the eigenvalues of a Hermitian
//! Brownian bridge.
//!
//! `X(t) = W(t) − t·W(1)` where `W` is a Hermitian Brownian motion whose
//! diagonal entries are standard real Brownian motions and whose off-diagonal
//! entries have independent real and imaginary parts of variance `t/2`. At
//! `t = ½` this is `√(t(1−t))·√2` times a GUE matrix with `A_ii ~ N(0, ½)`,
//! and the ordered eigenvalues of `X(t)` are `N` non-intersecting bridges.
//!
//! Only the top eigenvalue is needed for the maximum, and most grid times are
//! nowhere near the maximum. Weyl's inequality
//! `λ_max(A) ≤ λ_max(B) + ‖A − B‖_F` bounds the top eigenvalue between two
//! exactly-solved times, so a best-first branch and bound only diagonalises
//! the grid points that could still matter. The result is bit-identical to
//! diagonalising every point.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::grid::PathGrid;
use super::RngStream;
use crate::error::{arg_err, Error, Result};
use crate::linalg::{hermitian_embedding, jacobi_eigenvalues, jacobi_max_eigenvalue};

/// Exactly-solved anchor spacing for the branch and bound.
const ANCHOR_STRIDE: usize = 8;

/// Multiple of the largest step whose square root sets the crossing window:
/// segments with both ends more than `√(20·Δt_max)` below the maximum have
/// crossing probability below `e^{-40}`.
pub const CROSSING_WINDOW_FACTOR: f64 = 20.0;

/// A grid segment next to the maximum, for the crossing correction: end
/// values `a`, `b` and the local variance of the path over the segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub var: f64,
}

impl Segment {
    /// Probability that a Brownian bridge from `a` to `b` with variance `var`
    /// crosses level `r` (zero when an end is already above `r`).
    pub fn crossing_probability(&self, r: f64) -> f64 {
        if self.a >= r || self.b >= r {
            return 1.0;
        }
        (-2.0 * (r - self.a) * (r - self.b) / self.var).exp()
    }
}

/// One sampled bridge maximum and the segments near it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeDraw {
    pub max: f64,
    pub segments: Vec<Segment>,
}

/// Eigenvalues of the Hermitian matrix `re + i·im` (row-major, `n×n`) via
/// the real symmetric `2n×2n` embedding, together with the largest gap
/// within the duplicated pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    pub values: Vec<f64>,
    pub pairing_defect: f64,
}

pub fn hermitian_spectrum(re: &[f64], im: &[f64], n: usize) -> Result<HermitianSpectrum> {
    if re.len() != n * n || im.len() != n * n {
        return arg_err("real and imaginary parts must be n×n");
    }
    let mut emb = vec![0.0; 4 * n * n];
    hermitian_embedding(re, im, n, &mut emb);
    let ev = jacobi_eigenvalues(&mut emb, 2 * n)?;
    let mut values = Vec::with_capacity(n);
    let mut defect: f64 = 0.0;
    for pair in ev.chunks(2) {
        defect = defect.max((pair[1] - pair[0]).abs());
        values.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(HermitianSpectrum { values, pairing_defect: defect })
}

/// Eigenvalues of a GUE matrix with `A_ii ~ N(0, ½)` and off-diagonal real
/// and imaginary parts `~ N(0, ¼)`, ascending.
pub fn sample_gue_eigenvalues(n: usize, stream: RngStream) -> Result<Vec<f64>> {
    if n == 0 {
        return arg_err("N must be at least 1");
    }
    let mut rng = stream.rng();
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];
    for i in 0..n {
        re[i * n + i] = rng.sample::<f64, _>(StandardNormal) * 0.5f64.sqrt();
        for j in i + 1..n {
            let x = 0.5 * rng.sample::<f64, _>(StandardNormal);
            let y = 0.5 * rng.sample::<f64, _>(StandardNormal);
            re[i * n + j] = x;
            re[j * n + i] = x;
            im[i * n + j] = y;
            im[j * n + i] = -y;
        }
    }
    Ok(hermitian_spectrum(&re, &im, n)?.values)
}

/// A simulated Hermitian bridge, stored time-major in the packed layout
/// `[diag (n), Re upper (n(n−1)/2), Im upper (n(n−1)/2)]`, `n²` reals per time.
struct HermitianBridge {
    n: usize,
    data: Vec<f64>,
}

impl HermitianBridge {
    fn simulate(n: usize, times: &[f64], stream: RngStream) -> Self {
        let w = n * n;
        let k = times.len() - 1;
        let mut rng = stream.rng();
        let mut data = vec![0.0; w * (k + 1)];
        for step in 1..=k {
            let dt = times[step] - times[step - 1];
            let sd_diag = dt.sqrt();
            let sd_off = (0.5 * dt).sqrt();
            let (prev, cur) = data.split_at_mut(step * w);
            let prev = &prev[(step - 1) * w..];
            for c in 0..w {
                let sd = if c < n { sd_diag } else { sd_off };
                cur[c] = prev[c] + sd * rng.sample::<f64, _>(StandardNormal);
            }
        }
        let (head, last) = data.split_at_mut(k * w);
        let end: Vec<f64> = last.to_vec();
        for step in 0..k {
            let t = times[step];
            for c in 0..w {
                head[step * w + c] -= t * end[c];
            }
        }
        // X(1) = W(1) − W(1) exactly
        last.fill(0.0);
        Self { n, data }
    }

    fn at(&self, k: usize) -> &[f64] {
        let w = self.n * self.n;
        &self.data[k * w..(k + 1) * w]
    }

    /// Frobenius norm of `X(t_i) − X(t_j)` as a Hermitian matrix.
    fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.at(i), self.at(j));
        let mut diag = 0.0;
        let mut off = 0.0;
        for c in 0..self.n {
            diag += (a[c] - b[c]) * (a[c] - b[c]);
        }
        for c in self.n..a.len() {
            off += (a[c] - b[c]) * (a[c] - b[c]);
        }
        (diag + 2.0 * off).sqrt()
    }

    fn unpack(&self, k: usize, re: &mut [f64], im: &mut [f64]) {
        let n = self.n;
        let x = self.at(k);
        let half = n * (n - 1) / 2;
        let mut c = 0;
        for i in 0..n {
            re[i * n + i] = x[i];
            im[i * n + i] = 0.0;
            for j in i + 1..n {
                re[i * n + j] = x[n + c];
                re[j * n + i] = x[n + c];
                im[i * n + j] = x[n + half + c];
                im[j * n + i] = -x[n + half + c];
                c += 1;
            }
        }
    }
}

/// Top-eigenvalue evaluator with reusable buffers.
struct TopEigen<'a> {
    bridge: &'a HermitianBridge,
    re: Vec<f64>,
    im: Vec<f64>,
    emb: Vec<f64>,
}

impl<'a> TopEigen<'a> {
    fn new(bridge: &'a HermitianBridge) -> Self {
        let n = bridge.n;
        Self { bridge, re: vec![0.0; n * n], im: vec![0.0; n * n], emb: vec![0.0; 4 * n * n] }
    }

    fn eval(&mut self, k: usize) -> Result<f64> {
        let n = self.bridge.n;
        if n == 1 {
            return Ok(self.bridge.at(k)[0]);
        }
        self.bridge.unpack(k, &mut self.re, &mut self.im);
        hermitian_embedding(&self.re, &self.im, n, &mut self.emb);
        jacobi_max_eigenvalue(&mut self.emb, 2 * n)
    }
}

/// An interval `(lo, hi)` of positions in the index list with exactly-known
/// ends, ordered by the best upper bound over its interior.
struct Gap {
    bound: f64,
    at: usize,
    lo: usize,
    hi: usize,
}

impl PartialEq for Gap {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Gap {}
impl PartialOrd for Gap {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Gap {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound).then(other.lo.cmp(&self.lo))
    }
}

/// Maximum of the top eigenvalue over the grid points `idx` (a subset of the
/// simulated times, increasing, first 0 and last K) plus, when `window` is
/// positive, the segments with an end within `window` of the maximum.
fn branch_and_bound(bridge: &HermitianBridge, times: &[f64], idx: &[usize], window: f64) -> Result<BridgeDraw> {
    let len = idx.len();
    let mut top = TopEigen::new(bridge);
    let mut val = vec![f64::NAN; len];
    let mut anchors: Vec<usize> = (0..len).step_by(ANCHOR_STRIDE).collect();
    if *anchors.last().unwrap() != len - 1 {
        anchors.push(len - 1);
    }
    for &p in &anchors {
        val[p] = top.eval(idx[p])?;
    }
    let mut best = anchors.iter().map(|&p| val[p]).fold(f64::NEG_INFINITY, f64::max);

    // best interior bound of a gap and where it is attained
    let gap_bound = |val: &[f64], lo: usize, hi: usize| -> (f64, usize) {
        let mut b = f64::NEG_INFINITY;
        let mut at = lo + 1;
        for p in lo + 1..hi {
            let u = (val[lo] + bridge.distance(idx[p], idx[lo])).min(val[hi] + bridge.distance(idx[p], idx[hi]));
            if u > b {
                b = u;
                at = p;
            }
        }
        (b, at)
    };

    let mut heap = BinaryHeap::new();
    for w in anchors.windows(2) {
        if w[1] > w[0] + 1 {
            let (bound, at) = gap_bound(&val, w[0], w[1]);
            heap.push(Gap { bound, at, lo: w[0], hi: w[1] });
        }
    }
    while let Some(g) = heap.pop() {
        if g.bound <= best - window {
            break;
        }
        let p = g.at;
        let v = top.eval(idx[p])?;
        val[p] = v;
        best = best.max(v);
        for (lo, hi) in [(g.lo, p), (p, g.hi)] {
            if hi > lo + 1 {
                let (bound, at) = gap_bound(&val, lo, hi);
                heap.push(Gap { bound, at, lo, hi });
            }
        }
    }

    let mut segments = Vec::new();
    if window > 0.0 {
        let near: Vec<usize> = (0..len).filter(|&p| val[p] >= best - window).collect();
        let mut lefts: Vec<usize> = near.iter().flat_map(|&p| [p.checked_sub(1), Some(p)]).flatten().filter(|&l| l + 1 < len).collect();
        lefts.sort_unstable();
        lefts.dedup();
        for l in lefts {
            for p in [l, l + 1] {
                if val[p].is_nan() {
                    val[p] = top.eval(idx[p])?;
                }
            }
            segments.push(Segment { a: val[l], b: val[l + 1], var: times[idx[l + 1]] - times[idx[l]] });
        }
    }
    if !best.is_finite() {
        return Err(Error::Numeric("non-finite bridge maximum".into()));
    }
    Ok(BridgeDraw { max: best, segments })
}

fn crossing_window(grid: &PathGrid) -> f64 {
    if grid.crossing_correction {
        (CROSSING_WINDOW_FACTOR * grid.max_step()).sqrt()
    } else {
        0.0
    }
}

/// One draw of `max_t B_N(t)` over the grid, with the segments needed for
/// the crossing correction when the grid requests it.
pub fn sample_bridge_draw(n: usize, grid: &PathGrid, stream: RngStream) -> Result<BridgeDraw> {
    Ok(sample_bridge_draws_nested(n, grid, &[1], stream)?.remove(0))
}

/// One draw of `max_t B_N(t)` over the grid.
pub fn sample_bridges_max(n: usize, grid: &PathGrid, stream: RngStream) -> Result<f64> {
    let mut plain = grid.clone();
    plain.crossing_correction = false;
    Ok(sample_bridge_draw(n, &plain, stream)?.max)
}

/// Simulates one path on `grid` and reports its maximum over each of the
/// nested subgrids `grid.subsample(stride)`.
pub fn sample_bridge_draws_nested(
    n: usize,
    grid: &PathGrid,
    strides: &[usize],
    stream: RngStream,
) -> Result<Vec<BridgeDraw>> {
    if n == 0 {
        return arg_err("N must be at least 1");
    }
    let subgrids = strides.iter().map(|&s| grid.subsample(s)).collect::<Result<Vec<_>>>()?;
    let bridge = HermitianBridge::simulate(n, grid.times(), stream);
    let k = grid.intervals();
    strides
        .iter()
        .zip(&subgrids)
        .map(|(&stride, sub)| {
            let idx: Vec<usize> = (0..=k).step_by(stride).collect();
            branch_and_bound(&bridge, grid.times(), &idx, crossing_window(sub))
        })
        .collect()
}

/// The top eigenvalue at every grid time (no pruning).
pub fn sample_bridge_path(n: usize, grid: &PathGrid, stream: RngStream) -> Result<Vec<f64>> {
    Ok(sample_bridge_spectra(n, grid, stream)?.into_iter().map(|v| *v.last().unwrap()).collect())
}

/// All `N` eigenvalues (ascending) at every grid time.
pub fn sample_bridge_spectra(n: usize, grid: &PathGrid, stream: RngStream) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return arg_err("N must be at least 1");
    }
    let bridge = HermitianBridge::simulate(n, grid.times(), stream);
    let mut re = vec![0.0; n * n];
    let mut im = vec![0.0; n * n];
    (0..=grid.intervals())
        .map(|k| {
            bridge.unpack(k, &mut re, &mut im);
            Ok(hermitian_spectrum(&re, &im, n)?.values)
        })
        .collect()
}
