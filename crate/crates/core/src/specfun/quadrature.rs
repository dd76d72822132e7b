use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::{Mutex, OnceLock};
use std::f64::consts::PI;

use serde::Serialize;

use super::hermite::PI_M4;
use crate::error::{arg_err, Error, Result};

pub const MAX_QUADRATURE_ORDER: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    /// Weight `e^{-x²}` on ℝ.
    GaussHermite,
    /// Weight 1 on `[-1, 1]`.
    GaussLegendre,
}

/// Nodes and weights of an `m`-point Gaussian rule.
///
/// For Gauss–Hermite the true weights underflow to zero at the outermost
/// nodes once `m` exceeds a few hundred, so the rule also carries
/// `w_i e^{x_i²}`. Anything that integrates Hermite *functions* (which carry
/// their own Gaussian) should use those.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    scaled: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `w_i e^{x_i²}` for Gauss–Hermite; the plain weights for Legendre.
    pub fn scaled_weights(&self) -> &[f64] {
        &self.scaled
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Legendre nodes and weights affinely mapped from `[-1,1]` onto `[a,b]`.
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        debug_assert_eq!(self.kind, QuadratureKind::GaussLegendre);
        let h = 0.5 * (b - a);
        let c = 0.5 * (b + a);
        (
            self.nodes.iter().map(|t| c + h * t).collect(),
            self.weights.iter().map(|w| h * w).collect(),
        )
    }
}

pub fn quadrature_rule(kind: QuadratureKind, m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_QUADRATURE_ORDER {
        return arg_err(format!("quadrature order must lie in 1..={MAX_QUADRATURE_ORDER}, got {m}"));
    }
    // Rules are pure functions of (kind, m); building a large Hermite rule
    // costs an eigen-decomposition, so keep them around.
    static CACHE: OnceLock<Mutex<HashMap<(QuadratureKind, usize), QuadratureRule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("quadrature cache poisoned").get(&(kind, m)) {
        return Ok(rule.clone());
    }
    let rule = match kind {
        QuadratureKind::GaussHermite => gauss_hermite(m),
        QuadratureKind::GaussLegendre => gauss_legendre(m),
    };
    cache.lock().expect("quadrature cache poisoned").insert((kind, m), rule.clone());
    Ok(rule)
}

/// Value of the orthonormal Hermite *function* of degree `n` and of degree
/// `n-1` at `x`. The Gaussian factor keeps the recursion bounded.
fn phi_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = PI_M4 * (-0.5 * x * x).exp();
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = x * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

// Newton iteration on the Hermite functions. Small orders use the classical
// asymptotic starting guesses; past ~64 nodes those occasionally land two
// iterates on the same root, so larger orders start from the eigenvalues of
// the Jacobi matrix (Golub–Welsch) and only polish with Newton.
fn gauss_hermite(n: usize) -> QuadratureRule {
    let mut x = vec![0.0; n];
    let mut sw = vec![0.0; n];
    let nf = n as f64;
    let half = n.div_ceil(2);
    let jacobi_guess = (n > 64).then(|| {
        let mut j = nalgebra::DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let b = (k as f64 / 2.0).sqrt();
            j[(k, k - 1)] = b;
            j[(k - 1, k)] = b;
        }
        let mut ev: Vec<f64> = j.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    });
    let mut z = 0.0;
    for i in 0..half {
        z = match (&jacobi_guess, i) {
            (Some(ev), _) => ev[i],
            (None, 0) => (2.0 * nf + 1.0).sqrt() - 1.855_75 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            (None, 1) => z - 1.14 * nf.powf(0.426) / z,
            (None, 2) => 1.86 * z - 0.86 * x[0],
            (None, 3) => 1.91 * z - 0.91 * x[1],
            (None, _) => 2.0 * z - x[i - 2],
        };
        for _ in 0..100 {
            let (p, pm1) = phi_pair(n, z);
            // p_n' = √(2n) p_{n-1}; the Gaussian factor cancels in the ratio
            let dz = p / ((2.0 * nf).sqrt() * pm1);
            z -= dz;
            if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        let (_, pm1) = phi_pair(n, z);
        let s = 2.0 / (2.0 * nf * pm1 * pm1);
        x[i] = z;
        x[n - 1 - i] = -z;
        sw[i] = s;
        sw[n - 1 - i] = s;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    x.reverse();
    sw.reverse();
    let weights = x.iter().zip(&sw).map(|(xi, s)| s * (-xi * xi).exp()).collect();
    QuadratureRule { kind: QuadratureKind::GaussHermite, nodes: x, weights, scaled: sw }
}

fn gauss_legendre(n: usize) -> QuadratureRule {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    QuadratureRule { kind: QuadratureKind::GaussLegendre, nodes: x, scaled: w.clone(), weights: w }
}

/// Composite Gauss–Legendre: `panels` equal sub-intervals of `[a,b]`, each
/// with an `order`-point rule.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> Result<f64> {
    if panels == 0 {
        return arg_err("at least one panel required");
    }
    let rule = quadrature_rule(QuadratureKind::GaussLegendre, order)?;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let c = lo + 0.5 * h;
        let s: f64 = rule.nodes.iter().zip(&rule.weights).map(|(t, w)| w * f(c + 0.5 * h * t)).sum();
        total += 0.5 * h * s;
    }
    Ok(total)
}

// Kronrod 15 / Gauss 7 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature on a finite interval.
///
/// Bisects the segment with the largest error estimate until the summed
/// estimate drops below `abs_tol`, or until roundoff makes further splitting
/// pointless.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return arg_err("adaptive quadrature needs finite limits");
    }
    if a == b {
        return Ok(0.0);
    }
    const MAX_SEGMENTS: usize = 4000;
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, err: e });
    let mut total_err = e;
    while total_err > abs_tol {
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::Convergence(format!(
                "adaptive quadrature on [{a}, {b}] stalled at error estimate {total_err:e}"
            )));
        }
        let seg = heap.pop().expect("heap never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a.min(seg.b) || mid >= seg.a.max(seg.b) {
            // interval no longer splittable in f64: accept what we have
            heap.push(seg);
            break;
        }
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        total_err += e1 + e2 - seg.err;
        heap.push(Segment { a: seg.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, err: e2 });
        // guard against drift in the running sum
        if total_err <= abs_tol {
            total_err = heap.iter().map(|s| s.err).sum();
        }
    }
    let mut vals: Vec<f64> = heap.into_iter().map(|s| s.value).collect();
    vals.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    Ok(vals.iter().sum())
}
