//! The identity suite: each matrix identity, polynomial lemma and kernel
//! identity behind the exact formula, evaluated numerically and recorded as
//! a named, anchored, tolerance-checked report entry.
//!
//! Failures are data, not errors: a check that cannot be evaluated (for
//! example because a matrix turned out singular) is recorded with an
//! infinite error and fails.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{arg_err, Result};
use crate::kernelmat::exact::{
    binom, binom_extended, conjugated_htilde, h_laguerre_form, hermite_convolution_closed_form, laguerre_exact_row,
    rational,
};
use crate::kernelmat::{
    build_H, build_Htilde, build_L_R1_R2, build_L_quadrature, build_Q_u_v, loe_side_kernel, maxheight_cdf,
};
use crate::linalg::det_I_minus;
use crate::specfun::{hermite_phi_row, integrate_adaptive, laguerre_poly_row, laguerre_psi_row};

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Which statement the check exercises; an empty anchor fails the check.
    pub anchor: String,
    #[serde(skip)]
    pub params: String,
    pub max_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, params: impl Into<String>, max_err: f64, tol: f64) -> Self {
        let anchor = anchor.into();
        let pass = max_err.is_finite() && max_err <= tol && !anchor.trim().is_empty();
        Self { name: name.into(), anchor, params: params.into(), max_err, tol, pass }
    }

    fn from_result(name: String, anchor: &str, params: String, err: Result<f64>, tol: f64) -> Self {
        Self::new(name, anchor, params, err.unwrap_or(f64::INFINITY), tol)
    }
}

/// A list of checks sorted by name, with the conjunction of their verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass && !c.anchor.trim().is_empty());
        Self { suite: suite.into(), seed: 0, checks, pass }
    }

    /// Concatenates several reports into one.
    pub fn merge(suite: impl Into<String>, parts: Vec<VerificationReport>) -> Self {
        Self::new(suite, parts.into_iter().flat_map(|r| r.checks).collect())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn worst(&self, prefix: &str) -> Option<&Check> {
        self.checks
            .iter()
            .filter(|c| c.name.starts_with(prefix))
            .max_by(|a, b| (a.max_err / a.tol).total_cmp(&(b.max_err / b.tol)))
    }
}

const ANCHOR_CONJ: &str = "H̃ = S H S⁻¹ with S upper triangular";
const ANCHOR_SQUARE: &str = "H̃² = L, L_jk = ∫_{2r²}^∞ ψ_j ψ_k";
const ANCHOR_EDGE: &str = "R₁ = H̃u and R₂ = (I − H̃)v";
const ANCHOR_DERIV: &str = "∂_r H̃ = QH̃";
const ANCHOR_RESOLVENT: &str = "∂_r(I+H̃)⁻¹ = (I−H̃²)⁻¹H̃Q + (I−H̃²)⁻¹E(I+H̃)⁻¹, E = 4rH̃u⊗u";
const ANCHOR_ANTICOMM: &str = "QH̃ = −H̃Q − E";
const ANCHOR_DET: &str = "det(I−H)² = det(I−L−R₁⊗R₂)";
const ANCHOR_BINOMIAL_CONV: &str = "Σ_{j−i=a} C(n,i)C(j,m)(−1)^i in closed form";
const ANCHOR_HERMITE_CONV: &str = "∫φ_n(x)φ_m(2r−x)dx as a Laguerre sum and as a generating-function sum";
const ANCHOR_HERMITE_CONV_ZERO: &str = "∫φ_n(x)φ_m(−x)dx = (−1)^n 1{m=n}";
const ANCHOR_LAGUERRE_SUM: &str = "(−1)^m xⁿ/n! Σ_k C(n−k−1,n−m−1)L_k = x^m/m! Σ_k C(n−m,k−m)(−1)^k L_k";
const ANCHOR_REFLECTION: &str = "e^{LD}K_N R^{(r)}_{[−L,0]} = K_N ϱ_r";
const ANCHOR_PATHINT: &str = "N-fold Gaussian integral of a squared trigonometric determinant";

/// Algebraic tolerance for (i)–(iii) and the anticommutator.
pub const ALGEBRAIC_TOL: f64 = 1e-8;
/// Finite-difference tolerance for (iv)–(v).
pub const FD_TOL: f64 = 1e-5;
/// Relative tolerance of the determinant identity.
pub const DET_TOL: f64 = 1e-9;
/// Finite-difference step in `r`.
pub const FD_STEP: f64 = 1e-4;
/// Smallest `r` at which (v) is checked: `(I − H̃²)⁻¹` degrades towards
/// `r = 0`, where `H̃` has eigenvalues approaching ±1.
pub const RESOLVENT_MIN_R: f64 = 0.25;

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a: f64, v| a.max(v.abs()))
}

fn htilde(n: usize, r: f64) -> Result<DMatrix<f64>> {
    Ok(build_Htilde(n, r)?.entries)
}

fn inverse(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    m.try_inverse().ok_or_else(|| crate::Error::Numeric("singular matrix".into()))
}

/// `R₂_j = ∫_0^{2r²} ψ_j` by adaptive quadrature.
fn r2_by_quadrature(n: usize, r: f64) -> Result<DVector<f64>> {
    let x0 = 2.0 * r * r;
    let mut out = DVector::zeros(n);
    for j in 0..n {
        out[j] = integrate_adaptive(|x| laguerre_psi_row(j, x).map(|v| v[j]).unwrap_or(f64::NAN), 0.0, x0, 1e-14)?;
    }
    Ok(out)
}

/// The conjugacy, square, edge-vector, derivative and resolvent identities,
/// the anticommutator identity and the determinant identity over `N ∈ n_set`, `r ∈ r_set`.
pub fn verify_matrix_identities(n_set: &[usize], r_set: &[f64]) -> Result<VerificationReport> {
    if let Some(n) = n_set.iter().find(|&&n| !(1..=16).contains(&n)) {
        return arg_err(format!("N must lie in [1, 16], got {n}"));
    }
    if let Some(r) = r_set.iter().find(|&&r| !(r > 0.0 && r <= 8.0)) {
        return arg_err(format!("r must lie in (0, 8], got {r}"));
    }
    let mut checks = Vec::new();
    for &n in n_set {
        for &r in r_set {
            let p = format!("N={n} r={r}");
            let tag = |s: &str| format!("{s} [N={n:02} r={r}]");

            let conj = (|| Ok(max_abs(&(conjugated_htilde(n, r)? - build_H(n, r)?.entries))))();
            checks.push(Check::from_result(tag("conjugacy"), ANCHOR_CONJ, p.clone(), conj, ALGEBRAIC_TOL));

            let sq = (|| {
                let h = htilde(n, r)?;
                Ok(max_abs(&(&h * &h - build_L_quadrature(n, r)?.entries)))
            })();
            checks.push(Check::from_result(tag("square-identity"), ANCHOR_SQUARE, p.clone(), sq, ALGEBRAIC_TOL));

            let edge = (|| {
                let h = htilde(n, r)?;
                let (_, qv) = build_Q_u_v(n, r)?;
                let r1 = DVector::from_vec(laguerre_psi_row(n - 1, 2.0 * r * r)?);
                let r2 = r2_by_quadrature(n, r)?;
                let e1 = (&h * &qv.u - r1).amax();
                let e2 = ((DMatrix::identity(n, n) - &h) * &qv.v - r2).amax();
                Ok(e1.max(e2))
            })();
            checks.push(Check::from_result(tag("edge-vectors"), ANCHOR_EDGE, p.clone(), edge, ALGEBRAIC_TOL));

            let anti = (|| {
                let h = htilde(n, r)?;
                let (q, qv) = build_Q_u_v(n, r)?;
                let q = q.entries;
                let e = 4.0 * r * (&h * &qv.u) * qv.u.transpose();
                Ok(max_abs(&(&q * &h + &h * &q + e)))
            })();
            checks.push(Check::from_result(tag("anticommutator"), ANCHOR_ANTICOMM, p.clone(), anti, ALGEBRAIC_TOL));

            let deriv = (|| {
                let fd = (htilde(n, r + FD_STEP)? - htilde(n, r - FD_STEP)?) / (2.0 * FD_STEP);
                let (q, _) = build_Q_u_v(n, r)?;
                Ok(max_abs(&(fd - q.entries * htilde(n, r)?)))
            })();
            checks.push(Check::from_result(tag("derivative"), ANCHOR_DERIV, p.clone(), deriv, FD_TOL));

            if r >= RESOLVENT_MIN_R {
                let res = (|| {
                    let id = DMatrix::<f64>::identity(n, n);
                    let inv_plus = |rr: f64| -> Result<DMatrix<f64>> { inverse(&id + htilde(n, rr)?) };
                    let fd = (inv_plus(r + FD_STEP)? - inv_plus(r - FD_STEP)?) / (2.0 * FD_STEP);
                    let h = htilde(n, r)?;
                    let (q, qv) = build_Q_u_v(n, r)?;
                    let e = 4.0 * r * (&h * &qv.u) * qv.u.transpose();
                    let a = inverse(&id - &h * &h)?;
                    let rhs = &a * &h * &q.entries + &a * e * inv_plus(r)?;
                    Ok(max_abs(&(fd - rhs)))
                })();
                checks.push(Check::from_result(tag("resolvent-derivative"), ANCHOR_RESOLVENT, p.clone(), res, FD_TOL));
            }

            let det = (|| {
                let lhs = det_I_minus(&build_H(n, r)?.entries)?.powi(2);
                let (l, ev) = build_L_R1_R2(n, r)?;
                let rhs = det_I_minus(&loe_side_kernel(&l, &ev))?;
                Ok((lhs - rhs).abs() / lhs.abs().max(1.0))
            })();
            checks.push(Check::from_result(tag("determinant-identity"), ANCHOR_DET, p, det, DET_TOL));
        }
    }
    Ok(VerificationReport::new("matrix-identities", checks))
}

fn binomial_convolution_lhs(n: i64, m: i64, a: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..=n {
        let j = i + a;
        if j < 0 {
            continue;
        }
        let term = binom(n, i) * binom(j, m);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn binomial_convolution_rhs(n: i64, m: i64, a: i64) -> BigInt {
    let sign = |e: i64| if e.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
    if a >= 0 {
        sign(n) * binom(a, m - n)
    } else if n >= m - a {
        sign(m - a) * binom(n - m - 1, n - m + a)
    } else {
        BigInt::zero()
    }
}

fn rat_abs_f64(q: &BigRational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}

/// The Laguerre-sum identity evaluated exactly at the dyadic rational `x`; returns
/// `(lhs, rhs)`.
fn laguerre_sum_exact(n: usize, m: usize, x: &BigRational) -> (BigRational, BigRational) {
    let lag = laguerre_exact_row(n, x);
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |a, b| a * BigInt::from(b));
    let (ni, mi) = (n as i64, m as i64);
    let mut lsum = BigRational::zero();
    for k in 0..=m {
        lsum += BigRational::from_integer(binom_extended(ni - k as i64 - 1, ni - mi - 1)) * &lag[k];
    }
    let mut rsum = BigRational::zero();
    for k in m..=n {
        let c = BigRational::from_integer(binom(ni - mi, k as i64 - mi));
        if k % 2 == 0 {
            rsum += c * &lag[k];
        } else {
            rsum -= c * &lag[k];
        }
    }
    let mut lhs = num_traits::pow::Pow::pow(x, n as u32) / BigRational::from_integer(fact(n)) * lsum;
    if m % 2 == 1 {
        lhs = -lhs;
    }
    let rhs = num_traits::pow::Pow::pow(x, m as u32) / BigRational::from_integer(fact(m)) * rsum;
    (lhs, rhs)
}

/// The same identity in floating point.
fn laguerre_sum_f64(n: usize, m: usize, x: f64) -> (f64, f64) {
    let lag = laguerre_poly_row(n, x);
    let fact = |k: usize| (1..=k).fold(1.0f64, |a, b| a * b as f64);
    let (ni, mi) = (n as i64, m as i64);
    let lsum: f64 = (0..=m)
        .map(|k| binom_extended(ni - k as i64 - 1, ni - mi - 1).to_f64().unwrap() * lag[k])
        .sum();
    let rsum: f64 = (m..=n)
        .map(|k| {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            s * binom(ni - mi, k as i64 - mi).to_f64().unwrap() * lag[k]
        })
        .sum();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    (sign * x.powi(n as i32) / fact(n) * lsum, x.powi(m as i32) / fact(m) * rsum)
}

/// The binomial convolution (exact), the Hermite convolution in
/// three forms, and the Laguerre polynomial identity.
pub fn verify_appendix_lemmas() -> Result<VerificationReport> {
    let mut checks = Vec::new();

    let mut defect = BigInt::zero();
    let mut worst = String::from("none");
    for n in 0..=20i64 {
        for m in 0..=20i64 {
            for a in -20..=20i64 {
                let d = (binomial_convolution_lhs(n, m, a) - binomial_convolution_rhs(n, m, a)).abs();
                if d > defect {
                    defect = d;
                    worst = format!("n={n} m={m} a={a}");
                }
            }
        }
    }
    checks.push(Check::new(
        "binomial-convolution-exact [n,m≤20 |a|≤20]",
        ANCHOR_BINOMIAL_CONV,
        format!("n,m ≤ 20, |a| ≤ 20; worst {worst}"),
        defect.to_f64().unwrap_or(f64::INFINITY),
        0.0,
    ));

    const NMAX: usize = 15;
    for r in [0.3, 1.0, 2.5] {
        let res = (|| -> Result<(f64, f64, f64)> {
            let quad = build_H(NMAX + 1, r)?.entries;
            let lag = h_laguerre_form(NMAX + 1, r)?;
            let (mut e_cl, mut e_cq, mut e_lq) = (0.0f64, 0.0f64, 0.0f64);
            for n in 0..=NMAX {
                for m in 0..=n {
                    let closed = hermite_convolution_closed_form(n, m, r)?;
                    let l = lag[(m, n)];
                    let q = quad[(m, n)];
                    e_cl = e_cl.max((closed - l).abs());
                    e_cq = e_cq.max((closed - q).abs());
                    e_lq = e_lq.max((l - q).abs());
                }
            }
            Ok((e_cl, e_cq, e_lq))
        })();
        let (a, b, c) = match res {
            Ok(t) => t,
            Err(_) => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
        };
        let p = format!("m ≤ n ≤ {NMAX}, r={r}");
        checks.push(Check::new(format!("hermite-convolution-closed-vs-laguerre [r={r}]"), ANCHOR_HERMITE_CONV, p.clone(), a, 1e-9));
        checks.push(Check::new(format!("hermite-convolution-closed-vs-quadrature [r={r}]"), ANCHOR_HERMITE_CONV, p.clone(), b, 1e-9));
        checks.push(Check::new(format!("hermite-convolution-laguerre-vs-quadrature [r={r}]"), ANCHOR_HERMITE_CONV, p, c, 1e-9));
    }

    let zero = (|| -> Result<f64> {
        let h = build_H(NMAX + 1, 0.0)?.entries;
        let mut e: f64 = 0.0;
        for n in 0..=NMAX {
            for m in 0..=NMAX {
                let want = if n == m { if n % 2 == 0 { 1.0 } else { -1.0 } } else { 0.0 };
                let closed = hermite_convolution_closed_form(n.max(m), n.min(m), 0.0)?;
                e = e.max((h[(n, m)] - want).abs()).max((closed - want).abs());
            }
        }
        Ok(e)
    })();
    checks.push(Check::from_result(
        "hermite-convolution-at-zero [n,m≤15]".into(),
        ANCHOR_HERMITE_CONV_ZERO,
        format!("n, m ≤ {NMAX}, r=0"),
        zero,
        1e-12,
    ));

    for x in [0.1, 1.0, 7.3] {
        let xq = rational(x)?;
        let (mut exact_defect, mut float_err) = (0.0f64, 0.0f64);
        for n in 0..=NMAX {
            for m in 0..=n {
                let (l, r) = laguerre_sum_exact(n, m, &xq);
                exact_defect = exact_defect.max(rat_abs_f64(&(l - r)));
                let (lf, rf) = laguerre_sum_f64(n, m, x);
                float_err = float_err.max((lf - rf).abs() / lf.abs().max(1.0));
            }
        }
        let p = format!("m ≤ n ≤ {NMAX}, x={x}");
        checks.push(Check::new(format!("laguerre-sum-exact [x={x}]"), ANCHOR_LAGUERRE_SUM, p.clone(), exact_defect, 0.0));
        checks.push(Check::new(format!("laguerre-sum-float [x={x}]"), ANCHOR_LAGUERRE_SUM, p, float_err, 1e-10));
    }
    Ok(VerificationReport::new("appendix-lemmas", checks))
}

/// The reflection kernel `R^{(r)}_{[ℓ₁,ℓ₂]}(x, y)`.
pub fn reflection_kernel(l1: f64, l2: f64, r: f64, x: f64, y: f64) -> f64 {
    let alpha = 0.25 * (2.0 * l1).exp();
    let beta = 0.25 * (2.0 * l2).exp();
    let d = beta - alpha;
    let (e1, e2) = (l1.exp(), l2.exp());
    let s = e1 * x + e2 * y - 2.0 * r * (alpha + beta) - r;
    let expo = 0.5 * (y * y - x * x) + l2 - r * (e2 * y - e1 * x) + r * r * d - s * s / (4.0 * d);
    expo.exp() / (4.0 * std::f64::consts::PI * d).sqrt()
}

/// `Σ_{n<N} e^{Ln} φ_n(x) ∫ φ_n(z) R^{(r)}_{[−L,0]}(z, y) dz` against
/// `K_{Herm,N}(x, 2r − y)`. In `z` the integrand is a polynomial times
/// `e^{−A(z − z₀)²}` with `A = ½ + (1 + e^{−2L})/(2(1 − e^{−2L}))`, so a
/// Gauss–Hermite rule centred at `z₀` is exact.
pub fn reflection_identity_error(n: usize, r: f64, l: f64, x: f64, y: f64) -> Result<f64> {
    use crate::specfun::{quadrature_rule, QuadratureKind};
    let q = (-2.0 * l).exp();
    let a = (1.0 + q) / (2.0 * (1.0 - q));
    let b = 2.0 * (-l).exp() * (2.0 * r - y) / (1.0 - q);
    let big_a = 0.5 + a;
    let z0 = b / (2.0 * big_a);
    let rule = quadrature_rule(QuadratureKind::GaussHermite, n + 8)?;
    let scale = big_a.sqrt();
    let mut proj = vec![0.0; n];
    for (u, sw) in rule.nodes.iter().zip(rule.scaled_weights()) {
        let z = z0 + u / scale;
        let rk = reflection_kernel(-l, 0.0, r, z, y);
        let phis = hermite_phi_row(n - 1, z)?;
        // the scaled weight already carries e^{u²} = e^{A(z−z₀)²}
        for (k, p) in phis.iter().enumerate() {
            proj[k] += sw * p * rk / scale;
        }
    }
    let phx = hermite_phi_row(n - 1, x)?;
    let phy = hermite_phi_row(n - 1, 2.0 * r - y)?;
    let lhs: f64 = (0..n).map(|k| (l * k as f64).exp() * phx[k] * proj[k]).sum();
    let rhs: f64 = (0..n).map(|k| phx[k] * phy[k]).sum();
    Ok((lhs - rhs).abs())
}

/// Default `(x, y)` test points: `{−2, −1.5, …, 2}²`.
pub fn reflection_test_points() -> Vec<f64> {
    (0..=8).map(|i| -2.0 + 0.5 * i as f64).collect()
}

/// The reflection-kernel identity over `N ∈ n_set`, `r ∈ r_set`, `L ∈ l_set` on the
/// default test grid.
pub fn verify_reflection_identity(n_set: &[usize], r_set: &[f64], l_set: &[f64]) -> Result<VerificationReport> {
    if let Some(n) = n_set.iter().find(|&&n| !(1..=8).contains(&n)) {
        return arg_err(format!("N must lie in [1, 8], got {n}"));
    }
    if let Some(r) = r_set.iter().find(|&&r| !(r > 0.0 && r <= 4.0)) {
        return arg_err(format!("r must lie in (0, 4], got {r}"));
    }
    if let Some(l) = l_set.iter().find(|&&l| !(0.5..=3.0).contains(&l)) {
        return arg_err(format!("L must lie in [0.5, 3], got {l}"));
    }
    let pts = reflection_test_points();
    let mut checks = Vec::new();
    for &n in n_set {
        for &r in r_set {
            for &l in l_set {
                let err = (|| -> Result<f64> {
                    let mut e: f64 = 0.0;
                    for &x in &pts {
                        for &y in &pts {
                            e = e.max(reflection_identity_error(n, r, l, x, y)?);
                        }
                    }
                    Ok(e)
                })();
                checks.push(Check::from_result(
                    format!("reflection-kernel [N={n} r={r} L={l}]"),
                    ANCHOR_REFLECTION,
                    format!("N={n} r={r} L={l}, (x,y) ∈ {{−2,…,2}}²"),
                    err,
                    1e-7,
                ));
            }
        }
    }
    Ok(VerificationReport::new("reflection-identity", checks))
}

/// `P(M_N ≤ m)` from the path-integral formula, for `N ∈ {1, 2}`.
///
/// For `N = 2` the squared determinant
/// `(y₂ sin y₁ cos y₂ − y₁ cos y₁ sin y₂)²` is expanded before integrating;
/// the Gaussian weight then factorises and the double integral becomes
/// `2(S₀C₂ − P₁²)` with one-dimensional integrals
/// `S₀ = ∫ sin²y g`, `C₂ = ∫ y² cos²y g`, `P₁ = ∫ y sin y cos y g`.
pub fn path_integral_cdf(n: usize, m: f64) -> Result<f64> {
    if !(n == 1 || n == 2) {
        return arg_err(format!("the path-integral oracle covers N ∈ {{1, 2}}, got {n}"));
    }
    if !(m > 0.0 && m.is_finite()) {
        return arg_err(format!("m must be positive, got {m}"));
    }
    // the Gaussian factor is e^{-37} < 1e-16 at the cut
    let ymax = m * 74f64.sqrt();
    let g = |y: f64| (-y * y / (2.0 * m * m)).exp();
    let tol = 1e-15;
    let two_pi = 2.0 * std::f64::consts::PI;
    if n == 1 {
        let s0 = integrate_adaptive(|y| y.sin().powi(2) * g(y), 0.0, ymax, tol)?;
        return Ok(4.0 / (two_pi.sqrt() * m) * s0);
    }
    let s0 = integrate_adaptive(|y| y.sin().powi(2) * g(y), 0.0, ymax, tol)?;
    let c2 = integrate_adaptive(|y| (y * y.cos()).powi(2) * g(y), 0.0, ymax, tol)?;
    let p1 = integrate_adaptive(|y| y * y.sin() * y.cos() * g(y), 0.0, ymax, tol)?;
    let integral = 2.0 * (s0 * c2 - p1 * p1);
    // 2^{2N} / ((2π)^{N/2} m^{N²} Π_{j≤N} j!) with N = 2
    Ok(16.0 / (two_pi * m.powi(4) * 2.0) * integral)
}

/// Default path-integral grid: 14 points on `[0.4, 3]`.
pub fn path_integral_grid() -> Vec<f64> {
    (0..14).map(|i| 0.4 + 0.2 * i as f64).collect()
}

/// Path-integral formula against `maxheight_cdf` for `N ∈ {1, 2}`.
pub fn verify_path_integral_small_n(m_grid: &[f64]) -> Result<VerificationReport> {
    if let Some(m) = m_grid.iter().find(|&&m| !(0.4..=3.0).contains(&m)) {
        return arg_err(format!("m must lie in [0.4, 3], got {m}"));
    }
    let mut checks = Vec::new();
    for (n, tol) in [(1usize, 1e-6), (2, 1e-4)] {
        let err = (|| -> Result<f64> {
            let mut e: f64 = 0.0;
            for &m in m_grid {
                e = e.max((path_integral_cdf(n, m)? - maxheight_cdf(n, m)?).abs());
            }
            Ok(e)
        })();
        checks.push(Check::from_result(
            format!("path-integral-N{n}"),
            ANCHOR_PATHINT,
            format!("N={n}, {} points on [0.4, 3]", m_grid.len()),
            err,
            tol,
        ));
    }
    Ok(VerificationReport::new("path-integral", checks))
}

/// Everything: the matrix identities for `N ≤ n_max` at `r_set`, the
/// appendix lemmas, the reflection identity (`N ≤ min(n_max, 8)`,
/// `L ∈ {0.5, 1, 2}`, `r ∈ r_set ∩ (0, 4]`) and the path-integral oracle.
pub fn full_suite(n_max: usize, r_set: &[f64]) -> Result<VerificationReport> {
    if !(1..=16).contains(&n_max) {
        return arg_err(format!("n-max must lie in [1, 16], got {n_max}"));
    }
    if r_set.is_empty() {
        return arg_err("need at least one r");
    }
    let ns: Vec<usize> = (1..=n_max).collect();
    let refl_ns: Vec<usize> = (1..=n_max.min(8)).collect();
    let refl_rs: Vec<f64> = r_set.iter().copied().filter(|&r| r > 0.0 && r <= 4.0).collect();
    let mut parts = vec![
        verify_matrix_identities(&ns, r_set)?,
        verify_appendix_lemmas()?,
        verify_path_integral_small_n(&path_integral_grid())?,
    ];
    if !refl_rs.is_empty() {
        parts.push(verify_reflection_identity(&refl_ns, &refl_rs, &[0.5, 1.0, 2.0])?);
    }
    Ok(VerificationReport::merge("full", parts))
}
