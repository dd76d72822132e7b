//! Exact rational evaluation of the binomial-weighted Laguerre sums.
//!
//! Several routes to `H` (the Laguerre form, the conjugation `S⁻¹H̃S` and the
//! generating-function closed form) are alternating sums whose terms are
//! many orders of magnitude larger than the result when `r` is small. Every
//! `f64` is an exact dyadic rational, so the polynomial part of those sums
//! can be computed without any rounding; only the final, well-conditioned
//! scale factor (`c_j/c_i`, `e^{-r²}`) is applied in floating point.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrices::c_coefficients;
use crate::error::{arg_err, Error, Result};

/// Largest dimension the exact routes accept; binomial products stay in
/// `i128` comfortably below this.
pub const EXACT_MAX_N: usize = 60;

pub fn rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Argument(format!("{x} is not finite")))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Binomial coefficient under the convention `C(k, l) = 0` if `l < 0` or
/// `l > k` (in particular it vanishes for every negative `k`).
pub fn binom(k: i64, l: i64) -> BigInt {
    if l < 0 || l > k {
        return BigInt::zero();
    }
    let l = l.min(k - l);
    let mut acc = BigInt::one();
    for t in 0..l {
        acc = acc * BigInt::from(k - t) / BigInt::from(t + 1);
    }
    acc
}

/// Binomial coefficient extended to negative integer arguments by the
/// Gamma-function limit: `C(k, l) = (−1)^{k−l} C(−l−1, k−l)` for
/// `l ≤ k < 0`. This is what makes `C(−1, −1) = 1`.
pub fn binom_extended(k: i64, l: i64) -> BigInt {
    if k < 0 && l < 0 {
        if l > k {
            return BigInt::zero();
        }
        let v = binom(-l - 1, k - l);
        return if (k - l) % 2 == 0 { v } else { -v };
    }
    if k < 0 && l >= 0 {
        // Newton's generalised binomial (not needed in this crate's sums,
        // but keeps the function total)
        let v = binom(l - k - 1, l);
        return if l % 2 == 0 { v } else { -v };
    }
    binom(k, l)
}

fn binom_i128(k: i64, l: i64) -> i128 {
    binom(k, l).to_i128().expect("binomial fits in i128 for the supported sizes")
}

/// `L_0(x), …, L_{n_max}(x)` exactly.
pub fn laguerre_exact_row(n_max: usize, x: &BigRational) -> Vec<BigRational> {
    let mut row = Vec::with_capacity(n_max + 1);
    row.push(BigRational::one());
    if n_max >= 1 {
        row.push(BigRational::one() - x);
    }
    for k in 1..n_max {
        let kf = BigRational::from_integer(BigInt::from(k));
        let two_k1 = BigRational::from_integer(BigInt::from(2 * k + 1));
        let next = ((two_k1 - x) * &row[k] - kf * &row[k - 1]) / BigRational::from_integer(BigInt::from(k + 1));
        row.push(next);
    }
    row
}

/// Laguerre values brought over one common denominator, so integer linear
/// combinations of them need only big-integer arithmetic.
struct CommonDenominator {
    numerators: Vec<BigInt>,
    denominator: BigInt,
}

impl CommonDenominator {
    fn new(values: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for v in values {
            let d = v.denom();
            den = num_integer_lcm(&den, d);
        }
        let numerators = values.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        Self { numerators, denominator: den }
    }

    /// `Σ_k coef[k] · value[k]` as an `f64`, rounded once.
    fn combine(&self, coef: &[i128]) -> f64 {
        let mut acc = BigInt::zero();
        for (c, n) in coef.iter().zip(&self.numerators) {
            if *c != 0 {
                acc += n * BigInt::from(*c);
            }
        }
        to_f64(&BigRational::new(acc, self.denominator.clone()))
    }
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > EXACT_MAX_N {
        return arg_err(format!("exact routes support 1 ≤ N ≤ {EXACT_MAX_N}, got {n}"));
    }
    Ok(())
}

/// Laguerre values at `x = 2r²` over a common denominator, plus `e^{-r²}`.
fn laguerre_at_2r2(n_max: usize, r: f64) -> Result<(CommonDenominator, f64)> {
    let rq = rational(r)?;
    let x = &rq * &rq * BigRational::from_integer(BigInt::from(2));
    let row = laguerre_exact_row(n_max, &x);
    Ok((CommonDenominator::new(&row), (-r * r).exp()))
}

/// `S⁻¹ H̃ S` with the integer-weighted Laguerre bracket computed exactly.
///
/// Writing `H̃_{ab} = (−1)^N e^{−r²}(L_{a+b−N} − L_{a+b−N+1})(2r²)`, every
/// entry of the triple product is `(c_j/c_i) e^{−r²} Σ_k n_{ijk} L_k(2r²)`
/// with integer `n_{ijk}`.
pub fn conjugated_htilde(n: usize, r: f64) -> Result<DMatrix<f64>> {
    check_n(n)?;
    if r <= 0.0 {
        return arg_err(format!("conjugation needs r > 0, got {r}"));
    }
    let (lag, gauss) = laguerre_at_2r2(n, r)?;
    let c = c_coefficients(n, r);
    let ni = n as i64;
    let mut out = DMatrix::zeros(n, n);
    let mut coef = vec![0i128; n + 1];
    for i in 0..ni {
        for j in 0..ni {
            coef.iter_mut().for_each(|v| *v = 0);
            for a in i..ni {
                let sa = binom_i128(ni - 1 - i, a - i);
                for b in 0..=j {
                    let sb = binom_i128(ni - 1 - b, j - b);
                    let sign = if (ni + a + j) % 2 == 0 { 1 } else { -1 };
                    let w = sign * sa * sb;
                    let k0 = a + b - ni;
                    if k0 >= 0 {
                        coef[k0 as usize] += w;
                    }
                    if k0 + 1 >= 0 {
                        coef[(k0 + 1) as usize] -= w;
                    }
                }
            }
            let bracket = lag.combine(&coef);
            out[(i as usize, j as usize)] = c[j as usize] / c[i as usize] * gauss * bracket;
        }
    }
    Ok(out)
}

/// `H` from its Laguerre-sum form: for `j ≥ i`,
/// `H_ij = (c_j/c_i) Σ_{k=i}^{j} C(j−i, k−i) (−1)^k ψ_k(2r²)`.
pub fn h_laguerre_form(n: usize, r: f64) -> Result<DMatrix<f64>> {
    check_n(n)?;
    if r <= 0.0 {
        return arg_err(format!("the Laguerre form of H needs r > 0, got {r}"));
    }
    let (lag, gauss) = laguerre_at_2r2(n, r)?;
    let c = c_coefficients(n, r);
    let mut out = DMatrix::zeros(n, n);
    let mut coef = vec![0i128; n + 1];
    for i in 0..n {
        for j in i..n {
            coef.iter_mut().for_each(|v| *v = 0);
            for k in i..=j {
                let s = if k % 2 == 0 { 1 } else { -1 };
                coef[k] = s * binom_i128((j - i) as i64, (k - i) as i64);
            }
            let v = c[j] / c[i] * gauss * lag.combine(&coef);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

/// Generating-function closed form of `∫φ_n(x)φ_m(2r−x)dx`:
/// `e^{−r²}/√(2^{n+m} n! m!) Σ_{l=0}^{m} (−2)^l l! C(n,l) C(m,l) (2r)^{n+m−2l}`.
pub fn hermite_convolution_closed_form(n: usize, m: usize, r: f64) -> Result<f64> {
    let t = rational(2.0 * r)?;
    let mut sum = BigRational::zero();
    let mut l_fact = BigInt::one();
    for l in 0..=m.min(n) {
        if l > 0 {
            l_fact *= BigInt::from(l);
        }
        let mut term = BigRational::from_integer(
            BigInt::from(-2).pow(l as u32) * &l_fact * binom(n as i64, l as i64) * binom(m as i64, l as i64),
        );
        let e = (n + m - 2 * l) as i32;
        term *= num_traits::pow::Pow::pow(&t, e);
        sum += term;
    }
    if sum.is_zero() {
        return Ok(0.0);
    }
    let log_norm = 0.5 * ((n + m) as f64 * std::f64::consts::LN_2 + ln_factorial(n) + ln_factorial(m));
    let direct = to_f64(&sum);
    if direct.is_finite() && direct.abs() > 1e-250 && log_norm < 600.0 {
        let fact = |k: usize| (1..=k).fold(1.0f64, |a, b| a * b as f64);
        let norm = (2f64.powi((n + m) as i32) * fact(n) * fact(m)).sqrt();
        return Ok(direct * (-r * r).exp() / norm);
    }
    let sign = if sum.is_negative() { -1.0 } else { 1.0 };
    // the sum itself may overflow f64 for large r; combine in log space
    let log_abs = log_abs_rational(&sum);
    Ok(sign * (log_abs - log_norm - r * r).exp())
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn log_abs_rational(q: &BigRational) -> f64 {
    let num = q.numer().abs();
    let den = q.denom().abs();
    log_big(&num) - log_big(&den)
}

fn log_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("bounded").ln();
    }
    let shift = bits - 900;
    let top: BigInt = x >> shift;
    top.to_f64().expect("bounded").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `e^{-q/2}` rounded to a dyadic rational with `bits` fractional bits.
///
/// Fixed-point Taylor series after halving the argument below 1/2, then
/// repeated squaring; guard bits absorb the squaring losses.
pub fn exp_neg_half(q: &BigRational, bits: u64) -> BigRational {
    assert!(!q.is_negative(), "exp_neg_half needs q ≥ 0");
    let mut a = q / BigRational::from_integer(BigInt::from(2));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut squarings = 0u64;
    while a > half {
        a /= BigRational::from_integer(BigInt::from(2));
        squarings += 1;
    }
    let prec = bits + 64 + 2 * squarings;
    let one: BigInt = BigInt::one() << prec;
    let xa: BigInt = (a.numer() << prec) / a.denom();
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term = -((&term * &xa) >> prec) / BigInt::from(k);
        sum += &term;
        k += 1;
    }
    for _ in 0..squarings {
        sum = (&sum * &sum) >> prec;
    }
    let drop = prec - bits;
    BigRational::new(sum >> drop, BigInt::one() << bits)
}

/// Determinant of a rational matrix, exactly.
///
/// Clears denominators row by row and runs fraction-free (Bareiss)
/// elimination on the integer matrix, which avoids the gcd cost of plain
/// rational Gaussian elimination.
pub fn det_exact(a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in a {
        let mut den = BigInt::one();
        for v in &row {
            den = num_integer_lcm(&den, v.denom());
        }
        m.push(row.iter().map(|v| v.numer() * (&den / v.denom())).collect());
        scale *= den;
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone() * BigInt::from(sign);
    BigRational::new(det, scale)
}

/// Fractional bits for `e^{-x/2}` on the first attempt of a tail route.
pub const TAIL_BITS: u64 = 256;

/// Runs `f` with increasing precision until the result is resolved to well
/// beyond `f64` relative accuracy. The error in the result is at most a
/// modest multiple of `2^{-bits}`, so `|det| ≫ 2^{-bits+96}` is enough.
fn with_adaptive_bits(f: impl Fn(u64) -> BigRational) -> BigRational {
    let mut bits = TAIL_BITS;
    loop {
        let v = f(bits);
        let resolved = !v.is_zero() && log_abs_rational(&v) > -((bits - 96) as f64) * std::f64::consts::LN_2;
        if resolved || bits >= 1600 {
            return v;
        }
        let need = if v.is_zero() { 2 * bits } else { (-log_abs_rational(&v) / std::f64::consts::LN_2) as u64 + 160 };
        bits = need.max(bits + 64).min(1600);
    }
}

fn htilde_exact(n: usize, x: &BigRational, y: &BigRational) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let lag = laguerre_exact_row(n, x);
    let ni = n as i64;
    let lag_at = |k: i64| if k < 0 { BigRational::zero() } else { lag[k as usize].clone() };
    let sign = if n % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let band: Vec<BigRational> = (0..2 * ni - 1)
        .map(|s| &sign * y * (lag_at(s - ni) - lag_at(s - ni + 1)))
        .collect();
    let m = (0..n).map(|i| (0..n).map(|j| band[i + j].clone()).collect()).collect();
    (lag, m)
}

/// `det(I − H̃)` at `x = 2r²`, exact apart from the dyadic rounding of
/// `e^{-x/2}`. Equal to `det(I − H)` by conjugacy.
pub fn det_i_minus_htilde_exact(n: usize, x: &BigRational) -> BigRational {
    with_adaptive_bits(|bits| det_i_minus_htilde_at(n, x, bits))
}

fn det_i_minus_htilde_at(n: usize, x: &BigRational, bits: u64) -> BigRational {
    let y = exp_neg_half(x, bits);
    let (_, h) = htilde_exact(n, x, &y);
    let a = h
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, v)| if i == j { BigRational::one() - v } else { -v })
                .collect()
        })
        .collect();
    det_exact(a)
}

/// `det(I − L − R₁ ⊗ R₂)` at `x = 2r²`, with `L = H̃²`, exact apart from the
/// dyadic rounding of `e^{-x/2}`.
pub fn det_loe_side_exact(n: usize, x: &BigRational) -> BigRational {
    with_adaptive_bits(|bits| det_loe_side_at(n, x, bits))
}

fn det_loe_side_at(n: usize, x: &BigRational, bits: u64) -> BigRational {
    let y = exp_neg_half(x, bits);
    let (lag, h) = htilde_exact(n, x, &y);
    let psi: Vec<BigRational> = lag.iter().map(|l| &y * l).collect();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut big_psi = vec![&two * (BigRational::one() - &y)];
    for k in 0..n.saturating_sub(1) {
        let next = &two * (&psi[k] - &psi[k + 1]) - &big_psi[k];
        big_psi.push(next);
    }
    let mut a = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut l = BigRational::zero();
            for k in 0..n {
                l += &h[i][k] * &h[k][j];
            }
            let mut v = -(l + &psi[i] * &big_psi[j]);
            if i == j {
                v += BigRational::one();
            }
            a[i][j] = v;
        }
    }
    det_exact(a)
}

/// Converts a rational that may lie below the `f64` range without spurious
/// overflow of its numerator or denominator.
pub fn to_f64_robust(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let direct = to_f64(q);
    if direct.is_finite() && direct != 0.0 {
        return direct;
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * log_abs_rational(q).exp()
}

/// Full matrix from the closed form (symmetric by construction).
pub fn h_closed_form(n: usize, r: f64) -> Result<DMatrix<f64>> {
    check_n(n)?;
    if r < 0.0 || !r.is_finite() {
        return arg_err(format!("r must be finite and non-negative, got {r}"));
    }
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = hermite_convolution_closed_form(j, i, r)?;
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_conventions() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(1, -1), BigInt::zero());
        assert_eq!(binom(2, 3), BigInt::zero());
        assert_eq!(binom(-1, -1), BigInt::zero());
        assert_eq!(binom_extended(-1, -1), BigInt::one());
        assert_eq!(binom_extended(-2, -3), BigInt::from(-2));
        assert_eq!(binom_extended(-3, -2), BigInt::zero());
        assert_eq!(binom_extended(-1, 3), BigInt::from(-1));
        assert_eq!(binom_extended(4, 2), BigInt::from(6));
    }

    #[test]
    fn exact_laguerre_matches_float_recurrence() {
        let x = 1.7;
        let exact = laguerre_exact_row(12, &rational(x).unwrap());
        let float = crate::specfun::laguerre_poly_row(12, x);
        for (e, f) in exact.iter().zip(&float) {
            assert!((to_f64(e) - f).abs() < 1e-12);
        }
    }

    #[test]
    fn dyadic_exponential() {
        for &q in &[0.0, 1e-9, 0.3, 1.0, 7.5, 60.0] {
            let v = to_f64(&exp_neg_half(&rational(q).unwrap(), 200));
            assert!((v - (-0.5 * q).exp()).abs() <= 2.0 * f64::EPSILON * v, "q={q}: {v}");
        }
    }

    #[test]
    fn exact_determinant() {
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let m = vec![vec![q(0, 1), q(2, 1)], vec![q(3, 1), q(1, 2)]];
        assert_eq!(det_exact(m), q(-6, 1));
        let sing = vec![vec![q(1, 3), q(2, 3)], vec![q(1, 1), q(2, 1)]];
        assert_eq!(det_exact(sing), q(0, 1));
    }

    #[test]
    fn tail_routes_scalar_case() {
        // N = 1: det(I − H̃) = 1 − e^{−x/2}, det(I − L − R1⊗R2) = (1 − e^{−x/2})²
        let x = 1e-3;
        let xr = rational(x).unwrap();
        let a = to_f64_robust(&det_i_minus_htilde_exact(1, &xr));
        let b = to_f64_robust(&det_loe_side_exact(1, &xr));
        let want = -(-0.5 * x).exp_m1();
        assert!((a - want).abs() < 1e-15 * want);
        assert!((b - want * want).abs() < 1e-15 * want * want);
    }

    #[test]
    fn closed_form_small_cases() {
        let r: f64 = 1.0;
        let e = (-r * r).exp();
        assert!((hermite_convolution_closed_form(0, 0, r).unwrap() - e).abs() < 1e-16);
        assert!((hermite_convolution_closed_form(1, 0, r).unwrap() - 2f64.sqrt() * r * e).abs() < 4e-16);
        assert!((hermite_convolution_closed_form(1, 1, r).unwrap() - e * (2.0 * r * r - 1.0)).abs() < 4e-16);
        // r = 0: (−1)^n δ_nm
        assert_eq!(hermite_convolution_closed_form(3, 3, 0.0).unwrap(), -1.0);
        assert_eq!(hermite_convolution_closed_form(3, 1, 0.0).unwrap(), 0.0);
    }
}
