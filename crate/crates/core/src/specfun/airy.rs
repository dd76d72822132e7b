use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Supported accuracy domain of [`airy_ai`].
pub const AIRY_DOMAIN: (f64, f64) = (-12.0, 40.0);
/// Series/asymptotic crossover in `|x|`.
pub const AIRY_SWITCH: f64 = 7.0;

// Ai(0) = 3^{-2/3}/Γ(2/3) and -Ai'(0) = 3^{-1/3}/Γ(1/3)
const C1: f64 = 0.355_028_053_887_817_24;
const C2: f64 = 0.258_819_403_792_806_8;

/// Airy function `Ai(x)` on `[-12, 40]`, absolute error below `1e-11`.
pub fn airy_ai(x: f64) -> Result<f64> {
    if !x.is_finite() || x < AIRY_DOMAIN.0 || x > AIRY_DOMAIN.1 {
        return Err(Error::Domain(format!(
            "Ai({x}) requested; supported range is [{}, {}]",
            AIRY_DOMAIN.0, AIRY_DOMAIN.1
        )));
    }
    Ok(ai_unchecked(x))
}

/// Same evaluation without the domain guard. For large positive `x` the
/// asymptotic series only gets better; callers that need Ai in the far right
/// tail (Nyström matrices with large shifts) use this directly.
pub(crate) fn ai_unchecked(x: f64) -> f64 {
    if x.abs() <= AIRY_SWITCH {
        airy_ai_maclaurin(x)
    } else {
        airy_ai_asymptotic(x)
    }
}

/// Maclaurin evaluation `Ai = c1 f(x) − c2 g(x)`, summed to convergence.
pub fn airy_ai_maclaurin(x: f64) -> f64 {
    let x3 = x * x * x;
    let mut f = 1.0;
    let mut g = x;
    let mut tf = 1.0;
    let mut tg = x;
    let mut k = 0.0;
    loop {
        tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
        tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f += tf;
        g += tg;
        k += 1.0;
        if tf.abs() <= 1e-18 * f.abs().max(1e-300) && tg.abs() <= 1e-18 * g.abs().max(1e-300) {
            break;
        }
        if k > 200.0 {
            break;
        }
    }
    C1 * f - C2 * g
}

/// Asymptotic expansion for `|x|` large; exponential decay factored out for
/// `x > 0`, oscillatory form for `x < 0`. Terms are summed until they stop
/// decreasing (optimal truncation).
pub fn airy_ai_asymptotic(x: f64) -> f64 {
    let z = x.abs();
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let u = asymptotic_coefficients();
    if x > 0.0 {
        let mut sum: f64 = 0.0;
        let mut pow = 1.0;
        let mut last = f64::INFINITY;
        for (k, uk) in u.iter().enumerate() {
            let t = uk * pow;
            if t.abs() > last || t.abs() < 1e-18 * sum.abs() {
                break;
            }
            sum += if k % 2 == 0 { t } else { -t };
            last = t.abs();
            pow /= zeta;
        }
        (-zeta).exp() * sum / (2.0 * PI.sqrt() * z.powf(0.25))
    } else {
        // P = Σ (-1)^k u_{2k} ζ^{-2k},  Q = Σ (-1)^k u_{2k+1} ζ^{-2k-1}
        let mut p = 0.0;
        let mut q = 0.0;
        let mut pow = 1.0;
        let mut last = f64::INFINITY;
        for (k, uk) in u.iter().enumerate() {
            let t = uk * pow;
            if t.abs() > last || t.abs() < 1e-18 {
                break;
            }
            last = t.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                p += sign * t;
            } else {
                q += sign * t;
            }
            pow /= zeta;
        }
        let th = zeta + 0.25 * PI;
        (th.sin() * p - th.cos() * q) / (PI.sqrt() * z.powf(0.25))
    }
}

fn asymptotic_coefficients() -> [f64; 60] {
    let mut u = [0.0; 60];
    u[0] = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}
