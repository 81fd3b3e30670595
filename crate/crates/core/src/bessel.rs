//! Modified Bessel function of the second kind, order zero.
//!
//! Power series for `x <= 2` and Steed's continued fraction (Temme's CF2
//! variant for `K_ν`, here with `ν = 0`) above. Both branches hold relative
//! accuracy near machine precision over `[1e-6, 700]`.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

const SERIES_LIMIT: f64 = 2.0;

/// `K0(x)` for `x > 0`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= SERIES_LIMIT {
        k0_series(x)
    } else {
        k0_scaled_cf(x) * (-x).exp()
    })
}

/// `K0(x)·e^x` for `x > 0`; finite for arguments where `K0` underflows.
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    check(x)?;
    Ok(if x <= SERIES_LIMIT {
        k0_series(x) * x.exp()
    } else {
        k0_scaled_cf(x)
    })
}

/// Leading small-argument form `-ln(x/2) - γ`.
pub fn k0_small_argument(x: f64) -> f64 {
    -(0.5 * x).ln() - EULER_GAMMA
}

/// Leading large-argument form `sqrt(π/(2x))·e^{-x}`. It is also an upper
/// bound on `K0(x)` for every `x > 0`.
pub fn k0_large_argument(x: f64) -> f64 {
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp()
}

fn check(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "K0 requires a finite positive argument, got {x}"
        )))
    }
}

fn k0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    for k in 1..60 {
        let kf = k as f64;
        term *= q / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term * harmonic < 1e-18 * tail.abs().max(1.0) {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

fn k0_scaled_cf(x: f64) -> f64 {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON * 0.5 {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() / s
}
