//! Adaptive Gauss-Kronrod quadrature, Wynn epsilon acceleration and helpers
//! for oscillatory half-line integrals.
//!
//! The integrators work on fixed-size vectors `[f64; N]` so that several
//! integrands sharing one set of abscissae (tensor components, real and
//! imaginary parts) are resolved together. Error control uses the max norm.

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, ..., 9.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and subdivision budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            max_subdivisions: 2000,
        }
    }

    pub fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_subdivisions: 2000,
        }
    }

    fn target(&self, value_norm: f64) -> f64 {
        self.abs.max(self.rel * value_norm)
    }
}

fn norm<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn add_assign<const N: usize>(acc: &mut [f64; N], v: &[f64; N]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: f64,
}

fn gauss_kronrod<const N: usize, F>(f: &mut F, lo: f64, hi: f64) -> Panel<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];

    let fc = f(center);
    for c in 0..N {
        kronrod[c] = WGK[10] * fc[c];
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        for c in 0..N {
            let s = f1[c] + f2[c];
            kronrod[c] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * s;
            }
        }
    }

    let mut value = [0.0; N];
    let mut error = 0.0_f64;
    for c in 0..N {
        value[c] = kronrod[c] * half;
        // Raw Gauss/Kronrod difference, floored at round-off level.
        let diff = ((kronrod[c] - gauss[c]) * half).abs();
        let floor = 50.0 * f64::EPSILON * value[c].abs();
        error = error.max(diff.max(floor));
    }
    Panel { lo, hi, value, error }
}

/// Globally adaptive integration of a vector-valued function over `[lo, hi]`.
///
/// Bisects the panel with the largest error estimate until the summed error
/// drops below the tolerance. On budget exhaustion returns
/// [`Error::Quadrature`] carrying the best estimate (first component) and
/// the achieved error.
pub fn integrate<const N: usize, F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<Estimate<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    if lo == hi {
        return Ok(Estimate {
            value: [0.0; N],
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut panels = vec![gauss_kronrod(&mut f, lo, hi)];
    let mut evaluations = 21;
    loop {
        let mut total = [0.0; N];
        let mut err = 0.0;
        let mut magnitude = 0.0;
        for p in &panels {
            add_assign(&mut total, &p.value);
            err += p.error;
            magnitude += norm(&p.value);
        }
        let target = tol.target(norm(&total)).max(100.0 * f64::EPSILON * magnitude);
        if err <= target {
            return Ok(Estimate {
                value: total,
                error: err,
                evaluations,
            });
        }
        if panels.len() >= tol.max_subdivisions {
            return Err(Error::Quadrature {
                estimate: total[0],
                achieved: err,
                requested: target,
            });
        }
        let (worst, _) = panels.iter().enumerate().fold(
            (0, -1.0),
            |(bi, be), (i, p)| if p.error > be { (i, p.error) } else { (bi, be) },
        );
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            // Panel cannot be split further in floating point.
            return Err(Error::Quadrature {
                estimate: total[0],
                achieved: err,
                requested: target,
            });
        }
        panels.push(gauss_kronrod(&mut f, p.lo, mid));
        panels.push(gauss_kronrod(&mut f, mid, p.hi));
        evaluations += 42;
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let est = integrate(|x| [f(x)], lo, hi, tol)?;
    Ok((est.value[0], est.error))
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
///
/// Returns the extrapolated limit and an error estimate taken from the
/// difference of the last two diagonal entries.
pub fn wynn_epsilon(partial_sums: &[f64]) -> (f64, f64) {
    let n = partial_sums.len();
    if n == 0 {
        return (0.0, f64::INFINITY);
    }
    if n < 3 {
        let last = partial_sums[n - 1];
        let prev = if n > 1 { partial_sums[n - 2] } else { 0.0 };
        return (last, (last - prev).abs());
    }
    // Columns of the epsilon table; column k has n - k entries.
    let seq = &partial_sums[n.saturating_sub(24)..];
    let mut older: Vec<f64> = vec![0.0; seq.len() + 1];
    let mut col: Vec<f64> = seq.to_vec();
    let mut estimates = vec![*seq.last().unwrap()];
    let mut k = 0;
    while col.len() >= 2 {
        let mut next = Vec::with_capacity(col.len() - 1);
        for i in 0..col.len() - 1 {
            let d = col[i + 1] - col[i];
            if d == 0.0 || !d.is_finite() {
                break;
            }
            next.push(older[i + 1] + 1.0 / d);
        }
        if next.len() != col.len() - 1 {
            break;
        }
        k += 1;
        if k % 2 == 0 {
            estimates.push(*next.last().unwrap());
        }
        older = col;
        col = next;
    }
    let m = estimates.len();
    if m >= 2 {
        (estimates[m - 1], (estimates[m - 1] - estimates[m - 2]).abs())
    } else {
        (estimates[0], (seq[seq.len() - 1] - seq[seq.len() - 2]).abs())
    }
}

/// Oscillatory half-line integral `∫_0^∞ g(u) du` where `g` oscillates with
/// period `2π/omega` and decays (possibly slowly, as 1/u).
///
/// The half-line is cut at multiples of `π/omega`, each piece is integrated
/// adaptively and the sequence of partial sums is extrapolated with the Wynn
/// epsilon algorithm. Real and imaginary parts travel as components 0 and 1.
pub fn oscillatory_half_line<F>(mut g: F, omega: f64, rel_tol: f64, max_pieces: usize) -> Result<([f64; 2], f64)>
where
    F: FnMut(f64) -> [f64; 2],
{
    let h = std::f64::consts::PI / omega;
    let mut piece_tol = Tolerance {
        abs: 0.0,
        rel: rel_tol * 1e-2,
        max_subdivisions: 400,
    };
    let mut partial = [Vec::new(), Vec::new()];
    let mut acc = [0.0; 2];
    let mut quad_err = 0.0;
    let mut last = ([0.0; 2], f64::INFINITY);
    for j in 0..max_pieces {
        let lo = j as f64 * h;
        let est = integrate(&mut g, lo, lo + h, piece_tol)?;
        quad_err += est.error;
        add_assign(&mut acc, &est.value);
        // later pieces only need accuracy relative to the running total
        piece_tol.abs = piece_tol.abs.max(rel_tol * 1e-3 * norm(&acc));
        partial[0].push(acc[0]);
        partial[1].push(acc[1]);
        if j >= 8 {
            let (re, ere) = wynn_epsilon(&partial[0]);
            let (im, eim) = wynn_epsilon(&partial[1]);
            let err = ere.max(eim) + quad_err;
            let scale = re.abs().max(im.abs());
            let stalled = (re - last.0[0]).abs().max((im - last.0[1]).abs());
            last = ([re, im], err.max(stalled));
            if err.max(stalled) <= rel_tol * scale || scale == 0.0 && err == 0.0 {
                return Ok(last);
            }
        }
    }
    let scale = last.0[0].abs().max(last.0[1].abs());
    if last.1 <= 10.0 * rel_tol * scale {
        return Ok(last);
    }
    Err(Error::Quadrature {
        estimate: last.0[0],
        achieved: last.1,
        requested: rel_tol * scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let (v, _) = integrate_scalar(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, Tolerance::relative(1e-14)).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-13, "{v} vs {exact}");
    }

    #[test]
    fn endpoint_singularity_converges() {
        // ∫_0^1 x^{-1/2} dx = 2
        let (v, _) = integrate_scalar(|x| 1.0 / x.sqrt(), 0.0, 1.0, Tolerance::relative(1e-10)).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn lorentzian_at_zero_separation() {
        // ∫_{-∞}^{∞} du / (u² + 1) = π via u = tan θ
        let (v, _) = integrate_scalar(|t| 1.0 + 0.0 * t, -PI / 2.0, PI / 2.0, Tolerance::relative(1e-14)).unwrap();
        assert!((v - PI).abs() < 1e-13);
    }

    #[test]
    fn wynn_accelerates_alternating_harmonic() {
        let mut sums = Vec::new();
        let mut s = 0.0;
        for k in 1..=20 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            sums.push(s);
        }
        let (v, _) = wynn_epsilon(&sums);
        assert!((v - 2f64.ln()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn oscillatory_sine_over_u() {
        // ∫_0^∞ sin(u)/u du = π/2
        let (v, _) =
            oscillatory_half_line(|u| [if u == 0.0 { 1.0 } else { u.sin() / u }, 0.0], 1.0, 1e-10, 400).unwrap();
        assert!((v[0] - PI / 2.0).abs() < 1e-9, "{}", v[0]);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_subdivisions: 3,
        };
        let err = integrate_scalar(|x| (1.0 / x).sin(), 1e-6, 1.0, tol).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
