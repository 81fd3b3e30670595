//! Per-mode coupling functions
//!
//! `F^μ_mn,ij(z) = ∫ dk W(ω) E^μ_i(p2; k) E^μ*_j(p1; k) e^{ikz}`
//!
//! with `W = 1` (strict tight-confinement limit) or `W = ω/(ω + E_e)`.
//! Closed forms: TM couplings are pure exponentials `e^{-k_mn z}`, TE
//! couplings are proportional to `K0(k_mn z)`. The quadrature path evaluates
//! the same Fourier integrals numerically, either along the real axis after
//! removing the non-decaying constant (whose transform is supported at
//! `z = 0`) or along the branch cut `k ∈ [i k_mn, i∞)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_k0;
use crate::error::{Error, Result};
use crate::modes::{
    cutoff_wavenumber, te_profile_real, Geometry, ModeIndex, ModeTrig, Normalization, Polarization, TransversePoint,
};
use crate::quadrature::{integrate, oscillatory_half_line, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'x' => Some(Axis::X),
            'y' => Some(Axis::Y),
            'z' => Some(Axis::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Dipole projections `(i, j)`: `i` belongs to the dipole at `p2`, `j` to the
/// dipole at `p1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientationPair {
    pub i: Axis,
    pub j: Axis,
}

impl OrientationPair {
    pub fn new(i: Axis, j: Axis) -> Self {
        Self { i, j }
    }

    pub fn all() -> impl Iterator<Item = OrientationPair> {
        Axis::ALL
            .into_iter()
            .flat_map(|i| Axis::ALL.into_iter().map(move |j| OrientationPair { i, j }))
    }

    pub fn swapped(self) -> Self {
        Self { i: self.j, j: self.i }
    }

    /// True for `xz, zx, yz, zy`: the Fourier integrand is odd in `k`, so
    /// exchanging the dipoles (which reverses `z`) flips the sign.
    pub fn is_mixed_longitudinal(self) -> bool {
        (self.i == Axis::Z) != (self.j == Axis::Z)
    }
}

impl fmt::Display for OrientationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i, self.j)
    }
}

impl FromStr for OrientationPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (
            chars.next().and_then(Axis::from_char),
            chars.next().and_then(Axis::from_char),
            chars.next(),
        ) {
            (Some(i), Some(j), None) => Ok(Self { i, j }),
            _ => Err(Error::InvalidInput(format!(
                "orientation must be two of x, y, z, got '{s}'"
            ))),
        }
    }
}

/// Sign convention for TM couplings whose integrand does not decay or is odd
/// in `k`.
///
/// `OracleConsistent` uses the regularized Fourier transforms
/// (`∫ u²/(u²+1) e^{iuζ} du = -π e^{-ζ}` for ζ > 0), which reproduces the
/// near-field tensor `diag(-1/2, -1/2, 1)/z³`. `PaperLiteral` evaluates the
/// printed closed forms verbatim (positive xx/yy, symmetric mixed terms).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TmSign {
    PaperLiteral,
    #[default]
    OracleConsistent,
}

/// Prefactor of the TE closed form: `+1` as printed, or `-2` as produced by
/// the contour integral `I ≈ -2 u_e K0(ζ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TeFactor {
    PaperLiteral,
    #[default]
    DerivationConsistent,
}

impl TeFactor {
    pub fn multiplier(self) -> f64 {
        match self {
            TeFactor::PaperLiteral => 1.0,
            TeFactor::DerivationConsistent => -2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingValue {
    pub value: f64,
    pub mode: ModeIndex,
    pub orientation: OrientationPair,
    pub method: CouplingMethod,
    /// Absolute error estimate; zero for closed forms.
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regularization {
    RealAxisSubtracted,
    #[default]
    BranchCutRotated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub scheme: Regularization,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Regularization::BranchCutRotated,
            rel_tol: 1e-9,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(scheme: Regularization, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            scheme,
            rel_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-3) {
            return Err(Error::InvalidInput(format!(
                "quadrature tolerance must lie in (0, 1e-3], got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidInput("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

fn check_z(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "axial separation must be > 0 (closed forms hold for separated dipoles), got {z}"
        )))
    }
}

fn require(mode: &ModeIndex, pol: Polarization) -> Result<()> {
    if mode.polarization() == pol {
        Ok(())
    } else {
        Err(Error::InvalidMode(format!("{mode}: expected a {pol} mode")))
    }
}

/// Closed-form TM coupling.
pub fn f_tm_closed(
    geom: &Geometry,
    mode: &ModeIndex,
    orient: OrientationPair,
    p1: &TransversePoint,
    p2: &TransversePoint,
    z: f64,
    sign: TmSign,
) -> Result<CouplingValue> {
    require(mode, Polarization::TM)?;
    check_z(z)?;
    geom.point(p1.x, p1.y)?;
    geom.point(p2.x, p2.y)?;
    let kappa = cutoff_wavenumber(geom, mode);
    let t1 = ModeTrig::at(geom, mode, p1);
    let t2 = ModeTrig::at(geom, mode, p2);
    Ok(CouplingValue {
        value: tm_closed_value(geom, mode, kappa, orient, &t1, &t2, z, sign),
        mode: *mode,
        orientation: orient,
        method: CouplingMethod::ClosedForm,
        error: 0.0,
    })
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn tm_closed_value(
    geom: &Geometry,
    mode: &ModeIndex,
    kappa: f64,
    orient: OrientationPair,
    t1: &ModeTrig,
    t2: &ModeTrig,
    z: f64,
    sign: TmSign,
) -> f64 {
    use Axis::*;
    let area = geom.area();
    let decay = (-kappa * z).exp();
    let base = 4.0 * PI / area * decay;
    match sign {
        TmSign::OracleConsistent => match (orient.i, orient.j) {
            (Z, Z) => base * kappa * t2.s * t1.s,
            (X, X) => -base * t2.cx * t1.cx / kappa,
            (Y, Y) => -base * t2.cy * t1.cy / kappa,
            (X, Y) => -base * t2.cx * t1.cy / kappa,
            (Y, X) => -base * t2.cy * t1.cx / kappa,
            (X, Z) => -base * t2.cx * t1.s,
            (Y, Z) => -base * t2.cy * t1.s,
            (Z, X) => base * t2.s * t1.cx,
            (Z, Y) => base * t2.s * t1.cy,
        },
        TmSign::PaperLiteral => {
            let m = mode.m() as f64;
            let n = mode.n() as f64;
            let xy = -PI * PI / (2.0 * area * area * kappa) * 4.0 * decay;
            let xz = -4.0 * PI * PI * m / (area * geom.a()) * decay;
            let yz = -4.0 * PI * PI * n / (area * geom.b()) * decay;
            match (orient.i, orient.j) {
                (Z, Z) => base * kappa * t2.s * t1.s,
                (X, X) => base * t2.cx * t1.cx / kappa,
                (Y, Y) => base * t2.cy * t1.cy / kappa,
                (X, Y) => xy * t2.cs * t1.sc,
                (Y, X) => xy * t2.sc * t1.cs,
                (X, Z) => xz * t2.cs * t1.s,
                (Z, X) => xz * t2.s * t1.cs,
                (Y, Z) => yz * t2.sc * t1.s,
                (Z, Y) => yz * t2.s * t1.sc,
            }
        }
    }
}

/// Closed-form TE coupling `c·E_i(p2) E_j(p1) E_e K0(k_mn z)` with
/// `c = 1` or `c = -2` (see [`TeFactor`]). Orientations involving `z`
/// vanish identically.
#[allow(clippy::too_many_arguments)]
pub fn f_te_closed(
    geom: &Geometry,
    mode: &ModeIndex,
    orient: OrientationPair,
    p1: &TransversePoint,
    p2: &TransversePoint,
    z: f64,
    energy: f64,
    factor: TeFactor,
    normalization: Normalization,
) -> Result<CouplingValue> {
    require(mode, Polarization::TE)?;
    check_z(z)?;
    if !(energy > 0.0) {
        return Err(Error::InvalidInput(format!(
            "transition energy must be > 0, got {energy}"
        )));
    }
    geom.point(p1.x, p1.y)?;
    geom.point(p2.x, p2.y)?;
    let kappa = cutoff_wavenumber(geom, mode);
    let ue = energy / kappa;
    if ue > 0.1 {
        log::warn!("{mode}: u_e = E_e/k_mn = {ue:.3} is not small; the K0 form is a tight-confinement approximation");
    }
    let e1 = te_profile_real(geom, mode, p1, normalization);
    let e2 = te_profile_real(geom, mode, p2, normalization);
    let value = match (orient.i, orient.j) {
        (Axis::Z, _) | (_, Axis::Z) => 0.0,
        (i, j) => factor.multiplier() * e2[i.index()] * e1[j.index()] * energy * bessel_k0(kappa * z)?,
    };
    Ok(CouplingValue {
        value,
        mode: *mode,
        orientation: orient,
        method: CouplingMethod::ClosedForm,
        error: 0.0,
    })
}

/// Analytic structure of the k-integrand of one coupling.
///
/// With `k = κu` and `ω = κs`, `s = sqrt(u² + 1)`,
///
/// `F = κ ∫ du W(s) [α/s² + β u/s² + γ u²/s² + δ] e^{iζu}`,  `ζ = κz`,
///
/// where the coefficients absorb transverse profile values at both points.
/// Linear in its coefficients, so dipole contractions are sums of these.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Kernel {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl Kernel {
    /// Per-axis analytic coefficients `c_axis` of `E(u, s)` for TM modes:
    /// transverse axes carry `u/s`, the z axis carries `1/s`.
    fn tm_axis(t: &ModeTrig, kappa: f64, norm: f64, axis: Axis) -> Complex64 {
        match axis {
            Axis::X => Complex64::new(0.0, norm * t.cx / kappa),
            Axis::Y => Complex64::new(0.0, norm * t.cy / kappa),
            Axis::Z => Complex64::new(norm * t.s, 0.0),
        }
    }

    pub fn for_mode(
        geom: &Geometry,
        mode: &ModeIndex,
        orient: OrientationPair,
        p1: &TransversePoint,
        p2: &TransversePoint,
        normalization: Normalization,
    ) -> Self {
        let mut k = Kernel::default();
        match mode.polarization() {
            Polarization::TM => {
                let kappa = cutoff_wavenumber(geom, mode);
                let norm = 2.0 / geom.area().sqrt();
                let t1 = ModeTrig::at(geom, mode, p1);
                let t2 = ModeTrig::at(geom, mode, p2);
                // Conjugation acts on the explicit i of the p1 factor only.
                let c = Self::tm_axis(&t2, kappa, norm, orient.i) * Self::tm_axis(&t1, kappa, norm, orient.j).conj();
                match (orient.i == Axis::Z, orient.j == Axis::Z) {
                    (true, true) => k.alpha = c,
                    (false, false) => k.gamma = c,
                    _ => k.beta = c,
                }
            }
            Polarization::TE => {
                if orient.i != Axis::Z && orient.j != Axis::Z {
                    let e1 = te_profile_real(geom, mode, p1, normalization);
                    let e2 = te_profile_real(geom, mode, p2, normalization);
                    k.delta = Complex64::new(e2[orient.i.index()] * e1[orient.j.index()], 0.0);
                }
            }
        }
        k
    }

    pub fn is_zero(&self) -> bool {
        self.alpha == Complex64::default()
            && self.beta == Complex64::default()
            && self.gamma == Complex64::default()
            && self.delta == Complex64::default()
    }

    /// Bracket `[α/s² + βu/s² + γu²/s² + δ]` at complex `(u, s)`.
    pub fn bracket(&self, u: Complex64, s: Complex64) -> Complex64 {
        let inv = 1.0 / (s * s);
        (self.alpha + self.beta * u + self.gamma * u * u) * inv + self.delta
    }

    /// `bracket − asymptote` without cancellation, using `u² = s² − 1`.
    pub fn bracket_minus_asymptote(&self, u: Complex64, s: Complex64) -> Complex64 {
        (self.alpha + self.beta * u - self.gamma) / (s * s)
    }

    /// Exact transform with `W = 1`: residue at `u = i`; the constant part
    /// is supported at `z = 0` and dropped.
    pub fn pole_value(&self, zeta: f64) -> Complex64 {
        PI * (-zeta).exp() * (self.alpha + Complex64::i() * self.beta - self.gamma)
    }
}

/// Panel boundaries in θ for branch-cut integrals: features of width `u`
/// near `t ≈ u` get a geometric ladder of panels, which adaptive bisection
/// from a wide panel would not resolve.
pub(crate) fn cut_breakpoints(scales: &[f64], theta_max: f64) -> Vec<f64> {
    let mut b = vec![0.0, theta_max];
    for &u in scales {
        let mut t = 0.5 * u;
        while t < theta_max {
            b.push(t.asinh());
            t *= 8.0;
        }
    }
    b.retain(|x| *x <= theta_max);
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// `∫_{-∞}^{∞} du W [bracket] e^{iζu}` along the real axis, with the
/// asymptotic constant removed.
pub(crate) fn real_axis_transform(
    kernel: &Kernel,
    zeta: f64,
    ue: Option<f64>,
    rel_tol: f64,
) -> Result<(Complex64, f64)> {
    let g = |u: f64| {
        let uc = Complex64::new(u, 0.0);
        let s = Complex64::new(u.hypot(1.0), 0.0);
        // (W − 1)·bracket + (bracket − asymptote), both without cancellation
        let w_minus_one = match ue {
            Some(ue) => -ue / (s + ue),
            None => Complex64::default(),
        };
        w_minus_one * kernel.bracket(uc, s) + kernel.bracket_minus_asymptote(uc, s)
    };
    let (v, err) = oscillatory_half_line(
        |u| {
            let phase = Complex64::from_polar(1.0, zeta * u);
            let h = g(u) * phase + g(-u) * phase.conj();
            [h.re, h.im]
        },
        zeta,
        rel_tol,
        4000,
    )?;
    Ok((Complex64::new(v[0], v[1]), err))
}

/// Same transform deformed onto the branch cut `u = iv, v ≥ 1`:
/// `i ∫_1^∞ [f(iv, +it) − f(iv, −it)] e^{-ζv} dv`, `t = sqrt(v² − 1)`.
/// Requires `ue` to be present; without the energy weight the kernel is
/// meromorphic and the transform is the pole residue.
pub(crate) fn branch_cut_transform(
    kernel: &Kernel,
    zeta: f64,
    ue: Option<f64>,
    tol: Tolerance,
) -> Result<(Complex64, f64)> {
    let Some(ue) = ue else {
        return Ok((kernel.pole_value(zeta), 0.0));
    };
    // v = cosh θ, t = sinh θ, dv = t dθ; the integrand is scaled by e^{ζ}.
    let f = |theta: f64| {
        let t = theta.sinh();
        let v = theta.cosh();
        let u = Complex64::new(0.0, v);
        let sp = Complex64::new(0.0, t);
        // The bracket depends on s only through s², so the jump is carried by
        // W(it) − W(−it) = 2i u_e t/(u_e² + t²).
        let jump = kernel.bracket(u, sp) * Complex64::new(0.0, 2.0 * ue * t / (ue * ue + t * t));
        let val = Complex64::i() * jump * (-zeta * (v - 1.0)).exp() * t;
        [val.re, val.im]
    };
    let theta_max = (1.0 + 60.0 / zeta).acosh();
    let mut value = [0.0; 2];
    let mut err = 0.0;
    for w in cut_breakpoints(&[ue], theta_max).windows(2) {
        let est = integrate(f, w[0], w[1], tol)?;
        value[0] += est.value[0];
        value[1] += est.value[1];
        err += est.error;
    }
    let scale = (-zeta).exp();
    Ok((Complex64::new(value[0], value[1]) * scale, err * scale))
}

/// Numerical evaluation of `F^μ_mn,ij(z)`.
///
/// `energy` is the transition energy `E_e` (natural units); it enters only
/// through the weight `ω/(ω + E_e)` when `include_energy_factor` is set.
/// Without the weight, TE couplings vanish for every `z > 0`.
#[allow(clippy::too_many_arguments)]
pub fn f_quadrature(
    geom: &Geometry,
    mode: &ModeIndex,
    orient: OrientationPair,
    p1: &TransversePoint,
    p2: &TransversePoint,
    z: f64,
    energy: f64,
    include_energy_factor: bool,
    normalization: Normalization,
    spec: &QuadratureSpec,
) -> Result<CouplingValue> {
    check_z(z)?;
    spec.validate()?;
    geom.point(p1.x, p1.y)?;
    geom.point(p2.x, p2.y)?;
    if include_energy_factor && !(energy > 0.0) {
        return Err(Error::InvalidInput(format!(
            "transition energy must be > 0, got {energy}"
        )));
    }
    let kappa = cutoff_wavenumber(geom, mode);
    let kernel = Kernel::for_mode(geom, mode, orient, p1, p2, normalization);
    let ue = include_energy_factor.then_some(energy / kappa);
    let zeta = kappa * z;
    let (v, err) = if kernel.is_zero() {
        (Complex64::default(), 0.0)
    } else {
        match spec.scheme {
            Regularization::RealAxisSubtracted => real_axis_transform(&kernel, zeta, ue, spec.rel_tol)?,
            Regularization::BranchCutRotated => branch_cut_transform(
                &kernel,
                zeta,
                ue,
                Tolerance {
                    abs: 0.0,
                    rel: spec.rel_tol * 0.1,
                    max_subdivisions: spec.max_subdivisions,
                },
            )?,
        }
    };
    Ok(CouplingValue {
        value: kappa * v.re,
        mode: *mode,
        orientation: orient,
        method: CouplingMethod::Quadrature,
        error: kappa * (err + v.im.abs()),
    })
}
