//! Small-separation machinery for a square guide with centered dipoles.
//!
//! At the center only TM modes with both indices odd feed `F_zz`, so
//! `F_zz = (4π²/a³) F̄_zz` with `F̄_zz = Σ_{m,n odd} r e^{-π r z/a}`,
//! `r = sqrt(m² + n²)`. Replacing the sum by a quarter-plane integral (one
//! lattice point per 4 units of area) gives `F̄_zz ≈ 1/(4π² (z/a)³)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bessel::{bessel_k0, k0_small_argument};
use crate::energy::{
    dipole_moment_matrix, dispersion_energy, quartic_contraction, ModeSelection, PairConfiguration, Tensor3,
};
use crate::error::{Error, Result};
use crate::fit::linear_fit;
use crate::species::DipoleSpecies;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn first(self) -> u64 {
        match self {
            Parity::Odd => 1,
            Parity::Even => 2,
        }
    }
}

/// Which centered lattice sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumKind {
    /// `Σ r e^{-πrz}`, m odd, n odd
    Zz,
    /// `Σ m²/r e^{-πrz}`, m even, n odd
    Xx,
    /// `Σ n²/r e^{-πrz}`, m odd, n even
    Yy,
}

impl SumKind {
    fn parities(self) -> (Parity, Parity) {
        match self {
            SumKind::Zz => (Parity::Odd, Parity::Odd),
            SumKind::Xx => (Parity::Even, Parity::Odd),
            SumKind::Yy => (Parity::Odd, Parity::Even),
        }
    }

    fn term(self, m: f64, n: f64, c: f64) -> f64 {
        let r = m.hypot(n);
        let e = (-c * r).exp();
        match self {
            SumKind::Zz => r * e,
            SumKind::Xx => m * m / r * e,
            SumKind::Yy => n * n / r * e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumSpec {
    pub z_over_a: f64,
    pub kind: SumKind,
    pub max_index: u64,
    pub tol: f64,
}

impl SumSpec {
    pub fn new(z_over_a: f64, kind: SumKind) -> Result<Self> {
        let s = Self {
            z_over_a,
            kind,
            max_index: 200_000,
            tol: 1e-12,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn zz(z_over_a: f64) -> Result<Self> {
        Self::new(z_over_a, SumKind::Zz)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_over_a > 0.0 && self.z_over_a.is_finite()) {
            return Err(Error::InvalidInput(format!("z/a must be > 0, got {}", self.z_over_a)));
        }
        if self.max_index < 1 {
            return Err(Error::InvalidInput("max index must be >= 1".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance must be in (0, 1), got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeSum {
    pub value: f64,
    /// Certified bound on the omitted terms.
    pub tail: f64,
    pub max_index: u64,
}

/// Bound on all terms with `max(m, n) > big` via the quarter-plane
/// integral of `ρ e^{-cρ}` beyond `ρ = big − 1`.
fn square_tail(big: u64, c: f64) -> f64 {
    let r = big as f64 - 1.0;
    if r < 2.0 / c {
        return f64::INFINITY;
    }
    PI / 2.0 * (-c * r).exp() * (r * r / c + 2.0 * r / (c * c) + 2.0 / (c * c * c))
}

/// Terms with `lo < max(m, n) <= hi` in fixed order.
fn shell(kind: SumKind, c: f64, lo: u64, hi: u64) -> f64 {
    let (pm, pn) = kind.parities();
    let mut total = 0.0;
    let mut m = pm.first();
    while m <= hi {
        let mut row = 0.0;
        let mut n = pn.first();
        while n <= hi {
            if m > lo || n > lo {
                row += kind.term(m as f64, n as f64, c);
            }
            n += 2;
        }
        total += row;
        m += 2;
    }
    total
}

/// Direct lattice sum with a certified tail.
pub fn lattice_sum(spec: &SumSpec) -> Result<LatticeSum> {
    spec.validate()?;
    let c = PI * spec.z_over_a;
    let mut big = ((10.0 / c).ceil() as u64 + 2).min(spec.max_index);
    let mut value = shell(spec.kind, c, 0, big);
    loop {
        let tail = square_tail(big, c);
        if tail <= spec.tol * value.abs() {
            return Ok(LatticeSum {
                value,
                tail,
                max_index: big,
            });
        }
        if big >= spec.max_index {
            return Err(Error::SeriesNotConverged {
                partial: value,
                bound: tail,
                max_index: big as usize,
            });
        }
        let next = ((big as f64 * 1.5).ceil() as u64).min(spec.max_index);
        value += shell(spec.kind, c, big, next);
        big = next;
    }
}

/// `F̄_zz` by direct summation.
pub fn fbar_zz_direct(spec: &SumSpec) -> Result<f64> {
    if spec.kind != SumKind::Zz {
        return Err(Error::InvalidInput("fbar_zz_direct needs the zz sum kind".into()));
    }
    lattice_sum(spec).map(|s| s.value)
}

/// Integral approximation `1/(4π² (z/a)³)`.
pub fn fbar_zz_integral(z_over_a: f64) -> f64 {
    1.0 / (4.0 * PI * PI * z_over_a.powi(3))
}

/// Integral approximation of the xx (or yy) sum, `1/(8π² (z/a)³)`.
pub fn fbar_xx_integral(z_over_a: f64) -> f64 {
    1.0 / (8.0 * PI * PI * z_over_a.powi(3))
}

/// Centered small-z coupling tensor `diag(-1/2, -1/2, 1)/z³`.
pub fn smallz_f_components(z: f64) -> Tensor3 {
    let f = 1.0 / z.powi(3);
    Tensor3([[-0.5 * f, 0.0, 0.0], [0.0, -0.5 * f, 0.0], [0.0, 0.0, f]])
}

/// Centered coupling tensor built from the direct lattice sums,
/// `F_zz = (4π²/a³) F̄_zz`, `F_xx = -(4π²/a³) F̄_xx`.
pub fn smallz_tensor_from_sums(z: f64, a: f64) -> Result<Tensor3> {
    let za = z / a;
    let pref = 4.0 * PI * PI / a.powi(3);
    let zz = lattice_sum(&SumSpec::new(za, SumKind::Zz)?)?.value;
    let xx = lattice_sum(&SumSpec::new(za, SumKind::Xx)?)?.value;
    let yy = lattice_sum(&SumSpec::new(za, SumKind::Yy)?)?.value;
    Ok(Tensor3([
        [-pref * xx, 0.0, 0.0],
        [0.0, -pref * yy, 0.0],
        [0.0, 0.0, pref * zz],
    ]))
}

/// Energy from the small-z tensor inserted into the mode-sum energy
/// expression, each species averaged per its orientation model.
pub fn u_vdw_smallz(s1: &DipoleSpecies, s2: &DipoleSpecies, z: f64, permittivity: f64) -> f64 {
    let f = smallz_f_components(z);
    let mut total = 0.0;
    for l1 in s1.transitions() {
        let d1 = dipole_moment_matrix(l1, s1.orientation());
        for l2 in s2.transitions() {
            let d2 = dipole_moment_matrix(l2, s2.orientation());
            total += quartic_contraction(&d2, &d1, &f, &f) / (l1.energy() + l2.energy());
        }
    }
    -total / (4.0 * PI * PI * permittivity * permittivity)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig4Point {
    pub z_over_a: f64,
    pub direct: f64,
    pub integral: f64,
    pub relative_deviation: f64,
}

/// Direct sum vs integral approximation on `points` log-spaced values of
/// `z/a ∈ [lo, hi]`.
pub fn fig4_data(lo: f64, hi: f64, points: usize) -> Result<Vec<Fig4Point>> {
    if !(lo > 0.0 && hi > lo) || points < 2 {
        return Err(Error::InvalidInput(
            "fig4 grid needs 0 < lo < hi and at least 2 points".into(),
        ));
    }
    (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            let za = (lo.ln() + t * (hi.ln() - lo.ln())).exp();
            fig4_point(za)
        })
        .collect()
}

pub fn fig4_point(z_over_a: f64) -> Result<Fig4Point> {
    let direct = fbar_zz_direct(&SumSpec::zz(z_over_a)?)?;
    let integral = fbar_zz_integral(z_over_a);
    Ok(Fig4Point {
        z_over_a,
        direct,
        integral,
        relative_deviation: (direct - integral).abs() / direct,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct K0ExpansionCheck {
    pub argument: f64,
    pub expansion: f64,
    pub exact: f64,
}

/// Small-argument expansion `-ln(z/a) - ln(k a) + ln 2 - γ` of
/// `K0(k z)` against the exact value.
pub fn k0_expansion_check(k: f64, z: f64, a: f64) -> Result<K0ExpansionCheck> {
    let x = k * z;
    let expansion = -(z / a).ln() - (k * a).ln() + 2f64.ln() - crate::bessel::EULER_GAMMA;
    debug_assert!((expansion - k0_small_argument(x)).abs() < 1e-12 * expansion.abs().max(1.0));
    Ok(K0ExpansionCheck {
        argument: x,
        expansion,
        exact: bessel_k0(x)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TeAggregate {
    pub z_over_a: f64,
    /// `Σ_TE E_x(center)² K0(k z)` for a unit square guide, unit-normalized
    /// modes, without the energy/convention prefactor.
    pub value: f64,
    /// `-ln(z/a)/(z/a)`, the printed aggregate estimate up to a constant.
    pub log_estimate: f64,
}

/// TE aggregate at the center of a unit square guide. Modes with
/// `K0` argument beyond 40 are dropped (relative effect below 1e-15).
pub fn te_aggregate(z_over_a: f64) -> Result<TeAggregate> {
    if !(z_over_a > 0.0 && z_over_a < 0.3) {
        return Err(Error::InvalidInput(format!(
            "TE small-z diagnostic needs 0 < z/a < 0.3, got {z_over_a}"
        )));
    }
    let c = PI * z_over_a;
    let r_max = 40.0 / c;
    let big = r_max.ceil() as u64;
    let mut total = 0.0;
    // E_x(center) ≠ 0 needs m even (including 0) and n odd;
    // E_x² = (4/κ²)(nπ)² (/2 if m = 0) for a = b = 1.
    let mut m = 0u64;
    while m <= big {
        let mut row = 0.0;
        let mut n = 1u64;
        while n <= big {
            let r = (m as f64).hypot(n as f64);
            if r > r_max {
                break;
            }
            let neumann = if m == 0 { 0.5 } else { 1.0 };
            let ex2 = 4.0 * (n * n) as f64 / (r * r) * neumann;
            row += ex2 * bessel_k0(c * r)?;
            n += 2;
        }
        total += row;
        m += 2;
    }
    Ok(TeAggregate {
        z_over_a,
        value: total,
        log_estimate: -z_over_a.ln() / z_over_a,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeScaling {
    pub samples: Vec<TeAggregate>,
    /// Slope of ln(aggregate) against ln(z/a).
    pub exponent: f64,
    pub r_squared: f64,
}

/// Local power-law exponent of the TE aggregate over log-spaced `z/a`.
pub fn te_smallz_scaling(lo: f64, hi: f64, points: usize) -> Result<TeScaling> {
    if !(lo > 0.0 && hi > lo) || points < 2 {
        return Err(Error::InvalidInput(
            "TE scaling grid needs 0 < lo < hi and at least 2 points".into(),
        ));
    }
    let samples = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            te_aggregate((lo.ln() + t * (hi.ln() - lo.ln())).exp())
        })
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = samples.iter().map(|s| s.z_over_a.ln()).collect();
    let y: Vec<f64> = samples.iter().map(|s| s.value.ln()).collect();
    let fit = linear_fit(&x, &y).ok_or_else(|| Error::InvalidInput("degenerate fit".into()))?;
    Ok(TeScaling {
        samples,
        exponent: fit.slope,
        r_squared: fit.r_squared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizationSplit {
    /// Energy with TM modes only.
    pub tm: f64,
    /// Energy with TE modes only.
    pub te: f64,
}

/// Energies from TM-only and TE-only mode sums of the same configuration.
pub fn polarization_split(config: &PairConfiguration) -> Result<PolarizationSplit> {
    let only = |p| {
        let mut c = config.clone();
        c.modes = ModeSelection::Only(p);
        dispersion_energy(&c).map(|b| b.total)
    };
    Ok(PolarizationSplit {
        tm: only(crate::modes::Polarization::TM)?,
        te: only(crate::modes::Polarization::TE)?,
    })
}
