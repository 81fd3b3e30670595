//! Rectangular hollow waveguide with perfectly conducting walls: geometry,
//! TE/TM mode indices, cutoff spectrum and transverse electric-field
//! profiles.
//!
//! Units are natural (ħ = c = ε = 1); lengths are in whatever unit `a` and
//! `b` are given in, usually `a = 1`.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};

/// Cross-section `[0, a] x [0, b]` of the guide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    a: f64,
    b: f64,
}

impl Geometry {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidGeometry(format!("a must be > 0, got {a}")));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidGeometry(format!("b must be > 0, got {b}")));
        }
        Ok(Self { a, b })
    }

    /// Square guide of side `a`.
    pub fn square(a: f64) -> Result<Self> {
        Self::new(a, a)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn aspect(&self) -> f64 {
        self.b / self.a
    }

    pub fn area(&self) -> f64 {
        self.a * self.b
    }

    pub fn center(&self) -> TransversePoint {
        TransversePoint {
            x: 0.5 * self.a,
            y: 0.5 * self.b,
        }
    }

    /// Validated point of the closed cross-section.
    pub fn point(&self, x: f64, y: f64) -> Result<TransversePoint> {
        if (0.0..=self.a).contains(&x) && (0.0..=self.b).contains(&y) {
            Ok(TransversePoint { x, y })
        } else {
            Err(Error::PointOutside {
                x,
                y,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// Lowest cutoff of any guided mode, `π / max(a, b)`.
    pub fn lowest_cutoff(&self) -> f64 {
        PI / self.a.max(self.b)
    }

    /// Geometry mirrored through the diagonal (a ↔ b).
    pub fn transposed(&self) -> Self {
        Self { a: self.b, b: self.a }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarization {
    // Declaration order is the tie-break order of the mode enumeration.
    TM,
    TE,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::TE => "TE",
            Polarization::TM => "TM",
        })
    }
}

/// A guided mode family `TE_mn` or `TM_mn`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    polarization: Polarization,
    m: u32,
    n: u32,
}

impl ModeIndex {
    pub fn new(polarization: Polarization, m: u32, n: u32) -> Result<Self> {
        match polarization {
            Polarization::TM if m == 0 || n == 0 => {
                Err(Error::InvalidMode(format!("TM{m}{n}: TM modes need m >= 1 and n >= 1")))
            }
            Polarization::TE if m == 0 && n == 0 => Err(Error::InvalidMode("TE00 does not exist".into())),
            _ => Ok(Self { polarization, m, n }),
        }
    }

    pub fn te(m: u32, n: u32) -> Result<Self> {
        Self::new(Polarization::TE, m, n)
    }

    pub fn tm(m: u32, n: u32) -> Result<Self> {
        Self::new(Polarization::TM, m, n)
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_te(&self) -> bool {
        self.polarization == Polarization::TE
    }

    pub fn is_tm(&self) -> bool {
        self.polarization == Polarization::TM
    }

    /// Mode with `m` and `n` exchanged (the partner under a ↔ b).
    pub fn transposed(&self) -> Self {
        Self {
            polarization: self.polarization,
            m: self.n,
            n: self.m,
        }
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m < 10 && self.n < 10 {
            write!(f, "{}{}{}", self.polarization, self.m, self.n)
        } else {
            write!(f, "{}{},{}", self.polarization, self.m, self.n)
        }
    }
}

impl FromStr for ModeIndex {
    type Err = Error;

    /// Accepts `TE10`, `TM11` (single-digit indices) or `TE1,10`, `TM_3_12`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidMode(format!("cannot parse mode '{s}'"));
        if s.len() < 3 || !s.is_char_boundary(2) {
            return Err(bad());
        }
        let pol = match &s[..2].to_ascii_uppercase()[..] {
            "TE" => Polarization::TE,
            "TM" => Polarization::TM,
            _ => return Err(bad()),
        };
        let rest = s[2..].trim_start_matches('_');
        let (m, n) = if let Some((m, n)) = rest.split_once([',', '_']) {
            (m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?)
        } else if rest.len() == 2 && rest.bytes().all(|c| c.is_ascii_digit()) {
            ((rest.as_bytes()[0] - b'0') as u32, (rest.as_bytes()[1] - b'0') as u32)
        } else {
            return Err(bad());
        };
        ModeIndex::new(pol, m, n)
    }
}

/// Point `(x, y)` of the cross-section. Construct through [`Geometry::point`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransversePoint {
    pub x: f64,
    pub y: f64,
}

/// Three complex Cartesian components `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex3Vector(pub [Complex64; 3]);

impl Complex3Vector {
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Normalization of TE modes with a zero index.
///
/// The printed TE profile integrates to 2 over the cross-section when
/// `m = 0` or `n = 0`; `UnitNormalized` restores unit norm with the Neumann
/// factor `1/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    PaperLiteral,
    #[default]
    UnitNormalized,
}

/// `k_mn = sqrt((mπ/a)² + (nπ/b)²)`.
pub fn cutoff_wavenumber(geom: &Geometry, mode: &ModeIndex) -> f64 {
    let kx = mode.m as f64 * PI / geom.a;
    let ky = mode.n as f64 * PI / geom.b;
    kx.hypot(ky)
}

/// `ω = c·sqrt(k_mn² + k²)`.
pub fn mode_frequency(geom: &Geometry, mode: &ModeIndex, k: f64, c: f64) -> f64 {
    c * cutoff_wavenumber(geom, mode).hypot(k)
}

/// Trigonometric building blocks of the profiles at one point.
///
/// `s = sin(mπx/a) sin(nπy/b)`, `cx = (mπ/a) cos(mπx/a) sin(nπy/b)`,
/// `cy = (nπ/b) sin(mπx/a) cos(nπy/b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ModeTrig {
    pub s: f64,
    pub cx: f64,
    pub cy: f64,
    // unscaled cos·sin and sin·cos
    pub cs: f64,
    pub sc: f64,
}

impl ModeTrig {
    pub fn at(geom: &Geometry, mode: &ModeIndex, p: &TransversePoint) -> Self {
        let kx = mode.m as f64 * PI / geom.a;
        let ky = mode.n as f64 * PI / geom.b;
        let (sx, cxx) = (kx * p.x).sin_cos();
        let (sy, cyy) = (ky * p.y).sin_cos();
        Self {
            s: sx * sy,
            cx: kx * cxx * sy,
            cy: ky * sx * cyy,
            cs: cxx * sy,
            sc: sx * cyy,
        }
    }
}

/// Neumann factor applied to TE modes under the given convention.
pub(crate) fn te_neumann(mode: &ModeIndex, conv: Normalization) -> f64 {
    if conv == Normalization::UnitNormalized && (mode.m == 0 || mode.n == 0) {
        FRAC_1_SQRT_2
    } else {
        1.0
    }
}

/// Real TE profile `(E_x, E_y)`; TE modes have no longitudinal component and
/// do not depend on `k`.
pub(crate) fn te_profile_real(geom: &Geometry, mode: &ModeIndex, p: &TransversePoint, conv: Normalization) -> [f64; 2] {
    let kappa = cutoff_wavenumber(geom, mode);
    let t = ModeTrig::at(geom, mode, p);
    let pref = 2.0 / (geom.area().sqrt() * kappa) * te_neumann(mode, conv);
    [
        -pref * (mode.n as f64 * PI / geom.b) * t.cs,
        pref * (mode.m as f64 * PI / geom.a) * t.sc,
    ]
}

/// Transverse electric profile `E^μ_{mnk}(x, y)` (natural units, c = 1).
pub fn transverse_profile(
    geom: &Geometry,
    mode: &ModeIndex,
    k: f64,
    p: &TransversePoint,
    conv: Normalization,
) -> Result<Complex3Vector> {
    geom.point(p.x, p.y)?;
    let zero = Complex64::new(0.0, 0.0);
    Ok(match mode.polarization {
        Polarization::TE => {
            let [ex, ey] = te_profile_real(geom, mode, p, conv);
            Complex3Vector([Complex64::new(ex, 0.0), Complex64::new(ey, 0.0), zero])
        }
        Polarization::TM => {
            let kappa = cutoff_wavenumber(geom, mode);
            let omega = kappa.hypot(k);
            let t = ModeTrig::at(geom, mode, p);
            let pref = 2.0 / geom.area().sqrt();
            let transverse = pref * k / (kappa * omega);
            Complex3Vector([
                Complex64::new(0.0, transverse * t.cx),
                Complex64::new(0.0, transverse * t.cy),
                Complex64::new(pref * kappa / omega * t.s, 0.0),
            ])
        }
    })
}

/// `∫_0^a dx ∫_0^b dy |E|²` by nested adaptive Gauss–Kronrod quadrature
/// (absolute tolerance 1e-11).
pub fn normalization_integral(geom: &Geometry, mode: &ModeIndex, k: f64, conv: Normalization) -> Result<f64> {
    let tol = Tolerance {
        abs: 1e-11,
        rel: 0.0,
        max_subdivisions: 200,
    };
    let inner_tol = Tolerance {
        abs: 1e-13 / geom.a,
        rel: 0.0,
        max_subdivisions: 200,
    };
    let mut failure = None;
    let outer = integrate(
        |x| {
            let inner = integrate(
                |y| {
                    let p = TransversePoint { x, y };
                    match transverse_profile(geom, mode, k, &p, conv) {
                        Ok(e) => [e.norm_sqr()],
                        Err(_) => [0.0],
                    }
                },
                0.0,
                geom.b,
                inner_tol,
            );
            match inner {
                Ok(est) => est.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    [f64::NAN]
                }
            }
        },
        0.0,
        geom.a,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(outer?.value[0])
}

fn tie_order(a: &(f64, ModeIndex), b: &(f64, ModeIndex)) -> Ordering {
    let scale = a.0.abs().max(b.0.abs());
    if (a.0 - b.0).abs() > 1e-12 * scale {
        return a.0.total_cmp(&b.0);
    }
    (a.1.polarization, a.1.m, a.1.n).cmp(&(b.1.polarization, b.1.m, b.1.n))
}

/// Modes with `lo < k_mn <= hi`, paired with their cutoffs, in ascending
/// cutoff order (ties: TM before TE, then `m`, then `n`).
pub fn modes_in_shell(geom: &Geometry, lo: f64, hi: f64) -> Vec<(f64, ModeIndex)> {
    let mut out = Vec::new();
    if !(hi > lo) || hi <= 0.0 {
        return out;
    }
    let kx = PI / geom.a;
    let ky = PI / geom.b;
    let m_max = (hi / kx).floor() as u32;
    for m in 0..=m_max {
        let qx = m as f64 * kx;
        let rem = hi * hi - qx * qx;
        if rem < 0.0 {
            continue;
        }
        let n_max = (rem.sqrt() / ky).floor() as u32 + 1;
        let n_min = ((lo * lo - qx * qx).max(0.0).sqrt() / ky).floor() as u32;
        for n in n_min.saturating_sub(1)..=n_max {
            if m == 0 && n == 0 {
                continue;
            }
            let kappa = qx.hypot(n as f64 * ky);
            if kappa > hi || kappa <= lo {
                continue;
            }
            if m >= 1 && n >= 1 {
                out.push((
                    kappa,
                    ModeIndex {
                        polarization: Polarization::TM,
                        m,
                        n,
                    },
                ));
            }
            out.push((
                kappa,
                ModeIndex {
                    polarization: Polarization::TE,
                    m,
                    n,
                },
            ));
        }
    }
    out.sort_by(tie_order);
    out
}

/// All valid TE and TM modes with `k_mn <= max_cutoff`, sorted ascending by
/// cutoff; ties broken by polarization (TM first), then `m`, then `n`.
pub fn enumerate_modes(geom: &Geometry, max_cutoff: f64) -> Vec<ModeIndex> {
    modes_in_shell(geom, 0.0, max_cutoff)
        .into_iter()
        .map(|(_, m)| m)
        .collect()
}

/// Upper estimate of the number of modes with cutoff `<= k`, used for the
/// mode cap before enumerating.
pub fn mode_count_estimate(geom: &Geometry, k: f64) -> usize {
    let area = geom.area();
    let two_d = area / (2.0 * PI) * k * k;
    let lines = (geom.a + geom.b) / PI * k;
    (two_d + lines + 4.0).ceil() as usize
}
