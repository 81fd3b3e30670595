//! Dispersion energy of the dipole pair.
//!
//! `U = -(2πε)^{-2} Σ_{e1,e2} Σ_{ijlq} d_{e2,i} d_{e1,j} d_{e2,l} d_{e1,q}
//!      F_{e2,ij} F_{e1,lq} / (E_{e1} + E_{e2})`,
//!
//! with `F_{e,ij}` the sum of closed-form per-mode couplings over all TE and
//! TM modes. Modes are added in ascending cutoff order; the remainder is
//! bounded by integrating the monotone envelope `~ k e^{-kz}` of the
//! couplings against the lattice density of cutoffs beyond the last shell.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_k0, k0_large_argument};
use crate::coupling::{tm_closed_value, TeFactor, TmSign};
use crate::error::{Error, Result};
use crate::modes::{
    cutoff_wavenumber, mode_count_estimate, modes_in_shell, te_profile_real, Geometry, ModeIndex, ModeTrig,
    Normalization, Polarization, TransversePoint,
};
use crate::species::{DipoleSpecies, DipoleTransition, Orientation};

/// Hard limit on the number of modes summed for one tensor.
pub const DEFAULT_MODE_CAP: usize = 1_000_000;

/// Below this confinement ratio the energy is refused.
pub const CONFINEMENT_HARD_LIMIT: f64 = 2.0;
/// Below this confinement ratio a warning is attached.
pub const CONFINEMENT_WARN_LIMIT: f64 = 10.0;

/// Real 3x3 tensor indexed `[i][j]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tensor3(pub [[f64; 3]; 3]);

impl Tensor3 {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        Tensor3(t)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Tensor3(self.0.map(|r| r.map(|v| v * s)))
    }

    fn add_assign(&mut self, other: &Tensor3) {
        for (r, o) in self.0.iter_mut().zip(other.0.iter()) {
            for (a, b) in r.iter_mut().zip(o) {
                *a += b;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|v| *v == 0.0)
    }

    /// `Σ_ij a_ij b_ij`
    pub fn contract(&self, other: &Tensor3) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| a * b)
            .sum()
    }
}

impl std::ops::Add for Tensor3 {
    type Output = Tensor3;

    fn add(mut self, rhs: Tensor3) -> Tensor3 {
        self.add_assign(&rhs);
        self
    }
}

/// Sign/normalization conventions used when assembling tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Conventions {
    pub normalization: Normalization,
    pub tm_sign: TmSign,
    pub te_factor: TeFactor,
}

impl Conventions {
    /// Printed formulas verbatim.
    pub fn paper_literal() -> Self {
        Self {
            normalization: Normalization::PaperLiteral,
            tm_sign: TmSign::PaperLiteral,
            te_factor: TeFactor::PaperLiteral,
        }
    }

    /// Unit-normalized modes, regularized TM signs, `-2` TE factor.
    pub fn oracle_consistent() -> Self {
        Self::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    /// Sum every mode with `k_mn <= max_cutoff`.
    MaxCutoff(f64),
    /// Grow the mode set until the certified tail is below `tol` times the
    /// largest accumulated tensor entry.
    RelativeTail(f64),
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::RelativeTail(1e-6)
    }
}

/// Which modes enter the sums.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeSelection {
    #[default]
    All,
    Only(Polarization),
    /// Exactly this list; truncation is ignored and the tail is zero.
    Explicit(Vec<ModeIndex>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairConfiguration {
    pub geom: Geometry,
    pub p1: TransversePoint,
    pub p2: TransversePoint,
    pub z: f64,
    pub species1: DipoleSpecies,
    pub species2: DipoleSpecies,
    pub permittivity: f64,
    pub conventions: Conventions,
    pub truncation: Truncation,
    pub modes: ModeSelection,
    pub mode_cap: usize,
}

impl PairConfiguration {
    pub fn new(
        geom: Geometry,
        p1: TransversePoint,
        p2: TransversePoint,
        z: f64,
        species1: DipoleSpecies,
        species2: DipoleSpecies,
    ) -> Result<Self> {
        let cfg = Self {
            geom,
            p1,
            p2,
            z,
            species1,
            species2,
            permittivity: 1.0,
            conventions: Conventions::default(),
            truncation: Truncation::default(),
            modes: ModeSelection::All,
            mode_cap: DEFAULT_MODE_CAP,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Both dipoles on the guide axis, same species.
    pub fn centered(geom: Geometry, z: f64, species: DipoleSpecies) -> Result<Self> {
        let c = geom.center();
        Self::new(geom, c, c, z, species.clone(), species)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z > 0.0 && self.z.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "axial separation must be > 0, got {}",
                self.z
            )));
        }
        if !(self.permittivity > 0.0) {
            return Err(Error::InvalidInput(format!(
                "permittivity must be > 0, got {}",
                self.permittivity
            )));
        }
        self.geom.point(self.p1.x, self.p1.y)?;
        self.geom.point(self.p2.x, self.p2.y)?;
        Ok(())
    }

    pub fn with_z(&self, z: f64) -> Self {
        Self { z, ..self.clone() }
    }

    /// The same physical pair with the labels 1 and 2 exchanged. Dipole 2
    /// sits at `+z` from dipole 1, so relabeling also mirrors the axis and
    /// flips the longitudinal dipole components.
    pub fn swapped(&self) -> Self {
        Self {
            p1: self.p2,
            p2: self.p1,
            species1: self.species2.mirrored(),
            species2: self.species1.mirrored(),
            ..self.clone()
        }
    }
}

/// Mode-summed coupling tensor for one transition energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FTensor {
    pub energy: f64,
    pub tensor: Tensor3,
    /// Certified bound on `|F_ij − truncated F_ij|` for every entry.
    pub tail: f64,
    pub modes_used: usize,
    pub max_cutoff: f64,
    /// Non-zero per-mode contributions in summation order.
    pub per_mode: Vec<ModeContribution>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeContribution {
    pub mode: ModeIndex,
    pub cutoff: f64,
    pub tensor: Tensor3,
}

/// Closed-form 3x3 coupling tensor of a single mode.
pub fn mode_tensor(
    geom: &Geometry,
    mode: &ModeIndex,
    p1: &TransversePoint,
    p2: &TransversePoint,
    z: f64,
    energy: f64,
    conv: &Conventions,
) -> Result<Tensor3> {
    let kappa = cutoff_wavenumber(geom, mode);
    mode_tensor_inner(geom, mode, kappa, p1, p2, z, energy, conv)
}

#[allow(clippy::too_many_arguments)]
fn mode_tensor_inner(
    geom: &Geometry,
    mode: &ModeIndex,
    kappa: f64,
    p1: &TransversePoint,
    p2: &TransversePoint,
    z: f64,
    energy: f64,
    conv: &Conventions,
) -> Result<Tensor3> {
    let mut t = [[0.0; 3]; 3];
    match mode.polarization() {
        Polarization::TM => {
            let t1 = ModeTrig::at(geom, mode, p1);
            let t2 = ModeTrig::at(geom, mode, p2);
            for o in crate::coupling::OrientationPair::all() {
                t[o.i.index()][o.j.index()] = tm_closed_value(geom, mode, kappa, o, &t1, &t2, z, conv.tm_sign);
            }
        }
        Polarization::TE => {
            let e1 = te_profile_real(geom, mode, p1, conv.normalization);
            let e2 = te_profile_real(geom, mode, p2, conv.normalization);
            if e1 != [0.0; 2] && e2 != [0.0; 2] {
                let radial = conv.te_factor.multiplier() * energy * bessel_k0(kappa * z)?;
                for i in 0..2 {
                    for j in 0..2 {
                        t[i][j] = radial * e2[i] * e1[j];
                    }
                }
            }
        }
    }
    Ok(Tensor3(t))
}

/// Certified bound on every entry of the summed tensor over modes with
/// cutoff above `k`. Infinite when the envelope is not yet monotone.
pub fn tail_bound(geom: &Geometry, k: f64, z: f64, energy: f64, conv: &Conventions, selection: &ModeSelection) -> f64 {
    let area = geom.area();
    let k11 = PI * (1.0 / (geom.a() * geom.a()) + 1.0 / (geom.b() * geom.b())).sqrt();
    let (want_tm, want_te) = match selection {
        ModeSelection::All => (true, true),
        ModeSelection::Only(Polarization::TM) => (true, false),
        ModeSelection::Only(Polarization::TE) => (false, true),
        ModeSelection::Explicit(_) => return 0.0,
    };
    let r = k - k11;
    let mut total = 0.0;
    if want_tm {
        if r <= 0.0 || r < 1.0 / z {
            return f64::INFINITY;
        }
        let c_tm = match conv.tm_sign {
            TmSign::OracleConsistent => 4.0 * PI / area,
            TmSign::PaperLiteral => (4.0 * PI / area).max(2.0 * PI * PI / (area * area * k11 * k11)),
        };
        total += area / (2.0 * PI) * c_tm * (-r * z).exp() * (r * r / z + 2.0 * r / (z * z) + 2.0 / (z * z * z));
    }
    if want_te {
        if r <= 0.0 {
            return f64::INFINITY;
        }
        let c_te = conv.te_factor.multiplier().abs() * energy * 4.0 / area;
        // K0(x) <= sqrt(π/2x) e^{-x}; sqrt factor frozen at the lower limit.
        let two_d = area / (2.0 * PI) * c_te * k0_large_argument(r * z) * (r / z + 1.0 / (z * z));
        total += two_d;
        for (len, step) in [(geom.a(), PI / geom.a()), (geom.b(), PI / geom.b())] {
            let rl = k - step;
            if rl <= 0.0 {
                return f64::INFINITY;
            }
            total += len / PI * c_te * k0_large_argument(rl * z) / z;
        }
    }
    total
}

fn selected(mode: &ModeIndex, selection: &ModeSelection) -> bool {
    match selection {
        ModeSelection::All => true,
        ModeSelection::Only(p) => mode.polarization() == *p,
        ModeSelection::Explicit(list) => list.contains(mode),
    }
}

struct Accumulator {
    tensor: Tensor3,
    per_mode: Vec<ModeContribution>,
    modes_used: usize,
}

impl Accumulator {
    fn add_shell(&mut self, config: &PairConfiguration, energy: f64, lo: f64, hi: f64) -> Result<()> {
        for (kappa, mode) in modes_in_shell(&config.geom, lo, hi) {
            if !selected(&mode, &config.modes) {
                continue;
            }
            self.add_mode(config, energy, kappa, &mode)?;
        }
        Ok(())
    }

    fn add_mode(&mut self, config: &PairConfiguration, energy: f64, kappa: f64, mode: &ModeIndex) -> Result<()> {
        self.modes_used += 1;
        let t = mode_tensor_inner(
            &config.geom,
            mode,
            kappa,
            &config.p1,
            &config.p2,
            config.z,
            energy,
            &config.conventions,
        )?;
        if !t.is_zero() {
            self.tensor.add_assign(&t);
            self.per_mode.push(ModeContribution {
                mode: *mode,
                cutoff: kappa,
                tensor: t,
            });
        }
        Ok(())
    }
}

fn check_cap(geom: &Geometry, k: f64, cap: usize) -> Result<()> {
    let needed = mode_count_estimate(geom, k);
    if needed > cap {
        Err(Error::ModeCapExceeded { needed, cap })
    } else {
        Ok(())
    }
}

/// Mode-summed coupling tensor `F_{e,ij}` for one transition.
pub fn f_tensor(config: &PairConfiguration, level: &DipoleTransition, truncation: Truncation) -> Result<FTensor> {
    config.validate()?;
    let energy = level.energy();
    let z = config.z;
    let geom = &config.geom;
    let mut acc = Accumulator {
        tensor: Tensor3::default(),
        per_mode: Vec::new(),
        modes_used: 0,
    };
    if let ModeSelection::Explicit(list) = &config.modes {
        let mut sorted: Vec<(f64, ModeIndex)> = list.iter().map(|m| (cutoff_wavenumber(geom, m), *m)).collect();
        sorted.sort_by(|a, b| {
            a.0.total_cmp(&b.0).then((a.1.polarization(), a.1.m(), a.1.n()).cmp(&(
                b.1.polarization(),
                b.1.m(),
                b.1.n(),
            )))
        });
        sorted.dedup_by(|a, b| a.1 == b.1);
        for (kappa, mode) in &sorted {
            acc.add_mode(config, energy, *kappa, mode)?;
        }
        return Ok(FTensor {
            energy,
            tensor: acc.tensor,
            tail: 0.0,
            modes_used: acc.modes_used,
            max_cutoff: sorted.last().map_or(0.0, |m| m.0),
            per_mode: acc.per_mode,
        });
    }
    let k = match truncation {
        Truncation::MaxCutoff(k) => {
            if !(k > 0.0) {
                return Err(Error::InvalidInput(format!("max cutoff must be > 0, got {k}")));
            }
            check_cap(geom, k, config.mode_cap)?;
            acc.add_shell(config, energy, 0.0, k)?;
            k
        }
        Truncation::RelativeTail(tol) => {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Error::InvalidInput(format!(
                    "relative tail tolerance must be in (0, 1), got {tol}"
                )));
            }
            let k11 = PI * (1.0 / (geom.a() * geom.a()) + 1.0 / (geom.b() * geom.b())).sqrt();
            let mut k = k11 + 10.0 / z;
            check_cap(geom, k, config.mode_cap)?;
            acc.add_shell(config, energy, 0.0, k)?;
            loop {
                let target = (tol * acc.tensor.max_abs()).max(f64::MIN_POSITIVE);
                let bound = |kk: f64| tail_bound(geom, kk, z, energy, &config.conventions, &config.modes);
                if bound(k) <= target {
                    break;
                }
                // smallest cutoff whose tail bound meets the current target
                let mut hi = k * 2.0;
                while bound(hi) > target {
                    hi *= 2.0;
                    check_cap(geom, hi / 2.0, config.mode_cap)?;
                }
                let mut lo = k;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if bound(mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let next = hi.max(k * 1.01);
                check_cap(geom, next, config.mode_cap)?;
                acc.add_shell(config, energy, k, next)?;
                k = next;
            }
            k
        }
    };
    Ok(FTensor {
        energy,
        tensor: acc.tensor,
        tail: tail_bound(geom, k, z, energy, &config.conventions, &config.modes),
        modes_used: acc.modes_used,
        max_cutoff: k,
        per_mode: acc.per_mode,
    })
}

/// Second moment `<d_i d_j>` of a transition dipole under the species'
/// orientation model.
pub fn dipole_moment_matrix(level: &DipoleTransition, orientation: Orientation) -> Tensor3 {
    let d = level.dipole();
    match orientation {
        Orientation::FixedVector => {
            let mut t = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    t[i][j] = d[i] * d[j];
                }
            }
            Tensor3(t)
        }
        Orientation::IsotropicAverage => {
            let s = level.dipole_norm_sqr() / 3.0;
            Tensor3([[s, 0.0, 0.0], [0.0, s, 0.0], [0.0, 0.0, s]])
        }
    }
}

/// `Σ_{ijlq} D2_il D1_jq A_ij B_lq`
pub fn quartic_contraction(d2: &Tensor3, d1: &Tensor3, a: &Tensor3, b: &Tensor3) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if a.0[i][j] == 0.0 {
                continue;
            }
            for l in 0..3 {
                if d2.0[i][l] == 0.0 {
                    continue;
                }
                for q in 0..3 {
                    s += d2.0[i][l] * d1.0[j][q] * a.0[i][j] * b.0[l][q];
                }
            }
        }
    }
    s
}

fn abs_tensor(t: &Tensor3) -> Tensor3 {
    Tensor3(t.0.map(|r| r.map(f64::abs)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelPairEnergy {
    /// Transition index in species 1.
    pub e1: usize,
    /// Transition index in species 2.
    pub e2: usize,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub total: f64,
    pub per_level_pair: Vec<LevelPairEnergy>,
    /// One tensor per distinct transition energy, in first-seen order
    /// (species 1 then species 2).
    pub tensors: Vec<FTensor>,
    /// Certified bound on `|U − U_truncated|`.
    pub tail_estimate: f64,
    pub modes_used: usize,
    pub conventions: Conventions,
    pub warnings: Vec<String>,
}

impl EnergyBreakdown {
    pub fn tensor_for(&self, energy: f64) -> Option<&FTensor> {
        self.tensors.iter().find(|t| t.energy == energy)
    }
}

/// Dispersion energy of the configured pair.
pub fn dispersion_energy(config: &PairConfiguration) -> Result<EnergyBreakdown> {
    config.validate()?;
    let mut warnings = Vec::new();
    let ratio = config
        .species1
        .min_confinement_ratio(&config.geom)
        .min(config.species2.min_confinement_ratio(&config.geom));
    if ratio < CONFINEMENT_HARD_LIMIT {
        return Err(Error::NotTightlyConfined {
            ratio,
            limit: CONFINEMENT_HARD_LIMIT,
        });
    }
    if ratio < CONFINEMENT_WARN_LIMIT {
        let msg = format!(
            "tight-confinement ratio min(lambda/a, lambda/b) = {ratio:.3} is below {CONFINEMENT_WARN_LIMIT}; \
             neglected orderings are not small"
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }

    let mut tensors: Vec<FTensor> = Vec::new();
    for level in config
        .species1
        .transitions()
        .iter()
        .chain(config.species2.transitions())
    {
        if tensors.iter().any(|t| t.energy == level.energy()) {
            continue;
        }
        tensors.push(f_tensor(config, level, config.truncation)?);
    }
    let lookup = |e: f64| tensors.iter().find(|t| t.energy == e).expect("tensor computed above");

    let eps2 = config.permittivity * config.permittivity;
    let pref = -1.0 / (4.0 * PI * PI * eps2);
    let mut per_level_pair = Vec::new();
    let mut total = 0.0;
    let mut tail = 0.0;
    for (i1, l1) in config.species1.transitions().iter().enumerate() {
        let d1 = dipole_moment_matrix(l1, config.species1.orientation());
        let f1 = lookup(l1.energy());
        for (i2, l2) in config.species2.transitions().iter().enumerate() {
            let d2 = dipole_moment_matrix(l2, config.species2.orientation());
            let f2 = lookup(l2.energy());
            let denom = l1.energy() + l2.energy();
            let u = pref * quartic_contraction(&d2, &d1, &f2.tensor, &f1.tensor) / denom;
            per_level_pair.push(LevelPairEnergy {
                e1: i1,
                e2: i2,
                energy: u,
            });
            total += u;

            let ones = Tensor3([[1.0; 3]; 3]);
            let (ad1, ad2) = (abs_tensor(&d1), abs_tensor(&d2));
            let (af1, af2) = (abs_tensor(&f1.tensor), abs_tensor(&f2.tensor));
            let dt = quartic_contraction(&ad2, &ad1, &af2, &ones) * f1.tail
                + quartic_contraction(&ad2, &ad1, &ones, &af1) * f2.tail
                + quartic_contraction(&ad2, &ad1, &ones, &ones) * f1.tail * f2.tail;
            tail += pref.abs() * dt / denom;
        }
    }
    let modes_used = tensors.iter().map(|t| t.modes_used).max().unwrap_or(0);
    Ok(EnergyBreakdown {
        total,
        per_level_pair,
        tensors,
        tail_estimate: tail,
        modes_used,
        conventions: config.conventions,
        warnings,
    })
}

/// Dynamic polarizability on the imaginary axis,
/// `α(iu) = (2/3) Σ_e E_e |d_e|² / (E_e² + u²)`.
pub fn polarizability(species: &DipoleSpecies, u: f64) -> f64 {
    species
        .transitions()
        .iter()
        .map(|t| 2.0 / 3.0 * t.energy() * t.dipole_norm_sqr() / (t.energy() * t.energy() + u * u))
        .sum()
}

fn level_sum(s1: &DipoleSpecies, s2: &DipoleSpecies, f: impl Fn(&DipoleTransition, &DipoleTransition) -> f64) -> f64 {
    s1.transitions()
        .iter()
        .flat_map(|a| s2.transitions().iter().map(move |b| (a, b)))
        .map(|(a, b)| f(a, b))
        .sum()
}

/// Retarded-regime closed form for a square guide, both dipoles at the same
/// transverse point, randomly oriented; valid for `z/a ≳ 2`.
///
/// `U ≈ -(8π²/9) S ε⁻² Σ |d1|²|d2|²/(E1+E2) · e^{-2πz/a} / (λ1 λ2 a³ z)`
/// with `S = (sin⁴(πx/a) + sin⁴(πy/a))/2` (equal to `sin⁴(πx/a)` on the
/// diagonal). Printed conventions; the prefactor is convention dependent.
pub fn u_retarded_closed(config: &PairConfiguration) -> Result<f64> {
    config.validate()?;
    let a = config.geom.a();
    if (config.geom.b() - a).abs() > 1e-12 * a {
        return Err(Error::InvalidInput(
            "retarded closed form needs a square guide (a = b)".into(),
        ));
    }
    if config.p1 != config.p2 {
        return Err(Error::InvalidInput(
            "retarded closed form needs both dipoles at the same transverse point".into(),
        ));
    }
    if config.species1.orientation() != Orientation::IsotropicAverage
        || config.species2.orientation() != Orientation::IsotropicAverage
    {
        return Err(Error::InvalidInput(
            "retarded closed form needs isotropic species".into(),
        ));
    }
    let z = config.z;
    if z / a < 2.0 {
        log::warn!("z/a = {:.3} is outside the retarded regime (z/a >= 2)", z / a);
    }
    let sx = (PI * config.p1.x / a).sin().powi(4);
    let sy = (PI * config.p1.y / a).sin().powi(4);
    let position = 0.5 * (sx + sy);
    let eps2 = config.permittivity * config.permittivity;
    let sum = level_sum(&config.species1, &config.species2, |l1, l2| {
        l1.dipole_norm_sqr() * l2.dipole_norm_sqr() / (l1.energy() + l2.energy()) / (l1.wavelength() * l2.wavelength())
    });
    Ok(-8.0 * PI * PI / 9.0 * position / eps2 * sum / a.powi(3) * (-2.0 * PI * z / a).exp() / z)
}

/// Polarizability-integral rewriting of the retarded closed form, for
/// reporting only: `-2π S ε⁻² ∫ du α1(iu) α2(iu) / (λ1 λ2 a³) e^{-2πz/a}/z`,
/// single-transition species, integration over the whole real line.
pub fn u_retarded_polarizability_form(config: &PairConfiguration) -> Result<f64> {
    let (s1, s2) = (&config.species1, &config.species2);
    if s1.transitions().len() != 1 || s2.transitions().len() != 1 {
        return Err(Error::InvalidInput(
            "polarizability form is defined for single transitions".into(),
        ));
    }
    let a = config.geom.a();
    let l = s1.transitions()[0].wavelength() * s2.transitions()[0].wavelength();
    // u = tan θ maps the line to (-π/2, π/2).
    let (integral, _) = crate::quadrature::integrate_scalar(
        |th: f64| {
            let u = th.tan();
            let c = th.cos();
            polarizability(s1, u) * polarizability(s2, u) / (c * c)
        },
        -PI / 2.0,
        PI / 2.0,
        crate::quadrature::Tolerance::relative(1e-12),
    )?;
    let x = config.p1.x;
    let y = config.p1.y;
    let position = 0.5 * ((PI * x / a).sin().powi(4) + (PI * y / a).sin().powi(4));
    let eps2 = config.permittivity * config.permittivity;
    Ok(-2.0 * PI * position / eps2 * integral / (l * a.powi(3)) * (-2.0 * PI * config.z / a).exp() / config.z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FreeSpaceForm {
    /// Orientation-averaged `-(1/24π²ε²) Σ |d1|²|d2|²/(E1+E2) r⁻⁶`.
    Isotropic,
    /// Unaveraged dipole tensor `(δ_ij − 3R̂_iR̂_j)/2` with `R̂ = ẑ`, each
    /// species averaged according to its own orientation model.
    Tensor,
}

/// Non-retarded free-space reference energy at separation `r`.
pub fn u_freespace_vdw(s1: &DipoleSpecies, s2: &DipoleSpecies, r: f64, form: FreeSpaceForm, permittivity: f64) -> f64 {
    let eps2 = permittivity * permittivity;
    match form {
        FreeSpaceForm::Isotropic => {
            -1.0 / (24.0 * PI * PI * eps2)
                * level_sum(s1, s2, |a, b| {
                    a.dipole_norm_sqr() * b.dipole_norm_sqr() / (a.energy() + b.energy())
                })
                / r.powi(6)
        }
        FreeSpaceForm::Tensor => {
            let m = freespace_tensor_weights();
            let mut total = 0.0;
            for l1 in s1.transitions() {
                let d1 = dipole_moment_matrix(l1, s1.orientation());
                for l2 in s2.transitions() {
                    let d2 = dipole_moment_matrix(l2, s2.orientation());
                    total += quartic_contraction(&d2, &d1, &m, &m) / (l1.energy() + l2.energy());
                }
            }
            -1.0 / (4.0 * PI * PI * eps2) * total / r.powi(6)
        }
    }
}

/// `(δ_ij − 3 ẑ_i ẑ_j)/2 = diag(1/2, 1/2, -1)`, whose products give the
/// weights 1 (zzzz), 1/4 (xxxx), -1/2 (xx,zz).
pub fn freespace_tensor_weights() -> Tensor3 {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            let rr = if i == 2 && j == 2 { 1.0 } else { 0.0 };
            *v = 0.5 * (delta - 3.0 * rr);
        }
    }
    Tensor3(t)
}

/// Retarded free-space reference, `(23/144π³)(ħc/ε²) Σ |d1|²|d2|²/(E1 E2) r⁻⁷`,
/// with the printed (positive) overall sign.
pub fn u_freespace_cp(s1: &DipoleSpecies, s2: &DipoleSpecies, r: f64, permittivity: f64) -> f64 {
    let eps2 = permittivity * permittivity;
    if s1
        .transitions()
        .iter()
        .chain(s2.transitions())
        .any(|t| r < 10.0 * t.wavelength())
    {
        log::debug!("r = {r} is not far beyond every transition wavelength; the retarded form is inaccurate");
    }
    23.0 / (144.0 * PI.powi(3)) / eps2
        * level_sum(s1, s2, |a, b| {
            a.dipole_norm_sqr() * b.dipole_norm_sqr() / (a.energy() * b.energy())
        })
        / r.powi(7)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioReference {
    VdwReference,
    CpReference,
}

/// Guide-to-free-space energy ratio for one transition, centered dipoles,
/// square guide.
pub fn ratio_to_freespace(z: f64, lambda: f64, a: f64, reference: RatioReference) -> f64 {
    let decay = (-2.0 * PI * z / a).exp();
    match reference {
        RatioReference::VdwReference => 64.0 * PI.powi(4) / 3.0 * z.powi(5) / (lambda * lambda * a.powi(3)) * decay,
        RatioReference::CpReference => 128.0 * PI.powi(6) / 23.0 * z.powi(6) / (lambda.powi(3) * a.powi(3)) * decay,
    }
}
