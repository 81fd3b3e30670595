//! Brute-force fourth-order energy summed over all twelve time orderings.
//!
//! Four vertices (up/down transitions of dipoles A and B) are joined by two
//! photons, each running between an A vertex and a B vertex. Every
//! interleaving of `A↑ < A↓` and `B↑ < B↓` with either photon pairing is one
//! ordering; intermediate energies are summed excitation plus photon
//! frequencies. Only the middle intermediate can hold both photons, so
//! `1/(c + ω + ω') = ∫dτ e^{-(c+ω+ω')τ}` factorizes the double k-integral
//! into products of single-photon transforms `M(τ)`, each evaluated on the
//! branch cut of `ω(k)` (small τ) or the real axis (large τ).

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::coupling::{cut_breakpoints, Kernel, OrientationPair};
use crate::energy::ModeSelection;
use crate::energy::{dipole_moment_matrix, PairConfiguration, Tensor3};
use crate::error::{Error, Result};
use crate::modes::{cutoff_wavenumber, modes_in_shell, ModeIndex, Normalization, Polarization};
use crate::quadrature::{integrate, integrate_scalar, Tolerance};

/// Largest mode set the oracle accepts.
pub const ORACLE_MAX_MODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Vertex {
    AUp,
    ADown,
    BUp,
    BDown,
}

impl Vertex {
    fn is_a(self) -> bool {
        matches!(self, Vertex::AUp | Vertex::ADown)
    }

    fn is_up(self) -> bool {
        matches!(self, Vertex::AUp | Vertex::BUp)
    }
}

/// How the two photons join the vertices. Photon `p` always touches `A↑`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pairing {
    /// p: A↑–B↑, q: A↓–B↓
    Parallel,
    /// p: A↑–B↓, q: A↓–B↑
    Crossed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntermediateState {
    pub a_excited: bool,
    pub b_excited: bool,
    pub photon_p: bool,
    pub photon_q: bool,
}

impl IntermediateState {
    pub fn atom_energy(&self, e1: f64, e2: f64) -> f64 {
        (if self.a_excited { e1 } else { 0.0 }) + (if self.b_excited { e2 } else { 0.0 })
    }

    pub fn photon_count(&self) -> usize {
        self.photon_p as usize + self.photon_q as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TimeOrdering {
    pub vertices: [Vertex; 4],
    pub pairing: Pairing,
}

impl TimeOrdering {
    /// All twelve orderings: six interleavings times two pairings.
    pub fn all() -> Vec<TimeOrdering> {
        let mut out = Vec::new();
        for pairing in [Pairing::Parallel, Pairing::Crossed] {
            // choose the two slots taken by A's vertices
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let mut v = [Vertex::BUp; 4];
                    let mut b_seen = false;
                    for (slot, vx) in v.iter_mut().enumerate() {
                        *vx = if slot == i {
                            Vertex::AUp
                        } else if slot == j {
                            Vertex::ADown
                        } else if !b_seen {
                            b_seen = true;
                            Vertex::BUp
                        } else {
                            Vertex::BDown
                        };
                    }
                    out.push(TimeOrdering { vertices: v, pairing });
                }
            }
        }
        out
    }

    fn photon_of(&self, v: Vertex) -> usize {
        match (self.pairing, v) {
            (_, Vertex::AUp) => 0,
            (_, Vertex::ADown) => 1,
            (Pairing::Parallel, Vertex::BUp) | (Pairing::Crossed, Vertex::BDown) => 0,
            _ => 1,
        }
    }

    /// States after the first, second and third vertex.
    pub fn intermediates(&self) -> [IntermediateState; 3] {
        let mut out = [IntermediateState::default(); 3];
        let mut st = IntermediateState::default();
        let mut alive = [false; 2];
        for (k, v) in self.vertices.iter().take(3).enumerate() {
            if v.is_a() {
                st.a_excited = v.is_up();
            } else {
                st.b_excited = v.is_up();
            }
            let ph = self.photon_of(*v);
            alive[ph] = !alive[ph];
            st.photon_p = alive[0];
            st.photon_q = alive[1];
            out[k] = st;
        }
        out
    }

    /// Product of the three energy denominators at real photon frequencies.
    pub fn denominator(&self, e1: f64, e2: f64, omega_p: f64, omega_q: f64) -> f64 {
        self.intermediates()
            .iter()
            .map(|s| {
                s.atom_energy(e1, e2) + if s.photon_p { omega_p } else { 0.0 } + if s.photon_q { omega_q } else { 0.0 }
            })
            .product()
    }

    /// Middle state photonless: the dominant class under tight confinement.
    pub fn is_dominant(&self) -> bool {
        self.intermediates()[1].photon_count() == 0
    }
}

impl fmt::Display for TimeOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            let s = match v {
                Vertex::AUp => "A+",
                Vertex::ADown => "A-",
                Vertex::BUp => "B+",
                Vertex::BDown => "B-",
            };
            f.write_str(s)?;
        }
        match self.pairing {
            Pairing::Parallel => f.write_str("/par"),
            Pairing::Crossed => f.write_str("/cross"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingSet {
    #[default]
    All,
    DominantOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSpec {
    pub mode_cap: usize,
    pub rel_tol: f64,
    pub orderings: OrderingSet,
}

impl Default for OracleSpec {
    fn default() -> Self {
        Self {
            mode_cap: ORACLE_MAX_MODES,
            rel_tol: 1e-8,
            orderings: OrderingSet::All,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingContribution {
    pub ordering: String,
    pub dominant: bool,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub total: f64,
    pub dominant: f64,
    pub remainder: f64,
    pub per_ordering: Vec<OrderingContribution>,
    pub modes: Vec<ModeIndex>,
    /// Quadrature error plus discarded imaginary parts.
    pub error: f64,
}

/// Modes the oracle will sum: an explicit list, or the lowest `mode_cap`
/// modes of the selected polarization.
pub fn oracle_modes(config: &PairConfiguration, mode_cap: usize) -> Result<Vec<ModeIndex>> {
    let cap = mode_cap.min(ORACLE_MAX_MODES);
    let list = match &config.modes {
        ModeSelection::Explicit(list) => list.clone(),
        sel => {
            let want = |m: &ModeIndex| match sel {
                ModeSelection::Only(p) => m.polarization() == *p,
                _ => true,
            };
            let k = 4.0 * config.geom.lowest_cutoff() * (cap as f64 + 2.0).sqrt();
            modes_in_shell(&config.geom, 0.0, k)
                .into_iter()
                .map(|(_, m)| m)
                .filter(want)
                .take(cap)
                .collect()
        }
    };
    if list.len() > cap {
        return Err(Error::ModeCapExceeded {
            needed: list.len(),
            cap,
        });
    }
    Ok(list)
}

/// 9-component single-photon transform of one mode,
/// `M_ij(τ) = (1/4πε) ∫dk ω e^{-ωτ} Π_c 1/(ω + c) E_i(p2) E_j*(p1) e^{ikz}`.
struct PhotonMode {
    kappa: f64,
    zeta: f64,
    kernels: [Kernel; 9],
}

impl PhotonMode {
    fn new(config: &PairConfiguration, mode: &ModeIndex, normalization: Normalization) -> Self {
        let mut kernels = [Kernel::default(); 9];
        for (slot, o) in kernels.iter_mut().zip(OrientationPair::all()) {
            *slot = Kernel::for_mode(&config.geom, mode, o, &config.p1, &config.p2, normalization);
        }
        let kappa = cutoff_wavenumber(&config.geom, mode);
        Self {
            kappa,
            zeta: kappa * config.z,
            kernels,
        }
    }

    fn eval(&self, jump_or_value: impl Fn(&Kernel) -> Complex64) -> [f64; 18] {
        let mut out = [0.0; 18];
        for (c, k) in self.kernels.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            let v = jump_or_value(k);
            out[2 * c] = v.re;
            out[2 * c + 1] = v.im;
        }
        out
    }

    fn transform(&self, tau: f64, consts: &[f64], rel_tol: f64) -> Result<([Complex64; 9], f64)> {
        let kappa = self.kappa;
        let zeta = self.zeta;
        let kt = kappa * tau;
        let us: Vec<f64> = consts.iter().map(|c| c / kappa).collect();
        let weight = |s: Complex64| {
            let mut w = s * (-kt * s).exp();
            for u in &us {
                w /= s + *u;
            }
            w
        };
        let tol = Tolerance {
            abs: 0.0,
            rel: rel_tol,
            max_subdivisions: 4000,
        };
        let mut total = [0.0; 18];
        let mut err = 0.0;
        let mut scale = 1.0;
        if kt < zeta {
            // branch cut u = iv, v = cosh θ
            let f = |theta: f64| {
                let t = theta.sinh();
                let v = theta.cosh();
                let u = Complex64::new(0.0, v);
                let sp = Complex64::new(0.0, t);
                let (wp, wm) = (weight(sp), weight(-sp));
                let factor = Complex64::i() * (-zeta * (v - 1.0)).exp() * t;
                self.eval(|k| (wp * k.bracket(u, sp) - wm * k.bracket(u, -sp)) * factor)
            };
            let theta_max = (1.0 + 60.0 / zeta).acosh();
            let breaks = cut_breakpoints(&us, theta_max);
            for w in breaks.windows(2) {
                let est = integrate(f, w[0], w[1], tol)?;
                for (t, v) in total.iter_mut().zip(est.value) {
                    *t += v;
                }
                err += est.error;
            }
            scale = (-zeta).exp();
        } else {
            let s_max = 1.0 + 60.0 / kt;
            let u_max = (s_max * s_max - 1.0).sqrt();
            let f = |u: f64| {
                let s = Complex64::new(u.hypot(1.0), 0.0);
                let w = weight(s);
                let phase = Complex64::from_polar(1.0, zeta * u);
                let (up, um) = (Complex64::new(u, 0.0), Complex64::new(-u, 0.0));
                self.eval(|k| w * (k.bracket(up, s) * phase + k.bracket(um, s) * phase.conj()))
            };
            let est = integrate(f, 0.0, u_max, tol)?;
            total = est.value;
            err = est.error;
        }
        let pref = kappa.powi(2 - consts.len() as i32) / (4.0 * PI) * scale;
        let mut out = [Complex64::default(); 9];
        for (c, o) in out.iter_mut().enumerate() {
            *o = Complex64::new(total[2 * c], total[2 * c + 1]) * pref;
        }
        Ok((out, err * pref))
    }
}

fn contract(d2: &Tensor3, d1: &Tensor3, mp: &[Complex64; 9], mq: &[Complex64; 9]) -> Complex64 {
    let mut s = Complex64::default();
    for i in 0..3 {
        for j in 0..3 {
            let a = mp[3 * i + j];
            if a == Complex64::default() {
                continue;
            }
            for l in 0..3 {
                if d2.0[i][l] == 0.0 {
                    continue;
                }
                for q in 0..3 {
                    s += a * mq[3 * l + q] * (d2.0[i][l] * d1.0[j][q]);
                }
            }
        }
    }
    s
}

/// Per-ordering plan: photon energy lists and the middle-state treatment.
struct Plan {
    ordering: TimeOrdering,
    lists: [Vec<f64>; 2],
    middle: f64,
    laplace: bool,
}

fn plan(ordering: TimeOrdering, e1: f64, e2: f64) -> Plan {
    let st = ordering.intermediates();
    let mut lists = [Vec::new(), Vec::new()];
    for s in [st[0], st[2]] {
        let ph = if s.photon_p { 0 } else { 1 };
        lists[ph].push(s.atom_energy(e1, e2));
    }
    for l in &mut lists {
        l.sort_by(f64::total_cmp);
    }
    Plan {
        ordering,
        lists,
        middle: st[1].atom_energy(e1, e2),
        laplace: st[1].photon_count() == 2,
    }
}

struct Transforms<'a> {
    photons: &'a [PhotonMode],
    rel_tol: f64,
}

impl Transforms<'_> {
    /// Mode-summed transform; `ε` is applied by the caller.
    fn summed(&self, tau: f64, consts: &[f64]) -> Result<([Complex64; 9], f64)> {
        let mut out = [Complex64::default(); 9];
        let mut err = 0.0;
        for ph in self.photons {
            let (m, e) = ph.transform(tau, consts, self.rel_tol)?;
            for (o, v) in out.iter_mut().zip(m) {
                *o += v;
            }
            err += e;
        }
        Ok((out, err))
    }
}

/// Fourth-order energy of the configured pair restricted to a small mode
/// set, from all (or only the dominant) time orderings.
pub fn fourth_order_oracle(config: &PairConfiguration, spec: &OracleSpec) -> Result<OracleResult> {
    config.validate()?;
    if !(spec.rel_tol > 0.0 && spec.rel_tol <= 1e-3) {
        return Err(Error::InvalidInput(format!(
            "oracle tolerance must be in (0, 1e-3], got {}",
            spec.rel_tol
        )));
    }
    let modes = oracle_modes(config, spec.mode_cap)?;
    if modes.is_empty() {
        return Err(Error::InvalidInput("oracle mode set is empty".into()));
    }
    let photons: Vec<PhotonMode> = modes
        .iter()
        .map(|m| PhotonMode::new(config, m, config.conventions.normalization))
        .collect();
    let tr = Transforms {
        photons: &photons,
        rel_tol: spec.rel_tol * 0.1,
    };
    let eps2 = config.permittivity * config.permittivity;
    let orderings: Vec<TimeOrdering> = TimeOrdering::all()
        .into_iter()
        .filter(|o| spec.orderings == OrderingSet::All || o.is_dominant())
        .collect();

    let mut per_ordering: Vec<OrderingContribution> = orderings
        .iter()
        .map(|o| OrderingContribution {
            ordering: o.to_string(),
            dominant: o.is_dominant(),
            energy: 0.0,
        })
        .collect();
    let mut error = 0.0;
    let k_low = photons.iter().map(|p| p.kappa).fold(f64::INFINITY, f64::min);
    let z = config.z;
    let tau_max = ((z + 40.0 / k_low).powi(2) - z * z).sqrt();

    for l1 in config.species1.transitions() {
        let d1 = dipole_moment_matrix(l1, config.species1.orientation());
        for l2 in config.species2.transitions() {
            let d2 = dipole_moment_matrix(l2, config.species2.orientation());
            let plans: Vec<Plan> = orderings.iter().map(|o| plan(*o, l1.energy(), l2.energy())).collect();
            for (slot, p) in plans.iter().enumerate() {
                let value = if p.laplace {
                    let failure: RefCell<Option<Error>> = RefCell::new(None);
                    let mut im_err = 0.0;
                    let (v, e) = integrate_scalar(
                        |tau| {
                            if failure.borrow().is_some() {
                                return 0.0;
                            }
                            let run = || -> Result<Complex64> {
                                let (mp, _) = tr.summed(tau, &p.lists[0])?;
                                let (mq, _) = tr.summed(tau, &p.lists[1])?;
                                Ok(contract(&d2, &d1, &mp, &mq) * (-p.middle * tau).exp())
                            };
                            match run() {
                                Ok(c) => {
                                    im_err += c.im.abs() * 1e-3;
                                    c.re
                                }
                                Err(err) => {
                                    *failure.borrow_mut() = Some(err);
                                    0.0
                                }
                            }
                        },
                        0.0,
                        tau_max,
                        Tolerance {
                            abs: 0.0,
                            rel: spec.rel_tol,
                            max_subdivisions: 400,
                        },
                    )?;
                    if let Some(err) = failure.into_inner() {
                        return Err(err);
                    }
                    error += (e + im_err) / eps2;
                    v
                } else {
                    let (mp, ep) = tr.summed(0.0, &p.lists[0])?;
                    let (mq, eq) = tr.summed(0.0, &p.lists[1])?;
                    let c = contract(&d2, &d1, &mp, &mq) / p.middle;
                    let mag = |m: &[Complex64; 9]| m.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    error += (c.im.abs() + (ep * mag(&mq) + eq * mag(&mp)) * 9.0 / p.middle) / eps2;
                    c.re
                };
                per_ordering[slot].energy += -value / eps2;
                debug_assert_eq!(per_ordering[slot].ordering, p.ordering.to_string());
            }
        }
    }
    let dominant = per_ordering.iter().filter(|o| o.dominant).map(|o| o.energy).sum();
    let remainder = per_ordering.iter().filter(|o| !o.dominant).map(|o| o.energy).sum();
    Ok(OracleResult {
        total: dominant + remainder,
        dominant,
        remainder,
        per_ordering,
        modes,
        error,
    })
}

/// Dominant-ordering energy with the exact weight `ω/(ω + E)` kept inside
/// each coupling integral, evaluated by quadrature.
pub fn dominant_energy_weighted(config: &PairConfiguration, modes: &[ModeIndex], rel_tol: f64) -> Result<f64> {
    let photons: Vec<PhotonMode> = modes
        .iter()
        .map(|m| PhotonMode::new(config, m, config.conventions.normalization))
        .collect();
    let tr = Transforms {
        photons: &photons,
        rel_tol,
    };
    let eps2 = config.permittivity * config.permittivity;
    let mut total = 0.0;
    for l1 in config.species1.transitions() {
        let d1 = dipole_moment_matrix(l1, config.species1.orientation());
        let (m1, _) = tr.summed(0.0, &[l1.energy()])?;
        for l2 in config.species2.transitions() {
            let d2 = dipole_moment_matrix(l2, config.species2.orientation());
            let (m2, _) = tr.summed(0.0, &[l2.energy()])?;
            // 4 × (1/4πε)² F_e2 F_e1 / (E1 + E2)
            total -= 4.0 * contract(&d2, &d1, &m2, &m1).re / (l1.energy() + l2.energy()) / eps2;
        }
    }
    Ok(total)
}

/// Polarization composition of a mode list, for reports.
pub fn polarization_counts(modes: &[ModeIndex]) -> (usize, usize) {
    let te = modes.iter().filter(|m| m.polarization() == Polarization::TE).count();
    (te, modes.len() - te)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn twelve_distinct_orderings() {
        let all = TimeOrdering::all();
        assert_eq!(all.len(), 12);
        let set: HashSet<_> = all.iter().collect();
        assert_eq!(set.len(), 12);
        assert_eq!(all.iter().filter(|o| o.is_dominant()).count(), 4);
        for o in &all {
            let st = o.intermediates();
            assert_eq!(st[0].photon_count(), 1);
            assert_eq!(st[2].photon_count(), 1);
        }
    }

    #[test]
    fn generator_reproduces_da_and_db() {
        let (e1, e2, w, wp) = (0.3, 0.7, 5.0, 11.0);
        let all = TimeOrdering::all();
        let find = |v: [Vertex; 4], p: Pairing| *all.iter().find(|o| o.vertices == v && o.pairing == p).unwrap();
        use Vertex::*;
        let da = find([AUp, BUp, ADown, BDown], Pairing::Parallel);
        assert!(da.is_dominant());
        let expect = (w + e1) * (e1 + e2) * (wp + e2);
        assert!((da.denominator(e1, e2, w, wp) - expect).abs() < 1e-12 * expect);
        let db = find([AUp, ADown, BUp, BDown], Pairing::Parallel);
        assert!(!db.is_dominant());
        let expect = (w + e1) * (w + wp) * (wp + e2);
        assert!((db.denominator(e1, e2, w, wp) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn dominant_denominators_bounded_by_others() {
        // ω ≫ E: every non-dominant denominator exceeds every dominant one.
        let (e1, e2, w, wp) = (0.01, 0.02, 5.0, 6.0);
        let all = TimeOrdering::all();
        let max_dom = all
            .iter()
            .filter(|o| o.is_dominant())
            .map(|o| o.denominator(e1, e2, w, wp))
            .fold(0.0, f64::max);
        let min_rest = all
            .iter()
            .filter(|o| !o.is_dominant())
            .map(|o| o.denominator(e1, e2, w, wp))
            .fold(f64::INFINITY, f64::min);
        assert!(max_dom * 10.0 < min_rest);
    }
}
