//! Seeded self-checks shared by the CLI `oracle-check` command and the
//! acceptance suite. Each check returns its worst deviation next to the
//! threshold it is judged against.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bessel::bessel_k0;
use crate::coupling::{
    f_quadrature, f_te_closed, f_tm_closed, OrientationPair, QuadratureSpec, Regularization, TeFactor, TmSign,
};
use crate::energy::{dispersion_energy, f_tensor, u_freespace_vdw, FreeSpaceForm, ModeSelection, PairConfiguration};
use crate::error::Result;
use crate::modes::{cutoff_wavenumber, Geometry, ModeIndex, Normalization, TransversePoint};
use crate::oracle::{fourth_order_oracle, OracleSpec};
use crate::species::{DipoleSpecies, Orientation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub max_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Reported for information only; never decides the exit status.
    pub informational: bool,
    pub detail: String,
}

impl CheckReport {
    fn new(name: impl Into<String>, max_deviation: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            max_deviation,
            threshold,
            passed: max_deviation <= threshold,
            informational: false,
            detail,
        }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

/// One randomized coupling case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingCase {
    pub geom: Geometry,
    pub mode: ModeIndex,
    pub orientation: OrientationPair,
    pub p1: TransversePoint,
    pub p2: TransversePoint,
    pub z: f64,
    /// Transition energy (TE cases only).
    pub energy: f64,
}

fn random_point(rng: &mut ChaCha8Rng, g: &Geometry) -> TransversePoint {
    g.point(
        rng.random_range(0.05..0.95) * g.a(),
        rng.random_range(0.05..0.95) * g.b(),
    )
    .unwrap()
}

/// Cases whose closed-form value is not near a nodal line: at least 1e-3 of
/// the envelope `κ e^{-κz}` (TM) or `E K0(κz)` (TE).
pub fn random_cases(seed: u64, orientation: OrientationPair, te: bool, count: usize) -> Vec<CouplingCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let g = Geometry::new(1.0, rng.random_range(0.6..1.8)).unwrap();
        let lo = if te { 0 } else { 1 };
        let (m, n) = (rng.random_range(lo..4u32), rng.random_range(lo..4u32));
        let mode = if te { ModeIndex::te(m, n) } else { ModeIndex::tm(m, n) };
        let Ok(mode) = mode else { continue };
        let p1 = random_point(&mut rng, &g);
        let p2 = random_point(&mut rng, &g);
        let kappa = cutoff_wavenumber(&g, &mode);
        let z = rng.random_range(0.3..1.5) / kappa * PI;
        // u_e small enough that the K0 form is exact to well below 1e-6
        let energy = kappa * 10f64.powf(rng.random_range(-9.0..-7.0));
        let case = CouplingCase {
            geom: g,
            mode,
            orientation,
            p1,
            p2,
            z,
            energy,
        };
        let Ok(v) = closed_value(&case) else { continue };
        let envelope = if te {
            4.0 / g.area() * 2.0 * energy * bessel_k0(kappa * z).unwrap()
        } else {
            4.0 * PI / g.area() * kappa * (-kappa * z).exp()
        };
        if v.abs() >= 1e-3 * envelope {
            out.push(case);
        }
    }
    out
}

pub fn closed_value(c: &CouplingCase) -> Result<f64> {
    if c.mode.is_tm() {
        f_tm_closed(
            &c.geom,
            &c.mode,
            c.orientation,
            &c.p1,
            &c.p2,
            c.z,
            TmSign::OracleConsistent,
        )
        .map(|v| v.value)
    } else {
        f_te_closed(
            &c.geom,
            &c.mode,
            c.orientation,
            &c.p1,
            &c.p2,
            c.z,
            c.energy,
            TeFactor::DerivationConsistent,
            Normalization::UnitNormalized,
        )
        .map(|v| v.value)
    }
}

pub fn quadrature_value(c: &CouplingCase, scheme: Regularization) -> Result<f64> {
    let spec = QuadratureSpec {
        scheme,
        ..Default::default()
    };
    f_quadrature(
        &c.geom,
        &c.mode,
        c.orientation,
        &c.p1,
        &c.p2,
        c.z,
        c.energy,
        c.mode.is_te(),
        Normalization::UnitNormalized,
        &spec,
    )
    .map(|v| v.value)
}

/// Closed forms against both quadrature schemes (relative 1e-6) and the two
/// regularization schemes against each other (10x the 1e-9 quadrature
/// tolerance), `count` cases per TM orientation and per TE orientation.
pub fn closed_vs_quadrature(seed: u64, count: usize) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let mut scheme_dev: f64 = 0.0;
    let mut salt = 0;
    for te in [false, true] {
        for o in OrientationPair::all() {
            if te && (o.i.index() == 2 || o.j.index() == 2) {
                continue;
            }
            salt += 1;
            let mut worst: f64 = 0.0;
            for case in random_cases(seed.wrapping_mul(1000).wrapping_add(salt), o, te, count) {
                let c = closed_value(&case)?;
                let q = quadrature_value(&case, Regularization::BranchCutRotated)?;
                let r = quadrature_value(&case, Regularization::RealAxisSubtracted)?;
                worst = worst.max((c - q).abs() / q.abs()).max((c - r).abs() / r.abs());
                scheme_dev = scheme_dev.max((q - r).abs() / q.abs());
            }
            let label = if te { "TE" } else { "TM" };
            reports.push(CheckReport::new(
                format!("closed-vs-quadrature {label} {o}"),
                worst,
                1e-6,
                format!("{count} cases"),
            ));
        }
    }
    reports.push(CheckReport::new(
        "regularization schemes agree",
        scheme_dev,
        1e-8,
        "real-axis subtracted vs branch-cut rotated".into(),
    ));
    Ok(reports)
}

/// Relative discrepancy of the twelve-ordering oracle from the mode-sum
/// energy, TM11 only, centered isotropic dipoles at `z`.
pub fn oracle_discrepancy(lambda: f64, z: f64) -> Result<(f64, f64, f64)> {
    let g = Geometry::square(1.0)?;
    let sp = DipoleSpecies::single(lambda, [0.0, 0.0, 1.0], Orientation::IsotropicAverage)?;
    let mut cfg = PairConfiguration::centered(g, z, sp)?;
    cfg.modes = ModeSelection::Explicit(vec![ModeIndex::tm(1, 1)?]);
    let oracle = fourth_order_oracle(&cfg, &OracleSpec::default())?.total;
    let mode_sum = dispersion_energy(&cfg)?.total;
    Ok(((oracle - mode_sum).abs() / oracle.abs(), oracle, mode_sum))
}

/// Oracle vs dominant-ordering energy at λ/a ∈ {10, 100, 1000}: within
/// 5% at 100 and decreasing.
pub fn oracle_check() -> Result<Vec<CheckReport>> {
    let mut devs = Vec::new();
    let mut detail = String::new();
    for lambda in [10.0, 100.0, 1000.0] {
        let (d, o, e) = oracle_discrepancy(lambda, 1.0)?;
        detail.push_str(&format!(
            "lambda/a={lambda}: oracle {o:.6e} mode_sum {e:.6e} rel {d:.3e}; "
        ));
        devs.push(d);
    }
    let monotone = devs.windows(2).all(|w| w[1] < w[0]);
    Ok(vec![
        CheckReport::new(
            "twelve-ordering oracle at lambda/a=100",
            devs[1],
            0.05,
            detail.trim_end().to_string(),
        ),
        CheckReport {
            name: "oracle discrepancy decreases with lambda/a".into(),
            max_deviation: if monotone { 0.0 } else { 1.0 },
            threshold: 0.0,
            passed: monotone,
            informational: false,
            detail: format!("{:.3e} > {:.3e} > {:.3e}", devs[0], devs[1], devs[2]),
        },
    ])
}

/// Full mode-summed tensor and energy at the center for `z = 0.01a`
/// against the free-space near field.
pub fn freespace_check() -> Result<Vec<CheckReport>> {
    let z = 0.01;
    let g = Geometry::square(1.0)?;
    let sp = DipoleSpecies::single(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage)?;
    let cfg = PairConfiguration::centered(g, z, sp.clone())?;
    let f = f_tensor(&cfg, &sp.transitions()[0], cfg.truncation)?
        .tensor
        .scaled(z.powi(3));
    let mut diag: f64 = 0.0;
    for (i, expect) in [(0, -0.5), (1, -0.5), (2, 1.0)] {
        diag = diag.max((f.get(i, i) - expect).abs() / expect.abs());
    }
    let mut off: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                off = off.max(f.get(i, j).abs() / f.get(2, 2).abs());
            }
        }
    }
    let u = dispersion_energy(&cfg)?.total;
    let fs = u_freespace_vdw(&sp, &sp, z, FreeSpaceForm::Tensor, 1.0);
    Ok(vec![
        CheckReport::new(
            "z^3 F diagonal vs (-1/2, -1/2, 1)",
            diag,
            0.02,
            format!("xx {:.6} yy {:.6} zz {:.6}", f.get(0, 0), f.get(1, 1), f.get(2, 2)),
        ),
        CheckReport::new("off-diagonal entries relative to zz", off, 1e-3, String::new()),
        CheckReport::new(
            "energy vs free-space tensor form",
            (u - fs).abs() / fs.abs(),
            0.02,
            format!("U {u:.6e} free space {fs:.6e}"),
        ),
    ])
}

/// Printed TM closed forms (positive transverse entries) against the
/// quadrature of the same integrals. The xx/yy mismatch is expected.
pub fn paper_sign_check(seed: u64, count: usize) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for (salt, o) in [(101, "xx"), (102, "yy")] {
        let o: OrientationPair = o.parse()?;
        let mut worst: f64 = 0.0;
        for case in random_cases(seed.wrapping_mul(1000).wrapping_add(salt), o, false, count) {
            let lit = f_tm_closed(
                &case.geom,
                &case.mode,
                o,
                &case.p1,
                &case.p2,
                case.z,
                TmSign::PaperLiteral,
            )?
            .value;
            let q = quadrature_value(&case, Regularization::BranchCutRotated)?;
            worst = worst.max((lit - q).abs() / q.abs());
        }
        reports.push(
            CheckReport::new(
                format!("paper-literal TM {o} sign (expected mismatch)"),
                worst,
                1e-6,
                format!("{count} cases; the printed forms flip the sign of the regularized transform"),
            )
            .informational(),
        );
    }
    Ok(reports)
}

/// Oracle vs dominant-ordering energy restricted to TE10 + TE01, centered
/// isotropic dipoles. The non-dominant orderings are not suppressed for TE
/// modes, so this is reported, not judged.
pub fn te_oracle_diagnostic(lambda: f64, z: f64) -> Result<CheckReport> {
    let g = Geometry::square(1.0)?;
    let sp = DipoleSpecies::single(lambda, [0.0, 0.0, 1.0], Orientation::IsotropicAverage)?;
    let mut cfg = PairConfiguration::centered(g, z, sp)?;
    cfg.modes = ModeSelection::Explicit(vec![ModeIndex::te(1, 0)?, ModeIndex::te(0, 1)?]);
    let oracle = fourth_order_oracle(&cfg, &OracleSpec::default())?.total;
    let mode_sum = dispersion_energy(&cfg)?.total;
    Ok(CheckReport::new(
        format!("TE10+TE01 oracle at lambda/a={lambda}, z/a={z}"),
        (oracle - mode_sum).abs() / oracle.abs(),
        0.05,
        format!("oracle {oracle:.6e} mode_sum {mode_sum:.6e}"),
    )
    .informational())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_literal_transverse_signs_mismatch() {
        for r in paper_sign_check(3, 3).unwrap() {
            assert!(r.informational);
            assert!(!r.passed, "{r:?}");
        }
    }
}
