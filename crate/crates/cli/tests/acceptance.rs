//! One PASS/FAIL line per acceptance criterion. Exits nonzero when any
//! criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wgdisp::asymptotic::{fig4_point, u_vdw_smallz};
use wgdisp::checks::{closed_vs_quadrature, freespace_check, oracle_check, CheckReport};
use wgdisp::fit::linear_fit;
use wgdisp::{
    dispersion_energy, normalization_integral, ratio_to_freespace, u_freespace_vdw, DipoleSpecies, FreeSpaceForm,
    Geometry, ModeIndex, ModeSelection, Normalization, Orientation, PairConfiguration, Polarization, RatioReference,
};

type Outcome = (bool, String);
type Res<T> = Result<T, Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Res<Outcome>);

fn all_pass(reports: &[CheckReport]) -> Outcome {
    let worst = reports
        .iter()
        .filter(|r| !r.informational)
        .map(|r| (r.max_deviation / r.threshold, r))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    let ok = reports.iter().all(|r| r.informational || r.passed);
    let detail = match worst {
        Some((_, r)) => format!(
            "{} checks; tightest: {} at {:.3e} (limit {:.1e})",
            reports.len(),
            r.name,
            r.max_deviation,
            r.threshold
        ),
        None => "no checks".into(),
    };
    (ok, detail)
}

fn normalization() -> Res<Outcome> {
    let ks = [-20.0, -9.5, -1.0, 0.0, 0.7, 6.0, 20.0];
    let (mut unit, mut literal) = (0.0f64, 0.0f64);
    let mut count = 0;
    for g in [Geometry::square(1.0)?, Geometry::new(1.0, 1.7)?] {
        for pol in [Polarization::TE, Polarization::TM] {
            for m in 0..=5 {
                for n in 0..=5 {
                    let Ok(mode) = ModeIndex::new(pol, m, n) else { continue };
                    for k in ks {
                        unit = unit
                            .max((normalization_integral(&g, &mode, k, Normalization::UnitNormalized)? - 1.0).abs());
                        if pol == Polarization::TE && (m == 0 || n == 0) {
                            let v = normalization_integral(&g, &mode, k, Normalization::PaperLiteral)?;
                            literal = literal.max((v - 2.0).abs());
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok((
        unit <= 1e-9 && literal <= 1e-9,
        format!("{count} (mode, k) pairs; max |I-1| = {unit:.2e}; paper-literal TE_m0/TE_0n max |I-2| = {literal:.2e} (limit 1e-9)"),
    ))
}

fn closed_forms() -> Res<Outcome> {
    Ok(all_pass(&closed_vs_quadrature(0, 20)?))
}

fn fig4() -> Res<Outcome> {
    let zs = [0.1, 0.05, 0.02, 0.01];
    let devs = zs
        .iter()
        .map(|z| fig4_point(*z).map(|p| p.relative_deviation))
        .collect::<Result<Vec<_>, _>>()?;
    let ok = devs.iter().all(|d| *d <= 0.05) && devs.windows(2).all(|w| w[1] < w[0]);
    let list: Vec<String> = zs.iter().zip(&devs).map(|(z, d)| format!("z/a={z}: {d:.3e}")).collect();
    Ok((ok, format!("{} (limit 5e-2, decreasing)", list.join(", "))))
}

fn free_space() -> Res<Outcome> {
    let (ok, detail) = all_pass(&freespace_check()?);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let mut draw = || {
            [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ]
        };
        let (d1, d2) = (draw(), draw());
        let lambda1 = rng.random_range(20.0..500.0);
        let lambda2 = rng.random_range(20.0..500.0);
        let z = rng.random_range(0.001..0.05);
        let s1 = DipoleSpecies::single(lambda1, d1, Orientation::FixedVector)?;
        let s2 = DipoleSpecies::single(lambda2, d2, Orientation::FixedVector)?;
        let a = u_vdw_smallz(&s1, &s2, z, 1.0);
        let b = u_freespace_vdw(&s1, &s2, z, FreeSpaceForm::Tensor, 1.0);
        let scale = u_freespace_vdw(&s1, &s2, z, FreeSpaceForm::Isotropic, 1.0).abs();
        worst = worst.max((a - b).abs() / scale);
    }
    Ok((
        ok && worst <= 1e-12,
        format!("{detail}; small-z tensor form vs free-space tensor form, 200 fixed-dipole draws: {worst:.2e} (limit 1e-12)"),
    ))
}

fn retarded() -> Res<Outcome> {
    let g = Geometry::square(1.0)?;
    let sp = DipoleSpecies::single(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage)?;
    let base = PairConfiguration::centered(g, 3.0, sp)?;
    let zs: Vec<f64> = (0..13).map(|i| 3.0 + 0.25 * i as f64).collect();
    let mut lnu = Vec::new();
    for &z in &zs {
        lnu.push(dispersion_energy(&base.with_z(z))?.total.abs().ln());
    }
    // slope of ln(z|U|), i.e. with the 1/z prefactor taken out
    let y: Vec<f64> = zs.iter().zip(&lnu).map(|(z, l)| l + z.ln()).collect();
    let slope = linear_fit(&zs, &y).ok_or("degenerate fit")?.slope;
    let slope_ok = ((slope + 2.0 * PI) / (2.0 * PI)).abs() <= 0.01;
    let lnz: Vec<f64> = zs.iter().map(|z| z.ln()).collect();
    let resid: Vec<f64> = zs.iter().zip(&lnu).map(|(z, l)| l + 2.0 * PI * z).collect();
    let rfit = linear_fit(&lnz, &resid).ok_or("degenerate fit")?;
    let resid_ok = rfit.r_squared >= 0.999 && (rfit.slope + 1.0).abs() <= 0.1;

    let only = |z: f64, sel: ModeSelection| -> Res<f64> {
        let mut c = base.with_z(z);
        c.modes = sel;
        Ok(dispersion_energy(&c)?.total)
    };
    let te_pair = ModeSelection::Explicit(vec![ModeIndex::te(1, 0)?, ModeIndex::te(0, 1)?]);
    let te_tm = only(5.0, te_pair)? / only(5.0, ModeSelection::Only(Polarization::TM))?;
    let tm_te = only(0.01, ModeSelection::Only(Polarization::TM))? / only(0.01, ModeSelection::Only(Polarization::TE))?;
    Ok((
        slope_ok && resid_ok && te_tm >= 10.0 && tm_te >= 100.0,
        format!(
            "slope {slope:.4} vs -2pi = {:.4} (1%); residual vs ln z: slope {:.3}, R^2 {:.6} (0.999); \
             TE01+TE10 / TM at z=5a: {te_tm:.3} (>= 10); TM / TE at z=0.01a: {tm_te:.1} (>= 100)",
            -2.0 * PI,
            rfit.slope,
            rfit.r_squared
        ),
    ))
}

fn cli(args: &[&str]) -> Res<Vec<u8>> {
    let out = Command::new(env!("CARGO_BIN_EXE_wgdisp")).args(args).output()?;
    if !out.status.success() {
        return Err(format!("wgdisp {args:?} exited with {}", out.status).into());
    }
    Ok(out.stdout)
}

fn ratio_curves() -> Res<Outcome> {
    // (64π⁴/3)·10⁵/10⁴·e^{−20π} and (128π⁶/23)·10⁶/10³·e^{−20π}, by hand
    let fig3a_value = 1.0718428944e-23;
    let fig3b_value = 2.7596518298e-21;
    let a = ratio_to_freespace(10.0, 100.0, 1.0, RatioReference::VdwReference);
    let b = ratio_to_freespace(10.0, 10.0, 1.0, RatioReference::CpReference);
    let ea = (a - fig3a_value).abs() / fig3a_value;
    let eb = (b - fig3b_value).abs() / fig3b_value;
    let eb_printed = (b - 2.8e-21).abs() / 2.8e-21;
    let mut r2 = Vec::new();
    for fig in ["fig3a", "fig3b"] {
        let text = String::from_utf8(cli(&["reproduce", fig])?)?;
        let (mut z, mut l) = (Vec::new(), Vec::new());
        for line in text.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let (zs, rs) = line.split_once(',').ok_or("malformed row")?;
            z.push(zs.parse::<f64>()?);
            l.push(rs.parse::<f64>()?.ln());
        }
        r2.push(linear_fit(&z, &l).ok_or("degenerate fit")?.r_squared);
    }
    Ok((
        ea <= 1e-3 && eb <= 1e-3 && eb_printed <= 0.02 && r2.iter().all(|r| *r >= 0.999),
        format!(
            "fig3a(z=10a, lambda=100a) = {a:.5e} (recomputed {fig3a_value:.5e}, rel {ea:.1e}); \
             fig3b(z=10a, lambda=10a) = {b:.5e} (recomputed {fig3b_value:.5e}, rel {eb:.1e}); \
             ln(ratio) linear R^2: fig3a {:.6}, fig3b {:.6} (0.999)",
            r2[0], r2[1]
        ),
    ))
}

fn oracle() -> Res<Outcome> {
    Ok(all_pass(&oracle_check()?))
}

fn determinism() -> Res<Outcome> {
    let runs: [&[&str]; 5] = [
        &[
            "energy",
            "--z",
            "0.3",
            "--orientation",
            "fixed",
            "--dipole",
            "0.2,0.5,-1",
            "--x1",
            "0.4",
        ],
        &[
            "sweep",
            "--z-min",
            "0.2",
            "--z-max",
            "3",
            "--points",
            "6",
            "--spacing",
            "log",
            "--format",
            "json",
        ],
        &["reproduce", "fig4"],
        &["coupling", "--mode", "TM21,TE11", "--z", "0.6", "--y1", "0.3"],
        &["oracle-check", "--seed", "11", "--count", "3", "--format", "csv"],
    ];
    let mut bytes = 0;
    for args in runs {
        let a = cli(args)?;
        if a != cli(args)? {
            return Ok((false, format!("outputs differ for {args:?}")));
        }
        bytes += a.len();
    }
    Ok((
        true,
        format!("{} commands run twice, {bytes} bytes compared", runs.len()),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("mode normalization", normalization),
        ("closed forms vs quadrature", closed_forms),
        ("direct sum vs integral approximation", fig4),
        ("free-space recovery", free_space),
        ("retarded regime", retarded),
        ("ratio curves", ratio_curves),
        ("twelve-ordering oracle", oracle),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} {name}: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
