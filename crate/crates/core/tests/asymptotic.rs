use std::f64::consts::PI;

use wgdisp::asymptotic::*;
use wgdisp::*;

#[test]
fn fbar_equals_tm_zz_mode_sum() {
    let g = Geometry::square(1.0).unwrap();
    let c = g.center();
    let s = DipoleSpecies::single(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage).unwrap();
    for z in [0.3, 1.0] {
        let mut cfg = PairConfiguration::centered(g, z, s.clone()).unwrap();
        cfg.modes = ModeSelection::Only(Polarization::TM);
        let f = f_tensor(&cfg, &s.transitions()[0], Truncation::RelativeTail(1e-13)).unwrap();
        let fbar = fbar_zz_direct(&SumSpec::zz(z).unwrap()).unwrap();
        let scaled = f.tensor.get(2, 2) / (4.0 * PI * PI);
        assert!(((scaled - fbar) / fbar).abs() < 1e-10, "{scaled} {fbar}");
        assert_eq!(c, cfg.p1);
    }
}

#[test]
fn even_indices_do_not_couple_at_center() {
    let g = Geometry::square(1.0).unwrap();
    let c = g.center();
    let o: OrientationPair = "zz".parse().unwrap();
    for (m, n) in [(2, 1), (1, 2), (2, 2), (4, 3)] {
        let v = f_tm_closed(
            &g,
            &ModeIndex::tm(m, n).unwrap(),
            o,
            &c,
            &c,
            0.2,
            TmSign::OracleConsistent,
        )
        .unwrap();
        assert!(v.value.abs() < 1e-15, "TM{m},{n}: {}", v.value);
    }
}

#[test]
fn fig4_deviation_shrinks_toward_small_z() {
    let devs: Vec<f64> = [0.1, 0.05, 0.02, 0.01]
        .iter()
        .map(|z| fig4_point(*z).unwrap().relative_deviation)
        .collect();
    assert!(devs.iter().all(|d| *d <= 0.05));
    assert!(devs.windows(2).all(|w| w[1] < w[0]), "{devs:?}");
    let p = fig4_point(0.1).unwrap();
    assert!((p.direct - 25.33).abs() / 25.33 < 0.05);
}

#[test]
fn fig4_grid_shape() {
    let pts = fig4_data(0.01, 1.0, 25).unwrap();
    assert_eq!(pts.len(), 25);
    assert!((pts[0].z_over_a - 0.01).abs() < 1e-15);
    assert!((pts[24].z_over_a - 1.0).abs() < 1e-12);
}

#[test]
fn transverse_sums_reproduce_minus_one_half() {
    let t = smallz_tensor_from_sums(0.01, 1.0).unwrap();
    let z3 = 1e-6;
    assert!((t.get(0, 0) * z3 + 0.5).abs() < 0.025);
    assert!((t.get(1, 1) * z3 + 0.5).abs() < 0.025);
    assert!((t.get(2, 2) * z3 - 1.0).abs() < 0.05);
    let xx = lattice_sum(&SumSpec::new(0.01, SumKind::Xx).unwrap()).unwrap().value;
    assert!((xx / fbar_xx_integral(0.01) - 1.0).abs() < 0.05);
}

#[test]
fn smallz_table_matches_mode_sum() {
    let z = 0.01;
    let g = Geometry::square(1.0).unwrap();
    let s = DipoleSpecies::single(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage).unwrap();
    let cfg = PairConfiguration::centered(g, z, s.clone()).unwrap();
    let f = f_tensor(&cfg, &s.transitions()[0], cfg.truncation).unwrap().tensor;
    let t = smallz_f_components(z);
    for i in 0..3 {
        let rel = (f.get(i, i) - t.get(i, i)).abs() / t.get(i, i).abs();
        assert!(rel < 0.02, "{i}: {rel}");
    }
}

#[test]
fn te_aggregate_exponent_is_far_from_free_space() {
    let s = te_smallz_scaling(0.001, 0.01, 4).unwrap();
    assert!(s.exponent > -2.5 && s.exponent < -1.5, "{}", s.exponent);
}

#[test]
fn tm_dominates_te_at_small_separation() {
    let g = Geometry::square(1.0).unwrap();
    let s = DipoleSpecies::single(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage).unwrap();
    let split = polarization_split(&PairConfiguration::centered(g, 0.01, s).unwrap()).unwrap();
    assert!(split.tm / split.te >= 100.0, "{split:?}");
}
