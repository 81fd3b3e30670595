use proptest::prelude::*;
use wgdisp::asymptotic::u_vdw_smallz;
use wgdisp::checks::freespace_check;
use wgdisp::energy::{dipole_moment_matrix, quartic_contraction, tail_bound};
use wgdisp::*;

fn species(lambda: f64, d: [f64; 3], o: Orientation) -> DipoleSpecies {
    DipoleSpecies::single(lambda, d, o).unwrap()
}

#[test]
fn swapping_species_leaves_energy_unchanged() {
    let g = Geometry::new(1.0, 1.3).unwrap();
    let s1 = DipoleSpecies::new(
        vec![
            DipoleTransition::from_wavelength(40.0, [0.2, 0.5, -0.3]).unwrap(),
            DipoleTransition::from_wavelength(25.0, [1.0, 0.0, 0.4]).unwrap(),
        ],
        Orientation::FixedVector,
    )
    .unwrap();
    let s2 = species(60.0, [0.3, -0.7, 0.9], Orientation::IsotropicAverage);
    let cfg = PairConfiguration::new(g, g.point(0.3, 0.4).unwrap(), g.point(0.55, 0.8).unwrap(), 0.8, s1, s2).unwrap();
    let a = dispersion_energy(&cfg).unwrap();
    let b = dispersion_energy(&cfg.swapped()).unwrap();
    assert!(((a.total - b.total) / a.total).abs() < 1e-10, "{} {}", a.total, b.total);
    let parts: f64 = a.per_level_pair.iter().map(|p| p.energy).sum();
    assert!(((parts - a.total) / a.total).abs() < 1e-12);
    assert!(a.tail_estimate >= 0.0 && a.tail_estimate < 1e-5 * a.total.abs());
}

#[test]
fn isotropic_energy_is_attractive() {
    let g = Geometry::square(1.0).unwrap();
    let s = species(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage);
    for z in [0.02, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let cfg = PairConfiguration::new(
            g,
            g.point(0.4, 0.45).unwrap(),
            g.point(0.5, 0.6).unwrap(),
            z,
            s.clone(),
            s.clone(),
        )
        .unwrap();
        assert!(dispersion_energy(&cfg).unwrap().total < 0.0, "z = {z}");
    }
}

#[test]
fn free_space_recovery() {
    for r in freespace_check().unwrap() {
        assert!(r.passed, "{}: {:e} {}", r.name, r.max_deviation, r.detail);
    }
}

#[test]
fn tensor_symmetric_at_coincident_points() {
    let g = Geometry::new(1.0, 0.8).unwrap();
    let s = species(50.0, [1.0, 0.0, 0.0], Orientation::FixedVector);
    let p = g.point(0.3, 0.55).unwrap();
    let cfg = PairConfiguration::new(g, p, p, 0.6, s.clone(), s.clone()).unwrap();
    let f = f_tensor(&cfg, &s.transitions()[0], Truncation::RelativeTail(1e-10)).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            // longitudinal-transverse entries are antisymmetric at equal points
            let sign = if (i == 2) != (j == 2) { -1.0 } else { 1.0 };
            let (a, b) = (f.tensor.get(i, j), sign * f.tensor.get(j, i));
            assert!((a - b).abs() <= 1e-12 * f.tensor.max_abs(), "{i}{j}: {a} {b}");
        }
    }
}

#[test]
fn certified_tail_bounds_the_truncation_error() {
    let g = Geometry::square(1.0).unwrap();
    let s = species(100.0, [0.0, 0.0, 1.0], Orientation::FixedVector);
    let cfg = PairConfiguration::new(
        g,
        g.point(0.31, 0.47).unwrap(),
        g.point(0.62, 0.4).unwrap(),
        0.3,
        s.clone(),
        s.clone(),
    )
    .unwrap();
    let level = &s.transitions()[0];
    let reference = f_tensor(&cfg, level, Truncation::MaxCutoff(400.0)).unwrap();
    for k in [40.0, 60.0, 90.0] {
        let t = f_tensor(&cfg, level, Truncation::MaxCutoff(k)).unwrap();
        let bound = tail_bound(&g, k, 0.3, level.energy(), &cfg.conventions, &ModeSelection::All);
        assert!((t.tail - bound).abs() <= 1e-12 * bound);
        for i in 0..3 {
            for j in 0..3 {
                let err = (t.tensor.get(i, j) - reference.tensor.get(i, j)).abs();
                assert!(err <= bound, "K={k} {i}{j}: {err:e} > {bound:e}");
            }
        }
    }
}

#[test]
fn relative_tail_meets_tolerance() {
    let g = Geometry::square(1.0).unwrap();
    let s = species(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage);
    let cfg = PairConfiguration::centered(g, 0.2, s.clone()).unwrap();
    let f = f_tensor(&cfg, &s.transitions()[0], Truncation::RelativeTail(1e-9)).unwrap();
    assert!(f.tail <= 1e-9 * f.tensor.max_abs());
}

#[test]
fn mode_cap_is_enforced() {
    let g = Geometry::square(1.0).unwrap();
    let s = species(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage);
    let cfg = PairConfiguration::centered(g, 0.001, s).unwrap();
    match dispersion_energy(&cfg) {
        Err(Error::ModeCapExceeded { cap, .. }) => assert_eq!(cap, 1_000_000),
        other => panic!("{other:?}"),
    }
}

#[test]
fn retarded_closed_form_tracks_te_channel_decay() {
    // Functional form only: the TE-only mode sum decays as e^{-2πz/a}/z
    // once higher TE modes have died out.
    let g = Geometry::square(1.0).unwrap();
    let s = species(100.0, [0.0, 0.0, 1.0], Orientation::IsotropicAverage);
    let mut cfg = PairConfiguration::centered(g, 4.0, s).unwrap();
    cfg.modes = ModeSelection::Only(Polarization::TE);
    let u = |z: f64| dispersion_energy(&cfg.with_z(z)).unwrap().total;
    let closed = |z: f64| u_retarded_closed(&cfg.with_z(z)).unwrap();
    let r_sum = u(5.0) / u(4.0);
    let r_closed = closed(5.0) / closed(4.0);
    assert!((r_sum / r_closed - 1.0).abs() < 0.03, "{r_sum} {r_closed}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smallz_tensor_form_equals_freespace_tensor(
        d1 in prop::array::uniform3(-2.0f64..2.0),
        d2 in prop::array::uniform3(-2.0f64..2.0),
        z in 0.001f64..1.0,
        l1 in 10.0f64..500.0,
        l2 in 10.0f64..500.0,
    ) {
        prop_assume!(d1.iter().any(|v| v.abs() > 1e-3) && d2.iter().any(|v| v.abs() > 1e-3));
        let s1 = species(l1, d1, Orientation::FixedVector);
        let s2 = species(l2, d2, Orientation::FixedVector);
        let a = u_vdw_smallz(&s1, &s2, z, 1.0);
        let b = u_freespace_vdw(&s1, &s2, z, FreeSpaceForm::Tensor, 1.0);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()), "{a} {b}");
    }

    #[test]
    fn isotropic_average_matches_explicit_average(d in prop::array::uniform3(-1.0f64..1.0)) {
        prop_assume!(d.iter().any(|v| v.abs() > 1e-3));
        let iso = species(30.0, d, Orientation::IsotropicAverage);
        let lvl = iso.transitions()[0];
        let m = dipole_moment_matrix(&lvl, Orientation::IsotropicAverage);
        // average of d dᵀ over the three axis-aligned orientations of |d|
        let n = lvl.dipole_norm_sqr().sqrt();
        let mut avg = Tensor3::default();
        for axis in 0..3 {
            let mut v = [0.0; 3];
            v[axis] = n;
            let t = DipoleTransition::new(lvl.energy(), v).unwrap();
            avg = avg + dipole_moment_matrix(&t, Orientation::FixedVector).scaled(1.0 / 3.0);
        }
        let f = Tensor3([[1.0, 0.2, -0.3], [0.5, -0.5, 0.1], [0.0, 0.7, 1.0]]);
        let a = quartic_contraction(&m, &m, &f, &f);
        let b = quartic_contraction(&avg, &avg, &f, &f);
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }

    #[test]
    fn polarizability_monotone(u1 in 0.0f64..10.0, du in 1e-3f64..10.0) {
        let s = species(20.0, [0.3, 0.1, 0.9], Orientation::IsotropicAverage);
        prop_assert!(polarizability(&s, u1) > polarizability(&s, u1 + du));
        prop_assert!(polarizability(&s, u1) > 0.0);
    }
}
