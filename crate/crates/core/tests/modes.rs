use proptest::prelude::*;
use wgdisp::modes::{mode_count_estimate, modes_in_shell};
use wgdisp::*;

#[test]
fn unit_normalized_modes_integrate_to_one() {
    for g in [Geometry::square(1.0).unwrap(), Geometry::new(1.0, 1.7).unwrap()] {
        for m in 0..=3u32 {
            for n in 0..=3u32 {
                for pol in [Polarization::TE, Polarization::TM] {
                    let Ok(mode) = ModeIndex::new(pol, m, n) else { continue };
                    for k in [0.0, 7.5] {
                        let v = normalization_integral(&g, &mode, k, Normalization::UnitNormalized).unwrap();
                        assert!((v - 1.0).abs() < 1e-9, "{mode} k={k}: {v}");
                    }
                }
            }
        }
    }
}

#[test]
fn paper_literal_te_axis_modes_integrate_to_two() {
    let g = Geometry::new(1.0, 1.3).unwrap();
    for (m, n) in [(1, 0), (0, 1), (3, 0), (0, 2)] {
        let v = normalization_integral(&g, &ModeIndex::te(m, n).unwrap(), 0.0, Normalization::PaperLiteral).unwrap();
        assert!((v - 2.0).abs() < 1e-9, "TE{m}{n}: {v}");
    }
    let v = normalization_integral(&g, &ModeIndex::te(2, 1).unwrap(), 0.0, Normalization::PaperLiteral).unwrap();
    assert!((v - 1.0).abs() < 1e-9);
}

#[test]
fn enumeration_is_sorted_and_complete() {
    let g = Geometry::new(1.0, 1.5).unwrap();
    let modes = enumerate_modes(&g, 12.0);
    let cut: Vec<f64> = modes.iter().map(|m| cutoff_wavenumber(&g, m)).collect();
    assert!(cut.windows(2).all(|w| w[0] <= w[1] * (1.0 + 1e-12)));
    assert!(cut.iter().all(|k| *k <= 12.0));
    let mut brute = 0;
    for m in 0..10u32 {
        for n in 0..10u32 {
            for pol in [Polarization::TE, Polarization::TM] {
                if let Ok(mode) = ModeIndex::new(pol, m, n) {
                    if cutoff_wavenumber(&g, &mode) <= 12.0 {
                        brute += 1;
                    }
                }
            }
        }
    }
    assert_eq!(modes.len(), brute);
    assert!(mode_count_estimate(&g, 12.0) >= brute);
}

#[test]
fn shells_partition_the_spectrum() {
    let g = Geometry::new(1.0, 1.2).unwrap();
    let all = modes_in_shell(&g, 0.0, 30.0);
    let parts: usize = [(0.0, 10.0), (10.0, 17.3), (17.3, 30.0)]
        .iter()
        .map(|(lo, hi)| modes_in_shell(&g, *lo, *hi).len())
        .sum();
    assert_eq!(all.len(), parts);
}

proptest! {
    #[test]
    fn transposed_geometry_maps_cutoffs(a in 0.3f64..3.0, b in 0.3f64..3.0, m in 0u32..6, n in 0u32..6) {
        let g = Geometry::new(a, b).unwrap();
        prop_assume!(m + n > 0);
        let mode = ModeIndex::te(m, n).unwrap();
        let k = cutoff_wavenumber(&g, &mode);
        let kt = cutoff_wavenumber(&g.transposed(), &mode.transposed());
        prop_assert!((k - kt).abs() <= 1e-12 * k);
    }

    #[test]
    fn frequency_exceeds_cutoff(k in -50.0f64..50.0, m in 1u32..5, n in 1u32..5) {
        let g = Geometry::square(1.0).unwrap();
        let mode = ModeIndex::tm(m, n).unwrap();
        prop_assert!(mode_frequency(&g, &mode, k, 1.0) >= cutoff_wavenumber(&g, &mode));
    }

    #[test]
    fn profiles_vanish_on_walls(y in 0.0f64..1.0, m in 1u32..5, n in 0u32..5, k in 0.0f64..10.0) {
        let g = Geometry::square(1.0).unwrap();
        let wall = g.point(0.0, y).unwrap();
        for pol in [Polarization::TE, Polarization::TM] {
            let Ok(mode) = ModeIndex::new(pol, m, n) else { continue };
            let e = transverse_profile(&g, &mode, k, &wall, Normalization::UnitNormalized).unwrap();
            // tangential components (y, z) vanish on x = 0
            prop_assert!(e.0[1].norm() < 1e-12);
            prop_assert!(e.0[2].norm() < 1e-12);
        }
    }
}
