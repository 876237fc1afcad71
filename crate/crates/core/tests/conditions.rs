mod common;

use std::f64::consts::PI;

use common::*;
use focusing::acoustics::{
    build_plant, ula_steering_vector, AcousticModel, Wavenumber, SPEED_OF_SOUND,
};
use focusing::conditions::*;
use focusing::geometry::{
    build_geometry, path_metrics, polar, upda_path_differences, GeometrySpec,
};
use focusing::linalg::{ComplexMatrix, C64};
use proptest::prelude::*;

const A: f64 = 0.09;

fn plant(spec: &GeometrySpec, model: AcousticModel) -> ComplexMatrix {
    let lay = build_geometry(spec).unwrap();
    build_plant(&model, &lay.sources, &lay.points)
        .unwrap()
        .matrix
}

#[test]
fn osd_plane_wave_rows_are_orthogonal() {
    for span in [11.0_f64, 40.0, 57.0, 90.0, 120.0, 180.0] {
        let w = osd_wavelength_for_span(span.to_radians(), A, 1).unwrap();
        let d = osd_design(w, A, 1, SPEED_OF_SOUND).unwrap();
        let k = d.wavenumber().unwrap();
        let g = from_matrix(&plant(
            &GeometrySpec::TwoChannelSymmetric {
                a: A,
                gamma: d.gamma_opt.unwrap(),
                r: 1.0,
            },
            AcousticModel::plane_wave(k, 1.0).unwrap(),
        ));
        assert!(dot(&g[0], &g[1]).norm() < 1e-12, "span {span}");
        let check = two_channel_ideal_check(&to_matrix(&g), 1e-9).unwrap();
        assert!(check.holds && check.crosstalk < 1e-12);
    }
}

#[test]
fn monopole_check_at_full_span() {
    let lay = build_geometry(&GeometrySpec::TwoChannelSymmetric {
        a: A,
        gamma: PI / 2.0,
        r: 1.0,
    })
    .unwrap();
    let m = path_metrics(&lay.sources, lay.points[0], lay.points[1]).unwrap();
    // sources on ±y: the path difference is exactly 2a of opposite sign
    assert!(((m.eta[0] - m.eta[1]).abs() - 4.0 * A).abs() < 1e-15);
    let c = monopole_ideal_check(&m, 8.0 * A, 1e-9).unwrap();
    assert!(c.holds, "{c:?}");
    assert!(!monopole_ideal_check(&m, 5.0 * A, 1e-9).unwrap().holds);

    let k = Wavenumber::from_wavelength(8.0 * A).unwrap();
    let g = build_plant(&AcousticModel::monopole(k), &lay.sources, &lay.points)
        .unwrap()
        .matrix;
    let g = from_matrix(&g);
    assert!(dot(&g[0], &g[1]).norm() < 1e-14);
}

#[test]
fn osd_infeasible_below_low_frequency() {
    let d = osd_design(9.0 * A, A, 1, SPEED_OF_SOUND).unwrap();
    assert!(!d.feasible && d.gamma_opt.is_none() && d.violated.is_some());
    assert_eq!(d.wavelength_low, 8.0 * A);
    assert!(osd_design(8.0 * A, A, 1, SPEED_OF_SOUND).unwrap().feasible);
}

#[test]
fn asymmetric_pair_reproduces_design_wavelength() {
    let g = 30f64.to_radians();
    let (n1, n2) = (polar(1.0, g), polar(1.0, -g));
    for rot in [10.0_f64, 30.0, 50.0, 70.0] {
        let x1 = polar(A, PI / 2.0 + rot.to_radians());
        let d = asymmetric_design(n1, n2, x1, 1, SPEED_OF_SOUND).unwrap();
        let ang = |n: [f64; 3]| ((n[0] * x1[0] + n[1] * x1[1]) / A).acos();
        let partner = asymmetric_angle_pair(ang(n2), d.wavelength, A, 1).unwrap();
        assert!((partner - ang(n1)).abs() < 1e-9, "rotation {rot}");
        let dn = ((n1[0] - n2[0]).powi(2) + (n1[1] - n2[1]).powi(2)).sqrt();
        let theta = asymmetric_angle(dn, A, d.wavelength, 1).unwrap();
        assert!((theta - d.theta.unwrap()).abs() < 1e-12);
    }
}

#[test]
fn asymmetric_perpendicular_is_degenerate() {
    let d = asymmetric_design(
        polar(1.0, 0.5),
        polar(1.0, -0.5),
        [A, 0.0, 0.0],
        1,
        SPEED_OF_SOUND,
    )
    .unwrap();
    assert!(!d.feasible && d.frequency_hz.is_infinite());
}

fn brute_sum(l: usize, eta_max: f64, k: f64, r: f64) -> f64 {
    let step = 2.0 * eta_max / (l as f64 - 1.0);
    let half = (l as f64 - 1.0) / 2.0;
    let z: C64 = (0..l)
        .map(|i| C64::from_polar(1.0, k * (i as f64 - half) * step))
        .sum();
    assert!(z.im.abs() < 1e-9 * l as f64);
    z.re / (r * r)
}

#[test]
fn upda_grating_lobes_reach_full_crosstalk() {
    let (l, eta_max) = (9, 0.1);
    let k = 2.0 * PI * (l as f64 - 1.0) / (2.0 * eta_max);
    let c = upda_crosstalk(l, eta_max, k, 1.0).unwrap();
    assert!(c.grating_lobe);
    assert!((c.closed_form - 9.0).abs() < 1e-9 && (c.sum_form - 9.0).abs() < 1e-9);
}

#[test]
fn upda_far_field_path_differences_are_uniform() {
    for l in [3usize, 8, 20, 51] {
        let spec = GeometrySpec::Upda {
            l,
            delta_gamma: PI / 3.0,
            a: A,
            r: 1e6,
        };
        let lay = build_geometry(&spec).unwrap();
        let m =
            focusing::geometry::path_metrics_far_field(&lay.sources, lay.points[0], lay.points[1])
                .unwrap();
        let (eta, step) = upda_path_differences(l, PI / 3.0, A);
        let mut sorted = m.eta.clone();
        sorted.sort_by(f64::total_cmp);
        for (got, want) in sorted.iter().zip(&eta) {
            assert!((got - want).abs() < 1e-12);
        }
        for w in sorted.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-12);
        }
    }
}

#[test]
fn upda_even_and_excluded_branches() {
    assert!(matches!(
        upda_zeros(5, A, PI / 6.0, 10, SPEED_OF_SOUND),
        Err(focusing::Error::ExcludedBranch { n: 10, l: 5 })
    ));
    let d = upda_zeros(4, A, PI / 6.0, 1, SPEED_OF_SOUND).unwrap();
    let c = upda_crosstalk(4, 2.0 * A * (PI / 6.0).sin(), 2.0 * PI / d.wavelength, 1.0).unwrap();
    assert!(c.sum_form.abs() < 1e-12);
}

#[test]
fn ula_m_max_matches_brute_force_count() {
    for f in [800.0, 1484.0, 2000.0, 3435.0, 4899.0, 7000.0] {
        let w = SPEED_OF_SOUND / f;
        let lim = ula_symmetric_limits(20, 0.012, w).unwrap();
        // count symmetric integer offsets with |i α| ≤ 1
        let mut count = 1;
        let mut i = 1;
        while i as f64 * lim.alpha <= 1.0 + 1e-12 && 2 * i < 20 {
            count = 2 * i + 1;
            i += 1;
        }
        assert_eq!(lim.m_max, count, "f = {f}");

        let k = Wavenumber::from_wavelength(w).unwrap();
        let rows: Vec<_> = lim
            .angles
            .iter()
            .map(|&t| ula_steering_vector(t, 20, 0.012, k))
            .collect();
        for (i, a) in rows.iter().enumerate() {
            for (j, b) in rows.iter().enumerate() {
                let want = if i == j { 20.0 } else { 0.0 };
                assert!((dot(a, b) - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn ula_rejects_bad_offsets() {
    let w = SPEED_OF_SOUND / 4899.0;
    assert!(matches!(
        ula_design(20, 0.012, w, &[0.0, 0.5]),
        Err(focusing::Error::NonIntegerOffset { .. })
    ));
    assert!(matches!(
        ula_design(20, 0.012, w, &[-20.0, 20.0]),
        Err(focusing::Error::GratingOffset { .. })
    ));
    assert!(matches!(
        ula_design(20, 0.012, w, &[0.0, 5.0]),
        Err(focusing::Error::ArcsineDomain { .. })
    ));
}

proptest! {
    #[test]
    fn upda_closed_form_matches_complex_sum(l in 2usize..64, eta_max in 0.01..0.5f64, k in 0.0..150.0f64, r in 0.5..5.0f64) {
        let c = upda_crosstalk(l, eta_max, k, r).unwrap();
        let b = brute_sum(l, eta_max, k, r);
        let scale = l as f64 / (r * r);
        prop_assert!((c.sum_form - b).abs() <= 1e-11 * scale);
        prop_assert!((c.closed_form - b).abs() <= 1e-11 * scale);
    }

    #[test]
    fn ula_design_gram_is_scaled_identity(f in 1500.0..8000.0f64, base in -2i32..=0) {
        let w = SPEED_OF_SOUND / f;
        let alpha = w / (20.0 * 0.012);
        let offsets: Vec<f64> = (0..3).map(|i| (base + i) as f64).filter(|o| (o * alpha).abs() <= 1.0).collect();
        prop_assume!(offsets.len() >= 2);
        let d = ula_design(20, 0.012, w, &offsets).unwrap();
        prop_assert!(d.gram_defect < 1e-10);
    }
}
