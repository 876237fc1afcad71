mod common;

use common::*;
use focusing::linalg::*;
use proptest::prelude::*;

#[test]
fn lu_determinant_matches_leibniz() {
    let mut r = rng(1);
    for n in 1..=5 {
        for _ in 0..20 {
            let a = random_dense(&mut r, n, n);
            let lu = Lu::new(&to_matrix(&a)).unwrap();
            let want = det_leibniz(&a);
            assert!(
                (lu.determinant() - want).norm() <= 1e-12 * want.norm().max(1.0),
                "n = {n}"
            );
        }
    }
}

#[test]
fn lu_solve_matches_gauss_jordan() {
    let mut r = rng(2);
    for n in 1..=6 {
        let a = random_dense(&mut r, n, n);
        let b = random_dense(&mut r, n, 2);
        let x = Lu::new(&to_matrix(&a))
            .unwrap()
            .solve(&to_matrix(&b))
            .unwrap();
        let want = mul(&inverse_gauss_jordan(&a).unwrap(), &b);
        assert!(diff(&from_matrix(&x), &want) < 1e-11 * frobenius(&want));
    }
}

#[test]
fn eigenvalues_2x2_closed_form() {
    let mut r = rng(3);
    for _ in 0..200 {
        let g = random_dense(&mut r, 2, 3);
        let h = mul(&g, &adjoint(&g));
        let e = eig_hermitian(&to_matrix(&h)).unwrap();
        let want = eig2(h[0][0].re, h[0][1], h[1][1].re);
        for (got, w) in e.eigenvalues.iter().zip(want) {
            assert!((got - w).abs() < 1e-12 * want[0], "{got} vs {w}");
        }
    }
}

#[test]
fn eigenvalues_3x3_characteristic_roots() {
    let mut r = rng(4);
    for _ in 0..200 {
        let g = random_dense(&mut r, 3, 5);
        let h = mul(&g, &adjoint(&g));
        let e = eig_hermitian(&to_matrix(&h)).unwrap();
        let want = eig3(&h);
        for (got, w) in e.eigenvalues.iter().zip(want) {
            assert!((got - w).abs() < 1e-10 * want[0], "{got} vs {w}");
        }
    }
}

#[test]
fn eigenvectors_are_unitary() {
    let mut r = rng(5);
    for m in 1..=8 {
        let g = random_dense(&mut r, m, m + 3);
        let h = mul(&g, &adjoint(&g));
        let e = eig_hermitian(&to_matrix(&h)).unwrap();
        let u = from_matrix(&e.eigenvectors);
        assert!(diff(&mul(&adjoint(&u), &u), &identity(m)) < 1e-12);
        assert!(diff(&from_matrix(&e.reconstruct()), &h) < 1e-12 * frobenius(&h));
    }
}

#[test]
fn two_stage_pseudoinverse_matches_explicit_formula() {
    let mut r = rng(6);
    for _ in 0..100 {
        let m = r.gen_range(1..=6);
        let l = r.gen_range(m..=10);
        let g = random_dense(&mut r, m, l);
        let gh = adjoint(&g);
        let want = mul(&gh, &inverse_gauss_jordan(&mul(&g, &gh)).unwrap());
        let got = pseudoinverse(&to_matrix(&g), SINGULARITY_TOLERANCE).unwrap();
        assert!(diff(&from_matrix(&got), &want) < 1e-10 * frobenius(&want));
        let via_svd =
            pseudoinverse_from_svd(&svd_underdetermined(&to_matrix(&g)).unwrap()).unwrap();
        assert!(diff(&from_matrix(&via_svd), &want) < 1e-10 * frobenius(&want));
    }
}

#[test]
fn svd_reconstructs_plant() {
    let mut r = rng(7);
    for m in 1..=6 {
        let g = random_dense(&mut r, m, m + 2);
        let s = svd_underdetermined(&to_matrix(&g)).unwrap();
        let u = from_matrix(&s.field_modes);
        let v = from_matrix(&s.source_mode_matrix().unwrap());
        let sigma: Dense = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| C64::new(if i == j { s.singular_values[i] } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        let back = mul(&mul(&u, &sigma), &adjoint(&v));
        assert!(diff(&back, &g) < 1e-11 * frobenius(&g));
        assert!(
            (s.singular_values[0] - spectral_norm_power(&g, 3000)).abs()
                < 1e-8 * s.singular_values[0]
        );
    }
}

#[test]
fn rank_deficient_plant() {
    let row: Vec<C64> = vec![C64::new(1.0, 0.5), C64::new(-0.2, 1.0), C64::new(0.3, 0.0)];
    let g = to_matrix(&vec![
        row.clone(),
        row.iter().map(|z| z * C64::new(0.0, 2.0)).collect(),
    ]);
    let s = svd_underdetermined(&g).unwrap();
    assert_eq!(s.rank, 1);
    assert!(s.condition_number.is_infinite());
    assert!(matches!(
        pseudoinverse(&g, SINGULARITY_TOLERANCE),
        Err(focusing::Error::SingularGram { .. })
    ));
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(complex(), n)
}

fn plant() -> impl Strategy<Value = Dense> {
    (1usize..=5)
        .prop_flat_map(|m| (Just(m), m..=8))
        .prop_flat_map(|(m, l)| prop::collection::vec(vector(l), m))
}

use rand::Rng;

proptest! {
    #[test]
    fn hermitian_angle_bounds_and_symmetry(u in vector(6), v in vector(6), s in complex()) {
        prop_assume!(vnorm(&u) > 1e-3 && vnorm(&v) > 1e-3 && s.norm() > 1e-3);
        let (cu, cv) = (ComplexVector::new(u.clone()).unwrap(), ComplexVector::new(v.clone()).unwrap());
        let t = hermitian_angle(&cu, &cv).unwrap();
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-15).contains(&t));
        prop_assert!((t - hermitian_angle(&cv, &cu).unwrap()).abs() < 1e-14);
        let scaled = ComplexVector::new(u.iter().map(|z| z * s).collect()).unwrap();
        prop_assert!((t - hermitian_angle(&scaled, &cv).unwrap()).abs() < 1e-7);
        prop_assert!(hermitian_angle(&cu, &scaled).unwrap() < 1e-7);
        let cos = dot(&u, &v).norm() / (vnorm(&u) * vnorm(&v));
        prop_assert!((t.cos() - cos).abs() < 1e-12);
    }

    #[test]
    fn gram_is_hermitian_psd(g in plant()) {
        let gm = to_matrix(&g);
        let gamma = gram(&gm).unwrap();
        prop_assert_eq!(gamma.hermitian_defect(), 0.0);
        for i in 0..gamma.rows() {
            prop_assert_eq!(gamma[(i, i)].im, 0.0);
            prop_assert!(gamma[(i, i)].re >= 0.0);
        }
        let want = mul(&g, &adjoint(&g));
        prop_assert!(diff(&from_matrix(&gamma), &want) <= 1e-14 * frobenius(&want).max(1e-300));
        let e = eig_hermitian(&gamma).unwrap();
        prop_assert!(e.eigenvalues.iter().all(|&x| x >= 0.0));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn gramian_never_exceeds_hadamard(g in plant()) {
        let gamma = gram(&to_matrix(&g)).unwrap();
        let b = hadamard_bound(&gamma);
        prop_assert!(gramian(&gamma) <= b * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn forward_residual_is_consistent(g in plant(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let gm = to_matrix(&g);
        let q = ComplexVector::new(random_dense(&mut r, 1, gm.cols()).remove(0)).unwrap();
        let d = ComplexVector::new(random_dense(&mut r, 1, gm.rows()).remove(0)).unwrap();
        let f = forward_and_residual(&gm, &q, &d).unwrap();
        let p: Vec<C64> = g.iter().map(|row| row.iter().zip(q.iter()).map(|(a, b)| a * b).sum()).collect();
        for i in 0..gm.rows() {
            prop_assert!((f.pressures[i] - p[i]).norm() < 1e-14);
            prop_assert!((f.residual[i] - (d[i] - p[i])).norm() < 1e-14);
        }
    }
}
