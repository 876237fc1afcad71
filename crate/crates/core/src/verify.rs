//! Seeded self-check suite: pseudoinverse identities, the Hadamard bound,
//! the UPDA sum/closed-form identity, constructive designs and the
//! spatially matched ratio.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::acoustics::{build_plant, ula_directivity, AcousticModel, Wavenumber, SPEED_OF_SOUND};
use crate::analysis::{analyze_gram, FocusState, DEFAULT_EQUAL_TOL, DEFAULT_IDEAL_TOL};
use crate::conditions::{
    asymmetric_design, osd_wavelength_for_span, ula_design, upda_crosstalk, upda_zeros,
};
use crate::geometry::{build_geometry, polar, rotate_z, GeometrySpec};
use crate::linalg::{
    gram, gramian, hadamard_bound, pseudoinverse, spectral_norm, svd_underdetermined,
    ComplexMatrix, C64, SINGULARITY_TOLERANCE,
};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyOptions {
    pub seed: u64,
    pub quick: bool,
    /// Added to every design angle (radians) before the plant is rebuilt.
    pub perturb: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            quick: false,
            perturb: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub tolerance: f64,
    /// Worst value of the checked quantity.
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(
    name: &'static str,
    cases: usize,
    tolerance: f64,
    residual: f64,
    detail: String,
) -> CheckResult {
    CheckResult {
        name,
        passed: residual <= tolerance,
        cases,
        tolerance,
        residual,
        detail,
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn random_system(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let m = rng.gen_range(1..=8);
    let l = rng.gen_range(m..=16);
    random_matrix(rng, m, l)
}

fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(f64::MIN_POSITIVE)
}

fn moore_penrose(rng: &mut ChaCha8Rng, n: usize) -> Vec<CheckResult> {
    let (mut identity, mut residual, mut excess) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut failures = 0;
    for _ in 0..n {
        let g = random_system(rng);
        let f = match pseudoinverse(&g, SINGULARITY_TOLERANCE) {
            Ok(f) => f,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let gf = g.matmul(&f).unwrap();
        let fg = f.matmul(&g).unwrap();
        identity = identity
            .max(rel(&gf.matmul(&g).unwrap(), &g))
            .max(rel(&fg.matmul(&f).unwrap(), &f))
            .max(gf.hermitian_defect() / gf.max_abs())
            .max(fg.hermitian_defect() / fg.max_abs());

        let d = random_matrix(rng, g.rows(), 1);
        let q = f.matmul(&d).unwrap();
        let r = g.matmul(&q).unwrap().sub(&d).unwrap();
        residual = residual.max(r.frobenius_norm() / d.frobenius_norm());
        // any other exact solution q + (I − FG) w is at least as long
        let w = random_matrix(rng, g.cols(), 1);
        let z = w.sub(&fg.matmul(&w).unwrap()).unwrap();
        let other = ComplexMatrix::from_fn(g.cols(), 1, |i, _| q[(i, 0)] + z[(i, 0)]);
        excess = excess.max(q.frobenius_norm() / other.frobenius_norm() - 1.0);
    }
    vec![
        check(
            "moore_penrose_identities",
            n,
            1e-10,
            if failures > 0 {
                f64::INFINITY
            } else {
                identity
            },
            format!("{failures} singular draws"),
        ),
        check("minimum_norm_residual", n, 1e-10, residual, String::new()),
        check(
            "minimum_norm_length",
            n,
            1e-12,
            excess.max(0.0),
            "||q_pinv|| / ||q_other|| - 1".into(),
        ),
    ]
}

fn hadamard(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..n {
        let gamma = gram(&random_system(rng)).unwrap();
        worst = worst.max(gramian(&gamma) / hadamard_bound(&gamma) - 1.0);
    }
    check(
        "hadamard_bound",
        n,
        1e-10,
        worst,
        "max gramian/bound - 1".into(),
    )
}

fn upda_identity(rng: &mut ChaCha8Rng, n: usize) -> Vec<CheckResult> {
    let mut worst = 0.0_f64;
    for _ in 0..n {
        let l = 2 * rng.gen_range(1..=50) + 1;
        let eta_max = rng.gen_range(0.01..0.5);
        let k = rng.gen_range(0.0..20.0 * PI) / eta_max;
        let r = rng.gen_range(0.5..5.0);
        let c = upda_crosstalk(l, eta_max, k, r).unwrap();
        worst = worst.max((c.sum_form - c.closed_form).abs() / (l as f64 / (r * r)));
    }

    let mut zero = 0.0_f64;
    let mut cases = 0;
    for l in (3..=41).step_by(2) {
        for n in 1..(2 * l as i64) {
            let Ok(d) = upda_zeros(l, 0.09, PI / 3.0, n, SPEED_OF_SOUND) else {
                continue;
            };
            let eta_max = 2.0 * 0.09 * (PI / 3.0).sin();
            let c = upda_crosstalk(l, eta_max, 2.0 * PI / d.wavelength, 1.0).unwrap();
            zero = zero.max(c.sum_form.abs() / l as f64);
            cases += 1;
        }
    }
    vec![
        check(
            "upda_sum_closed_form",
            n,
            1e-11,
            worst,
            "|sum - closed| / (L/R^2)".into(),
        ),
        check("upda_zeros", cases, 1e-10, zero, "|sum| / (L/R^2)".into()),
    ]
}

fn super_ideal_residual(spec: &GeometrySpec, k: Wavenumber, r0: f64) -> f64 {
    let lay = match build_geometry(spec) {
        Ok(l) => l,
        Err(_) => return f64::INFINITY,
    };
    let model = AcousticModel::plane_wave(k, r0).unwrap();
    let plant = build_plant(&model, &lay.sources, &lay.points).unwrap();
    let a = analyze_gram(&plant.matrix, DEFAULT_IDEAL_TOL, DEFAULT_EQUAL_TOL).unwrap();
    let kappa = svd_underdetermined(&plant.matrix).unwrap().condition_number;
    if a.state == FocusState::SuperIdeal {
        (kappa - 1.0).abs()
    } else {
        (kappa - 1.0).abs().max(a.normalized_offdiag)
    }
}

fn constructive(perturb: f64) -> Vec<CheckResult> {
    let a = 0.09;
    let mut osd = 0.0_f64;
    for span in [11.0_f64, 57.0, 120.0, 180.0] {
        let w = osd_wavelength_for_span(span.to_radians(), a, 1).unwrap();
        let spec = GeometrySpec::TwoChannelSymmetric {
            a,
            gamma: (span / 2.0).to_radians() + perturb,
            r: 1.0,
        };
        osd = osd.max(super_ideal_residual(
            &spec,
            Wavenumber::from_wavelength(w).unwrap(),
            1.0,
        ));
    }

    let mut asym = 0.0_f64;
    for rot in [30.0_f64, 70.0] {
        let g = 30f64.to_radians();
        let x1 = rotate_z([0.0, a, 0.0], rot.to_radians() + perturb);
        let (n1, n2) = (polar(1.0, g), polar(1.0, -g));
        let d = asymmetric_design(
            n1,
            n2,
            rotate_z([0.0, a, 0.0], rot.to_radians()),
            1,
            SPEED_OF_SOUND,
        )
        .unwrap();
        let spec = GeometrySpec::TwoChannelGeneral {
            sources: vec![n1, n2],
            points: vec![x1, [-x1[0], -x1[1], 0.0]],
        };
        asym = asym.max(super_ideal_residual(&spec, d.wavenumber().unwrap(), 1.0));
    }

    let mut upda = 0.0_f64;
    for l in [5usize, 20] {
        let span = 60f64.to_radians();
        let d = upda_zeros(l, a, span / 2.0, 4, SPEED_OF_SOUND).unwrap();
        let spec = GeometrySpec::Upda {
            l,
            delta_gamma: span + perturb,
            a,
            r: 1.0,
        };
        upda = upda.max(super_ideal_residual(&spec, d.wavenumber().unwrap(), 1.0));
    }

    let w = SPEED_OF_SOUND / 4899.0;
    let design = ula_design(20, 0.012, w, &[-2.0, 0.0, 2.0]).unwrap();
    let spec = GeometrySpec::Ula {
        l: 20,
        dx: 0.012,
        control_angles: design.angles.iter().map(|t| t + perturb).collect(),
        r: 100.0,
    };
    let ula = super_ideal_residual(&spec, Wavenumber::from_wavelength(w).unwrap(), 100.0);
    let mut null = 0.0_f64;
    for (i, &t0) in design.angles.iter().enumerate() {
        for (j, &t) in design.angles.iter().enumerate() {
            if i != j {
                null = null.max(ula_directivity(t + perturb, t0, 20, design.alpha));
            }
        }
    }

    vec![
        check("osd_super_ideal", 4, 1e-9, osd, "|kappa - 1|".into()),
        check(
            "asymmetric_super_ideal",
            2,
            1e-9,
            asym,
            "|kappa - 1|".into(),
        ),
        check("upda_super_ideal", 2, 1e-9, upda, "|kappa - 1|".into()),
        check("ula_super_ideal", 1, 1e-9, ula, "|kappa - 1|".into()),
        check(
            "ula_nulls",
            6,
            1e-10,
            null,
            "directivity at other control points".into(),
        ),
    ]
}

fn matched_ratio(rng: &mut ChaCha8Rng, n: usize) -> CheckResult {
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..n {
        let g = random_system(rng);
        let h0 = random_matrix(rng, g.cols(), g.rows());
        let j = crate::analysis::spatially_matched_ratio(&g, &h0).unwrap();
        worst = worst.max(j / spectral_norm(&g).unwrap().powi(2) - 1.0);
    }
    check(
        "spatially_matched_bound",
        n,
        1e-12,
        worst,
        "max J / ||G||^2 - 1".into(),
    )
}

/// Runs every check. Deterministic for a given seed.
pub fn run(options: VerifyOptions) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let scale = if options.quick { 10 } else { 1 };
    let mut checks = moore_penrose(&mut rng, 500 / scale);
    checks.push(hadamard(&mut rng, 10_000 / scale));
    checks.extend(upda_identity(&mut rng, 10_000 / scale));
    checks.extend(constructive(options.perturb));
    checks.push(matched_ratio(&mut rng, 200 / scale));
    VerifyReport { options, checks }
}
