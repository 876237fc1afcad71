use serde::Serialize;

use super::{dot, eig_hermitian, norm, norm_sqr, re, ComplexMatrix, ComplexVector, Lu, C64};
use crate::error::{Error, Result};

/// `gramian / hadamard_bound` at or below this flags a singular Gram.
pub const SINGULARITY_TOLERANCE: f64 = 1e-12;
/// Singular values at or below `RANK_TOLERANCE · σ_max` are treated as zero.
pub const RANK_TOLERANCE: f64 = 1e-12;

fn require_underdetermined(g: &ComplexMatrix) -> Result<()> {
    if g.rows() > g.cols() {
        return Err(Error::Dimension(format!(
            "expected M <= L, got {}x{} plant",
            g.rows(),
            g.cols()
        )));
    }
    Ok(())
}

/// `A Aᴴ` without a shape restriction. The diagonal is exactly real and the
/// result exactly Hermitian.
pub(crate) fn outer_gram(a: &ComplexMatrix) -> ComplexMatrix {
    let m = a.rows();
    let mut out = ComplexMatrix::zeros(m, m);
    for i in 0..m {
        out[(i, i)] = re(norm_sqr(a.row(i)));
        for j in (i + 1)..m {
            // Γ_ij = g_jᴴ g_i
            let z = dot(a.row(j), a.row(i));
            out[(i, j)] = z;
            out[(j, i)] = z.conj();
        }
    }
    out
}

/// The Gram `Γ = G Gᴴ` of an `M × L` plant with `M ≤ L`.
pub fn gram(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_underdetermined(g)?;
    Ok(outer_gram(g))
}

/// Product of the diagonal entries of a Hermitian PSD matrix.
pub fn hadamard_bound(gamma: &ComplexMatrix) -> f64 {
    gamma.diagonal().iter().map(|z| z.re).product()
}

/// Determinant of a Hermitian PSD matrix, via LU with partial pivoting.
///
/// A zero return is meaningful: it means the rows of the underlying plant are
/// linearly dependent.
pub fn gramian(gamma: &ComplexMatrix) -> f64 {
    let det = match Lu::new(gamma) {
        Ok(lu) => lu.determinant(),
        Err(_) => return 0.0,
    };
    debug_assert!(
        det.im.abs() <= 1e-10 * det.norm().max(hadamard_bound(gamma).abs()),
        "determinant of a Hermitian matrix has imaginary part {:e}",
        det.im
    );
    det.re.max(0.0)
}

/// Hermitian angle `Θ = arccos(|vᴴu| / (‖u‖‖v‖))` in `[0, π/2]`.
///
/// Computed as `atan2(sin, cos)` with the sine taken from the complex Lagrange
/// identity, so nearly-parallel vectors keep full relative accuracy.
pub fn hermitian_angle(u: &ComplexVector, v: &ComplexVector) -> Result<f64> {
    hermitian_angle_slices(u.as_slice(), v.as_slice())
}

pub(crate) fn hermitian_angle_slices(u: &[C64], v: &[C64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {}",
            u.len(),
            v.len()
        )));
    }
    if norm(u) == 0.0 || norm(v) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let cos_part = dot(v, u).norm();
    let mut sin_sq = 0.0;
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            sin_sq += (u[i] * v[j] - u[j] * v[i]).norm_sqr();
        }
    }
    Ok(sin_sq
        .sqrt()
        .atan2(cos_part)
        .clamp(0.0, std::f64::consts::FRAC_PI_2))
}

/// Spectral (operator 2-) norm of any matrix.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    let small = if a.rows() <= a.cols() {
        outer_gram(a)
    } else {
        outer_gram(&a.adjoint())
    };
    Ok(eig_hermitian(&small)?.eigenvalues[0].sqrt())
}

/// Singular system of an `M × L` plant (`M ≤ L`).
#[derive(Debug, Clone, Serialize)]
pub struct SingularSystem {
    /// All `M` singular values, descending.
    pub singular_values: Vec<f64>,
    /// `U`, `M × M` unitary: the field pressure modes.
    pub field_modes: ComplexMatrix,
    /// First `rank` right singular vectors `v_m` (source strength modes).
    pub source_modes: Vec<ComplexVector>,
    pub rank: usize,
    /// `σ_max / σ_min`, or `+∞` when the plant is rank deficient.
    pub condition_number: f64,
    /// `1 / σ_min` over the retained modes (0 for the zero matrix).
    pub pinv_spectral_norm: f64,
}

impl SingularSystem {
    pub fn field_mode(&self, m: usize) -> Vec<C64> {
        self.field_modes.column(m)
    }

    /// `V_r` as an `L × r` matrix, `None` at rank zero.
    pub fn source_mode_matrix(&self) -> Option<ComplexMatrix> {
        if self.rank == 0 {
            return None;
        }
        let cols: Vec<Vec<C64>> = self
            .source_modes
            .iter()
            .map(|v| v.as_slice().to_vec())
            .collect();
        ComplexMatrix::from_columns(&cols).ok()
    }
}

/// SVD of an underdetermined plant, built from the eigendecomposition of its
/// Gram: `σ_m = √λ_m`, `U` from the eigenvectors and `v_m = Gᴴu_m / σ_m`.
///
/// The per-mode phase is fixed by making the largest-magnitude entry of each
/// `v_m` real and positive (`u_m` is rotated by the same factor).
pub fn svd_underdetermined(g: &ComplexMatrix) -> Result<SingularSystem> {
    require_underdetermined(g)?;
    let m = g.rows();
    let eig = eig_hermitian(&outer_gram(g))?;
    let singular_values: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    let sigma_max = singular_values[0];
    let rank = if sigma_max > 0.0 {
        singular_values
            .iter()
            .filter(|&&s| s > RANK_TOLERANCE * sigma_max)
            .count()
    } else {
        0
    };

    let mut field_modes = eig.eigenvectors;
    let gh = g.adjoint();
    let mut source_modes = Vec::with_capacity(rank);
    for k in 0..rank {
        let u = ComplexVector::new(field_modes.column(k))?;
        let mut v: Vec<C64> = gh.mul_vec(&u)?.into_inner();
        let inv_sigma = 1.0 / singular_values[k];
        v.iter_mut().for_each(|z| *z *= inv_sigma);

        let pivot = v
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(re(1.0));
        if pivot.norm() > 0.0 {
            let rot = (pivot / pivot.norm()).conj();
            v.iter_mut().for_each(|z| *z *= rot);
            for i in 0..m {
                field_modes[(i, k)] *= rot;
            }
        }
        source_modes.push(ComplexVector::new(v)?);
    }

    let condition_number = if rank == m {
        sigma_max / singular_values[m - 1]
    } else {
        f64::INFINITY
    };
    let pinv_spectral_norm = if rank > 0 {
        1.0 / singular_values[rank - 1]
    } else {
        0.0
    };

    Ok(SingularSystem {
        singular_values,
        field_modes,
        source_modes,
        rank,
        condition_number,
        pinv_spectral_norm,
    })
}

/// Two-stage pseudoinverse `F = Gᴴ Γ⁻¹`: the focusing stage `Gᴴ` followed by
/// the inversion stage `Γ⁻¹`.
///
/// Fails with [`Error::SingularGram`] when `gramian / hadamard_bound` is at or
/// below `singularity_tol`.
pub fn pseudoinverse(g: &ComplexMatrix, singularity_tol: f64) -> Result<ComplexMatrix> {
    let gamma = gram(g)?;
    let bound = hadamard_bound(&gamma);
    let ratio = if bound > 0.0 {
        gramian(&gamma) / bound
    } else {
        0.0
    };
    if ratio <= singularity_tol {
        return Err(Error::SingularGram { ratio });
    }
    let inverse = Lu::new(&gamma)?
        .inverse()
        .map_err(|_| Error::SingularGram { ratio })?;
    g.adjoint().matmul(&inverse)
}

/// `V_r Σ_r⁻¹ U_rᴴ`, the pseudoinverse assembled from a singular system.
pub fn pseudoinverse_from_svd(sys: &SingularSystem) -> Option<ComplexMatrix> {
    let first = sys.source_modes.first()?;
    let l = first.len();
    let m = sys.field_modes.rows();
    Some(ComplexMatrix::from_fn(l, m, |row, col| {
        (0..sys.rank)
            .map(|k| {
                sys.source_modes[k][row] * sys.field_modes[(col, k)].conj() / sys.singular_values[k]
            })
            .sum()
    }))
}

/// Reproduced pressures `p = G q` and residual `r = d − p`.
#[derive(Debug, Clone, Serialize)]
pub struct Forward {
    pub pressures: ComplexVector,
    pub residual: ComplexVector,
    pub residual_norm: f64,
}

pub fn forward_and_residual(
    g: &ComplexMatrix,
    q: &ComplexVector,
    d: &ComplexVector,
) -> Result<Forward> {
    if d.len() != g.rows() {
        return Err(Error::Dimension(format!(
            "target has {} entries, plant has {} rows",
            d.len(),
            g.rows()
        )));
    }
    let pressures = g.mul_vec(q)?;
    let residual = d.sub(&pressures)?;
    let residual_norm = residual.norm();
    Ok(Forward {
        pressures,
        residual,
        residual_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gram_of_identity_and_collinear_rows() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(gram(&i2).unwrap(), i2);

        let g = ComplexMatrix::from_rows(vec![vec![c(1.0, 1.0), c(0.0, 2.0)]; 2]).unwrap();
        let gamma = gram(&g).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((gamma[(i, j)] - re(6.0)).norm() < 1e-15);
            }
        }
        assert!(gram(&ComplexMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn gramian_and_bound_on_diagonal() {
        let d = ComplexMatrix::from_diagonal(&[2.0, 3.0]);
        assert!((gramian(&d) - 6.0).abs() < 1e-15);
        assert_eq!(hadamard_bound(&d), 6.0);
        assert_eq!(hadamard_bound(&ComplexMatrix::identity(5)), 1.0);
    }

    #[test]
    fn gramian_of_collinear_rows_vanishes() {
        let row = vec![c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1)];
        let g = ComplexMatrix::from_rows(vec![row.clone(), row]).unwrap();
        let gamma = gram(&g).unwrap();
        assert!(gramian(&gamma) <= 1e-12 * hadamard_bound(&gamma));
    }

    #[test]
    fn hermitian_angle_cases() {
        let e1 = ComplexVector::from_real(&[1.0, 0.0]).unwrap();
        let e2 = ComplexVector::from_real(&[0.0, 1.0]).unwrap();
        let diag = ComplexVector::from_real(&[1.0, 1.0])
            .unwrap()
            .scale(re(0.5_f64.sqrt()));
        assert_eq!(hermitian_angle(&e1, &e1).unwrap(), 0.0);
        assert!((hermitian_angle(&e1, &e2).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((hermitian_angle(&e1, &diag).unwrap() - FRAC_PI_4).abs() < 1e-15);
        let z = ComplexVector::zeros(2);
        assert_eq!(hermitian_angle(&e1, &z), Err(Error::ZeroVector));
    }

    #[test]
    fn svd_of_identity() {
        let s = svd_underdetermined(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(s.singular_values, vec![1.0; 3]);
        assert_eq!(s.condition_number, 1.0);
        assert_eq!(s.rank, 3);
    }

    #[test]
    fn svd_of_orthogonal_rows() {
        // rows of norm √2 and √3, pairwise orthogonal
        let g = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 1.0), re(0.0)],
            vec![c(0.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)],
        ])
        .unwrap();
        assert!(gram(&g).unwrap()[(0, 1)].norm() < 1e-15);
        let s = svd_underdetermined(&g).unwrap();
        assert!((s.singular_values[0] - 3f64.sqrt()).abs() < 1e-14);
        assert!((s.singular_values[1] - 2f64.sqrt()).abs() < 1e-14);
        assert!((s.condition_number - 1.5f64.sqrt()).abs() < 1e-14);
        assert!((s.pinv_spectral_norm - 1.0 / 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn svd_of_zero_matrix_is_rank_zero() {
        let s = svd_underdetermined(&ComplexMatrix::zeros(2, 3)).unwrap();
        assert_eq!(s.rank, 0);
        assert!(s.condition_number.is_infinite());
        assert!(pseudoinverse_from_svd(&s).is_none());
    }

    #[test]
    fn svd_rank_deficient_condition_is_infinite() {
        let row = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let g = ComplexMatrix::from_rows(vec![row.clone(), row]).unwrap();
        let s = svd_underdetermined(&g).unwrap();
        assert_eq!(s.rank, 1);
        assert!(s.condition_number.is_infinite());
        assert!((s.pinv_spectral_norm - 0.5).abs() < 1e-14);
    }

    #[test]
    fn pseudoinverse_small_cases() {
        let g = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 4.0]]).unwrap();
        let f = pseudoinverse(&g, SINGULARITY_TOLERANCE).unwrap();
        let want = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.25]]).unwrap();
        assert!(f.max_abs_diff(&want) < 1e-15);

        let g = ComplexMatrix::from_real_rows(&[&[1.0, 1.0]]).unwrap();
        let f = pseudoinverse(&g, SINGULARITY_TOLERANCE).unwrap();
        let want = ComplexMatrix::from_real_rows(&[&[0.5], &[0.5]]).unwrap();
        assert!(f.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn pseudoinverse_rejects_singular_gram() {
        let row = vec![c(1.0, 2.0), c(3.0, -1.0)];
        let g = ComplexMatrix::from_rows(vec![row.clone(), row]).unwrap();
        match pseudoinverse(&g, SINGULARITY_TOLERANCE) {
            Err(Error::SingularGram { ratio }) => assert!(ratio <= SINGULARITY_TOLERANCE),
            other => panic!("expected SingularGram, got {other:?}"),
        }
    }

    #[test]
    fn residual_cases() {
        let g = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let d = ComplexVector::from_real(&[1.0, -1.0]).unwrap();
        let out = forward_and_residual(&g, &ComplexVector::zeros(2), &d).unwrap();
        assert_eq!(out.residual, d);
        assert_eq!(out.pressures, ComplexVector::zeros(2));

        // 2 control points, 1 source, both gains 1: best fit is p = 0
        let g = ComplexMatrix::from_real_rows(&[&[1.0], &[1.0]]).unwrap();
        let q = ComplexVector::from_real(&[0.0]).unwrap();
        let out = forward_and_residual(&g, &q, &d).unwrap();
        assert!((out.residual_norm - 2f64.sqrt()).abs() < 1e-15);

        assert!(forward_and_residual(&g, &d, &d).is_err());
    }
}
