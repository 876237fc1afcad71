use serde::Serialize;

use super::{re, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Sweep budget for the cyclic Jacobi iteration.
pub const JACOBI_MAX_SWEEPS: usize = 30;
/// Stop once `‖offdiag(A)‖_F < JACOBI_TOLERANCE · ‖A‖_F`.
pub const JACOBI_TOLERANCE: f64 = 1e-14;

/// Eigendecomposition `Γ = U Λ Uᴴ` of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order and clamped at zero, so this is
/// intended for positive semi-definite input such as a Gram matrix.
#[derive(Debug, Clone, Serialize)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the eigenvectors.
    pub eigenvectors: ComplexMatrix,
    pub sweeps: usize,
}

impl HermitianEig {
    pub fn eigenvector(&self, m: usize) -> Vec<C64> {
        self.eigenvectors.column(m)
    }

    /// `U Λ Uᴴ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| u[(i, k)] * self.eigenvalues[k] * u[(j, k)].conj())
                .sum()
        })
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
///
/// Input with a small anti-Hermitian part is symmetrised as `(Γ + Γᴴ)/2`
/// before iterating.
pub fn eig_hermitian(gamma: &ComplexMatrix) -> Result<HermitianEig> {
    if !gamma.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            gamma.rows(),
            gamma.cols()
        )));
    }
    let n = gamma.rows();
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| 0.5 * (gamma[(i, j)] + gamma[(j, i)].conj()));
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let target = JACOBI_TOLERANCE * scale;
    let mut sweeps = 0;
    let mut off = off_diagonal_norm(&a);

    while off > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off / scale,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re.max(0.0)).collect();
    order.sort_by(|&x, &y| diag[y].total_cmp(&diag[x]).then(x.cmp(&y)));

    let eigenvalues = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

/// Annihilates `a[p][q]` with the unitary plane rotation
/// `[[c, s e^{iφ}], [-s e^{-iφ}, c]]`, where `φ = arg a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / mag;

    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let u_pp = re(c);
    let u_pq = phase * s;
    let u_qp = -phase.conj() * s;
    let u_qq = re(c);

    let n = a.rows();
    // A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    // A <- Uᴴ A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = re(0.0);
    a[(q, p)] = re(0.0);
    a[(p, p)] = re(a[(p, p)].re);
    a[(q, q)] = re(a[(q, q)].re);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}
