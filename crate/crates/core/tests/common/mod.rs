//! Independent reference implementations for the integration tests. None of
//! these call into the library's numerics.

#![allow(dead_code)]

use focusing::linalg::{ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<C64>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Dense {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}

pub fn to_matrix(a: &Dense) -> ComplexMatrix {
    ComplexMatrix::from_rows(a.clone()).unwrap()
}

pub fn from_matrix(a: &ComplexMatrix) -> Dense {
    (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![C64::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            for t in 0..k {
                out[i][j] += a[i][t] * b[t][j];
            }
        }
    }
    out
}

pub fn adjoint(a: &Dense) -> Dense {
    let (n, m) = (a.len(), a[0].len());
    (0..m)
        .map(|j| (0..n).map(|i| a[i][j].conj()).collect())
        .collect()
}

pub fn frobenius(a: &Dense) -> f64 {
    a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect()
}

/// Leibniz expansion; exponential but exact in structure.
pub fn det_leibniz(a: &Dense) -> C64 {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = C64::new(0.0, 0.0);
    permute(&mut perm, 0, a, &mut total);
    total
}

fn permute(p: &mut Vec<usize>, k: usize, a: &Dense, total: &mut C64) {
    let n = p.len();
    if k == n {
        let mut inversions = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut term = C64::new(if inversions % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        for (i, &j) in p.iter().enumerate() {
            term *= a[i][j];
        }
        *total += term;
        return;
    }
    for i in k..n {
        p.swap(k, i);
        permute(p, k + 1, a, total);
        p.swap(k, i);
    }
}

/// Gauss–Jordan inverse with full pivoting.
pub fn inverse_gauss_jordan(a: &Dense) -> Option<Dense> {
    let n = a.len();
    let mut m: Vec<Vec<C64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(identity(n)[i].iter().copied());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm()))?;
        if m[pivot][col].norm() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        let p = m[col][col];
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f != C64::new(0.0, 0.0) {
                    let pivot_row = m[col].clone();
                    for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Modified Gram–Schmidt on the rows, returning orthonormal rows.
pub fn orthonormal_rows(a: &Dense) -> Dense {
    let mut out: Dense = Vec::new();
    for row in a {
        let mut v = row.clone();
        for q in &out {
            let proj: C64 = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        out.push(v.into_iter().map(|z| z / n).collect());
    }
    out
}

/// Eigenvalues of a 2×2 Hermitian matrix, descending.
pub fn eig2(a: f64, b: C64, d: f64) -> [f64; 2] {
    let mean = (a + d) / 2.0;
    let rad = (((a - d) / 2.0).powi(2) + b.norm_sqr()).sqrt();
    [mean + rad, mean - rad]
}

/// Eigenvalues of a 3×3 Hermitian matrix from the roots of its
/// characteristic polynomial (trigonometric form), descending.
pub fn eig3(h: &Dense) -> [f64; 3] {
    let (a, b, c) = (h[0][0].re, h[1][1].re, h[2][2].re);
    let (d, e, f) = (h[0][1], h[1][2], h[0][2]);
    let p1 = d.norm_sqr() + e.norm_sqr() + f.norm_sqr();
    let q = (a + b + c) / 3.0;
    let p2 = (a - q).powi(2) + (b - q).powi(2) + (c - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q, q, q];
    }
    // B = (H − qI)/p, r = det(B)/2
    let bm: Dense = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| (h[i][j] - C64::new(if i == j { q } else { 0.0 }, 0.0)) / p)
                .collect()
        })
        .collect();
    let r = (det_leibniz(&bm).re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let l1 = q + 2.0 * p * phi.cos();
    let l3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let l2 = 3.0 * q - l1 - l3;
    [l1, l2, l3]
}

pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value by power iteration on `AᴴA`.
pub fn spectral_norm_power(a: &Dense, iterations: usize) -> f64 {
    let ah = adjoint(a);
    let ata = mul(&ah, a);
    let n = ata.len();
    let mut v: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + i as f64 * 0.1, 0.3))
        .collect();
    let mut lambda = 0.0;
    for _ in 0..iterations {
        let w: Vec<C64> = (0..n)
            .map(|i| (0..n).map(|j| ata[i][j] * v[j]).sum())
            .collect();
        lambda = vnorm(&w);
        v = w.into_iter().map(|z| z / lambda).collect();
    }
    lambda.sqrt()
}
