use super::{re, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    /// Packed factors: strictly-lower part holds `L` (unit diagonal), the rest `U`.
    factors: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;

        for k in 0..n {
            let (pivot, pivot_mag) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot, j)];
                    lu[(pivot, j)] = tmp;
                }
                perm.swap(k, pivot);
                swaps += 1;
            }
            // exact zero pivot: column already eliminated, U is singular
            if pivot_mag == 0.0 {
                continue;
            }
            let inv = lu[(k, k)].inv();
            for i in (k + 1)..n {
                let factor = lu[(i, k)] * inv;
                lu[(i, k)] = factor;
                for j in (k + 1)..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= factor * u;
                }
            }
        }
        Ok(Self {
            factors: lu,
            perm,
            swaps,
        })
    }

    pub fn determinant(&self) -> C64 {
        let n = self.factors.rows();
        let prod: C64 = (0..n).map(|i| self.factors[(i, i)]).product();
        if self.swaps.is_multiple_of(2) {
            prod
        } else {
            -prod
        }
    }

    pub fn is_singular(&self) -> bool {
        (0..self.factors.rows()).any(|i| self.factors[(i, i)] == re(0.0))
    }

    /// Solves `A X = B`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.factors.rows();
        if b.rows() != n {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, expected {n}",
                b.rows()
            )));
        }
        if self.is_singular() {
            return Err(Error::SingularGram { ratio: 0.0 });
        }
        let mut x = ComplexMatrix::from_fn(n, b.cols(), |i, j| b[(self.perm[i], j)]);
        for col in 0..b.cols() {
            for i in 0..n {
                let mut acc = x[(i, col)];
                for k in 0..i {
                    acc -= self.factors[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = x[(i, col)];
                for k in (i + 1)..n {
                    acc -= self.factors[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = acc / self.factors[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        self.solve(&ComplexMatrix::identity(self.factors.rows()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_with_pivoting() {
        // [[0, 1], [2, 3]] needs a row swap; det = -2
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[2.0, 3.0]]).unwrap();
        let lu = Lu::new(&a).unwrap();
        assert!((lu.determinant() - re(-2.0)).norm() < 1e-15);
        let inv = lu.inverse().unwrap();
        let eye = a.matmul(&inv).unwrap();
        assert!(eye.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn complex_solve() {
        let j = C64::new(0.0, 1.0);
        let a = ComplexMatrix::from_rows(vec![
            vec![re(2.0), j, re(0.0)],
            vec![-j, re(3.0), re(1.0)],
            vec![re(0.0), re(1.0), re(4.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(vec![vec![re(1.0)], vec![j], vec![re(-1.0)]]).unwrap();
        let x = Lu::new(&a).unwrap().solve(&b).unwrap();
        assert!(a.matmul(&x).unwrap().max_abs_diff(&b) < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        let lu = Lu::new(&a).unwrap();
        assert_eq!(lu.determinant(), re(0.0));
        assert!(lu.inverse().is_err());
    }
}
