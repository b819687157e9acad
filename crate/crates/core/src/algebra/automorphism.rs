use std::sync::Arc;

use super::{sparse_to_dense, Algebra};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;

/// An algebra automorphism; row `b` of `matrix` holds the coordinates of `σ(b)`.
#[derive(Clone, Debug)]
pub struct Automorphism<F> {
    pub algebra: Arc<Algebra<F>>,
    pub matrix: Matrix<F>,
}

impl<F: Scalar> Automorphism<F> {
    pub fn identity(algebra: &Arc<Algebra<F>>) -> Self {
        Automorphism { algebra: Arc::clone(algebra), matrix: Matrix::identity(algebra.dim()) }
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        self.matrix.apply(x)
    }

    /// `self` followed by `other`, i.e. `x ↦ other(self(x))`.
    pub fn then(&self, other: &Automorphism<F>) -> Self {
        Automorphism { algebra: Arc::clone(&self.algebra), matrix: &self.matrix * &other.matrix }
    }

    pub fn inverse(&self) -> Self {
        Automorphism { algebra: Arc::clone(&self.algebra), matrix: self.matrix.inverse().expect("automorphisms are invertible") }
    }

    /// `σ^k` for any integer `k`.
    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Automorphism::identity(&self.algebra);
        for _ in 0..k.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.algebra.dim())
    }

    /// The permutation of vertices induced on `A/J`: `σ(e_i) ≡ e_{π(i)}`.
    pub fn vertex_permutation(&self) -> Vec<usize> {
        let a = &self.algebra;
        (0..a.num_vertices())
            .map(|i| {
                let row = self.matrix.row(a.vertex_element(i));
                (0..a.num_vertices()).find(|&j| !row[a.vertex_element(j)].is_zero()).unwrap_or(i)
            })
            .collect()
    }
}

/// Accepts `matrix` iff it defines a unital, multiplicative, invertible map.
pub fn verify_automorphism<F: Scalar>(algebra: &Arc<Algebra<F>>, matrix: Matrix<F>) -> Result<Automorphism<F>> {
    let d = algebra.dim();
    if matrix.rows() != d || matrix.cols() != d {
        return Err(Error::Dimension(format!("expected a {d}×{d} matrix, got {}×{}", matrix.rows(), matrix.cols())));
    }
    if !matrix.is_invertible() {
        return Err(Error::NotAutomorphism("singular".into()));
    }
    let one = algebra.one();
    if matrix.apply(&one) != one {
        return Err(Error::NotAutomorphism("not unital".into()));
    }
    let images: Vec<Vec<F>> = (0..d).map(|b| matrix.row_vec(b)).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = matrix.apply(&sparse_to_dense(algebra.mult(i, j), d));
            let rhs = algebra.multiply(&images[i], &images[j]);
            if lhs != rhs {
                return Err(Error::NotAutomorphism(format!(
                    "not multiplicative on ({}, {})",
                    algebra.label(i),
                    algebra.label(j)
                )));
            }
        }
    }
    Ok(Automorphism { algebra: Arc::clone(algebra), matrix })
}

#[cfg(test)]
mod tests {
    use super::super::test_algebras::*;
    use super::*;
    use crate::field::Fp;

    type F3 = Fp<3>;

    #[test]
    fn identity_accepted() {
        let a = loop_algebra::<F3>();
        assert!(verify_automorphism(&a, Matrix::identity(2)).unwrap().is_identity());
    }

    #[test]
    fn negation_of_loop_accepted() {
        let a = loop_algebra::<F3>();
        let s = verify_automorphism(&a, Matrix::from_i64(2, 2, &[1, 0, 0, -1])).unwrap();
        assert!(s.power(2).is_identity());
        assert!(!s.is_identity());
    }

    #[test]
    fn loop_to_unit_rejected() {
        let a = loop_algebra::<F3>();
        // x ↦ e + x keeps invertibility, so the failure must be multiplicativity.
        let err = verify_automorphism(&a, Matrix::from_i64(2, 2, &[1, 0, 1, 1])).unwrap_err();
        assert!(matches!(err, Error::NotAutomorphism(m) if m.contains("multiplicative")));
        let err = verify_automorphism(&a, Matrix::from_i64(2, 2, &[1, 0, 1, 0])).unwrap_err();
        assert!(matches!(err, Error::NotAutomorphism(m) if m.contains("singular")));
        let err = verify_automorphism(&a, Matrix::from_i64(2, 2, &[1, 1, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::NotAutomorphism(m) if m.contains("unital")));
    }
}
