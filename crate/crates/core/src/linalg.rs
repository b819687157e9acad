//! Dense exact linear algebra.
//!
//! Vectors are rows and matrices act on the right: a map `V -> W` between
//! spaces of dimensions `r` and `c` is an `r x c` matrix `M`, and `x ↦ xM`.
//! Composition "first `f`, then `g`" is the product `F * G`.
//!
//! Row reduction always takes the leftmost column with a nonzero entry at or
//! below the current row, and within it the topmost such row, so every result
//! is a deterministic function of the input entries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:?} ", self.data[r * self.cols + c])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors; `cols` is needed when there are no rows.
    pub fn from_rows(rows: &[Vec<F>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        Self::from_vec(rows, cols, entries.iter().map(|&v| F::from_i64(v)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [F] {
        let c = self.cols;
        &mut self.data[r * c..(r + 1) * c]
    }

    pub fn row_vec(&self, r: usize) -> Vec<F> {
        self.row(r).to_vec()
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    /// `x ↦ xM` applied to a row vector.
    pub fn apply(&self, x: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.rows, "vector length does not match matrix rows");
        let mut out = vec![F::zero(); self.cols];
        for (r, xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            let row = self.row(r);
            for (o, m) in out.iter_mut().zip(row) {
                if !m.is_zero() {
                    *o = o.clone() + xr.clone() * m.clone();
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend(self.row(r).iter().cloned());
            data.extend(other.row(r).iter().cloned());
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    /// Block matrix from a grid of blocks; all blocks in a row share a row count,
    /// all blocks in a column share a column count.
    pub fn from_blocks(blocks: &[Vec<Matrix<F>>]) -> Self {
        let row_sizes: Vec<usize> = blocks.iter().map(|b| b[0].rows).collect();
        let col_sizes: Vec<usize> = blocks[0].iter().map(|b| b.cols).collect();
        let mut m = Self::zeros(row_sizes.iter().sum(), col_sizes.iter().sum());
        let mut r0 = 0;
        for (i, brow) in blocks.iter().enumerate() {
            let mut c0 = 0;
            for (j, b) in brow.iter().enumerate() {
                assert_eq!(b.rows, row_sizes[i], "block row size mismatch");
                assert_eq!(b.cols, col_sizes[j], "block column size mismatch");
                m.set_block(r0, c0, b);
                c0 += b.cols;
            }
            r0 += row_sizes[i];
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.data[(r0 + r) * self.cols + c0 + c] = b.data[r * b.cols + c].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, rows: usize, c0: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = self.data[(r0 + r) * self.cols + c0 + c].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend(self.row(r).iter().cloned());
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.data[r * self.cols + c].clone();
            }
        }
        m
    }

    pub fn rref(&self) -> Echelon<F> {
        Echelon::new(self, false)
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Canonical basis (reduced echelon rows) of the row space.
    pub fn row_space(&self) -> Matrix<F> {
        let e = self.rref();
        let k = e.pivots.len();
        e.reduced.block(0, k, 0, self.cols)
    }

    /// Rows form the reduced echelon basis of `{x : xM = 0}`.
    pub fn kernel(&self) -> Matrix<F> {
        kernel_basis(self)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let e = Echelon::new(self, true);
        if e.pivots.len() < n {
            return None;
        }
        // transform * self = I
        e.transform
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl<F: Scalar> Mul for &Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch ({}x{} * {}x{})", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow: &mut [F] = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, b) in orow.iter_mut().zip(rrow) {
                    if !b.is_zero() {
                        *o = o.clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }
}

impl<F: Scalar> Mul for Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: Matrix<F>) -> Matrix<F> {
        &self * &rhs
    }
}

impl<F: Scalar> Add for &Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<F: Scalar> Add for Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: Matrix<F>) -> Matrix<F> {
        &self + &rhs
    }
}

impl<F: Scalar> Sub for &Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference dimension mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<F: Scalar> Sub for Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: Matrix<F>) -> Matrix<F> {
        &self - &rhs
    }
}

impl<F: Scalar> Neg for &Matrix<F> {
    type Output = Matrix<F>;
    fn neg(self) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a.clone()).collect() }
    }
}

impl<F: Scalar> Neg for Matrix<F> {
    type Output = Matrix<F>;
    fn neg(self) -> Matrix<F> {
        -&self
    }
}

/// Reduced row echelon form, optionally with the row operations that produced it.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub reduced: Matrix<F>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// `transform * original == reduced`, when requested.
    pub transform: Option<Matrix<F>>,
}

impl<F: Scalar> Echelon<F> {
    pub fn new(m: &Matrix<F>, track: bool) -> Self {
        let mut a = m.clone();
        let mut t = if track { Some(Matrix::identity(m.rows)) } else { None };
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                swap_rows(&mut a, p, row);
                if let Some(t) = t.as_mut() {
                    swap_rows(t, p, row);
                }
            }
            let inv = a.get(row, col).inv();
            scale_row(&mut a, row, &inv);
            if let Some(t) = t.as_mut() {
                scale_row(t, row, &inv);
            }
            for r in 0..a.rows {
                if r != row && !a.get(r, col).is_zero() {
                    let f = a.get(r, col).clone();
                    axpy_row(&mut a, r, row, &f);
                    if let Some(t) = t.as_mut() {
                        axpy_row(t, r, row, &f);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { reduced: a, pivots, transform: t }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `v` in the basis formed by the nonzero rows, if `v` lies
    /// in the row space.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        let coords: Vec<F> = self.pivots.iter().map(|&c| v[c].clone()).collect();
        let mut check = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (x, y) in check.iter_mut().zip(self.reduced.row(i)) {
                *x = x.clone() - c.clone() * y.clone();
            }
        }
        check.iter().all(|x| x.is_zero()).then_some(coords)
    }
}

fn swap_rows<F: Scalar>(m: &mut Matrix<F>, a: usize, b: usize) {
    if a == b {
        return;
    }
    let c = m.cols;
    for j in 0..c {
        m.data.swap(a * c + j, b * c + j);
    }
}

fn scale_row<F: Scalar>(m: &mut Matrix<F>, r: usize, s: &F) {
    for x in m.row_mut(r) {
        *x = x.clone() * s.clone();
    }
}

/// `row[dst] -= f * row[src]`
fn axpy_row<F: Scalar>(m: &mut Matrix<F>, dst: usize, src: usize, f: &F) {
    let c = m.cols;
    for j in 0..c {
        let s = m.data[src * c + j].clone();
        if !s.is_zero() {
            let d = m.data[dst * c + j].clone();
            m.data[dst * c + j] = d - f.clone() * s;
        }
    }
}

/// Rows of the result form the reduced echelon basis of `{x : xM = 0}`.
pub fn kernel_basis<F: Scalar>(m: &Matrix<F>) -> Matrix<F> {
    // {x : xM = 0} = right null space of M^T.
    let mt = m.transpose();
    let e = mt.rref();
    let n = mt.cols;
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; n];
        for (i, &p) in e.pivots.iter().enumerate() {
            v[p] = Some(i);
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| pivot_set[c].is_none()) {
        let mut x = vec![F::zero(); n];
        x[free] = F::one();
        for (i, &p) in e.pivots.iter().enumerate() {
            let v = e.reduced.get(i, free);
            if !v.is_zero() {
                x[p] = -v.clone();
            }
        }
        basis.push(x);
    }
    Matrix::from_rows(&basis, n).row_space()
}

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug)]
pub struct Solution<F> {
    pub particular: Vec<F>,
    pub kernel: Matrix<F>,
}

/// Solves `xA = b`. Returns `Ok(None)` when the system is inconsistent.
pub fn solve_linear<F: Scalar>(a: &Matrix<F>, b: &[F]) -> Result<Option<Solution<F>>, crate::Error> {
    if b.len() != a.cols() {
        return Err(crate::Error::Dimension(format!(
            "right-hand side has length {} but the system has {} columns",
            b.len(),
            a.cols()
        )));
    }
    let solver = LeftSolver::new(a);
    Ok(solver.solve(b).map(|x| Solution { particular: x, kernel: kernel_basis(a) }))
}

/// Precomputed elimination for repeatedly solving `xA = b` with a fixed `A`.
///
/// `A` is reduced with its row operations tracked, so `b` is solved by reading
/// its coordinates against the reduced rows and pulling them back.
#[derive(Clone, Debug)]
pub struct LeftSolver<F> {
    rows: usize,
    echelon: Echelon<F>,
}

impl<F: Scalar> LeftSolver<F> {
    pub fn new(a: &Matrix<F>) -> Self {
        LeftSolver { rows: a.rows(), echelon: Echelon::new(a, true) }
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// A particular solution; the free variables are set to zero.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let t = self.echelon.transform.as_ref().expect("tracked elimination");
        let coords = self.echelon.coordinates(b)?;
        let mut x = vec![F::zero(); self.rows];
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, y) in x.iter_mut().zip(t.row(i)) {
                if !y.is_zero() {
                    *o = o.clone() + c.clone() * y.clone();
                }
            }
        }
        Some(x)
    }

    /// Solves `XA = B` row by row.
    pub fn solve_rows(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        let mut rows = Vec::with_capacity(b.rows());
        for r in 0..b.rows() {
            rows.push(self.solve(b.row(r))?);
        }
        Some(Matrix::from_rows(&rows, self.rows))
    }
}

/// Finds coefficients `c` with `Σ c_j basis_j = target`.
pub fn solve_in_span<F: Scalar>(basis: &[Matrix<F>], target: &Matrix<F>) -> Option<Vec<F>> {
    let len = target.rows() * target.cols();
    if basis.is_empty() {
        return target.is_zero().then(Vec::new);
    }
    let rows: Vec<Vec<F>> = basis.iter().map(|m| m.data().to_vec()).collect();
    let big = Matrix::from_rows(&rows, len);
    LeftSolver::new(&big).solve(target.data())
}

pub fn combine<F: Scalar>(basis: &[Matrix<F>], coeffs: &[F], rows: usize, cols: usize) -> Matrix<F> {
    let mut acc: Matrix<F> = Matrix::zeros(rows, cols);
    for (m, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (a, b) in acc.data.iter_mut().zip(m.data()) {
            if !b.is_zero() {
                *a = a.clone() + c.clone() * b.clone();
            }
        }
    }
    acc
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn unit_vector<F: Scalar>(n: usize, i: usize) -> Vec<F> {
    let mut v = vec![F::zero(); n];
    v[i] = F::one();
    v
}

#[cfg(test)]
mod tests {
    use num_traits::Zero;
    use super::*;
    use crate::field::Fp;
    use proptest::prelude::*;

    type F3 = Fp<3>;
    type F5 = Fp<5>;

    #[test]
    fn identity_has_trivial_kernel() {
        assert_eq!(kernel_basis(&Matrix::<F5>::identity(3)).rows(), 0);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let k = kernel_basis(&Matrix::<F5>::zeros(2, 2));
        assert_eq!(k, Matrix::identity(2));
    }

    #[test]
    fn kernel_over_f3_matches_enumeration() {
        // det [[1,2],[2,1]] = -3 = 0 in F_3, so the kernel is a line.
        let m = Matrix::<F3>::from_i64(2, 2, &[1, 2, 2, 1]);
        let mut brute = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                let x = [F3::new(a), F3::new(b)];
                if m.apply(&x).iter().all(|v| v.is_zero()) {
                    brute.push(x);
                }
            }
        }
        // Frozen from the enumeration above: {(0,0), (1,1), (2,2)}.
        assert_eq!(brute.len(), 3);
        let k = kernel_basis(&m);
        assert_eq!(k.rows(), 1);
        assert_eq!(k.row(0), &[F3::new(1), F3::new(1)]);
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = vec![F5::new(3), F5::new(1), F5::new(4)];
        let s = solve_linear(&Matrix::identity(3), &b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert!(solve_linear(&Matrix::<F5>::zeros(3, 3), &b).unwrap().is_none());
        assert!(solve_linear(&Matrix::<F5>::zeros(3, 2), &b).is_err());
    }

    #[test]
    fn solve_random_system_against_exhaustive_search() {
        let a = Matrix::<F5>::from_i64(4, 3, &[1, 2, 0, 0, 1, 3, 2, 4, 0, 1, 0, 1]);
        let mut rng_b = 0u32;
        for _ in 0..20 {
            rng_b = (rng_b * 7 + 3) % 125;
            let b = vec![F5::new(rng_b % 5), F5::new((rng_b / 5) % 5), F5::new(rng_b / 25)];
            let mut found = false;
            for code in 0..625u32 {
                let x: Vec<F5> = (0..4).map(|i| F5::new((code / 5u32.pow(i)) % 5)).collect();
                if a.apply(&x) == b {
                    found = true;
                    break;
                }
            }
            let s = solve_linear(&a, &b).unwrap();
            assert_eq!(s.is_some(), found);
            if let Some(s) = s {
                assert_eq!(a.apply(&s.particular), b);
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::<F5>::from_i64(3, 3, &[1, 2, 0, 0, 1, 3, 2, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
        assert!(Matrix::<F5>::from_i64(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix<F5>> {
        (0usize..6, 0usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u32..5, r * c).prop_map(move |v| Matrix::from_vec(r, c, v.into_iter().map(F5::new).collect()))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in small_matrix()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(m.rank() + k.rows(), m.rows());
            prop_assert!((&k * &m).is_zero());
        }

        #[test]
        fn solutions_satisfy_system(m in small_matrix(), seed in 0u32..1000) {
            let b: Vec<F5> = (0..m.cols()).map(|i| F5::new(seed.wrapping_mul(31).wrapping_add(i as u32 * 7) % 5)).collect();
            if let Some(s) = solve_linear(&m, &b).unwrap() {
                prop_assert_eq!(m.apply(&s.particular), b);
            } else {
                // inconsistent: b is not in the row space
                let rs = m.row_space();
                prop_assert!(rs.rref().coordinates(&b).is_none());
            }
        }

        #[test]
        fn rref_is_deterministic(m in small_matrix()) {
            prop_assert_eq!(m.rref().reduced, m.clone().rref().reduced);
        }
    }
}
