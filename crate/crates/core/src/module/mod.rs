//! Finite-dimensional right modules given by action matrices.
//!
//! A morphism `M → N` is a `dim M × dim N` matrix `F` with
//! `R^M_b F = F R^N_b` for every basis element `b`.

mod bimodule;
mod cover;
mod hom;
mod tensor;

use std::hash::{Hash, Hasher};
use std::sync::Arc;

pub use bimodule::{bimodule_from_actions, regular_bimodule, twisted_bimodule};
pub use cover::{projective_cover, Presentation};
pub use hom::{hom_space, is_homomorphism, iso_test, random_morphism, solve_hom, HomConstraint};
pub use tensor::{tensor_bimodules, tensor_functor, tensor_morphism, Tensor};

use crate::algebra::{Algebra, Automorphism};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{Echelon, LeftSolver, Matrix};

#[derive(Clone, Debug)]
pub struct Module<F> {
    algebra: Arc<Algebra<F>>,
    dim: usize,
    actions: Vec<Matrix<F>>,
}

impl<F: Scalar> PartialEq for Module<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.actions == other.actions
    }
}

impl<F: Scalar> Eq for Module<F> {}

impl<F: Scalar> Hash for Module<F> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.actions.hash(state);
    }
}

impl<F: Scalar> Module<F> {
    pub fn new(algebra: Arc<Algebra<F>>, dim: usize, actions: Vec<Matrix<F>>) -> Result<Self> {
        if actions.len() != algebra.dim() {
            return Err(Error::Dimension(format!("{} action matrices for an algebra of dimension {}", actions.len(), algebra.dim())));
        }
        if let Some(m) = actions.iter().find(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Dimension(format!("action matrix of size {}×{} on a module of dimension {dim}", m.rows(), m.cols())));
        }
        Ok(Module { algebra, dim, actions })
    }

    pub(crate) fn from_actions(algebra: Arc<Algebra<F>>, dim: usize, actions: Vec<Matrix<F>>) -> Self {
        debug_assert_eq!(actions.len(), algebra.dim());
        Module { algebra, dim, actions }
    }

    pub fn zero(algebra: &Arc<Algebra<F>>) -> Self {
        Module { algebra: Arc::clone(algebra), dim: 0, actions: vec![Matrix::zeros(0, 0); algebra.dim()] }
    }

    /// The right regular module.
    pub fn regular(algebra: &Arc<Algebra<F>>) -> Self {
        let all: Vec<usize> = (0..algebra.dim()).collect();
        Self::right_ideal(algebra, &all)
    }

    /// `e_v Λ` with basis the algebra basis elements starting at `v`.
    pub fn projective(algebra: &Arc<Algebra<F>>, v: usize) -> Self {
        Self::right_ideal(algebra, &algebra.projective_basis(v))
    }

    /// `⊕_k e_{v_k} Λ`.
    pub fn free(algebra: &Arc<Algebra<F>>, vertices: &[usize]) -> Self {
        let parts: Vec<Module<F>> = vertices.iter().map(|&v| Self::projective(algebra, v)).collect();
        Self::direct_sum(algebra, &parts)
    }

    fn right_ideal(algebra: &Arc<Algebra<F>>, basis: &[usize]) -> Self {
        let d = basis.len();
        let mut pos = vec![usize::MAX; algebra.dim()];
        for (i, &b) in basis.iter().enumerate() {
            pos[b] = i;
        }
        let actions = (0..algebra.dim())
            .map(|x| {
                let mut m = Matrix::zeros(d, d);
                for (i, &b) in basis.iter().enumerate() {
                    for (k, c) in algebra.mult(b, x) {
                        debug_assert!(pos[*k] != usize::MAX);
                        m.set(i, pos[*k], c.clone());
                    }
                }
                m
            })
            .collect();
        Module { algebra: Arc::clone(algebra), dim: d, actions }
    }

    pub fn direct_sum(algebra: &Arc<Algebra<F>>, parts: &[Module<F>]) -> Self {
        let dim = parts.iter().map(|p| p.dim).sum();
        let actions = (0..algebra.dim())
            .map(|b| {
                let mut m = Matrix::zeros(dim, dim);
                let mut off = 0;
                for p in parts {
                    m.set_block(off, off, &p.actions[b]);
                    off += p.dim;
                }
                m
            })
            .collect();
        Module { algebra: Arc::clone(algebra), dim, actions }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }

    pub fn action(&self, b: usize) -> &Matrix<F> {
        &self.actions[b]
    }

    pub fn actions(&self) -> &[Matrix<F>] {
        &self.actions
    }

    /// `m · b` for a basis element `b`.
    pub fn act(&self, m: &[F], b: usize) -> Vec<F> {
        self.actions[b].apply(m)
    }

    /// `m · x` for an algebra element in coordinates.
    pub fn act_element(&self, m: &[F], x: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim];
        for (b, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.actions[b].apply(m)) {
                *o = o.clone() + c.clone() * v;
            }
        }
        out
    }

    /// Action matrix of an algebra element given in coordinates.
    pub fn element_action(&self, x: &[F]) -> Matrix<F> {
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for (b, c) in x.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &self.actions[b].scale(c);
            }
        }
        acc
    }

    /// Checks the module axioms on all pairs of basis elements.
    pub fn verify_axioms(&self) -> Result<(), String> {
        let a = &self.algebra;
        let one = self.element_action(&a.one());
        if one != Matrix::identity(self.dim) {
            return Err("unit does not act as the identity".into());
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let lhs = &self.actions[i] * &self.actions[j];
                let mut rhs = Matrix::zeros(self.dim, self.dim);
                for (k, c) in a.mult(i, j) {
                    rhs = &rhs + &self.actions[*k].scale(c);
                }
                if lhs != rhs {
                    return Err(format!("action is not multiplicative on ({}, {})", a.label(i), a.label(j)));
                }
            }
        }
        Ok(())
    }

    /// Basis (reduced echelon rows) of `M e_v`.
    pub fn vertex_part(&self, v: usize) -> Matrix<F> {
        self.actions[self.algebra.vertex_element(v)].row_space()
    }

    /// Basis of `M J`.
    pub fn radical(&self) -> Matrix<F> {
        let rad: Vec<usize> = (0..self.algebra.dim()).filter(|&b| self.algebra.is_radical(b)).collect();
        stack_row_spaces(self.dim, rad.iter().map(|&b| &self.actions[b]))
    }

    /// Basis of `soc M = {m : m J = 0}`.
    pub fn socle(&self) -> Matrix<F> {
        let gens = self.algebra.radical_generators();
        if gens.is_empty() {
            return Matrix::identity(self.dim);
        }
        let blocks: Vec<Matrix<F>> = gens.iter().map(|&g| self.actions[g].clone()).collect();
        hstack_all(self.dim, &blocks).kernel()
    }

    /// The submodule spanned by the rows of `basis` (linearly independent and
    /// invariant), together with its inclusion matrix.
    pub fn submodule(&self, basis: &Matrix<F>) -> Result<(Module<F>, Matrix<F>)> {
        let r = basis.rows();
        let solver = LeftSolver::new(basis);
        if solver.rank() != r {
            return Err(Error::Dimension("submodule basis is not linearly independent".into()));
        }
        let mut actions = Vec::with_capacity(self.actions.len());
        for act in &self.actions {
            let img = basis * act;
            let x = solver.solve_rows(&img).ok_or_else(|| Error::Construction("subspace is not a submodule".into()))?;
            actions.push(x);
        }
        Ok((Module { algebra: Arc::clone(&self.algebra), dim: r, actions }, basis.clone()))
    }

    /// `M / S` for the invariant subspace spanned by the rows of `sub`.
    pub fn quotient(&self, sub: &Matrix<F>) -> Quotient<F> {
        let ech = Echelon::new(sub, false);
        let rank = ech.rank();
        let mut is_pivot = vec![false; self.dim];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.dim).filter(|&c| !is_pivot[c]).collect();
        let q = free.len();
        let mut projection = Matrix::zeros(self.dim, q);
        for i in 0..self.dim {
            let mut v = crate::linalg::unit_vector::<F>(self.dim, i);
            for (r, &p) in ech.pivots.iter().enumerate().take(rank) {
                let c = v[p].clone();
                if !c.is_zero() {
                    for (x, y) in v.iter_mut().zip(ech.reduced.row(r)) {
                        *x = x.clone() - c.clone() * y.clone();
                    }
                }
            }
            for (j, &c) in free.iter().enumerate() {
                projection.set(i, j, v[c].clone());
            }
        }
        let section = Matrix::identity(self.dim).select_rows(&free);
        let actions = self.actions.iter().map(|act| &(&section * act) * &projection).collect();
        Quotient { module: Module { algebra: Arc::clone(&self.algebra), dim: q, actions }, projection, section }
    }

    /// `M_σ`: the same space with `m · x = m σ(x)`.
    pub fn twist(&self, sigma: &Automorphism<F>) -> Module<F> {
        let actions = (0..self.algebra.dim()).map(|b| self.element_action(sigma.matrix.row(b))).collect();
        Module { algebra: Arc::clone(&self.algebra), dim: self.dim, actions }
    }

    /// Dimensions of `M J^i / M J^{i+1}`, a cheap isomorphism invariant.
    pub fn radical_series(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut current = Matrix::identity(self.dim);
        loop {
            let rad = if current.rows() == 0 {
                Matrix::zeros(0, self.dim)
            } else {
                let gens: Vec<usize> = (0..self.algebra.dim()).filter(|&b| self.algebra.is_radical(b)).collect();
                let imgs: Vec<Matrix<F>> = gens.iter().map(|&b| &current * &self.actions[b]).collect();
                let refs: Vec<&Matrix<F>> = imgs.iter().collect();
                vstack_all(self.dim, &refs).row_space()
            };
            out.push(current.rows() - rad.rows());
            if rad.rows() == 0 {
                break;
            }
            current = rad;
        }
        out
    }
}

/// Result of [`Module::quotient`].
#[derive(Clone, Debug)]
pub struct Quotient<F> {
    pub module: Module<F>,
    /// `M → M/S`.
    pub projection: Matrix<F>,
    /// A linear (not module) section of the projection.
    pub section: Matrix<F>,
}

/// Pullback of `f: X → Z` and `g: Y → Z`.
#[derive(Clone, Debug)]
pub struct Pullback<F> {
    pub module: Module<F>,
    pub to_x: Matrix<F>,
    pub to_y: Matrix<F>,
}

pub fn pullback<F: Scalar>(x: &Module<F>, y: &Module<F>, f: &Matrix<F>, g: &Matrix<F>) -> Result<Pullback<F>> {
    let sum = Module::direct_sum(x.algebra(), &[x.clone(), y.clone()]);
    let diff = f.vstack(&-g);
    let ker = diff.kernel();
    let (module, incl) = sum.submodule(&ker)?;
    let to_x = incl.select_cols(&(0..x.dim()).collect::<Vec<_>>());
    let to_y = incl.select_cols(&(x.dim()..x.dim() + y.dim()).collect::<Vec<_>>());
    Ok(Pullback { module, to_x, to_y })
}

pub(crate) fn vstack_all<F: Scalar>(cols: usize, parts: &[&Matrix<F>]) -> Matrix<F> {
    let rows: usize = parts.iter().map(|p| p.rows()).sum();
    let mut data = Vec::with_capacity(rows * cols);
    for p in parts {
        data.extend_from_slice(p.data());
    }
    Matrix::from_vec(rows, cols, data)
}

pub(crate) fn hstack_all<F: Scalar>(rows: usize, parts: &[Matrix<F>]) -> Matrix<F> {
    let cols: usize = parts.iter().map(|p| p.cols()).sum();
    let mut out = Matrix::zeros(rows, cols);
    let mut off = 0;
    for p in parts {
        out.set_block(0, off, p);
        off += p.cols();
    }
    out
}

fn stack_row_spaces<'a, F: Scalar>(cols: usize, parts: impl Iterator<Item = &'a Matrix<F>>) -> Matrix<F> {
    let refs: Vec<&Matrix<F>> = parts.collect();
    if refs.is_empty() {
        return Matrix::zeros(0, cols);
    }
    vstack_all(cols, &refs).row_space()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::*;
    use crate::field::Fp;

    type F3 = Fp<3>;
    type F5 = Fp<5>;

    #[test]
    fn projective_dimensions() {
        assert_eq!(Module::projective(&semisimple::<F3>(), 0).dim(), 1);
        let a = nakayama::<F5>(2, 2);
        let p = Module::projective(&a, 0);
        assert_eq!(p.dim(), 2);
        p.verify_axioms().unwrap();
        assert_eq!(Module::projective(&loop_algebra::<F3>(), 0).dim(), 2);
    }

    #[test]
    fn regular_and_twist_are_modules() {
        let a = loop_algebra::<F3>();
        let m = Module::regular(&a);
        m.verify_axioms().unwrap();
        let s = crate::algebra::verify_automorphism(&a, Matrix::from_i64(2, 2, &[1, 0, 0, -1])).unwrap();
        let t = m.twist(&s);
        t.verify_axioms().unwrap();
        assert_eq!(t.action(1), &-m.action(1));
    }

    #[test]
    fn radical_socle_and_quotient() {
        let a = nakayama::<F5>(2, 2);
        let p = Module::projective(&a, 0);
        assert_eq!(p.radical().rows(), 1);
        assert_eq!(p.socle().rows(), 1);
        let q = p.quotient(&p.radical());
        assert_eq!(q.module.dim(), 1);
        q.module.verify_axioms().unwrap();
        assert!(is_homomorphism(&p, &q.module, &q.projection));
        assert_eq!(p.radical_series(), vec![1, 1]);
    }

    #[test]
    fn pullback_squares() {
        let a = nakayama::<F5>(2, 2);
        let p = Module::projective(&a, 0);
        let id = Matrix::identity(2);
        let pb = pullback(&p, &p, &id, &id).unwrap();
        assert_eq!(pb.module.dim(), 2);
        let zero = Matrix::zeros(2, 2);
        let pb0 = pullback(&p, &p, &zero, &zero).unwrap();
        assert_eq!(pb0.module.dim(), 4);
        pb0.module.verify_axioms().unwrap();
    }
}
