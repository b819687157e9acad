use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;

use super::{vstack_all, Module};

/// `M ⊗_A B` realized as the quotient of `M ⊗_k B` (basis `(i, j)` at index
/// `i * dim B + j`) by the balancing relations.
#[derive(Clone, Debug)]
pub struct Tensor<F> {
    pub module: Module<F>,
    pub projection: Matrix<F>,
    pub section: Matrix<F>,
}

/// Left action of `a ∈ A` on a bimodule `B`, i.e. the action of `a ⊗ 1`.
pub(crate) fn left_action<F: Scalar>(b: &Module<F>, a: usize) -> Matrix<F> {
    let base = b.algebra().enveloping_base().expect("bimodule");
    let d = base.dim();
    let mut acc = Matrix::zeros(b.dim(), b.dim());
    for j in 0..base.num_vertices() {
        acc = &acc + b.action(a * d + base.vertex_element(j));
    }
    acc
}

/// Right action of `a ∈ A` on a bimodule `B`, i.e. the action of `1 ⊗ a`.
pub(crate) fn right_action<F: Scalar>(b: &Module<F>, a: usize) -> Matrix<F> {
    let base = b.algebra().enveloping_base().expect("bimodule");
    let d = base.dim();
    let mut acc = Matrix::zeros(b.dim(), b.dim());
    for i in 0..base.num_vertices() {
        acc = &acc + b.action(base.vertex_element(i) * d + a);
    }
    acc
}

/// `M ⊗_A B` for a right `A`-module `M` and a bimodule `B`.
pub fn tensor_functor<F: Scalar>(m: &Module<F>, b: &Module<F>) -> Result<Tensor<F>> {
    let base = b
        .algebra()
        .enveloping_base()
        .ok_or_else(|| Error::Dimension("second tensor factor must be a bimodule".into()))?;
    if !m.algebra().same_as(base) {
        return Err(Error::Dimension("tensor factors are over different algebras".into()));
    }
    let a: &Arc<_> = m.algebra();
    let (dm, db) = (m.dim(), b.dim());
    let n = dm * db;
    let gens: Vec<usize> = a.vertex_elements().iter().chain(a.radical_generators()).copied().collect();
    let mut blocks = Vec::with_capacity(gens.len());
    for &g in &gens {
        // rows (i, j): (e_i g) ⊗ e_j − e_i ⊗ (g e_j)
        let kron = kron(m.action(g), &Matrix::identity(db)) - kron(&Matrix::identity(dm), &left_action(b, g));
        blocks.push(kron);
    }
    let refs: Vec<&Matrix<F>> = blocks.iter().collect();
    let relations = if refs.is_empty() { Matrix::zeros(0, n) } else { vstack_all(n, &refs).row_space() };
    let whole_actions: Vec<Matrix<F>> = (0..a.dim()).map(|x| kron(&Matrix::identity(dm), &right_action(b, x))).collect();
    let whole = Module::from_actions(Arc::clone(a), n, whole_actions);
    let q = whole.quotient(&relations);
    Ok(Tensor { module: q.module, projection: q.projection, section: q.section })
}

/// `B ⊗_A C` for two bimodules, as a bimodule.
pub fn tensor_bimodules<F: Scalar>(b: &Module<F>, c: &Module<F>) -> Result<Tensor<F>> {
    let ae = b.algebra();
    let base = ae.enveloping_base().ok_or_else(|| Error::Dimension("tensor factors must be bimodules".into()))?;
    let (db, dc) = (b.dim(), c.dim());
    let n = db * dc;
    let gens: Vec<usize> = base.vertex_elements().iter().chain(base.radical_generators()).copied().collect();
    let blocks: Vec<Matrix<F>> = gens
        .iter()
        .map(|&g| kron(&right_action(b, g), &Matrix::identity(dc)) - kron(&Matrix::identity(db), &left_action(c, g)))
        .collect();
    let refs: Vec<&Matrix<F>> = blocks.iter().collect();
    let relations = if refs.is_empty() { Matrix::zeros(0, n) } else { vstack_all(n, &refs).row_space() };
    let d = base.dim();
    let lefts: Vec<Matrix<F>> = (0..d).map(|u| left_action(b, u)).collect();
    let rights: Vec<Matrix<F>> = (0..d).map(|v| right_action(c, v)).collect();
    let mut actions = Vec::with_capacity(d * d);
    for l in &lefts {
        for r in &rights {
            actions.push(kron(l, r));
        }
    }
    let whole = Module::from_actions(Arc::clone(ae), n, actions);
    let q = whole.quotient(&relations);
    Ok(Tensor { module: q.module, projection: q.projection, section: q.section })
}

/// `f ⊗ 1: M ⊗ B → M' ⊗ B` between two computed tensor products.
pub fn tensor_morphism<F: Scalar>(f: &Matrix<F>, src: &Tensor<F>, tgt: &Tensor<F>, db: usize) -> Matrix<F> {
    let lifted = kron(f, &Matrix::identity(db));
    &(&src.section * &lifted) * &tgt.projection
}

pub(crate) fn kron<F: Scalar>(x: &Matrix<F>, y: &Matrix<F>) -> Matrix<F> {
    let mut out = Matrix::zeros(x.rows() * y.rows(), x.cols() * y.cols());
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            let c = x.get(i, j);
            if c.is_zero() {
                continue;
            }
            for k in 0..y.rows() {
                for l in 0..y.cols() {
                    let v = y.get(k, l);
                    if !v.is_zero() {
                        out.set(i * y.rows() + k, j * y.cols() + l, c.clone() * v.clone());
                    }
                }
            }
        }
    }
    out
}
