use std::sync::Arc;

use crate::algebra::{sparse_to_dense, Algebra, Automorphism};
use crate::field::Scalar;
use crate::linalg::Matrix;

use super::Module;

/// The right `A^e`-module with `m · (u ⊗ v) = u m v`, given the left and
/// right actions of the basis of `A`.
pub fn bimodule_from_actions<F: Scalar>(ae: &Arc<Algebra<F>>, dim: usize, left: &[Matrix<F>], right: &[Matrix<F>]) -> Module<F> {
    let d = left.len();
    let mut actions = Vec::with_capacity(d * d);
    for l in left {
        for r in right {
            actions.push(l * r);
        }
    }
    Module::from_actions(Arc::clone(ae), dim, actions)
}

fn left_regular<F: Scalar>(a: &Algebra<F>, u: usize) -> Matrix<F> {
    let d = a.dim();
    let rows: Vec<Vec<F>> = (0..d).map(|i| sparse_to_dense(a.mult(u, i), d)).collect();
    Matrix::from_rows(&rows, d)
}

fn right_by<F: Scalar>(a: &Algebra<F>, x: &[F]) -> Matrix<F> {
    let d = a.dim();
    let rows: Vec<Vec<F>> = (0..d).map(|i| a.multiply(&a.basis_vector(i), x)).collect();
    Matrix::from_rows(&rows, d)
}

/// `A` as a bimodule over itself.
pub fn regular_bimodule<F: Scalar>(a: &Arc<Algebra<F>>, ae: &Arc<Algebra<F>>) -> Module<F> {
    let left: Vec<Matrix<F>> = (0..a.dim()).map(|u| left_regular(a, u)).collect();
    let right: Vec<Matrix<F>> = (0..a.dim()).map(|v| right_by(a, &a.basis_vector(v))).collect();
    bimodule_from_actions(ae, a.dim(), &left, &right)
}

/// `₁A_σ`: regular on the left, `a · x = a σ(x)` on the right.
pub fn twisted_bimodule<F: Scalar>(ae: &Arc<Algebra<F>>, sigma: &Automorphism<F>) -> Module<F> {
    let a = &sigma.algebra;
    let left: Vec<Matrix<F>> = (0..a.dim()).map(|u| left_regular(a, u)).collect();
    let right: Vec<Matrix<F>> = (0..a.dim()).map(|v| right_by(a, sigma.matrix.row(v))).collect();
    bimodule_from_actions(ae, a.dim(), &left, &right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::*;
    use crate::algebra::{enveloping, verify_automorphism};
    use crate::field::Fp;
    use crate::module::{iso_test, tensor_bimodules};

    type F3 = Fp<3>;

    #[test]
    fn twisted_loop_bimodule() {
        let a = loop_algebra::<F3>();
        let ae = Arc::new(enveloping(&a));
        let reg = regular_bimodule(&a, &ae);
        reg.verify_axioms().unwrap();
        let id = Automorphism::identity(&a);
        assert_eq!(twisted_bimodule(&ae, &id), reg);
        let neg = verify_automorphism(&a, Matrix::from_i64(2, 2, &[1, 0, 0, -1])).unwrap();
        let tw = twisted_bimodule(&ae, &neg);
        tw.verify_axioms().unwrap();
        // right action of x, i.e. the action of e ⊗ x at index 0 * 2 + 1
        assert_eq!(tw.action(1), &-reg.action(1));
        assert_eq!(tw.action(2), reg.action(2));
    }

    #[test]
    fn twists_compose() {
        // ₁A_σ ⊗_A ₁A_τ ≅ ₁A_{σ∘τ}
        let a = nakayama::<F3>(2, 2);
        let ae = Arc::new(enveloping(&a));
        let swap = verify_automorphism(&a, Matrix::from_i64(4, 4, &[0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0])).unwrap();
        let scale = verify_automorphism(&a, Matrix::from_i64(4, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 1])).unwrap();
        let autos = [Automorphism::identity(&a), swap.clone(), scale.clone(), swap.then(&scale)];
        for s in &autos {
            for t in &autos {
                let prod = tensor_bimodules(&twisted_bimodule(&ae, s), &twisted_bimodule(&ae, t)).unwrap();
                let expected = twisted_bimodule(&ae, &t.then(s));
                assert!(iso_test(&prod.module, &expected).is_some());
            }
        }
    }
}
