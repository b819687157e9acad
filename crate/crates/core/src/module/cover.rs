use crate::field::Scalar;
use crate::linalg::{LeftSolver, Matrix};

use super::{vstack_all, Module};

/// A minimal projective presentation `K ↪ P ↠ M`.
#[derive(Clone, Debug)]
pub struct Presentation<F> {
    /// Vertex of each generator; `P = ⊕_k e_{v_k} Λ`.
    pub vertices: Vec<usize>,
    /// Generators `g_k ∈ M e_{v_k}` spanning the top.
    pub generators: Vec<Vec<F>>,
    pub cover: Module<F>,
    /// `π: P → M`, sending the idempotent of summand `k` to `g_k`.
    pub map: Matrix<F>,
    /// Start of each summand in the basis of `P`.
    pub offsets: Vec<usize>,
    /// Basis of `ker π`, in coordinates of `P`.
    pub kernel: Matrix<F>,
    /// A linear section `s` of `π` (`s π = 1`).
    pub section: Matrix<F>,
}

/// Minimal projective cover. Generators are picked vertex by vertex from the
/// reduced echelon basis of `M e_v`, keeping each row that is independent of
/// `M J` and the rows already chosen.
pub fn projective_cover<F: Scalar>(m: &Module<F>) -> Presentation<F> {
    let a = m.algebra();
    let d = m.dim();
    let rad = m.radical();
    let mut chosen: Vec<Vec<F>> = Vec::new();
    let mut vertices = Vec::new();
    let mut span = rad.clone();
    for v in 0..a.num_vertices() {
        let part = m.vertex_part(v);
        for r in 0..part.rows() {
            let candidate = Matrix::from_vec(1, d, part.row_vec(r));
            let extended = vstack_all(d, &[&span, &candidate]);
            if extended.rank() > span.rows() {
                span = extended.row_space();
                chosen.push(part.row_vec(r));
                vertices.push(v);
            }
        }
    }
    let cover = Module::free(a, &vertices);
    let mut offsets = Vec::with_capacity(vertices.len());
    let mut map = Matrix::zeros(cover.dim(), d);
    let mut row = 0;
    for (g, &v) in chosen.iter().zip(&vertices) {
        offsets.push(row);
        for b in a.projective_basis(v) {
            let img = m.act(g, b);
            for (c, x) in img.into_iter().enumerate() {
                map.set(row, c, x);
            }
            row += 1;
        }
    }
    let kernel = map.kernel();
    let section = if d == 0 {
        Matrix::zeros(0, cover.dim())
    } else {
        LeftSolver::new(&map).solve_rows(&Matrix::identity(d)).expect("projective cover is onto")
    };
    Presentation { vertices, generators: chosen, cover, map, offsets, kernel, section }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::*;
    use crate::field::Fp;

    type F5 = Fp<5>;

    #[test]
    fn cover_of_projective_is_iso() {
        let a = nakayama::<F5>(2, 2);
        let p = Module::projective(&a, 1);
        let pres = projective_cover(&p);
        assert_eq!(pres.vertices, vec![1]);
        assert!(pres.map.is_invertible());
        assert_eq!(pres.kernel.rows(), 0);
    }

    #[test]
    fn cover_of_simple() {
        let a = nakayama::<F5>(2, 2);
        let p = Module::projective(&a, 0);
        let s = p.quotient(&p.radical()).module;
        let pres = projective_cover(&s);
        assert_eq!(pres.vertices, vec![0]);
        assert_eq!(pres.kernel.rows(), 1);
        assert!(crate::module::is_homomorphism(&pres.cover, &s, &pres.map));
    }

    #[test]
    fn cover_of_zero() {
        let a = nakayama::<F5>(2, 2);
        let pres = projective_cover(&Module::zero(&a));
        assert!(pres.vertices.is_empty());
        assert_eq!(pres.cover.dim(), 0);
    }
}
