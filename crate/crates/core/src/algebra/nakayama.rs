use super::Algebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;

/// Socle data of a basic self-injective algebra: `soc(e_i A) ≅ S_{ν(i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NakayamaData<F> {
    pub permutation: Vec<usize>,
    /// Spanning element of `soc(e_i A)`, in algebra coordinates.
    pub socle: Vec<Vec<F>>,
}

impl<F: Scalar> NakayamaData<F> {
    pub fn inverse_permutation(&self) -> Vec<usize> {
        let mut inv = vec![0; self.permutation.len()];
        for (i, &j) in self.permutation.iter().enumerate() {
            inv[j] = i;
        }
        inv
    }
}

/// Elements `x` of the span of `basis` with `x·g = 0` (or `g·x = 0` when
/// `left`) for every radical generator `g`.
fn socle_of<F: Scalar>(a: &Algebra<F>, basis: &[usize], left: bool) -> Vec<Vec<F>> {
    let d = a.dim();
    let gens = a.radical_generators();
    let mut m = Matrix::zeros(basis.len(), d * gens.len());
    for (r, &b) in basis.iter().enumerate() {
        for (gi, &g) in gens.iter().enumerate() {
            let prod = if left { a.mult(g, b) } else { a.mult(b, g) };
            for (k, c) in prod {
                m.set(r, gi * d + k, c.clone());
            }
        }
    }
    let ker = m.kernel();
    (0..ker.rows())
        .map(|r| {
            let mut v = vec![F::zero(); d];
            for (i, &b) in basis.iter().enumerate() {
                v[b] = ker.get(r, i).clone();
            }
            v
        })
        .collect()
}

fn vertex_of<F: Scalar>(a: &Algebra<F>, v: &[F], right: bool) -> usize {
    let b = v.iter().position(|c| !c.is_zero()).expect("nonzero socle element");
    if right {
        a.right_vertex(b)
    } else {
        a.left_vertex(b)
    }
}

/// Computes the Nakayama permutation, failing unless every indecomposable
/// projective (right and left) has a simple socle and `ν` is a bijection.
pub fn check_self_injective<F: Scalar>(a: &Algebra<F>) -> Result<NakayamaData<F>> {
    let k = a.num_vertices();
    let mut permutation = Vec::with_capacity(k);
    let mut socle = Vec::with_capacity(k);
    for i in 0..k {
        let soc = socle_of(a, &a.projective_basis(i), false);
        if soc.len() != 1 {
            return Err(Error::NotSelfInjective(format!("soc(e{}A) has dimension {}", a.label(a.vertex_element(i)).trim_start_matches('e'), soc.len())));
        }
        permutation.push(vertex_of(a, &soc[0], true));
        socle.push(soc.into_iter().next().unwrap());
    }
    let mut seen = vec![None; k];
    for (i, &j) in permutation.iter().enumerate() {
        if let Some(prev) = seen[j] {
            return Err(Error::NotSelfInjective(format!(
                "socles of projectives {} and {} are both of type {}",
                vertex_name(a, prev),
                vertex_name(a, i),
                vertex_name(a, j)
            )));
        }
        seen[j] = Some(i);
    }
    for j in 0..k {
        let soc = socle_of(a, &a.left_projective_basis(j), true);
        if soc.len() != 1 {
            return Err(Error::NotSelfInjective(format!("soc(Ae{}) has dimension {}", vertex_name(a, j), soc.len())));
        }
        let i = vertex_of(a, &soc[0], false);
        if permutation[i] != j {
            return Err(Error::NotSelfInjective(format!("left socle of Ae{} does not match the right socles", vertex_name(a, j))));
        }
    }
    Ok(NakayamaData { permutation, socle })
}

fn vertex_name<F: Scalar>(a: &Algebra<F>, i: usize) -> String {
    match a.quiver() {
        Some(q) => q.vertices[i].clone(),
        None => i.to_string(),
    }
}
