use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::Scalar;
use crate::linalg::{combine, LeftSolver, Matrix};

use super::{projective_cover, Module};

const ISO_SEED: u64 = 0x150_7e57;
const ISO_RANDOM_DRAWS: usize = 1000;
const ISO_EXHAUSTIVE_LIMIT: u64 = 1 << 16;

/// Checks `R^M_g F = F R^N_g` on the idempotents and radical generators,
/// which generate the algebra.
pub fn is_homomorphism<F: Scalar>(m: &Module<F>, n: &Module<F>, f: &Matrix<F>) -> bool {
    if f.rows() != m.dim() || f.cols() != n.dim() {
        return false;
    }
    let a = m.algebra();
    a.vertex_elements()
        .iter()
        .chain(a.radical_generators())
        .all(|&g| &(m.action(g) * f) == &(f * n.action(g)))
}

/// `Hom(M, N)` parametrized by the images `n_k ∈ N e_{v_k}` of the top
/// generators of `M`: one elementary map per coordinate, and a combination is
/// a homomorphism iff it lies in the left kernel of `conditions`, which say
/// that the induced map on the projective cover kills its kernel.
struct HomParam<F> {
    elementary: Vec<Matrix<F>>,
    conditions: Matrix<F>,
}

fn hom_param<F: Scalar>(m: &Module<F>, n: &Module<F>) -> HomParam<F> {
    let a = m.algebra();
    let pres = projective_cover(m);
    let dn = n.dim();
    let dp = pres.cover.dim();

    // For each generator k: basis w_t of N e_{v_k} and the images w_t R_b.
    let mut unknowns: Vec<(usize, Vec<Vec<F>>)> = Vec::new();
    for (k, &v) in pres.vertices.iter().enumerate() {
        let part = n.vertex_part(v);
        let basis_b = a.projective_basis(v);
        for t in 0..part.rows() {
            let w = part.row_vec(t);
            let images: Vec<Vec<F>> = basis_b.iter().map(|&b| n.act(&w, b)).collect();
            unknowns.push((k, images));
        }
    }
    let kr = pres.kernel.rows();
    let mut conditions: Matrix<F> = Matrix::zeros(unknowns.len(), kr * dn);
    let mut elementary = Vec::with_capacity(unknowns.len());
    for (u, (k, images)) in unknowns.iter().enumerate() {
        let off = pres.offsets[*k];
        for r in 0..kr {
            let kappa = pres.kernel.row(r);
            for (bi, img) in images.iter().enumerate() {
                let c = &kappa[off + bi];
                if c.is_zero() {
                    continue;
                }
                for (j, x) in img.iter().enumerate() {
                    if !x.is_zero() {
                        let cur = conditions.get(u, r * dn + j).clone();
                        conditions.set(u, r * dn + j, cur + c.clone() * x.clone());
                    }
                }
            }
        }
        let mut lifted: Matrix<F> = Matrix::zeros(dp, dn);
        for (bi, img) in images.iter().enumerate() {
            for (j, x) in img.iter().enumerate() {
                lifted.set(off + bi, j, x.clone());
            }
        }
        elementary.push(&pres.section * &lifted);
    }
    HomParam { elementary, conditions }
}

/// Basis of `Hom(M, N)`.
pub fn hom_space<F: Scalar>(m: &Module<F>, n: &Module<F>) -> Vec<Matrix<F>> {
    if m.dim() == 0 || n.dim() == 0 {
        return Vec::new();
    }
    let param = hom_param(m, n);
    if param.elementary.is_empty() {
        return Vec::new();
    }
    let solutions = param.conditions.kernel();
    (0..solutions.rows()).map(|s| combine(&param.elementary, solutions.row(s), m.dim(), n.dim())).collect()
}

/// A linear condition `pre · f · post = target` on a map `f: M → N`; a
/// missing `pre` or `post` stands for the identity.
pub struct HomConstraint<'a, F> {
    pub pre: Option<&'a Matrix<F>>,
    pub post: Option<&'a Matrix<F>>,
    pub target: &'a Matrix<F>,
}

impl<'a, F: Scalar> HomConstraint<'a, F> {
    /// `pre · f = target`.
    pub fn after(pre: &'a Matrix<F>, target: &'a Matrix<F>) -> Self {
        HomConstraint { pre: Some(pre), post: None, target }
    }

    /// `f · post = target`.
    pub fn before(post: &'a Matrix<F>, target: &'a Matrix<F>) -> Self {
        HomConstraint { pre: None, post: Some(post), target }
    }
}

/// Some homomorphism `f: M → N` satisfying all constraints, if one exists.
pub fn solve_hom<F: Scalar>(m: &Module<F>, n: &Module<F>, constraints: &[HomConstraint<F>]) -> Option<Matrix<F>> {
    let zero = Matrix::zeros(m.dim(), n.dim());
    let param = if m.dim() == 0 || n.dim() == 0 { None } else { Some(hom_param(m, n)) };
    let param = match param {
        Some(p) if !p.elementary.is_empty() => p,
        _ => return constraints.iter().all(|c| c.target.is_zero()).then_some(zero),
    };
    let apply = |f: &Matrix<F>, c: &HomConstraint<F>| -> Matrix<F> {
        let left = match c.pre {
            Some(p) => p * f,
            None => f.clone(),
        };
        match c.post {
            Some(q) => &left * q,
            None => left,
        }
    };
    let width: usize = param.conditions.cols() + constraints.iter().map(|c| c.target.rows() * c.target.cols()).sum::<usize>();
    let mut system: Matrix<F> = Matrix::zeros(param.elementary.len(), width);
    for (u, e) in param.elementary.iter().enumerate() {
        let row = system.row_mut(u);
        row[..param.conditions.cols()].clone_from_slice(param.conditions.row(u));
        let mut off = param.conditions.cols();
        for c in constraints {
            let v = apply(e, c);
            debug_assert_eq!((v.rows(), v.cols()), (c.target.rows(), c.target.cols()));
            row[off..off + v.data().len()].clone_from_slice(v.data());
            off += v.data().len();
        }
    }
    let mut rhs = vec![F::zero(); param.conditions.cols()];
    for c in constraints {
        rhs.extend_from_slice(c.target.data());
    }
    let y = LeftSolver::new(&system).solve(&rhs)?;
    Some(combine(&param.elementary, &y, m.dim(), n.dim()))
}

/// A uniformly random combination of the hom-space basis.
pub fn random_morphism<F: Scalar, R: Rng + ?Sized>(m: &Module<F>, n: &Module<F>, basis: &[Matrix<F>], rng: &mut R) -> Matrix<F> {
    let coeffs: Vec<F> = basis.iter().map(|_| F::random(rng)).collect();
    combine(basis, &coeffs, m.dim(), n.dim())
}

/// Returns an isomorphism `M → N` if one is found.
///
/// Tries the hom-space basis, then seeded random combinations, then (over a
/// small enough finite field) every combination. Over the rationals or for
/// large hom spaces a `None` after the random phase is not a proof.
pub fn iso_test<F: Scalar>(m: &Module<F>, n: &Module<F>) -> Option<Matrix<F>> {
    if m.dim() != n.dim() {
        return None;
    }
    if m.dim() == 0 {
        return Some(Matrix::zeros(0, 0));
    }
    if m == n {
        return Some(Matrix::identity(m.dim()));
    }
    if m.radical_series() != n.radical_series() {
        return None;
    }
    let basis = hom_space(m, n);
    if basis.is_empty() || hom_space(n, m).len() != basis.len() {
        return None;
    }
    if let Some(f) = basis.iter().find(|f| f.is_invertible()) {
        return Some(f.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
    for _ in 0..ISO_RANDOM_DRAWS {
        let f = random_morphism(m, n, &basis, &mut rng);
        if f.is_invertible() {
            return Some(f);
        }
    }
    let elems = F::elements()?;
    let q = elems.len() as u64;
    let total = q.checked_pow(basis.len() as u32)?;
    if total > ISO_EXHAUSTIVE_LIMIT {
        return None;
    }
    for mut idx in 0..total {
        let mut coeffs = Vec::with_capacity(basis.len());
        for _ in 0..basis.len() {
            coeffs.push(elems[(idx % q) as usize].clone());
            idx /= q;
        }
        let f = combine(&basis, &coeffs, m.dim(), n.dim());
        if f.is_invertible() {
            return Some(f);
        }
    }
    None
}
