//! The suspension `Σ = − ⊗_A ₁A_{τ^{-1}}` and the exact sequence of functors
//! `0 → Id → X^1 → … → X^N → Σ → 0` with `X^i = Σ(−) ⊗_A P_{N+1-i}`.

use std::sync::Arc;

use crate::algebra::{Algebra, Automorphism};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::homological::check_exact;
use crate::linalg::Matrix;
use crate::module::{is_homomorphism, iso_test, projective_cover, twisted_bimodule, Module};
use crate::periodicity::{detect_twist, BimoduleResolution, FreeBimodule};

/// `Σ M = M ⊗_A ₁A_{τ^{-1}} ≅ M_{τ^{-1}}`; on morphisms `Σ f = f`.
#[derive(Clone, Debug)]
pub struct Suspension<F> {
    algebra: Arc<Algebra<F>>,
    tau: Automorphism<F>,
    tau_inv: Automorphism<F>,
}

impl<F: Scalar> Suspension<F> {
    /// `Σ = − ⊗_A ₁A_{τ^{-1}}`.
    pub fn new(tau: Automorphism<F>) -> Self {
        let tau_inv = tau.inverse();
        Suspension { algebra: Arc::clone(&tau.algebra), tau, tau_inv }
    }

    /// `Σ = − ⊗_A ₁A_{σ^{-m}}`.
    pub fn from_twist(sigma: &Automorphism<F>, m: usize) -> Self {
        Self::new(sigma.power(m as i64))
    }

    pub fn tau(&self) -> &Automorphism<F> {
        &self.tau
    }

    pub fn is_identity(&self) -> bool {
        self.tau.is_identity()
    }

    pub fn apply(&self, m: &Module<F>) -> Module<F> {
        if self.is_identity() {
            return m.clone();
        }
        m.twist(&self.tau_inv)
    }

    pub fn unapply(&self, m: &Module<F>) -> Module<F> {
        if self.is_identity() {
            return m.clone();
        }
        m.twist(&self.tau)
    }

    /// The bimodule `₁A_{τ^{-1}}` realizing `Σ`.
    pub fn bimodule(&self, enveloping: &Arc<Algebra<F>>) -> Module<F> {
        twisted_bimodule(enveloping, &self.tau_inv)
    }

    /// `Σ(e_i A) ≅ τ^{-1}(e_i) A = e_{π(i)} A`.
    pub fn object_map(&self) -> Vec<usize> {
        self.tau_inv.vertex_permutation()
    }

    /// Checks that `Σ` permutes the indecomposable projectives as
    /// [`Self::object_map`] says and that `Σ^{-1}` undoes it.
    pub fn verify(&self) -> Result<()> {
        let a = &self.algebra;
        for (v, w) in self.object_map().into_iter().enumerate() {
            let p = Module::projective(a, v);
            let sp = self.apply(&p);
            if iso_test(&sp, &Module::projective(a, w)).is_none() {
                return Err(Error::Construction(format!("Σ(e_{v}A) is not isomorphic to e_{w}A")));
            }
            if self.unapply(&sp) != p {
                return Err(Error::Construction(format!("Σ^-1 Σ(e_{v}A) differs from e_{v}A")));
            }
        }
        Ok(())
    }
}

/// Reduced echelon basis of `S e_v` with pivot columns, for reading off
/// coordinates.
#[derive(Clone, Debug)]
struct VertexBasis<F> {
    rows: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Scalar> VertexBasis<F> {
    fn new(s: &Module<F>, v: usize) -> Self {
        let rows = s.vertex_part(v);
        let pivots = (0..rows.rows()).map(|r| rows.row(r).iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
        VertexBasis { rows, pivots }
    }

    fn len(&self) -> usize {
        self.rows.rows()
    }

    fn coords(&self, x: &[F]) -> Vec<F> {
        self.pivots.iter().map(|&p| x[p].clone()).collect()
    }
}

/// `S ⊗_A P` for a free bimodule `P = ⊕_k A e_{a_k} ⊗ e_{b_k} A`, realized as
/// `⊕_k ⊕_t e_{b_k} A` where `t` runs over a basis `w_t` of `S e_{a_k}`.
#[derive(Clone, Debug)]
struct TensorFree<F> {
    module: Module<F>,
    parts: Vec<VertexBasis<F>>,
    /// `starts[k][t]`: first basis index of the summand `w_t ⊗ e_{b_k} A`.
    starts: Vec<Vec<usize>>,
}

impl<F: Scalar> TensorFree<F> {
    fn new(s: &Module<F>, p: &FreeBimodule<F>) -> Self {
        let a = s.algebra();
        let mut vertices = Vec::new();
        let mut parts = Vec::with_capacity(p.vertices.len());
        let mut starts = Vec::with_capacity(p.vertices.len());
        let mut off = 0;
        for &(av, bv) in &p.vertices {
            let part = VertexBasis::new(s, av);
            let width = a.projective_basis(bv).len();
            starts.push((0..part.len()).map(|t| off + t * width).collect());
            off += part.len() * width;
            vertices.extend(std::iter::repeat(bv).take(part.len()));
            parts.push(part);
        }
        TensorFree { module: Module::free(a, &vertices), parts, starts }
    }

    /// Adds `c · (x ⊗ y)_k` to `out`, for `x ∈ S e_{a_k}` and `y ∈ e_{b_k} A`.
    fn add(&self, out: &mut [F], positions: &[Vec<usize>], bv: usize, k: usize, c: &F, x: &[F], y: &[F]) {
        for (t, xt) in self.parts[k].coords(x).into_iter().enumerate() {
            if xt.is_zero() {
                continue;
            }
            let s = self.starts[k][t];
            for (b, yb) in y.iter().enumerate() {
                if !yb.is_zero() {
                    let j = positions[bv][b];
                    debug_assert!(j != usize::MAX, "element outside e_b A");
                    out[s + j] = out[s + j].clone() + c.clone() * xt.clone() * yb.clone();
                }
            }
        }
    }
}

/// The functor sequence evaluated at a module `M`.
#[derive(Clone, Debug)]
pub struct Evaluation<F> {
    pub module: Module<F>,
    pub suspended: Module<F>,
    /// `X^1 M, …, X^N M`.
    pub terms: Vec<Module<F>>,
    /// `X^i M → X^{i+1} M`.
    pub maps: Vec<Matrix<F>>,
    /// `M → X^1 M`.
    pub unit: Matrix<F>,
    /// `X^N M → Σ M`.
    pub counit: Matrix<F>,
    tensors: Vec<TensorFree<F>>,
}

impl<F: Scalar> Evaluation<F> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `0 → M → X^1M → … → X^NM → ΣM → 0` as a list of maps, padded with
    /// the zero maps at both ends.
    pub fn chain(&self) -> Vec<Matrix<F>> {
        let mut out = vec![Matrix::zeros(0, self.module.dim()), self.unit.clone()];
        out.extend(self.maps.iter().cloned());
        out.push(self.counit.clone());
        out.push(Matrix::zeros(self.suspended.dim(), 0));
        out
    }

    /// Checks that every map is a homomorphism, the chain is exact and every
    /// `X^i M` is projective.
    pub fn verify(&self) -> Result<()> {
        if !is_homomorphism(&self.module, &self.terms[0], &self.unit) {
            return Err(Error::NotHomomorphism("unit".into()));
        }
        for (i, f) in self.maps.iter().enumerate() {
            if !is_homomorphism(&self.terms[i], &self.terms[i + 1], f) {
                return Err(Error::NotHomomorphism(format!("X^{} → X^{}", i + 1, i + 2)));
            }
        }
        if !is_homomorphism(self.terms.last().expect("nonempty"), &self.suspended, &self.counit) {
            return Err(Error::NotHomomorphism("counit".into()));
        }
        check_exact(&self.chain())?;
        for (i, t) in self.terms.iter().enumerate() {
            if !is_projective(t) {
                return Err(Error::Construction(format!("X^{} M is not projective", i + 1)));
            }
        }
        Ok(())
    }
}

pub fn is_projective<F: Scalar>(m: &Module<F>) -> bool {
    projective_cover(m).kernel.rows() == 0
}

/// `0 → Id → X^1 → … → X^N → Σ → 0` obtained from
/// `0 → ₁A_τ → P_N → … → P_1 → A → 0` by applying `− ⊗_A ₁A_{τ^{-1}}`.
#[derive(Clone, Debug)]
pub struct FunctorSequence<F> {
    algebra: Arc<Algebra<F>>,
    enveloping: Arc<Algebra<F>>,
    suspension: Suspension<F>,
    /// `P_N, …, P_1`, so that `X^i` uses `terms[i-1]`.
    terms: Vec<FreeBimodule<F>>,
    /// `P_{N+1-i} → P_{N-i}` for `i = 1, …, N-1`.
    differentials: Vec<Matrix<F>>,
    augmentation: Matrix<F>,
    /// The image of `1 ∈ ₁A_τ` in `P_N`.
    generator: Vec<F>,
    /// `positions[v][b]`: index of the basis element `b` in `e_v A`.
    positions: Vec<Vec<usize>>,
}

impl<F: Scalar> FunctorSequence<F> {
    /// Uses the first `length` terms of the minimal resolution and the twist
    /// found on `Ω^length`.
    pub fn from_resolution(res: &mut BimoduleResolution<F>, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::Hypothesis("the functor sequence needs at least one term".into()));
        }
        res.extend_to(length)?;
        let (omega, incl) = &res.syzygies[length - 1];
        let twist = detect_twist(&res.algebra, omega)
            .ok_or_else(|| Error::Construction(format!("Ω^{length} is not a twisted bimodule")))?;
        let generator = incl.apply(&twist.generator);
        let a = Arc::clone(&res.algebra);
        let terms: Vec<FreeBimodule<F>> = (1..=length).rev().map(|i| res.terms[i - 1].clone()).collect();
        let differentials = (1..length).map(|i| res.differential(length + 1 - i).clone()).collect();
        let positions = (0..a.num_vertices())
            .map(|v| {
                let mut pos = vec![usize::MAX; a.dim()];
                for (j, b) in a.projective_basis(v).into_iter().enumerate() {
                    pos[b] = j;
                }
                pos
            })
            .collect();
        Ok(FunctorSequence {
            algebra: a,
            enveloping: Arc::clone(&res.enveloping),
            suspension: Suspension::new(twist.sigma),
            terms,
            differentials,
            augmentation: res.augmentation.clone(),
            generator,
            positions,
        })
    }

    /// The same data with `Σ` replaced by `Σ ∘ (− ⊗ ₁A_{ρ^{-1}})`. Used only
    /// to build deliberately broken sequences.
    pub fn with_corrupted_suspension(&self, rho: &Automorphism<F>) -> Self {
        let mut out = self.clone();
        out.suspension = Suspension::new(rho.then(self.suspension.tau()));
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }

    pub fn enveloping(&self) -> &Arc<Algebra<F>> {
        &self.enveloping
    }

    pub fn suspension(&self) -> &Suspension<F> {
        &self.suspension
    }

    /// `Σ(−) ⊗ d` for a bimodule map `d: P → P'` between free bimodules.
    fn induced(&self, src: &TensorFree<F>, p: &FreeBimodule<F>, tgt: &TensorFree<F>, q: &FreeBimodule<F>, d: &Matrix<F>, s: &Module<F>) -> Matrix<F> {
        let a = &self.algebra;
        let dim_a = a.dim();
        let mut out = Matrix::zeros(src.module.dim(), tgt.module.dim());
        for (k, &(_, bv)) in p.vertices.iter().enumerate() {
            let image = d.row(p.offsets[k]);
            let basis_b = a.projective_basis(bv);
            for t in 0..src.parts[k].len() {
                let w = src.parts[k].rows.row(t);
                for (j, &w0) in basis_b.iter().enumerate() {
                    let row = src.starts[k][t] + j;
                    let mut acc = vec![F::zero(); tgt.module.dim()];
                    for (pos, c) in image.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let k2 = q.offsets.partition_point(|&o| o <= pos) - 1;
                        let (av2, bv2) = q.vertices[k2];
                        let x = self.enveloping.projective_basis(av2 * a.num_vertices() + bv2)[pos - q.offsets[k2]];
                        let (u, v) = (x / dim_a, x % dim_a);
                        let left = s.act(w, u);
                        let mut right = vec![F::zero(); dim_a];
                        for (b, coeff) in a.mult(v, w0) {
                            right[*b] = coeff.clone();
                        }
                        tgt.add(&mut acc, &self.positions, bv2, k2, c, &left, &right);
                    }
                    for (col, x) in acc.into_iter().enumerate() {
                        out.set(row, col, x);
                    }
                }
            }
        }
        out
    }

    /// `X^1 M → … → X^N M` with the unit and counit.
    pub fn evaluate(&self, m: &Module<F>) -> Evaluation<F> {
        let a = &self.algebra;
        let dim_a = a.dim();
        let s = self.suspension.apply(m);
        let tensors: Vec<TensorFree<F>> = self.terms.iter().map(|p| TensorFree::new(&s, p)).collect();
        let maps = (0..self.terms.len() - 1)
            .map(|i| self.induced(&tensors[i], &self.terms[i], &tensors[i + 1], &self.terms[i + 1], &self.differentials[i], &s))
            .collect();

        // unit: x ↦ x ⊗ z
        let first = &self.terms[0];
        let mut unit = Matrix::zeros(m.dim(), tensors[0].module.dim());
        for r in 0..m.dim() {
            let x = crate::linalg::unit_vector(m.dim(), r);
            let mut acc = vec![F::zero(); tensors[0].module.dim()];
            for (pos, c) in self.generator.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let k = first.offsets.partition_point(|&o| o <= pos) - 1;
                let (av, bv) = first.vertices[k];
                let e = self.enveloping.projective_basis(av * a.num_vertices() + bv)[pos - first.offsets[k]];
                let (u, v) = (e / dim_a, e % dim_a);
                tensors[0].add(&mut acc, &self.positions, bv, k, c, &s.act(&x, u), &a.basis_vector(v));
            }
            for (col, y) in acc.into_iter().enumerate() {
                unit.set(r, col, y);
            }
        }

        // counit: w_t ⊗ w0 in summand k ↦ w_t h_k w0
        let last_p = self.terms.last().expect("nonempty");
        let last_t = tensors.last().expect("nonempty");
        let mut counit = Matrix::zeros(last_t.module.dim(), s.dim());
        for (k, &(_, bv)) in last_p.vertices.iter().enumerate() {
            let h = self.augmentation.row(last_p.offsets[k]);
            for t in 0..last_t.parts[k].len() {
                let w = last_t.parts[k].rows.row(t);
                for (j, &w0) in a.projective_basis(bv).iter().enumerate() {
                    let x = a.multiply(h, &a.basis_vector(w0));
                    for (col, y) in s.act_element(w, &x).into_iter().enumerate() {
                        counit.set(last_t.starts[k][t] + j, col, y);
                    }
                }
            }
        }
        Evaluation {
            module: m.clone(),
            suspended: s,
            terms: tensors.iter().map(|t| t.module.clone()).collect(),
            maps,
            unit,
            counit,
            tensors,
        }
    }

    /// `X^i f` for `f: M → M'`, given both evaluations.
    pub fn on_morphism(&self, src: &Evaluation<F>, tgt: &Evaluation<F>, f: &Matrix<F>) -> Vec<Matrix<F>> {
        let a = &self.algebra;
        self.terms
            .iter()
            .zip(src.tensors.iter().zip(&tgt.tensors))
            .map(|(p, (ts, tt))| {
                let mut out = Matrix::zeros(ts.module.dim(), tt.module.dim());
                for (k, &(_, bv)) in p.vertices.iter().enumerate() {
                    let width = a.projective_basis(bv).len();
                    for t in 0..ts.parts[k].len() {
                        let image = f.apply(ts.parts[k].rows.row(t));
                        for (t2, c) in tt.parts[k].coords(&image).into_iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            for j in 0..width {
                                out.set(ts.starts[k][t] + j, tt.starts[k][t2] + j, c.clone());
                            }
                        }
                    }
                }
                out
            })
            .collect()
    }
}
