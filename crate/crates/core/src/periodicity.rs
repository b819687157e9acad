//! Minimal bimodule resolutions of `A` and quasi-periodicity detection.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{enveloping, verify_automorphism, Algebra, Automorphism};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::Matrix;
use crate::module::{is_homomorphism, projective_cover, regular_bimodule, twisted_bimodule, Module};
use crate::report::matrix_json;

pub const DEFAULT_MAX_N: usize = 12;
pub const DEFAULT_ORDER_BOUND: usize = 64;
pub const SYZYGY_DIM_LIMIT: usize = 10_000;

const SEARCH_SEED: u64 = 0x7_1157;
const SEARCH_DRAWS: usize = 200;

/// `⊕_k ε_{(a_k, b_k)} A^e = ⊕_k A e_{a_k} ⊗ e_{b_k} A`.
#[derive(Clone, Debug)]
pub struct FreeBimodule<F> {
    /// `(a_k, b_k)` for each summand.
    pub vertices: Vec<(usize, usize)>,
    pub offsets: Vec<usize>,
    pub module: Module<F>,
}

impl<F: Scalar> FreeBimodule<F> {
    fn new(ae: &Arc<Algebra<F>>, base: &Algebra<F>, ae_vertices: &[usize]) -> Self {
        let k = base.num_vertices();
        let module = Module::free(ae, ae_vertices);
        let mut offsets = Vec::with_capacity(ae_vertices.len());
        let mut off = 0;
        for &v in ae_vertices {
            offsets.push(off);
            let basis = ae.projective_basis(v);
            debug_assert_eq!(basis[0], ae.vertex_element(v));
            off += basis.len();
        }
        FreeBimodule { vertices: ae_vertices.iter().map(|&v| (v / k, v % k)).collect(), offsets, module }
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

/// `0 ← A ← P_1 ← P_2 ← …` with `Ω^i = ker(P_i → P_{i-1})`.
#[derive(Clone, Debug)]
pub struct BimoduleResolution<F> {
    pub algebra: Arc<Algebra<F>>,
    pub enveloping: Arc<Algebra<F>>,
    /// `terms[i]` is `P_{i+1}`.
    pub terms: Vec<FreeBimodule<F>>,
    /// `P_1 → A`.
    pub augmentation: Matrix<F>,
    /// `differentials[i]: P_{i+2} → P_{i+1}`.
    pub differentials: Vec<Matrix<F>>,
    /// `syzygies[i]` is `Ω^{i+1}` with its inclusion into `P_{i+1}`.
    pub syzygies: Vec<(Module<F>, Matrix<F>)>,
}

impl<F: Scalar> BimoduleResolution<F> {
    pub fn new(algebra: &Arc<Algebra<F>>) -> Self {
        let ae = Arc::new(enveloping(algebra));
        BimoduleResolution {
            algebra: Arc::clone(algebra),
            enveloping: ae,
            terms: Vec::new(),
            augmentation: Matrix::zeros(0, algebra.dim()),
            differentials: Vec::new(),
            syzygies: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Ω^i` for `i ≥ 1`.
    pub fn syzygy(&self, i: usize) -> &Module<F> {
        &self.syzygies[i - 1].0
    }

    /// `P_i → P_{i-1}` for `i ≥ 2`, or the augmentation for `i = 1`.
    pub fn differential(&self, i: usize) -> &Matrix<F> {
        if i == 1 {
            &self.augmentation
        } else {
            &self.differentials[i - 2]
        }
    }

    /// Extends the resolution to `len` terms.
    pub fn extend_to(&mut self, len: usize) -> Result<()> {
        while self.terms.len() < len {
            let (target, incl) = match self.syzygies.last() {
                Some((m, incl)) => (m.clone(), Some(incl.clone())),
                None => (regular_bimodule(&self.algebra, &self.enveloping), None),
            };
            let pres = projective_cover(&target);
            let term = FreeBimodule::new(&self.enveloping, &self.algebra, &pres.vertices);
            let (omega, omega_incl) = pres.cover.submodule(&pres.kernel)?;
            if omega.dim() > SYZYGY_DIM_LIMIT {
                return Err(Error::ResourceBound(format!(
                    "syzygy {} has dimension {} (limit {SYZYGY_DIM_LIMIT})",
                    self.terms.len() + 1,
                    omega.dim()
                )));
            }
            match incl {
                None => self.augmentation = pres.map.clone(),
                Some(incl) => self.differentials.push(&pres.map * &incl),
            }
            self.terms.push(term);
            self.syzygies.push((omega, omega_incl));
        }
        Ok(())
    }

    /// Maps `P_len → … → P_1 → A` in the order used by [`crate::homological::check_exact`].
    pub fn chain(&self) -> Vec<Matrix<F>> {
        let n = self.len();
        let mut maps: Vec<Matrix<F>> = (2..=n).rev().map(|i| self.differential(i).clone()).collect();
        maps.push(self.augmentation.clone());
        if let Some((_, incl)) = self.syzygies.last() {
            maps.insert(0, incl.clone());
        }
        maps
    }
}

/// `Ω^1, …, Ω^{max_n}` of `A` over `A^e`.
pub fn bimodule_syzygies<F: Scalar>(algebra: &Arc<Algebra<F>>, max_n: usize) -> Result<BimoduleResolution<F>> {
    let mut res = BimoduleResolution::new(algebra);
    res.extend_to(max_n)?;
    Ok(res)
}

/// A twist `σ` with a bimodule isomorphism `ψ: ₁A_σ → M`, `ψ(x) = x g`.
#[derive(Clone, Debug)]
pub struct Twist<F> {
    pub sigma: Automorphism<F>,
    pub generator: Vec<F>,
    pub witness: Matrix<F>,
}

fn left_matrix<F: Scalar>(m: &Module<F>, a: &Algebra<F>, x: usize) -> Matrix<F> {
    let d = a.dim();
    let mut acc = Matrix::zeros(m.dim(), m.dim());
    for j in 0..a.num_vertices() {
        acc = &acc + m.action(x * d + a.vertex_element(j));
    }
    acc
}

fn right_matrix<F: Scalar>(m: &Module<F>, a: &Algebra<F>, x: usize) -> Matrix<F> {
    let d = a.dim();
    let mut acc = Matrix::zeros(m.dim(), m.dim());
    for i in 0..a.num_vertices() {
        acc = &acc + m.action(a.vertex_element(i) * d + x);
    }
    acc
}

/// Finds `σ` with `M ≅ ₁A_σ`.
///
/// A generator `g` of `M` as a left module gives `φ: x ↦ x g`, and then
/// `σ(a) = φ^{-1}(g a)`. Generators commuting with `A` are tried first, so a
/// bimodule isomorphic to `A` yields `σ = id`.
pub fn detect_twist<F: Scalar>(a: &Arc<Algebra<F>>, m: &Module<F>) -> Option<Twist<F>> {
    let d = a.dim();
    if m.dim() != d {
        return None;
    }
    let lefts: Vec<Matrix<F>> = (0..d).map(|x| left_matrix(m, a, x)).collect();
    let rights: Vec<Matrix<F>> = (0..d).map(|x| right_matrix(m, a, x)).collect();
    let phi_of = |g: &[F]| -> Matrix<F> {
        let rows: Vec<Vec<F>> = lefts.iter().map(|l| l.apply(g)).collect();
        Matrix::from_rows(&rows, m.dim())
    };
    let try_generator = |g: &[F]| -> Option<Twist<F>> {
        let phi = phi_of(g);
        let inv = phi.inverse()?;
        let rows: Vec<Vec<F>> = rights.iter().map(|r| inv.apply(&r.apply(g))).collect();
        let sigma = verify_automorphism(a, Matrix::from_rows(&rows, d)).ok()?;
        Some(Twist { sigma, generator: g.to_vec(), witness: phi })
    };

    // Central elements: g x = x g for the algebra generators.
    let gens: Vec<usize> = a.vertex_elements().iter().chain(a.radical_generators()).copied().collect();
    let blocks: Vec<Matrix<F>> = gens.iter().map(|&x| &lefts[x] - &rights[x]).collect();
    let central = crate::module::hstack_all(m.dim(), &blocks).kernel();
    if let Some(t) = search_subspace(&central, |g| try_generator(g)) {
        return Some(t);
    }

    // Otherwise g = Σ g_i with g_i ∈ e_i M outside J M.
    let mut rad_rows = Vec::new();
    for &x in a.radical_generators() {
        for r in 0..m.dim() {
            rad_rows.push(lefts[x].row_vec(r));
        }
    }
    let jm = if rad_rows.is_empty() { Matrix::zeros(0, m.dim()) } else { Matrix::from_rows(&rad_rows, m.dim()).row_space() };
    let mut g = vec![F::zero(); m.dim()];
    for i in 0..a.num_vertices() {
        let part = lefts[a.vertex_element(i)].row_space();
        let pick = (0..part.rows()).find(|&r| {
            let cand = Matrix::from_vec(1, m.dim(), part.row_vec(r));
            jm.vstack(&cand).rank() > jm.rank()
        })?;
        for (x, y) in g.iter_mut().zip(part.row(pick)) {
            *x = x.clone() + y.clone();
        }
    }
    try_generator(&g)
}

/// Looks for a vector in the row space of `basis` satisfying `accept`: the
/// basis rows, their sum, seeded random combinations, then (for small finite
/// fields) every combination.
fn search_subspace<F: Scalar, T>(basis: &Matrix<F>, mut accept: impl FnMut(&[F]) -> Option<T>) -> Option<T> {
    let k = basis.rows();
    if k == 0 {
        return None;
    }
    let combo = |c: &[F]| -> Vec<F> {
        let mut v = vec![F::zero(); basis.cols()];
        for (r, x) in c.iter().enumerate() {
            if !x.is_zero() {
                for (o, y) in v.iter_mut().zip(basis.row(r)) {
                    *o = o.clone() + x.clone() * y.clone();
                }
            }
        }
        v
    };
    for r in 0..k {
        if let Some(t) = accept(basis.row(r)) {
            return Some(t);
        }
    }
    if let Some(t) = accept(&combo(&vec![F::one(); k])) {
        return Some(t);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for _ in 0..SEARCH_DRAWS {
        let c: Vec<F> = (0..k).map(|_| F::random(&mut rng)).collect();
        if let Some(t) = accept(&combo(&c)) {
            return Some(t);
        }
    }
    let elems = F::elements()?;
    let q = elems.len() as u64;
    let total = q.checked_pow(k as u32).filter(|&t| t <= 100_000)?;
    for mut idx in 0..total {
        let c: Vec<F> = (0..k)
            .map(|_| {
                let e = elems[(idx % q) as usize].clone();
                idx /= q;
                e
            })
            .collect();
        if let Some(t) = accept(&combo(&c)) {
            return Some(t);
        }
    }
    None
}

/// A unit `u` with `b u = u τ(b)` for all `b`, i.e. `₁A_τ ≅ A` via `1 ↦ u`.
pub fn inner_witness<F: Scalar>(tau: &Automorphism<F>) -> Option<Vec<F>> {
    let a = &tau.algebra;
    let d = a.dim();
    let gens: Vec<usize> = a.vertex_elements().iter().chain(a.radical_generators()).copied().collect();
    // unknown u (d coordinates); equations b u − u τ(b) = 0
    let mut system = Matrix::zeros(d, d * gens.len());
    for (gi, &b) in gens.iter().enumerate() {
        let tb = tau.matrix.row_vec(b);
        for i in 0..d {
            let ei = a.basis_vector(i);
            let lhs = a.multiply(&a.basis_vector(b), &ei);
            let rhs = a.multiply(&ei, &tb);
            for c in 0..d {
                system.set(i, gi * d + c, lhs[c].clone() - rhs[c].clone());
            }
        }
    }
    let solutions = system.kernel();
    let verts: Vec<usize> = a.vertex_elements().to_vec();
    search_subspace(&solutions, |u| verts.iter().all(|&e| !u[e].is_zero()).then(|| u.to_vec()))
}

pub fn is_inner<F: Scalar>(tau: &Automorphism<F>) -> bool {
    inner_witness(tau).is_some()
}

/// Smallest `k ≤ bound` with `σ^k` inner.
pub fn twist_order<F: Scalar>(sigma: &Automorphism<F>, bound: usize) -> Option<usize> {
    let mut power = sigma.clone();
    for k in 1..=bound {
        if is_inner(&power) {
            return Some(k);
        }
        power = power.then(sigma);
    }
    None
}

#[derive(Clone, Debug)]
pub struct PeriodicityReport<F> {
    pub quasi_period: usize,
    pub twist: Twist<F>,
    pub twist_order: Option<usize>,
    pub period: Option<usize>,
    pub syzygy_dims: Vec<usize>,
}

impl<F: Scalar> PeriodicityReport<F> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "quasi_period": self.quasi_period,
            "twist_matrix": matrix_json(&self.twist.sigma.matrix),
            "twist_vertex_permutation": self.twist.sigma.vertex_permutation(),
            "twist_is_identity": self.twist.sigma.is_identity(),
            "twist_order": self.twist_order,
            "period": self.period,
            "witness_iso": matrix_json(&self.twist.witness),
            "syzygy_dims": self.syzygy_dims,
            "twist_note": "the twist is determined up to an inner automorphism; order and period are taken modulo inner automorphisms",
        })
    }
}

/// Smallest `n ≤ max_n` with `Ω^n ≅ ₁A_σ`, together with the order of `σ`
/// modulo inner automorphisms.
pub fn quasi_period_scan<F: Scalar>(algebra: &Arc<Algebra<F>>, max_n: usize) -> Result<(PeriodicityReport<F>, BimoduleResolution<F>)> {
    crate::algebra::check_self_injective(algebra)?;
    let mut res = BimoduleResolution::new(algebra);
    for n in 1..=max_n {
        res.extend_to(n)?;
        let omega = res.syzygy(n);
        if omega.dim() == 0 {
            return Err(Error::Degenerate("A is projective as a bimodule (semisimple algebra)".into()));
        }
        if let Some(twist) = detect_twist(algebra, omega) {
            let twist_order = twist_order(&twist.sigma, DEFAULT_ORDER_BOUND);
            let syzygy_dims = (1..=n).map(|i| res.syzygy(i).dim()).collect();
            let report = PeriodicityReport { quasi_period: n, twist, twist_order, period: twist_order.map(|k| k * n), syzygy_dims };
            return Ok((report, res));
        }
    }
    Err(Error::NoPeriod { max_n })
}

/// Checks the witness of a detected twist: `ψ: ₁A_σ → Ω^n` is a bimodule isomorphism.
pub fn verify_twist<F: Scalar>(res: &BimoduleResolution<F>, n: usize, twist: &Twist<F>) -> bool {
    let tw = twisted_bimodule(&res.enveloping, &twist.sigma);
    twist.witness.is_invertible() && is_homomorphism(&tw, res.syzygy(n), &twist.witness)
}

/// The iterated sequence `0 → ₁A_{τ} → P_{mn} → … → P_1 → A → 0` realized
/// as the minimal resolution of length `mn`, with `τ` detected on `Ω^{mn}`.
pub fn iterated_sequence<F: Scalar>(res: &mut BimoduleResolution<F>, n: usize, m: usize) -> Result<Twist<F>> {
    res.extend_to(n * m)?;
    let omega = res.syzygy(n * m).clone();
    detect_twist(&res.algebra, &omega).ok_or_else(|| Error::Construction(format!("Ω^{} is not a twisted bimodule", n * m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::*;
    use crate::field::Fp;
    use crate::homological::check_exact;

    type F2 = Fp<2>;
    type F3 = Fp<3>;
    type F5 = Fp<5>;

    #[test]
    fn syzygy_dimensions() {
        let l = loop_algebra::<F3>();
        let res = bimodule_syzygies(&l, 2).unwrap();
        assert_eq!(res.syzygy(1).dim(), 2);
        let a = nakayama::<F5>(2, 2);
        let res = bimodule_syzygies(&a, 4).unwrap();
        assert_eq!(res.syzygy(4).dim(), 4);
        check_exact(&res.chain()).unwrap();
    }

    #[test]
    fn semisimple_is_degenerate() {
        let s = semisimple::<F3>();
        let res = bimodule_syzygies(&s, 1).unwrap();
        assert_eq!(res.syzygy(1).dim(), 0);
        assert!(matches!(quasi_period_scan(&s, 3), Err(Error::Degenerate(_))));
    }

    #[test]
    fn regular_bimodule_has_identity_twist() {
        let a = nakayama::<F5>(2, 2);
        let res = BimoduleResolution::new(&a);
        let reg = regular_bimodule(&a, &res.enveloping);
        assert!(detect_twist(&a, &reg).unwrap().sigma.is_identity());
    }

    #[test]
    fn loop_twist_over_f3() {
        let l = loop_algebra::<F3>();
        let (report, res) = quasi_period_scan(&l, 4).unwrap();
        assert_eq!(report.quasi_period, 1);
        // oracle: g = x⊗1 − 1⊗x satisfies g·x = −x·g
        assert_eq!(report.twist.sigma.matrix, Matrix::from_i64(2, 2, &[1, 0, 0, -1]));
        assert_eq!(report.twist_order, Some(2));
        assert_eq!(report.period, Some(2));
        assert!(verify_twist(&res, 1, &report.twist));
    }

    #[test]
    fn loop_twist_over_f2() {
        let l = loop_algebra::<F2>();
        let (report, _) = quasi_period_scan(&l, 4).unwrap();
        assert_eq!(report.quasi_period, 1);
        assert!(report.twist.sigma.is_identity());
        assert_eq!(report.period, Some(1));
    }

    #[test]
    fn inner_automorphisms() {
        let a = nakayama::<F5>(2, 2);
        let swap = verify_automorphism(&a, Matrix::from_i64(4, 4, &[0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0])).unwrap();
        assert!(!is_inner(&swap));
        assert!(is_inner(&swap.power(2)));
        assert_eq!(twist_order(&swap, 64), Some(2));
        // conjugation by e1 + 2 e2 scales the arrows by 2 and 1/2
        let conj = verify_automorphism(&a, Matrix::from_i64(4, 4, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 3])).unwrap();
        assert!(is_inner(&conj));
    }
}
