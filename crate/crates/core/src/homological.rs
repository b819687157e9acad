//! Syzygies, injective hulls, the fixed injective resolutions and the stable
//! category of a self-injective algebra.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{check_self_injective, Algebra, NakayamaData};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{LeftSolver, Matrix};
use crate::module::{hom_space, projective_cover, solve_hom, HomConstraint, Module};

/// `Ω M = ker(P → M)` with its inclusion into the projective cover.
pub fn syzygy<F: Scalar>(m: &Module<F>) -> (Module<F>, Matrix<F>) {
    let pres = projective_cover(m);
    pres.cover.submodule(&pres.kernel).expect("kernel of a module map is a submodule")
}

/// Checks `d_i d_{i+1} = 0` and `rank d_i + rank d_{i+1} = dim X_{i+1}` for a
/// chain `X_0 → X_1 → …`, returning the first failing position.
pub fn check_exact<F: Scalar>(maps: &[Matrix<F>]) -> Result<()> {
    for (i, pair) in maps.windows(2).enumerate() {
        let (d0, d1) = (&pair[0], &pair[1]);
        if d0.cols() != d1.rows() {
            return Err(Error::Dimension(format!("maps {i} and {} do not compose", i + 1)));
        }
        if !(d0 * d1).is_zero() || d0.rank() + d1.rank() != d0.cols() {
            return Err(Error::NotExact { position: i + 1 });
        }
    }
    Ok(())
}

/// An injective hull `ι: M → I`, `I = ⊕ e_{v_k} A`.
#[derive(Clone, Debug)]
pub struct Hull<F> {
    pub vertices: Vec<usize>,
    pub module: Module<F>,
    pub iota: Matrix<F>,
}

/// `0 → M → I → Ω⁻¹M → 0`.
#[derive(Clone, Debug)]
pub struct Cosyzygy<F> {
    pub hull: Hull<F>,
    pub module: Module<F>,
    /// `I → Ω⁻¹M`.
    pub projection: Matrix<F>,
    /// Linear section of `projection`.
    pub section: Matrix<F>,
}

/// The fixed injective resolution `0 → M → I^0 → I^1 → …` obtained by
/// iterating hulls: `cosyzygies[k] = Ω^{-k} M` and `steps[k]` is the
/// short exact sequence `Ω^{-k}M → I^k → Ω^{-k-1}M`.
#[derive(Clone, Debug)]
pub struct InjectiveResolution<F> {
    pub cosyzygies: Vec<Module<F>>,
    pub steps: Vec<Cosyzygy<F>>,
}

impl<F: Scalar> InjectiveResolution<F> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn term(&self, k: usize) -> &Module<F> {
        &self.steps[k].hull.module
    }

    /// `I^k → I^{k+1}`.
    pub fn differential(&self, k: usize) -> Matrix<F> {
        &self.steps[k].projection * &self.steps[k + 1].hull.iota
    }

    /// Maps `M → I^0 → … → I^{L-1}`, for exactness bookkeeping.
    pub fn maps(&self) -> Vec<Matrix<F>> {
        let mut out = vec![self.steps[0].hull.iota.clone()];
        for k in 0..self.len().saturating_sub(1) {
            out.push(self.differential(k));
        }
        out
    }
}

/// Which of two pinned hull constructions to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HullChoice {
    #[default]
    Standard,
    /// Socle generators taken in reverse order with the socle targets negated.
    Perturbed,
}

/// A self-injective algebra with its Nakayama data and the resolution cache.
#[derive(Debug)]
pub struct Frobenius<F> {
    algebra: Arc<Algebra<F>>,
    nakayama: NakayamaData<F>,
    choice: HullChoice,
    cache: Mutex<HashMap<Module<F>, Arc<InjectiveResolution<F>>>>,
}

impl<F: Scalar> Frobenius<F> {
    pub fn new(algebra: Arc<Algebra<F>>) -> Result<Self> {
        Self::with_choice(algebra, HullChoice::Standard)
    }

    pub fn with_choice(algebra: Arc<Algebra<F>>, choice: HullChoice) -> Result<Self> {
        let nakayama = check_self_injective(&algebra)?;
        Ok(Frobenius { algebra, nakayama, choice, cache: Mutex::new(HashMap::new()) })
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        &self.algebra
    }

    pub fn nakayama(&self) -> &NakayamaData<F> {
        &self.nakayama
    }

    pub fn choice(&self) -> HullChoice {
        self.choice
    }

    /// Hull built from a socle basis adapted to the vertices: each socle
    /// generator `s_k ∈ soc(M) e_j` gets its own summand `e_{ν⁻¹ j} A` and a
    /// map sending `s_l` to `δ_{kl}` times the socle element of that summand.
    pub fn injective_hull(&self, m: &Module<F>) -> Result<Hull<F>> {
        let a = &self.algebra;
        if m.dim() == 0 {
            return Ok(Hull { vertices: Vec::new(), module: Module::zero(a), iota: Matrix::zeros(0, 0) });
        }
        let soc = m.socle();
        let mut gens: Vec<(usize, Vec<F>)> = Vec::new();
        for j in 0..a.num_vertices() {
            let part = (&soc * m.action(a.vertex_element(j))).row_space();
            for r in 0..part.rows() {
                gens.push((j, part.row_vec(r)));
            }
        }
        if self.choice == HullChoice::Perturbed {
            gens.reverse();
        }
        let inv = self.nakayama.inverse_permutation();
        let mut vertices = Vec::with_capacity(gens.len());
        let mut blocks = Vec::with_capacity(gens.len());
        for (k, (j, _)) in gens.iter().enumerate() {
            let v = inv[*j];
            let target = Module::projective(a, v);
            let basis = a.projective_basis(v);
            let mut z: Vec<F> = basis.iter().map(|&b| self.nakayama.socle[v][b].clone()).collect();
            if self.choice == HullChoice::Perturbed {
                z = z.into_iter().map(|x| -x).collect();
            }
            let homs = hom_space(m, &target);
            let dt = target.dim();
            let mut system = Matrix::zeros(homs.len(), gens.len() * dt);
            for (h, f) in homs.iter().enumerate() {
                for (l, (_, s)) in gens.iter().enumerate() {
                    for (c, x) in f.apply(s).into_iter().enumerate() {
                        system.set(h, l * dt + c, x);
                    }
                }
            }
            let mut rhs = vec![F::zero(); gens.len() * dt];
            for (c, x) in z.iter().enumerate() {
                rhs[k * dt + c] = x.clone();
            }
            let coeffs = LeftSolver::new(&system)
                .solve(&rhs)
                .ok_or_else(|| Error::Construction("socle generator does not extend to its hull summand".into()))?;
            blocks.push(crate::linalg::combine(&homs, &coeffs, m.dim(), dt));
            vertices.push(v);
        }
        let module = Module::free(a, &vertices);
        let mut iota = Matrix::zeros(m.dim(), module.dim());
        let mut off = 0;
        for b in &blocks {
            iota.set_block(0, off, b);
            off += b.cols();
        }
        if iota.rank() != m.dim() {
            return Err(Error::Construction("injective hull map is not injective".into()));
        }
        Ok(Hull { vertices, module, iota })
    }

    pub fn cosyzygy(&self, m: &Module<F>) -> Result<Cosyzygy<F>> {
        let hull = self.injective_hull(m)?;
        let q = hull.module.quotient(&hull.iota);
        Ok(Cosyzygy { hull, module: q.module, projection: q.projection, section: q.section })
    }

    /// The standard injective resolution of `M` of the given length, memoized
    /// so that every caller sees the same choices.
    pub fn standard_resolution(&self, m: &Module<F>, length: usize) -> Result<Arc<InjectiveResolution<F>>> {
        if let Some(r) = self.cache.lock().expect("cache lock").get(m) {
            if r.len() >= length {
                return Ok(Arc::clone(r));
            }
        }
        let mut cosyzygies = vec![m.clone()];
        let mut steps = Vec::with_capacity(length);
        for k in 0..length {
            let step = self.cosyzygy(&cosyzygies[k])?;
            cosyzygies.push(step.module.clone());
            steps.push(step);
        }
        let res = Arc::new(InjectiveResolution { cosyzygies, steps });
        let mut cache = self.cache.lock().expect("cache lock");
        let entry = cache.entry(m.clone()).or_insert_with(|| Arc::clone(&res));
        if entry.len() < res.len() {
            *entry = Arc::clone(&res);
        }
        Ok(Arc::clone(entry))
    }

    /// `Ω^{-n} M` from the standard resolution.
    pub fn cosyzygy_power(&self, m: &Module<F>, n: usize) -> Result<Module<F>> {
        Ok(self.standard_resolution(m, n)?.cosyzygies[n].clone())
    }

    /// `Ω^{-k} f: Ω^{-k} M → Ω^{-k} N`, lifted step by step through the
    /// standard resolutions. Well defined up to maps factoring through
    /// injectives.
    pub fn cosyzygy_morphism(&self, m: &Module<F>, n: &Module<F>, f: &Matrix<F>, k: usize) -> Result<Matrix<F>> {
        let rm = self.standard_resolution(m, k)?;
        let rn = self.standard_resolution(n, k)?;
        let mut g = f.clone();
        for j in 0..k {
            let (sm, sn) = (&rm.steps[j], &rn.steps[j]);
            let target = &g * &sn.hull.iota;
            let e = solve_hom(&sm.hull.module, &sn.hull.module, &[HomConstraint::after(&sm.hull.iota, &target)])
                .ok_or_else(|| Error::Construction("map of injective hulls".into()))?;
            let target = &e * &sn.projection;
            g = solve_hom(&sm.module, &sn.module, &[HomConstraint::after(&sm.projection, &target)])
                .ok_or_else(|| Error::Construction("map of cosyzygies".into()))?;
        }
        Ok(g)
    }

    /// A map `g: I_M → N` with `ι_M g = f`, if `f` factors through an
    /// injective.
    pub fn factors_through_injective(&self, m: &Module<F>, n: &Module<F>, f: &Matrix<F>) -> Result<Option<Matrix<F>>> {
        if m.dim() == 0 || n.dim() == 0 || f.is_zero() {
            let hull = self.injective_hull(m)?;
            return Ok(Some(Matrix::zeros(hull.module.dim(), n.dim())));
        }
        let res = self.standard_resolution(m, 1)?;
        let hull = &res.steps[0].hull;
        let homs = hom_space(&hull.module, n);
        let rows: Vec<Vec<F>> = homs.iter().map(|g| (&hull.iota * g).data().to_vec()).collect();
        if rows.is_empty() {
            return Ok(None);
        }
        let system = Matrix::from_rows(&rows, m.dim() * n.dim());
        Ok(LeftSolver::new(&system)
            .solve(f.data())
            .map(|c| crate::linalg::combine(&homs, &c, hull.module.dim(), n.dim())))
    }

    pub fn is_stably_zero(&self, m: &Module<F>, n: &Module<F>, f: &Matrix<F>) -> Result<bool> {
        Ok(self.factors_through_injective(m, n, f)?.is_some())
    }

    pub fn stable_equal(&self, m: &Module<F>, n: &Module<F>, f: &Matrix<F>, g: &Matrix<F>) -> Result<bool> {
        self.is_stably_zero(m, n, &(f - g))
    }

    /// Basis of the subspace of `Hom(M, N)` of maps factoring through `I_M`.
    pub fn projective_maps(&self, m: &Module<F>, n: &Module<F>) -> Result<Vec<Matrix<F>>> {
        if m.dim() == 0 || n.dim() == 0 {
            return Ok(Vec::new());
        }
        let res = self.standard_resolution(m, 1)?;
        let hull = &res.steps[0].hull;
        let rows: Vec<Vec<F>> = hom_space(&hull.module, n).iter().map(|g| (&hull.iota * g).data().to_vec()).collect();
        if rows.is_empty() {
            return Ok(Vec::new());
        }
        let span = Matrix::from_rows(&rows, m.dim() * n.dim()).row_space();
        Ok((0..span.rows()).map(|r| Matrix::from_vec(m.dim(), n.dim(), span.row_vec(r))).collect())
    }

    /// Dimension of the stable hom space `Hom(M, N)` modulo injectives.
    pub fn stable_hom_dim(&self, m: &Module<F>, n: &Module<F>) -> Result<usize> {
        Ok(hom_space(m, n).len() - self.projective_maps(m, n)?.len())
    }

    /// Whether `f: M → N` is invertible in the stable category, decided by
    /// finding `g: N → M` with `fg ≡ 1_M` and `gf ≡ 1_N` modulo injectives.
    pub fn stable_inverse(&self, m: &Module<F>, n: &Module<F>, f: &Matrix<F>) -> Result<Option<Matrix<F>>> {
        let homs = hom_space(n, m);
        let pm = self.projective_maps(m, m)?;
        let pn = self.projective_maps(n, n)?;
        // unknowns: coefficients of g, of a projective map on M, of one on N
        let dm = m.dim();
        let dn = n.dim();
        let width = dm * dm + dn * dn;
        let mut rows = Vec::new();
        for g in &homs {
            let mut r = (f * g).data().to_vec();
            r.extend_from_slice((g * f).data());
            rows.push(r);
        }
        for p in &pm {
            let mut r = p.data().to_vec();
            r.extend(std::iter::repeat(F::zero()).take(dn * dn));
            rows.push(r);
        }
        for p in &pn {
            let mut r = vec![F::zero(); dm * dm];
            r.extend_from_slice(p.data());
            rows.push(r);
        }
        let mut rhs = Matrix::<F>::identity(dm).data().to_vec();
        rhs.extend_from_slice(Matrix::<F>::identity(dn).data());
        if rows.is_empty() {
            return Ok(rhs.iter().all(|x| x.is_zero()).then(|| Matrix::zeros(dn, dm)));
        }
        let system = Matrix::from_rows(&rows, width);
        Ok(LeftSolver::new(&system)
            .solve(&rhs)
            .map(|c| crate::linalg::combine(&homs, &c[..homs.len()], dn, dm)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::*;
    use crate::field::Fp;
    use crate::module::{is_homomorphism, iso_test};

    type F3 = Fp<3>;
    type F5 = Fp<5>;

    fn simple(a: &Arc<Algebra<F5>>, v: usize) -> Module<F5> {
        let p = Module::projective(a, v);
        p.quotient(&p.radical()).module
    }

    #[test]
    fn syzygies() {
        let a = nakayama::<F5>(2, 2);
        assert_eq!(syzygy(&Module::projective(&a, 0)).0.dim(), 0);
        let s1 = simple(&a, 0);
        let (om, incl) = syzygy(&s1);
        assert_eq!(om.dim(), 1);
        assert_eq!(incl.rows(), 1);
        assert!(iso_test(&om, &simple(&a, 1)).is_some());
        let l = loop_algebra::<F3>();
        let s = Module::projective(&l, 0).quotient(&Module::projective(&l, 0).radical()).module;
        assert!(iso_test(&syzygy(&s).0, &s).is_some());
    }

    #[test]
    fn hulls() {
        let a = nakayama::<F5>(2, 2);
        let fr = Frobenius::new(Arc::clone(&a)).unwrap();
        let h = fr.injective_hull(&simple(&a, 1)).unwrap();
        assert_eq!(h.vertices, vec![0]);
        assert!(is_homomorphism(&simple(&a, 1), &h.module, &h.iota));
        let p = Module::projective(&a, 0);
        let hp = fr.injective_hull(&p).unwrap();
        assert!(hp.iota.is_invertible());
        assert_eq!(fr.injective_hull(&Module::zero(&a)).unwrap().module.dim(), 0);
        let c = fr.cosyzygy(&syzygy(&simple(&a, 0)).0).unwrap();
        assert!(iso_test(&c.module, &simple(&a, 0)).is_some());
    }

    #[test]
    fn hull_socles_match() {
        let a = preprojective_a3::<F5>();
        let fr = Frobenius::new(Arc::clone(&a)).unwrap();
        let m = Module::regular(&a).quotient(&Module::regular(&a).radical()).module;
        let h = fr.injective_hull(&m).unwrap();
        assert_eq!(m.socle().rows(), h.module.socle().rows());
        assert_eq!((&m.socle() * &h.iota).rank(), h.module.socle().rows());
    }

    #[test]
    fn resolution_exact_and_cached() {
        let l = loop_algebra::<F3>();
        let fr = Frobenius::new(Arc::clone(&l)).unwrap();
        let s = Module::projective(&l, 0).quotient(&Module::projective(&l, 0).radical()).module;
        let res = fr.standard_resolution(&s, 4).unwrap();
        for k in 0..4 {
            assert!(iso_test(res.term(k), &Module::regular(&l)).is_some());
        }
        let mut maps = res.maps();
        maps.insert(0, Matrix::zeros(0, 1));
        check_exact(&maps).unwrap();
        let again = fr.standard_resolution(&s, 2).unwrap();
        assert!(Arc::ptr_eq(&res, &again));
        // alternating sum over the period 1, 2, 2, 1 of 0→S→A→A→S→0
        let dims: Vec<i64> = vec![1, 2, 2, res.cosyzygies[2].dim() as i64];
        assert_eq!(dims[0] - dims[1] + dims[2] - dims[3], 0);
    }

    #[test]
    fn stable_zero() {
        let a = nakayama::<F5>(2, 2);
        let fr = Frobenius::new(Arc::clone(&a)).unwrap();
        let s = simple(&a, 0);
        assert!(fr.is_stably_zero(&s, &s, &Matrix::zeros(1, 1)).unwrap());
        assert!(!fr.is_stably_zero(&s, &s, &Matrix::identity(1)).unwrap());
        let p = Module::projective(&a, 0);
        assert!(fr.is_stably_zero(&p, &p, &Matrix::identity(2)).unwrap());
        assert_eq!(fr.stable_hom_dim(&s, &s).unwrap(), 1);
        assert!(fr.stable_inverse(&s, &s, &Matrix::identity(1)).unwrap().is_some());
    }

    #[test]
    fn not_self_injective() {
        assert!(matches!(Frobenius::new(a2_hereditary::<F3>()), Err(Error::NotSelfInjective(_))));
    }
}
