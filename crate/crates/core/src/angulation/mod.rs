//! The `n`-angulation of `proj A` built from a quasi-periodic resolution.
//!
//! Objects are projective modules and `Σ` is a strict twist, so `Σ f` has the
//! same matrix as `f`. Maps follow the row-vector convention throughout: the
//! composite "first `f`, then `g`" is the matrix product `f * g`.

mod axioms;
mod functor;
mod verify;

use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::homological::{check_exact, Frobenius, HullChoice};
use crate::periodicity::BimoduleResolution;
use crate::linalg::{LeftSolver, Matrix};
use crate::module::{is_homomorphism, solve_hom, HomConstraint, Module};
use crate::report::{matrix_json, module_json};

pub use axioms::{Fill, GoodFill, Homotopy};
pub use functor::{is_projective, Evaluation, FunctorSequence, Suspension};
pub use verify::{random_commuting_pair, random_free, random_map, random_module, verify_axioms, AxiomCount, AxiomReport, VerifyOptions, AXIOMS};

/// `X_1 → X_2 → … → X_n → Σ X_1`.
#[derive(Clone, Debug)]
pub struct NSigmaSequence<F> {
    pub objects: Vec<Module<F>>,
    /// `maps[i]: X_{i+1} → X_{i+2}`; the last one ends in `Σ X_1`.
    pub maps: Vec<Matrix<F>>,
}

impl<F: Scalar> PartialEq for NSigmaSequence<F> {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects && self.maps == other.maps
    }
}

impl<F: Scalar> Eq for NSigmaSequence<F> {}

impl<F: Scalar> NSigmaSequence<F> {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "objects": self.objects.iter().map(module_json).collect::<Vec<_>>(),
            "maps": self.maps.iter().map(matrix_json).collect::<Vec<_>>(),
        })
    }
}

/// The outcome of a `Φ` membership test: `α` and `β` on `M = ker f_1`, both
/// maps `Σ M → Ω^{-n} M`.
#[derive(Clone, Debug)]
pub struct PhiCertificate<F> {
    pub exact: bool,
    pub kernel: Option<Module<F>>,
    pub alpha: Option<Matrix<F>>,
    pub beta: Option<Matrix<F>>,
    pub verdict: bool,
}

impl<F: Scalar> PhiCertificate<F> {
    fn inexact() -> Self {
        PhiCertificate { exact: false, kernel: None, alpha: None, beta: None, verdict: false }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.exact,
            "kernel_dim": self.kernel.as_ref().map(|k| k.dim()),
            "alpha": self.alpha.as_ref().map(matrix_json),
            "beta": self.beta.as_ref().map(matrix_json),
            "verdict": self.verdict,
        })
    }
}

/// Maps from a comparison between `0 → M → Y_1 → … → Y_n → Z → 0` and the
/// standard injective resolution of `M`.
#[derive(Clone, Debug)]
pub struct Ladder<F> {
    /// `Y_i → I^{i-1}`.
    pub steps: Vec<Matrix<F>>,
    /// `Z → Ω^{-n} M`.
    pub end: Matrix<F>,
    pub target: Module<F>,
}

/// A self-injective algebra with a pinned functor sequence and pinned
/// injective hulls: everything the class `Φ` depends on.
#[derive(Debug)]
pub struct Angulation<F> {
    frobenius: Arc<Frobenius<F>>,
    functor: FunctorSequence<F>,
}

impl<F: Scalar> Angulation<F> {
    pub fn new(frobenius: Arc<Frobenius<F>>, functor: FunctorSequence<F>) -> Result<Self> {
        if functor.len() < 3 {
            return Err(Error::Hypothesis(format!("an n-angulation needs n ≥ 3, got {}", functor.len())));
        }
        Ok(Angulation { frobenius, functor })
    }

    /// The angulation with `n = length` from the minimal bimodule resolution.
    pub fn build(algebra: &Arc<Algebra<F>>, length: usize, choice: HullChoice) -> Result<Self> {
        let frobenius = Arc::new(Frobenius::with_choice(Arc::clone(algebra), choice)?);
        let mut res = BimoduleResolution::new(algebra);
        let functor = FunctorSequence::from_resolution(&mut res, length)?;
        Self::new(frobenius, functor)
    }

    /// The same structure with another pinned hull choice.
    pub fn with_frobenius(&self, frobenius: Arc<Frobenius<F>>) -> Self {
        Angulation { frobenius, functor: self.functor.clone() }
    }

    pub fn n(&self) -> usize {
        self.functor.len()
    }

    pub fn algebra(&self) -> &Arc<Algebra<F>> {
        self.functor.algebra()
    }

    pub fn frobenius(&self) -> &Frobenius<F> {
        &self.frobenius
    }

    pub fn functor(&self) -> &FunctorSequence<F> {
        &self.functor
    }

    pub fn sigma(&self, m: &Module<F>) -> Module<F> {
        self.functor.suspension().apply(m)
    }

    pub fn sigma_inv(&self, m: &Module<F>) -> Module<F> {
        self.functor.suspension().unapply(m)
    }

    /// Checks lengths, that every map is a homomorphism between the stated
    /// objects and that every object is projective.
    pub fn check_shape(&self, x: &NSigmaSequence<F>) -> Result<()> {
        let n = self.n();
        if x.objects.len() != n || x.maps.len() != n {
            return Err(Error::Dimension(format!("expected {n} objects and maps, got {} and {}", x.objects.len(), x.maps.len())));
        }
        for i in 0..n {
            let target = if i + 1 < n { x.objects[i + 1].clone() } else { self.sigma(&x.objects[0]) };
            if !is_homomorphism(&x.objects[i], &target, &x.maps[i]) {
                return Err(Error::NotHomomorphism(format!("f_{}", i + 1)));
            }
            if !is_projective(&x.objects[i]) {
                return Err(Error::Construction(format!("X_{} is not projective", i + 1)));
            }
        }
        Ok(())
    }

    /// Exactness of the periodic extension at every `X_i`; the error names
    /// the first position where it fails.
    pub fn exactness(&self, x: &NSigmaSequence<F>) -> Result<()> {
        self.check_shape(x)?;
        let n = self.n();
        let mut maps = vec![x.maps[n - 1].clone()];
        maps.extend(x.maps.iter().cloned());
        check_exact(&maps)
    }

    pub fn is_exact(&self, x: &NSigmaSequence<F>) -> bool {
        self.exactness(x).is_ok()
    }

    /// `T_M = (X^1M → … → X^NM → Σ X^1M)`.
    pub fn standard_angle(&self, m: &Module<F>) -> NSigmaSequence<F> {
        let ev = self.functor.evaluate(m);
        standard_from(&ev)
    }

    /// `X_1 →1 X_1 → 0 → … → 0 → Σ X_1`.
    pub fn trivial_angle(&self, x: &Module<F>) -> NSigmaSequence<F> {
        let n = self.n();
        let zero = Module::zero(self.algebra());
        let mut objects = vec![x.clone(), x.clone()];
        objects.extend(std::iter::repeat(zero).take(n - 2));
        let mut maps = vec![Matrix::identity(x.dim()), Matrix::zeros(x.dim(), 0)];
        maps.extend(std::iter::repeat(Matrix::zeros(0, 0)).take(n - 3));
        maps.push(Matrix::zeros(0, x.dim()));
        NSigmaSequence { objects, maps }
    }

    fn ladder(&self, m: &Module<F>, first: &Matrix<F>, ys: &[Module<F>], maps: &[Matrix<F>], last: &Matrix<F>, z: &Module<F>) -> Result<Ladder<F>> {
        let n = ys.len();
        let res = self.frobenius.standard_resolution(m, n)?;
        let fail = |what: String| Error::Construction(format!("comparison map {what} does not exist"));
        let mut steps: Vec<Matrix<F>> = Vec::with_capacity(n);
        let iota = &res.steps[0].hull.iota;
        steps.push(solve_hom(&ys[0], res.term(0), &[HomConstraint::after(first, iota)]).ok_or_else(|| fail("1".into()))?);
        for i in 1..n {
            let target = &steps[i - 1] * &res.differential(i - 1);
            let c = solve_hom(&ys[i], res.term(i), &[HomConstraint::after(&maps[i - 1], &target)]).ok_or_else(|| fail(format!("{}", i + 1)))?;
            steps.push(c);
        }
        let target = &steps[n - 1] * &res.steps[n - 1].projection;
        let omega = &res.cosyzygies[n];
        let end = solve_hom(z, omega, &[HomConstraint::after(last, &target)]).ok_or_else(|| fail("on the cokernel".into()))?;
        Ok(Ladder { steps, end, target: omega.clone() })
    }

    /// `α_M: Σ M → Ω^{-n} M`, compared along the functor sequence.
    pub fn alpha(&self, m: &Module<F>) -> Result<Ladder<F>> {
        let ev = self.functor.evaluate(m);
        self.alpha_from(&ev)
    }

    fn alpha_from(&self, ev: &Evaluation<F>) -> Result<Ladder<F>> {
        self.ladder(&ev.module, &ev.unit, &ev.terms, &ev.maps, &ev.counit, &ev.suspended)
    }

    /// `M = ker f_1` with its inclusion into `X_1`.
    pub fn kernel_of_first(&self, x: &NSigmaSequence<F>) -> Result<(Module<F>, Matrix<F>)> {
        x.objects[0].submodule(&x.maps[0].kernel())
    }

    /// `β_M` for an exact sequence, read as the beginning of an injective
    /// resolution of `M = ker f_1`.
    pub fn beta(&self, x: &NSigmaSequence<F>) -> Result<(Module<F>, Ladder<F>)> {
        self.exactness(x)?;
        let (k, l) = self.kernel_of_first(x)?;
        let n = self.n();
        let sk = self.sigma(&k);
        let pi = if k.dim() == 0 {
            Matrix::zeros(x.objects[n - 1].dim(), 0)
        } else {
            LeftSolver::new(&l).solve_rows(&x.maps[n - 1]).ok_or_else(|| Error::Construction("f_n does not factor through Σ ker f_1".into()))?
        };
        let ladder = self.ladder(&k, &l, &x.objects, &x.maps[..n - 1], &pi, &sk)?;
        Ok((k, ladder))
    }

    /// Whether `x` is exact with `β_{ker f_1} = α_{ker f_1}` in the stable
    /// category.
    pub fn phi_member(&self, x: &NSigmaSequence<F>) -> Result<PhiCertificate<F>> {
        if !self.is_exact(x) {
            return Ok(PhiCertificate::inexact());
        }
        let (k, beta) = self.beta(x)?;
        let alpha = self.alpha(&k)?;
        let sk = self.sigma(&k);
        let verdict = self.frobenius.stable_equal(&sk, &alpha.target, &alpha.end, &beta.end)?;
        Ok(PhiCertificate { exact: true, kernel: Some(k), alpha: Some(alpha.end), beta: Some(beta.end), verdict })
    }

    pub fn is_member(&self, x: &NSigmaSequence<F>) -> bool {
        matches!(self.phi_member(x), Ok(c) if c.verdict)
    }
}

fn standard_from<F: Scalar>(ev: &Evaluation<F>) -> NSigmaSequence<F> {
    let mut maps = ev.maps.clone();
    maps.push(&ev.counit * &ev.unit);
    NSigmaSequence { objects: ev.terms.clone(), maps }
}
