//! Constructions behind the axioms: rotation, direct sums, completing a
//! morphism to an angle, filling morphisms and mapping cones.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{solve_in_span, LeftSolver, Matrix};
use crate::module::{hom_space, is_homomorphism, pullback, solve_hom, HomConstraint, Module};

use super::{Angulation, NSigmaSequence};

/// A morphism of `n`-`Σ`-sequences `(φ_1, …, φ_n)`.
pub type Fill<F> = Vec<Matrix<F>>;

/// An `n`-`Σ`-periodic homotopy `h_i: X_i → X_{i-1}` (with `X_0 = Σ^{-1} X_n`).
pub type Homotopy<F> = Vec<Matrix<F>>;

/// A fill chosen so that its mapping cone is again an angle.
#[derive(Clone, Debug)]
pub struct GoodFill<F> {
    pub fill: Fill<F>,
    /// `(0, h_2, h_3, 0, …, 0)` relating the fill to the transported one.
    pub homotopy: Homotopy<F>,
    pub cone: NSigmaSequence<F>,
}

fn missing(what: &str) -> Error {
    Error::Construction(format!("no solution for {what}"))
}

fn sign<F: Scalar>(n: usize) -> F {
    if n % 2 == 0 {
        F::one()
    } else {
        -F::one()
    }
}

impl<F: Scalar> Angulation<F> {
    /// `X_2 → … → X_n → Σ X_1 → Σ X_2` with last map `(−1)^n Σ f_1`.
    pub fn rotate_left(&self, x: &NSigmaSequence<F>) -> NSigmaSequence<F> {
        let n = self.n();
        let mut objects: Vec<Module<F>> = x.objects[1..].to_vec();
        objects.push(self.sigma(&x.objects[0]));
        let mut maps: Vec<Matrix<F>> = x.maps[1..].to_vec();
        maps.push(x.maps[0].scale(&sign(n)));
        NSigmaSequence { objects, maps }
    }

    /// The inverse of [`Self::rotate_left`].
    pub fn rotate_right(&self, x: &NSigmaSequence<F>) -> NSigmaSequence<F> {
        let n = self.n();
        let mut objects = vec![self.sigma_inv(&x.objects[n - 1])];
        objects.extend(x.objects[..n - 1].iter().cloned());
        let mut maps = vec![x.maps[n - 1].scale(&sign(n))];
        maps.extend(x.maps[..n - 1].iter().cloned());
        NSigmaSequence { objects, maps }
    }

    pub fn direct_sum(&self, x: &NSigmaSequence<F>, y: &NSigmaSequence<F>) -> NSigmaSequence<F> {
        let a = self.algebra();
        NSigmaSequence {
            objects: x.objects.iter().zip(&y.objects).map(|(p, q)| Module::direct_sum(a, &[p.clone(), q.clone()])).collect(),
            maps: x.maps.iter().zip(&y.maps).map(|(f, g)| f.block_diag(g)).collect(),
        }
    }

    /// Whether `φ` is a morphism of `n`-`Σ`-sequences `x → y`, including
    /// the square `f_n Σφ_1 = φ_n g_n`.
    pub fn is_morphism(&self, x: &NSigmaSequence<F>, y: &NSigmaSequence<F>, phi: &[Matrix<F>]) -> bool {
        let n = self.n();
        phi.len() == n
            && (0..n).all(|i| is_homomorphism(&x.objects[i], &y.objects[i], &phi[i]))
            && (0..n).all(|i| {
                let next = if i + 1 < n { &phi[i + 1] } else { &phi[0] };
                &x.maps[i] * next == &phi[i] * &y.maps[i]
            })
    }

    /// Completes `f_1: X_1 → X_2` to an angle by the pullback construction:
    /// the middle terms come from the functor sequence at `coker f_1` and the
    /// last term is the pullback of `h = (Ω^{-1}g)^{-1} α_A` along `I_C → Ω^{-1}C`.
    pub fn complete_morphism(&self, x1: &Module<F>, x2: &Module<F>, f1: &Matrix<F>) -> Result<NSigmaSequence<F>> {
        let n = self.n();
        let frob = self.frobenius();
        if !is_homomorphism(x1, x2, f1) {
            return Err(Error::NotHomomorphism("f_1".into()));
        }
        let (amod, l) = x1.submodule(&f1.kernel())?;
        let coker = x2.quotient(&f1.row_space());
        let b = coker.module;
        let ev_b = self.functor().evaluate(&b);

        // 0 → A → X_1 → X_2 → X^1B → … → X^{n-3}B → C → 0
        let mut ys = vec![x1.clone(), x2.clone()];
        let mut maps = vec![f1.clone()];
        let (c, last) = if n == 3 {
            (b.clone(), coker.projection.clone())
        } else {
            maps.push(&coker.projection * &ev_b.unit);
            ys.extend(ev_b.terms[..n - 3].iter().cloned());
            maps.extend(ev_b.maps[..n - 4].iter().cloned());
            let d = &ev_b.maps[n - 4];
            let (c, incl) = ev_b.terms[n - 3].submodule(&d.row_space())?;
            let last = if c.dim() == 0 {
                Matrix::zeros(d.rows(), 0)
            } else {
                LeftSolver::new(&incl).solve_rows(d).ok_or_else(|| missing("the corestriction onto C"))?
            };
            (c, last)
        };
        let g = self.ladder(&amod, &l, &ys, &maps, &last, &c)?.end;

        // Ω^{-1}g: Ω^{-1}C → Ω^{-n}A
        let res_a = frob.standard_resolution(&amod, n)?;
        let res_c = frob.standard_resolution(&c, 1)?;
        let step_c = &res_c.steps[0];
        let step_d = &res_a.steps[n - 1];
        let g_iota = &g * &step_d.hull.iota;
        let e = solve_hom(&step_c.hull.module, &step_d.hull.module, &[HomConstraint::after(&step_c.hull.iota, &g_iota)])
            .ok_or_else(|| missing("the map of injective hulls"))?;
        let e_p = &e * &step_d.projection;
        let omega_g = solve_hom(&step_c.module, &res_a.cosyzygies[n], &[HomConstraint::after(&step_c.projection, &e_p)])
            .ok_or_else(|| missing("Ω^{-1}g"))?;

        // h with h Ω^{-1}g ≡ α_A modulo maps through injectives
        let sa = self.sigma(&amod);
        let alpha = self.alpha(&amod)?.end;
        let hs = hom_space(&sa, &step_c.module);
        let mut span: Vec<Matrix<F>> = hs.iter().map(|h| h * &omega_g).collect();
        span.extend(frob.projective_maps(&sa, &res_a.cosyzygies[n])?);
        let coeffs = solve_in_span(&span, &alpha).ok_or_else(|| missing("h = (Ω^{-1}g)^{-1} α_A"))?;
        let h = crate::linalg::combine(&hs, &coeffs[..hs.len()], sa.dim(), step_c.module.dim());

        let pb = pullback(&sa, &step_c.hull.module, &h, &step_c.projection)?;
        let zero = Matrix::zeros(c.dim(), sa.dim());
        let l_last = solve_hom(&c, &pb.module, &[HomConstraint::before(&pb.to_x, &zero), HomConstraint::before(&pb.to_y, &step_c.hull.iota)])
            .ok_or_else(|| missing("C → X_n"))?;

        let mut all_maps = maps;
        all_maps.push(&last * &l_last);
        all_maps.push(&pb.to_x * &l);
        ys.push(pb.module);
        Ok(NSigmaSequence { objects: ys, maps: all_maps })
    }

    /// Extends a commuting square `f_1 φ_2 = φ_1 g_1` between angles to a
    /// morphism of `n`-`Σ`-sequences: `φ_3, …, φ_n` by injectivity, then the
    /// last component corrected by `φ_n' = φ_n − π_n a c`.
    pub fn fill_morphism(&self, x: &NSigmaSequence<F>, y: &NSigmaSequence<F>, phi1: &Matrix<F>, phi2: &Matrix<F>) -> Result<Fill<F>> {
        let n = self.n();
        if &x.maps[0] * phi2 != phi1 * &y.maps[0] {
            return Err(Error::Hypothesis("the square on f_1 and g_1 does not commute".into()));
        }
        if !is_homomorphism(&x.objects[0], &y.objects[0], phi1) || !is_homomorphism(&x.objects[1], &y.objects[1], phi2) {
            return Err(Error::NotHomomorphism("φ_1 or φ_2".into()));
        }
        let mut phi = vec![phi1.clone(), phi2.clone()];
        for j in 2..n {
            let target = &phi[j - 1] * &y.maps[j - 1];
            let next = solve_hom(&x.objects[j], &y.objects[j], &[HomConstraint::after(&x.maps[j - 1], &target)])
                .ok_or_else(|| missing(&format!("φ_{}", j + 1)))?;
            phi.push(next);
        }

        let (km, l) = self.kernel_of_first(x)?;
        let (kn, l2) = self.kernel_of_first(y)?;
        let h = self.induced_on_kernels(&l, &l2, phi1)?;
        let (sm, sn) = (self.sigma(&km), self.sigma(&kn));
        let pi = factor_through(&l, &x.maps[n - 1], "π_n")?;
        let pi2 = factor_through(&l2, &y.maps[n - 1], "π'_n")?;
        let rhs = &phi[n - 1] * &pi2;
        let p = solve_hom(&sm, &sn, &[HomConstraint::after(&pi, &rhs)]).ok_or_else(|| missing("p: ΣM → ΣN"))?;
        let diff = &p - &h;
        if !diff.is_zero() {
            let frob = self.frobenius();
            let bmap = frob
                .factors_through_injective(&sm, &sn, &diff)?
                .ok_or_else(|| Error::Hypothesis("p − Σh is not stably zero; an input is not in Φ".into()))?;
            let res = frob.standard_resolution(&sm, 1)?;
            let hull = &res.steps[0].hull;
            let cmap = solve_hom(&hull.module, &y.objects[n - 1], &[HomConstraint::before(&pi2, &bmap)]).ok_or_else(|| missing("c: I → Y_n"))?;
            let correction = &(&pi * &hull.iota) * &cmap;
            phi[n - 1] = &phi[n - 1] - &correction;
        }
        if !self.is_morphism(x, y, &phi) {
            return Err(Error::Construction("filled morphism does not commute".into()));
        }
        Ok(phi)
    }

    /// `h: ker f_1 → ker g_1` with `l φ_1 = h l'`.
    fn induced_on_kernels(&self, l: &Matrix<F>, l2: &Matrix<F>, phi1: &Matrix<F>) -> Result<Matrix<F>> {
        factor_through(l2, &(l * phi1), "the induced map on kernels")
    }

    /// A morphism from `x` to the standard angle on `ker f_1` restricting to
    /// the identity on the kernel.
    pub fn to_standard(&self, x: &NSigmaSequence<F>) -> Result<(Module<F>, Fill<F>)> {
        let (m, l) = self.kernel_of_first(x)?;
        let ev = self.functor().evaluate(&m);
        let t = super::standard_from(&ev);
        let a1 = solve_hom(&x.objects[0], &t.objects[0], &[HomConstraint::after(&l, &ev.unit)]).ok_or_else(|| missing("X_1 → X^1M"))?;
        let target = &a1 * &t.maps[0];
        let a2 = solve_hom(&x.objects[1], &t.objects[1], &[HomConstraint::after(&x.maps[0], &target)]).ok_or_else(|| missing("X_2 → X^2M"))?;
        Ok((m, self.fill_morphism(x, &t, &a1, &a2)?))
    }

    /// A morphism from the standard angle on `ker g_1` to `y` restricting to
    /// the identity on the kernel.
    pub fn from_standard(&self, y: &NSigmaSequence<F>) -> Result<(Module<F>, Fill<F>)> {
        let (m, l) = self.kernel_of_first(y)?;
        let ev = self.functor().evaluate(&m);
        let t = super::standard_from(&ev);
        let b1 = solve_hom(&t.objects[0], &y.objects[0], &[HomConstraint::after(&ev.unit, &l)]).ok_or_else(|| missing("X^1M → Y_1"))?;
        let target = &b1 * &y.maps[0];
        let b2 = solve_hom(&t.objects[1], &y.objects[1], &[HomConstraint::after(&t.maps[0], &target)]).ok_or_else(|| missing("X^2M → Y_2"))?;
        Ok((m, self.fill_morphism(&t, y, &b1, &b2)?))
    }

    /// A fill whose cone is an angle: transport `T(h)` along homotopy
    /// equivalences `a: X → T_M`, `b: T_N → Y`, then correct the first
    /// components with the homotopy `(0, h_2, h_3, 0, …, 0)`.
    pub fn good_fill_and_cone(&self, x: &NSigmaSequence<F>, y: &NSigmaSequence<F>, phi1: &Matrix<F>, phi2: &Matrix<F>) -> Result<GoodFill<F>> {
        let n = self.n();
        if &x.maps[0] * phi2 != phi1 * &y.maps[0] {
            return Err(Error::Hypothesis("the square on f_1 and g_1 does not commute".into()));
        }
        let (m, a) = self.to_standard(x)?;
        let (nmod, b) = self.from_standard(y)?;
        let (_, l) = self.kernel_of_first(x)?;
        let (_, l2) = self.kernel_of_first(y)?;
        let h = self.induced_on_kernels(&l, &l2, phi1)?;
        let ev_m = self.functor().evaluate(&m);
        let ev_n = self.functor().evaluate(&nmod);
        let th = self.functor().on_morphism(&ev_m, &ev_n, &h);
        let transported: Vec<Matrix<F>> = (0..n).map(|i| &(&a[i] * &th[i]) * &b[i]).collect();

        let d1 = phi1 - &transported[0];
        let h2 = solve_hom(&x.objects[1], &y.objects[0], &[HomConstraint::after(&x.maps[0], &d1)]).ok_or_else(|| missing("h_2"))?;
        let d2 = &(phi2 - &transported[1]) - &(&h2 * &y.maps[0]);
        let h3 = solve_hom(&x.objects[2], &y.objects[1], &[HomConstraint::after(&x.maps[1], &d2)]).ok_or_else(|| missing("h_3"))?;
        let mut fill = transported;
        fill[0] = phi1.clone();
        fill[1] = phi2.clone();
        fill[2] = &fill[2] + &(&h3 * &y.maps[1]);
        if !self.is_morphism(x, y, &fill) {
            return Err(Error::Construction("corrected fill does not commute".into()));
        }
        let mut homotopy: Homotopy<F> = (0..n)
            .map(|i| {
                let src = &x.objects[i];
                let tgt = if i == 0 { self.sigma_inv(&y.objects[n - 1]) } else { y.objects[i - 1].clone() };
                Matrix::zeros(src.dim(), tgt.dim())
            })
            .collect();
        homotopy[1] = h2;
        homotopy[2] = h3;
        let cone = self.cone(x, y, &fill);
        Ok(GoodFill { fill, homotopy, cone })
    }

    /// The mapping cone with the sign pattern `[[−f, φ], [0, g]]` (rows act
    /// on row vectors `(x | y)`).
    pub fn cone(&self, x: &NSigmaSequence<F>, y: &NSigmaSequence<F>, phi: &[Matrix<F>]) -> NSigmaSequence<F> {
        let n = self.n();
        let a = self.algebra();
        let mut objects = Vec::with_capacity(n);
        for j in 0..n - 1 {
            objects.push(Module::direct_sum(a, &[x.objects[j + 1].clone(), y.objects[j].clone()]));
        }
        objects.push(Module::direct_sum(a, &[self.sigma(&x.objects[0]), y.objects[n - 1].clone()]));
        let block = |f: &Matrix<F>, p: &Matrix<F>, g: &Matrix<F>| {
            let zero = Matrix::zeros(g.rows(), f.cols());
            Matrix::from_blocks(&[vec![-f, p.clone()], vec![zero, g.clone()]])
        };
        let mut maps = Vec::with_capacity(n);
        for j in 0..n - 1 {
            maps.push(block(&x.maps[j + 1], &phi[j + 1], &y.maps[j]));
        }
        maps.push(block(&x.maps[0], &phi[0], &y.maps[n - 1]));
        NSigmaSequence { objects, maps }
    }

    /// An `n`-`Σ`-periodic homotopy with `1 = f_i h_{i+1} + h_i f_{i-1}` at
    /// every `X_i`, if one exists.
    pub fn contractible_test(&self, x: &NSigmaSequence<F>) -> Result<Option<Homotopy<F>>> {
        let id: Vec<Matrix<F>> = x.objects.iter().map(|o| Matrix::identity(o.dim())).collect();
        self.null_homotopy(x, x, &id)
    }

    /// An `n`-`Σ`-periodic homotopy `h_i: X_i → Y_{i-1}` with
    /// `φ_i = f_i h_{i+1} + h_i g_{i-1}`, if one exists.
    pub fn null_homotopy(&self, x: &NSigmaSequence<F>, y: &NSigmaSequence<F>, phi: &[Matrix<F>]) -> Result<Option<Homotopy<F>>> {
        let n = self.n();
        self.check_shape(x)?;
        self.check_shape(y)?;
        let prev = |i: usize| if i == 0 { self.sigma_inv(&y.objects[n - 1]) } else { y.objects[i - 1].clone() };
        // g_{i-1} into Y_i and f_{i-1} into X_i; at i = 0 these are Σ^{-1} g_n and Σ^{-1} f_n
        let into_y = |i: usize| if i == 0 { &y.maps[n - 1] } else { &y.maps[i - 1] };
        let into_x = |i: usize| if i == 0 { &x.maps[n - 1] } else { &x.maps[i - 1] };
        let sizes: Vec<usize> = (0..n).map(|i| x.objects[i].dim() * y.objects[i].dim()).collect();
        let offsets: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let width: usize = sizes.iter().sum();
        let mut rows = Vec::new();
        let mut bases = Vec::with_capacity(n);
        for i in 0..n {
            let basis = hom_space(&x.objects[i], &prev(i));
            let j = if i == 0 { n - 1 } else { i - 1 };
            for beta in &basis {
                let mut row = vec![F::zero(); width];
                // h_i g_{i-1} lands in the equation at X_i
                row[offsets[i]..offsets[i] + sizes[i]].clone_from_slice((beta * into_y(i)).data());
                // f_{i-1} h_i lands in the equation at X_{i-1}
                let other = into_x(i) * beta;
                for (o, v) in row[offsets[j]..offsets[j] + sizes[j]].iter_mut().zip(other.data()) {
                    *o = o.clone() + v.clone();
                }
                rows.push(row);
            }
            bases.push(basis);
        }
        let rhs: Vec<F> = phi.iter().flat_map(|p| p.data().iter().cloned()).collect();
        let coeffs = if rows.is_empty() {
            if rhs.iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
            Vec::new()
        } else {
            match LeftSolver::new(&Matrix::from_rows(&rows, width)).solve(&rhs) {
                Some(c) => c,
                None => return Ok(None),
            }
        };
        let mut out = Vec::with_capacity(n);
        let mut start = 0;
        for (i, basis) in bases.iter().enumerate() {
            let c = &coeffs[start..start + basis.len()];
            out.push(crate::linalg::combine(basis, c, x.objects[i].dim(), prev(i).dim()));
            start += basis.len();
        }
        Ok(Some(out))
    }
}

/// `u` with `u · incl = f`, for an injective `incl`.
fn factor_through<F: Scalar>(incl: &Matrix<F>, f: &Matrix<F>, what: &str) -> Result<Matrix<F>> {
    if incl.rows() == 0 {
        return if f.is_zero() { Ok(Matrix::zeros(f.rows(), 0)) } else { Err(missing(what)) };
    }
    LeftSolver::new(incl).solve_rows(f).ok_or_else(|| missing(what))
}
