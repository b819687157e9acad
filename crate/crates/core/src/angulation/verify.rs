//! Randomized, seeded checks of the axioms on a built angulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Result;
use crate::field::Scalar;
use crate::linalg::{combine, Matrix};
use crate::module::{hom_space, random_morphism, Module};
use crate::report::{matrix_json, SCHEMA};

use super::{Angulation, NSigmaSequence};

pub const AXIOMS: [&str; 7] = ["N1a", "N1b", "N1c", "N2", "N3", "N4", "Phi"];

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
}

/// Pass/fail counts for one axiom with the first failing sample.
#[derive(Clone, Debug, Default)]
pub struct AxiomCount {
    pub axiom: String,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<Value>,
}

impl AxiomCount {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub counts: Vec<AxiomCount>,
    /// `(agreeing, compared)` membership verdicts under the perturbed choice.
    pub choice_agreement: Option<(usize, usize)>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.counts.iter().all(AxiomCount::all_passed)
    }

    pub fn count(&self, axiom: &str) -> Option<&AxiomCount> {
        self.counts.iter().find(|c| c.axiom == axiom)
    }

    pub fn to_json(&self) -> Value {
        let counts: Vec<Value> = self
            .counts
            .iter()
            .map(|c| json!({ "axiom": c.axiom, "passed": c.passed, "failed": c.failed, "first_failure": c.first_failure }))
            .collect();
        json!({
            "schema": SCHEMA,
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "axioms": counts,
            "all_passed": self.all_passed(),
            "choice_agreement": self.choice_agreement.map(|(a, t)| json!({ "agreeing": a, "compared": t })),
        })
    }
}

struct SampleResult {
    /// Per axiom: `None` if not exercised, otherwise the first failure.
    outcomes: Vec<Option<Option<Value>>>,
    agreement: (usize, usize),
}

/// Runs `samples` independent seeded samples in parallel and aggregates them
/// by sample index. `perturbed`, if given, is the same structure with the
/// alternative hull choice; membership of every constructed angle is decided
/// under both and the agreements are counted.
pub fn verify_axioms<F: Scalar>(ang: &Angulation<F>, options: VerifyOptions, perturbed: Option<&Angulation<F>>) -> AxiomReport {
    let results: Vec<SampleResult> = (0..options.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
            rng.set_stream(i as u64);
            run_sample(ang, perturbed, &mut rng, i)
        })
        .collect();
    let mut counts: Vec<AxiomCount> = AXIOMS.iter().map(|a| AxiomCount { axiom: a.to_string(), ..Default::default() }).collect();
    let mut agreement = (0, 0);
    for r in results {
        for (c, o) in counts.iter_mut().zip(r.outcomes) {
            match o {
                None => {}
                Some(None) => c.passed += 1,
                Some(Some(w)) => {
                    c.failed += 1;
                    c.first_failure.get_or_insert(w);
                }
            }
        }
        agreement.0 += r.agreement.0;
        agreement.1 += r.agreement.1;
    }
    AxiomReport {
        n: ang.n(),
        samples: options.samples,
        seed: options.seed,
        counts,
        choice_agreement: perturbed.map(|_| agreement),
    }
}

fn axiom_index(name: &str) -> usize {
    AXIOMS.iter().position(|a| *a == name).expect("known axiom")
}

struct Sampler<'a, F> {
    ang: &'a Angulation<F>,
    perturbed: Option<&'a Angulation<F>>,
    sample: usize,
    outcomes: Vec<Option<Option<Value>>>,
    agreement: (usize, usize),
}

impl<F: Scalar> Sampler<'_, F> {
    fn record(&mut self, axiom: &str, result: Result<Option<String>>, witness: impl FnOnce() -> Value) {
        let error = match result {
            Ok(None) => None,
            Ok(Some(msg)) => Some(msg),
            Err(e) => Some(e.to_string()),
        };
        let error = error.map(|msg| json!({ "sample": self.sample, "reason": msg, "witness": witness() }));
        let slot = self.outcomes[axiom_index(axiom)].get_or_insert(None);
        if slot.is_none() {
            *slot = error;
        }
    }

    /// Membership, also compared against the perturbed choice.
    fn member(&mut self, x: &NSigmaSequence<F>) -> Result<bool> {
        let verdict = self.ang.phi_member(x)?.verdict;
        if let Some(p) = self.perturbed {
            let other = p.phi_member(x).map(|c| c.verdict).unwrap_or(false);
            self.agreement.1 += 1;
            if other == verdict {
                self.agreement.0 += 1;
            }
        }
        Ok(verdict)
    }

    fn certified(&mut self, axiom: &str, x: &Result<NSigmaSequence<F>>, what: &str) {
        let result = match x {
            Ok(x) => self.member(x).map(|ok| (!ok).then(|| format!("{what} is not in Φ"))),
            Err(e) => Ok(Some(e.to_string())),
        };
        let witness = || x.as_ref().map(|x| x.to_json()).unwrap_or(Value::Null);
        self.record(axiom, result, witness);
    }
}

/// A free module on one or two random vertices.
pub fn random_free<F: Scalar, R: Rng>(a: &std::sync::Arc<crate::algebra::Algebra<F>>, rng: &mut R) -> Module<F> {
    let k = rng.gen_range(1..=2);
    let vertices: Vec<usize> = (0..k).map(|_| rng.gen_range(0..a.num_vertices())).collect();
    Module::free(a, &vertices)
}

/// A random map `P → Q`; half of the time it is forced into `rad Q`, so
/// that its cokernel is not projective.
pub fn random_map<F: Scalar, R: Rng>(p: &Module<F>, q: &Module<F>, rng: &mut R) -> Matrix<F> {
    if rng.gen_bool(0.5) {
        let (rad, incl) = q.submodule(&q.radical()).expect("the radical is a submodule");
        if rad.dim() > 0 {
            return &random_morphism(p, &rad, &hom_space(p, &rad), rng) * &incl;
        }
    }
    random_morphism(p, q, &hom_space(p, q), rng)
}

/// The cokernel of a random map between random free modules.
pub fn random_module<F: Scalar, R: Rng>(a: &std::sync::Arc<crate::algebra::Algebra<F>>, rng: &mut R) -> Module<F> {
    let p = random_free(a, rng);
    let q = random_free(a, rng);
    let f = random_map(&p, &q, rng);
    q.quotient(&f.row_space()).module
}

/// A uniformly random pair `(φ_1, φ_2)` with `f_1 φ_2 = φ_1 g_1`.
pub fn random_commuting_pair<F: Scalar, R: Rng>(x: &NSigmaSequence<F>, y: &NSigmaSequence<F>, rng: &mut R) -> (Matrix<F>, Matrix<F>) {
    let (x1, x2, y1, y2) = (&x.objects[0], &x.objects[1], &y.objects[0], &y.objects[1]);
    let b1 = hom_space(x1, y1);
    let b2 = hom_space(x2, y2);
    let width = x1.dim() * y2.dim();
    let mut rows: Vec<Vec<F>> = b1.iter().map(|b| (-(b * &y.maps[0])).data().to_vec()).collect();
    rows.extend(b2.iter().map(|b| (&x.maps[0] * b).data().to_vec()));
    if rows.is_empty() {
        return (Matrix::zeros(x1.dim(), y1.dim()), Matrix::zeros(x2.dim(), y2.dim()));
    }
    let kernel = Matrix::from_rows(&rows, width).kernel();
    let mut coeffs = vec![F::zero(); rows.len()];
    for r in 0..kernel.rows() {
        let c = F::random(rng);
        for (o, v) in coeffs.iter_mut().zip(kernel.row(r)) {
            *o = o.clone() + c.clone() * v.clone();
        }
    }
    let phi1 = combine(&b1, &coeffs[..b1.len()], x1.dim(), y1.dim());
    let phi2 = combine(&b2, &coeffs[b1.len()..], x2.dim(), y2.dim());
    (phi1, phi2)
}

fn run_sample<F: Scalar>(ang: &Angulation<F>, perturbed: Option<&Angulation<F>>, rng: &mut ChaCha8Rng, sample: usize) -> SampleResult {
    let mut s = Sampler { ang, perturbed, sample, outcomes: vec![None; AXIOMS.len()], agreement: (0, 0) };
    let a = ang.algebra();
    let p = random_free(a, rng);
    let q = random_free(a, rng);
    let f1 = random_map(&p, &q, rng);

    // N1c: completion of a random f_1
    let completed = ang.complete_morphism(&p, &q, &f1);
    s.certified("N1c", &completed, "the completion");
    if let Ok(x) = &completed {
        let same = x.maps[0] == f1;
        s.record("N1c", Ok((!same).then(|| "first map of the completion differs from f_1".into())), || matrix_json(&f1));
    }

    // Φ: standard angle on a random module
    let m = q.quotient(&f1.row_space()).module;
    let t = ang.standard_angle(&m);
    s.certified("Phi", &Ok(t.clone()), "the standard angle");

    // N1b: trivial angle
    let r = random_free(a, rng);
    s.certified("N1b", &Ok(ang.trivial_angle(&r)), "the trivial angle");

    let Ok(x) = completed else {
        for axiom in ["N1a", "N2", "N3", "N4"] {
            s.record(axiom, Ok(Some("no completed angle to test with".into())), || Value::Null);
        }
        return SampleResult { outcomes: s.outcomes, agreement: s.agreement };
    };
    let y = t;

    // N1a: direct sum and extraction of the first summand
    let sum = ang.direct_sum(&x, &y);
    s.certified("N1a", &Ok(sum.clone()), "the direct sum");
    let extracted = extract_first(&sum, &x);
    let same = extracted == x;
    s.record("N1a", Ok((!same).then(|| "extracted summand differs".into())), || Value::Null);
    s.certified("N1a", &Ok(extracted), "the extracted summand");

    // N2: rotations both ways, and their inverse relation
    let left = ang.rotate_left(&x);
    let right = ang.rotate_right(&x);
    s.certified("N2", &Ok(left.clone()), "the left rotation");
    s.certified("N2", &Ok(right), "the right rotation");
    let back = ang.rotate_right(&left) == x;
    s.record("N2", Ok((!back).then(|| "right rotation does not undo left rotation".into())), || Value::Null);

    // N3 and N4 on a random commuting square between two angles
    let (phi1, phi2) = random_commuting_pair(&x, &y, rng);
    let fill = ang.fill_morphism(&x, &y, &phi1, &phi2);
    let fill_ok = fill.as_ref().map(|phi| (!ang.is_morphism(&x, &y, phi)).then(|| "fill does not commute".into())).or_else(|e| Ok(Some(e.to_string())));
    s.record("N3", fill_ok, || json!({ "phi1": matrix_json(&phi1), "phi2": matrix_json(&phi2) }));
    let good = ang.good_fill_and_cone(&x, &y, &phi1, &phi2).map(|g| g.cone);
    s.certified("N4", &good, "the cone of the good fill");

    SampleResult { outcomes: s.outcomes, agreement: s.agreement }
}

/// The first summand of `sum = x ⊕ y`, read off the block structure.
fn extract_first<F: Scalar>(sum: &NSigmaSequence<F>, x: &NSigmaSequence<F>) -> NSigmaSequence<F> {
    let n = x.len();
    let objects: Vec<Module<F>> = (0..n)
        .map(|i| {
            let d = x.objects[i].dim();
            let idx: Vec<usize> = (0..d).collect();
            let actions = sum.objects[i].actions().iter().map(|a| a.select_rows(&idx).select_cols(&idx)).collect();
            Module::new(sum.objects[i].algebra().clone(), d, actions).expect("summand of a direct sum")
        })
        .collect();
    let maps = (0..n)
        .map(|i| {
            let r: Vec<usize> = (0..x.objects[i].dim()).collect();
            let c: Vec<usize> = (0..x.maps[i].cols()).collect();
            sum.maps[i].select_rows(&r).select_cols(&c)
        })
        .collect();
    NSigmaSequence { objects, maps }
}
