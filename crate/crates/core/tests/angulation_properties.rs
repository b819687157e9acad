//! Seeded properties of the angulation on small fixtures.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nangle::algebra::{compute_basis, parse_algebra, Algebra, DEFAULT_PATH_BOUND};
use nangle::angulation::{random_commuting_pair, random_module, Angulation, NSigmaSequence};
use nangle::homological::HullChoice;
use nangle::module::iso_test;
use nangle::{Matrix, Scalar, F3, F5};

fn load<F: Scalar>(name: &str) -> Arc<Algebra<F>> {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    Arc::new(compute_basis(&parse_algebra(&text).unwrap(), DEFAULT_PATH_BOUND).unwrap())
}

fn loop3() -> Angulation<F3> {
    Angulation::build(&load("loop_p3"), 3, HullChoice::Standard).unwrap()
}

fn nakayama22() -> Angulation<F5> {
    Angulation::build(&load("nakayama_2_2"), 4, HullChoice::Standard).unwrap()
}

fn nakayama23() -> Angulation<F5> {
    Angulation::build(&load("nakayama_2_3"), 4, HullChoice::Standard).unwrap()
}

/// A completed angle on a random module quotient, or the standard one.
fn sample_angle<F: Scalar>(ang: &Angulation<F>, rng: &mut ChaCha8Rng, complete: bool) -> NSigmaSequence<F> {
    let m = random_module(ang.algebra(), rng);
    let t = ang.standard_angle(&m);
    if complete {
        ang.complete_morphism(&t.objects[0], &t.objects[1], &t.maps[0]).unwrap()
    } else {
        t
    }
}

fn composites_vanish<F: Scalar>(x: &NSigmaSequence<F>) -> bool {
    let n = x.len();
    (0..n).all(|i| (&x.maps[i] * &x.maps[(i + 1) % n]).is_zero())
}

fn check_all<F: Scalar>(ang: &Angulation<F>, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ang.n();
    let x = sample_angle(ang, &mut rng, true);
    let y = sample_angle(ang, &mut rng, false);
    assert!(ang.is_member(&x) && ang.is_member(&y));
    assert!(composites_vanish(&x) && composites_vanish(&y));

    // n left rotations give Σ X with every map multiplied by (−1)^n
    let mut r = x.clone();
    for _ in 0..n {
        r = ang.rotate_left(&r);
    }
    let sign = if n % 2 == 0 { F::from_i64(1) } else { F::from_i64(-1) };
    let expected = NSigmaSequence {
        objects: x.objects.iter().map(|o| ang.sigma(o)).collect(),
        maps: x.maps.iter().map(|f| f.scale(&sign)).collect(),
    };
    assert_eq!(r, expected);

    // the comparison X → T_M is a homotopy equivalence
    let (_, a) = ang.to_standard(&x).unwrap();
    let t = ang.standard_angle(&ang.kernel_of_first(&x).unwrap().0);
    let cone = ang.cone(&x, &t, &a);
    assert!(ang.contractible_test(&cone).unwrap().is_some());

    // two fills with the same (φ_1, φ_2) differ by a map whose composites
    // with other such differences are null-homotopic
    let (p1, p2) = random_commuting_pair(&x, &y, &mut rng);
    let plain = ang.fill_morphism(&x, &y, &p1, &p2).unwrap();
    let good = ang.good_fill_and_cone(&x, &y, &p1, &p2).unwrap();
    assert!(ang.is_member(&good.cone));
    let (q1, q2) = random_commuting_pair(&y, &x, &mut rng);
    let back_plain = ang.fill_morphism(&y, &x, &q1, &q2).unwrap();
    let back_good = ang.good_fill_and_cone(&y, &x, &q1, &q2).unwrap().fill;
    let d: Vec<Matrix<F>> = plain.iter().zip(&good.fill).map(|(a, b)| a - b).collect();
    let e: Vec<Matrix<F>> = back_plain.iter().zip(&back_good).map(|(a, b)| a - b).collect();
    let de: Vec<Matrix<F>> = d.iter().zip(&e).map(|(a, b)| a * b).collect();
    assert!(ang.null_homotopy(&x, &x, &de).unwrap().is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn invariants_on_loop_f3(seed in any::<u64>()) {
        check_all(&loop3(), seed);
    }

    #[test]
    fn invariants_on_nakayama_2_2(seed in any::<u64>()) {
        check_all(&nakayama22(), seed);
    }

    #[test]
    fn invariants_on_nakayama_2_3(seed in any::<u64>()) {
        check_all(&nakayama23(), seed);
    }

    #[test]
    fn first_kernel_of_standard_angle_is_the_module(seed in any::<u64>()) {
        let ang = nakayama23();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(ang.algebra(), &mut rng);
        let (k, _) = ang.kernel_of_first(&ang.standard_angle(&m)).unwrap();
        prop_assert!(iso_test(&k, &m).is_some());
    }

    #[test]
    fn right_rotation_inverts_left(seed in any::<u64>()) {
        let ang = loop3();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample_angle(&ang, &mut rng, true);
        prop_assert_eq!(ang.rotate_right(&ang.rotate_left(&x)), x.clone());
        prop_assert_eq!(ang.rotate_left(&ang.rotate_right(&x)), x);
    }
}

#[test]
fn trivial_angle_is_contractible() {
    let ang = nakayama22();
    let p = nangle::module::Module::free(ang.algebra(), &[0, 1]);
    assert!(ang.contractible_test(&ang.trivial_angle(&p)).unwrap().is_some());
}
