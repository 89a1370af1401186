//! Randomized property suites for the reduction-operator lattice and
//! the confluence-algebra representation. All randomness is drawn from
//! fixed-seed ChaCha streams so failures are reproducible.

use num::{BigRational, FromPrimitive};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use koszulkit::linalg::Subspace;
use koszulkit::redop::{
    complemented_alternating, confluence, join, leq, meet, p_representation, theta, theta_inv,
    ReductionOperator,
};
use koszulkit::word::{compare_words, Alphabet, HomogPoly};

const CASES: usize = 200;
const K_MAX: usize = 64;

fn alphabet(size: usize) -> Alphabet {
    let names: Vec<&str> = ["x1", "x2", "x3"][..size].to_vec();
    Alphabet::new(names).unwrap()
}

fn random_setting(rng: &mut ChaCha8Rng) -> (Alphabet, usize) {
    let size = rng.gen_range(1..=3usize);
    let degree = rng.gen_range(1..=4usize);
    (alphabet(size), degree)
}

fn random_poly(rng: &mut ChaCha8Rng, ab: &Alphabet, degree: usize) -> HomogPoly {
    let words = ab.words_desc(degree);
    let mut terms = Vec::new();
    for w in words {
        if rng.gen_bool(0.4) {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                terms.push((w, BigRational::from_i64(c).unwrap()));
            }
        }
    }
    HomogPoly::from_terms(degree, terms).unwrap()
}

fn random_subspace(rng: &mut ChaCha8Rng, ab: &Alphabet, degree: usize) -> Subspace {
    let full_dim = ab.len().pow(degree as u32);
    let count = rng.gen_range(0..=full_dim.min(6));
    let vectors: Vec<HomogPoly> = (0..count)
        .map(|_| random_poly(rng, ab, degree))
        .collect();
    Subspace::span(degree, &vectors).unwrap()
}

fn random_operator(rng: &mut ChaCha8Rng, ab: &Alphabet, degree: usize) -> ReductionOperator {
    theta_inv(ab, &random_subspace(rng, ab, degree))
}

fn subspaces_equal(u: &Subspace, w: &Subspace) -> bool {
    u.dim() == w.dim() && u.includes(w)
}

#[test]
fn theta_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..CASES {
        let (ab, degree) = random_setting(&mut rng);
        // Subspace → operator → kernel recovers the subspace.
        let u = random_subspace(&mut rng, &ab, degree);
        let t = theta_inv(&ab, &u);
        assert!(
            t.is_reduction_operator(),
            "case {case}: theta_inv image is not a reduction operator"
        );
        assert!(
            subspaces_equal(&theta(&t), &u),
            "case {case}: theta(theta_inv(U)) != U"
        );
        // Operator → kernel → operator recovers the operator.
        let t2 = theta_inv(&ab, &theta(&t));
        assert_eq!(t, t2, "case {case}: theta_inv(theta(T)) != T");
    }
}

#[test]
fn lattice_laws_and_dimension_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..CASES {
        let (ab, degree) = random_setting(&mut rng);
        let u = random_subspace(&mut rng, &ab, degree);
        let w = random_subspace(&mut rng, &ab, degree);
        let sum = u.sum(&w).unwrap();
        let inter = u.intersect(&w).unwrap();
        assert_eq!(
            sum.dim() + inter.dim(),
            u.dim() + w.dim(),
            "case {case}: dim(U+W) + dim(U∩W) != dim U + dim W"
        );
        assert!(sum.includes(&u) && sum.includes(&w));
        assert!(u.includes(&inter) && w.includes(&inter));

        let t1 = theta_inv(&ab, &u);
        let t2 = theta_inv(&ab, &w);
        let t3 = random_operator(&mut rng, &ab, degree);
        let m12 = meet(&t1, &t2).unwrap();
        let j12 = join(&t1, &t2).unwrap();
        // Commutativity.
        assert_eq!(m12, meet(&t2, &t1).unwrap(), "case {case}: meet not commutative");
        assert_eq!(j12, join(&t2, &t1).unwrap(), "case {case}: join not commutative");
        // Associativity.
        assert_eq!(
            meet(&m12, &t3).unwrap(),
            meet(&t1, &meet(&t2, &t3).unwrap()).unwrap(),
            "case {case}: meet not associative"
        );
        assert_eq!(
            join(&j12, &t3).unwrap(),
            join(&t1, &join(&t2, &t3).unwrap()).unwrap(),
            "case {case}: join not associative"
        );
        // Absorption and idempotence.
        assert_eq!(meet(&t1, &j12).unwrap(), t1, "case {case}: absorption T1∧(T1∨T2)");
        assert_eq!(join(&t1, &m12).unwrap(), t1, "case {case}: absorption T1∨(T1∧T2)");
        assert_eq!(meet(&t1, &t1).unwrap(), t1);
        assert_eq!(join(&t1, &t1).unwrap(), t1);
        // Order consistency: T1∧T2 ⪯ Ti ⪯ T1∨T2.
        for t in [&t1, &t2] {
            assert!(leq(&m12, t).unwrap(), "case {case}: meet is not a lower bound");
            assert!(leq(t, &j12).unwrap(), "case {case}: join is not an upper bound");
        }
    }
}

#[test]
fn representation_identities_on_confluent_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut confluent_seen = 0usize;
    let mut attempts = 0usize;
    while confluent_seen < CASES {
        attempts += 1;
        assert!(attempts < 50 * CASES, "not enough confluent random pairs");
        let (ab, degree) = random_setting(&mut rng);
        let t1 = random_operator(&mut rng, &ab, degree);
        let t2 = random_operator(&mut rng, &ab, degree);
        let witness = confluence(&t1, &t2, K_MAX).unwrap();
        if !witness.confluent {
            continue;
        }
        confluent_seen += 1;
        let rep = p_representation(&t1, &t2, K_MAX).unwrap();
        let expected_meet = meet(&t1, &t2).unwrap();
        let expected_join = join(&t1, &t2).unwrap();
        assert_eq!(rep.sigma, expected_meet, "σ != T1∧T2");
        assert_eq!(rep.one_minus_lambda, expected_join, "σ+γ1+γ2 != T1∨T2");
        // The confluence limit itself is the meet.
        assert_eq!(witness.limit.unwrap(), expected_meet, "limit != T1∧T2");
        // Λ agrees with id − (T1∨T2) through the expansion identity.
        let lam = complemented_alternating(&t1, &t2, rep.k).unwrap();
        for w in ab.words_desc(degree) {
            let mono = HomogPoly::monomial(w.clone());
            let lhs = lam.apply_word(&w);
            let rhs = mono.sub(&expected_join.apply_word(&w));
            assert_eq!(lhs, rhs, "Λ != id − (T1∨T2) on {w:?}");
        }
    }
}

#[test]
fn restriction_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut confluent_seen = 0usize;
    let mut attempts = 0usize;
    while confluent_seen < CASES {
        attempts += 1;
        assert!(attempts < 50 * CASES, "not enough confluent random pairs");
        let (ab, degree) = random_setting(&mut rng);
        let t1 = random_operator(&mut rng, &ab, degree);
        let t2 = random_operator(&mut rng, &ab, degree);
        let Ok(rep) = p_representation(&t1, &t2, K_MAX) else {
            continue;
        };
        confluent_seen += 1;
        let the_join = join(&t1, &t2).unwrap();
        // σ and γ1 factor through T1 on the right, so both vanish on
        // ker T1, and σ + γ1 + γ2 = T1∨T2 forces γ2 = T1∨T2 there;
        // symmetrically for ker T2 and γ1.
        for v in theta(&t1).basis() {
            assert!(rep.sigma.apply(v).is_zero(), "σ does not vanish on ker T1");
            assert!(rep.gamma1.apply(v).is_zero(), "γ1 does not vanish on ker T1");
            assert_eq!(rep.gamma2.apply(v), the_join.apply(v), "γ2 != T1∨T2 on ker T1");
        }
        for v in theta(&t2).basis() {
            assert!(rep.sigma.apply(v).is_zero(), "σ does not vanish on ker T2");
            assert!(rep.gamma2.apply(v).is_zero(), "γ2 does not vanish on ker T2");
            assert_eq!(rep.gamma1.apply(v), the_join.apply(v), "γ1 != T1∨T2 on ker T2");
        }
    }
}

#[test]
fn strict_descent() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for case in 0..CASES {
        let (ab, degree) = random_setting(&mut rng);
        let t = random_operator(&mut rng, &ab, degree);
        assert!(t.is_projector(), "case {case}: not a projector");
        assert!(t.strict_descent_ok(), "case {case}: descent violated");
        // T(w) = w exactly on non-kernel-pivot words; otherwise every
        // word of T(w) is strictly smaller than w.
        for w in ab.words_desc(degree) {
            let img = t.apply_word(&w);
            if img.is_word(&w) {
                continue;
            }
            for (u, _) in img.terms() {
                assert!(
                    compare_words(u, &w).unwrap().is_lt(),
                    "case {case}: image term not strictly smaller"
                );
            }
        }
        // Meets and joins of reduction operators stay reduction operators.
        let t2 = random_operator(&mut rng, &ab, degree);
        assert!(meet(&t, &t2).unwrap().is_reduction_operator());
        assert!(join(&t, &t2).unwrap().is_reduction_operator());
    }
}
