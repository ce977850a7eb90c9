//! Property suites: lattice laws for the subspace algebra, the knowledge
//! axioms, oracle cross-checks, and serialization round-trips, all over
//! randomly generated exact models.

mod support;

use std::collections::BTreeSet;

use epistemic::classical::{embed, meet_partition, subset_of, subspace_of};
use epistemic::formula::{evaluate, parse, pretty_print, Formula};
use epistemic::linalg::inner;
use epistemic::model_io;
use epistemic::multi_question::{families_commute, joint_refinement, knows_either_or};
use epistemic::{GaussianRational, Subspace, Vector};

use proptest::prelude::*;

use support::*;

#[test]
fn subspace_lattice_laws() {
    let mut rng = TestRng::new(11);
    for _ in 0..120 {
        let dim = 2 + rng.below(5); // 2..=6
        let s = rand_subspace(&mut rng, dim);
        let t = rand_subspace(&mut rng, dim);
        let u = rand_subspace(&mut rng, dim);
        let full = Subspace::full(dim);

        // commutativity, associativity
        assert_eq!(s.meet(&t).unwrap(), t.meet(&s).unwrap());
        assert_eq!(s.join(&t).unwrap(), t.join(&s).unwrap());
        assert_eq!(
            s.meet(&t).unwrap().meet(&u).unwrap(),
            s.meet(&t.meet(&u).unwrap()).unwrap()
        );
        assert_eq!(
            s.join(&t).unwrap().join(&u).unwrap(),
            s.join(&t.join(&u).unwrap()).unwrap()
        );
        // absorption
        assert_eq!(s.meet(&s.join(&t).unwrap()).unwrap(), s);
        assert_eq!(s.join(&s.meet(&t).unwrap()).unwrap(), s);
        // De Morgan
        assert_eq!(
            s.meet(&t).unwrap().orthocomplement(),
            s.orthocomplement().join(&t.orthocomplement()).unwrap()
        );
        // complement laws and involution
        assert_eq!(s.meet(&s.orthocomplement()).unwrap(), Subspace::zero(dim));
        assert_eq!(s.join(&s.orthocomplement()).unwrap(), full);
        assert_eq!(s.orthocomplement().orthocomplement(), s);
        // units
        assert_eq!(s.meet(&full).unwrap(), s);
        assert_eq!(s.join(&Subspace::zero(dim)).unwrap(), s);
        // modular rank law
        assert_eq!(
            s.meet(&t).unwrap().rank() + s.join(&t).unwrap().rank(),
            s.rank() + t.rank()
        );
        // order characterizations
        let m = s.meet(&t).unwrap();
        let j = s.join(&t).unwrap();
        assert_eq!(s.leq(&t).unwrap(), m == s);
        assert_eq!(s.leq(&t).unwrap(), j == t);
    }
}

#[test]
fn meet_agrees_with_direct_intersection_oracle() {
    let mut rng = TestRng::new(12);
    for _ in 0..150 {
        let dim = 2 + rng.below(5);
        let s = rand_subspace(&mut rng, dim);
        let t = rand_subspace(&mut rng, dim);
        assert_eq!(s.meet(&t).unwrap(), meet_oracle(&s, &t));
    }
}

#[test]
fn canonicalize_is_a_congruence() {
    let mut rng = TestRng::new(13);
    for _ in 0..80 {
        let dim = 2 + rng.below(5);
        let s = rand_subspace(&mut rng, dim);
        if s.rank() == 0 {
            continue;
        }
        // random invertible recombination of the basis spans the same space
        let k = s.rank();
        let recombined: Vec<Vector> = loop {
            let coeffs: Vec<Vec<GaussianRational>> =
                (0..k).map(|_| (0..k).map(|_| rand_scalar(&mut rng)).collect()).collect();
            let rows: Vec<Vector> = coeffs
                .iter()
                .map(|row| {
                    let mut v = Vector::zero(dim);
                    for (c, b) in row.iter().zip(s.basis()) {
                        v = v.add(&b.scaled(c)).unwrap();
                    }
                    v
                })
                .collect();
            if Subspace::canonicalize(&rows, dim).unwrap().rank() == k {
                break rows;
            }
        };
        assert_eq!(Subspace::canonicalize(&recombined, dim).unwrap(), s);
        // idempotence
        assert_eq!(Subspace::canonicalize(s.basis(), dim).unwrap(), s);
    }
}

#[test]
fn projection_is_idempotent_and_orthogonal() {
    let mut rng = TestRng::new(14);
    for _ in 0..100 {
        let dim = 2 + rng.below(5);
        let s = rand_subspace(&mut rng, dim);
        let v = rand_vector(&mut rng, dim);
        let w = s.project(&v).unwrap();
        assert!(s.contains(&w).unwrap());
        assert_eq!(s.project(&w).unwrap(), w);
        let r = v.sub(&w).unwrap();
        for b in s.basis() {
            assert!(inner(b, &r).unwrap() == gr(0, 0));
        }
    }
}

#[test]
fn quantum_knowledge_axioms_and_coherence() {
    let mut rng = TestRng::new(15);
    for _ in 0..100 {
        let dim = 2 + rng.below(5);
        let fam = rand_family(&mut rng, dim);
        let e = rand_subspace(&mut rng, dim);
        let f = rand_subspace(&mut rng, dim);
        let psi = rand_nonzero_vector(&mut rng, dim);

        let ke = fam.knowledge_operator(&e).unwrap();
        // K1, K2
        assert!(ke.leq(&e).unwrap());
        assert!(fam.knowledge_operator(&Subspace::full(dim)).unwrap().is_full());
        // monotonicity
        if e.leq(&f).unwrap() {
            assert!(ke.leq(&fam.knowledge_operator(&f).unwrap()).unwrap());
        }
        // K3 as equality
        assert_eq!(
            ke.meet(&fam.knowledge_operator(&f).unwrap()).unwrap(),
            fam.knowledge_operator(&e.meet(&f).unwrap()).unwrap()
        );
        // K4, K5 as equalities
        assert_eq!(fam.knowledge_operator(&ke).unwrap(), ke);
        let not_ke = ke.orthocomplement();
        assert_eq!(fam.knowledge_operator(&not_ke).unwrap(), not_ke);

        // block sums are fixed points
        let mut block_sum = Subspace::zero(dim);
        for (j, (_, block)) in fam.blocks().iter().enumerate() {
            if j % 2 == 0 {
                block_sum = block_sum.join(block).unwrap();
            }
        }
        assert_eq!(fam.knowledge_operator(&block_sum).unwrap(), block_sum);

        // definition coherence: knows ⇔ ψ ∈ K E ⇔ Q_ψ ≤ E
        let q = fam.possibility_projector(&psi).unwrap();
        let knows = fam.knows(&psi, &e).unwrap();
        assert_eq!(knows, ke.contains(&psi).unwrap());
        assert_eq!(knows, q.leq(&e).unwrap());
        if knows {
            assert!(e.contains(&psi).unwrap()); // knowing implies membership
        }

        // Q_ψ contains ψ and is minimal among block-sums containing ψ
        assert!(q.contains(&psi).unwrap());
        let m = fam.blocks().len();
        for mask in 0u32..(1 << m) {
            let mut p = Subspace::zero(dim);
            for (j, (_, block)) in fam.blocks().iter().enumerate() {
                if mask & (1 << j) != 0 {
                    p = p.join(block).unwrap();
                }
            }
            if p.contains(&psi).unwrap() {
                assert!(q.leq(&p).unwrap());
            }
        }
    }
}

/// For ψ = (1,1): knowing an event implies membership, but membership in the
/// event spanned by ψ itself does not imply knowing it.
#[test]
fn membership_does_not_imply_knowing() {
    let m = model_io::load_model(&std::fs::read_to_string("models/mh17.json").unwrap()).unwrap();
    let fam = m.agents[0].single_question().unwrap();
    let psi = &m.states["psi"];
    let ray = Subspace::canonicalize(std::slice::from_ref(psi), 2).unwrap();
    assert!(ray.contains(psi).unwrap());
    assert!(!fam.knows(psi, &ray).unwrap());
    // ψ is in no proper event of the shipped model
    for e in m.events.values() {
        assert!(!e.contains(psi).unwrap());
    }
    assert!(fam.knows(psi, &Subspace::full(2)).unwrap());
}

#[test]
fn classical_axioms_hold() {
    let mut rng = TestRng::new(16);
    for _ in 0..100 {
        let omega = 2 + rng.below(7); // 2..=8
        let p = rand_partition(&mut rng, omega);
        let e = rand_subset(&mut rng, omega);
        let f = rand_subset(&mut rng, omega);
        let full: BTreeSet<usize> = (0..omega).collect();

        let ke = p.knowledge_operator(&e).unwrap();
        assert!(ke.is_subset(&e));
        assert_eq!(p.knowledge_operator(&full).unwrap(), full);
        let kf = p.knowledge_operator(&f).unwrap();
        let e_and_f: BTreeSet<usize> = e.intersection(&f).copied().collect();
        let ke_and_kf: BTreeSet<usize> = ke.intersection(&kf).copied().collect();
        assert_eq!(p.knowledge_operator(&e_and_f).unwrap(), ke_and_kf);
        assert!(ke.is_subset(&p.knowledge_operator(&ke).unwrap()));
        let not_ke: BTreeSet<usize> = full.difference(&ke).copied().collect();
        assert!(not_ke.is_subset(&p.knowledge_operator(&not_ke).unwrap()));
    }
}

#[test]
fn classical_common_knowledge_equals_meet_partition_exhaustively() {
    let mut rng = TestRng::new(17);
    for _ in 0..30 {
        let omega = 2 + rng.below(4); // 2..=5
        let n_agents = 1 + rng.below(3);
        let m = rand_classical_model(&mut rng, omega, n_agents);
        let meet = meet_partition(&m.partitions).unwrap();
        for mask in 0u32..(1 << omega) {
            let e: BTreeSet<usize> = (0..omega).filter(|w| mask & (1 << w) != 0).collect();
            assert_eq!(
                m.common_knowledge(&e).unwrap(),
                meet.knowledge_operator(&e).unwrap()
            );
        }
    }
}

#[test]
fn embedding_is_functorial() {
    let mut rng = TestRng::new(18);
    for _ in 0..25 {
        let omega = 2 + rng.below(5); // 2..=6
        let n_agents = 1 + rng.below(3);
        let cm = rand_classical_model(&mut rng, omega, n_agents);
        let qm = embed::<GaussianRational>(&cm).unwrap();
        for _ in 0..6 {
            let e = rand_subset(&mut rng, omega);
            let e_sub = subspace_of::<GaussianRational>(&e, omega).unwrap();
            for (i, p) in cm.partitions.iter().enumerate() {
                let k_classical = p.knowledge_operator(&e).unwrap();
                let k_quantum = qm.agents[i].single_question().unwrap().knowledge_operator(&e_sub).unwrap();
                assert_eq!(k_quantum, subspace_of::<GaussianRational>(&k_classical, omega).unwrap());
            }
            let ck = cm.common_knowledge(&e).unwrap();
            let (kappa, _) = qm.common_knowledge(&e_sub).unwrap();
            assert_eq!(subset_of(&kappa), Some(ck));
        }
    }
}

#[test]
fn commutation_matches_matrix_oracle_and_is_symmetric() {
    let mut rng = TestRng::new(19);
    for i in 0..40 {
        let dim = 2 + rng.below(3); // 2..=4
        let (f, g) = if i % 2 == 0 {
            rand_commuting_pair(&mut rng, dim)
        } else {
            (rand_family(&mut rng, dim), rand_family(&mut rng, dim))
        };
        let lattice = families_commute(&f, &g).unwrap();
        assert_eq!(lattice, commute_oracle(&f, &g));
        assert_eq!(lattice, families_commute(&g, &f).unwrap());
        assert!(families_commute(&f, &f).unwrap());
    }
}

#[test]
fn joint_refinement_refines_each_input() {
    let mut rng = TestRng::new(20);
    for _ in 0..30 {
        let dim = 2 + rng.below(4);
        let (f, g) = rand_commuting_pair(&mut rng, dim);
        let r = joint_refinement(&[f.clone(), g.clone()]).unwrap();
        for fam in [&f, &g] {
            for (_, block) in fam.blocks() {
                let mut rebuilt = Subspace::zero(dim);
                for (_, rb) in r.blocks() {
                    if rb.leq(block).unwrap() {
                        rebuilt = rebuilt.join(rb).unwrap();
                    }
                }
                assert_eq!(&rebuilt, block);
            }
        }
    }
}

#[test]
fn either_or_with_single_family_is_plain_knows() {
    let mut rng = TestRng::new(21);
    for _ in 0..60 {
        let dim = 2 + rng.below(4);
        let fam = rand_family(&mut rng, dim);
        let psi = rand_nonzero_vector(&mut rng, dim);
        let e = rand_subspace(&mut rng, dim);
        assert_eq!(
            knows_either_or(std::slice::from_ref(&fam), &psi, &e).unwrap(),
            fam.knows(&psi, &e).unwrap()
        );
    }
}

#[test]
fn model_serialization_round_trips() {
    let mut rng = TestRng::new(22);
    for _ in 0..100 {
        let dim = 2 + rng.below(4);
        let n_agents = 1 + rng.below(3);
        let m = rand_model(&mut rng, dim, n_agents);
        let text = model_io::serialize(&m);
        let m2 = model_io::load_model(&text).unwrap();
        assert_eq!(m, m2);
    }
}

#[test]
fn perturbed_documents_fail_validation_with_paths() {
    let base = std::fs::read_to_string("models/mh17.json").unwrap();
    let cases = [
        // family breakage: duplicate block subspace
        (r#"[[["0", "0"], ["1", "0"]]] }"#, r#"[[["1", "0"], ["0", "0"]]] }"#, "agents[0]"),
        // zero state
        (r#""psi": [["1", "0"], ["1", "0"]]"#, r#""psi": [["0", "0"], ["0", "0"]]"#, "states.psi"),
        // malformed rational
        (r#""E_K": [[["1", "0"], ["0", "0"]]]"#, r#""E_K": [[["1/0", "0"], ["0", "0"]]]"#, "events.E_K"),
        // wrong vector length
        (r#""e_D": [["0", "0"], ["1", "0"]]"#, r#""e_D": [["1", "0"]]"#, "states.e_D"),
    ];
    for (from, to, path) in cases {
        let mutated = base.replace(from, to);
        assert_ne!(mutated, base, "mutation {from:?} did not apply");
        let report = model_io::validate(&model_io::parse_document(&mutated).unwrap());
        assert!(!report.is_empty(), "mutation {from:?} was accepted");
        assert!(
            report.entries.iter().any(|(_, p, _)| p.contains(path)),
            "report {report} does not name {path}"
        );
    }
}

// --- formula DSL properties -------------------------------------------------

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        prop_oneof![Just("E0"), Just("E1"), Just("x_1"), Just("Kx"), Just("M")]
            .prop_map(|s: &str| Formula::Atom(s.to_owned())),
    ];
    atom.prop_recursive(6, 64, 8, |inner| {
        prop_oneof![
            inner.clone().prop_map(|f| Formula::Not(Box::new(f))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Formula::Or(Box::new(a), Box::new(b))),
            (1usize..4, inner.clone()).prop_map(|(k, f)| Formula::Know(k, Box::new(f))),
            inner.clone().prop_map(|f| Formula::Everyone(Box::new(f))),
            (0usize..4, inner.clone()).prop_map(|(n, f)| Formula::Mutual(n, Box::new(f))),
            inner.prop_map(|f| Formula::Common(Box::new(f))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]
    #[test]
    fn pretty_print_parse_round_trip(f in formula_strategy()) {
        let text = pretty_print(&f);
        prop_assert_eq!(parse(&text).unwrap(), f);
    }
}

#[test]
fn evaluation_is_a_lattice_homomorphism() {
    let mut rng = TestRng::new(23);
    for _ in 0..40 {
        let dim = 2 + rng.below(4);
        let m = rand_model(&mut rng, dim, 2);
        let e0 = &m.events["E0"];
        let e1 = &m.events["E1"];
        let f = parse("E0 & E1").unwrap();
        assert_eq!(evaluate(&m, &f).unwrap(), e0.meet(e1).unwrap());
        assert_eq!(
            evaluate(&m, &parse("E0 | E1").unwrap()).unwrap(),
            e0.join(e1).unwrap()
        );
        assert_eq!(
            evaluate(&m, &parse("~E0").unwrap()).unwrap(),
            e0.orthocomplement()
        );
        assert_eq!(
            evaluate(&m, &parse("K2 E0").unwrap()).unwrap(),
            m.agents[1].single_question().unwrap().knowledge_operator(e0).unwrap()
        );
        assert_eq!(
            evaluate(&m, &parse("EK E0").unwrap()).unwrap(),
            m.everyone_knows(e0).unwrap()
        );
        assert_eq!(
            evaluate(&m, &parse("M[2] E0").unwrap()).unwrap(),
            m.mutual_knowledge(e0, 2).unwrap()
        );
        // De Morgan at the formula level
        assert_eq!(
            evaluate(&m, &parse("~(E0 & E1)").unwrap()).unwrap(),
            evaluate(&m, &parse("~E0 | ~E1").unwrap()).unwrap()
        );
        // common knowledge equals the stabilized mutual-knowledge iterate
        let (kappa, trace) = m.common_knowledge(e0).unwrap();
        assert_eq!(evaluate(&m, &parse("C E0").unwrap()).unwrap(), kappa);
        let n_star = trace.len() - 1;
        assert_eq!(
            evaluate(&m, &parse(&format!("M[{n_star}] E0")).unwrap()).unwrap(),
            kappa
        );
    }
}
