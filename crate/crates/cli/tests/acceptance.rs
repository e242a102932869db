//! Acceptance suite: one test per criterion, exact arithmetic, zero
//! tolerance. Each prints a `PASS criterion N` line and enforces its time
//! budget.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ptwist_cli::sweeps;
use ptwist_core::algebra::{AlgebraElement, BasisElement, GradedAlgebra};
use ptwist_core::ambient::spherical_after_pushforward;
use ptwist_core::dgmodule::{cone, direct_sum, mult_by_element, ModuleRef, SemifreeModule};
use ptwist_core::equiv::{find_quasi_iso, is_quasi_iso, minimal_model, FindOutcome};
use ptwist_core::field::FieldSpec;
use ptwist_core::hom::{classify, ext_dims};
use ptwist_core::sampling::random_module;
use ptwist_core::twist::{double_twist, p_twist, TwistPlan};

fn fp() -> FieldSpec {
    FieldSpec::prime(32003).unwrap()
}

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn rank_one_model(n: usize, field: FieldSpec) -> (Arc<GradedAlgebra>, ModuleRef) {
    let a = GradedAlgebra::truncated_polynomial(n, 2, field).unwrap();
    let e = SemifreeModule::free(&a, &[0]);
    (a, e)
}

fn dims(pairs: &[(i64, usize)]) -> BTreeMap<i64, usize> {
    pairs.iter().copied().collect()
}

#[test]
fn criterion_01_classification() {
    for field in [q(), fp()] {
        for n in 1..=3usize {
            let started = Instant::now();
            let (_, e) = rank_one_model(n, field);
            let c = classify(&e).unwrap();
            let p = c.p_object.expect("P-object verdict expected");
            assert_eq!(p.n, n);
            assert!(p.witness.is_closed());
            let expect: Vec<(i64, usize)> = (0..=n).map(|k| (2 * k as i64, 1)).collect();
            assert_eq!(c.dims, dims(&expect));
            assert!(started.elapsed() < Duration::from_secs(1));
        }
    }
    println!("PASS criterion 1: rank-one models classify as P-objects with verified witnesses over both fields");
}

#[test]
fn criterion_02_twist_shifts_the_object() {
    let cases: Vec<(usize, FieldSpec)> = vec![
        (1, fp()),
        (2, fp()),
        (3, fp()),
        (1, q()),
        (2, q()),
    ];
    for (n, field) in cases {
        let started = Instant::now();
        let (_, e) = rank_one_model(n, field);
        let plan = TwistPlan::for_p_object(&e).unwrap();
        let p = p_twist(&plan, &e).unwrap();
        let min = minimal_model(&p).unwrap();
        assert_eq!(min.module.rank(), 1);
        assert_eq!(min.module.gen_degree(0), 2 * n as i64);
        assert!(min
            .module
            .differential_entries()
            .iter()
            .all(|x| x.is_zero()));
        assert!(started.elapsed() < Duration::from_secs(30));
    }
    println!("PASS criterion 2: the twist at the object reduces to one generator in degree 2n");
}

fn orthogonal_pair(field: FieldSpec) -> (ModuleRef, ModuleRef, TwistPlan) {
    let a = GradedAlgebra::truncated_polynomial(1, 2, field).unwrap();
    let point = GradedAlgebra::from_table(
        field,
        vec![BasisElement {
            name: "1".into(),
            degree: 0,
        }],
        0,
        vec![vec![vec![field.one()]]],
        true,
    )
    .unwrap();
    let prod = GradedAlgebra::product(&a, &point).unwrap();
    let idems = prod.factor_idempotents().unwrap().to_vec();
    let e2 = AlgebraElement::new(&prod, idems[1].clone()).unwrap();
    let e1 = AlgebraElement::new(&prod, idems[0].clone()).unwrap();
    let free = SemifreeModule::free(&prod, &[0]);
    let e_obj = cone(&mult_by_element(&free, &e2).unwrap()).unwrap().module;
    let f_obj = cone(&mult_by_element(&free, &e1).unwrap()).unwrap().module;
    let h = AlgebraElement::basis(&prod, prod.basis_index("l.h").unwrap());
    let witness = mult_by_element(&e_obj, &h).unwrap();
    let plan = TwistPlan::new(&e_obj, witness).unwrap();
    (e_obj, f_obj, plan)
}

#[test]
fn criterion_03_orthogonal_objects_are_fixed() {
    let started = Instant::now();
    let (e_obj, f_obj, plan) = orthogonal_pair(fp());
    assert!(ext_dims(&e_obj, &f_obj).unwrap().is_empty());
    let pf = p_twist(&plan, &f_obj).unwrap();
    match find_quasi_iso(&pf, &f_obj, 0, 64).unwrap() {
        FindOutcome::Found(w) => assert!(is_quasi_iso(&w).unwrap().verdict),
        _ => panic!("no witness found between the twist and the orthogonal object"),
    }
    assert!(started.elapsed() < Duration::from_secs(5));
    println!("PASS criterion 3: the twist fixes an object orthogonal to the twisting object");
}

#[test]
fn criterion_04_degeneration_profiles() {
    for n in 1..=3usize {
        let started = Instant::now();
        let (a, e) = rank_one_model(n, fp());
        let h = mult_by_element(&e, &AlgebraElement::basis(&a, 1)).unwrap();
        let report = spherical_after_pushforward(&e, &h).unwrap();
        let want = dims(&[(0, 1), (2 * n as i64 + 1, 1)]);
        assert_eq!(report.chain_profile, want);
        assert_eq!(report.oracle_profile, want);
        assert!(report.profiles_agree);
        assert!(report.spherical);
        assert!(started.elapsed() < Duration::from_secs(5));
    }
    println!("PASS criterion 4: ambient profiles are {{0, 2n+1}} and match the table-level oracle");
}

#[test]
fn criterion_05_ring_structure_is_necessary() {
    let started = Instant::now();
    let field = fp();
    let z = || field.zero();
    let o = || field.one();
    let basis = vec![
        BasisElement { name: "1".into(), degree: 0 },
        BasisElement { name: "a".into(), degree: 2 },
        BasisElement { name: "b".into(), degree: 4 },
    ];
    let table = vec![
        vec![vec![o(), z(), z()], vec![z(), o(), z()], vec![z(), z(), o()]],
        vec![vec![z(), o(), z()], vec![z(), z(), z()], vec![z(), z(), z()]],
        vec![vec![z(), z(), o()], vec![z(), z(), z()], vec![z(), z(), z()]],
    ];
    let alg = GradedAlgebra::from_table(field, basis, 0, table, true).unwrap();
    let e = SemifreeModule::free(&alg, &[0]);
    let h = mult_by_element(&e, &AlgebraElement::basis(&alg, 1)).unwrap();
    let report = spherical_after_pushforward(&e, &h).unwrap();
    assert!(!report.spherical);
    assert!(report.profiles_agree);
    assert_eq!(report.chain_profile, dims(&[(0, 1), (3, 1), (4, 1), (5, 1)]));
    assert!(started.elapsed() < Duration::from_secs(5));
    println!("PASS criterion 5: a vector-space-only projective profile does not push forward to a sphere");
}

#[test]
fn criterion_06_twist_square_equals_p_twist() {
    let started = Instant::now();
    let (a, e) = rank_one_model(1, fp());
    let plan = TwistPlan::for_p_object(&e).unwrap();
    let h = mult_by_element(&e, &AlgebraElement::basis(&a, 1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let suite: Vec<(&str, ModuleRef)> = vec![
        ("E", ModuleRef::clone(&e)),
        ("E[1]", e.shift(1)),
        ("cone(h)", cone(&h).unwrap().module),
        ("E+E[-1]", direct_sum(&[&e, &e.shift(-1)]).unwrap()),
        ("random", random_module(&a, 3, -2, 2, &mut rng).unwrap()),
    ];
    for (label, f) in &suite {
        let tt = double_twist(&e, f).unwrap();
        let pf = p_twist(&plan, f).unwrap();
        match find_quasi_iso(&tt, &pf, 0, 64).unwrap() {
            FindOutcome::Found(w) => assert!(is_quasi_iso(&w).unwrap().verdict),
            _ => panic!("no witness for {label}"),
        }
    }
    assert!(started.elapsed() < Duration::from_secs(60));
    println!("PASS criterion 6: the double twist agrees with the P-twist on all five test objects");
}

#[test]
fn criterion_07_euler_pairing_invariance() {
    let started = Instant::now();
    let (a, e) = rank_one_model(2, fp());
    let plan = TwistPlan::for_p_object(&e).unwrap();
    let pool = vec![ModuleRef::clone(&e), SemifreeModule::free(&a, &[0, 0])];
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let out = sweeps::euler_invariance_sweep(&plan, &pool, 100, 3, &mut rng).unwrap();
    assert_eq!(out.samples, 100);
    assert_eq!(out.failures, 0, "{:?}", out.details);
    assert!(started.elapsed() < Duration::from_secs(60));
    println!("PASS criterion 7: Euler pairings are invariant under the twist on 100 random objects");
}

#[test]
fn criterion_08_fully_faithful_dimensions() {
    let started = Instant::now();
    let (_, e) = rank_one_model(1, fp());
    let plan = TwistPlan::for_p_object(&e).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let out = sweeps::fully_faithful_sweep(&plan, 25, 2, &mut rng).unwrap();
    assert_eq!(out.samples, 25);
    assert_eq!(out.failures, 0, "{:?}", out.details);
    assert!(started.elapsed() < Duration::from_secs(60));
    println!("PASS criterion 8: Ext dimensions of 25 random pairs survive the twist");
}

#[test]
fn criterion_09_invariant_sweep() {
    let started = Instant::now();
    let a = GradedAlgebra::truncated_polynomial(1, 2, fp()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let out = sweeps::invariant_sweep(&a, 1000, &mut rng).unwrap();
    assert_eq!(out.samples, 1000);
    assert_eq!(out.failures, 0, "{:?}", out.details);
    assert!(started.elapsed() < Duration::from_secs(120));
    println!("PASS criterion 9: 1000 random constructions satisfy every structural invariant");
}

#[test]
fn criterion_10_reproducible_reports() {
    let first = ptwist_cli::suite::run_suite(Some(0), false).unwrap();
    assert!(first.all_pass());
    let second = ptwist_cli::suite::run_suite(Some(0), false).unwrap();
    assert_eq!(first.to_json_string(), second.to_json_string());
    println!("PASS criterion 10: two suite runs with the same seed produce byte-identical reports");
}
