mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::arb;
use morita_core::structures::{
    bounded_entails, canonical_form, enumerate_models, is_canonical, satisfies, Assignment, Bound, Compiled,
    Element, Entailment, FiniteStructure, StructureBuilder, StructureError,
};
use morita_core::syntax::{Sort, Var};
use morita_core::text::parse_formula;

fn check_against_brute_force(text: &str, bound: u32, expected: usize) {
    let t = common::theory(text);
    let ours: Vec<FiniteStructure> = enumerate_models(&t, &Bound::uniform(bound)).collect();
    let brute = common::all_models(&t, bound);
    assert_eq!(common::class_count(&brute), expected, "oracle count for\n{text}");
    assert_eq!(ours.len(), expected, "enumerated count for\n{text}");
    for (i, m) in ours.iter().enumerate() {
        assert!(common::is_model(m, &t));
        assert!(is_canonical(m));
        for n in &ours[..i] {
            assert!(!common::isomorphic(m, n), "duplicate class");
        }
    }
    // Every brute-force model is covered.
    for m in &brute {
        assert!(ours.iter().any(|n| common::isomorphic(m, n)));
    }
}

#[test]
fn directed_graphs_with_loops() {
    check_against_brute_force("sort a\npred r : a x a\n", 3, 2 + 10 + 104);
}

#[test]
fn equivalence_relations_are_partitions() {
    let text = "sort a\npred e : a x a\n\
        axiom forall a x. e(x, x)\n\
        axiom forall a x. forall a y. e(x, y) -> e(y, x)\n\
        axiom forall a x. forall a y. forall a z. e(x, y) & e(y, z) -> e(x, z)\n";
    check_against_brute_force(text, 3, 1 + 2 + 3);
}

#[test]
fn functional_graphs() {
    check_against_brute_force("sort a\nfunc f : a -> a\n", 3, 1 + 3 + 7);
}

#[test]
fn semigroups_up_to_order_three() {
    let text = "sort a\nfunc m : a x a -> a\n\
        axiom forall a x. forall a y. forall a z. m(m(x, y), z) = m(x, m(y, z))\n";
    check_against_brute_force(text, 3, 1 + 5 + 24);
}

#[test]
fn two_sorted_maps() {
    // (1,1), (1,2), (2,1) have one class each; on (2,2) a map is constant or bijective.
    check_against_brute_force("sort a\nsort b\nfunc g : a -> b\n", 2, 5);
}

#[test]
fn constants_and_predicates() {
    check_against_brute_force("sort a\nconst c : a\nconst d : a\npred p : a\n", 2, 4 + 6);
}

#[test]
fn per_sort_bounds_are_respected() {
    let t = common::theory("sort a\nsort b\npred r : a x b\n");
    let a = Sort::new("a");
    let bound = Bound::uniform(1).with(&a, 3);
    for m in enumerate_models(&t, &bound) {
        assert!(m.sizes()[0] <= 3 && m.sizes()[1] == 1);
    }
    // Subsets of a 1..3 element set up to permutation: 2 + 3 + 4.
    assert_eq!(enumerate_models(&t, &bound).count(), 9);
}

#[test]
fn unsatisfiable_theories_have_no_models() {
    let t = common::theory("sort a\npred p : a\naxiom exists a x. p(x) & ~p(x)\n");
    assert_eq!(enumerate_models(&t, &Bound::uniform(3)).count(), 0);
}

#[test]
fn bounded_entailment_finds_countermodels() {
    let t = common::theory("sort a\nfunc f : a -> a\naxiom forall a x. f(f(x)) = x\n");
    let claim = parse_formula(&t.signature, &[], "forall a x. f(x) = x").unwrap();
    match bounded_entails(&t, &claim, &Bound::uniform(3)) {
        Entailment::Refuted(m) => {
            assert!(common::is_model(&m, &t));
            assert!(!common::holds(&m, &claim, &Default::default()));
        }
        other => panic!("{other:?}"),
    }
    let true_claim = parse_formula(&t.signature, &[], "forall a x. forall a y. f(x) = f(y) -> x = y").unwrap();
    assert!(!bounded_entails(&t, &true_claim, &Bound::uniform(3)).is_refuted());
}

#[test]
fn builder_rejects_malformed_input() {
    let sig = arb::signature();
    let a = Sort::new("a");
    let b = Sort::new("b");
    let at = |s: &Sort, i| Element::atom(s, i);
    let base = || {
        let mut bld = StructureBuilder::new(sig.clone());
        bld.atoms("a", 2).unwrap().atoms("b", 1).unwrap();
        bld.constant("c", at(&a, 0)).unwrap();
        bld.function("g", vec![(vec![at(&a, 0)], at(&b, 0)), (vec![at(&a, 1)], at(&b, 0))]).unwrap();
        bld
    };
    let mut partial = base();
    partial.function("f", vec![(vec![at(&a, 0)], at(&a, 1))]).unwrap();
    assert!(matches!(partial.build(), Err(StructureError::PartialFunction { .. })));

    let mut conflict = base();
    conflict
        .function("f", vec![(vec![at(&a, 0)], at(&a, 1)), (vec![at(&a, 0)], at(&a, 0)), (vec![at(&a, 1)], at(&a, 1))])
        .unwrap();
    assert!(matches!(conflict.build(), Err(StructureError::ConflictingValue { .. })));

    let mut outside = base();
    outside.function("f", vec![(vec![at(&a, 0)], at(&a, 5)), (vec![at(&a, 1)], at(&a, 1))]).unwrap();
    assert!(matches!(outside.build(), Err(StructureError::NotInCarrier { .. })));

    let mut ok = base();
    ok.function("f", vec![(vec![at(&a, 0)], at(&a, 1)), (vec![at(&a, 1)], at(&a, 1))]).unwrap();
    ok.predicate("p", vec![vec![at(&a, 1)]]).unwrap();
    let m = ok.build().unwrap();
    assert_eq!(m.apply(0, &[0]), 1);
    assert!(m.holds(0, &[1]) && !m.holds(0, &[0]));

    let mut no_const = StructureBuilder::new(sig.clone());
    no_const.atoms("a", 1).unwrap().atoms("b", 1).unwrap();
    no_const.function("f", vec![(vec![at(&a, 0)], at(&a, 0))]).unwrap();
    no_const.function("g", vec![(vec![at(&a, 0)], at(&b, 0))]).unwrap();
    assert!(matches!(no_const.build(), Err(StructureError::MissingConstant(_))));

    assert!(matches!(
        FiniteStructure::from_cells(sig.clone(), vec![vec![at(&b, 0)], vec![at(&b, 0)]], vec![0; 5]),
        Err(StructureError::ForeignAtom { .. })
    ));
    assert!(matches!(
        FiniteStructure::with_atoms(sig.clone(), &[0, 1], vec![]),
        Err(StructureError::EmptyCarrier(_))
    ));
    assert!(matches!(StructureBuilder::new(sig).atoms("zz", 1), Err(StructureError::UnknownSymbol(_))));
}

fn pick_permutations(m: &FiniteStructure, seeds: &[u64]) -> Vec<Vec<u32>> {
    m.sizes()
        .iter()
        .zip(seeds)
        .map(|(&n, &s)| {
            let all = common::permutations(n);
            all[(s % all.len() as u64) as usize].clone()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compiled_evaluation_agrees_with_tarski(phi in arb::formula(), m in arb::structure()) {
        let sig = arb::signature();
        let c = Compiled::new(&sig, &phi).unwrap();
        let free: Vec<Var> = phi.free_variables().into_iter().collect();
        for env in common::assignments(&m, &free) {
            let mut slots = c.env();
            let mut rho = Assignment::new();
            for (v, &val) in &env {
                if let Some(s) = c.slot(v) {
                    slots[s] = val;
                }
                let sort = sig.sort_index(&v.sort).unwrap();
                rho.insert(v.clone(), m.element(sort, val).clone());
            }
            let expected = common::holds(&m, &phi, &env);
            prop_assert_eq!(c.eval(&m, &mut slots), expected);
            prop_assert_eq!(satisfies(&m, &phi, &rho).unwrap(), expected);
        }
    }

    #[test]
    fn canonical_form_is_a_class_invariant(m in arb::structure(), seeds in proptest::array::uniform2(any::<u64>())) {
        let maps = pick_permutations(&m, &seeds);
        let copy = common::permute(&m, &maps);
        prop_assert!(common::preserves(&m, &copy, &maps));
        let (rep, iso) = canonical_form(&m);
        let (rep2, _) = canonical_form(&copy);
        prop_assert_eq!(rep.encoding(), rep2.encoding());
        prop_assert!(is_canonical(&rep));
        prop_assert!(common::preserves(&m, &rep, &iso));
        // The representative is the least encoding over all relabellings.
        let all_a = common::permutations(m.sizes()[0]);
        let all_b = common::permutations(m.sizes()[1]);
        for pa in &all_a {
            for pb in &all_b {
                let other = common::permute(&m, &[pa.clone(), pb.clone()]);
                prop_assert!(rep.cells() <= other.cells());
            }
        }
    }

    #[test]
    fn reduct_keeps_the_remaining_symbols(m in arb::structure()) {
        let small = common::theory("sort a\npred p : a\nfunc f : a -> a\n").signature;
        let r = m.reduct(&small).unwrap();
        prop_assert_eq!(r.sizes(), &m.sizes()[..1]);
        for i in 0..m.sizes()[0] {
            prop_assert_eq!(r.holds(0, &[i]), m.holds(0, &[i]));
            prop_assert_eq!(r.apply(0, &[i]), m.apply(0, &[i]));
        }
    }
}

#[test]
fn reduct_rejects_foreign_signatures() {
    let m = FiniteStructure::with_atoms(arb::signature(), &[1, 1], vec![0, 0, 0, 0, 0]).unwrap();
    let other = common::theory("sort a\npred q : a\n").signature;
    assert_eq!(m.reduct(&other), Err(StructureError::NotSubsignature));
}

#[test]
fn enumeration_is_deterministic() {
    let t = common::theory("sort a\nsort b\npred r : a x b\nfunc f : b -> a\n");
    let run = || enumerate_models(&t, &Bound::uniform(2)).map(|m| m.encoding()).collect::<Vec<_>>();
    let first = run();
    assert_eq!(first, run());
    let distinct: BTreeSet<_> = first.iter().collect();
    assert_eq!(distinct.len(), first.len());
}
