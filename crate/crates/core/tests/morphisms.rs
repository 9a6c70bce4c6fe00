mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use common::{arb, Env};
use morita_core::expansion::expand_model;
use morita_core::morphisms::{
    enumerate_isomorphisms, is_elementary_embedding, is_isomorphism, lift_morphism, reduct_morphism, Morphism,
    MorphismError,
};
use morita_core::structures::FiniteStructure;
use morita_core::syntax::{Formula, Sort, Term, Var};
use morita_core::text::parse_extension;

fn maps_of(ms: &[Morphism]) -> BTreeSet<Vec<Vec<u32>>> {
    ms.iter().map(|h| h.maps().to_vec()).collect()
}

fn choose_permutations(m: &FiniteStructure, seeds: &[u64]) -> Vec<Vec<u32>> {
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
    fn isomorphisms_match_brute_force(m in arb::structure(), seeds in proptest::array::uniform2(any::<u64>())) {
        let maps = choose_permutations(&m, &seeds);
        let copy = Arc::new(common::permute(&m, &maps));
        let m = Arc::new(m);
        for target in [&m, &copy] {
            let ours = enumerate_isomorphisms(&m, target);
            let brute: BTreeSet<_> = common::isomorphisms(&m, target).into_iter().collect();
            prop_assert_eq!(ours.len(), brute.len());
            prop_assert_eq!(maps_of(&ours), brute);
            for h in &ours {
                prop_assert!(is_isomorphism(h));
            }
        }
    }

    #[test]
    fn composition_and_inverse(m in arb::structure(), seeds in proptest::array::uniform2(any::<u64>())) {
        let maps = choose_permutations(&m, &seeds);
        let copy = Arc::new(common::permute(&m, &maps));
        let m = Arc::new(m);
        let h = Morphism::new(m.clone(), copy.clone(), maps).unwrap();
        prop_assert!(is_isomorphism(&h));
        let back = h.inverse().unwrap();
        prop_assert!(is_isomorphism(&back));
        prop_assert!(back.after(&h).unwrap().is_identity());
        prop_assert!(h.after(&back).unwrap().is_identity());
        let id = Morphism::identity(m.clone());
        prop_assert_eq!(h.after(&id).unwrap(), h.clone());
        for g in enumerate_isomorphisms(&m, &m) {
            let composed = h.after(&g).unwrap();
            prop_assert!(is_isomorphism(&composed));
            prop_assert!(common::preserves(&m, &copy, composed.maps()));
        }
    }
}

#[test]
fn non_preserving_bijections_are_rejected() {
    let t = common::theory("sort a\npred p : a\nfunc f : a -> a\n");
    for m in common::all_structures(&t.signature, 3) {
        let m = Arc::new(m);
        for perm in common::permutations(m.sizes()[0]) {
            let h = Morphism::new(m.clone(), m.clone(), vec![perm.clone()]).unwrap();
            assert_eq!(is_isomorphism(&h), common::preserves(&m, &m, &[perm]));
        }
    }
}

#[test]
fn shape_errors() {
    let sig = arb::signature();
    let m = Arc::new(FiniteStructure::with_atoms(sig.clone(), &[2, 1], vec![0; 1 + 2 + 2 + 2 + 2]).unwrap());
    assert!(matches!(Morphism::new(m.clone(), m.clone(), vec![vec![0, 1]]), Err(MorphismError::MissingMap(_))));
    assert!(matches!(
        Morphism::new(m.clone(), m.clone(), vec![vec![0, 2], vec![0]]),
        Err(MorphismError::OutOfRange(_))
    ));
    let other = Arc::new(FiniteStructure::with_atoms(common::theory("sort a\n").signature, &[2], vec![]).unwrap());
    assert!(matches!(Morphism::new(m.clone(), other, vec![vec![0, 1]]), Err(MorphismError::SignatureMismatch)));
    let h = Morphism::new(m.clone(), m.clone(), vec![vec![0, 0], vec![0]]).unwrap();
    assert!(h.inverse().is_none());
    assert!(!is_isomorphism(&h));
}

/// Formulas in `x`, `y` of quantifier and connective depth at most two over
/// a single unary predicate, with `∨`, `→`, `∀` left out as definable.
fn depth_two_formulas() -> Vec<Formula> {
    let a = Sort::new("a");
    let vars = [Var::new("x", &a), Var::new("y", &a)];
    let level0: Vec<Formula> = vec![
        Formula::pred("p", vec![Term::var(&vars[0])]),
        Formula::pred("p", vec![Term::var(&vars[1])]),
        Formula::eq(Term::var(&vars[0]), Term::var(&vars[1])),
    ];
    let step = |prev: &[Formula]| {
        let mut out = prev.to_vec();
        for f in prev {
            out.push(Formula::not(f.clone()));
            for v in &vars {
                out.push(Formula::exists(v, f.clone()));
            }
            for g in prev {
                out.push(Formula::and(f.clone(), g.clone()));
            }
        }
        out
    };
    step(&step(&level0))
}

#[test]
fn elementary_embeddings_agree_with_formula_preservation() {
    let t = common::theory("sort a\npred p : a\n");
    let formulas = depth_two_formulas();
    let a = Sort::new("a");
    let (x, y) = (Var::new("x", &a), Var::new("y", &a));
    let structures: Vec<Arc<FiniteStructure>> =
        common::all_structures(&t.signature, 2).into_iter().map(Arc::new).collect();
    let mut elementary = 0;
    for m in &structures {
        for n in &structures {
            for map in common::tuples(&vec![n.sizes()[0]; m.sizes()[0] as usize]) {
                let h = Morphism::new(m.clone(), n.clone(), vec![map.clone()]).unwrap();
                let preserved = formulas.iter().all(|phi| {
                    common::tuples(&[m.sizes()[0], m.sizes()[0]]).iter().all(|ab| {
                        let here: Env = [(x.clone(), ab[0]), (y.clone(), ab[1])].into_iter().collect();
                        let there: Env =
                            [(x.clone(), map[ab[0] as usize]), (y.clone(), map[ab[1] as usize])].into_iter().collect();
                        common::holds(m, phi, &here) == common::holds(n, phi, &there)
                    })
                });
                assert_eq!(is_elementary_embedding(&h), preserved, "{m:?} -> {n:?} via {map:?}");
                elementary += preserved as usize;
            }
        }
    }
    // Automorphisms: 1 + 1 for size one, 2 + 1 + 1 + 2 for size two, plus the
    // two swaps between the mixed structures.
    assert_eq!(elementary, 10);
}

/// Every iso `g : M → M'` of base models lifts to exactly one iso of the
/// expansions whose base part is `g`.
fn check_lifts(theory: &str, ext: &str, bound: u32) {
    let t = common::theory(theory);
    let s = parse_extension(ext, &t.signature).unwrap();
    for m in common::all_models(&t, bound) {
        let mp = Arc::new(expand_model(&m, &t, &s).unwrap());
        let base_sorts = t.signature.sorts().len();
        for seeds in common::tuples(&vec![6; base_sorts]) {
            let perms = choose_permutations(&m, &seeds.iter().map(|&k| k as u64).collect::<Vec<_>>());
            let copy = common::permute(&m, &perms);
            let m_arc = Arc::new(m.clone());
            let g = Morphism::new(m_arc, Arc::new(copy.clone()), perms.clone()).unwrap();
            let np = Arc::new(expand_model(&copy, &t, &s).unwrap());
            let lifted = lift_morphism(&g, &mp, &np, &s).unwrap();
            assert!(is_isomorphism(&lifted));
            assert_eq!(reduct_morphism(&lifted, &t.signature).unwrap().maps(), g.maps());
            let extending: Vec<_> = common::isomorphisms(&mp, &np)
                .into_iter()
                .filter(|maps| {
                    t.signature.sorts().iter().all(|srt| {
                        maps[mp.signature().sort_index(srt).unwrap()] == perms[t.signature.sort_index(srt).unwrap()]
                    })
                })
                .collect();
            assert_eq!(extending, vec![lifted.maps().to_vec()]);
        }
    }
}

#[test]
fn lifts_through_products_and_coproducts() {
    check_lifts("sort a\nsort b\npred r : a x b\n", "define sort ab = product a b with fst snd\ndefine sort aob = coproduct a b with inl inr", 2);
}

#[test]
fn lifts_through_subsorts_and_quotients() {
    check_lifts(
        "sort a\npred p : a\nfunc f : a -> a\naxiom exists a x. p(x)\n",
        "define sort ap = subsort a with inc where p(x)\ndefine sort im = quotient a with cls where f(x1) = f(x2)",
        3,
    );
}

#[test]
fn lifts_through_symbol_definitions() {
    check_lifts("sort a\nfunc f : a -> a\n", "define pred fixed : a := f(x1) = x1\ndefine func g : a -> a := f(f(x1)) = y", 3);
}

#[test]
fn reduct_morphism_rejects_foreign_signatures() {
    let t = common::theory("sort a\npred p : a\n");
    let m = Arc::new(FiniteStructure::with_atoms(t.signature.clone(), &[1], vec![1]).unwrap());
    let h = Morphism::identity(m);
    let other = common::theory("sort a\npred q : a\n").signature;
    assert_eq!(reduct_morphism(&h, &other).unwrap_err(), MorphismError::NotSubsignature);
}
