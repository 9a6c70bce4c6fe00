mod common;

use proptest::prelude::*;

use common::arb;
use morita_core::syntax::{
    check_formula, check_sentence, expand_unique_exists, is_reserved, substitute, Formula, FreshVars,
    Signature, SignatureError, Sort, Surface, Symbol, SyntaxError, Term, Var, VarMap,
};
use morita_core::text::{parse_formula, parse_theory, print_theory};

fn free_list(phi: &Formula) -> Vec<Var> {
    phi.free_variables().into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_formulas_parse_back(phi in arb::formula()) {
        let sig = arb::signature();
        check_formula(&sig, &phi).unwrap();
        let text = phi.to_string();
        let back = parse_formula(&sig, &free_list(&phi), &text).unwrap();
        prop_assert_eq!(back, phi);
    }

    #[test]
    fn substitution_matches_updated_assignment(
        phi in arb::formula(),
        m in arb::structure(),
        which in 0..3usize,
    ) {
        let a = Sort::new("a");
        let x = Var::new("x", &a);
        let y = Var::new("y", &a);
        // `f(y)` is captured by every binder of `y` inside `phi`.
        let t = match which {
            0 => Term::app("f", vec![Term::var(&y)]),
            1 => Term::var(&y),
            _ => Term::constant("c"),
        };
        let mut map = VarMap::new();
        map.insert(x.clone(), t.clone());
        let mut fresh = FreshVars::avoiding([&phi]);
        let out = substitute(&phi, &map, &mut fresh);
        check_formula(&arb::signature(), &out).unwrap();
        let mut free = free_list(&phi);
        free.extend(free_list(&out));
        free.push(y.clone());
        free.sort();
        free.dedup();
        for env in common::assignments(&m, &free) {
            let mut shifted = env.clone();
            shifted.insert(x.clone(), common::term(&m, &t, &env));
            prop_assert_eq!(common::holds(&m, &out, &env), common::holds(&m, &phi, &shifted));
        }
    }

    #[test]
    fn alpha_renaming_of_a_binder_is_alpha_equal(phi in arb::formula()) {
        let a = Sort::new("a");
        let x = Var::new("x", &a);
        let fresh_x = Var::new("_v90", &a);
        let bound = Formula::forall(&x, phi.clone());
        let mut map = VarMap::new();
        map.insert(x.clone(), Term::var(&fresh_x));
        let renamed = Formula::forall(&fresh_x, substitute(&phi, &map, &mut FreshVars::avoiding([&phi])));
        prop_assert!(bound.alpha_eq(&renamed));
        prop_assert!(renamed.alpha_eq(&bound));
    }
}

#[test]
fn sort_errors_are_reported() {
    let sig = arb::signature();
    let a = Sort::new("a");
    let b = Sort::new("b");
    let x = Var::new("x", &a);
    let u = Var::new("u", &b);
    let cases = [
        (Formula::pred("p", vec![Term::var(&u)]), "sort"),
        (Formula::eq(Term::var(&x), Term::var(&u)), "sort"),
        (Formula::pred("p", vec![Term::var(&x), Term::var(&x)]), "arity"),
        (Formula::pred("nope", vec![Term::var(&x)]), "unknown"),
        (Formula::eq(Term::app("g", vec![Term::var(&u)]), Term::var(&u)), "sort"),
    ];
    for (phi, kind) in cases {
        let err = check_formula(&sig, &phi).unwrap_err();
        let ok = match kind {
            "sort" => matches!(err, SyntaxError::SortMismatch { .. }),
            "arity" => matches!(err, SyntaxError::ArityMismatch { .. }),
            _ => matches!(err, SyntaxError::UnknownSymbol(_)),
        };
        assert!(ok, "{phi}: {err:?}");
    }
    let open = Formula::pred("p", vec![Term::var(&x)]);
    assert!(check_formula(&sig, &open).is_ok());
    assert!(matches!(check_sentence(&sig, &open), Err(SyntaxError::FreeVariable(_))));
}

#[test]
fn parse_errors_carry_positions() {
    let sig = arb::signature();
    let e = parse_formula(&sig, &[], "forall a x. p(x) &").unwrap_err();
    assert_eq!(e.line, 1);
    let e = parse_formula(&sig, &[], "forall a x. q(x)").unwrap_err();
    assert!(e.message.contains('q'), "{e:?}");
    let e = parse_theory("sort a\npred p : a\naxiom forall a x. p(x, x)\n").unwrap_err();
    assert_eq!(e.line, 3);
    let e = parse_theory("sort a\naxiom p(y)\n").unwrap_err();
    assert_eq!(e.line, 2);
}

#[test]
fn reserved_names_are_rejected() {
    assert!(is_reserved("_v0"));
    assert!(!is_reserved("v0"));
    for text in ["sort _s\n", "sort a\npred _p : a\n", "sort a\nconst _c : a\n", "sort a\nfunc _f : a -> a\n"] {
        assert!(parse_theory(text).is_err(), "{text}");
    }
    let sig = arb::signature();
    assert!(parse_formula(&sig, &[], "forall a _v0. p(_v0)").is_err());
}

#[test]
fn signature_rejects_duplicates_and_unknown_sorts() {
    let mut sig = Signature::new();
    sig.add_sort(Sort::new("a")).unwrap();
    assert!(matches!(sig.add_sort(Sort::new("a")), Err(SignatureError::DuplicateSymbol(_))));
    sig.add_predicate(Symbol::new("p"), vec![Sort::new("a")]).unwrap();
    assert!(matches!(
        sig.add_function(Symbol::new("p"), vec![Sort::new("a")], Sort::new("a")),
        Err(SignatureError::DuplicateSymbol(_))
    ));
    assert!(matches!(
        sig.add_predicate(Symbol::new("q"), vec![Sort::new("z")]),
        Err(SignatureError::UnknownSort(_))
    ));
    assert!(matches!(Signature::new().validate(), Err(SignatureError::NoSorts)));
}

#[test]
fn exists_unique_means_exactly_one() {
    let t = common::theory("sort a\npred p : a\n");
    let phi = parse_formula(&t.signature, &[], "exists1 a x. p(x)").unwrap();
    assert_eq!(phi.to_string(), "exists1 a x. p(x)");
    for m in common::all_structures(&t.signature, 3) {
        let count = (0..m.sizes()[0]).filter(|&i| m.holds(0, &[i])).count();
        assert_eq!(common::holds(&m, &phi, &Default::default()), count == 1);
    }
}

#[test]
fn nested_exists_unique_gets_distinct_fresh_names() {
    let a = Sort::new("a");
    let x = Var::new("x", &a);
    let y = Var::new("y", &a);
    let body = Surface::Plain(Formula::pred("r", vec![Term::var(&x), Term::var(&y)]));
    let s = Surface::ExistsUnique(x.clone(), Box::new(Surface::ExistsUnique(y.clone(), Box::new(body))));
    let phi = expand_unique_exists(&s);
    let names: Vec<_> = phi.all_variables().into_iter().map(|v| v.name.as_str().to_owned()).collect();
    let reserved: Vec<_> = names.iter().filter(|n| is_reserved(n)).collect();
    assert_eq!(reserved.len(), 2, "{names:?}");
    assert_ne!(reserved[0], reserved[1]);
    let sig = common::theory("sort a\npred r : a x a\n").signature;
    assert_eq!(phi.to_string(), "exists1 a x. exists1 a y. r(x, y)");
    let back = parse_formula(&sig, &[], &phi.to_string()).unwrap();
    assert!(back.alpha_eq(&phi));
    // Exactly one x has exactly one r-successor.
    for m in common::all_structures(&sig, 2) {
        let n = m.sizes()[0];
        let one = |i: u32| (0..n).filter(|&j| m.holds(0, &[i, j])).count() == 1;
        let expected = (0..n).filter(|&i| one(i)).count() == 1;
        assert_eq!(common::holds(&m, &phi, &Default::default()), expected);
    }
}

#[test]
fn alpha_equality_respects_free_variables() {
    let sig = common::theory("sort a\nsort b\npred p : a\npred r : a x a\n").signature;
    let a = Sort::new("a");
    let x = Var::new("x", &a);
    let parse = |s: &str| parse_formula(&sig, std::slice::from_ref(&x), s).unwrap();
    assert!(parse("forall a y. p(y)").alpha_eq(&parse("forall a z. p(z)")));
    assert!(!parse("forall a y. r(y, x)").alpha_eq(&parse("forall a x. r(x, x)")));
    assert!(!parse("forall a y. p(y)").alpha_eq(&parse("exists a y. p(y)")));
    assert!(!parse("forall a y. p(y)").alpha_eq(&parse("forall b y. p(x)")));
}

#[test]
fn fresh_names_avoid_existing_reserved_variables() {
    let a = Sort::new("a");
    let phi = Formula::pred("p", vec![Term::var(&Var::new("_v7", &a))]);
    let mut fresh = FreshVars::avoiding([&phi]);
    assert_eq!(fresh.var(&a).name.as_str(), "_v8");
    assert_eq!(fresh.var(&a).name.as_str(), "_v9");
}

#[test]
fn theories_print_and_parse_back() {
    let text = "sort a\nsort b\npred r : a x b\nfunc f : a -> a\nconst c : a\naxiom forall a x. exists b u. r(f(x), u)\naxiom exists1 a x. x = c\n";
    let t = parse_theory(text).unwrap();
    let again = parse_theory(&print_theory(&t)).unwrap();
    assert_eq!(t.signature, again.signature);
    assert_eq!(t.axioms.len(), again.axioms.len());
    for (l, r) in t.axioms.iter().zip(&again.axioms) {
        assert!(l.alpha_eq(r), "{l} vs {r}");
    }
}
