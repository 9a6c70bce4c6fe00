mod common;

use std::collections::BTreeSet;

use morita_core::expansion::{expand_chain, expand_model, ExpansionError};
use morita_core::extensions::{extend_theory, ExtensionStep};
use morita_core::structures::FiniteStructure;
use morita_core::syntax::{Sort, Theory, Var};
use morita_core::text::{parse_extension, parse_formula};

fn step(t: &Theory, text: &str) -> ExtensionStep {
    parse_extension(text, &t.signature).unwrap_or_else(|e| panic!("{e:?}\n{text}"))
}

/// Number of elements of `sort` satisfying `body(var)`.
fn count_where(m: &FiniteStructure, var: &Var, body: &str) -> u32 {
    let phi = parse_formula(m.signature(), std::slice::from_ref(var), body).unwrap();
    common::assignments(m, std::slice::from_ref(var)).iter().filter(|e| common::holds(m, &phi, e)).count() as u32
}

/// Number of classes of the relation `body(x1, x2)` on `sort`, which must be an equivalence.
fn class_count(m: &FiniteStructure, sort: &Sort, body: &str) -> u32 {
    let x1 = Var::new("x1", sort);
    let x2 = Var::new("x2", sort);
    let phi = parse_formula(m.signature(), &[x1.clone(), x2.clone()], body).unwrap();
    let n = m.sizes()[m.signature().sort_index(sort).unwrap()];
    let mut classes: BTreeSet<Vec<u32>> = BTreeSet::new();
    for i in 0..n {
        let class: Vec<u32> = (0..n)
            .filter(|&j| {
                let env = [(x1.clone(), i), (x2.clone(), j)].into_iter().collect();
                common::holds(m, &phi, &env)
            })
            .collect();
        classes.insert(class);
    }
    classes.len() as u32
}

fn size_of(m: &FiniteStructure, sort: &str) -> u32 {
    m.sizes()[m.signature().sort_index(&Sort::new(sort)).unwrap()]
}

/// Expands every model within `bound` and checks the defining sentences,
/// the reduct and the new carrier sizes.
fn check_step(theory: &str, ext: &str, bound: u32, sizes: impl Fn(&FiniteStructure, &FiniteStructure)) {
    let t = common::theory(theory);
    let s = step(&t, ext);
    let plus = extend_theory(&t, &s).unwrap();
    let models = common::all_models(&t, bound);
    assert!(!models.is_empty());
    for m in &models {
        let e = expand_model(m, &t, &s).unwrap_or_else(|err| panic!("{err}"));
        assert!(common::is_model(&e, &plus), "expansion is not a model of T+");
        let back = e.reduct(&t.signature).unwrap();
        assert_eq!(back.encoding(), m.encoding());
        sizes(m, &e);
    }
}

#[test]
fn definitions_of_symbols() {
    check_step(
        "sort a\nfunc f : a -> a\npred p : a\naxiom exists a x. p(x)\n",
        "define pred q : a x a := f(x1) = x2 | p(x1)\n\
         define func g : a -> a := f(f(x1)) = y\n\
         define const k : a := forall a z. f(y) = f(z) | y = y\n",
        1,
        |_, _| {},
    );
    check_step(
        "sort a\nfunc f : a -> a\npred p : a\naxiom exists1 a x. p(x)\n",
        "define const k : a := p(y)\ndefine func g : a -> a := f(f(x1)) = y",
        3,
        |_, _| {},
    );
}

#[test]
fn products_and_coproducts() {
    check_step(
        "sort a\nsort b\npred r : a x b\n",
        "define sort ab = product a b with fst snd\ndefine sort aob = coproduct a b with inl inr",
        2,
        |m, e| {
            let (na, nb) = (size_of(m, "a"), size_of(m, "b"));
            assert_eq!(size_of(e, "ab"), na * nb);
            assert_eq!(size_of(e, "aob"), na + nb);
        },
    );
}

#[test]
fn subsorts_and_quotients() {
    let a = Sort::new("a");
    check_step(
        "sort a\npred p : a\nfunc f : a -> a\naxiom exists a x. p(x)\n",
        "define sort ap = subsort a with inc where p(x)\n\
         define sort im = quotient a with cls where f(x1) = f(x2)",
        3,
        |m, e| {
            assert_eq!(size_of(e, "ap"), count_where(m, &Var::new("x", &a), "p(x)"));
            assert_eq!(size_of(e, "im"), class_count(m, &a, "f(x1) = f(x2)"));
        },
    );
}

#[test]
fn extreme_quotients() {
    let t = common::theory("sort a\npred p : a\n");
    let total = step(&t, "define sort one = quotient a with cls where x1 = x1");
    let discrete = step(&t, "define sort same = quotient a with cls where x1 = x2");
    for m in common::all_models(&t, 3) {
        assert_eq!(size_of(&expand_model(&m, &t, &total).unwrap(), "one"), 1);
        assert_eq!(size_of(&expand_model(&m, &t, &discrete).unwrap(), "same"), size_of(&m, "a"));
    }
}

#[test]
fn admissibility_failures_in_the_model() {
    let t = common::theory("sort a\npred p : a\npred r : a x a\n");
    let two_p = FiniteStructure::with_atoms(t.signature.clone(), &[2], vec![1, 1, 0, 0, 0, 0]).unwrap();
    let no_p = FiniteStructure::with_atoms(t.signature.clone(), &[2], vec![0, 0, 1, 0, 0, 1]).unwrap();
    let cases = [
        (&two_p, "define const k : a := p(y)"),
        (&no_p, "define const k : a := p(y)"),
        (&no_p, "define sort ap = subsort a with inc where p(x)"),
        (&two_p, "define func h : a -> a := r(x1, y)"),
        (&two_p, "define sort ak = quotient a with cls where r(x1, x2)"),
    ];
    for (m, text) in cases {
        let s = step(&t, text);
        let err = expand_model(m, &t, &s).unwrap_err();
        assert!(matches!(err, ExpansionError::AdmissibilityFailsInModel { .. }), "{text}: {err}");
    }
}

#[test]
fn non_models_and_foreign_structures_are_rejected() {
    let t = common::theory("sort a\npred p : a\naxiom forall a x. p(x)\n");
    let s = step(&t, "define pred q : a := p(x1)");
    let bad = FiniteStructure::with_atoms(t.signature.clone(), &[2], vec![1, 0]).unwrap();
    assert_eq!(expand_model(&bad, &t, &s), Err(ExpansionError::NotAModel(0)));
    let other = common::theory("sort a\npred z : a\n");
    let m = FiniteStructure::with_atoms(other.signature.clone(), &[1], vec![1]).unwrap();
    assert_eq!(expand_model(&m, &t, &s), Err(ExpansionError::SignatureMismatch));
}

#[test]
fn chains_report_the_failing_step() {
    let t = common::theory("sort a\npred p : a\n");
    let s1 = step(&t, "define sort ab = product a a with l r");
    let t1 = extend_theory(&t, &s1).unwrap();
    let s2 = step(&t1, "define sort pp = subsort ab with inc where p(l(x)) & p(r(x))");
    let with_p = FiniteStructure::with_atoms(t.signature.clone(), &[3], vec![1, 0, 1]).unwrap();
    let e = expand_chain(&with_p, &t, &[s1.clone(), s2.clone()]).unwrap();
    assert_eq!(size_of(&e, "ab"), 9);
    assert_eq!(size_of(&e, "pp"), 4);
    let t2 = extend_theory(&t1, &s2).unwrap();
    assert!(common::is_model(&e, &t2));
    let without_p = FiniteStructure::with_atoms(t.signature.clone(), &[2], vec![0, 0]).unwrap();
    match expand_chain(&without_p, &t, &[s1, s2]) {
        Err(ExpansionError::AtStep { index: 1, error }) => {
            assert!(matches!(*error, ExpansionError::AdmissibilityFailsInModel { .. }))
        }
        other => panic!("{other:?}"),
    }
}
