//! Independent reference implementations shared by the integration tests.
//! They touch structures only through `sizes`, `apply`, `holds` and
//! `constant`, and never call the enumerator, evaluator or canonicalizer
//! under test.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use morita_core::structures::{FiniteStructure, Layout};
use morita_core::syntax::{Formula, Signature, Term, Theory, Var};
use morita_core::text::parse_theory;

pub fn theory(text: &str) -> Theory {
    parse_theory(text).unwrap_or_else(|e| panic!("{e:?}\n{text}"))
}

pub type Env = BTreeMap<Var, u32>;

pub fn term(m: &FiniteStructure, t: &Term, env: &Env) -> u32 {
    let sig = m.signature();
    match t {
        Term::Var(v) => *env.get(v).unwrap_or_else(|| panic!("unbound {v:?}")),
        Term::Const(c) => m.constant(sig.constant(c.as_str()).expect("constant").0),
        Term::App(f, args) => {
            let vals: Vec<u32> = args.iter().map(|a| term(m, a, env)).collect();
            m.apply(sig.function(f.as_str()).expect("function").0, &vals)
        }
    }
}

/// Tarski semantics, straight from the clauses.
pub fn holds(m: &FiniteStructure, phi: &Formula, env: &Env) -> bool {
    let sig = m.signature();
    match phi {
        Formula::Eq(a, b) => term(m, a, env) == term(m, b, env),
        Formula::Pred(p, args) => {
            let vals: Vec<u32> = args.iter().map(|a| term(m, a, env)).collect();
            m.holds(sig.predicate(p.as_str()).expect("predicate").0, &vals)
        }
        Formula::Not(a) => !holds(m, a, env),
        Formula::And(a, b) => holds(m, a, env) && holds(m, b, env),
        Formula::Or(a, b) => holds(m, a, env) || holds(m, b, env),
        Formula::Implies(a, b) => !holds(m, a, env) || holds(m, b, env),
        Formula::Iff(a, b) => holds(m, a, env) == holds(m, b, env),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let n = m.sizes()[sig.sort_index(&v.sort).expect("sort")];
            let mut inner = env.clone();
            let mut each = (0..n).map(|a| {
                inner.insert(v.clone(), a);
                holds(m, body, &inner)
            });
            if matches!(phi, Formula::Forall(..)) {
                each.all(|b| b)
            } else {
                each.any(|b| b)
            }
        }
    }
}

pub fn is_model(m: &FiniteStructure, t: &Theory) -> bool {
    t.axioms.iter().all(|a| holds(m, a, &Env::new()))
}

/// Every assignment of `vars` into `m`.
pub fn assignments(m: &FiniteStructure, vars: &[Var]) -> Vec<Env> {
    let sig = m.signature();
    let mut out = vec![Env::new()];
    for v in vars {
        let n = m.sizes()[sig.sort_index(&v.sort).expect("sort")];
        out = out
            .into_iter()
            .flat_map(|env| {
                (0..n).map(move |a| {
                    let mut e = env.clone();
                    e.insert(v.clone(), a);
                    e
                })
            })
            .collect();
    }
    out
}

/// Every tuple with `i`-th component below `limits[i]`.
pub fn tuples(limits: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &n in limits {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |a| {
                    let mut t = t.clone();
                    t.push(a);
                    t
                })
            })
            .collect();
    }
    out
}

/// All structures with carriers of sizes `1..=bound` on every sort, built
/// cell by cell.
pub fn all_structures(sig: &Arc<Signature>, bound: u32) -> Vec<FiniteStructure> {
    let k = sig.sorts().len();
    let mut out = Vec::new();
    for sizes in tuples(&vec![bound; k]) {
        let sizes: Vec<u32> = sizes.iter().map(|s| s + 1).collect();
        let layout = Layout::new(sig, &sizes);
        let domains: Vec<u32> = layout.cells().iter().map(|d| layout.domain(d.value_sort)).collect();
        for cells in tuples(&domains) {
            out.push(FiniteStructure::with_atoms(sig.clone(), &sizes, cells).expect("in range"));
        }
    }
    out
}

pub fn all_models(t: &Theory, bound: u32) -> Vec<FiniteStructure> {
    all_structures(&t.signature, bound).into_iter().filter(|m| is_model(m, t)).collect()
}

pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Per-sort bijections from `m` onto `n` that preserve every symbol.
pub fn isomorphisms(m: &FiniteStructure, n: &FiniteStructure) -> Vec<Vec<Vec<u32>>> {
    if m.sizes() != n.sizes() {
        return vec![];
    }
    let mut choices: Vec<Vec<Vec<u32>>> = vec![vec![]];
    for &s in m.sizes() {
        let perms = permutations(s);
        choices = choices
            .into_iter()
            .flat_map(|c| {
                perms.iter().map(move |p| {
                    let mut c = c.clone();
                    c.push(p.clone());
                    c
                })
            })
            .collect();
    }
    choices.into_iter().filter(|maps| preserves(m, n, maps)).collect()
}

pub fn preserves(m: &FiniteStructure, n: &FiniteStructure, maps: &[Vec<u32>]) -> bool {
    let sig = m.signature();
    let sort = |s: &morita_core::syntax::Sort| sig.sort_index(s).expect("sort");
    let img = |s: usize, a: u32| maps[s][a as usize];
    for (i, c) in sig.constants().iter().enumerate() {
        if img(sort(&c.sort), m.constant(i)) != n.constant(i) {
            return false;
        }
    }
    for (i, f) in sig.functions().iter().enumerate() {
        let dom: Vec<usize> = f.domain.iter().map(sort).collect();
        let limits: Vec<u32> = dom.iter().map(|&s| m.sizes()[s]).collect();
        for args in tuples(&limits) {
            let mapped: Vec<u32> = args.iter().zip(&dom).map(|(&a, &s)| img(s, a)).collect();
            if img(sort(&f.codomain), m.apply(i, &args)) != n.apply(i, &mapped) {
                return false;
            }
        }
    }
    for (i, p) in sig.predicates().iter().enumerate() {
        let dom: Vec<usize> = p.arity.iter().map(sort).collect();
        let limits: Vec<u32> = dom.iter().map(|&s| m.sizes()[s]).collect();
        for args in tuples(&limits) {
            let mapped: Vec<u32> = args.iter().zip(&dom).map(|(&a, &s)| img(s, a)).collect();
            if m.holds(i, &args) != n.holds(i, &mapped) {
                return false;
            }
        }
    }
    true
}

pub fn isomorphic(m: &FiniteStructure, n: &FiniteStructure) -> bool {
    !isomorphisms(m, n).is_empty()
}

/// Number of isomorphism classes among `ms`.
pub fn class_count(ms: &[FiniteStructure]) -> usize {
    let mut reps: Vec<&FiniteStructure> = Vec::new();
    for m in ms {
        if !reps.iter().any(|r| isomorphic(r, m)) {
            reps.push(m);
        }
    }
    reps.len()
}

/// Applies per-sort permutations to the atoms of `m`.
pub fn permute(m: &FiniteStructure, maps: &[Vec<u32>]) -> FiniteStructure {
    let layout = m.layout();
    let mut cells = vec![0u32; layout.len];
    for (i, d) in layout.cells().iter().enumerate() {
        let args: Vec<u32> = d.args.iter().zip(&d.arg_sorts).map(|(&a, &s)| maps[s][a as usize]).collect();
        let v = m.cells()[i];
        let v = match d.value_sort {
            Some(s) => maps[s][v as usize],
            None => v,
        };
        cells[layout.position(d.kind, &args)] = v;
    }
    FiniteStructure::with_atoms(m.signature().clone(), m.sizes(), cells).expect("same shape")
}

pub mod arb {
    //! Random formulas and structures over one small two-sorted signature.

    use std::sync::Arc;

    use proptest::prelude::*;

    use morita_core::structures::{FiniteStructure, Layout};
    use morita_core::syntax::{Formula, Signature, Sort, Term, Theory, Var};

    pub const SIGNATURE: &str = "\
sort a
sort b
pred p : a
pred r : a x b
func f : a -> a
func g : a -> b
const c : a
";

    pub fn signature() -> Arc<Signature> {
        super::theory(SIGNATURE).signature
    }

    pub fn empty_theory() -> Theory {
        super::theory(SIGNATURE)
    }

    pub fn vars() -> Vec<Var> {
        let a = Sort::new("a");
        let b = Sort::new("b");
        vec![Var::new("x", &a), Var::new("y", &a), Var::new("u", &b)]
    }

    fn term_a() -> impl Strategy<Value = Term> {
        let vs = vars();
        let leaf = prop_oneof![
            Just(Term::var(&vs[0])),
            Just(Term::var(&vs[1])),
            Just(Term::constant("c")),
        ];
        leaf.prop_recursive(2, 4, 1, |inner| inner.prop_map(|t| Term::app("f", vec![t])))
    }

    fn term_b() -> impl Strategy<Value = Term> {
        let u = Term::var(&vars()[2]);
        prop_oneof![Just(u), term_a().prop_map(|t| Term::app("g", vec![t]))]
    }

    fn atom() -> impl Strategy<Value = Formula> {
        prop_oneof![
            term_a().prop_map(|t| Formula::pred("p", vec![t])),
            (term_a(), term_b()).prop_map(|(s, t)| Formula::pred("r", vec![s, t])),
            (term_a(), term_a()).prop_map(|(s, t)| Formula::eq(s, t)),
            (term_b(), term_b()).prop_map(|(s, t)| Formula::eq(s, t)),
        ]
    }

    /// Formulas whose variables are among `x`, `y`, `u`, free or bound.
    pub fn formula() -> impl Strategy<Value = Formula> {
        atom().prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
                (0..3usize, inner.clone()).prop_map(|(i, a)| Formula::forall(&vars()[i], a)),
                (0..3usize, inner).prop_map(|(i, a)| Formula::exists(&vars()[i], a)),
            ]
        })
    }

    /// Structures over [`SIGNATURE`] with `a` of size up to 3 and `b` up to 2.
    pub fn structure() -> impl Strategy<Value = FiniteStructure> {
        (1..=3u32, 1..=2u32).prop_flat_map(|(na, nb)| {
            let sig = signature();
            let layout = Layout::new(&sig, &[na, nb]);
            let domains: Vec<u32> = layout.cells().iter().map(|d| layout.domain(d.value_sort)).collect();
            proptest::collection::vec(any::<u32>(), domains.len()).prop_map(move |raw| {
                let cells = raw.iter().zip(&domains).map(|(r, d)| r % d).collect();
                FiniteStructure::with_atoms(sig.clone(), &[na, nb], cells).expect("in range")
            })
        })
    }
}
