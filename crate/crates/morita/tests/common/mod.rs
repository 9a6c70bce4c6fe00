//! Brute-force references that avoid the enumerator, evaluator and
//! canonicalizer under test.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use morita_core::structures::{FiniteStructure, Layout};
use morita_core::syntax::{Formula, Signature, Term, Theory, Var};

pub type Env = BTreeMap<Var, u32>;

fn term(m: &FiniteStructure, t: &Term, env: &Env) -> u32 {
    let sig = m.signature();
    match t {
        Term::Var(v) => env[v],
        Term::Const(c) => m.constant(sig.constant(c.as_str()).expect("constant").0),
        Term::App(f, args) => {
            let vals: Vec<u32> = args.iter().map(|a| term(m, a, env)).collect();
            m.apply(sig.function(f.as_str()).expect("function").0, &vals)
        }
    }
}

pub fn holds(m: &FiniteStructure, phi: &Formula, env: &mut Env) -> bool {
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
            let saved = env.get(v).copied();
            let want = matches!(phi, Formula::Exists(..));
            let mut result = !want;
            for a in 0..n {
                env.insert(v.clone(), a);
                if holds(m, body, env) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(a) => env.insert(v.clone(), a),
                None => env.remove(v),
            };
            result
        }
    }
}

pub fn is_model(m: &FiniteStructure, t: &Theory) -> bool {
    t.axioms.iter().all(|a| holds(m, a, &mut Env::new()))
}

pub fn tuples(limits: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &n in limits {
        out = out.into_iter().flat_map(|t| (0..n).map(move |a| [t.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Number of structures with every carrier of size `1..=bound`.
pub fn structure_count(sig: &Signature, bound: u32) -> f64 {
    let k = sig.sorts().len();
    tuples(&vec![bound; k])
        .iter()
        .map(|sizes| {
            let sizes: Vec<u32> = sizes.iter().map(|s| s + 1).collect();
            let layout = Layout::new(sig, &sizes);
            layout.cells().iter().map(|d| layout.domain(d.value_sort) as f64).product::<f64>()
        })
        .sum()
}

/// Every model of `t` with carriers of sizes `1..=bound`, cell by cell.
pub fn all_models(t: &Theory, bound: u32) -> Vec<FiniteStructure> {
    let sig: &Arc<Signature> = &t.signature;
    let mut out = Vec::new();
    for sizes in tuples(&vec![bound; sig.sorts().len()]) {
        let sizes: Vec<u32> = sizes.iter().map(|s| s + 1).collect();
        let layout = Layout::new(sig, &sizes);
        let domains: Vec<u32> = layout.cells().iter().map(|d| layout.domain(d.value_sort)).collect();
        let mut cells = vec![0u32; domains.len()];
        loop {
            let m = FiniteStructure::with_atoms(sig.clone(), &sizes, cells.clone()).expect("in range");
            if is_model(&m, t) {
                out.push(m);
            }
            // Odometer over the cell vector.
            let mut i = 0;
            while i < cells.len() {
                cells[i] += 1;
                if cells[i] < domains[i] {
                    break;
                }
                cells[i] = 0;
                i += 1;
            }
            if i == cells.len() {
                break;
            }
        }
    }
    out
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

/// The cell vector of `m` relabelled by per-sort permutations.
pub fn permuted_cells(m: &FiniteStructure, maps: &[Vec<u32>]) -> Vec<u32> {
    let layout = m.layout();
    let mut cells = vec![0u32; layout.len];
    for (i, d) in layout.cells().iter().enumerate() {
        let args: Vec<u32> = d.args.iter().zip(&d.arg_sorts).map(|(&a, &s)| maps[s][a as usize]).collect();
        let v = m.cells()[i];
        cells[layout.position(d.kind, &args)] = d.value_sort.map_or(v, |s| maps[s][v as usize]);
    }
    cells
}

/// Orbits of the relabelling action on `models`.
pub fn orbit_count(models: &[FiniteStructure]) -> usize {
    let mut seen: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
    let mut orbits = 0;
    for m in models {
        let key = (m.sizes().to_vec(), m.cells().to_vec());
        if seen.contains(&key) {
            continue;
        }
        orbits += 1;
        let mut choices: Vec<Vec<Vec<u32>>> = vec![vec![]];
        for &n in m.sizes() {
            let perms = permutations(n);
            choices = choices
                .into_iter()
                .flat_map(|c| perms.iter().map(move |p| [c.clone(), vec![p.clone()]].concat()))
                .collect();
        }
        for maps in choices {
            seen.insert((m.sizes().to_vec(), permuted_cells(m, &maps)));
        }
    }
    orbits
}
