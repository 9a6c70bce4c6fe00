use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use super::formula::{Formula, Term, VarMap};
use super::names::{Sort, Var, RESERVED_PREFIX};

/// Deterministic generator of `_v0`, `_v1`, … variables.
#[derive(Clone, Debug, Default)]
pub struct FreshVars {
    next: usize,
}

fn reserved_index(name: &str) -> Option<usize> {
    name.strip_prefix(RESERVED_PREFIX)?.parse().ok()
}

impl FreshVars {
    pub fn new() -> Self {
        FreshVars { next: 0 }
    }

    /// A generator whose output never collides with reserved names in `formulas`.
    pub fn avoiding<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Self {
        let mut g = FreshVars::new();
        for f in formulas {
            g.avoid_formula(f);
        }
        g
    }

    pub fn avoid_var(&mut self, v: &Var) {
        if let Some(i) = reserved_index(v.name.as_str()) {
            self.next = self.next.max(i + 1);
        }
    }

    pub fn avoid_formula(&mut self, f: &Formula) {
        for v in f.all_variables() {
            self.avoid_var(&v);
        }
    }

    pub fn var(&mut self, sort: &Sort) -> Var {
        let v = Var::new(&format!("{RESERVED_PREFIX}{}", self.next), sort);
        self.next += 1;
        v
    }
}

pub fn substitute_term(t: &Term, map: &VarMap) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| substitute_term(a, map)).collect()),
    }
}

/// Capture-avoiding simultaneous substitution of free variables.
pub fn substitute(phi: &Formula, map: &VarMap, fresh: &mut FreshVars) -> Formula {
    if map.is_empty() {
        return phi.clone();
    }
    match phi {
        Formula::Eq(a, b) => Formula::Eq(substitute_term(a, map), substitute_term(b, map)),
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|a| substitute_term(a, map)).collect())
        }
        Formula::Not(a) => Formula::not(substitute(a, map, fresh)),
        Formula::And(a, b) => Formula::and(substitute(a, map, fresh), substitute(b, map, fresh)),
        Formula::Or(a, b) => Formula::or(substitute(a, map, fresh), substitute(b, map, fresh)),
        Formula::Implies(a, b) => {
            Formula::implies(substitute(a, map, fresh), substitute(b, map, fresh))
        }
        Formula::Iff(a, b) => Formula::iff(substitute(a, map, fresh), substitute(b, map, fresh)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let mut inner = map.clone();
            inner.remove(v);
            let captures = inner.values().any(|t| t.contains_var(v));
            let (binder, body) = if captures {
                let w = fresh.var(&v.sort);
                let mut rename = VarMap::new();
                rename.insert(v.clone(), Term::Var(w.clone()));
                (w, substitute(body, &rename, fresh))
            } else {
                (v.clone(), (**body).clone())
            };
            let body = Box::new(substitute(&body, &inner, fresh));
            match phi {
                Formula::Forall(..) => Formula::Forall(binder, body),
                _ => Formula::Exists(binder, body),
            }
        }
    }
}

/// Renames the free variables `from[i]` to `to[i]`.
pub fn rename(phi: &Formula, from: &[Var], to: &[Var], fresh: &mut FreshVars) -> Formula {
    let map: VarMap = from.iter().cloned().zip(to.iter().map(|w| Term::Var(w.clone()))).collect();
    substitute(phi, &map, fresh)
}

/// `∃y (φ(y) ∧ ∀z (φ(z) → y = z))` with `z` drawn from `fresh`.
pub fn exists_unique(y: &Var, body: Formula, fresh: &mut FreshVars) -> Formula {
    let z = fresh.var(&y.sort);
    exists_unique_with(y, &z, body, fresh)
}

fn exists_unique_with(y: &Var, z: &Var, body: Formula, fresh: &mut FreshVars) -> Formula {
    let shifted = rename(&body, core::slice::from_ref(y), core::slice::from_ref(z), fresh);
    Formula::exists(
        y,
        Formula::and(
            body,
            Formula::forall(z, Formula::implies(shifted, Formula::eq(Term::var(y), Term::var(z)))),
        ),
    )
}

/// Surface syntax: formulas that may still contain the `∃=1` abbreviation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Surface {
    Plain(Formula),
    Not(Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Iff(Box<Surface>, Box<Surface>),
    Forall(Var, Box<Surface>),
    Exists(Var, Box<Surface>),
    ExistsUnique(Var, Box<Surface>),
}

impl Surface {
    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Surface::Plain(f) => out.extend(f.all_variables()),
            Surface::Not(a) => a.collect_vars(out),
            Surface::And(a, b) | Surface::Or(a, b) | Surface::Implies(a, b) | Surface::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Surface::Forall(v, a) | Surface::Exists(v, a) | Surface::ExistsUnique(v, a) => {
                out.push(v.clone());
                a.collect_vars(out);
            }
        }
    }
}

/// Removes every `∃=1` node. Inner variables are allocated in pre-order from
/// a counter that starts above any reserved name already present.
pub fn expand_unique_exists(s: &Surface) -> Formula {
    let mut vars = Vec::new();
    s.collect_vars(&mut vars);
    let mut fresh = FreshVars::new();
    for v in &vars {
        fresh.avoid_var(v);
    }
    expand(s, &mut fresh)
}

fn expand(s: &Surface, fresh: &mut FreshVars) -> Formula {
    match s {
        Surface::Plain(f) => f.clone(),
        Surface::Not(a) => Formula::not(expand(a, fresh)),
        Surface::And(a, b) => {
            let a = expand(a, fresh);
            Formula::and(a, expand(b, fresh))
        }
        Surface::Or(a, b) => {
            let a = expand(a, fresh);
            Formula::or(a, expand(b, fresh))
        }
        Surface::Implies(a, b) => {
            let a = expand(a, fresh);
            Formula::implies(a, expand(b, fresh))
        }
        Surface::Iff(a, b) => {
            let a = expand(a, fresh);
            Formula::iff(a, expand(b, fresh))
        }
        Surface::Forall(v, a) => Formula::forall(v, expand(a, fresh)),
        Surface::Exists(v, a) => Formula::exists(v, expand(a, fresh)),
        Surface::ExistsUnique(y, a) => {
            let z = fresh.var(&y.sort);
            let body = expand(a, fresh);
            exists_unique_with(y, &z, body, fresh)
        }
    }
}

/// Recognizes the expanded shape of `∃=1 y φ` produced above: returns `(y, φ)`.
pub fn match_exists_unique(phi: &Formula) -> Option<(&Var, &Formula)> {
    let Formula::Exists(y, inner) = phi else { return None };
    let Formula::And(body, uniq) = &**inner else { return None };
    let Formula::Forall(z, imp) = &**uniq else { return None };
    let Formula::Implies(shifted, eq) = &**imp else { return None };
    if z.sort != y.sort || reserved_index(z.name.as_str()).is_none() || z == y {
        return None;
    }
    if **eq != Formula::eq(Term::var(y), Term::var(z)) {
        return None;
    }
    if body.all_variables().contains(z) {
        return None;
    }
    let mut fresh = FreshVars::avoiding([phi]);
    let expected = rename(body, core::slice::from_ref(y), core::slice::from_ref(z), &mut fresh);
    (expected == **shifted).then_some((y, &**body))
}
