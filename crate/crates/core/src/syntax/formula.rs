use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::names::{Sort, Symbol, Var};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Var),
    Const(Symbol),
    App(Symbol, Vec<Term>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Eq(Term, Term),
    Pred(Symbol, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Term {
    pub fn var(v: &Var) -> Term {
        Term::Var(v.clone())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Symbol::new(name))
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(f), args)
    }

    /// Collects every variable occurring in the term.
    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    fn visit_symbols<'a>(&'a self, out: &mut dyn FnMut(&'a str)) {
        match self {
            Term::Var(v) => out(v.sort.as_str()),
            Term::Const(c) => out(c.as_str()),
            Term::App(f, args) => {
                out(f.as_str());
                args.iter().for_each(|a| a.visit_symbols(out));
            }
        }
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }
    pub fn pred(p: &str, args: Vec<Term>) -> Formula {
        Formula::Pred(Symbol::new(p), args)
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }
    pub fn forall(v: &Var, body: Formula) -> Formula {
        Formula::Forall(v.clone(), Box::new(body))
    }
    pub fn exists(v: &Var, body: Formula) -> Formula {
        Formula::Exists(v.clone(), Box::new(body))
    }

    /// Quantifies `vars` universally, outermost first.
    pub fn forall_all(vars: &[Var], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    /// Quantifies `vars` existentially, outermost first.
    pub fn exists_all(vars: &[Var], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::exists(v, acc))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjunction(parts: Vec<Formula>) -> Option<Formula> {
        let mut it = parts.into_iter();
        let first = it.next()?;
        Some(it.fold(first, Formula::and))
    }

    /// The tautology `∃σ x (x = x)`.
    pub fn tautology(v: &Var) -> Formula {
        Formula::exists(v, Formula::eq(Term::var(v), Term::var(v)))
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let add_term = |t: &Term, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Pred(_, args) => args.iter().for_each(|a| add_term(a, bound, out)),
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Every variable occurring anywhere, bound or free.
    pub fn all_variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.walk_vars(&mut out);
        out
    }

    fn walk_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Pred(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Formula::Not(a) => a.walk_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.walk_vars(out);
                b.walk_vars(out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                out.insert(v.clone());
                body.walk_vars(out);
            }
        }
    }

    /// Calls `out` on every sort, predicate, function and constant name used.
    pub fn visit_symbols<'a>(&'a self, out: &mut dyn FnMut(&'a str)) {
        match self {
            Formula::Eq(a, b) => {
                a.visit_symbols(out);
                b.visit_symbols(out);
            }
            Formula::Pred(p, args) => {
                out(p.as_str());
                args.iter().for_each(|a| a.visit_symbols(out));
            }
            Formula::Not(a) => a.visit_symbols(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_symbols(out);
                b.visit_symbols(out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                out(v.sort.as_str());
                body.visit_symbols(out);
            }
        }
    }

    /// Sorts, predicates, functions and constants mentioned.
    pub fn symbols(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit_symbols(&mut |s| {
            out.insert(s);
        });
        out
    }

    /// Nesting depth of connectives and quantifiers; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Pred(..) => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new())
    }
}

fn alpha_term(a: &Term, b: &Term, env: &[(Var, Var)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            for (l, r) in env.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (Term::Const(c), Term::Const(d)) => c == d,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, env))
        }
        _ => false,
    }
}

fn alpha(a: &Formula, b: &Formula, env: &mut Vec<(Var, Var)>) -> bool {
    use Formula::*;
    match (a, b) {
        (Eq(s1, t1), Eq(s2, t2)) => alpha_term(s1, s2, env) && alpha_term(t1, t2, env),
        (Pred(p, xs), Pred(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, env))
        }
        (Not(x), Not(y)) => alpha(x, y, env),
        (And(a1, b1), And(a2, b2))
        | (Or(a1, b1), Or(a2, b2))
        | (Implies(a1, b1), Implies(a2, b2))
        | (Iff(a1, b1), Iff(a2, b2)) => alpha(a1, a2, env) && alpha(b1, b2, env),
        (Forall(v, x), Forall(w, y)) | (Exists(v, x), Exists(w, y)) => {
            if v.sort != w.sort {
                return false;
            }
            env.push((v.clone(), w.clone()));
            let r = alpha(x, y, env);
            env.pop();
            r
        }
        _ => false,
    }
}

/// A Σ-theory: a signature and a list of sentences.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Theory {
    pub signature: alloc::sync::Arc<super::Signature>,
    pub axioms: Vec<Formula>,
}

impl Theory {
    /// Builds a theory after sort-checking every axiom as a sentence.
    pub fn new(
        signature: alloc::sync::Arc<super::Signature>,
        axioms: Vec<Formula>,
    ) -> Result<Theory, super::SyntaxError> {
        signature.validate().map_err(super::SyntaxError::Signature)?;
        for a in &axioms {
            super::check_sentence(&signature, a)?;
        }
        Ok(Theory { signature, axioms })
    }

    /// Theory with no axioms.
    pub fn empty(signature: alloc::sync::Arc<super::Signature>) -> Theory {
        Theory { signature, axioms: Vec::new() }
    }
}

/// Mapping used when renaming or substituting variables.
pub type VarMap = BTreeMap<Var, Term>;

/// Shorthand for a variable term.
pub fn v(name: &str, sort: &Sort) -> Term {
    Term::Var(Var::new(name, sort))
}
