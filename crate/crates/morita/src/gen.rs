//! Random well-sorted formulas for property sweeps.

use morita_core::syntax::{Formula, Signature, Sort, Symbol, Term, Var};
use rand::seq::SliceRandom;
use rand::Rng;

/// Draws formulas over `sig` whose free variables come from `free`.
pub struct FormulaGen<'s> {
    sig: &'s Signature,
    /// Maximum nesting of function symbols inside an atom.
    pub term_depth: usize,
    /// Names for bound variables; reusing them produces shadowing.
    pub bound_names: Vec<String>,
}

impl<'s> FormulaGen<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        FormulaGen { sig, term_depth: 1, bound_names: ["v0", "v1", "v2"].map(String::from).to_vec() }
    }

    fn term<R: Rng>(&self, rng: &mut R, sort: &Sort, scope: &[Var], depth: usize) -> Option<Term> {
        let mut options: Vec<Term> = scope.iter().filter(|v| &v.sort == sort).map(Term::var).collect();
        options.extend(self.sig.constants().iter().filter(|c| &c.sort == sort).map(|c| Term::Const(c.name.clone())));
        let funcs: Vec<_> = self.sig.functions().iter().filter(|f| &f.codomain == sort).collect();
        if depth > 0 && !funcs.is_empty() && (options.is_empty() || rng.gen_bool(0.4)) {
            let f = funcs.choose(rng)?;
            let args: Option<Vec<Term>> = f.domain.iter().map(|s| self.term(rng, s, scope, depth - 1)).collect();
            if let Some(args) = args {
                return Some(Term::App(f.name.clone(), args));
            }
        }
        options.choose(rng).cloned()
    }

    fn atom<R: Rng>(&self, rng: &mut R, scope: &[Var]) -> Option<Formula> {
        for _ in 0..8 {
            let preds = self.sig.predicates();
            if !preds.is_empty() && rng.gen_bool(0.5) {
                let p = preds.choose(rng)?;
                let args: Option<Vec<Term>> = p.arity.iter().map(|s| self.term(rng, s, scope, self.term_depth)).collect();
                if let Some(args) = args {
                    return Some(Formula::Pred(Symbol::new(p.name.as_str()), args));
                }
            } else {
                let sort = self.sig.sorts().choose(rng)?;
                let a = self.term(rng, sort, scope, self.term_depth);
                let b = self.term(rng, sort, scope, self.term_depth);
                if let (Some(a), Some(b)) = (a, b) {
                    return Some(Formula::eq(a, b));
                }
            }
        }
        None
    }

    fn formula<R: Rng>(&self, rng: &mut R, scope: &mut Vec<Var>, depth: usize) -> Option<Formula> {
        if depth == 0 || rng.gen_bool(0.15) {
            if let Some(a) = self.atom(rng, scope) {
                return Some(a);
            }
            if depth == 0 {
                return None;
            }
        }
        match rng.gen_range(0..7) {
            0 => Some(Formula::not(self.formula(rng, scope, depth - 1)?)),
            1..=4 => {
                let a = self.formula(rng, scope, depth - 1)?;
                let b = self.formula(rng, scope, depth - 1)?;
                Some(match rng.gen_range(0..4) {
                    0 => Formula::and(a, b),
                    1 => Formula::or(a, b),
                    2 => Formula::implies(a, b),
                    _ => Formula::iff(a, b),
                })
            }
            _ => {
                let sort = self.sig.sorts().choose(rng)?.clone();
                let name = self.bound_names.choose(rng)?;
                let v = Var::new(name, &sort);
                scope.push(v.clone());
                let body = self.formula(rng, scope, depth - 1);
                scope.pop();
                let body = body?;
                Some(if rng.gen_bool(0.5) { Formula::forall(&v, body) } else { Formula::exists(&v, body) })
            }
        }
    }

    /// A formula of depth at most `max_depth` over the variables `free`
    /// (not all of which need occur).
    pub fn generate<R: Rng>(&self, rng: &mut R, free: &[Var], max_depth: usize) -> Formula {
        loop {
            let depth = rng.gen_range(0..=max_depth);
            let mut scope = free.to_vec();
            if let Some(f) = self.formula(rng, &mut scope, depth) {
                if f.depth() <= max_depth {
                    return f;
                }
            }
        }
    }

    /// A sentence of depth at most `max_depth` (at least 1).
    pub fn sentence<R: Rng>(&self, rng: &mut R, max_depth: usize) -> Formula {
        loop {
            let f = self.generate(rng, &[], max_depth.max(1));
            if f.is_sentence() {
                return f;
            }
        }
    }
}
