//! Codes and the translation of extended formulas back to the base signature.
//!
//! A code ties each variable of a new sort to base-sorted variables through
//! the step's construction symbols. Relative to a code, every formula over
//! the extended signature has a base-signature counterpart that agrees with
//! it whenever the code holds.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::extensions::{ExplicitDefinition, ExtensionStep};
use crate::syntax::{check_formula, rename, sort_of_term, Formula, FreshVars, Sort, SyntaxError, Term, Var};

/// How one new-sort variable is tied to base variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Witness {
    /// `π1(x) = y1 ∧ π2(x) = y2`.
    Product(Var, Var),
    /// `ρ1(y) = x`.
    Left(Var),
    /// `ρ2(y) = x`.
    Right(Var),
    /// `i(x) = y`.
    Subsort(Var),
    /// `ε(y) = x`.
    Quotient(Var),
}

impl Witness {
    pub fn base_vars(&self) -> Vec<&Var> {
        match self {
            Witness::Product(a, b) => vec![a, b],
            Witness::Left(y) | Witness::Right(y) | Witness::Subsort(y) | Witness::Quotient(y) => vec![y],
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodeEntry {
    pub var: Var,
    pub witness: Witness,
}

/// A conjunction of entries, one per new-sort variable. With no entries it
/// stands for the tautology `∃σ x (x = x)` over `empty_sort`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Code {
    pub entries: Vec<CodeEntry>,
    pub empty_sort: Sort,
}

impl Code {
    /// The empty code over the first base sort.
    pub fn empty(s: &ExtensionStep) -> Code {
        Code { entries: Vec::new(), empty_sort: s.base().sorts()[0].clone() }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn base_vars(&self) -> Vec<&Var> {
        self.entries.iter().flat_map(|e| e.witness.base_vars()).collect()
    }

    pub fn witness(&self, v: &Var) -> Option<&Witness> {
        self.entries.iter().find(|e| &e.var == v).map(|e| &e.witness)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TranslationError {
    SortNotDefinedByStep(String),
    CodeMismatch(String),
    FreeVariableNotCovered(String),
    IllFormed(SyntaxError),
}

impl fmt::Display for TranslationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslationError::SortNotDefinedByStep(s) => write!(f, "sort `{s}` is not defined by the step"),
            TranslationError::CodeMismatch(m) => write!(f, "code does not fit the step: {m}"),
            TranslationError::FreeVariableNotCovered(v) => write!(f, "free variable `{v}` has no code entry"),
            TranslationError::IllFormed(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TranslationError {}

type Result<T> = core::result::Result<T, TranslationError>;

fn mismatch(msg: String) -> TranslationError {
    TranslationError::CodeMismatch(msg)
}

fn t(v: &Var) -> Term {
    Term::var(v)
}

fn app(f: &crate::syntax::Symbol, arg: Term) -> Term {
    Term::App(f.clone(), vec![arg])
}

/// Every code for `vars`, fresh base variables allocated left to right.
/// Each coproduct-sorted variable doubles the number of codes.
pub fn codes_for(vars: &[Var], s: &ExtensionStep) -> Result<Vec<Code>> {
    let mut fresh = FreshVars::new();
    for v in vars {
        fresh.avoid_var(v);
    }
    codes_with(vars, s, &mut fresh)
}

/// As [`codes_for`], drawing base variables from `fresh`.
pub fn codes_with(vars: &[Var], s: &ExtensionStep, fresh: &mut FreshVars) -> Result<Vec<Code>> {
    let mut codes = vec![Code::empty(s)];
    for v in vars {
        let d = s.sort_definition(&v.sort).ok_or_else(|| TranslationError::SortNotDefinedByStep(v.sort.as_str().into()))?;
        let options = match d {
            ExplicitDefinition::Product { left, right, .. } => {
                vec![Witness::Product(fresh.var(left), fresh.var(right))]
            }
            ExplicitDefinition::Coproduct { left, right, .. } => {
                vec![Witness::Left(fresh.var(left)), Witness::Right(fresh.var(right))]
            }
            ExplicitDefinition::Subsort { parent, .. } => vec![Witness::Subsort(fresh.var(parent))],
            ExplicitDefinition::Quotient { parent, .. } => vec![Witness::Quotient(fresh.var(parent))],
            _ => unreachable!("only sort constructions define sorts"),
        };
        codes = codes
            .into_iter()
            .flat_map(|c| {
                options.iter().map(move |w| {
                    let mut c = c.clone();
                    c.entries.push(CodeEntry { var: v.clone(), witness: w.clone() });
                    c
                })
            })
            .collect();
    }
    Ok(codes)
}

/// The code as a formula over the extended signature.
pub fn code_formula(code: &Code, s: &ExtensionStep) -> Formula {
    let parts: Vec<Formula> = code
        .entries
        .iter()
        .map(|e| {
            let d = s.sort_definition(&e.var.sort).expect("entry sort defined by the step");
            let x = t(&e.var);
            match (d, &e.witness) {
                (ExplicitDefinition::Product { left_projection, right_projection, .. }, Witness::Product(a, b)) => {
                    Formula::and(
                        Formula::eq(app(left_projection, x.clone()), t(a)),
                        Formula::eq(app(right_projection, x), t(b)),
                    )
                }
                (ExplicitDefinition::Coproduct { left_injection, .. }, Witness::Left(y)) => {
                    Formula::eq(app(left_injection, t(y)), x)
                }
                (ExplicitDefinition::Coproduct { right_injection, .. }, Witness::Right(y)) => {
                    Formula::eq(app(right_injection, t(y)), x)
                }
                (ExplicitDefinition::Subsort { inclusion, .. }, Witness::Subsort(y)) => Formula::eq(app(inclusion, x), t(y)),
                (ExplicitDefinition::Quotient { projection, .. }, Witness::Quotient(y)) => {
                    Formula::eq(app(projection, t(y)), x)
                }
                _ => panic!("code entry does not match the step"),
            }
        })
        .collect();
    Formula::conjunction(parts).unwrap_or_else(|| {
        let x = Var::new("x", &code.empty_sort);
        Formula::exists(&x, Formula::eq(t(&x), t(&x)))
    })
}

enum Target {
    Base(Var),
    New(Witness),
}

struct Translator<'s> {
    step: &'s ExtensionStep,
    code: BTreeMap<Var, Witness>,
    fresh: FreshVars,
}

impl<'s> Translator<'s> {
    fn new(step: &'s ExtensionStep, code: &Code, avoid: &[&Formula]) -> Result<Translator<'s>> {
        let mut fresh = FreshVars::new();
        for f in avoid {
            fresh.avoid_formula(f);
        }
        for d in step.added() {
            if let Some((body, params)) = d.defining_formula() {
                fresh.avoid_formula(body);
                params.into_iter().for_each(|p| fresh.avoid_var(p));
            }
        }
        let mut map = BTreeMap::new();
        for e in &code.entries {
            let d = step
                .sort_definition(&e.var.sort)
                .ok_or_else(|| TranslationError::SortNotDefinedByStep(e.var.sort.as_str().into()))?;
            let ok = match (d, &e.witness) {
                (ExplicitDefinition::Product { left, right, .. }, Witness::Product(a, b)) => {
                    a.sort == *left && b.sort == *right
                }
                (ExplicitDefinition::Coproduct { left, .. }, Witness::Left(y)) => y.sort == *left,
                (ExplicitDefinition::Coproduct { right, .. }, Witness::Right(y)) => y.sort == *right,
                (ExplicitDefinition::Subsort { parent, .. }, Witness::Subsort(y))
                | (ExplicitDefinition::Quotient { parent, .. }, Witness::Quotient(y)) => y.sort == *parent,
                _ => false,
            };
            if !ok {
                return Err(mismatch(format!("entry for `{}` does not match how its sort is defined", e.var)));
            }
            for y in e.witness.base_vars() {
                fresh.avoid_var(y);
            }
            if map.insert(e.var.clone(), e.witness.clone()).is_some() {
                return Err(mismatch(format!("two entries for `{}`", e.var)));
            }
        }
        let ys = code.base_vars();
        if ys.iter().collect::<BTreeSet<_>>().len() != ys.len() {
            return Err(mismatch("base variables of the code are not distinct".into()));
        }
        Ok(Translator { step, code: map, fresh })
    }

    fn definition(&self, name: &str) -> Option<&'s ExplicitDefinition> {
        self.step.definition_of(name)
    }

    fn falsum(&mut self) -> Formula {
        let v = self.fresh.var(&self.step.base().sorts()[0]);
        Formula::not(Formula::exists(&v, Formula::eq(t(&v), t(&v))))
    }

    fn witness_of(&self, v: &Var) -> Result<Witness> {
        self.code.get(v).cloned().ok_or_else(|| TranslationError::FreeVariableNotCovered(format!("{v}")))
    }

    /// `ψ` with its parameters renamed to `to`.
    fn instantiate(&mut self, body: &Formula, params: &[&Var], to: &[Var]) -> Formula {
        let from: Vec<Var> = params.iter().map(|v| (*v).clone()).collect();
        rename(body, &from, to, &mut self.fresh)
    }

    fn quotient_kernel(&mut self, sort: &Sort, a: &Var, b: &Var) -> Formula {
        let Some(ExplicitDefinition::Quotient { vars, body, .. }) = self.step.sort_definition(sort) else {
            unreachable!("quotient sort")
        };
        self.instantiate(body, &[&vars[0], &vars[1]], &[a.clone(), b.clone()])
    }

    /// `∃z̄ (φ_{t1}(z1) ∧ … ∧ φ_{tk}(zk) ∧ last(z̄))`.
    fn through_args(&mut self, args: &[Term], last: impl FnOnce(&mut Self, &[Var]) -> Formula) -> Result<Formula> {
        let derived = self.step.derived().clone();
        let mut zs = Vec::with_capacity(args.len());
        let mut parts = Vec::with_capacity(args.len() + 1);
        for a in args {
            let sort = sort_of_term(&derived, a).map_err(TranslationError::IllFormed)?;
            let z = self.fresh.var(&sort);
            parts.push(self.term(a, &Target::Base(z.clone()))?);
            zs.push(z);
        }
        parts.push(last(self, &zs));
        let body = Formula::conjunction(parts).expect("nonempty");
        Ok(zs.iter().rev().fold(body, |acc, z| Formula::exists(z, acc)))
    }

    /// `φ_t` such that `t = x ↔ φ_t` whenever the code holds.
    fn term(&mut self, term: &Term, target: &Target) -> Result<Formula> {
        match (term, target) {
            (Term::Var(v), Target::Base(x)) => {
                if self.step.is_new_sort(&v.sort) {
                    return Err(mismatch(format!("`{v}` has a new sort but the target is a base variable")));
                }
                Ok(Formula::eq(t(x), t(v)))
            }
            (Term::Var(v), Target::New(w)) => {
                let wi = self.witness_of(v)?;
                match (w, &wi) {
                    (Witness::Product(a, b), Witness::Product(c, d)) => {
                        Ok(Formula::and(Formula::eq(t(a), t(c)), Formula::eq(t(b), t(d))))
                    }
                    (Witness::Left(a), Witness::Left(c))
                    | (Witness::Right(a), Witness::Right(c))
                    | (Witness::Subsort(a), Witness::Subsort(c)) => Ok(Formula::eq(t(a), t(c))),
                    (Witness::Left(_), Witness::Right(_)) | (Witness::Right(_), Witness::Left(_)) => Ok(self.falsum()),
                    (Witness::Quotient(a), Witness::Quotient(c)) => Ok(self.quotient_kernel(&v.sort, a, c)),
                    _ => Err(mismatch(format!("entry kinds disagree at `{v}`"))),
                }
            }
            (Term::Const(c), Target::Base(x)) => match self.definition(c.as_str()) {
                Some(ExplicitDefinition::Constant { result, body, .. }) => {
                    Ok(self.instantiate(body, &[result], core::slice::from_ref(x)))
                }
                _ => Ok(Formula::eq(t(x), Term::Const(c.clone()))),
            },
            (Term::Const(c), Target::New(_)) => Err(mismatch(format!("constant `{c}` has a new sort"))),
            (Term::App(f, args), target) => {
                let Some(d) = self.definition(f.as_str()) else {
                    let Target::Base(x) = target else {
                        return Err(mismatch(format!("`{f}` does not land in a new sort")));
                    };
                    let (f, x) = (f.clone(), x.clone());
                    return self.through_args(args, |_, zs| {
                        Formula::eq(Term::App(f, zs.iter().map(t).collect()), t(&x))
                    });
                };
                match (d, target) {
                    (ExplicitDefinition::Function { params, result, body, .. }, Target::Base(x)) => {
                        let mut refs: Vec<&Var> = params.iter().collect();
                        refs.push(result);
                        self.through_args(args, |me, zs| {
                            let mut to = zs.to_vec();
                            to.push(x.clone());
                            me.instantiate(body, &refs, &to)
                        })
                    }
                    (ExplicitDefinition::Product { left_projection, right_projection, .. }, Target::Base(x)) => {
                        let v = self.arg_var(f.as_str(), args)?;
                        let Witness::Product(a, b) = self.witness_of(v)? else {
                            return Err(mismatch(format!("`{v}` needs a product entry")));
                        };
                        let y = if f == left_projection {
                            a
                        } else {
                            debug_assert!(f == right_projection);
                            b
                        };
                        Ok(Formula::eq(t(&y), t(x)))
                    }
                    (ExplicitDefinition::Subsort { .. }, Target::Base(x)) => {
                        let v = self.arg_var(f.as_str(), args)?;
                        let Witness::Subsort(y) = self.witness_of(v)? else {
                            return Err(mismatch(format!("`{v}` needs a subsort entry")));
                        };
                        Ok(Formula::eq(t(&y), t(x)))
                    }
                    (ExplicitDefinition::Coproduct { left_injection, .. }, Target::New(w)) => {
                        let left = f == left_injection;
                        match (left, w) {
                            (true, Witness::Left(y)) | (false, Witness::Right(y)) => {
                                self.term(&args[0], &Target::Base(y.clone()))
                            }
                            (_, Witness::Left(_) | Witness::Right(_)) => Ok(self.falsum()),
                            _ => Err(mismatch(format!("`{f}` needs a coproduct target"))),
                        }
                    }
                    (ExplicitDefinition::Quotient { sort, parent, .. }, Target::New(Witness::Quotient(y))) => {
                        let z = self.fresh.var(parent);
                        let inner = self.term(&args[0], &Target::Base(z.clone()))?;
                        let kernel = self.quotient_kernel(sort, y, &z);
                        Ok(Formula::exists(&z, Formula::and(inner, kernel)))
                    }
                    _ => Err(mismatch(format!("`{f}` does not fit the target's code entry"))),
                }
            }
        }
    }

    /// The argument of a projection or inclusion, which is always a variable.
    fn arg_var<'t>(&self, f: &str, args: &'t [Term]) -> Result<&'t Var> {
        match args {
            [Term::Var(v)] => Ok(v),
            _ => Err(mismatch(format!("`{f}` applied to a non-variable"))),
        }
    }

    fn with_entry<T>(&mut self, v: &Var, w: Witness, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let saved = self.code.insert(v.clone(), w);
        let out = f(self);
        match saved {
            Some(old) => self.code.insert(v.clone(), old),
            None => self.code.remove(v),
        };
        out
    }

    fn formula(&mut self, phi: &Formula) -> Result<Formula> {
        let derived = self.step.derived().clone();
        match phi {
            Formula::Eq(a, b) => {
                let sort = sort_of_term(&derived, a).map_err(TranslationError::IllFormed)?;
                let Some(d) = self.step.sort_definition(&sort) else {
                    let x = self.fresh.var(&sort);
                    let target = Target::Base(x.clone());
                    let (fa, fb) = (self.term(a, &target)?, self.term(b, &target)?);
                    return Ok(Formula::exists(&x, Formula::and(fa, fb)));
                };
                let both = |me: &mut Self, w: Witness| -> Result<Formula> {
                    let target = Target::New(w);
                    Ok(Formula::and(me.term(a, &target)?, me.term(b, &target)?))
                };
                match d {
                    ExplicitDefinition::Product { left, right, .. } => {
                        let (v1, v2) = (self.fresh.var(left), self.fresh.var(right));
                        let body = both(self, Witness::Product(v1.clone(), v2.clone()))?;
                        Ok(Formula::exists(&v1, Formula::exists(&v2, body)))
                    }
                    ExplicitDefinition::Coproduct { left, right, .. } => {
                        let (v1, v2) = (self.fresh.var(left), self.fresh.var(right));
                        let l = both(self, Witness::Left(v1.clone()))?;
                        let r = both(self, Witness::Right(v2.clone()))?;
                        Ok(Formula::or(Formula::exists(&v1, l), Formula::exists(&v2, r)))
                    }
                    ExplicitDefinition::Subsort { parent, .. } => {
                        let v = self.fresh.var(parent);
                        let body = both(self, Witness::Subsort(v.clone()))?;
                        Ok(Formula::exists(&v, body))
                    }
                    ExplicitDefinition::Quotient { parent, .. } => {
                        let v = self.fresh.var(parent);
                        let body = both(self, Witness::Quotient(v.clone()))?;
                        Ok(Formula::exists(&v, body))
                    }
                    _ => unreachable!("only sort constructions define sorts"),
                }
            }
            Formula::Pred(p, args) => match self.definition(p.as_str()) {
                Some(ExplicitDefinition::Predicate { params, body, .. }) => {
                    let refs: Vec<&Var> = params.iter().collect();
                    self.through_args(args, |me, zs| me.instantiate(body, &refs, zs))
                }
                _ => {
                    let p = p.clone();
                    self.through_args(args, |_, zs| Formula::Pred(p, zs.iter().map(t).collect()))
                }
            },
            Formula::Not(a) => Ok(Formula::not(self.formula(a)?)),
            Formula::And(a, b) => Ok(Formula::and(self.formula(a)?, self.formula(b)?)),
            Formula::Or(a, b) => Ok(Formula::or(self.formula(a)?, self.formula(b)?)),
            Formula::Implies(a, b) => Ok(Formula::implies(self.formula(a)?, self.formula(b)?)),
            Formula::Iff(a, b) => Ok(Formula::iff(self.formula(a)?, self.formula(b)?)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let universal = matches!(phi, Formula::Forall(..));
                let quant = |w: &Var, f: Formula| if universal { Formula::forall(w, f) } else { Formula::exists(w, f) };
                let Some(d) = self.step.sort_definition(&v.sort) else {
                    return Ok(quant(v, self.formula(body)?));
                };
                match d {
                    ExplicitDefinition::Product { left, right, .. } => {
                        let (v1, v2) = (self.fresh.var(left), self.fresh.var(right));
                        let inner = self.with_entry(v, Witness::Product(v1.clone(), v2.clone()), |me| me.formula(body))?;
                        Ok(quant(&v1, quant(&v2, inner)))
                    }
                    ExplicitDefinition::Coproduct { left, right, .. } => {
                        let (v1, v2) = (self.fresh.var(left), self.fresh.var(right));
                        let l = self.with_entry(v, Witness::Left(v1.clone()), |me| me.formula(body))?;
                        let r = self.with_entry(v, Witness::Right(v2.clone()), |me| me.formula(body))?;
                        let joined = if universal { Formula::and(l, r) } else { Formula::or(l, r) };
                        Ok(quant(&v1, quant(&v2, joined)))
                    }
                    ExplicitDefinition::Subsort { parent, var, body: delta, .. } => {
                        let w = self.fresh.var(parent);
                        let inner = self.with_entry(v, Witness::Subsort(w.clone()), |me| me.formula(body))?;
                        let guard = self.instantiate(delta, &[var], core::slice::from_ref(&w));
                        let joined = if universal { Formula::implies(guard, inner) } else { Formula::and(guard, inner) };
                        Ok(quant(&w, joined))
                    }
                    ExplicitDefinition::Quotient { parent, .. } => {
                        let w = self.fresh.var(parent);
                        let inner = self.with_entry(v, Witness::Quotient(w.clone()), |me| me.formula(body))?;
                        Ok(quant(&w, inner))
                    }
                    _ => unreachable!("only sort constructions define sorts"),
                }
            }
        }
    }
}

fn check_code_against(phi_vars: &BTreeSet<Var>, code: &Code) -> Result<()> {
    for y in code.base_vars() {
        if phi_vars.contains(y) {
            return Err(mismatch(format!("code variable `{y}` also occurs in the formula")));
        }
    }
    Ok(())
}

/// `φ_t` for a term over the extended signature. When `x` has a new sort its
/// entry is taken from the code and `x` itself does not occur in the result.
pub fn translate_term(term: &Term, x: &Var, code: &Code, s: &ExtensionStep) -> Result<Formula> {
    let sort = sort_of_term(s.derived(), term).map_err(TranslationError::IllFormed)?;
    if sort != x.sort {
        return Err(TranslationError::IllFormed(SyntaxError::SortMismatch {
            context: format!("{term} = {x}"),
            expected: x.sort.as_str().into(),
            found: sort.as_str().into(),
        }));
    }
    let probe = Formula::eq(term.clone(), t(x));
    check_code_against(&probe.all_variables(), code)?;
    let mut tr = Translator::new(s, code, &[&probe])?;
    let target = if s.is_new_sort(&x.sort) {
        Target::New(tr.witness_of(x)?)
    } else {
        Target::Base(x.clone())
    };
    tr.term(term, &target)
}

/// `φ*` relative to `code`, which must cover every free new-sort variable of `φ`.
pub fn translate_formula(phi: &Formula, code: &Code, s: &ExtensionStep) -> Result<Formula> {
    check_formula(s.derived(), phi).map_err(TranslationError::IllFormed)?;
    for v in phi.free_variables() {
        if s.is_new_sort(&v.sort) && code.witness(&v).is_none() {
            return Err(TranslationError::FreeVariableNotCovered(format!("{v}")));
        }
    }
    check_code_against(&phi.all_variables(), code)?;
    Translator::new(s, code, &[phi])?.formula(phi)
}

/// `φ*` for a sentence, using the empty code.
pub fn translate_sentence(phi: &Formula, s: &ExtensionStep) -> Result<Formula> {
    translate_formula(phi, &Code::empty(s), s)
}

/// Translates a sentence over the last step's signature down to the first
/// step's base, one step at a time.
pub fn translate_through_chain(phi: &Formula, steps: &[ExtensionStep]) -> Result<Formula> {
    steps.iter().rev().try_fold(phi.clone(), |acc, s| translate_sentence(&acc, s))
}

/// Names of step-introduced symbols and sorts occurring in `phi`.
pub fn foreign_symbols(phi: &Formula, s: &ExtensionStep) -> Vec<String> {
    let mut out: BTreeSet<String> = BTreeSet::new();
    for name in phi.symbols() {
        if s.base().lookup(name).is_none() {
            out.insert(name.into());
        }
    }
    for v in phi.all_variables() {
        if !s.base().has_sort(&v.sort) {
            out.insert(v.sort.as_str().into());
        }
    }
    out.into_iter().collect()
}

/// True iff `phi` uses only the step's base signature.
pub fn is_pure(phi: &Formula, s: &ExtensionStep) -> bool {
    foreign_symbols(phi, s).is_empty()
}
