//! Explicit definitions, their admissibility conditions, and extension steps.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::structures::{bounded_entails, Bound, Entailment};
use crate::syntax::{
    check_formula, expand_unique_exists, rename, Formula, FreshVars, Signature, SignatureError,
    Sort, Surface, Symbol, Term, Theory, Var,
};

/// One explicit definition of a new symbol in terms of the base signature.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExplicitDefinition {
    /// `∀x̄ (p(x̄) ↔ φ(x̄))`.
    Predicate { name: Symbol, params: Vec<Var>, body: Formula },
    /// `∀x̄ ∀y (f(x̄) = y ↔ φ(x̄, y))`.
    Function { name: Symbol, params: Vec<Var>, result: Var, body: Formula },
    /// `∀y (y = c ↔ ψ(y))`.
    Constant { name: Symbol, result: Var, body: Formula },
    Product { sort: Sort, left: Sort, right: Sort, left_projection: Symbol, right_projection: Symbol },
    Coproduct { sort: Sort, left: Sort, right: Sort, left_injection: Symbol, right_injection: Symbol },
    /// The elements of `parent` satisfying `body(var)`, included by `inclusion`.
    Subsort { sort: Sort, parent: Sort, inclusion: Symbol, var: Var, body: Formula },
    /// Classes of `parent` under `body(vars[0], vars[1])`, reached by `projection`.
    Quotient { sort: Sort, parent: Sort, projection: Symbol, vars: [Var; 2], body: Formula },
}

use ExplicitDefinition as D;

/// Picks `base`, or `base'`, `base''`, … until it avoids every name in `taken`.
fn pick(base: &str, sort: &Sort, taken: &BTreeSet<&str>) -> Var {
    let mut name = String::from(base);
    while taken.contains(name.as_str()) {
        name.push('\'');
    }
    Var::new(&name, sort)
}

fn var_names(f: &Formula) -> BTreeSet<String> {
    f.all_variables().into_iter().map(|v| String::from(v.name.as_str())).collect()
}

fn t(v: &Var) -> Term {
    Term::var(v)
}

fn plain(f: Formula) -> Box<Surface> {
    Box::new(Surface::Plain(f))
}

impl ExplicitDefinition {
    /// The new sort, if this defines one.
    pub fn new_sort(&self) -> Option<&Sort> {
        match self {
            D::Product { sort, .. }
            | D::Coproduct { sort, .. }
            | D::Subsort { sort, .. }
            | D::Quotient { sort, .. } => Some(sort),
            _ => None,
        }
    }

    /// The principal name: the sort for sort constructions, else the symbol.
    pub fn name(&self) -> &str {
        match self {
            D::Predicate { name, .. } | D::Function { name, .. } | D::Constant { name, .. } => name.as_str(),
            _ => self.new_sort().expect("sort construction").as_str(),
        }
    }

    /// Every name this definition introduces.
    pub fn introduced(&self) -> Vec<&str> {
        match self {
            D::Predicate { name, .. } | D::Function { name, .. } | D::Constant { name, .. } => {
                vec![name.as_str()]
            }
            D::Product { sort, left_projection: a, right_projection: b, .. }
            | D::Coproduct { sort, left_injection: a, right_injection: b, .. } => {
                vec![sort.as_str(), a.as_str(), b.as_str()]
            }
            D::Subsort { sort, inclusion: f, .. } | D::Quotient { sort, projection: f, .. } => {
                vec![sort.as_str(), f.as_str()]
            }
        }
    }

    /// Base sorts the definition refers to.
    pub fn base_sorts(&self) -> Vec<&Sort> {
        match self {
            D::Predicate { params, .. } => params.iter().map(|v| &v.sort).collect(),
            D::Function { params, result, .. } => {
                params.iter().chain(core::iter::once(result)).map(|v| &v.sort).collect()
            }
            D::Constant { result, .. } => vec![&result.sort],
            D::Product { left, right, .. } | D::Coproduct { left, right, .. } => vec![left, right],
            D::Subsort { parent, .. } | D::Quotient { parent, .. } => vec![parent],
        }
    }

    /// The defining formula and its parameters, for definitions that have one.
    pub fn defining_formula(&self) -> Option<(&Formula, Vec<&Var>)> {
        match self {
            D::Predicate { params, body, .. } => Some((body, params.iter().collect())),
            D::Function { params, result, body, .. } => {
                Some((body, params.iter().chain(core::iter::once(result)).collect()))
            }
            D::Constant { result, body, .. } => Some((body, vec![result])),
            D::Subsort { var, body, .. } => Some((body, vec![var])),
            D::Quotient { vars, body, .. } => Some((body, vars.iter().collect())),
            D::Product { .. } | D::Coproduct { .. } => None,
        }
    }

    fn declare(&self, sig: &mut Signature) -> Result<(), SignatureError> {
        match self {
            D::Predicate { name, params, .. } => {
                sig.add_predicate(name.clone(), params.iter().map(|v| v.sort.clone()).collect())
            }
            D::Function { name, params, result, .. } => sig.add_function(
                name.clone(),
                params.iter().map(|v| v.sort.clone()).collect(),
                result.sort.clone(),
            ),
            D::Constant { name, result, .. } => sig.add_constant(name.clone(), result.sort.clone()),
            D::Product { sort, left, right, left_projection, right_projection } => {
                sig.add_sort(sort.clone())?;
                sig.add_function(left_projection.clone(), vec![sort.clone()], left.clone())?;
                sig.add_function(right_projection.clone(), vec![sort.clone()], right.clone())
            }
            D::Coproduct { sort, left, right, left_injection, right_injection } => {
                sig.add_sort(sort.clone())?;
                sig.add_function(left_injection.clone(), vec![left.clone()], sort.clone())?;
                sig.add_function(right_injection.clone(), vec![right.clone()], sort.clone())
            }
            D::Subsort { sort, parent, inclusion, .. } => {
                sig.add_sort(sort.clone())?;
                sig.add_function(inclusion.clone(), vec![sort.clone()], parent.clone())
            }
            D::Quotient { sort, parent, projection, .. } => {
                sig.add_sort(sort.clone())?;
                sig.add_function(projection.clone(), vec![parent.clone()], sort.clone())
            }
        }
    }

    /// The defining sentence `δ` over the extended signature.
    pub fn definition_sentence(&self) -> Formula {
        let s = match self {
            D::Predicate { name, params, body } => {
                let atom = Formula::Pred(name.clone(), params.iter().map(t).collect());
                Surface::Plain(Formula::forall_all(params, Formula::iff(atom, body.clone())))
            }
            D::Function { name, params, result, body } => {
                let app = Term::App(name.clone(), params.iter().map(t).collect());
                let mut vars = params.clone();
                vars.push(result.clone());
                Surface::Plain(Formula::forall_all(
                    &vars,
                    Formula::iff(Formula::eq(app, t(result)), body.clone()),
                ))
            }
            D::Constant { name, result, body } => Surface::Plain(Formula::forall(
                result,
                Formula::iff(Formula::eq(t(result), Term::Const(name.clone())), body.clone()),
            )),
            D::Product { sort, left, right, left_projection, right_projection } => {
                let x = Var::new("x", left);
                let y = Var::new("y", right);
                let z = Var::new("z", sort);
                let body = Formula::and(
                    Formula::eq(Term::App(left_projection.clone(), vec![t(&z)]), t(&x)),
                    Formula::eq(Term::App(right_projection.clone(), vec![t(&z)]), t(&y)),
                );
                Surface::Forall(x, Box::new(Surface::Forall(y, Box::new(Surface::ExistsUnique(z, plain(body))))))
            }
            D::Coproduct { sort, left, right, left_injection, right_injection } => {
                let x = Var::new("x", left);
                let y = Var::new("y", right);
                let z = Var::new("z", sort);
                let inj = |f: &Symbol, v: &Var| Term::App(f.clone(), vec![t(v)]);
                let cover = Surface::Forall(
                    z.clone(),
                    Box::new(Surface::Or(
                        Box::new(Surface::ExistsUnique(
                            x.clone(),
                            plain(Formula::eq(inj(left_injection, &x), t(&z))),
                        )),
                        Box::new(Surface::ExistsUnique(
                            y.clone(),
                            plain(Formula::eq(inj(right_injection, &y), t(&z))),
                        )),
                    )),
                );
                let disjoint = Formula::forall(
                    &x,
                    Formula::forall(
                        &y,
                        Formula::not(Formula::eq(inj(left_injection, &x), inj(right_injection, &y))),
                    ),
                );
                Surface::And(Box::new(cover), plain(disjoint))
            }
            D::Subsort { sort, inclusion, var, body, .. } => {
                let z = Var::new("z", sort);
                let z1 = Var::new("z1", sort);
                let z2 = Var::new("z2", sort);
                let inc = |v: &Var| Term::App(inclusion.clone(), vec![t(v)]);
                let image = Formula::forall(
                    var,
                    Formula::iff(body.clone(), Formula::exists(&z, Formula::eq(inc(&z), t(var)))),
                );
                let injective = Formula::forall_all(
                    &[z1.clone(), z2.clone()],
                    Formula::implies(Formula::eq(inc(&z1), inc(&z2)), Formula::eq(t(&z1), t(&z2))),
                );
                Surface::Plain(Formula::and(image, injective))
            }
            D::Quotient { sort, parent, projection, vars, body } => {
                let eps = |v: &Var| Term::App(projection.clone(), vec![t(v)]);
                let kernel = Formula::forall_all(
                    vars,
                    Formula::iff(Formula::eq(eps(&vars[0]), eps(&vars[1])), body.clone()),
                );
                let z = Var::new("z", sort);
                let x = Var::new("x", parent);
                let onto = Formula::forall(&z, Formula::exists(&x, Formula::eq(eps(&x), t(&z))));
                Surface::Plain(Formula::and(kernel, onto))
            }
        };
        expand_unique_exists(&s)
    }

    /// Base-signature sentences a theory must entail for the definition to be legitimate.
    pub fn admissibility_conditions(&self) -> Vec<Formula> {
        match self {
            D::Predicate { .. } | D::Product { .. } | D::Coproduct { .. } => Vec::new(),
            D::Function { params, result, body, .. } => {
                let mut s = Surface::ExistsUnique(result.clone(), plain(body.clone()));
                for p in params.iter().rev() {
                    s = Surface::Forall(p.clone(), Box::new(s));
                }
                vec![expand_unique_exists(&s)]
            }
            D::Constant { result, body, .. } => {
                vec![expand_unique_exists(&Surface::ExistsUnique(result.clone(), plain(body.clone())))]
            }
            D::Subsort { var, body, .. } => vec![Formula::exists(var, body.clone())],
            D::Quotient { vars, body, .. } => {
                let [x1, x2] = vars;
                let mut fresh = FreshVars::avoiding([body]);
                let names = var_names(body);
                let taken: BTreeSet<&str> =
                    names.iter().map(String::as_str).chain([x1.name.as_str(), x2.name.as_str()]).collect();
                let x3 = pick("x3", &x1.sort, &taken);
                let phi = |a: &Var, b: &Var, fresh: &mut FreshVars| {
                    rename(body, &[x1.clone(), x2.clone()], &[a.clone(), b.clone()], fresh)
                };
                let refl = Formula::forall(x1, phi(x1, x1, &mut fresh));
                let symm = Formula::forall_all(
                    &[x1.clone(), x2.clone()],
                    Formula::implies(phi(x1, x2, &mut fresh), phi(x2, x1, &mut fresh)),
                );
                let trans = Formula::forall_all(
                    &[x1.clone(), x2.clone(), x3.clone()],
                    Formula::implies(
                        Formula::and(phi(x1, x2, &mut fresh), phi(x2, &x3, &mut fresh)),
                        phi(x1, &x3, &mut fresh),
                    ),
                );
                vec![refl, symm, trans]
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StepError {
    /// A new name clashes with the base or with another new name.
    NotFresh(String),
    /// A definition refers to a sort outside the base signature.
    NotBaseSort(String),
    /// A defining formula is ill-formed over the base signature.
    IllFormed { definition: String, reason: String },
    /// A defining formula has a free variable that is not a parameter.
    StrayVariable { definition: String, variable: String },
    /// Parameters of one definition share a name and sort.
    RepeatedParameter { definition: String, variable: String },
    /// The step's base is not the theory's signature.
    BaseMismatch,
}

impl fmt::Display for StepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepError::NotFresh(n) => write!(f, "`{n}` is not a fresh name"),
            StepError::NotBaseSort(s) => write!(f, "`{s}` is not a sort of the base signature"),
            StepError::IllFormed { definition, reason } => {
                write!(f, "defining formula of `{definition}`: {reason}")
            }
            StepError::StrayVariable { definition, variable } => {
                write!(f, "defining formula of `{definition}` has free variable `{variable}`")
            }
            StepError::RepeatedParameter { definition, variable } => {
                write!(f, "`{definition}` lists parameter `{variable}` twice")
            }
            StepError::BaseMismatch => write!(f, "step base differs from the theory's signature"),
        }
    }
}

impl core::error::Error for StepError {}

/// A batch of definitions over one base signature.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionStep {
    base: Arc<Signature>,
    added: Vec<ExplicitDefinition>,
    derived: Arc<Signature>,
}

impl ExtensionStep {
    /// Checks freshness, base-sort arities and defining formulas, then
    /// computes the extended signature (base declarations first).
    pub fn new(base: Arc<Signature>, added: Vec<ExplicitDefinition>) -> Result<ExtensionStep, StepError> {
        let mut seen = BTreeSet::new();
        for d in &added {
            for n in d.introduced() {
                if base.lookup(n).is_some() || !seen.insert(n) {
                    return Err(StepError::NotFresh(n.into()));
                }
            }
            for s in d.base_sorts() {
                if !base.has_sort(s) {
                    return Err(StepError::NotBaseSort(s.as_str().into()));
                }
            }
            if let Some((body, params)) = d.defining_formula() {
                let mut distinct = BTreeSet::new();
                for p in &params {
                    if !base.has_sort(&p.sort) {
                        return Err(StepError::NotBaseSort(p.sort.as_str().into()));
                    }
                    if !distinct.insert(*p) {
                        return Err(StepError::RepeatedParameter {
                            definition: d.name().into(),
                            variable: p.name.as_str().into(),
                        });
                    }
                }
                check_formula(&base, body).map_err(|e| StepError::IllFormed {
                    definition: d.name().into(),
                    reason: format!("{e}"),
                })?;
                if let Some(v) = body.free_variables().into_iter().find(|v| !distinct.contains(v)) {
                    return Err(StepError::StrayVariable {
                        definition: d.name().into(),
                        variable: v.name.as_str().into(),
                    });
                }
            }
        }
        let mut derived = (*base).clone();
        for d in &added {
            d.declare(&mut derived).map_err(|e| StepError::NotFresh(format!("{e}")))?;
        }
        Ok(ExtensionStep { base, added, derived: Arc::new(derived) })
    }

    /// The step that adds nothing.
    pub fn empty(base: Arc<Signature>) -> ExtensionStep {
        ExtensionStep { derived: base.clone(), base, added: Vec::new() }
    }

    pub fn base(&self) -> &Arc<Signature> {
        &self.base
    }

    pub fn derived(&self) -> &Arc<Signature> {
        &self.derived
    }

    pub fn added(&self) -> &[ExplicitDefinition] {
        &self.added
    }

    /// The definition introducing `name` (a sort or any other symbol).
    pub fn definition_of(&self, name: &str) -> Option<&ExplicitDefinition> {
        self.added.iter().find(|d| d.introduced().contains(&name))
    }

    /// The construction defining a new sort.
    pub fn sort_definition(&self, sort: &Sort) -> Option<&ExplicitDefinition> {
        self.added.iter().find(|d| d.new_sort() == Some(sort))
    }

    pub fn is_new_sort(&self, sort: &Sort) -> bool {
        self.sort_definition(sort).is_some()
    }

    /// The δ-sentence attached to a new symbol. Function symbols of a sort
    /// construction share the sentence of their sort.
    pub fn delta_for(&self, name: &str) -> Option<Formula> {
        self.definition_of(name).map(ExplicitDefinition::definition_sentence)
    }

    /// One sentence per definition, in definition order.
    pub fn definition_sentences(&self) -> Vec<Formula> {
        self.added.iter().map(ExplicitDefinition::definition_sentence).collect()
    }
}

/// True iff the step adds no sorts.
pub fn is_definitional(s: &ExtensionStep) -> bool {
    s.added.iter().all(|d| d.new_sort().is_none())
}

/// `T⁺ = T ∪ {δ}` over the extended signature.
pub fn extend_theory(t: &Theory, s: &ExtensionStep) -> Result<Theory, StepError> {
    if !t.signature.same_symbols(&s.base) {
        return Err(StepError::BaseMismatch);
    }
    let mut axioms = t.axioms.clone();
    axioms.extend(s.definition_sentences());
    Ok(Theory { signature: s.derived.clone(), axioms })
}

/// Caps for the sorts of the extended signature: base sorts keep their
/// caps; products multiply, coproducts add, subsorts and quotients inherit.
pub fn extended_bound(bound: &Bound, s: &ExtensionStep) -> Bound {
    let mut out = bound.clone();
    for sort in s.base.sorts() {
        out.set(sort, bound.get(sort));
    }
    for d in &s.added {
        let cap = match d {
            D::Product { left, right, .. } => bound.get(left) * bound.get(right),
            D::Coproduct { left, right, .. } => bound.get(left) + bound.get(right),
            D::Subsort { parent, .. } | D::Quotient { parent, .. } => bound.get(parent),
            _ => continue,
        };
        out.set(d.new_sort().expect("sort construction"), cap);
    }
    out
}

/// How one admissibility condition was settled.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConditionStatus {
    /// The condition is an axiom of the theory up to renaming of bound variables.
    Axiom,
    Checked(Entailment),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Finding {
    Syntactic(StepError),
    Admissibility { definition: String, condition: Formula, status: ConditionStatus },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ValidationStatus {
    Valid,
    ValidUpToBound(Bound),
    Invalid,
}

impl fmt::Display for ValidationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationStatus::Valid => write!(f, "Valid"),
            ValidationStatus::ValidUpToBound(b) => write!(f, "ValidUpToBound({b})"),
            ValidationStatus::Invalid => write!(f, "Invalid"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    pub status: ValidationStatus,
}

impl ValidationReport {
    pub fn is_invalid(&self) -> bool {
        self.status == ValidationStatus::Invalid
    }
}

/// Checks the step's base against `t` and every admissibility condition by
/// bounded search for a countermodel.
pub fn validate_step(t: &Theory, s: &ExtensionStep, bound: &Bound) -> ValidationReport {
    let mut findings = Vec::new();
    if !t.signature.same_symbols(&s.base) {
        findings.push(Finding::Syntactic(StepError::BaseMismatch));
        return ValidationReport { findings, status: ValidationStatus::Invalid };
    }
    let mut invalid = false;
    let mut bounded = false;
    for d in &s.added {
        for condition in d.admissibility_conditions() {
            let status = if t.axioms.iter().any(|a| a.alpha_eq(&condition)) {
                ConditionStatus::Axiom
            } else {
                let e = bounded_entails(t, &condition, bound);
                if e.is_refuted() {
                    invalid = true;
                } else {
                    bounded = true;
                }
                ConditionStatus::Checked(e)
            };
            findings.push(Finding::Admissibility { definition: d.name().into(), condition, status });
        }
    }
    let status = if invalid {
        ValidationStatus::Invalid
    } else if bounded {
        ValidationStatus::ValidUpToBound(bound.clone())
    } else {
        ValidationStatus::Valid
    };
    ValidationReport { findings, status }
}
