//! Tarski satisfaction over flat cell vectors.
//!
//! Formulas are compiled once against a signature (symbols become table
//! indices, variables become slots) and then evaluated many times. The same
//! evaluator runs on partial structures in Kleene three-valued logic.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::element::Element;
use super::layout::Layout;
use super::structure::FiniteStructure;
use crate::syntax::{check_formula, Formula, Signature, SyntaxError, Term, Theory, Var};

/// Read access to a possibly partial interpretation.
pub trait Interp {
    fn layout(&self) -> &Layout;
    fn cell(&self, pos: usize) -> Option<u32>;
}

impl Interp for FiniteStructure {
    fn layout(&self) -> &Layout {
        FiniteStructure::layout(self)
    }
    #[inline]
    fn cell(&self, pos: usize) -> Option<u32> {
        Some(self.cells()[pos])
    }
}

/// A structure under construction: `None` marks an undetermined cell.
pub struct Partial<'a> {
    pub layout: &'a Layout,
    pub cells: &'a [Option<u32>],
}

impl Interp for Partial<'_> {
    fn layout(&self) -> &Layout {
        self.layout
    }
    #[inline]
    fn cell(&self, pos: usize) -> Option<u32> {
        self.cells[pos]
    }
}

#[derive(Clone, Debug)]
enum CTerm {
    Var(usize),
    Const(usize),
    App(usize, Box<[CTerm]>),
}

#[derive(Clone, Debug)]
enum CFormula {
    Eq(CTerm, CTerm),
    Pred(usize, Box<[CTerm]>),
    Not(Box<CFormula>),
    And(Box<CFormula>, Box<CFormula>),
    Or(Box<CFormula>, Box<CFormula>),
    Implies(Box<CFormula>, Box<CFormula>),
    Iff(Box<CFormula>, Box<CFormula>),
    Forall(usize, usize, Box<CFormula>),
    Exists(usize, usize, Box<CFormula>),
}

/// A formula compiled against a fixed signature.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: CFormula,
    slots: Vec<Var>,
    signature: Arc<Signature>,
}

struct Compiler<'s> {
    sig: &'s Signature,
    slots: Vec<Var>,
}

impl Compiler<'_> {
    fn slot(&mut self, v: &Var) -> usize {
        match self.slots.iter().position(|w| w == v) {
            Some(i) => i,
            None => {
                self.slots.push(v.clone());
                self.slots.len() - 1
            }
        }
    }

    fn term(&mut self, t: &Term) -> CTerm {
        match t {
            Term::Var(v) => CTerm::Var(self.slot(v)),
            Term::Const(c) => CTerm::Const(self.sig.constant(c.as_str()).expect("checked").0),
            Term::App(f, args) => CTerm::App(
                self.sig.function(f.as_str()).expect("checked").0,
                args.iter().map(|a| self.term(a)).collect(),
            ),
        }
    }

    fn formula(&mut self, phi: &Formula) -> CFormula {
        let b = |x: CFormula| Box::new(x);
        match phi {
            Formula::Eq(a, c) => CFormula::Eq(self.term(a), self.term(c)),
            Formula::Pred(p, args) => CFormula::Pred(
                self.sig.predicate(p.as_str()).expect("checked").0,
                args.iter().map(|a| self.term(a)).collect(),
            ),
            Formula::Not(a) => CFormula::Not(b(self.formula(a))),
            Formula::And(x, y) => CFormula::And(b(self.formula(x)), b(self.formula(y))),
            Formula::Or(x, y) => CFormula::Or(b(self.formula(x)), b(self.formula(y))),
            Formula::Implies(x, y) => CFormula::Implies(b(self.formula(x)), b(self.formula(y))),
            Formula::Iff(x, y) => CFormula::Iff(b(self.formula(x)), b(self.formula(y))),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let slot = self.slot(v);
                let sort = self.sig.sort_index(&v.sort).expect("checked");
                let body = b(self.formula(body));
                if matches!(phi, Formula::Forall(..)) {
                    CFormula::Forall(slot, sort, body)
                } else {
                    CFormula::Exists(slot, sort, body)
                }
            }
        }
    }
}

impl Compiled {
    pub fn new(signature: &Arc<Signature>, phi: &Formula) -> Result<Compiled, SyntaxError> {
        check_formula(signature, phi)?;
        let mut c = Compiler { sig: signature, slots: Vec::new() };
        let root = c.formula(phi);
        Ok(Compiled { root, slots: c.slots, signature: signature.clone() })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    /// Number of variable slots an environment needs.
    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, v: &Var) -> Option<usize> {
        self.slots.iter().position(|w| w == v)
    }

    /// A fresh environment with every slot at 0.
    pub fn env(&self) -> Vec<u32> {
        vec![0; self.slots.len()]
    }

    /// Two-valued evaluation on a complete structure.
    pub fn eval(&self, m: &FiniteStructure, env: &mut [u32]) -> bool {
        eval3(&self.root, m, env).expect("complete structure")
    }

    /// Kleene evaluation on a partial structure; `None` means undetermined.
    pub fn eval_partial<I: Interp>(&self, m: &I, env: &mut [u32]) -> Option<bool> {
        eval3(&self.root, m, env)
    }
}

#[inline]
fn term3<I: Interp>(t: &CTerm, m: &I, env: &[u32]) -> Option<u32> {
    match t {
        CTerm::Var(s) => Some(env[*s]),
        CTerm::Const(c) => m.cell(*c),
        CTerm::App(f, args) => {
            let table = &m.layout().functions[*f];
            let mut pos = table.base;
            for (a, stride) in args.iter().zip(&table.strides) {
                pos += (term3(a, m, env)? * stride) as usize;
            }
            m.cell(pos)
        }
    }
}

fn eval3<I: Interp>(phi: &CFormula, m: &I, env: &mut [u32]) -> Option<bool> {
    match phi {
        CFormula::Eq(a, b) => {
            let x = term3(a, m, env)?;
            Some(x == term3(b, m, env)?)
        }
        CFormula::Pred(p, args) => {
            let table = &m.layout().predicates[*p];
            let mut pos = table.base;
            for (a, stride) in args.iter().zip(&table.strides) {
                pos += (term3(a, m, env)? * stride) as usize;
            }
            m.cell(pos).map(|v| v == 1)
        }
        CFormula::Not(a) => eval3(a, m, env).map(|b| !b),
        CFormula::And(a, b) => match eval3(a, m, env) {
            Some(false) => Some(false),
            Some(true) => eval3(b, m, env),
            None => match eval3(b, m, env) {
                Some(false) => Some(false),
                _ => None,
            },
        },
        CFormula::Or(a, b) => match eval3(a, m, env) {
            Some(true) => Some(true),
            Some(false) => eval3(b, m, env),
            None => match eval3(b, m, env) {
                Some(true) => Some(true),
                _ => None,
            },
        },
        CFormula::Implies(a, b) => match eval3(a, m, env) {
            Some(false) => Some(true),
            Some(true) => eval3(b, m, env),
            None => match eval3(b, m, env) {
                Some(true) => Some(true),
                _ => None,
            },
        },
        CFormula::Iff(a, b) => {
            let x = eval3(a, m, env)?;
            eval3(b, m, env).map(|y| x == y)
        }
        CFormula::Forall(slot, sort, body) => {
            let saved = env[*slot];
            let mut result = Some(true);
            for i in 0..m.layout().sizes[*sort] {
                env[*slot] = i;
                match eval3(body, m, env) {
                    Some(true) => {}
                    Some(false) => {
                        result = Some(false);
                        break;
                    }
                    None => result = None,
                }
            }
            env[*slot] = saved;
            result
        }
        CFormula::Exists(slot, sort, body) => {
            let saved = env[*slot];
            let mut result = Some(false);
            for i in 0..m.layout().sizes[*sort] {
                env[*slot] = i;
                match eval3(body, m, env) {
                    Some(false) => {}
                    Some(true) => {
                        result = Some(true);
                        break;
                    }
                    None => result = None,
                }
            }
            env[*slot] = saved;
            result
        }
    }
}

/// A finite assignment of elements to variables.
pub type Assignment = BTreeMap<Var, Element>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalError {
    Syntax(SyntaxError),
    Unassigned(String),
    NotInCarrier(String),
    SignatureMismatch,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Syntax(e) => e.fmt(f),
            EvalError::Unassigned(v) => write!(f, "variable `{v}` has no value"),
            EvalError::NotInCarrier(e) => write!(f, "`{e}` is not in the carrier of its variable's sort"),
            EvalError::SignatureMismatch => write!(f, "structure and theory have different signatures"),
        }
    }
}

impl core::error::Error for EvalError {}

fn load_env(
    m: &FiniteStructure,
    c: &Compiled,
    free: impl IntoIterator<Item = Var>,
    rho: &Assignment,
) -> Result<Vec<u32>, EvalError> {
    let mut env = c.env();
    for v in free {
        let e = rho.get(&v).ok_or_else(|| EvalError::Unassigned(v.name.as_str().into()))?;
        let sort = m.signature().sort_index(&v.sort).ok_or(EvalError::SignatureMismatch)?;
        let idx = m.index_of(sort, e).ok_or_else(|| EvalError::NotInCarrier(format!("{e}")))?;
        if let Some(s) = c.slot(&v) {
            env[s] = idx;
        }
    }
    Ok(env)
}

/// `A ⊨ φ[ρ]`.
pub fn satisfies(m: &FiniteStructure, phi: &Formula, rho: &Assignment) -> Result<bool, EvalError> {
    let c = Compiled::new(m.signature(), phi).map_err(EvalError::Syntax)?;
    let mut env = load_env(m, &c, phi.free_variables(), rho)?;
    Ok(c.eval(m, &mut env))
}

/// The value of a term under an assignment.
pub fn eval_term(m: &FiniteStructure, t: &Term, rho: &Assignment) -> Result<Element, EvalError> {
    let sig = m.signature();
    let sort = crate::syntax::sort_of_term(sig, t).map_err(EvalError::Syntax)?;
    let result = Var::new("_result", &sort);
    let phi = Formula::eq(Term::Var(result.clone()), t.clone());
    let c = Compiled::new(sig, &phi).map_err(EvalError::Syntax)?;
    let mut vars = alloc::collections::BTreeSet::new();
    t.collect_vars(&mut vars);
    let mut env = load_env(m, &c, vars, rho)?;
    let s = sig.sort_index(&sort).expect("checked");
    let slot = c.slot(&result).expect("present");
    for i in 0..m.sizes()[s] {
        env[slot] = i;
        if c.eval(m, &mut env) {
            return Ok(m.element(s, i).clone());
        }
    }
    unreachable!("a total term has a value")
}

/// Axioms of a theory compiled for repeated model checking.
#[derive(Clone, Debug)]
pub struct CompiledTheory {
    pub signature: Arc<Signature>,
    pub axioms: Vec<Compiled>,
}

impl CompiledTheory {
    pub fn new(t: &Theory) -> Result<CompiledTheory, SyntaxError> {
        let axioms = t.axioms.iter().map(|a| Compiled::new(&t.signature, a)).collect::<Result<_, _>>()?;
        Ok(CompiledTheory { signature: t.signature.clone(), axioms })
    }

    /// Index of the first axiom `m` violates.
    pub fn first_violation(&self, m: &FiniteStructure) -> Option<usize> {
        let aligned;
        let m = if Arc::ptr_eq(m.signature(), &self.signature) || m.signature() == &self.signature {
            m
        } else {
            aligned = m.reduct(&self.signature).expect("structure over the theory's signature");
            &aligned
        };
        self.axioms.iter().position(|a| {
            let mut env = a.env();
            !a.eval(m, &mut env)
        })
    }

    pub fn is_model(&self, m: &FiniteStructure) -> bool {
        self.first_violation(m).is_none()
    }
}

/// Every axiom of `t` holds in `m`.
///
/// # Panics
/// If `m` does not interpret every symbol of `t`'s signature.
pub fn is_model(m: &FiniteStructure, t: &Theory) -> bool {
    CompiledTheory::new(t).expect("axioms sort-check").is_model(m)
}
