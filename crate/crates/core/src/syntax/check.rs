use alloc::string::String;
use core::fmt;

use super::formula::{Formula, Term};
use super::names::Sort;
use super::signature::{Signature, SignatureError};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SyntaxError {
    UnknownSymbol(String),
    UnknownSort(String),
    ArityMismatch { symbol: String, expected: usize, found: usize },
    SortMismatch { context: String, expected: String, found: String },
    FreeVariable(String),
    Signature(SignatureError),
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxError::UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            SyntaxError::UnknownSort(s) => write!(f, "unknown sort `{s}`"),
            SyntaxError::ArityMismatch { symbol, expected, found } => {
                write!(f, "`{symbol}` takes {expected} argument(s), got {found}")
            }
            SyntaxError::SortMismatch { context, expected, found } => {
                write!(f, "sort mismatch in {context}: expected `{expected}`, found `{found}`")
            }
            SyntaxError::FreeVariable(v) => write!(f, "free variable `{v}` in a sentence"),
            SyntaxError::Signature(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for SyntaxError {}

fn mismatch(context: &str, expected: &Sort, found: &Sort) -> SyntaxError {
    SyntaxError::SortMismatch {
        context: context.into(),
        expected: expected.as_str().into(),
        found: found.as_str().into(),
    }
}

/// The sort of a term. Variables carry their sort, so no context is needed
/// beyond the signature.
pub fn sort_of_term(sig: &Signature, t: &Term) -> Result<Sort, SyntaxError> {
    match t {
        Term::Var(v) => {
            if sig.has_sort(&v.sort) {
                Ok(v.sort.clone())
            } else {
                Err(SyntaxError::UnknownSort(v.sort.as_str().into()))
            }
        }
        Term::Const(c) => sig
            .constant(c.as_str())
            .map(|(_, d)| d.sort.clone())
            .ok_or_else(|| SyntaxError::UnknownSymbol(c.as_str().into())),
        Term::App(f, args) => {
            let (_, decl) =
                sig.function(f.as_str()).ok_or_else(|| SyntaxError::UnknownSymbol(f.as_str().into()))?;
            if decl.domain.len() != args.len() {
                return Err(SyntaxError::ArityMismatch {
                    symbol: f.as_str().into(),
                    expected: decl.domain.len(),
                    found: args.len(),
                });
            }
            for (a, want) in args.iter().zip(&decl.domain) {
                let got = sort_of_term(sig, a)?;
                if &got != want {
                    return Err(mismatch(f.as_str(), want, &got));
                }
            }
            Ok(decl.codomain.clone())
        }
    }
}

/// Sort-checks a formula that may have free variables.
pub fn check_formula(sig: &Signature, phi: &Formula) -> Result<(), SyntaxError> {
    match phi {
        Formula::Eq(a, b) => {
            let sa = sort_of_term(sig, a)?;
            let sb = sort_of_term(sig, b)?;
            if sa != sb {
                return Err(mismatch("equation", &sa, &sb));
            }
            Ok(())
        }
        Formula::Pred(p, args) => {
            let (_, decl) =
                sig.predicate(p.as_str()).ok_or_else(|| SyntaxError::UnknownSymbol(p.as_str().into()))?;
            if decl.arity.len() != args.len() {
                return Err(SyntaxError::ArityMismatch {
                    symbol: p.as_str().into(),
                    expected: decl.arity.len(),
                    found: args.len(),
                });
            }
            for (a, want) in args.iter().zip(&decl.arity) {
                let got = sort_of_term(sig, a)?;
                if &got != want {
                    return Err(mismatch(p.as_str(), want, &got));
                }
            }
            Ok(())
        }
        Formula::Not(a) => check_formula(sig, a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            check_formula(sig, a)?;
            check_formula(sig, b)
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            if !sig.has_sort(&v.sort) {
                return Err(SyntaxError::UnknownSort(v.sort.as_str().into()));
            }
            check_formula(sig, body)
        }
    }
}

/// Sort-checks a closed formula.
pub fn check_sentence(sig: &Signature, phi: &Formula) -> Result<(), SyntaxError> {
    check_formula(sig, phi)?;
    match phi.free_variables().into_iter().next() {
        Some(v) => Err(SyntaxError::FreeVariable(v.name.as_str().into())),
        None => Ok(()),
    }
}
