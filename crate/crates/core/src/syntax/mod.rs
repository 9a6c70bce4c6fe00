//! Many-sorted signatures, terms, formulas and theories.

mod check;
mod formula;
mod fresh;
mod names;
mod print;
mod signature;
mod simplify;

pub use check::{check_formula, check_sentence, sort_of_term, SyntaxError};
pub use formula::{v, Formula, Term, Theory, VarMap};
pub use fresh::{
    exists_unique, expand_unique_exists, match_exists_unique, rename, substitute, substitute_term,
    FreshVars, Surface,
};
pub use names::{is_reserved, Sort, Symbol, Var, RESERVED_PREFIX};
pub use signature::{ConstantDecl, FunctionDecl, PredicateDecl, Signature, SignatureError, SymbolRef};
pub use simplify::simplify_truth;
