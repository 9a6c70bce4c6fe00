//! Line-oriented text formats for formulas, theories and extension steps.

mod extension;
mod formula;
mod lexer;
mod theory;

pub use extension::{parse_extension, print_extension};
pub use formula::{parse_formula, FormulaParser};
pub use lexer::{lex_line, Cursor, ParseError, Tok, Token};
pub use theory::{parse_theory, print_signature, print_theory};
