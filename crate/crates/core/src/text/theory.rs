use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Write;

use super::formula::FormulaParser;
use super::lexer::{lex_line, Cursor, ParseError, Tok, Token};
use crate::syntax::{is_reserved, Signature, Sort, Symbol, Theory};

pub(crate) struct Line {
    pub number: usize,
    pub len: usize,
    pub toks: Vec<Token>,
}

/// Non-empty lines of `text`, tokenized.
pub(crate) fn lines(text: &str) -> Result<Vec<Line>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let toks = lex_line(raw, i + 1)?;
        if !toks.is_empty() {
            out.push(Line { number: i + 1, len: raw.chars().count(), toks });
        }
    }
    Ok(out)
}

pub(crate) fn declared_name<'a>(cur: &mut Cursor<'a>, what: &str) -> Result<&'a str, ParseError> {
    let name = cur.ident(what)?;
    if is_reserved(name) {
        return Err(cur.error(format!("`{name}` is in the reserved namespace")));
    }
    Ok(name)
}

/// `s1 x s2 x … [-> s]`; returns the product part and the optional codomain.
pub(crate) fn arity(cur: &mut Cursor<'_>) -> Result<(Vec<Sort>, Option<Sort>), ParseError> {
    let mut domain = Vec::new();
    if cur.peek() != Some(&Tok::Arrow) {
        domain.push(Sort::new(cur.ident("a sort")?));
        while cur.eat_keyword("x") {
            domain.push(Sort::new(cur.ident("a sort")?));
        }
    }
    let codomain = if cur.eat(&Tok::Arrow) { Some(Sort::new(cur.ident("a sort")?)) } else { None };
    Ok((domain, codomain))
}

fn sig_error(line: &Line, e: impl core::fmt::Display) -> ParseError {
    ParseError::new(line.number, 1, format!("{e}"))
}

/// Reads a theory file. Declarations may appear in any order relative to
/// axioms; axioms are checked against the complete signature.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let lines = lines(text)?;
    let mut sig = Signature::new();
    let mut axiom_lines = Vec::new();
    for line in &lines {
        let mut cur = Cursor::new(&line.toks, line.number, line.len);
        let kw = cur.ident("a declaration keyword")?;
        match kw {
            "sort" => {
                let name = declared_name(&mut cur, "a sort name")?;
                cur.finish()?;
                sig.add_sort(Sort::new(name)).map_err(|e| sig_error(line, e))?;
            }
            "pred" => {
                let name = declared_name(&mut cur, "a predicate name")?;
                cur.expect(&Tok::Colon)?;
                let (dom, cod) = arity(&mut cur)?;
                if dom.is_empty() || cod.is_some() {
                    return Err(ParseError::new(line.number, 1, "malformed predicate arity"));
                }
                cur.finish()?;
                sig.add_predicate(Symbol::new(name), dom).map_err(|e| sig_error(line, e))?;
            }
            "func" => {
                let name = declared_name(&mut cur, "a function name")?;
                cur.expect(&Tok::Colon)?;
                let (dom, cod) = arity(&mut cur)?;
                let Some(cod) = cod.filter(|_| !dom.is_empty()) else {
                    return Err(ParseError::new(line.number, 1, "malformed function arity"));
                };
                cur.finish()?;
                sig.add_function(Symbol::new(name), dom, cod).map_err(|e| sig_error(line, e))?;
            }
            "const" => {
                let name = declared_name(&mut cur, "a constant name")?;
                cur.expect(&Tok::Colon)?;
                let sort = cur.ident("a sort")?;
                cur.finish()?;
                sig.add_constant(Symbol::new(name), Sort::new(sort)).map_err(|e| sig_error(line, e))?;
            }
            "axiom" => axiom_lines.push(line),
            other => {
                return Err(ParseError::new(
                    line.number,
                    1,
                    format!("unknown declaration `{other}`"),
                ))
            }
        }
    }
    if sig.sorts().is_empty() {
        return Err(ParseError::new(1, 1, "a theory needs at least one sort"));
    }
    let mut axioms = Vec::new();
    for line in axiom_lines {
        let mut cur = Cursor::new(&line.toks, line.number, line.len);
        cur.expect_keyword("axiom")?;
        let (l, c) = cur.position();
        let phi = FormulaParser::new(&sig).parse(&mut cur)?;
        if let Some(v) = phi.free_variables().into_iter().next() {
            return Err(ParseError::new(l, c, format!("free variable `{}` in an axiom", v.name)));
        }
        axioms.push(phi);
    }
    Ok(Theory { signature: Arc::new(sig), axioms })
}

/// Writes the declarations of a signature in theory-file syntax.
pub fn print_signature(sig: &Signature, out: &mut String) {
    for s in sig.sorts() {
        let _ = writeln!(out, "sort {s}");
    }
    let product = |sorts: &[Sort]| {
        sorts.iter().map(Sort::as_str).collect::<Vec<_>>().join(" x ")
    };
    for p in sig.predicates() {
        let _ = writeln!(out, "pred {} : {}", p.name, product(&p.arity));
    }
    for f in sig.functions() {
        let _ = writeln!(out, "func {} : {} -> {}", f.name, product(&f.domain), f.codomain);
    }
    for c in sig.constants() {
        let _ = writeln!(out, "const {} : {}", c.name, c.sort);
    }
}

pub fn print_theory(t: &Theory) -> String {
    let mut out = String::new();
    print_signature(&t.signature, &mut out);
    for a in &t.axioms {
        let _ = writeln!(out, "axiom {a}");
    }
    out
}
