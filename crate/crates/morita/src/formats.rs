//! Model and morphism files.
//!
//! A model file lists one interpretation per line, in the syntax produced by
//! `FiniteStructure::write_model`:
//!
//! ```text
//! carrier s = {s_0, s_1}
//! pred p = {(s_0)}
//! func f = {(s_0) -> s_1, (s_1) -> s_1}
//! const c = s_0
//! ```
//!
//! A morphism file has one `map <sort>: <element> -> <element>` line per
//! source element.

use std::collections::BTreeMap;
use std::sync::Arc;

use morita_core::morphisms::Morphism;
use morita_core::structures::{Element, FiniteStructure, StructureBuilder};
use morita_core::syntax::{Signature, Sort, SymbolRef};
use morita_core::text::{lex_line, Cursor, ParseError, Tok};

fn element(cur: &mut Cursor<'_>) -> Result<Element, ParseError> {
    let (line, column) = cur.position();
    let name = cur.ident("an element")?;
    let unary = |cur: &mut Cursor<'_>, wrap: fn(Box<Element>) -> Element| -> Result<Element, ParseError> {
        cur.expect(&Tok::LParen)?;
        let inner = element(cur)?;
        cur.expect(&Tok::RParen)?;
        Ok(wrap(Box::new(inner)))
    };
    match name {
        "pair" if cur.peek() == Some(&Tok::LParen) => {
            cur.expect(&Tok::LParen)?;
            let a = element(cur)?;
            cur.expect(&Tok::Comma)?;
            let b = element(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(Element::pair(a, b))
        }
        "inl" if cur.peek() == Some(&Tok::LParen) => unary(cur, Element::InjL),
        "inr" if cur.peek() == Some(&Tok::LParen) => unary(cur, Element::InjR),
        "sub" if cur.peek() == Some(&Tok::LParen) => unary(cur, Element::Sub),
        "class" if cur.peek() == Some(&Tok::LParen) => unary(cur, Element::Class),
        atom => {
            let parsed = atom.rsplit_once('_').and_then(|(s, i)| Some((s, i.parse::<u32>().ok()?)));
            let Some((sort, index)) = parsed.filter(|(s, _)| !s.is_empty()) else {
                return Err(ParseError::new(line, column, format!("`{atom}` is not an element; atoms are written sort_index")));
            };
            Ok(Element::atom(&Sort::new(sort), index))
        }
    }
}

fn tuple(cur: &mut Cursor<'_>) -> Result<Vec<Element>, ParseError> {
    cur.expect(&Tok::LParen)?;
    let mut out = Vec::new();
    if cur.eat(&Tok::RParen) {
        return Ok(out);
    }
    loop {
        out.push(element(cur)?);
        if cur.eat(&Tok::RParen) {
            return Ok(out);
        }
        cur.expect(&Tok::Comma)?;
    }
}

/// `{item, item, …}`.
fn set<T>(cur: &mut Cursor<'_>, mut item: impl FnMut(&mut Cursor<'_>) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
    cur.expect(&Tok::LBrace)?;
    let mut out = Vec::new();
    if cur.eat(&Tok::RBrace) {
        return Ok(out);
    }
    loop {
        out.push(item(cur)?);
        if cur.eat(&Tok::RBrace) {
            return Ok(out);
        }
        cur.expect(&Tok::Comma)?;
    }
}

/// Reads a model of `sig`. Every symbol must be interpreted.
pub fn parse_model(text: &str, sig: &Arc<Signature>) -> Result<FiniteStructure, ParseError> {
    let mut b = StructureBuilder::new(sig.clone());
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let toks = lex_line(raw, number)?;
        if toks.is_empty() {
            continue;
        }
        last_line = number;
        let mut cur = Cursor::new(&toks, number, raw.chars().count());
        let kw = cur.ident("`carrier`, `pred`, `func` or `const`")?;
        let (line, column) = cur.position();
        let name = cur.ident("a symbol")?;
        cur.expect(&Tok::Equals)?;
        let kind = sig.lookup(name);
        let wrong = |what: &str| ParseError::new(line, column, format!("`{name}` is not a {what} of the signature"));
        let built = match kw {
            "carrier" => {
                if !matches!(kind, Some(SymbolRef::Sort(_))) {
                    return Err(wrong("sort"));
                }
                let elems = set(&mut cur, element)?;
                b.carrier(name, elems).map(|_| ())
            }
            "pred" => {
                if !matches!(kind, Some(SymbolRef::Predicate(_))) {
                    return Err(wrong("predicate"));
                }
                let tuples = set(&mut cur, tuple)?;
                b.predicate(name, tuples).map(|_| ())
            }
            "func" => {
                if !matches!(kind, Some(SymbolRef::Function(_))) {
                    return Err(wrong("function"));
                }
                let entries = set(&mut cur, |c| {
                    let args = tuple(c)?;
                    c.expect(&Tok::Arrow)?;
                    Ok((args, element(c)?))
                })?;
                b.function(name, entries).map(|_| ())
            }
            "const" => {
                if !matches!(kind, Some(SymbolRef::Constant(_))) {
                    return Err(wrong("constant"));
                }
                let e = element(&mut cur)?;
                b.constant(name, e).map(|_| ())
            }
            other => return Err(ParseError::new(number, 1, format!("unknown model line `{other}`"))),
        };
        built.map_err(|e| ParseError::new(number, 1, e.to_string()))?;
        cur.finish()?;
    }
    b.build().map_err(|e| ParseError::new(last_line, 1, e.to_string()))
}

pub fn print_model(m: &FiniteStructure) -> String {
    let mut out = String::new();
    m.write_model(&mut out);
    out
}

/// Reads a morphism file between two structures over one signature.
pub fn parse_morphism(
    text: &str,
    source: &Arc<FiniteStructure>,
    target: &Arc<FiniteStructure>,
) -> Result<Morphism, ParseError> {
    let mut maps: BTreeMap<Sort, BTreeMap<Element, Element>> = BTreeMap::new();
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let toks = lex_line(raw, number)?;
        if toks.is_empty() {
            continue;
        }
        last_line = number;
        let mut cur = Cursor::new(&toks, number, raw.chars().count());
        cur.expect_keyword("map")?;
        let (line, column) = cur.position();
        let sort = Sort::new(cur.ident("a sort")?);
        if !source.signature().has_sort(&sort) {
            return Err(ParseError::new(line, column, format!("unknown sort `{sort}`")));
        }
        cur.expect(&Tok::Colon)?;
        let a = element(&mut cur)?;
        cur.expect(&Tok::Arrow)?;
        let b = element(&mut cur)?;
        cur.finish()?;
        if maps.entry(sort).or_default().insert(a.clone(), b).is_some() {
            return Err(ParseError::new(number, 1, format!("`{a}` mapped twice")));
        }
    }
    for s in source.signature().sorts() {
        maps.entry(s.clone()).or_default();
    }
    Morphism::from_elements(source.clone(), target.clone(), &maps).map_err(|e| ParseError::new(last_line, 1, e.to_string()))
}

pub fn print_morphism(h: &Morphism) -> String {
    h.to_string()
}
