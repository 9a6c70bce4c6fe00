use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use super::lexer::{lex_line, Cursor, ParseError, Tok};
use crate::syntax::{
    check_formula, expand_unique_exists, is_reserved, sort_of_term, Formula, Signature, Sort,
    Surface, Symbol, Term, Var,
};

/// Parses formulas against a signature, with optional pre-bound free variables.
pub struct FormulaParser<'s> {
    sig: &'s Signature,
    scope: Vec<Var>,
}

impl<'s> FormulaParser<'s> {
    pub fn new(sig: &'s Signature) -> Self {
        FormulaParser { sig, scope: Vec::new() }
    }

    /// Makes `vars` available as free variables.
    pub fn with_free(sig: &'s Signature, vars: &[Var]) -> Self {
        FormulaParser { sig, scope: vars.to_vec() }
    }

    /// Parses the rest of `cur` as one formula and expands `exists1`.
    pub fn parse(&mut self, cur: &mut Cursor<'_>) -> Result<Formula, ParseError> {
        let (line, column) = cur.position();
        let s = self.iff(cur)?;
        cur.finish()?;
        let phi = expand_unique_exists(&s);
        check_formula(self.sig, &phi).map_err(|e| ParseError::new(line, column, format!("{e}")))?;
        Ok(phi)
    }

    fn iff(&mut self, cur: &mut Cursor<'_>) -> Result<Surface, ParseError> {
        let a = self.implies(cur)?;
        if cur.eat(&Tok::DoubleArrow) {
            let b = self.iff(cur)?;
            return Ok(Surface::Iff(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn implies(&mut self, cur: &mut Cursor<'_>) -> Result<Surface, ParseError> {
        let a = self.or(cur)?;
        if cur.eat(&Tok::Arrow) {
            let b = self.implies(cur)?;
            return Ok(Surface::Implies(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn or(&mut self, cur: &mut Cursor<'_>) -> Result<Surface, ParseError> {
        let mut a = self.and(cur)?;
        while cur.eat(&Tok::Bar) {
            let b = self.and(cur)?;
            a = Surface::Or(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn and(&mut self, cur: &mut Cursor<'_>) -> Result<Surface, ParseError> {
        let mut a = self.unary(cur)?;
        while cur.eat(&Tok::Amp) {
            let b = self.unary(cur)?;
            a = Surface::And(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn unary(&mut self, cur: &mut Cursor<'_>) -> Result<Surface, ParseError> {
        if cur.eat(&Tok::Tilde) {
            return Ok(Surface::Not(Box::new(self.unary(cur)?)));
        }
        if cur.eat(&Tok::LParen) {
            let inner = self.iff(cur)?;
            cur.expect(&Tok::RParen)?;
            return Ok(inner);
        }
        for kw in ["forall", "exists", "exists1"] {
            if matches!(cur.peek(), Some(Tok::Ident(s)) if s == kw)
                && matches!(cur.peek_at(1), Some(Tok::Ident(_)))
                && matches!(cur.peek_at(2), Some(Tok::Ident(_)))
            {
                cur.advance();
                return self.quantifier(kw, cur);
            }
        }
        self.atom(cur)
    }

    fn quantifier(&mut self, kw: &str, cur: &mut Cursor<'_>) -> Result<Surface, ParseError> {
        let sort_name = cur.ident("a sort")?;
        let sort = Sort::new(sort_name);
        if !self.sig.has_sort(&sort) {
            return Err(cur.error(format!("unknown sort `{sort_name}`")));
        }
        let name = cur.ident("a variable")?;
        if is_reserved(name) {
            return Err(cur.error(format!("`{name}` is in the reserved namespace")));
        }
        cur.expect(&Tok::Dot)?;
        let v = Var::new(name, &sort);
        self.scope.push(v.clone());
        let body = self.iff(cur);
        self.scope.pop();
        let body = Box::new(body?);
        Ok(match kw {
            "forall" => Surface::Forall(v, body),
            "exists" => Surface::Exists(v, body),
            _ => Surface::ExistsUnique(v, body),
        })
    }

    fn atom(&mut self, cur: &mut Cursor<'_>) -> Result<Surface, ParseError> {
        if let (Some(Tok::Ident(name)), Some(Tok::LParen)) = (cur.peek(), cur.peek_at(1)) {
            if self.sig.predicate(name).is_some() && self.lookup_var(name).is_none() {
                cur.advance();
                let args = self.args(cur)?;
                return Ok(Surface::Plain(Formula::Pred(Symbol::new(name), args)));
            }
        }
        let (line, column) = cur.position();
        let lhs = self.term(cur)?;
        if !cur.eat(&Tok::Equals) {
            return Err(cur.unexpected("`=` or a predicate application"));
        }
        let rhs = self.term(cur)?;
        let sl = sort_of_term(self.sig, &lhs).map_err(|e| ParseError::new(line, column, format!("{e}")))?;
        let sr = sort_of_term(self.sig, &rhs).map_err(|e| ParseError::new(line, column, format!("{e}")))?;
        if sl != sr {
            return Err(ParseError::new(
                line,
                column,
                format!("equation between sorts `{sl}` and `{sr}`"),
            ));
        }
        Ok(Surface::Plain(Formula::Eq(lhs, rhs)))
    }

    fn args(&mut self, cur: &mut Cursor<'_>) -> Result<Vec<Term>, ParseError> {
        cur.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if cur.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.term(cur)?);
            if cur.eat(&Tok::RParen) {
                return Ok(args);
            }
            cur.expect(&Tok::Comma)?;
        }
    }

    fn lookup_var(&self, name: &str) -> Option<&Var> {
        self.scope.iter().rev().find(|v| v.name.as_str() == name)
    }

    fn term(&mut self, cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
        let (line, column) = cur.position();
        let name = cur.ident("a term")?;
        if cur.peek() == Some(&Tok::LParen) {
            if self.sig.function(name).is_none() {
                return Err(ParseError::new(line, column, format!("unknown function `{name}`")));
            }
            let args = self.args(cur)?;
            return Ok(Term::App(Symbol::new(name), args));
        }
        if let Some(v) = self.lookup_var(name) {
            return Ok(Term::Var(v.clone()));
        }
        if self.sig.constant(name).is_some() {
            return Ok(Term::Const(Symbol::new(name)));
        }
        Err(ParseError::new(line, column, format!("unbound variable or unknown constant `{name}`")))
    }
}

/// Parses a single formula written on one line.
pub fn parse_formula(sig: &Signature, free: &[Var], text: &str) -> Result<Formula, ParseError> {
    let toks = lex_line(text, 1)?;
    let mut cur = Cursor::new(&toks, 1, text.chars().count());
    FormulaParser::with_free(sig, free).parse(&mut cur)
}
