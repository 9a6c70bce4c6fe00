use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Write;

use super::formula::FormulaParser;
use super::lexer::{Cursor, ParseError, Tok};
use super::theory::{arity, declared_name, lines};
use crate::extensions::{ExplicitDefinition, ExtensionStep};
use crate::syntax::{rename, Formula, FreshVars, Signature, Sort, Symbol, Var};

/// Parameter names: `x1..xn`, then `y` for the value of a function.
fn numbered(sorts: &[Sort]) -> Vec<Var> {
    sorts.iter().enumerate().map(|(i, s)| Var::new(&format!("x{}", i + 1), s)).collect()
}

fn body(cur: &mut Cursor<'_>, base: &Signature, params: &[Var]) -> Result<Formula, ParseError> {
    FormulaParser::with_free(base, params).parse(cur)
}

fn sort_name(cur: &mut Cursor<'_>) -> Result<Sort, ParseError> {
    Ok(Sort::new(cur.ident("a sort")?))
}

fn symbol(cur: &mut Cursor<'_>, what: &str) -> Result<Symbol, ParseError> {
    Ok(Symbol::new(declared_name(cur, what)?))
}

fn definition(cur: &mut Cursor<'_>, base: &Signature) -> Result<ExplicitDefinition, ParseError> {
    cur.expect_keyword("define")?;
    let kind = cur.ident("`pred`, `func`, `const` or `sort`")?;
    match kind {
        "pred" => {
            let name = symbol(cur, "a predicate name")?;
            cur.expect(&Tok::Colon)?;
            let (dom, cod) = arity(cur)?;
            if dom.is_empty() || cod.is_some() {
                return Err(cur.error("malformed predicate arity"));
            }
            cur.expect(&Tok::Define)?;
            let params = numbered(&dom);
            let body = body(cur, base, &params)?;
            Ok(ExplicitDefinition::Predicate { name, params, body })
        }
        "func" => {
            let name = symbol(cur, "a function name")?;
            cur.expect(&Tok::Colon)?;
            let (dom, cod) = arity(cur)?;
            let Some(cod) = cod.filter(|_| !dom.is_empty()) else {
                return Err(cur.error("malformed function arity"));
            };
            cur.expect(&Tok::Define)?;
            let params = numbered(&dom);
            let result = Var::new("y", &cod);
            let mut scope = params.clone();
            scope.push(result.clone());
            let body = body(cur, base, &scope)?;
            Ok(ExplicitDefinition::Function { name, params, result, body })
        }
        "const" => {
            let name = symbol(cur, "a constant name")?;
            cur.expect(&Tok::Colon)?;
            let sort = sort_name(cur)?;
            cur.expect(&Tok::Define)?;
            let result = Var::new("y", &sort);
            let body = body(cur, base, core::slice::from_ref(&result))?;
            Ok(ExplicitDefinition::Constant { name, result, body })
        }
        "sort" => {
            let sort = Sort::new(declared_name(cur, "a sort name")?);
            cur.expect(&Tok::Equals)?;
            let construction = cur.ident("`product`, `coproduct`, `subsort` or `quotient`")?;
            match construction {
                "product" | "coproduct" => {
                    let left = sort_name(cur)?;
                    let right = sort_name(cur)?;
                    cur.expect_keyword("with")?;
                    let a = symbol(cur, "a function name")?;
                    let b = symbol(cur, "a function name")?;
                    cur.finish()?;
                    Ok(if construction == "product" {
                        ExplicitDefinition::Product { sort, left, right, left_projection: a, right_projection: b }
                    } else {
                        ExplicitDefinition::Coproduct { sort, left, right, left_injection: a, right_injection: b }
                    })
                }
                "subsort" | "quotient" => {
                    let parent = sort_name(cur)?;
                    if !base.has_sort(&parent) {
                        return Err(cur.error(format!("unknown sort `{parent}`")));
                    }
                    cur.expect_keyword("with")?;
                    let f = symbol(cur, "a function name")?;
                    cur.expect_keyword("where")?;
                    if construction == "subsort" {
                        let var = Var::new("x", &parent);
                        let body = body(cur, base, core::slice::from_ref(&var))?;
                        Ok(ExplicitDefinition::Subsort { sort, parent, inclusion: f, var, body })
                    } else {
                        let vars = [Var::new("x1", &parent), Var::new("x2", &parent)];
                        let body = body(cur, base, &vars)?;
                        Ok(ExplicitDefinition::Quotient { sort, parent, projection: f, vars, body })
                    }
                }
                other => Err(cur.error(format!("unknown sort construction `{other}`"))),
            }
        }
        other => Err(cur.error(format!("unknown definition kind `{other}`"))),
    }
}

/// Reads an extension file: one `define` line per definition, all over `base`.
pub fn parse_extension(text: &str, base: &Arc<Signature>) -> Result<ExtensionStep, ParseError> {
    let mut step = ExtensionStep::empty(base.clone());
    for line in lines(text)? {
        let mut cur = Cursor::new(&line.toks, line.number, line.len);
        let mut defs = step.added().to_vec();
        defs.push(definition(&mut cur, base)?);
        step = ExtensionStep::new(base.clone(), defs)
            .map_err(|e| ParseError::new(line.number, 1, format!("{e}")))?;
    }
    Ok(step)
}

fn conventional(body: &Formula, from: &[Var], to: &[Var]) -> Formula {
    if from == to {
        return body.clone();
    }
    let mut fresh = FreshVars::avoiding([body]);
    rename(body, from, to, &mut fresh)
}

fn product(sorts: impl Iterator<Item = Sort>) -> String {
    sorts.map(|s| String::from(s.as_str())).collect::<Vec<_>>().join(" x ")
}

/// Writes a step in extension-file syntax, renaming parameters to the
/// file conventions.
pub fn print_extension(step: &ExtensionStep) -> String {
    let mut out = String::new();
    for d in step.added() {
        let _ = match d {
            ExplicitDefinition::Predicate { name, params, body } => {
                let sorts: Vec<Sort> = params.iter().map(|v| v.sort.clone()).collect();
                let body = conventional(body, params, &numbered(&sorts));
                writeln!(out, "define pred {name} : {} := {body}", product(sorts.into_iter()))
            }
            ExplicitDefinition::Function { name, params, result, body } => {
                let sorts: Vec<Sort> = params.iter().map(|v| v.sort.clone()).collect();
                let mut from = params.clone();
                from.push(result.clone());
                let mut to = numbered(&sorts);
                to.push(Var::new("y", &result.sort));
                let body = conventional(body, &from, &to);
                writeln!(out, "define func {name} : {} -> {} := {body}", product(sorts.into_iter()), result.sort)
            }
            ExplicitDefinition::Constant { name, result, body } => {
                let body = conventional(body, core::slice::from_ref(result), &[Var::new("y", &result.sort)]);
                writeln!(out, "define const {name} : {} := {body}", result.sort)
            }
            ExplicitDefinition::Product { sort, left, right, left_projection, right_projection } => {
                writeln!(out, "define sort {sort} = product {left} {right} with {left_projection} {right_projection}")
            }
            ExplicitDefinition::Coproduct { sort, left, right, left_injection, right_injection } => {
                writeln!(out, "define sort {sort} = coproduct {left} {right} with {left_injection} {right_injection}")
            }
            ExplicitDefinition::Subsort { sort, parent, inclusion, var, body } => {
                let body = conventional(body, core::slice::from_ref(var), &[Var::new("x", parent)]);
                writeln!(out, "define sort {sort} = subsort {parent} with {inclusion} where {body}")
            }
            ExplicitDefinition::Quotient { sort, parent, projection, vars, body } => {
                let body = conventional(body, vars, &[Var::new("x1", parent), Var::new("x2", parent)]);
                writeln!(out, "define sort {sort} = quotient {parent} with {projection} where {body}")
            }
        };
    }
    out
}
