//! Text rendering in the theory-file formula syntax.

use core::fmt;

use super::formula::{Formula, Term};
use super::fresh::match_exists_unique;

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::Const(c) => write!(f, "{c}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

// Binding strength: quantifiers reach as far right as possible.
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const ATOM: u8 = 6;

fn prec(phi: &Formula) -> u8 {
    match phi {
        Formula::Eq(..) | Formula::Pred(..) => ATOM,
        Formula::Not(_) => NOT,
        Formula::And(..) => AND,
        Formula::Or(..) => OR,
        Formula::Implies(..) => IMPLIES,
        Formula::Iff(..) => IFF,
        Formula::Forall(..) | Formula::Exists(..) => QUANT,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &Formula, ctx: u8) -> fmt::Result {
    let p = prec(phi);
    // A quantifier used as an operand is always bracketed.
    let paren = p < ctx || (p == QUANT && ctx > QUANT);
    if paren {
        f.write_str("(")?;
    }
    match phi {
        Formula::Eq(a, b) => write!(f, "{a} = {b}")?,
        Formula::Pred(q, args) => write!(f, "{}", Term::App(q.clone(), args.clone()))?,
        Formula::Not(a) => {
            f.write_str("~")?;
            write_at(f, a, NOT)?;
        }
        Formula::And(a, b) => binary(f, a, " & ", b, AND, AND + 1)?,
        Formula::Or(a, b) => binary(f, a, " | ", b, OR, OR + 1)?,
        Formula::Implies(a, b) => binary(f, a, " -> ", b, IMPLIES + 1, IMPLIES)?,
        Formula::Iff(a, b) => binary(f, a, " <-> ", b, IFF + 1, IFF + 1)?,
        Formula::Forall(v, body) => {
            write!(f, "forall {} {}. ", v.sort, v.name)?;
            write_at(f, body, QUANT)?;
        }
        Formula::Exists(v, body) => {
            if let Some((y, inner)) = match_exists_unique(phi) {
                write!(f, "exists1 {} {}. ", y.sort, y.name)?;
                write_at(f, inner, QUANT)?;
            } else {
                write!(f, "exists {} {}. ", v.sort, v.name)?;
                write_at(f, body, QUANT)?;
            }
        }
    }
    if paren {
        f.write_str(")")?;
    }
    Ok(())
}

fn binary(
    f: &mut fmt::Formatter<'_>,
    a: &Formula,
    op: &str,
    b: &Formula,
    left: u8,
    right: u8,
) -> fmt::Result {
    write_at(f, a, left)?;
    f.write_str(op)?;
    write_at(f, b, right)
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, QUANT)
    }
}
