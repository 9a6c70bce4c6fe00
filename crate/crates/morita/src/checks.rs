//! Semantic checks of translations over explicit lists of models.

use std::fmt;

use morita_core::extensions::ExtensionStep;
use morita_core::structures::{Compiled, Element, FiniteStructure};
use morita_core::syntax::{Formula, Var};
use morita_core::translator::{code_formula, codes_for, foreign_symbols, translate_formula, Code, TranslationError};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Agreement {
    pub codes: usize,
    /// Code-satisfying assignments compared.
    pub assignments: usize,
}

#[derive(Clone, Debug)]
pub struct Disagreement {
    pub code: Code,
    pub translation: Formula,
    pub model: FiniteStructure,
    pub assignment: Vec<(Var, Element)>,
    /// Truth value of the original formula there.
    pub original: bool,
}

#[derive(Clone, Debug)]
pub enum CheckError {
    Translation(TranslationError),
    /// The translation still mentions symbols outside the base signature.
    Impure { translation: Formula, symbols: Vec<String> },
    Disagree(Box<Disagreement>),
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Translation(e) => write!(f, "{e}"),
            CheckError::Impure { translation, symbols } => {
                write!(f, "translation {translation} uses extended symbols {}", symbols.join(", "))
            }
            CheckError::Disagree(d) => {
                let a: Vec<String> = d.assignment.iter().map(|(v, e)| format!("{}={e}", v.name)).collect();
                write!(
                    f,
                    "original is {} but translation {} is {} at [{}] in\n{}",
                    d.original,
                    d.translation,
                    !d.original,
                    a.join(", "),
                    d.model
                )
            }
        }
    }
}

impl std::error::Error for CheckError {}

/// Every tuple of carrier indices for `sorts`.
fn tuples(m: &FiniteStructure, sorts: &[usize]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &s in sorts {
        let n = m.sizes()[s];
        out = out.into_iter().flat_map(|t| (0..n).map(move |a| [t.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Compares `φ` with each code-relative translation on every model and every
/// assignment satisfying the code.
pub fn check_translation(phi: &Formula, step: &ExtensionStep, models: &[FiniteStructure]) -> Result<Agreement, CheckError> {
    let sig = step.derived();
    let free: Vec<Var> = phi.free_variables().into_iter().collect();
    let new_vars: Vec<Var> = free.iter().filter(|v| step.is_new_sort(&v.sort)).cloned().collect();
    let codes = codes_for(&new_vars, step).map_err(CheckError::Translation)?;
    let sort_of = |v: &Var| sig.sort_index(&v.sort).expect("variable sorts are in the signature");
    let c_phi = Compiled::new(sig, phi).expect("formula over the extended signature");
    let mut stats = Agreement::default();
    for code in &codes {
        let star = translate_formula(phi, code, step).map_err(CheckError::Translation)?;
        let foreign = foreign_symbols(&star, step);
        if !foreign.is_empty() {
            return Err(CheckError::Impure { translation: star, symbols: foreign });
        }
        let c_star = Compiled::new(sig, &star).expect("translation sort-checks");
        // One compiled conjunct per entry, with its witness variables.
        let entries: Vec<(Compiled, Var, Vec<Var>)> = code
            .entries
            .iter()
            .map(|e| {
                let single = Code { entries: vec![e.clone()], empty_sort: code.empty_sort.clone() };
                let f = code_formula(&single, step);
                let ws = e.witness.base_vars().into_iter().cloned().collect();
                (Compiled::new(sig, &f).expect("code sort-checks"), e.var.clone(), ws)
            })
            .collect();
        let free_sorts: Vec<usize> = free.iter().map(sort_of).collect();
        for m in models {
            for values in tuples(m, &free_sorts) {
                let value_of = |v: &Var| values[free.iter().position(|u| u == v).expect("free")];
                // Witness tuples satisfying each entry for the chosen values.
                let mut options: Vec<Vec<Vec<u32>>> = Vec::new();
                for (c, var, ws) in &entries {
                    let ws_sorts: Vec<usize> = ws.iter().map(sort_of).collect();
                    let ok: Vec<Vec<u32>> = tuples(m, &ws_sorts)
                        .into_iter()
                        .filter(|t| {
                            let mut env = c.env();
                            if let Some(s) = c.slot(var) {
                                env[s] = value_of(var);
                            }
                            for (w, &a) in ws.iter().zip(t) {
                                if let Some(s) = c.slot(w) {
                                    env[s] = a;
                                }
                            }
                            c.eval(m, &mut env)
                        })
                        .collect();
                    options.push(ok);
                }
                let mut env = c_phi.env();
                for (v, &a) in free.iter().zip(&values) {
                    if let Some(s) = c_phi.slot(v) {
                        env[s] = a;
                    }
                }
                let original = c_phi.eval(m, &mut env);
                let mut combos = vec![Vec::<u32>::new()];
                for opts in &options {
                    combos = combos.into_iter().flat_map(|c| opts.iter().map(move |o| [c.clone(), o.clone()].concat())).collect();
                }
                let witness_vars: Vec<&Var> = entries.iter().flat_map(|(_, _, ws)| ws).collect();
                for combo in combos {
                    let mut env = c_star.env();
                    for (v, &a) in free.iter().zip(&values) {
                        if let Some(s) = c_star.slot(v) {
                            env[s] = a;
                        }
                    }
                    for (w, &a) in witness_vars.iter().zip(&combo) {
                        if let Some(s) = c_star.slot(w) {
                            env[s] = a;
                        }
                    }
                    stats.assignments += 1;
                    if c_star.eval(m, &mut env) != original {
                        let mut assignment: Vec<(Var, Element)> =
                            free.iter().zip(&values).map(|(v, &a)| (v.clone(), m.element(sort_of(v), a).clone())).collect();
                        assignment.extend(
                            witness_vars.iter().zip(&combo).map(|(w, &a)| ((*w).clone(), m.element(sort_of(w), a).clone())),
                        );
                        return Err(CheckError::Disagree(Box::new(Disagreement {
                            code: code.clone(),
                            translation: star,
                            model: m.clone(),
                            assignment,
                            original,
                        })));
                    }
                }
            }
        }
        stats.codes += 1;
    }
    Ok(stats)
}
