//! Expanding a model of `T` to the unique model of `T⁺` with the same reduct.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::extensions::{extend_theory, ExplicitDefinition, ExtensionStep};
use crate::structures::{Compiled, CompiledTheory, Element, FiniteStructure};
use crate::syntax::{Formula, Theory, Var};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExpansionError {
    /// The model does not interpret exactly the step's base signature.
    SignatureMismatch,
    /// The model violates the axiom with this index.
    NotAModel(usize),
    /// An admissibility condition fails in the model itself.
    AdmissibilityFailsInModel { definition: String, condition: Formula, witness: String },
    /// An error while expanding along the step with this index.
    AtStep { index: usize, error: Box<ExpansionError> },
}

impl fmt::Display for ExpansionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionError::SignatureMismatch => write!(f, "model signature differs from the step's base"),
            ExpansionError::NotAModel(i) => write!(f, "model violates axiom {}", i + 1),
            ExpansionError::AdmissibilityFailsInModel { definition, condition, witness } => {
                write!(f, "admissibility of `{definition}` fails in the model ({witness}): {condition}")
            }
            ExpansionError::AtStep { index, error } => write!(f, "step {}: {error}", index + 1),
        }
    }
}

impl core::error::Error for ExpansionError {}

/// Evaluates a defining formula on argument tuples.
struct Definer<'m> {
    m: &'m FiniteStructure,
    c: Compiled,
    slots: Vec<Option<usize>>,
    env: Vec<u32>,
}

impl<'m> Definer<'m> {
    fn new(m: &'m FiniteStructure, body: &Formula, params: &[&Var]) -> Definer<'m> {
        let c = Compiled::new(m.signature(), body).expect("defining formula checked by the step");
        let slots = params.iter().map(|v| c.slot(v)).collect();
        let env = c.env();
        Definer { m, c, slots, env }
    }

    fn holds(&mut self, args: &[u32]) -> bool {
        for (slot, &a) in self.slots.iter().zip(args) {
            if let Some(s) = slot {
                self.env[*s] = a;
            }
        }
        self.c.eval(self.m, &mut self.env)
    }
}

fn tuple_text(m: &FiniteStructure, sorts: &[usize], args: &[u32]) -> String {
    let parts: Vec<String> = sorts.iter().zip(args).map(|(&s, &a)| format!("{}", m.element(s, a))).collect();
    format!("({})", parts.join(", "))
}

fn admissibility(d: &ExplicitDefinition, k: usize, witness: String) -> ExpansionError {
    ExpansionError::AdmissibilityFailsInModel {
        definition: d.name().into(),
        condition: d.admissibility_conditions().swap_remove(k),
        witness,
    }
}

/// All tuples over the given carrier sizes, row-major.
fn tuples(sizes: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out.into_iter().flat_map(|t| (0..n).map(move |a| [t.as_slice(), &[a]].concat())).collect();
    }
    out
}

/// Builds `M⁺` from a model `M` of `T`: new carriers are materialized with
/// tagged elements and new symbols are read off the defining formulas.
pub fn expand_model(m: &FiniteStructure, t: &Theory, s: &ExtensionStep) -> Result<FiniteStructure, ExpansionError> {
    if !m.signature().same_symbols(s.base()) || !t.signature.same_symbols(s.base()) {
        return Err(ExpansionError::SignatureMismatch);
    }
    let aligned;
    let m = if m.signature() == s.base() {
        m
    } else {
        aligned = m.reduct(s.base()).map_err(|_| ExpansionError::SignatureMismatch)?;
        &aligned
    };
    let compiled = CompiledTheory::new(t).map_err(|_| ExpansionError::SignatureMismatch)?;
    if let Some(i) = compiled.first_violation(m) {
        return Err(ExpansionError::NotAModel(i));
    }
    let base = s.base();
    let derived = s.derived().clone();
    let bidx = |name: &crate::syntax::Sort| base.sort_index(name).expect("base sort");

    let mut carriers: Vec<Vec<Element>> = Vec::with_capacity(derived.sorts().len());
    // per new-sort auxiliary data: quotient class of each parent element
    let mut classes: Vec<Option<Vec<u32>>> = Vec::new();
    for sort in derived.sorts() {
        if let Some(i) = base.sort_index(sort) {
            carriers.push(m.carrier(i).to_vec());
            classes.push(None);
            continue;
        }
        let d = s.sort_definition(sort).expect("every new sort is constructed");
        match d {
            ExplicitDefinition::Product { left, right, .. } => {
                let (l, r) = (m.carrier(bidx(left)), m.carrier(bidx(right)));
                carriers.push(l.iter().flat_map(|a| r.iter().map(move |b| Element::pair(a.clone(), b.clone()))).collect());
                classes.push(None);
            }
            ExplicitDefinition::Coproduct { left, right, .. } => {
                let l = m.carrier(bidx(left)).iter().map(|a| Element::InjL(Box::new(a.clone())));
                let r = m.carrier(bidx(right)).iter().map(|b| Element::InjR(Box::new(b.clone())));
                carriers.push(l.chain(r).collect());
                classes.push(None);
            }
            ExplicitDefinition::Subsort { parent, var, body, .. } => {
                let p = bidx(parent);
                let mut phi = Definer::new(m, body, &[var]);
                let sub: Vec<Element> = (0..m.sizes()[p])
                    .filter(|&a| phi.holds(&[a]))
                    .map(|a| Element::Sub(Box::new(m.element(p, a).clone())))
                    .collect();
                if sub.is_empty() {
                    return Err(admissibility(d, 0, format!("no element of `{parent}` satisfies the formula")));
                }
                carriers.push(sub);
                classes.push(None);
            }
            ExplicitDefinition::Quotient { parent, vars, body, .. } => {
                let p = bidx(parent);
                let n = m.sizes()[p];
                let mut phi = Definer::new(m, body, &[&vars[0], &vars[1]]);
                let rel: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| phi.holds(&[a, b])).collect()).collect();
                let el = |a: u32| format!("{}", m.element(p, a));
                for a in 0..n {
                    if !rel[a as usize][a as usize] {
                        return Err(admissibility(d, 0, format!("not reflexive at {}", el(a))));
                    }
                    for b in 0..n {
                        if rel[a as usize][b as usize] && !rel[b as usize][a as usize] {
                            return Err(admissibility(d, 1, format!("not symmetric at ({}, {})", el(a), el(b))));
                        }
                        for c in 0..n {
                            if rel[a as usize][b as usize] && rel[b as usize][c as usize] && !rel[a as usize][c as usize] {
                                return Err(admissibility(
                                    d,
                                    2,
                                    format!("not transitive at ({}, {}, {})", el(a), el(b), el(c)),
                                ));
                            }
                        }
                    }
                }
                let mut class = vec![u32::MAX; n as usize];
                let mut reps = Vec::new();
                for a in 0..n {
                    if class[a as usize] == u32::MAX {
                        let k = reps.len() as u32;
                        reps.push(Element::Class(Box::new(m.element(p, a).clone())));
                        for b in a..n {
                            if rel[a as usize][b as usize] {
                                class[b as usize] = k;
                            }
                        }
                    }
                }
                carriers.push(reps);
                classes.push(Some(class));
            }
            _ => unreachable!("only sort constructions introduce sorts"),
        }
    }

    let sizes: Vec<u32> = carriers.iter().map(|c| c.len() as u32).collect();
    let layout = crate::structures::Layout::new(&derived, &sizes);
    let mut cells = vec![0u32; layout.len];
    let didx = |name: &crate::syntax::Sort| derived.sort_index(name).expect("derived sort");

    for (i, c) in derived.constants().iter().enumerate() {
        if let Some((j, _)) = base.constant(c.name.as_str()) {
            cells[i] = m.constant(j);
        }
    }
    for (i, f) in derived.functions().iter().enumerate() {
        if let Some((j, _)) = base.function(f.name.as_str()) {
            let (dst, src) = (&layout.functions[i], &m.layout().functions[j]);
            cells[dst.base..dst.base + dst.count].copy_from_slice(&m.cells()[src.base..src.base + src.count]);
        }
    }
    for (i, p) in derived.predicates().iter().enumerate() {
        if let Some((j, _)) = base.predicate(p.name.as_str()) {
            let (dst, src) = (&layout.predicates[i], &m.layout().predicates[j]);
            cells[dst.base..dst.base + dst.count].copy_from_slice(&m.cells()[src.base..src.base + src.count]);
        }
    }

    let fpos = |name: &str| derived.function(name).expect("declared by the step").0;
    for d in s.added() {
        match d {
            ExplicitDefinition::Predicate { name, params, body } => {
                let table = &layout.predicates[derived.predicate(name.as_str()).expect("declared").0];
                let refs: Vec<&Var> = params.iter().collect();
                let mut phi = Definer::new(m, body, &refs);
                let arg_sizes: Vec<u32> = params.iter().map(|v| m.sizes()[bidx(&v.sort)]).collect();
                for (k, args) in tuples(&arg_sizes).into_iter().enumerate() {
                    cells[table.base + k] = phi.holds(&args) as u32;
                }
            }
            ExplicitDefinition::Function { name, params, result, body } => {
                let table = &layout.functions[fpos(name.as_str())];
                let mut refs: Vec<&Var> = params.iter().collect();
                refs.push(result);
                let mut phi = Definer::new(m, body, &refs);
                let arg_sorts: Vec<usize> = params.iter().map(|v| bidx(&v.sort)).collect();
                let arg_sizes: Vec<u32> = arg_sorts.iter().map(|&s| m.sizes()[s]).collect();
                let cod = m.sizes()[bidx(&result.sort)];
                for (k, mut args) in tuples(&arg_sizes).into_iter().enumerate() {
                    args.push(0);
                    let mut found = Vec::new();
                    for y in 0..cod {
                        *args.last_mut().expect("value slot") = y;
                        if phi.holds(&args) {
                            found.push(y);
                        }
                    }
                    args.pop();
                    if found.len() != 1 {
                        let what = if found.is_empty() { "no value" } else { "several values" };
                        return Err(admissibility(d, 0, format!("{what} at {}", tuple_text(m, &arg_sorts, &args))));
                    }
                    cells[table.base + k] = found[0];
                }
            }
            ExplicitDefinition::Constant { name, result, body } => {
                let i = derived.constant(name.as_str()).expect("declared").0;
                let mut phi = Definer::new(m, body, &[result]);
                let found: Vec<u32> = (0..m.sizes()[bidx(&result.sort)]).filter(|&y| phi.holds(&[y])).collect();
                if found.len() != 1 {
                    let what = if found.is_empty() { "no value" } else { "several values" };
                    return Err(admissibility(d, 0, String::from(what)));
                }
                cells[i] = found[0];
            }
            ExplicitDefinition::Product { sort, right, left_projection, right_projection, .. } => {
                let n = sizes[didx(sort)];
                let nr = m.sizes()[bidx(right)];
                let (p1, p2) = (&layout.functions[fpos(left_projection.as_str())], &layout.functions[fpos(right_projection.as_str())]);
                for z in 0..n {
                    cells[p1.base + z as usize] = z / nr;
                    cells[p2.base + z as usize] = z % nr;
                }
            }
            ExplicitDefinition::Coproduct { left, right, left_injection, right_injection, .. } => {
                let (nl, nr) = (m.sizes()[bidx(left)], m.sizes()[bidx(right)]);
                let (r1, r2) = (&layout.functions[fpos(left_injection.as_str())], &layout.functions[fpos(right_injection.as_str())]);
                for a in 0..nl {
                    cells[r1.base + a as usize] = a;
                }
                for b in 0..nr {
                    cells[r2.base + b as usize] = nl + b;
                }
            }
            ExplicitDefinition::Subsort { sort, parent, inclusion, .. } => {
                let p = bidx(parent);
                let inc = &layout.functions[fpos(inclusion.as_str())];
                for (z, e) in carriers[didx(sort)].iter().enumerate() {
                    let Element::Sub(a) = e else { unreachable!("subsort elements are tagged") };
                    cells[inc.base + z] = m.index_of(p, a).expect("parent element");
                }
            }
            ExplicitDefinition::Quotient { sort, projection, .. } => {
                let eps = &layout.functions[fpos(projection.as_str())];
                let class = classes[didx(sort)].as_ref().expect("quotient classes");
                for (a, &k) in class.iter().enumerate() {
                    cells[eps.base + a] = k;
                }
            }
        }
    }
    Ok(FiniteStructure::from_cells(derived, carriers, cells).expect("expansion is well-shaped"))
}

/// Expands along a chain of steps, extending the theory as it goes.
pub fn expand_chain(m: &FiniteStructure, t: &Theory, steps: &[ExtensionStep]) -> Result<FiniteStructure, ExpansionError> {
    let mut model = m.clone();
    let mut theory = t.clone();
    for (index, s) in steps.iter().enumerate() {
        let at = |error| ExpansionError::AtStep { index, error: Box::new(error) };
        model = expand_model(&model, &theory, s).map_err(at)?;
        theory = extend_theory(&theory, s).map_err(|_| at(ExpansionError::SignatureMismatch))?;
    }
    Ok(model)
}

