//! Exhaustive model search up to isomorphism.
//!
//! For each carrier-size vector (lexicographic order), cells are filled in
//! encoding order by depth-first search. Every partial assignment is pruned
//! by three-valued axiom evaluation and by lex-leader constraints for the
//! adjacent transpositions of each sort. A complete assignment is emitted iff
//! its encoding is the least in its isomorphism class, so every class is
//! emitted exactly once.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::bound::Bound;
use super::canon::is_canonical_cells;
use super::eval::{Compiled, CompiledTheory, Partial};
use super::layout::{CellDesc, Layout};
use super::structure::FiniteStructure;
use crate::syntax::{Formula, Signature, Theory};

struct Transposition {
    pos_map: Vec<usize>,
    sort: usize,
    i: u32,
}

impl Transposition {
    #[inline]
    fn image(&self, x: u32) -> u32 {
        if x == self.i {
            self.i + 1
        } else if x == self.i + 1 {
            self.i
        } else {
            x
        }
    }
}

struct Run {
    layout: Layout,
    descs: Vec<CellDesc>,
    domains: Vec<u32>,
    transpositions: Vec<Transposition>,
    cells: Vec<Option<u32>>,
    next_val: Vec<u32>,
    known: Vec<Vec<bool>>,
    depth: usize,
    exhausted: bool,
}

impl Run {
    fn new(sig: &Signature, sizes: &[u32], theory: &CompiledTheory) -> Run {
        let layout = Layout::new(sig, sizes);
        let descs = layout.cells();
        let domains = descs.iter().map(|d| layout.domain(d.value_sort)).collect();
        let mut transpositions = Vec::new();
        for (s, &n) in sizes.iter().enumerate() {
            for i in 0..n.saturating_sub(1) {
                let mut t = Transposition { pos_map: Vec::with_capacity(descs.len()), sort: s, i };
                for d in &descs {
                    let args: Vec<u32> = d
                        .args
                        .iter()
                        .zip(&d.arg_sorts)
                        .map(|(&a, &as_)| if as_ == s { t.image(a) } else { a })
                        .collect();
                    t.pos_map.push(layout.position(d.kind, &args));
                }
                transpositions.push(t);
            }
        }
        let len = descs.len();
        let mut run = Run {
            layout,
            descs,
            domains,
            transpositions,
            cells: vec![None; len],
            next_val: vec![0; len],
            known: vec![Vec::new(); len + 1],
            depth: 0,
            exhausted: false,
        };
        match run.check_axioms(theory, &vec![false; theory.axioms.len()]) {
            Some(k) => run.known[0] = k,
            None => run.exhausted = true,
        }
        run
    }

    /// Axiom truth after the latest assignment; `None` if one became false.
    fn check_axioms(&self, theory: &CompiledTheory, known: &[bool]) -> Option<Vec<bool>> {
        let partial = Partial { layout: &self.layout, cells: &self.cells };
        let mut out = known.to_vec();
        for (i, ax) in theory.axioms.iter().enumerate() {
            if out[i] {
                continue;
            }
            let mut env = ax.env();
            match ax.eval_partial(&partial, &mut env) {
                Some(false) => return None,
                Some(true) => out[i] = true,
                None => {}
            }
        }
        Some(out)
    }

    /// No adjacent transposition produces a smaller encoding on the
    /// determined prefix.
    fn lex_leader_ok(&self) -> bool {
        'outer: for t in &self.transpositions {
            for (p, d) in self.descs.iter().enumerate() {
                let Some(a) = self.cells[p] else { continue 'outer };
                let Some(b) = self.cells[t.pos_map[p]] else { continue 'outer };
                let b = if d.value_sort == Some(t.sort) { t.image(b) } else { b };
                if b < a {
                    return false;
                }
                if b > a {
                    continue 'outer;
                }
            }
        }
        true
    }

    fn next(&mut self, theory: &CompiledTheory) -> Option<Vec<u32>> {
        let len = self.cells.len();
        loop {
            if self.exhausted {
                return None;
            }
            if self.depth == len {
                let full: Vec<u32> = self.cells.iter().map(|c| c.expect("complete")).collect();
                if len == 0 {
                    self.exhausted = true;
                } else {
                    self.depth = len - 1;
                }
                if is_canonical_cells(&self.layout, &self.descs, &full) {
                    return Some(full);
                }
                continue;
            }
            let d = self.depth;
            let v = self.next_val[d];
            if v >= self.domains[d] {
                self.cells[d] = None;
                self.next_val[d] = 0;
                if d == 0 {
                    self.exhausted = true;
                    return None;
                }
                self.depth -= 1;
                continue;
            }
            self.next_val[d] = v + 1;
            self.cells[d] = Some(v);
            if !self.lex_leader_ok() {
                continue;
            }
            if let Some(k) = self.check_axioms(theory, &self.known[d]) {
                self.known[d + 1] = k;
                self.depth = d + 1;
            }
        }
    }
}

/// Stream of models of a theory, one per isomorphism class, in order of
/// carrier sizes and then encoding.
pub struct ModelEnumerator {
    theory: CompiledTheory,
    signature: Arc<Signature>,
    sizes: Vec<u32>,
    caps: Vec<u32>,
    started: bool,
    run: Option<(Vec<u32>, Run)>,
}

impl ModelEnumerator {
    /// # Panics
    /// If an axiom does not sort-check.
    pub fn new(t: &Theory, bound: &Bound) -> ModelEnumerator {
        let theory = CompiledTheory::new(t).expect("axioms sort-check");
        let caps: Vec<u32> = t.signature.sorts().iter().map(|s| bound.get(s)).collect();
        ModelEnumerator {
            theory,
            signature: t.signature.clone(),
            sizes: vec![1; caps.len()],
            caps,
            started: false,
            run: None,
        }
    }

    fn advance_sizes(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return true;
        }
        for i in (0..self.sizes.len()).rev() {
            if self.sizes[i] < self.caps[i] {
                self.sizes[i] += 1;
                for s in &mut self.sizes[i + 1..] {
                    *s = 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for ModelEnumerator {
    type Item = FiniteStructure;

    fn next(&mut self) -> Option<FiniteStructure> {
        loop {
            if let Some((sizes, run)) = &mut self.run {
                if let Some(cells) = run.next(&self.theory) {
                    return Some(
                        FiniteStructure::with_atoms(self.signature.clone(), sizes, cells).expect("well-shaped"),
                    );
                }
                self.run = None;
            }
            if !self.advance_sizes() {
                return None;
            }
            let run = Run::new(&self.signature, &self.sizes, &self.theory);
            self.run = Some((self.sizes.clone(), run));
        }
    }
}

/// Models of `t` with carriers within `bound`, one per isomorphism class.
pub fn enumerate_models(t: &Theory, bound: &Bound) -> ModelEnumerator {
    ModelEnumerator::new(t, bound)
}

/// Outcome of a bounded entailment check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Entailment {
    /// A model of the theory in which the sentence is false.
    Refuted(FiniteStructure),
    /// No countermodel exists within the bound. This is not a proof.
    NoCountermodelUpTo(Bound),
}

impl Entailment {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Entailment::Refuted(_))
    }
}

/// Searches for a model of `t` within `bound` that falsifies `phi`.
///
/// # Panics
/// If `phi` is not a sentence over `t`'s signature.
pub fn bounded_entails(t: &Theory, phi: &Formula, bound: &Bound) -> Entailment {
    let c = Compiled::new(&t.signature, phi).expect("sentence over the theory's signature");
    assert!(phi.is_sentence(), "bounded_entails needs a sentence");
    for m in enumerate_models(t, bound) {
        let mut env = c.env();
        if !c.eval(&m, &mut env) {
            return Entailment::Refuted(m);
        }
    }
    Entailment::NoCountermodelUpTo(bound.clone())
}

/// Bounded entailment against a precomputed list of models.
pub fn refuted_among<'m>(models: &'m [FiniteStructure], phi: &Compiled) -> Option<&'m FiniteStructure> {
    models.iter().find(|m| {
        let mut env = phi.env();
        !phi.eval(m, &mut env)
    })
}
