//! Bounded categories of models, the projection functor along an extension
//! step, and functor property checks.
//!
//! Objects are the canonical representatives emitted by model enumeration,
//! one per isomorphism class. Arrows are elementary embeddings, which for
//! finite structures are exactly the isomorphisms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::extensions::{extend_theory, extended_bound, ExtensionStep, StepError};
use crate::morphisms::{enumerate_isomorphisms, reduct_morphism, Morphism};
use crate::structures::{canonical_form, enumerate_models, Bound, FiniteStructure};
use crate::syntax::{Formula, Signature, Sort, Surface, Symbol, Term, Theory, Var};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CategoryError {
    /// The target's bound differs from the source's bound on shared sorts.
    BoundMismatch(String),
    /// The target signature is not contained in the source's.
    NotSubsignature,
    /// An object's reduct has no isomorphic object in the target category.
    ObjectOutsideTarget(usize),
    /// A reduct of an arrow is not an arrow of the target.
    ArrowOutsideTarget { from: usize, to: usize },
    NotDiscrete,
    Step(StepError),
}

impl fmt::Display for CategoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryError::BoundMismatch(s) => write!(f, "bounds disagree on sort `{s}`"),
            CategoryError::NotSubsignature => write!(f, "target signature is not contained in the source signature"),
            CategoryError::ObjectOutsideTarget(i) => write!(f, "reduct of object {i} is not an object of the target"),
            CategoryError::ArrowOutsideTarget { from, to } => {
                write!(f, "reduct of an arrow {from} -> {to} is not an arrow of the target")
            }
            CategoryError::NotDiscrete => write!(f, "category is not discrete"),
            CategoryError::Step(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CategoryError {}

/// `Mod(T)` restricted to carriers within a bound.
#[derive(Clone, Debug)]
pub struct BoundedModelCategory {
    pub theory: Theory,
    pub bound: Bound,
    pub objects: Vec<Arc<FiniteStructure>>,
    /// Nonempty hom sets only.
    arrows: BTreeMap<(usize, usize), Vec<Morphism>>,
    by_encoding: BTreeMap<Vec<u32>, usize>,
}

impl BoundedModelCategory {
    pub fn hom(&self, from: usize, to: usize) -> &[Morphism] {
        self.arrows.get(&(from, to)).map_or(&[], Vec::as_slice)
    }

    /// `(from, to)` pairs with a nonempty hom set.
    pub fn hom_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arrows.keys().copied()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.values().map(Vec::len).sum()
    }

    /// Size of each object's automorphism group.
    pub fn automorphism_counts(&self) -> Vec<usize> {
        (0..self.objects.len()).map(|i| self.hom(i, i).len()).collect()
    }

    /// Position of `g` in its hom set.
    pub fn arrow_index(&self, from: usize, to: usize, g: &Morphism) -> Option<usize> {
        self.hom(from, to).iter().position(|h| h.maps() == g.maps())
    }

    pub fn identity_index(&self, object: usize) -> usize {
        self.hom(object, object).iter().position(Morphism::is_identity).expect("identities are arrows")
    }

    /// The object isomorphic to `m` and an isomorphism `m → object`.
    pub fn locate(&self, m: &FiniteStructure) -> Option<(usize, Morphism)> {
        let sig = self.theory.signature.clone();
        let aligned = if m.signature() == &sig { m.clone() } else { m.reduct(&sig).ok()? };
        let (rep, fwd) = canonical_form(&aligned);
        let &i = self.by_encoding.get(&rep.encoding())?;
        let h = Morphism::new(Arc::new(aligned), self.objects[i].clone(), fwd).ok()?;
        Some((i, h))
    }

    /// Composition and identity laws over every composable pair and triple.
    pub fn satisfies_laws(&self) -> bool {
        for (&(a, b), hs) in &self.arrows {
            let ida = &self.hom(a, a)[self.identity_index(a)];
            let idb = &self.hom(b, b)[self.identity_index(b)];
            for h in hs {
                let Ok(l) = idb.after(h) else { return false };
                let Ok(r) = h.after(ida) else { return false };
                if l.maps() != h.maps() || r.maps() != h.maps() {
                    return false;
                }
                for (&(b2, c), gs) in self.arrows.range((b, 0)..(b + 1, 0)) {
                    debug_assert_eq!(b2, b);
                    for g in gs {
                        let Ok(gh) = g.after(h) else { return false };
                        if self.arrow_index(a, c, &gh).is_none() {
                            return false;
                        }
                        for (&(_, d), fs) in self.arrows.range((c, 0)..(c + 1, 0)) {
                            for f in fs {
                                let lhs = f.after(&gh).expect("composable");
                                let rhs = f.after(g).expect("composable").after(h).expect("composable");
                                if lhs.maps() != rhs.maps() || self.arrow_index(a, d, &lhs).is_none() {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Enumerates the objects and every arrow between them.
pub fn build_category(t: &Theory, bound: &Bound) -> BoundedModelCategory {
    let objects: Vec<Arc<FiniteStructure>> = enumerate_models(t, bound).map(Arc::new).collect();
    let mut arrows = BTreeMap::new();
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            let isos = enumerate_isomorphisms(a, b);
            if !isos.is_empty() {
                arrows.insert((i, j), isos);
            }
        }
    }
    let by_encoding = objects.iter().enumerate().map(|(i, m)| (m.encoding(), i)).collect();
    BoundedModelCategory { theory: t.clone(), bound: bound.clone(), objects, arrows, by_encoding }
}

/// A functor between bounded categories, as explicit object and arrow maps.
#[derive(Clone, Debug)]
pub struct FunctorData {
    pub source: Arc<BoundedModelCategory>,
    pub target: Arc<BoundedModelCategory>,
    pub objects: Vec<usize>,
    /// For the `k`-th arrow of `hom(a, b)`, its image's index in `hom(F a, F b)`.
    pub arrows: BTreeMap<(usize, usize), Vec<usize>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FunctorProperties {
    pub full: bool,
    pub faithful: bool,
    pub essentially_surjective: bool,
}

impl FunctorProperties {
    pub fn all(&self) -> bool {
        self.full && self.faithful && self.essentially_surjective
    }
}

impl fmt::Display for FunctorProperties {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "full={} faithful={} essentially_surjective={}", self.full, self.faithful, self.essentially_surjective)
    }
}

/// `Π : source → target`, reducts to the target's signature with every
/// object sent to its class representative and every arrow conjugated by
/// the chosen isomorphisms.
pub fn projection_functor(
    source: Arc<BoundedModelCategory>,
    target: Arc<BoundedModelCategory>,
) -> Result<FunctorData, CategoryError> {
    let sigma = target.theory.signature.clone();
    if !source.theory.signature.contains(&sigma) {
        return Err(CategoryError::NotSubsignature);
    }
    for s in sigma.sorts() {
        if source.bound.get(s) != target.bound.get(s) {
            return Err(CategoryError::BoundMismatch(s.as_str().into()));
        }
    }
    let mut objects = Vec::with_capacity(source.objects.len());
    let mut to_rep = Vec::with_capacity(source.objects.len());
    for (i, m) in source.objects.iter().enumerate() {
        let reduct = m.reduct(&sigma).map_err(|_| CategoryError::NotSubsignature)?;
        let (j, iso) = target.locate(&reduct).ok_or(CategoryError::ObjectOutsideTarget(i))?;
        objects.push(j);
        to_rep.push(iso);
    }
    let mut arrows = BTreeMap::new();
    for (&(a, b), hs) in &source.arrows {
        let mut images = Vec::with_capacity(hs.len());
        for h in hs {
            let r = reduct_morphism(h, &sigma).map_err(|_| CategoryError::NotSubsignature)?;
            let back = to_rep[a].inverse().expect("isomorphism");
            let conj = to_rep[b].after(&r.after(&back).expect("composable")).expect("composable");
            let k = target
                .arrow_index(objects[a], objects[b], &conj)
                .ok_or(CategoryError::ArrowOutsideTarget { from: a, to: b })?;
            images.push(k);
        }
        arrows.insert((a, b), images);
    }
    Ok(FunctorData { source, target, objects, arrows })
}

/// Builds `Mod(T⁺)` and `Mod(T)` at compatible bounds and the functor between them.
pub fn projection_for_step(t: &Theory, step: &ExtensionStep, bound: &Bound) -> Result<FunctorData, CategoryError> {
    let tplus = extend_theory(t, step).map_err(CategoryError::Step)?;
    let source = build_category(&tplus, &extended_bound(bound, step));
    let target = build_category(t, bound);
    projection_functor(Arc::new(source), Arc::new(target))
}

impl FunctorData {
    /// Identities go to identities and composites to composites.
    pub fn preserves_structure(&self) -> bool {
        let (src, tgt) = (&*self.source, &*self.target);
        for a in 0..src.objects.len() {
            let id = src.identity_index(a);
            if self.arrows[&(a, a)][id] != tgt.identity_index(self.objects[a]) {
                return false;
            }
        }
        for (&(a, b), hs) in &src.arrows {
            for (k, h) in hs.iter().enumerate() {
                for (&(_, c), gs) in src.arrows.range((b, 0)..(b + 1, 0)) {
                    for (l, g) in gs.iter().enumerate() {
                        let gh = g.after(h).expect("composable");
                        let Some(m) = src.arrow_index(a, c, &gh) else { return false };
                        let (fa, fb, fc) = (self.objects[a], self.objects[b], self.objects[c]);
                        let fh = &tgt.hom(fa, fb)[self.arrows[&(a, b)][k]];
                        let fg = &tgt.hom(fb, fc)[self.arrows[&(b, c)][l]];
                        let composite = fg.after(fh).expect("composable");
                        if tgt.arrow_index(fa, fc, &composite) != Some(self.arrows[&(a, c)][m]) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Decides fullness, faithfulness and essential surjectivity by exhaustion.
pub fn check_functor(f: &FunctorData) -> FunctorProperties {
    let (src, tgt) = (&*f.source, &*f.target);
    let n = src.objects.len();
    let mut full = true;
    let mut faithful = true;
    for a in 0..n {
        for b in 0..n {
            let images = f.arrows.get(&(a, b)).map_or(&[][..], Vec::as_slice);
            let mut hit = vec![false; tgt.hom(f.objects[a], f.objects[b]).len()];
            for &k in images {
                if core::mem::replace(&mut hit[k], true) {
                    faithful = false;
                }
            }
            if hit.contains(&false) {
                full = false;
            }
        }
    }
    let mut covered = vec![false; tgt.objects.len()];
    for &j in &f.objects {
        covered[j] = true;
    }
    FunctorProperties { full, faithful, essentially_surjective: !covered.contains(&false) }
}

/// Every automorphism group is trivial and no arrow joins distinct objects.
pub fn is_discrete(c: &BoundedModelCategory) -> bool {
    c.arrows.iter().all(|(&(a, b), hs)| a == b && hs.len() == 1)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DiscreteVerdict {
    EquivalentAtBound,
    NotEquivalentAtBound { left_objects: usize, right_objects: usize },
}

/// Discrete categories are equivalent iff they have equally many objects.
pub fn discrete_equivalence_verdict(
    c: &BoundedModelCategory,
    d: &BoundedModelCategory,
) -> Result<DiscreteVerdict, CategoryError> {
    if !is_discrete(c) || !is_discrete(d) {
        return Err(CategoryError::NotDiscrete);
    }
    let (l, r) = (c.objects.len(), d.objects.len());
    Ok(if l == r {
        DiscreteVerdict::EquivalentAtBound
    } else {
        DiscreteVerdict::NotEquivalentAtBound { left_objects: l, right_objects: r }
    })
}

/// The one-element theories over `n` unary predicates: `T1` leaves the
/// predicates free, `T2` makes `q0` imply every other `qi`.
pub fn truncated_theories(n: usize) -> (Theory, Theory) {
    let build = |sort: &str, pred: &str, var: &str, guarded: bool| {
        let s = Sort::new(sort);
        let mut sig = Signature::new();
        sig.add_sort(s.clone()).expect("fresh");
        for i in 0..n {
            sig.add_predicate(Symbol::new(&format!("{pred}{i}")), vec![s.clone()]).expect("fresh");
        }
        let x = Var::new(var, &s);
        let one = crate::syntax::expand_unique_exists(&Surface::ExistsUnique(
            x.clone(),
            alloc::boxed::Box::new(Surface::Plain(Formula::eq(Term::var(&x), Term::var(&x)))),
        ));
        let mut axioms = vec![one];
        if guarded {
            let at = |i: usize| Formula::pred(&format!("{pred}{i}"), vec![Term::var(&x)]);
            for i in 1..n {
                axioms.push(Formula::forall(&x, Formula::implies(at(0), at(i))));
            }
        }
        Theory { signature: Arc::new(sig), axioms }
    };
    (build("s1", "p", "x", false), build("s2", "q", "y", true))
}
