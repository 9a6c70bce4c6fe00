//! Sort-indexed maps between finite structures: isomorphism checks and
//! search, reducts of morphisms, and lifting along an extension step.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::extensions::{ExplicitDefinition, ExtensionStep};
use crate::structures::{CellDesc, Element, FiniteStructure};
use crate::syntax::{Signature, Sort};

const NONE: u32 = u32::MAX;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MorphismError {
    SignatureMismatch,
    MissingMap(String),
    /// A map has the wrong length or a value outside the target carrier.
    OutOfRange(String),
    NotSubsignature,
    /// A witness required by the lifting is missing or not unique.
    NotElementary { sort: String, element: String },
}

impl fmt::Display for MorphismError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismError::SignatureMismatch => write!(f, "source and target have different signatures"),
            MorphismError::MissingMap(s) => write!(f, "no map given for sort `{s}`"),
            MorphismError::OutOfRange(s) => write!(f, "map for sort `{s}` leaves the target carrier"),
            MorphismError::NotSubsignature => write!(f, "signature is not contained in the morphism's signature"),
            MorphismError::NotElementary { sort, element } => {
                write!(f, "no unique image for `{element}` of sort `{sort}`: the base map is not elementary")
            }
        }
    }
}

impl core::error::Error for MorphismError {}

/// A family of maps `h_σ : source_σ → target_σ`, stored as carrier indices
/// per sort in the source signature's order. Both endpoints share one
/// signature, declaration order included.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism {
    source: Arc<FiniteStructure>,
    target: Arc<FiniteStructure>,
    maps: Vec<Vec<u32>>,
}

impl Morphism {
    /// Checks shapes. A target with the same symbols in another order is
    /// realigned to the source's order.
    pub fn new(
        source: Arc<FiniteStructure>,
        target: Arc<FiniteStructure>,
        maps: Vec<Vec<u32>>,
    ) -> Result<Morphism, MorphismError> {
        let target = align(&source, target)?;
        let sorts = source.signature().sorts();
        if maps.len() != sorts.len() {
            let missing = sorts.get(maps.len()).map(|s| s.as_str()).unwrap_or_default();
            return Err(MorphismError::MissingMap(missing.into()));
        }
        for (s, map) in maps.iter().enumerate() {
            let n = target.sizes()[s];
            if map.len() != source.sizes()[s] as usize || map.iter().any(|&b| b >= n) {
                return Err(MorphismError::OutOfRange(sorts[s].as_str().into()));
            }
        }
        Ok(Morphism { source, target, maps })
    }

    /// Builds a morphism from element-level maps keyed by sort.
    pub fn from_elements(
        source: Arc<FiniteStructure>,
        target: Arc<FiniteStructure>,
        maps: &BTreeMap<Sort, BTreeMap<Element, Element>>,
    ) -> Result<Morphism, MorphismError> {
        let target = align(&source, target)?;
        let mut out = Vec::new();
        for (s, sort) in source.signature().sorts().iter().enumerate() {
            let map = maps.get(sort).ok_or_else(|| MorphismError::MissingMap(sort.as_str().into()))?;
            let mut idx = Vec::with_capacity(source.carrier(s).len());
            for e in source.carrier(s) {
                let img = map.get(e).ok_or_else(|| MorphismError::MissingMap(format!("{sort} at {e}")))?;
                idx.push(target.index_of(s, img).ok_or_else(|| MorphismError::OutOfRange(sort.as_str().into()))?);
            }
            out.push(idx);
        }
        Morphism::new(source, target, out)
    }

    pub fn identity(m: Arc<FiniteStructure>) -> Morphism {
        let maps = m.sizes().iter().map(|&n| (0..n).collect()).collect();
        Morphism { source: m.clone(), target: m, maps }
    }

    pub fn source(&self) -> &Arc<FiniteStructure> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteStructure> {
        &self.target
    }

    pub fn maps(&self) -> &[Vec<u32>] {
        &self.maps
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.source.signature()
    }

    /// `h_σ(a)` on carrier indices.
    pub fn apply(&self, sort: usize, a: u32) -> u32 {
        self.maps[sort][a as usize]
    }

    pub fn apply_element(&self, sort: &Sort, e: &Element) -> Option<&Element> {
        let s = self.signature().sort_index(sort)?;
        let a = self.source.index_of(s, e)?;
        Some(self.target.element(s, self.apply(s, a)))
    }

    /// `self ∘ first`: first apply `first`, then `self`.
    pub fn after(&self, first: &Morphism) -> Result<Morphism, MorphismError> {
        if first.target.signature() != self.source.signature() || first.target.sizes() != self.source.sizes() {
            return Err(MorphismError::SignatureMismatch);
        }
        let maps = first
            .maps
            .iter()
            .zip(&self.maps)
            .map(|(f, g)| f.iter().map(|&b| g[b as usize]).collect())
            .collect();
        Ok(Morphism { source: first.source.clone(), target: self.target.clone(), maps })
    }

    /// The inverse of a bijective family.
    pub fn inverse(&self) -> Option<Morphism> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for (s, map) in self.maps.iter().enumerate() {
            let mut inv = vec![NONE; self.target.sizes()[s] as usize];
            for (a, &b) in map.iter().enumerate() {
                if inv[b as usize] != NONE {
                    return None;
                }
                inv[b as usize] = a as u32;
            }
            if inv.contains(&NONE) {
                return None;
            }
            maps.push(inv);
        }
        Some(Morphism { source: self.target.clone(), target: self.source.clone(), maps })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.maps.iter().all(|m| m.iter().enumerate().all(|(a, &b)| a as u32 == b))
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, sort) in self.signature().sorts().iter().enumerate() {
            for (a, &b) in self.maps[s].iter().enumerate() {
                writeln!(f, "map {sort}: {} -> {}", self.source.element(s, a as u32), self.target.element(s, b))?;
            }
        }
        Ok(())
    }
}

fn align(source: &FiniteStructure, target: Arc<FiniteStructure>) -> Result<Arc<FiniteStructure>, MorphismError> {
    if Arc::ptr_eq(source.signature(), target.signature()) || source.signature() == target.signature() {
        return Ok(target);
    }
    if !source.signature().same_symbols(target.signature()) {
        return Err(MorphismError::SignatureMismatch);
    }
    let t = target.reduct(source.signature()).map_err(|_| MorphismError::SignatureMismatch)?;
    Ok(Arc::new(t))
}

fn bijective(map: &[u32], n: u32) -> bool {
    if map.len() != n as usize {
        return false;
    }
    let mut seen = vec![false; n as usize];
    map.iter().all(|&b| !core::mem::replace(&mut seen[b as usize], true))
}

/// Does every cell of the source agree with the target under `maps`?
fn preserves(m: &FiniteStructure, n: &FiniteStructure, descs: &[CellDesc], maps: &[Vec<u32>]) -> bool {
    descs.iter().enumerate().all(|(p, d)| {
        let args: Vec<u32> = d.args.iter().zip(&d.arg_sorts).map(|(&a, &s)| maps[s][a as usize]).collect();
        let q = n.layout().position(d.kind, &args);
        let v = m.cells()[p];
        match d.value_sort {
            None => n.cells()[q] == v,
            Some(s) => n.cells()[q] == maps[s][v as usize],
        }
    })
}

/// Bijective on every sort and preserving constants, function tables and
/// predicates in both directions.
pub fn is_isomorphism(h: &Morphism) -> bool {
    let (m, n) = (&*h.source, &*h.target);
    m.sizes() == n.sizes()
        && h.maps.iter().zip(n.sizes()).all(|(map, &k)| bijective(map, k))
        && preserves(m, n, &m.layout().cells(), &h.maps)
}

/// Between finite structures every elementary embedding is an isomorphism:
/// the sentences counting each carrier exactly transfer sizes, `x ≠ y`
/// forces injectivity, and atomic formulas then force preservation.
pub fn is_elementary_embedding(h: &Morphism) -> bool {
    is_isomorphism(h)
}

struct IsoSearch<'a> {
    m: &'a FiniteStructure,
    n: &'a FiniteStructure,
    descs: Vec<CellDesc>,
    fwd: Vec<Vec<u32>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, u32)>,
    out: Vec<Vec<Vec<u32>>>,
}

impl IsoSearch<'_> {
    fn assign(&mut self, s: usize, a: u32, b: u32) -> bool {
        match self.fwd[s][a as usize] {
            NONE if !self.used[s][b as usize] => {
                self.fwd[s][a as usize] = b;
                self.used[s][b as usize] = true;
                self.trail.push((s, a));
                true
            }
            NONE => false,
            old => old == b,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (s, a) = self.trail.pop().expect("nonempty");
            let b = core::mem::replace(&mut self.fwd[s][a as usize], NONE);
            self.used[s][b as usize] = false;
        }
    }

    /// Forces function values and checks predicates on every cell whose
    /// arguments are all mapped, until nothing changes.
    fn propagate(&mut self) -> bool {
        loop {
            let before = self.trail.len();
            for p in 0..self.descs.len() {
                let d = &self.descs[p];
                let mut args = Vec::with_capacity(d.args.len());
                for (&a, &s) in d.args.iter().zip(&d.arg_sorts) {
                    match self.fwd[s][a as usize] {
                        NONE => break,
                        b => args.push(b),
                    }
                }
                if args.len() != d.args.len() {
                    continue;
                }
                let q = self.n.layout().position(d.kind, &args);
                let (v, w) = (self.m.cells()[p], self.n.cells()[q]);
                let ok = match d.value_sort {
                    None => v == w,
                    Some(s) => self.assign(s, v, w),
                };
                if !ok {
                    return false;
                }
            }
            if self.trail.len() == before {
                return true;
            }
        }
    }

    fn go(&mut self) {
        let next = self
            .fwd
            .iter()
            .enumerate()
            .find_map(|(s, map)| map.iter().position(|&b| b == NONE).map(|a| (s, a as u32)));
        let Some((s, a)) = next else {
            self.out.push(self.fwd.clone());
            return;
        };
        for b in 0..self.n.sizes()[s] {
            if self.used[s][b as usize] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(s, a, b) && self.propagate() {
                self.go();
            }
            self.undo(mark);
        }
    }
}

/// Every isomorphism `m → n`, each once, in lexicographic order of maps.
pub fn enumerate_isomorphisms(m: &Arc<FiniteStructure>, n: &Arc<FiniteStructure>) -> Vec<Morphism> {
    let Ok(n) = align(m, n.clone()) else { return Vec::new() };
    if m.sizes() != n.sizes() {
        return Vec::new();
    }
    let layout = m.layout();
    for t in &layout.predicates {
        let count = |s: &FiniteStructure| s.cells()[t.base..t.base + t.count].iter().filter(|&&c| c == 1).count();
        if count(m) != count(&n) {
            return Vec::new();
        }
    }
    let mut search = IsoSearch {
        m,
        n: &n,
        descs: layout.cells(),
        fwd: m.sizes().iter().map(|&k| vec![NONE; k as usize]).collect(),
        used: m.sizes().iter().map(|&k| vec![false; k as usize]).collect(),
        trail: Vec::new(),
        out: Vec::new(),
    };
    if search.propagate() {
        search.go();
    }
    let found = core::mem::take(&mut search.out);
    found.into_iter().map(|maps| Morphism { source: m.clone(), target: n.clone(), maps }).collect()
}

/// `h|Σ` between the reducts of the endpoints.
pub fn reduct_morphism(h: &Morphism, sigma: &Arc<Signature>) -> Result<Morphism, MorphismError> {
    let source = h.source.reduct(sigma).map_err(|_| MorphismError::NotSubsignature)?;
    let target = h.target.reduct(sigma).map_err(|_| MorphismError::NotSubsignature)?;
    let sig = h.signature();
    let maps = sigma.sorts().iter().map(|s| h.maps[sig.sort_index(s).expect("contained")].clone()).collect();
    Ok(Morphism { source: Arc::new(source), target: Arc::new(target), maps })
}

fn not_elementary(m: &FiniteStructure, s: usize, a: u32) -> MorphismError {
    MorphismError::NotElementary {
        sort: m.signature().sorts()[s].as_str().into(),
        element: format!("{}", m.element(s, a)),
    }
}

/// Unary function table as a vector of values.
fn table(m: &FiniteStructure, f: &str) -> Vec<u32> {
    let (i, _) = m.signature().function(f).expect("declared by the step");
    let t = &m.layout().functions[i];
    m.cells()[t.base..t.base + t.count].to_vec()
}

/// The unique `n` with `key(n) = want`, searching a carrier of size `size`.
fn unique(size: u32, want: impl Fn(u32) -> bool) -> Option<u32> {
    let mut found = None;
    for n in 0..size {
        if want(n) {
            if found.is_some() {
                return None;
            }
            found = Some(n);
        }
    }
    found
}

/// Extends `h : M|Σ → N|Σ` to `h⁺ : M → N` through the defining
/// commutations of each new sort. Coproduct branches are found from
/// injection preimages in `m`, so any model of the extended theory works.
pub fn lift_morphism(
    h: &Morphism,
    m: &Arc<FiniteStructure>,
    n: &Arc<FiniteStructure>,
    step: &ExtensionStep,
) -> Result<Morphism, MorphismError> {
    let n = align(m, n.clone())?;
    let sig = m.signature().clone();
    let hs = h.signature();
    for s in step.base().sorts() {
        if hs.sort_index(s).is_none() {
            return Err(MorphismError::MissingMap(s.as_str().into()));
        }
    }
    let mut maps: Vec<Vec<u32>> = vec![Vec::new(); sig.sorts().len()];
    for (s, sort) in sig.sorts().iter().enumerate() {
        if let Some(j) = hs.sort_index(sort).filter(|_| !step.is_new_sort(sort)) {
            if h.maps[j].len() != m.sizes()[s] as usize {
                return Err(MorphismError::OutOfRange(sort.as_str().into()));
            }
            maps[s] = h.maps[j].clone();
        }
    }
    let idx = |s: &Sort| sig.sort_index(s).expect("declared sort");
    for d in step.added() {
        let Some(sort) = d.new_sort() else { continue };
        let s = idx(sort);
        let size_m = m.sizes()[s];
        let size_n = n.sizes()[s];
        let mut map = Vec::with_capacity(size_m as usize);
        match d {
            ExplicitDefinition::Product { left, right, left_projection, right_projection, .. } => {
                let (l, r) = (idx(left), idx(right));
                let (p1m, p2m) = (table(m, left_projection.as_str()), table(m, right_projection.as_str()));
                let (p1n, p2n) = (table(&n, left_projection.as_str()), table(&n, right_projection.as_str()));
                for a in 0..size_m {
                    let (x, y) = (maps[l][p1m[a as usize] as usize], maps[r][p2m[a as usize] as usize]);
                    let b = unique(size_n, |b| p1n[b as usize] == x && p2n[b as usize] == y)
                        .ok_or_else(|| not_elementary(m, s, a))?;
                    map.push(b);
                }
            }
            ExplicitDefinition::Coproduct { left, right, left_injection, right_injection, .. } => {
                let (l, r) = (idx(left), idx(right));
                let (r1m, r2m) = (table(m, left_injection.as_str()), table(m, right_injection.as_str()));
                let (r1n, r2n) = (table(&n, left_injection.as_str()), table(&n, right_injection.as_str()));
                for a in 0..size_m {
                    let b = if let Some(x) = r1m.iter().position(|&v| v == a) {
                        r1n[maps[l][x] as usize]
                    } else if let Some(y) = r2m.iter().position(|&v| v == a) {
                        r2n[maps[r][y] as usize]
                    } else {
                        return Err(not_elementary(m, s, a));
                    };
                    map.push(b);
                }
            }
            ExplicitDefinition::Subsort { parent, inclusion, .. } => {
                let p = idx(parent);
                let (im, in_) = (table(m, inclusion.as_str()), table(&n, inclusion.as_str()));
                for a in 0..size_m {
                    let x = maps[p][im[a as usize] as usize];
                    map.push(unique(size_n, |b| in_[b as usize] == x).ok_or_else(|| not_elementary(m, s, a))?);
                }
            }
            ExplicitDefinition::Quotient { parent, projection, .. } => {
                let p = idx(parent);
                let (em, en) = (table(m, projection.as_str()), table(&n, projection.as_str()));
                for a in 0..size_m {
                    let x = em.iter().position(|&v| v == a).ok_or_else(|| not_elementary(m, s, a))?;
                    map.push(en[maps[p][x] as usize]);
                }
            }
            _ => unreachable!("only sort constructions introduce sorts"),
        }
        maps[s] = map;
    }
    Morphism::new(m.clone(), n, maps)
}
