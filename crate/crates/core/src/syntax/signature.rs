use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::names::{Sort, Symbol};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PredicateDecl {
    pub name: Symbol,
    pub arity: Vec<Sort>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FunctionDecl {
    pub name: Symbol,
    pub domain: Vec<Sort>,
    pub codomain: Sort,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstantDecl {
    pub name: Symbol,
    pub sort: Sort,
}

/// Where a name lives in a signature, with its declaration index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SymbolRef {
    Sort(usize),
    Predicate(usize),
    Function(usize),
    Constant(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SignatureError {
    DuplicateSymbol(String),
    UnknownSort(String),
    EmptyArity(String),
    NoSorts,
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::DuplicateSymbol(n) => write!(f, "symbol `{n}` declared twice"),
            SignatureError::UnknownSort(n) => write!(f, "unknown sort `{n}`"),
            SignatureError::EmptyArity(n) => write!(f, "`{n}` needs at least one argument sort"),
            SignatureError::NoSorts => write!(f, "a signature needs at least one sort"),
        }
    }
}

impl core::error::Error for SignatureError {}

/// Declarations of sorts, predicates, functions and constants.
///
/// Declaration order is kept: it fixes carrier numbering, cell encodings and
/// printing. Use [`Signature::same_symbols`] for order-insensitive comparison.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Signature {
    sorts: Vec<Sort>,
    predicates: Vec<PredicateDecl>,
    functions: Vec<FunctionDecl>,
    constants: Vec<ConstantDecl>,
    index: BTreeMap<String, SymbolRef>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    fn claim(&mut self, name: &str, r: SymbolRef) -> Result<(), SignatureError> {
        if self.index.contains_key(name) {
            return Err(SignatureError::DuplicateSymbol(name.into()));
        }
        self.index.insert(name.into(), r);
        Ok(())
    }

    fn require_sort(&self, s: &Sort) -> Result<(), SignatureError> {
        match self.index.get(s.as_str()) {
            Some(SymbolRef::Sort(_)) => Ok(()),
            _ => Err(SignatureError::UnknownSort(s.as_str().into())),
        }
    }

    pub fn add_sort(&mut self, sort: Sort) -> Result<(), SignatureError> {
        self.claim(sort.as_str(), SymbolRef::Sort(self.sorts.len()))?;
        self.sorts.push(sort);
        Ok(())
    }

    pub fn add_predicate(&mut self, name: Symbol, arity: Vec<Sort>) -> Result<(), SignatureError> {
        if arity.is_empty() {
            return Err(SignatureError::EmptyArity(name.as_str().into()));
        }
        for s in &arity {
            self.require_sort(s)?;
        }
        self.claim(name.as_str(), SymbolRef::Predicate(self.predicates.len()))?;
        self.predicates.push(PredicateDecl { name, arity });
        Ok(())
    }

    pub fn add_function(
        &mut self,
        name: Symbol,
        domain: Vec<Sort>,
        codomain: Sort,
    ) -> Result<(), SignatureError> {
        if domain.is_empty() {
            return Err(SignatureError::EmptyArity(name.as_str().into()));
        }
        for s in domain.iter().chain(core::iter::once(&codomain)) {
            self.require_sort(s)?;
        }
        self.claim(name.as_str(), SymbolRef::Function(self.functions.len()))?;
        self.functions.push(FunctionDecl { name, domain, codomain });
        Ok(())
    }

    pub fn add_constant(&mut self, name: Symbol, sort: Sort) -> Result<(), SignatureError> {
        self.require_sort(&sort)?;
        self.claim(name.as_str(), SymbolRef::Constant(self.constants.len()))?;
        self.constants.push(ConstantDecl { name, sort });
        Ok(())
    }

    /// Checks the "at least one sort" requirement.
    pub fn validate(&self) -> Result<(), SignatureError> {
        if self.sorts.is_empty() {
            Err(SignatureError::NoSorts)
        } else {
            Ok(())
        }
    }

    pub fn sorts(&self) -> &[Sort] {
        &self.sorts
    }
    pub fn predicates(&self) -> &[PredicateDecl] {
        &self.predicates
    }
    pub fn functions(&self) -> &[FunctionDecl] {
        &self.functions
    }
    pub fn constants(&self) -> &[ConstantDecl] {
        &self.constants
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolRef> {
        self.index.get(name).copied()
    }

    pub fn sort_index(&self, s: &Sort) -> Option<usize> {
        match self.lookup(s.as_str()) {
            Some(SymbolRef::Sort(i)) => Some(i),
            _ => None,
        }
    }

    pub fn has_sort(&self, s: &Sort) -> bool {
        self.sort_index(s).is_some()
    }

    pub fn predicate(&self, name: &str) -> Option<(usize, &PredicateDecl)> {
        match self.lookup(name) {
            Some(SymbolRef::Predicate(i)) => Some((i, &self.predicates[i])),
            _ => None,
        }
    }

    pub fn function(&self, name: &str) -> Option<(usize, &FunctionDecl)> {
        match self.lookup(name) {
            Some(SymbolRef::Function(i)) => Some((i, &self.functions[i])),
            _ => None,
        }
    }

    pub fn constant(&self, name: &str) -> Option<(usize, &ConstantDecl)> {
        match self.lookup(name) {
            Some(SymbolRef::Constant(i)) => Some((i, &self.constants[i])),
            _ => None,
        }
    }

    /// Every declaration of `other` occurs, identically, in `self`.
    pub fn contains(&self, other: &Signature) -> bool {
        other.sorts.iter().all(|s| self.has_sort(s))
            && other
                .predicates
                .iter()
                .all(|p| self.predicate(p.name.as_str()).is_some_and(|(_, q)| q == p))
            && other
                .functions
                .iter()
                .all(|f| self.function(f.name.as_str()).is_some_and(|(_, g)| g == f))
            && other
                .constants
                .iter()
                .all(|c| self.constant(c.name.as_str()).is_some_and(|(_, d)| d == c))
    }

    /// Equality of declaration sets, ignoring declaration order.
    pub fn same_symbols(&self, other: &Signature) -> bool {
        self.index.len() == other.index.len() && self.contains(other)
    }

    /// Number of declared symbols of all kinds.
    pub fn symbol_count(&self) -> usize {
        self.index.len()
    }

    /// The declarations of `self` that are not in `base`, as a name list.
    pub fn names_not_in(&self, base: &Signature) -> Vec<&str> {
        self.index.keys().filter(|n| base.lookup(n).is_none()).map(|n| n.as_str()).collect()
    }

    /// Appends every declaration of `other` missing from `self`, in `other`'s order.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SignatureError> {
        for s in &other.sorts {
            if !self.has_sort(s) {
                self.add_sort(s.clone())?;
            }
        }
        for p in &other.predicates {
            match self.predicate(p.name.as_str()) {
                Some((_, q)) if q == p => {}
                Some(_) => return Err(SignatureError::DuplicateSymbol(p.name.as_str().into())),
                None => self.add_predicate(p.name.clone(), p.arity.clone())?,
            }
        }
        for f in &other.functions {
            match self.function(f.name.as_str()) {
                Some((_, g)) if g == f => {}
                Some(_) => return Err(SignatureError::DuplicateSymbol(f.name.as_str().into())),
                None => self.add_function(f.name.clone(), f.domain.clone(), f.codomain.clone())?,
            }
        }
        for c in &other.constants {
            match self.constant(c.name.as_str()) {
                Some((_, d)) if d == c => {}
                Some(_) => return Err(SignatureError::DuplicateSymbol(c.name.as_str().into())),
                None => self.add_constant(c.name.clone(), c.sort.clone())?,
            }
        }
        Ok(())
    }
}
