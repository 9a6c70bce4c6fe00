use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::element::Element;
use super::layout::Layout;
use crate::syntax::{Signature, Sort, SymbolRef};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StructureError {
    MissingCarrier(String),
    EmptyCarrier(String),
    DuplicateElement(String),
    ForeignAtom { sort: String, element: String },
    NotInCarrier { sort: String, element: String },
    UnknownSymbol(String),
    ArityMismatch(String),
    PartialFunction { function: String, args: String },
    ConflictingValue { function: String, args: String },
    MissingConstant(String),
    CellCount { expected: usize, found: usize },
    ValueOutOfRange(usize),
    NotSubsignature,
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use StructureError::*;
        match self {
            MissingCarrier(s) => write!(f, "no carrier given for sort `{s}`"),
            EmptyCarrier(s) => write!(f, "carrier of `{s}` is empty"),
            DuplicateElement(e) => write!(f, "element `{e}` listed twice"),
            ForeignAtom { sort, element } => write!(f, "atom `{element}` does not belong to sort `{sort}`"),
            NotInCarrier { sort, element } => write!(f, "`{element}` is not in the carrier of `{sort}`"),
            UnknownSymbol(s) => write!(f, "unknown symbol `{s}`"),
            ArityMismatch(s) => write!(f, "wrong number of arguments for `{s}`"),
            PartialFunction { function, args } => write!(f, "`{function}` undefined at ({args})"),
            ConflictingValue { function, args } => write!(f, "`{function}` given two values at ({args})"),
            MissingConstant(c) => write!(f, "constant `{c}` has no denotation"),
            CellCount { expected, found } => write!(f, "expected {expected} cells, found {found}"),
            ValueOutOfRange(p) => write!(f, "cell {p} holds a value outside its carrier"),
            NotSubsignature => write!(f, "signature is not contained in the structure's signature"),
        }
    }
}

impl core::error::Error for StructureError {}

/// A finite Σ-structure.
///
/// Carriers are strictly increasing element lists, one per sort in
/// declaration order. Interpretations live in a flat cell vector laid out by
/// [`Layout`]; cell values are carrier indices (or 0/1 for predicates).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteStructure {
    signature: Arc<Signature>,
    carriers: Vec<Vec<Element>>,
    layout: Arc<Layout>,
    cells: Vec<u32>,
}

impl FiniteStructure {
    /// Builds a structure from carriers and a cell vector.
    pub fn from_cells(
        signature: Arc<Signature>,
        carriers: Vec<Vec<Element>>,
        cells: Vec<u32>,
    ) -> Result<FiniteStructure, StructureError> {
        if carriers.len() != signature.sorts().len() {
            return Err(StructureError::MissingCarrier(
                signature.sorts().get(carriers.len()).map(|s| s.as_str().into()).unwrap_or_default(),
            ));
        }
        for (sort, carrier) in signature.sorts().iter().zip(&carriers) {
            if carrier.is_empty() {
                return Err(StructureError::EmptyCarrier(sort.as_str().into()));
            }
            for w in carrier.windows(2) {
                if w[0] >= w[1] {
                    return Err(StructureError::DuplicateElement(format!("{}", w[1])));
                }
            }
            for e in carrier {
                if let Element::Atom { sort: s, .. } = e {
                    if s != sort {
                        return Err(StructureError::ForeignAtom {
                            sort: sort.as_str().into(),
                            element: format!("{e}"),
                        });
                    }
                }
            }
        }
        let sizes: Vec<u32> = carriers.iter().map(|c| c.len() as u32).collect();
        let layout = Layout::new(&signature, &sizes);
        if cells.len() != layout.len {
            return Err(StructureError::CellCount { expected: layout.len, found: cells.len() });
        }
        for (desc_pos, &cell) in cells.iter().enumerate() {
            if cell >= layout_domain_at(&layout, desc_pos) {
                return Err(StructureError::ValueOutOfRange(desc_pos));
            }
        }
        Ok(FiniteStructure { signature, carriers, layout: Arc::new(layout), cells })
    }

    /// A structure whose base carriers are atoms `0..size`.
    pub fn with_atoms(
        signature: Arc<Signature>,
        sizes: &[u32],
        cells: Vec<u32>,
    ) -> Result<FiniteStructure, StructureError> {
        let carriers = signature
            .sorts()
            .iter()
            .zip(sizes)
            .map(|(s, &n)| (0..n).map(|i| Element::atom(s, i)).collect())
            .collect();
        FiniteStructure::from_cells(signature, carriers, cells)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub fn sizes(&self) -> &[u32] {
        &self.layout.sizes
    }

    pub fn carriers(&self) -> &[Vec<Element>] {
        &self.carriers
    }

    pub fn carrier(&self, sort: usize) -> &[Element] {
        &self.carriers[sort]
    }

    pub fn carrier_of(&self, sort: &Sort) -> Option<&[Element]> {
        self.signature.sort_index(sort).map(|i| self.carrier(i))
    }

    pub fn element(&self, sort: usize, index: u32) -> &Element {
        &self.carriers[sort][index as usize]
    }

    pub fn index_of(&self, sort: usize, e: &Element) -> Option<u32> {
        self.carriers[sort].binary_search(e).ok().map(|i| i as u32)
    }

    pub fn constant(&self, c: usize) -> u32 {
        self.cells[c]
    }

    pub fn apply(&self, f: usize, args: &[u32]) -> u32 {
        self.cells[self.layout.functions[f].offset(args)]
    }

    pub fn holds(&self, p: usize, args: &[u32]) -> bool {
        self.cells[self.layout.predicates[p].offset(args)] == 1
    }

    /// Sizes followed by cells: equal encodings mean identical structures up
    /// to the names of carrier elements.
    pub fn encoding(&self) -> Vec<u32> {
        let mut out = self.layout.sizes.clone();
        out.extend_from_slice(&self.cells);
        out
    }

    /// The same structure with every carrier renamed to atoms `0..n`.
    pub fn with_atom_carriers(&self) -> FiniteStructure {
        FiniteStructure::with_atoms(self.signature.clone(), &self.layout.sizes, self.cells.clone())
            .expect("same shape")
    }

    /// Forgets the symbols outside `sub`; the result uses `sub`'s declaration order.
    pub fn reduct(&self, sub: &Arc<Signature>) -> Result<FiniteStructure, StructureError> {
        if !self.signature.contains(sub) {
            return Err(StructureError::NotSubsignature);
        }
        let sort_map: Vec<usize> =
            sub.sorts().iter().map(|s| self.signature.sort_index(s).expect("contained")).collect();
        let carriers: Vec<Vec<Element>> = sort_map.iter().map(|&i| self.carriers[i].clone()).collect();
        let sizes: Vec<u32> = carriers.iter().map(|c| c.len() as u32).collect();
        let layout = Layout::new(sub, &sizes);
        let mut cells = vec![0u32; layout.len];
        for (i, c) in sub.constants().iter().enumerate() {
            let (j, _) = self.signature.constant(c.name.as_str()).expect("contained");
            cells[i] = self.cells[j];
        }
        for (i, f) in sub.functions().iter().enumerate() {
            let (j, _) = self.signature.function(f.name.as_str()).expect("contained");
            let (dst, src) = (&layout.functions[i], &self.layout.functions[j]);
            cells[dst.base..dst.base + dst.count].copy_from_slice(&self.cells[src.base..src.base + src.count]);
        }
        for (i, p) in sub.predicates().iter().enumerate() {
            let (j, _) = self.signature.predicate(p.name.as_str()).expect("contained");
            let (dst, src) = (&layout.predicates[i], &self.layout.predicates[j]);
            cells[dst.base..dst.base + dst.count].copy_from_slice(&self.cells[src.base..src.base + src.count]);
        }
        Ok(FiniteStructure { signature: sub.clone(), carriers, layout: Arc::new(layout), cells })
    }

    /// Writes the structure in model-file syntax.
    pub fn write_model(&self, out: &mut String) {
        use core::fmt::Write;
        let list = |items: &mut dyn Iterator<Item = String>| {
            let v: Vec<String> = items.collect();
            v.join(", ")
        };
        for (s, c) in self.signature.sorts().iter().zip(&self.carriers) {
            let _ = writeln!(out, "carrier {s} = {{{}}}", list(&mut c.iter().map(|e| format!("{e}"))));
        }
        for (i, p) in self.signature.predicates().iter().enumerate() {
            let t = &self.layout.predicates[i];
            let tuples = (0..t.count).filter(|k| self.cells[t.base + k] == 1).map(|k| {
                let args = t.tuple(k, &self.layout.sizes);
                format!("({})", list(&mut args.iter().zip(&t.arg_sorts).map(|(&a, &s)| format!("{}", self.element(s, a)))))
            });
            let _ = writeln!(out, "pred {} = {{{}}}", p.name, list(&mut tuples.into_iter()));
        }
        for (i, f) in self.signature.functions().iter().enumerate() {
            let t = &self.layout.functions[i];
            let cod = t.value_sort.expect("function");
            let entries = (0..t.count).map(|k| {
                let args = t.tuple(k, &self.layout.sizes);
                format!(
                    "({}) -> {}",
                    list(&mut args.iter().zip(&t.arg_sorts).map(|(&a, &s)| format!("{}", self.element(s, a)))),
                    self.element(cod, self.cells[t.base + k])
                )
            });
            let _ = writeln!(out, "func {} = {{{}}}", f.name, list(&mut entries.into_iter()));
        }
        for (i, c) in self.signature.constants().iter().enumerate() {
            let _ = writeln!(out, "const {} = {}", c.name, self.element(self.layout.const_sorts[i], self.cells[i]));
        }
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_model(&mut s);
        f.write_str(&s)
    }
}

fn layout_domain_at(layout: &Layout, pos: usize) -> u32 {
    if pos < layout.const_sorts.len() {
        return layout.sizes[layout.const_sorts[pos]];
    }
    for t in layout.functions.iter().chain(&layout.predicates) {
        if pos >= t.base && pos < t.base + t.count {
            return layout.domain(t.value_sort);
        }
    }
    0
}

/// Assembles a structure from named interpretations given as elements.
pub struct StructureBuilder {
    signature: Arc<Signature>,
    carriers: BTreeMap<usize, Vec<Element>>,
    predicates: BTreeMap<usize, Vec<Vec<Element>>>,
    functions: BTreeMap<usize, Vec<(Vec<Element>, Element)>>,
    constants: BTreeMap<usize, Element>,
}

impl StructureBuilder {
    pub fn new(signature: Arc<Signature>) -> Self {
        StructureBuilder {
            signature,
            carriers: BTreeMap::new(),
            predicates: BTreeMap::new(),
            functions: BTreeMap::new(),
            constants: BTreeMap::new(),
        }
    }

    pub fn carrier(&mut self, sort: &str, elements: Vec<Element>) -> Result<&mut Self, StructureError> {
        match self.signature.lookup(sort) {
            Some(SymbolRef::Sort(i)) => {
                self.carriers.insert(i, elements);
                Ok(self)
            }
            _ => Err(StructureError::UnknownSymbol(sort.into())),
        }
    }

    /// Carrier of atoms `0..n`.
    pub fn atoms(&mut self, sort: &str, n: u32) -> Result<&mut Self, StructureError> {
        let s = Sort::new(sort);
        self.carrier(sort, (0..n).map(|i| Element::atom(&s, i)).collect())
    }

    pub fn predicate(&mut self, name: &str, tuples: Vec<Vec<Element>>) -> Result<&mut Self, StructureError> {
        match self.signature.lookup(name) {
            Some(SymbolRef::Predicate(i)) => {
                self.predicates.entry(i).or_default().extend(tuples);
                Ok(self)
            }
            _ => Err(StructureError::UnknownSymbol(name.into())),
        }
    }

    pub fn function(
        &mut self,
        name: &str,
        entries: Vec<(Vec<Element>, Element)>,
    ) -> Result<&mut Self, StructureError> {
        match self.signature.lookup(name) {
            Some(SymbolRef::Function(i)) => {
                self.functions.entry(i).or_default().extend(entries);
                Ok(self)
            }
            _ => Err(StructureError::UnknownSymbol(name.into())),
        }
    }

    pub fn constant(&mut self, name: &str, e: Element) -> Result<&mut Self, StructureError> {
        match self.signature.lookup(name) {
            Some(SymbolRef::Constant(i)) => {
                self.constants.insert(i, e);
                Ok(self)
            }
            _ => Err(StructureError::UnknownSymbol(name.into())),
        }
    }

    pub fn build(&self) -> Result<FiniteStructure, StructureError> {
        let sig = &self.signature;
        let mut carriers = Vec::new();
        for (i, s) in sig.sorts().iter().enumerate() {
            let mut c = self.carriers.get(&i).cloned().ok_or_else(|| StructureError::MissingCarrier(s.as_str().into()))?;
            let n = c.len();
            c.sort();
            c.dedup();
            if c.len() != n {
                return Err(StructureError::DuplicateElement(s.as_str().into()));
            }
            carriers.push(c);
        }
        let sizes: Vec<u32> = carriers.iter().map(|c| c.len() as u32).collect();
        let layout = Layout::new(sig, &sizes);
        let mut cells = vec![0u32; layout.len];
        let index = |sort: usize, e: &Element| -> Result<u32, StructureError> {
            carriers[sort].binary_search(e).map(|i| i as u32).map_err(|_| StructureError::NotInCarrier {
                sort: sig.sorts()[sort].as_str().into(),
                element: format!("{e}"),
            })
        };
        let tuple = |name: &str, sorts: &[usize], es: &[Element]| -> Result<Vec<u32>, StructureError> {
            if sorts.len() != es.len() {
                return Err(StructureError::ArityMismatch(name.into()));
            }
            sorts.iter().zip(es).map(|(&s, e)| index(s, e)).collect()
        };
        for (i, c) in sig.constants().iter().enumerate() {
            let e = self.constants.get(&i).ok_or_else(|| StructureError::MissingConstant(c.name.as_str().into()))?;
            cells[i] = index(layout.const_sorts[i], e)?;
        }
        for (i, f) in sig.functions().iter().enumerate() {
            let t = &layout.functions[i];
            let mut seen = vec![false; t.count];
            for (args, val) in self.functions.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
                let a = tuple(f.name.as_str(), &t.arg_sorts, args)?;
                let pos = t.offset(&a);
                let v = index(t.value_sort.expect("function"), val)?;
                if seen[pos - t.base] && cells[pos] != v {
                    return Err(StructureError::ConflictingValue {
                        function: f.name.as_str().into(),
                        args: join_elements(args),
                    });
                }
                seen[pos - t.base] = true;
                cells[pos] = v;
            }
            if let Some(k) = seen.iter().position(|b| !b) {
                let args = t.tuple(k, &sizes);
                let es: Vec<Element> =
                    args.iter().zip(&t.arg_sorts).map(|(&a, &s)| carriers[s][a as usize].clone()).collect();
                return Err(StructureError::PartialFunction {
                    function: f.name.as_str().into(),
                    args: join_elements(&es),
                });
            }
        }
        for (i, p) in sig.predicates().iter().enumerate() {
            let t = &layout.predicates[i];
            for args in self.predicates.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
                let a = tuple(p.name.as_str(), &t.arg_sorts, args)?;
                cells[t.offset(&a)] = 1;
            }
        }
        FiniteStructure::from_cells(sig.clone(), carriers, cells)
    }
}

fn join_elements(es: &[Element]) -> String {
    es.iter().map(|e| format!("{e}")).collect::<Vec<_>>().join(", ")
}
