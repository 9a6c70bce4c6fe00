use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::Signature;

/// Placement of one symbol's table inside the flat cell vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolCells {
    pub base: usize,
    pub arg_sorts: Vec<usize>,
    pub strides: Vec<u32>,
    pub count: usize,
    /// `None` for predicates, whose cells hold 0 or 1.
    pub value_sort: Option<usize>,
}

impl SymbolCells {
    fn new(base: usize, arg_sorts: Vec<usize>, value_sort: Option<usize>, sizes: &[u32]) -> Self {
        let mut strides = vec![1u32; arg_sorts.len()];
        for i in (0..arg_sorts.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[arg_sorts[i + 1]];
        }
        let count = arg_sorts.iter().map(|&s| sizes[s] as usize).product();
        SymbolCells { base, arg_sorts, strides, count, value_sort }
    }

    /// Flat offset of an argument tuple.
    pub fn offset(&self, args: &[u32]) -> usize {
        self.base + args.iter().zip(&self.strides).map(|(a, s)| (a * s) as usize).sum::<usize>()
    }

    /// Decodes the `k`-th tuple in row-major order.
    pub fn tuple(&self, mut k: usize, sizes: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.arg_sorts.len()];
        for i in (0..self.arg_sorts.len()).rev() {
            let n = sizes[self.arg_sorts[i]] as usize;
            out[i] = (k % n) as u32;
            k /= n;
        }
        out
    }
}

/// What a single cell of the encoding stands for.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CellDesc {
    pub kind: CellKind,
    pub args: Vec<u32>,
    pub arg_sorts: Vec<usize>,
    pub value_sort: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CellKind {
    Constant(usize),
    Function(usize),
    Predicate(usize),
}

/// Cell layout of all structures over one signature with fixed carrier sizes.
///
/// Cells come in encoding order: constants, then function tables, then
/// predicate extensions, each in declaration order with row-major tuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Layout {
    pub sizes: Vec<u32>,
    pub const_sorts: Vec<usize>,
    pub functions: Vec<SymbolCells>,
    pub predicates: Vec<SymbolCells>,
    pub len: usize,
}

impl Layout {
    pub fn new(sig: &Signature, sizes: &[u32]) -> Layout {
        let idx = |s| sig.sort_index(s).expect("declared sort");
        let const_sorts: Vec<usize> = sig.constants().iter().map(|c| idx(&c.sort)).collect();
        let mut base = const_sorts.len();
        let mut functions = Vec::new();
        for f in sig.functions() {
            let cells = SymbolCells::new(
                base,
                f.domain.iter().map(idx).collect(),
                Some(idx(&f.codomain)),
                sizes,
            );
            base += cells.count;
            functions.push(cells);
        }
        let mut predicates = Vec::new();
        for p in sig.predicates() {
            let cells = SymbolCells::new(base, p.arity.iter().map(idx).collect(), None, sizes);
            base += cells.count;
            predicates.push(cells);
        }
        Layout { sizes: sizes.to_vec(), const_sorts, functions, predicates, len: base }
    }

    /// Number of values a cell may take.
    pub fn domain(&self, value_sort: Option<usize>) -> u32 {
        value_sort.map_or(2, |s| self.sizes[s])
    }

    /// Descriptions of all cells in encoding order.
    pub fn cells(&self) -> Vec<CellDesc> {
        let mut out = Vec::with_capacity(self.len);
        for (i, &s) in self.const_sorts.iter().enumerate() {
            out.push(CellDesc {
                kind: CellKind::Constant(i),
                args: Vec::new(),
                arg_sorts: Vec::new(),
                value_sort: Some(s),
            });
        }
        for (kinds, tables) in [
            (CellKind::Function as fn(usize) -> CellKind, &self.functions),
            (CellKind::Predicate as fn(usize) -> CellKind, &self.predicates),
        ] {
            for (i, t) in tables.iter().enumerate() {
                for k in 0..t.count {
                    out.push(CellDesc {
                        kind: kinds(i),
                        args: t.tuple(k, &self.sizes),
                        arg_sorts: t.arg_sorts.clone(),
                        value_sort: t.value_sort,
                    });
                }
            }
        }
        out
    }

    /// Flat position of the cell described by `kind` and `args`.
    pub fn position(&self, kind: CellKind, args: &[u32]) -> usize {
        match kind {
            CellKind::Constant(i) => i,
            CellKind::Function(i) => self.functions[i].offset(args),
            CellKind::Predicate(i) => self.predicates[i].offset(args),
        }
    }
}
