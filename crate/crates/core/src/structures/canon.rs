//! Lexicographically least encodings over all per-sort relabellings.
//!
//! A branch-and-bound search builds the relabelling position by position:
//! arguments take fresh labels by branching, unlabelled values are forced to
//! the next free label, and partial encodings are pruned against the best.

use alloc::vec;
use alloc::vec::Vec;

use super::layout::{CellDesc, Layout};
use super::structure::FiniteStructure;

const NONE: u32 = u32::MAX;

struct Search<'a> {
    layout: &'a Layout,
    descs: &'a [CellDesc],
    old: &'a [u32],
    inv: Vec<Vec<u32>>,
    fwd: Vec<Vec<u32>>,
    cur: Vec<u32>,
    best: Option<Vec<u32>>,
    best_fwd: Vec<Vec<u32>>,
    version: usize,
    check_only: bool,
    found_smaller: bool,
}

impl Search<'_> {
    fn assign(&mut self, sort: usize, old: u32) {
        self.fwd[sort][old as usize] = self.inv[sort].len() as u32;
        self.inv[sort].push(old);
    }

    fn unassign(&mut self, sort: usize) {
        let old = self.inv[sort].pop().expect("assigned");
        self.fwd[sort][old as usize] = NONE;
    }

    fn leaf(&mut self, less: bool) {
        if self.check_only {
            if less {
                self.found_smaller = true;
            }
            return;
        }
        if less || self.best.is_none() {
            let mut fwd = self.fwd.clone();
            for (s, map) in fwd.iter_mut().enumerate() {
                let mut next = self.inv[s].len() as u32;
                for slot in map.iter_mut() {
                    if *slot == NONE {
                        *slot = next;
                        next += 1;
                    }
                }
            }
            self.best = Some(self.cur.clone());
            self.best_fwd = fwd;
            self.version += 1;
        }
    }

    fn go(&mut self, p: usize, less: bool) {
        if self.found_smaller {
            return;
        }
        if p == self.descs.len() {
            self.leaf(less);
            return;
        }
        let d = &self.descs[p];
        for (j, &a) in d.args.iter().enumerate() {
            let s = d.arg_sorts[j];
            if a as usize >= self.inv[s].len() {
                let version = self.version;
                for e in 0..self.layout.sizes[s] {
                    if self.fwd[s][e as usize] != NONE {
                        continue;
                    }
                    self.assign(s, e);
                    self.go(p, less && self.version == version);
                    self.unassign(s);
                    if self.found_smaller {
                        return;
                    }
                }
                return;
            }
        }
        let old_args: Vec<u32> =
            d.args.iter().zip(&d.arg_sorts).map(|(&a, &s)| self.inv[s][a as usize]).collect();
        let v_old = self.old[self.layout.position(d.kind, &old_args)];
        let (val, forced) = match d.value_sort {
            None => (v_old, None),
            Some(t) => match self.fwd[t][v_old as usize] {
                NONE => (self.inv[t].len() as u32, Some(t)),
                known => (known, None),
            },
        };
        let mut less_here = less;
        if !less {
            if let Some(b) = &self.best {
                if val > b[p] {
                    return;
                }
                less_here = val < b[p];
            }
        }
        if let Some(t) = forced {
            self.assign(t, v_old);
        }
        self.cur[p] = val;
        self.go(p + 1, less_here);
        if let Some(t) = forced {
            self.unassign(t);
        }
    }
}

fn search<'a>(layout: &'a Layout, descs: &'a [CellDesc], cells: &'a [u32], best: Option<Vec<u32>>) -> Search<'a> {
    let check_only = best.is_some();
    Search {
        layout,
        descs,
        old: cells,
        inv: layout.sizes.iter().map(|_| Vec::new()).collect(),
        fwd: layout.sizes.iter().map(|&n| vec![NONE; n as usize]).collect(),
        cur: vec![0; descs.len()],
        best,
        best_fwd: Vec::new(),
        version: 0,
        check_only,
        found_smaller: false,
    }
}

/// Least cell vector over all relabellings, with the relabelling
/// `old index -> new index` per sort that produces it.
pub fn canonical_cells(layout: &Layout, descs: &[CellDesc], cells: &[u32]) -> (Vec<u32>, Vec<Vec<u32>>) {
    let mut s = search(layout, descs, cells, None);
    s.go(0, false);
    (s.best.expect("at least one labelling"), s.best_fwd)
}

/// True when no relabelling yields a smaller cell vector.
pub fn is_canonical_cells(layout: &Layout, descs: &[CellDesc], cells: &[u32]) -> bool {
    let mut s = search(layout, descs, cells, Some(cells.to_vec()));
    s.go(0, false);
    !s.found_smaller
}

/// The canonical representative of `m`'s isomorphism class (atom carriers)
/// and the isomorphism `m -> representative` as per-sort index maps.
pub fn canonical_form(m: &FiniteStructure) -> (FiniteStructure, Vec<Vec<u32>>) {
    let descs = m.layout().cells();
    let (cells, fwd) = canonical_cells(m.layout(), &descs, m.cells());
    let rep = FiniteStructure::with_atoms(m.signature().clone(), m.sizes(), cells).expect("same shape");
    (rep, fwd)
}

/// True when `m`'s cells are already the least encoding of its class.
pub fn is_canonical(m: &FiniteStructure) -> bool {
    let descs = m.layout().cells();
    is_canonical_cells(m.layout(), &descs, m.cells())
}
