use alloc::collections::BTreeMap;
use core::fmt;

use crate::syntax::Sort;

/// Per-sort maximum carrier sizes with a default for unlisted sorts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bound {
    default: u32,
    per_sort: BTreeMap<Sort, u32>,
}

impl Bound {
    pub fn uniform(n: u32) -> Bound {
        Bound { default: n.max(1), per_sort: BTreeMap::new() }
    }

    pub fn with(mut self, sort: &Sort, n: u32) -> Bound {
        self.per_sort.insert(sort.clone(), n.max(1));
        self
    }

    pub fn set(&mut self, sort: &Sort, n: u32) {
        self.per_sort.insert(sort.clone(), n.max(1));
    }

    pub fn get(&self, sort: &Sort) -> u32 {
        self.per_sort.get(sort).copied().unwrap_or(self.default)
    }

    pub fn default_size(&self) -> u32 {
        self.default
    }

    /// True when every listed cap is the default.
    pub fn is_uniform(&self) -> bool {
        self.per_sort.values().all(|&n| n == self.default)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_uniform() {
            return write!(f, "{}", self.default);
        }
        write!(f, "{}", self.default)?;
        for (s, n) in &self.per_sort {
            if *n != self.default {
                write!(f, ", {s}<={n}")?;
            }
        }
        Ok(())
    }
}
