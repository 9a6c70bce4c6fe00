//! A many-sorted first-order logic workbench over finite models.
//!
//! Covers sort-checked syntax, finite structures and exhaustive model
//! enumeration, definitional and Morita extensions, the constructive
//! expansion of models along extensions, translation of extended formulas
//! back to the base signature through codes, bounded categories of models,
//! and verification of equivalence witnesses. Every semantic verdict is
//! relative to an explicit bound on carrier sizes.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod category;
pub mod equivalence;
pub mod expansion;
pub mod extensions;
pub mod morphisms;
pub mod structures;
pub mod syntax;
pub mod text;
pub mod translator;
