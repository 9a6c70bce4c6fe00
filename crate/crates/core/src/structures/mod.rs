//! Finite structures, satisfaction, reducts, model enumeration and bounded
//! entailment.

mod bound;
mod canon;
mod element;
mod enumerate;
mod eval;
mod layout;
mod structure;

pub use bound::Bound;
pub use canon::{canonical_cells, canonical_form, is_canonical, is_canonical_cells};
pub use element::Element;
pub use enumerate::{bounded_entails, enumerate_models, refuted_among, Entailment, ModelEnumerator};
pub use eval::{
    eval_term, is_model, satisfies, Assignment, Compiled, CompiledTheory, EvalError, Interp, Partial,
};
pub use layout::{CellDesc, CellKind, Layout, SymbolCells};
pub use structure::{FiniteStructure, StructureBuilder, StructureError};

use alloc::sync::Arc;
use crate::syntax::Signature;

/// `A|Σ`: forgets the symbols outside `sub`.
pub fn reduct(a: &FiniteStructure, sub: &Arc<Signature>) -> Result<FiniteStructure, StructureError> {
    a.reduct(sub)
}
