use alloc::boxed::Box;
use core::fmt;

use crate::syntax::Sort;

/// A carrier element. Base sorts use atoms; the other constructors hold the
/// values of sorts built by products, coproducts, subsorts and quotients.
///
/// The derived order compares the constructor first, atoms by index.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Element {
    Atom { index: u32, sort: Sort },
    Pair(Box<Element>, Box<Element>),
    InjL(Box<Element>),
    InjR(Box<Element>),
    Sub(Box<Element>),
    /// Stores the least member of the class.
    Class(Box<Element>),
}

impl Element {
    pub fn atom(sort: &Sort, index: u32) -> Element {
        Element::Atom { index, sort: sort.clone() }
    }

    pub fn pair(a: Element, b: Element) -> Element {
        Element::Pair(Box::new(a), Box::new(b))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom { index, sort } => write!(f, "{sort}_{index}"),
            Element::Pair(a, b) => write!(f, "pair({a}, {b})"),
            Element::InjL(a) => write!(f, "inl({a})"),
            Element::InjR(a) => write!(f, "inr({a})"),
            Element::Sub(a) => write!(f, "sub({a})"),
            Element::Class(a) => write!(f, "class({a})"),
        }
    }
}
