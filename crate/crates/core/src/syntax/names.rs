use alloc::sync::Arc;
use core::fmt;

macro_rules! interned_name {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(text: &str) -> Self {
                $name(Arc::from(text))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(text: &str) -> Self {
                $name::new(text)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }
    };
}

interned_name!(
    /// A sort symbol.
    Sort
);
interned_name!(
    /// The name of a predicate, function, constant or variable.
    Symbol
);

/// Prefix of the reserved namespace for generated variables.
pub const RESERVED_PREFIX: &str = "_v";

/// True when `name` lies in the generated-variable namespace.
pub fn is_reserved(name: &str) -> bool {
    name.starts_with('_')
}

/// A variable: identity is the pair (name, sort).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub name: Symbol,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: &str, sort: &Sort) -> Self {
        Var { name: Symbol::new(name), sort: sort.clone() }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}
