//! File formats, the bundled corpus and the command-line driver for the
//! `morita_core` workbench.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use morita_core::extensions::ExtensionStep;
use morita_core::structures::FiniteStructure;
use morita_core::syntax::{Signature, Theory};
use morita_core::text::{parse_extension, parse_theory, ParseError};

pub mod checks;
pub mod cli;
pub mod corpus;
pub mod formats;
pub mod gen;
pub mod witness;

pub use morita_core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{}:{}: {}", path.display(), error.line, error.column, error.message)]
    Parse { path: PathBuf, error: ParseError },
    #[error("{}:{line}: {message}", path.display())]
    Format { path: PathBuf, line: usize, message: String },
}

impl Error {
    pub fn parse(path: &Path, error: ParseError) -> Error {
        Error::Parse { path: path.to_owned(), error }
    }

    pub fn format(path: &Path, line: usize, message: impl Into<String>) -> Error {
        Error::Format { path: path.to_owned(), line, message: message.into() }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })
}

pub fn load_theory(path: &Path) -> Result<Theory, Error> {
    parse_theory(&read(path)?).map_err(|e| Error::parse(path, e))
}

pub fn load_step(path: &Path, base: &Theory) -> Result<ExtensionStep, Error> {
    parse_extension(&read(path)?, &base.signature).map_err(|e| Error::parse(path, e))
}

pub fn load_model(path: &Path, sig: &Arc<Signature>) -> Result<FiniteStructure, Error> {
    formats::parse_model(&read(path)?, sig).map_err(|e| Error::parse(path, e))
}
