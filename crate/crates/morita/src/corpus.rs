//! The bundled corpus of theories, extension steps and witnesses.

use std::path::{Path, PathBuf};

use morita_core::extensions::ExtensionStep;
use morita_core::syntax::Theory;

use crate::{load_step, load_theory, Error};

/// Location of the corpus shipped with this crate.
pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// A theory together with one extension step over it.
#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub theory: Theory,
    pub step: ExtensionStep,
}

/// Every `NAME.th` / `NAME.ext` pair in `dir`, sorted by name.
pub fn load_cases(dir: &Path) -> Result<Vec<Case>, Error> {
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io { path: dir.to_owned(), source })?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let p = e.path();
            (p.extension()? == "th").then(|| p.file_stem()?.to_str().map(String::from)).flatten()
        })
        .collect();
    names.sort();
    let mut out = Vec::new();
    for name in names {
        let theory = load_theory(&dir.join(format!("{name}.th")))?;
        let step = load_step(&dir.join(format!("{name}.ext")), &theory)?;
        out.push(Case { name, theory, step });
    }
    Ok(out)
}

pub fn bundled_cases() -> Result<Vec<Case>, Error> {
    load_cases(&corpus_dir().join("cases"))
}

pub fn witness_path(name: &str) -> PathBuf {
    corpus_dir().join("witnesses").join(format!("{name}.wit"))
}

pub fn theory_path(name: &str) -> PathBuf {
    corpus_dir().join("theories").join(format!("{name}.th"))
}
