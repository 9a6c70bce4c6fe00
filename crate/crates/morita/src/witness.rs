//! Witness files.
//!
//! ```text
//! theory left {
//!   <theory lines>
//! }
//! theory right path/to/theory.th
//! chain left {
//!   step {
//!     <extension lines>
//!   }
//!   step path/to/step.ext
//! }
//! chain right {
//! }
//! bound = 3
//! ```
//!
//! Paths are relative to the witness file. Inline blocks keep their line
//! numbers in error messages.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use morita_core::equivalence::{MoritaWitness, Side};
use morita_core::extensions::ExtensionStep;
use morita_core::syntax::{Signature, Theory};
use morita_core::text::{parse_extension, parse_theory};

use crate::Error;

#[derive(Clone, Debug)]
pub struct WitnessFile {
    pub witness: MoritaWitness,
    pub bound: Option<u32>,
}

enum Source {
    /// Text padded with blank lines so line numbers match the witness file.
    Inline(String),
    File(PathBuf),
}

struct Lines<'a> {
    file: &'a Path,
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, &'a str)> {
        while let Some(&(n, l)) = self.lines.get(self.pos) {
            self.pos += 1;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Some((n, t));
            }
        }
        None
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::format(self.file, line, message)
    }

    /// Collects lines up to the matching `}`.
    fn block(&mut self, opened_at: usize) -> Result<String, Error> {
        let mut text = "\n".repeat(opened_at);
        let mut last = opened_at;
        while let Some(&(n, l)) = self.lines.get(self.pos) {
            self.pos += 1;
            if l.trim() == "}" {
                return Ok(text);
            }
            text.push_str(&"\n".repeat(n - last - 1));
            text.push_str(l);
            text.push('\n');
            last = n;
        }
        Err(self.err(opened_at, "unclosed `{`"))
    }

    fn source(&mut self, line: usize, rest: &str, base_dir: &Path) -> Result<Source, Error> {
        if rest == "{" {
            return Ok(Source::Inline(self.block(line)?));
        }
        if rest.is_empty() || rest.contains(char::is_whitespace) {
            return Err(self.err(line, "expected `{` or a single file path"));
        }
        Ok(Source::File(base_dir.join(rest)))
    }
}

fn side_of(word: &str) -> Option<Side> {
    match word {
        "left" => Some(Side::Left),
        "right" => Some(Side::Right),
        _ => None,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })
}

fn load_theory(src: Source, witness_path: &Path) -> Result<Theory, Error> {
    match src {
        Source::Inline(text) => parse_theory(&text).map_err(|e| Error::parse(witness_path, e)),
        Source::File(p) => parse_theory(&read(&p)?).map_err(|e| Error::parse(&p, e)),
    }
}

fn load_step(src: Source, base: &Arc<Signature>, witness_path: &Path) -> Result<ExtensionStep, Error> {
    match src {
        Source::Inline(text) => parse_extension(&text, base).map_err(|e| Error::parse(witness_path, e)),
        Source::File(p) => parse_extension(&read(&p)?, base).map_err(|e| Error::parse(&p, e)),
    }
}

/// Parses witness text; `path` names the file in errors and anchors relative paths.
pub fn parse_witness(text: &str, path: &Path) -> Result<WitnessFile, Error> {
    let base_dir = path.parent().unwrap_or(Path::new("."));
    let mut lines = Lines { file: path, lines: text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(), pos: 0 };
    let mut theories: [Option<Theory>; 2] = [None, None];
    let mut chains: [Option<Vec<(usize, Source)>>; 2] = [None, None];
    let mut bound = None;
    while let Some((n, line)) = lines.next() {
        let mut words = line.splitn(3, char::is_whitespace);
        let kw = words.next().unwrap_or_default();
        match kw {
            "theory" | "chain" => {
                let side = words.next().and_then(side_of).ok_or_else(|| lines.err(n, "expected `left` or `right`"))?;
                let rest = words.next().unwrap_or_default().trim();
                let k = side as usize;
                if kw == "theory" {
                    if theories[k].is_some() {
                        return Err(lines.err(n, format!("second {side} theory")));
                    }
                    let src = lines.source(n, rest, base_dir)?;
                    theories[k] = Some(load_theory(src, path)?);
                } else {
                    if chains[k].is_some() {
                        return Err(lines.err(n, format!("second {side} chain")));
                    }
                    if rest != "{" {
                        return Err(lines.err(n, "expected `{` after the chain side"));
                    }
                    let mut steps = Vec::new();
                    loop {
                        let Some((m, l)) = lines.next() else {
                            return Err(lines.err(n, "unclosed chain"));
                        };
                        if l == "}" {
                            break;
                        }
                        let Some(rest) = l.strip_prefix("step") else {
                            return Err(lines.err(m, "expected `step` or `}`"));
                        };
                        steps.push((m, lines.source(m, rest.trim(), base_dir)?));
                    }
                    chains[k] = Some(steps);
                }
            }
            "bound" => {
                let value = line["bound".len()..].trim().strip_prefix('=').map(str::trim);
                let n_value = value.and_then(|v| v.parse::<u32>().ok()).filter(|&v| v > 0);
                bound = Some(n_value.ok_or_else(|| lines.err(n, "expected `bound = <positive integer>`"))?);
            }
            other => return Err(lines.err(n, format!("unknown witness entry `{other}`"))),
        }
    }
    let [left, right] = theories;
    let left = left.ok_or_else(|| Error::format(path, 1, "missing left theory"))?;
    let right = right.ok_or_else(|| Error::format(path, 1, "missing right theory"))?;
    let mut built: [Vec<ExtensionStep>; 2] = [Vec::new(), Vec::new()];
    for (k, start) in [(0, &left), (1, &right)] {
        let mut sig = start.signature.clone();
        for (_, src) in chains[k].take().unwrap_or_default() {
            let step = load_step(src, &sig, path)?;
            sig = step.derived().clone();
            built[k].push(step);
        }
    }
    let [left_chain, right_chain] = built;
    Ok(WitnessFile { witness: MoritaWitness { left, right, left_chain, right_chain }, bound })
}

pub fn load_witness(path: &Path) -> Result<WitnessFile, Error> {
    parse_witness(&read(path)?, path)
}
