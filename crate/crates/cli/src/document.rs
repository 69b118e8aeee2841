//! Lattice documents: a TOML file naming a Gram matrix, an ample class and
//! optionally a list of (−2)-classes, validated on load.

use std::path::Path;

use k3cert_core::linalg::Matrix;
use k3cert_core::positivity::validate_ample;
use k3cert_core::{corpus_entry, DivisorClass, Int, Lattice, RootSet};
use serde::Deserialize;

use crate::CliError;

/// Degree bound used when a document lists no roots and names no bound.
pub const DEFAULT_ROOT_DEGREE: u64 = k3cert_core::classifier::DEFAULT_ROOT_DEGREE;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub name: String,
    #[serde(with = "k3cert_core::int::serde_int::matrix")]
    pub gram: Matrix,
    pub ample: DivisorClass,
    #[serde(default)]
    pub roots: Option<Vec<DivisorClass>>,
    #[serde(default)]
    pub root_degree_bound: Option<u64>,
    #[serde(default)]
    pub complete: Option<bool>,
}

/// A validated document.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub lattice: Lattice,
    pub ample: DivisorClass,
    pub roots: RootSet,
}

impl LatticeDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::new(format!("parse error: {}", e.to_string().trim_end())))
    }

    pub fn validate(self) -> Result<Loaded, CliError> {
        let invalid = |field: &str, msg: String| CliError::new(format!("validation error in `{field}`: {msg}"));
        let lattice = Lattice::new(self.gram).map_err(|e| invalid("gram", e.to_string()))?.named(self.name);
        lattice.require_hyperbolic().map_err(|e| invalid("gram", e.to_string()))?;
        validate_ample(&lattice, &self.ample).map_err(|e| invalid("ample", e.to_string()))?;
        let roots = match self.roots {
            None => {
                let bound = Int::from(self.root_degree_bound.unwrap_or(DEFAULT_ROOT_DEGREE));
                RootSet::enumerate(&lattice, &self.ample, &bound).map_err(|e| invalid("roots", e.to_string()))?
            }
            Some(list) => {
                let bound = match self.root_degree_bound {
                    Some(b) => Int::from(b),
                    None => {
                        let mut max = Int::from(0);
                        for r in &list {
                            let d = lattice.pair(&self.ample, r).map_err(|e| invalid("roots", e.to_string()))?;
                            max = max.max(d);
                        }
                        max
                    }
                };
                let set = RootSet::new(&lattice, &self.ample, list, &bound, self.complete.unwrap_or(false))
                    .map_err(|e| invalid("roots", e.to_string()))?;
                if let Some(r) = set.roots.iter().find(|r| set.degree_of(&lattice, r).map_or(false, |d| d > bound)) {
                    return Err(invalid("root_degree_bound", format!("root {r} exceeds the bound {bound}")));
                }
                set
            }
        };
        Ok(Loaded { lattice, ample: self.ample, roots })
    }
}

/// Resolves `--lattice`: an existing file is read as a document, anything
/// else is looked up in the bundled corpus.
pub fn load(arg: &str) -> Result<Loaded, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::new(format!("cannot read {arg}: {e}")))?;
        return LatticeDocument::parse(&text)
            .and_then(LatticeDocument::validate)
            .map_err(|e| CliError::new(format!("{arg}: {}", e.0)));
    }
    match corpus_entry(arg) {
        Some(e) => Ok(Loaded { lattice: e.lattice, ample: e.ample, roots: e.roots }),
        None => Err(CliError::new(format!("{arg:?} is neither a readable file nor a corpus lattice (see `k3cert corpus`)"))),
    }
}

/// Parses comma-separated integer coordinates.
pub fn parse_class(text: &str, rank: usize) -> Result<DivisorClass, CliError> {
    let coords = text
        .split(',')
        .map(|t| t.trim().parse::<Int>().map_err(|_| CliError::new(format!("--class: {t:?} is not an integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != rank {
        return Err(CliError::new(format!("--class has {} coordinates, the lattice has rank {rank}", coords.len())));
    }
    Ok(DivisorClass::new(coords))
}
