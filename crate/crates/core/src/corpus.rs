//! Bundled lattices, each with a designated ample class and its root set.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::classifier::DEFAULT_ROOT_DEGREE;
use crate::int::Int;
use crate::isometry::exceptional_rank4;
use crate::lattice::{DivisorClass, Lattice};
use crate::positivity::RootSet;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub lattice: Lattice,
    pub ample: DivisorClass,
    pub roots: RootSet,
    pub description: &'static str,
}

impl CorpusEntry {
    fn build(name: &str, rows: &[&[i64]], ample: &[i64], description: &'static str) -> Self {
        let lattice = Lattice::from_i64s(rows).expect("bundled Gram is valid").named(name);
        Self::with_lattice(lattice, ample, description)
    }

    fn with_lattice(lattice: Lattice, ample: &[i64], description: &'static str) -> Self {
        let ample = DivisorClass::from_i64s(ample);
        let roots =
            RootSet::enumerate(&lattice, &ample, &Int::from(DEFAULT_ROOT_DEGREE)).expect("bundled ample class is valid");
        CorpusEntry { lattice, ample, roots, description }
    }

    pub fn name(&self) -> &str {
        self.lattice.name().unwrap_or("")
    }
}

const CORE: [&str; 7] = ["U", "h2", "h4", "h6", "bryan-leung", "vinberg-1", "vinberg-2"];
const EXTRA: [&str; 3] = ["u-3m2", "diag-2-m6", "det-5"];

fn build(name: &str) -> Option<CorpusEntry> {
    Some(match name {
        "U" => CorpusEntry::build("U", &[&[0, 1], &[1, 0]], &[2, 1], "hyperbolic plane"),
        "h2" => CorpusEntry::build("h2", &[&[2]], &[1], "⟨2⟩, degree-2 polarisation"),
        "h4" => CorpusEntry::build("h4", &[&[4]], &[1], "⟨4⟩, quartic surfaces"),
        "h6" => CorpusEntry::build("h6", &[&[6]], &[1], "⟨6⟩"),
        "bryan-leung" => CorpusEntry::build("bryan-leung", &[&[-2, 1], &[1, 0]], &[1, 3], "section C and fibre F"),
        "vinberg-1" => CorpusEntry::with_lattice(exceptional_rank4(1), &[1, 0, 0, 0], "exceptional rank-4 lattice 1"),
        "vinberg-2" => CorpusEntry::with_lattice(exceptional_rank4(2), &[1, 1, 1, 0], "exceptional rank-4 lattice 2"),
        "u-3m2" => CorpusEntry::build(
            "u-3m2",
            &[&[0, 1, 0, 0, 0], &[1, 0, 0, 0, 0], &[0, 0, -2, 0, 0], &[0, 0, 0, -2, 0], &[0, 0, 0, 0, -2]],
            &[3, 4, -1, -1, -1],
            "U ⊕ ⟨−2⟩³",
        ),
        "diag-2-m6" => CorpusEntry::build("diag-2-m6", &[&[2, 0], &[0, -6]], &[1, 0], "⟨2⟩ ⊕ ⟨−6⟩, no (−2)-classes"),
        "det-5" => CorpusEntry::build("det-5", &[&[2, 1], &[1, -2]], &[1, 0], "determinant −5"),
        _ => return None,
    })
}

fn cached(name: &str) -> Option<CorpusEntry> {
    static CACHE: OnceLock<Mutex<HashMap<String, CorpusEntry>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap_or_else(|p| p.into_inner()).get(name) {
        return Some(e.clone());
    }
    let entry = build(name)?;
    cache.lock().unwrap_or_else(|p| p.into_inner()).insert(name.to_string(), entry.clone());
    Some(entry)
}

/// The hyperbolic plane, `⟨2d⟩` for `d = 1, 2, 3`, the Bryan–Leung lattice
/// and the two exceptional rank-4 lattices.
pub fn corpus() -> Vec<CorpusEntry> {
    CORE.iter().filter_map(|n| cached(n)).collect()
}

/// [`corpus`] plus test lattices: a rank-5 lattice, a root-free anisotropic
/// lattice with even determinant, and one with odd determinant.
pub fn extended_corpus() -> Vec<CorpusEntry> {
    CORE.iter().chain(EXTRA.iter()).filter_map(|n| cached(n)).collect()
}

/// Looks a lattice up by name, case-insensitively, in [`extended_corpus`].
pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    let canonical = CORE.iter().chain(EXTRA.iter()).find(|n| n.eq_ignore_ascii_case(name))?;
    cached(canonical)
}
