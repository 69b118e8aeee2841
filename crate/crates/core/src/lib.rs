//! Exact lattice arithmetic and existence-condition checks for even
//! hyperbolic lattices arising as Picard lattices of K3 surfaces.

pub mod binary;
pub mod classifier;
pub mod conditions;
pub mod corpus;
pub mod enumerate;
pub mod error;
pub mod int;
pub mod isometry;
pub mod lattice;
pub mod linalg;
pub mod local;
pub mod positivity;
pub mod qform;

pub use error::{Error, Result};
pub use int::{Int, Rat};
pub use lattice::{DivisibilityReport, DivisorClass, Lattice, SignatureTriple};
pub use classifier::{classify, Certificate, Verdict};
pub use conditions::{Condition, ConditionWitness};
pub use corpus::{corpus, corpus_entry, extended_corpus, CorpusEntry};
pub use positivity::RootSet;
