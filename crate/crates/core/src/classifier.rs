//! The case analysis deciding which existence result covers a lattice and a
//! queried class, emitted as a certificate whose claims can be re-verified
//! from the certificate alone.
//!
//! Decision order: isotropic lattices (always the case from rank 5 on) are
//! elliptic; anisotropic lattices of odd rank are covered by the odd-rank
//! result; in rank 4 the two exceptional lattices need the triple condition
//! and every other anisotropic lattice has infinite automorphism group; in
//! rank 2 conditions A1, A2 and A3 are tried in turn on the queried class.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::conditions::{a1_witness, check_a1, check_a2, check_a3, rank4_search, Condition, ConditionWitness};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::isometry::recognize_exceptional;
use crate::lattice::{DivisorClass, Lattice};
use crate::linalg::Matrix;
use crate::positivity::{is_big_nef, validate_ample, BigNefVerdict, RootSet};
use crate::qform::{isotropic_exists, IsotropyMethod, IsotropyStatus, SearchConfig};

/// Degree up to which root sets are enumerated when the caller supplies none.
pub const DEFAULT_ROOT_DEGREE: u64 = 10;

pub const ASSUMPTION_GENERIC: &str = "generic member of moduli";
pub const ASSUMPTION_NON_SUPERSPECIAL: &str = "surface is not superspecial (Artin invariant > 1 if supersingular)";
pub const ASSUMPTION_NON_ISOTRIVIAL: &str = "elliptic fibration is not isotrivial (characteristic 2 or 3)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    OddRank { rank: usize },
    Elliptic { witness: DivisorClass, method: IsotropyMethod },
    Rank4Exceptional { which: u8, witness: ConditionWitness },
    Rank2Condition { which: Condition, witness: ConditionWitness },
    InfiniteAutomorphismsDeduced,
    Inconclusive { reasons: Vec<String> },
}

impl Verdict {
    pub fn is_conclusive(&self) -> bool {
        !matches!(self, Verdict::Inconclusive { .. })
    }

    /// Short name of the branch, identical in text and JSON reports.
    pub fn label(&self) -> String {
        match self {
            Verdict::OddRank { .. } => "OddRank".into(),
            Verdict::Elliptic { .. } => "Elliptic".into(),
            Verdict::Rank4Exceptional { which, .. } => format!("Rank4Exceptional({which})"),
            Verdict::Rank2Condition { which, .. } => format!("Rank2Condition({which})"),
            Verdict::InfiniteAutomorphismsDeduced => "InfiniteAutomorphismsDeduced".into(),
            Verdict::Inconclusive { .. } => "Inconclusive".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub lattice: Option<String>,
    #[serde(with = "crate::int::serde_int::matrix")]
    pub gram: Matrix,
    pub ample: DivisorClass,
    pub queried: DivisorClass,
    pub characteristic: u64,
    pub verdict: Verdict,
    pub assumptions: Vec<String>,
}

/// [`classify_with`] under the default search limits.
pub fn classify(
    lattice: &Lattice,
    ample: &DivisorClass,
    queried: Option<&DivisorClass>,
    characteristic: u64,
    roots: Option<&RootSet>,
) -> Result<Certificate> {
    classify_with(lattice, ample, queried, characteristic, roots, &SearchConfig::default())
}

/// Classifies `lattice` for the queried class (the ample class when absent).
pub fn classify_with(
    lattice: &Lattice,
    ample: &DivisorClass,
    queried: Option<&DivisorClass>,
    characteristic: u64,
    roots: Option<&RootSet>,
    config: &SearchConfig,
) -> Result<Certificate> {
    lattice.require_hyperbolic()?;
    validate_ample(lattice, ample)?;
    let owned;
    let roots = match roots {
        Some(r) => {
            if &r.ample != ample {
                return Err(Error::InvalidInput("root set was computed for a different ample class".into()));
            }
            r
        }
        None => {
            owned = RootSet::enumerate(lattice, ample, &Int::from(DEFAULT_ROOT_DEGREE))?;
            &owned
        }
    };
    let queried = queried.unwrap_or(ample).clone();
    lattice.check(&queried)?;

    let mut assumptions = Vec::new();
    if characteristic > 0 {
        assumptions.push(ASSUMPTION_NON_SUPERSPECIAL.to_string());
    }
    let verdict = decide(lattice, &queried, characteristic, roots, config, &mut assumptions)?;
    Ok(Certificate {
        lattice: lattice.name().map(str::to_string),
        gram: lattice.gram().clone(),
        ample: ample.clone(),
        queried,
        characteristic,
        verdict,
        assumptions,
    })
}

fn root_set_assumption(roots: &RootSet) -> String {
    if roots.complete_up_to_bound {
        format!("RootSet complete up to degree {}", roots.degree_bound)
    } else {
        format!("RootSet supplied up to degree {} without completeness", roots.degree_bound)
    }
}

fn decide(
    lattice: &Lattice,
    queried: &DivisorClass,
    characteristic: u64,
    roots: &RootSet,
    config: &SearchConfig,
    assumptions: &mut Vec<String>,
) -> Result<Verdict> {
    let rank = lattice.rank();
    let isotropy = isotropic_exists(lattice, config)?;
    match isotropy.status {
        IsotropyStatus::Isotropic { witness: Some(witness) } => {
            if characteristic == 2 || characteristic == 3 {
                assumptions.push(ASSUMPTION_NON_ISOTRIVIAL.to_string());
            }
            return Ok(Verdict::Elliptic { witness, method: isotropy.method });
        }
        IsotropyStatus::Isotropic { witness: None } => {
            return Ok(inconclusive(format!(
                "lattice is isotropic ({:?}) but no isotropic vector has coordinates within the search cap {}",
                isotropy.method, config.coordinate_cap
            )));
        }
        IsotropyStatus::Unknown => {
            return Ok(inconclusive("isotropy could not be decided".into()));
        }
        IsotropyStatus::Anisotropic { .. } => {}
    }
    if rank % 2 == 1 {
        return Ok(Verdict::OddRank { rank });
    }
    match rank {
        4 => {
            let Some((which, _)) = recognize_exceptional(lattice)? else {
                return Ok(Verdict::InfiniteAutomorphismsDeduced);
            };
            assumptions.push(root_set_assumption(roots));
            if let Some(reason) = big_nef_failure(lattice, queried, roots)? {
                return Ok(inconclusive(reason));
            }
            Ok(match rank4_search(lattice, queried, &roots.ample)? {
                Some(witness) => {
                    assumptions.push(ASSUMPTION_GENERIC.to_string());
                    Verdict::Rank4Exceptional { which, witness }
                }
                None => inconclusive(format!(
                    "exceptional lattice {which}: {queried} is not L1 + L2 + L3 with L·Li > 0 and Li² > 0"
                )),
            })
        }
        2 => {
            assumptions.push(root_set_assumption(roots));
            if let Some(reason) = big_nef_failure(lattice, queried, roots)? {
                return Ok(inconclusive(reason));
            }
            let mut reasons = Vec::new();
            let witness = if check_a1(lattice)? {
                a1_witness(lattice)?
            } else {
                reasons.push(format!("A1: det(Λ) = {} is odd", lattice.discriminant()));
                None
            };
            let witness = match witness {
                Some(w) => Some(w),
                None => {
                    let w = check_a2(lattice, queried, roots)?;
                    if w.is_none() {
                        reasons.push(format!("A2: {queried} is not L1 + L2 + L3 with L·Li > 0 and Li² > 0"));
                    }
                    w
                }
            };
            let witness = match witness {
                Some(w) => Some(w),
                None => {
                    let w = check_a3(lattice, queried, roots)?;
                    if w.is_none() {
                        reasons.push(format!(
                            "A3: {queried} is not L1 + L2 with L2 a (−2)-class meeting the divisibility and degree conditions"
                        ));
                    }
                    w
                }
            };
            Ok(match witness {
                Some(witness) => {
                    assumptions.push(ASSUMPTION_GENERIC.to_string());
                    Verdict::Rank2Condition { which: witness.condition, witness }
                }
                None => Verdict::Inconclusive { reasons },
            })
        }
        // Even ranks other than 2 and 4 are ≥ 6, hence isotropic.
        _ => Ok(inconclusive(format!("anisotropic lattice of rank {rank}"))),
    }
}

fn inconclusive(reason: String) -> Verdict {
    Verdict::Inconclusive { reasons: vec![reason] }
}

fn big_nef_failure(lattice: &Lattice, queried: &DivisorClass, roots: &RootSet) -> Result<Option<String>> {
    Ok(match is_big_nef(lattice, queried, roots)? {
        BigNefVerdict::BigAndNef => None,
        BigNefVerdict::NefNotBig => Some(format!("queried class {queried} is nef but not big")),
        BigNefVerdict::NotNef(ob) => Some(format!("queried class {queried} is not nef: it {ob}")),
        BigNefVerdict::Unknown(why) => Some(format!("nefness of {queried} undecided: {why}")),
    })
}

impl Certificate {
    /// The lattice the certificate was issued for.
    pub fn lattice(&self) -> Result<Lattice> {
        let l = Lattice::new(self.gram.clone())?;
        Ok(match &self.lattice {
            Some(name) => l.named(name.clone()),
            None => l,
        })
    }

    /// Re-verifies every claim of the verdict from the certificate alone.
    /// An inconclusive certificate claims nothing beyond valid inputs.
    pub fn verify(&self) -> Result<()> {
        let lattice = self.lattice()?;
        lattice.require_hyperbolic()?;
        validate_ample(&lattice, &self.ample)?;
        lattice.check(&self.queried)?;
        let rank = lattice.rank();
        let anisotropic = || -> Result<bool> {
            Ok(isotropic_exists(&lattice, &SearchConfig::default())?.is_anisotropic())
        };
        let big_nef = || -> Result<()> {
            let roots = RootSet::enumerate(&lattice, &self.ample, &Int::from(DEFAULT_ROOT_DEGREE))?;
            match big_nef_failure(&lattice, &self.queried, &roots)? {
                None => Ok(()),
                Some(reason) => Err(Error::InvalidInput(reason)),
            }
        };
        match &self.verdict {
            Verdict::Elliptic { witness, .. } => {
                lattice.check(witness)?;
                if witness.is_zero() || !lattice.sq(witness).is_zero() {
                    return Err(Error::InvalidInput(format!("{witness} is not a nonzero isotropic class")));
                }
                if !lattice.is_primitive(witness)? {
                    return Err(Error::InvalidInput(format!("{witness} is not primitive")));
                }
            }
            Verdict::OddRank { rank: claimed } => {
                if *claimed != rank || rank % 2 == 0 {
                    return Err(Error::InvalidInput(format!("claimed odd rank {claimed}, lattice has rank {rank}")));
                }
                if !anisotropic()? {
                    return Err(Error::InvalidInput("odd-rank verdict on a lattice not proven anisotropic".into()));
                }
            }
            Verdict::Rank4Exceptional { which, witness } => {
                match recognize_exceptional(&lattice)? {
                    Some((w, _)) if w == *which => {}
                    _ => return Err(Error::InvalidInput(format!("lattice is not exceptional lattice {which}"))),
                }
                if witness.condition != Condition::Rank4 {
                    return Err(Error::InvalidInput(format!("expected an R4 witness, found {}", witness.condition)));
                }
                big_nef()?;
                witness.verify(&lattice, &self.queried)?;
            }
            Verdict::Rank2Condition { which, witness } => {
                if rank != 2 {
                    return Err(Error::InvalidRank { expected: "2".into(), found: rank });
                }
                if witness.condition != *which || *which == Condition::Rank4 {
                    return Err(Error::InvalidInput(format!("{which} verdict carries a {} witness", witness.condition)));
                }
                if !anisotropic()? {
                    return Err(Error::InvalidInput("rank-2 condition verdict on an isotropic lattice".into()));
                }
                big_nef()?;
                witness.verify(&lattice, &self.queried)?;
            }
            Verdict::InfiniteAutomorphismsDeduced => {
                if rank != 4 || !anisotropic()? || recognize_exceptional(&lattice)?.is_some() {
                    return Err(Error::InvalidInput(
                        "infinite automorphisms are only deduced for anisotropic non-exceptional rank-4 lattices".into(),
                    ));
                }
            }
            Verdict::Inconclusive { .. } => {}
        }
        Ok(())
    }
}
