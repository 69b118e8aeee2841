//! Nefness, bigness and effectivity of divisor classes, the `≺` order, minimal
//! nef classes and the minimal nef decomposition.
//!
//! Everything is relative to an ample class `A`. On a K3 surface every class
//! `r` with `r² = −2` and `A·r > 0` is effective, so the lattice alone
//! determines which (−2)-classes are effective. Two facts make the tests
//! below exact whenever all roots up to the relevant degree are known:
//!
//! * **Wall bound.** If `v² ≥ 0`, `m = A·v > 0` and a root `r` of degree
//!   `k = A·r > 0` has `v·r < 0`, then Cauchy–Schwarz on the negative definite
//!   `A⊥` gives `v²k² + 2mk + A² + 2v²A² − 2m² ≤ 0`; so only finitely many
//!   roots can obstruct nefness ([`wall_degree_bound`]).
//! * **Irreducible sieve.** A root of degree `k` is the class of an irreducible
//!   curve iff it meets every irreducible root of smaller degree
//!   nonnegatively. If `X` is effective and `X·R < 0` for an irreducible `R`,
//!   then `R` is a fixed component of `|X|`; if `X² < −2` such an `R` of
//!   degree `≤ A·X` exists. Peeling fixed components therefore decides
//!   effectivity.
//!
//! A [`RootSet`] is *extendable* when it is declared complete or the rank is
//! at most 2; operations may then enumerate further roots on demand. A
//! user-supplied partial list in rank ≥ 3 only supports one-sided verdicts.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerate::collect_slab;
use crate::error::{Error, Result};
use crate::int::{floor_div, isqrt, Int};
use crate::lattice::{DivisorClass, Lattice};
use crate::linalg::determinant;
use crate::qform::enumerate_norm_vectors;

/// A class with a positive multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiple {
    pub class: DivisorClass,
    #[serde(with = "crate::int::serde_int")]
    pub multiplicity: Int,
}

/// Effective (−2)-classes of positive degree against `ample`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSet {
    /// Sorted by `(degree, coordinates)`.
    pub roots: Vec<DivisorClass>,
    pub ample: DivisorClass,
    #[serde(with = "crate::int::serde_int")]
    pub degree_bound: Int,
    pub complete_up_to_bound: bool,
}

/// Checks that `ample` has positive square and is orthogonal to no root.
pub fn validate_ample(lattice: &Lattice, ample: &DivisorClass) -> Result<()> {
    lattice.check(ample)?;
    lattice.require_hyperbolic()?;
    let a2 = lattice.sq(ample);
    if !a2.is_positive() {
        return Err(Error::InvalidAmple(format!("A² = {a2} is not positive")));
    }
    let zero = Int::zero();
    let minus_two = Int::from(-2);
    let orthogonal = collect_slab(lattice, ample, &zero, &zero, &minus_two, |_, _, sq| *sq == minus_two)?;
    if let Some((r, _, _)) = orthogonal.first() {
        return Err(Error::InvalidAmple(format!("A·r = 0 for the (−2)-class r = {r}")));
    }
    Ok(())
}

fn degree(lattice: &Lattice, ample: &DivisorClass, v: &DivisorClass) -> Int {
    lattice.pair_unchecked(ample, v)
}

fn sort_by_degree(lattice: &Lattice, ample: &DivisorClass, roots: &mut [DivisorClass]) {
    roots.sort_by(|a, b| degree(lattice, ample, a).cmp(&degree(lattice, ample, b)).then_with(|| a.cmp(b)));
}

impl RootSet {
    /// All roots of degree `1..=degree_bound`; complete by construction.
    pub fn enumerate(lattice: &Lattice, ample: &DivisorClass, degree_bound: &Int) -> Result<Self> {
        validate_ample(lattice, ample)?;
        let mut roots = enumerate_norm_vectors(lattice, &Int::from(-2), ample, degree_bound)?;
        sort_by_degree(lattice, ample, &mut roots);
        Ok(RootSet {
            roots,
            ample: ample.clone(),
            degree_bound: degree_bound.clone(),
            complete_up_to_bound: true,
        })
    }

    /// Validates a supplied list. A list declared complete is compared with
    /// the enumeration up to `degree_bound`.
    pub fn new(
        lattice: &Lattice,
        ample: &DivisorClass,
        roots: Vec<DivisorClass>,
        degree_bound: &Int,
        complete: bool,
    ) -> Result<Self> {
        validate_ample(lattice, ample)?;
        let mut roots = roots;
        for (i, r) in roots.iter().enumerate() {
            lattice.check(r)?;
            let sq = lattice.sq(r);
            if sq != Int::from(-2) {
                return Err(Error::InvalidInput(format!("root {r} has square {sq}, not −2")));
            }
            let d = degree(lattice, ample, r);
            if !d.is_positive() {
                return Err(Error::InvalidInput(format!("root {r} has non-positive degree {d}")));
            }
            if roots[..i].contains(r) {
                return Err(Error::InvalidInput(format!("root {r} listed twice")));
            }
        }
        sort_by_degree(lattice, ample, &mut roots);
        if complete {
            let full = RootSet::enumerate(lattice, ample, degree_bound)?;
            if full.roots != roots {
                let missing = full.roots.iter().find(|r| !roots.contains(r));
                let extra = roots.iter().find(|r| !full.roots.contains(r));
                return Err(Error::InvalidInput(match (missing, extra) {
                    (Some(r), _) => format!("root set declared complete but misses {r}"),
                    (_, Some(r)) => format!("root {r} exceeds the declared degree bound"),
                    _ => "root set declared complete but differs from the enumeration".into(),
                }));
            }
        }
        Ok(RootSet {
            roots,
            ample: ample.clone(),
            degree_bound: degree_bound.clone(),
            complete_up_to_bound: complete,
        })
    }

    /// Whether missing roots may be computed from the lattice on demand.
    pub fn extendable(&self, lattice: &Lattice) -> bool {
        self.complete_up_to_bound || lattice.rank() <= 2
    }

    pub fn degree_of(&self, lattice: &Lattice, v: &DivisorClass) -> Result<Int> {
        lattice.pair(&self.ample, v)
    }

    /// All roots of degree `≤ d` when they are known or computable.
    pub fn roots_to_degree(&self, lattice: &Lattice, d: &Int) -> Result<Option<Vec<DivisorClass>>> {
        let mut oracle = RootOracle::new(lattice, self);
        if !oracle.complete_to(d)? {
            return Ok(None);
        }
        Ok(Some(oracle.roots_upto(d).map(|(r, _)| r.clone()).collect()))
    }

    /// Classes of irreducible (−2)-curves of degree `≤ d`.
    pub fn irreducible_to_degree(&self, lattice: &Lattice, d: &Int) -> Result<Option<Vec<DivisorClass>>> {
        let mut oracle = RootOracle::new(lattice, self);
        if !oracle.complete_to(d)? {
            return Ok(None);
        }
        Ok(Some(oracle.irreducible_upto(d).map(|(r, _)| r.clone()).collect()))
    }
}

/// Lazily extended root list shared by one computation.
pub(crate) struct RootOracle<'a> {
    lattice: &'a Lattice,
    ample: &'a DivisorClass,
    extendable: bool,
    /// `(root, degree, irreducible)` sorted by degree.
    known: Vec<(DivisorClass, Int, bool)>,
    /// `known` holds every root of degree `≤ bound` when `exact`.
    bound: Int,
    exact: bool,
}

impl<'a> RootOracle<'a> {
    pub(crate) fn new(lattice: &'a Lattice, roots: &'a RootSet) -> Self {
        let extendable = roots.extendable(lattice);
        let (list, bound, exact) = if roots.complete_up_to_bound {
            (roots.roots.clone(), roots.degree_bound.clone(), true)
        } else if extendable {
            (Vec::new(), Int::zero(), true)
        } else {
            (roots.roots.clone(), Int::zero(), false)
        };
        let mut oracle = RootOracle {
            lattice,
            ample: &roots.ample,
            extendable,
            known: Vec::new(),
            bound,
            exact,
        };
        oracle.install(list);
        oracle
    }

    fn install(&mut self, list: Vec<DivisorClass>) {
        let mut known: Vec<(DivisorClass, Int, bool)> = Vec::with_capacity(list.len());
        for r in list {
            let d = degree(self.lattice, self.ample, &r);
            let irreducible = self.exact
                && known
                    .iter()
                    .filter(|(_, dk, irr)| *irr && *dk < d)
                    .all(|(k, _, _)| !self.lattice.pair_unchecked(&r, k).is_negative());
            known.push((r, d, irreducible));
        }
        self.known = known;
    }

    /// Ensures every root of degree `≤ d` is known; `false` if impossible.
    pub(crate) fn complete_to(&mut self, d: &Int) -> Result<bool> {
        if self.exact && *d <= self.bound {
            return Ok(true);
        }
        if !self.extendable {
            return Ok(false);
        }
        let target = d.max(&self.bound).clone();
        let mut list = enumerate_norm_vectors(self.lattice, &Int::from(-2), self.ample, &target)?;
        sort_by_degree(self.lattice, self.ample, &mut list);
        self.exact = true;
        self.bound = target;
        self.install(list);
        Ok(true)
    }

    pub(crate) fn roots_upto<'s>(&'s self, d: &'s Int) -> impl Iterator<Item = (&'s DivisorClass, &'s Int)> + 's {
        self.known.iter().filter(move |(_, k, _)| k <= d).map(|(r, k, _)| (r, k))
    }

    pub(crate) fn irreducible_upto<'s>(&'s self, d: &'s Int) -> impl Iterator<Item = (&'s DivisorClass, &'s Int)> + 's {
        self.known.iter().filter(move |(_, k, irr)| *irr && k <= d).map(|(r, k, _)| (r, k))
    }

}

/// Largest degree `A·r` of a root with `v·r < 0`, for `v² ≥ 0` and
/// `m = A·v > 0`; `0` when no root can have `v·r < 0`.
pub fn wall_degree_bound(a2: &Int, m: &Int, v2: &Int) -> Int {
    let two = Int::from(2);
    let k = if v2.is_zero() {
        floor_div(&(&two * m * m - a2), &(&two * m))
    } else {
        // v²k² + 2mk + (A² + 2v²A² − 2m²) ≤ 0
        let disc = m * m - v2 * (a2 + &two * v2 * a2 - &two * m * m);
        match isqrt(&disc) {
            None => Int::zero(),
            Some(s) => floor_div(&(-m + s + 1), v2),
        }
    };
    k.max(Int::zero())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EffectivityReason {
    Zero,
    /// `v² ≥ −2` and `A·v > 0`.
    RiemannRoch {
        #[serde(with = "crate::int::serde_int")]
        square: Int,
        #[serde(with = "crate::int::serde_int")]
        degree: Int,
    },
    /// `v = Σ roots + remainder` with the remainder zero or of the
    /// Riemann–Roch kind.
    Combination { roots: Vec<Multiple>, remainder: DivisorClass },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum EffectivityVerdict {
    Effective(EffectivityReason),
    NotEffective(String),
    Unknown(String),
}

impl EffectivityVerdict {
    pub fn is_effective(&self) -> bool {
        matches!(self, EffectivityVerdict::Effective(_))
    }
}

pub fn is_effective(lattice: &Lattice, v: &DivisorClass, roots: &RootSet) -> Result<EffectivityVerdict> {
    lattice.check(v)?;
    let mut oracle = RootOracle::new(lattice, roots);
    effective_with(&mut oracle, v)
}

pub(crate) fn effective_with(oracle: &mut RootOracle<'_>, v: &DivisorClass) -> Result<EffectivityVerdict> {
    let lattice = oracle.lattice;
    if v.is_zero() {
        return Ok(EffectivityVerdict::Effective(EffectivityReason::Zero));
    }
    let d = degree(lattice, oracle.ample, v);
    if d.is_negative() {
        return Ok(EffectivityVerdict::NotEffective(format!("negative degree {d} on the ample class")));
    }
    if d.is_zero() {
        return Ok(EffectivityVerdict::NotEffective("nonzero class of degree 0 on the ample class".into()));
    }
    let exact = oracle.complete_to(&d)?;
    let mut x = v.clone();
    let mut removed: Vec<Multiple> = Vec::new();
    loop {
        if x.is_zero() {
            return Ok(EffectivityVerdict::Effective(EffectivityReason::Combination {
                roots: removed,
                remainder: x,
            }));
        }
        let dx = degree(lattice, oracle.ample, &x);
        if !dx.is_positive() {
            return Ok(if exact {
                EffectivityVerdict::NotEffective(format!(
                    "after removing forced (−2)-components the remainder {x} has degree {dx}"
                ))
            } else {
                EffectivityVerdict::Unknown("root set incomplete".into())
            });
        }
        let sq = lattice.sq(&x);
        if sq >= Int::from(-2) {
            return Ok(EffectivityVerdict::Effective(if removed.is_empty() {
                EffectivityReason::RiemannRoch { square: sq, degree: dx }
            } else {
                EffectivityReason::Combination { roots: removed, remainder: x }
            }));
        }
        let next = if exact {
            oracle.irreducible_upto(&dx).find(|(r, _)| lattice.pair_unchecked(&x, r).is_negative())
        } else {
            oracle.roots_upto(&dx).find(|(r, _)| lattice.pair_unchecked(&x, r).is_negative())
        };
        match next {
            Some((r, _)) => {
                let r = r.clone();
                x = x.sub(&r);
                match removed.iter_mut().find(|m| m.class == r) {
                    Some(m) => m.multiplicity += 1,
                    None => removed.push(Multiple { class: r, multiplicity: Int::one() }),
                }
            }
            None if exact => {
                return Ok(EffectivityVerdict::NotEffective(format!(
                    "{x} has square {sq} < −2 yet meets every (−2)-curve of degree ≤ {dx} nonnegatively"
                )))
            }
            None => return Ok(EffectivityVerdict::Unknown("root set incomplete".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NefObstruction {
    Root {
        root: DivisorClass,
        #[serde(with = "crate::int::serde_int")]
        pairing: Int,
    },
    NegativeSquare {
        #[serde(with = "crate::int::serde_int")]
        square: Int,
    },
    NonPositiveDegree {
        #[serde(with = "crate::int::serde_int")]
        degree: Int,
    },
}

impl std::fmt::Display for NefObstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NefObstruction::Root { root, pairing } => write!(f, "pairs to {pairing} with the (−2)-curve {root}"),
            NefObstruction::NegativeSquare { square } => write!(f, "has negative square {square}"),
            NefObstruction::NonPositiveDegree { degree } => write!(f, "has degree {degree} against the ample class"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum NefVerdict {
    Nef,
    NotNef(NefObstruction),
    Unknown(String),
}

impl NefVerdict {
    pub fn is_nef(&self) -> bool {
        matches!(self, NefVerdict::Nef)
    }
}

pub fn is_nef(lattice: &Lattice, v: &DivisorClass, roots: &RootSet) -> Result<NefVerdict> {
    lattice.check(v)?;
    let mut oracle = RootOracle::new(lattice, roots);
    nef_with(&mut oracle, v)
}

pub(crate) fn nef_with(oracle: &mut RootOracle<'_>, v: &DivisorClass) -> Result<NefVerdict> {
    let lattice = oracle.lattice;
    if v.is_zero() {
        return Ok(NefVerdict::Nef);
    }
    let negative_on = |oracle: &RootOracle<'_>, d: &Int| {
        oracle.roots_upto(d).find_map(|(r, _)| {
            let p = lattice.pair_unchecked(v, r);
            p.is_negative().then(|| NefObstruction::Root { root: r.clone(), pairing: p })
        })
    };
    let m = degree(lattice, oracle.ample, v);
    let sq = lattice.sq(v);
    if !m.is_positive() || sq.is_negative() {
        let bound = oracle.bound.clone();
        if let Some(ob) = negative_on(oracle, &bound) {
            return Ok(NefVerdict::NotNef(ob));
        }
        return Ok(NefVerdict::NotNef(if m.is_positive() {
            NefObstruction::NegativeSquare { square: sq }
        } else {
            NefObstruction::NonPositiveDegree { degree: m }
        }));
    }
    let k = wall_degree_bound(&lattice.sq(oracle.ample), &m, &sq);
    if oracle.complete_to(&k)? {
        return Ok(match negative_on(oracle, &k) {
            Some(ob) => NefVerdict::NotNef(ob),
            None => NefVerdict::Nef,
        });
    }
    let all = oracle.known.last().map(|(_, d, _)| d.clone()).unwrap_or_default();
    if let Some(ob) = negative_on(oracle, &all) {
        return Ok(NefVerdict::NotNef(ob));
    }
    Ok(NefVerdict::Unknown(format!(
        "nefness needs every (−2)-class up to degree {k}, but the root set is not declared complete"
    )))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum BigNefVerdict {
    BigAndNef,
    NefNotBig,
    NotNef(NefObstruction),
    Unknown(String),
}

pub fn is_big_nef(lattice: &Lattice, v: &DivisorClass, roots: &RootSet) -> Result<BigNefVerdict> {
    Ok(match is_nef(lattice, v, roots)? {
        NefVerdict::Nef if lattice.sq(v).is_positive() => BigNefVerdict::BigAndNef,
        NefVerdict::Nef => BigNefVerdict::NefNotBig,
        NefVerdict::NotNef(ob) => BigNefVerdict::NotNef(ob),
        NefVerdict::Unknown(why) => BigNefVerdict::Unknown(why),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrecOrder {
    Less,
    EquivNumerically,
    Greater,
}

impl From<Ordering> for PrecOrder {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => PrecOrder::Less,
            Ordering::Equal => PrecOrder::EquivNumerically,
            Ordering::Greater => PrecOrder::Greater,
        }
    }
}

/// An ordered basis of ample classes defining `≺`: classes are compared by
/// their degree vectors lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecBasis {
    classes: Vec<DivisorClass>,
}

impl PrecBasis {
    pub fn new(lattice: &Lattice, classes: Vec<DivisorClass>) -> Result<Self> {
        if classes.len() != lattice.rank() {
            return Err(Error::InvalidInput(format!(
                "≺ basis needs {} classes, got {}",
                lattice.rank(),
                classes.len()
            )));
        }
        let gram = lattice.gram_of(&classes)?;
        for (i, row) in gram.iter().enumerate() {
            if let Some((j, x)) = row.iter().enumerate().find(|(_, x)| !x.is_positive()) {
                return Err(Error::InvalidInput(format!(
                    "≺ basis classes {} and {} pair to {x}; all pairings must be positive",
                    classes[i], classes[j]
                )));
            }
        }
        if determinant(&gram).is_zero() {
            return Err(Error::InvalidInput("≺ basis classes are linearly dependent".into()));
        }
        Ok(PrecBasis { classes })
    }

    /// `A` followed by classes `N·A + e_j` with `N` large enough that each is
    /// ample whenever `A` is (each root `r` has `|e_j·r|` linear in `A·r`).
    pub fn from_ample(lattice: &Lattice, ample: &DivisorClass) -> Result<Self> {
        lattice.check(ample)?;
        let a2 = lattice.sq(ample);
        if !a2.is_positive() {
            return Err(Error::InvalidAmple(format!("A² = {a2} is not positive")));
        }
        let r = lattice.rank();
        let skip = ample.0.iter().position(|c| !c.is_zero()).expect("A² > 0 implies A ≠ 0");
        let extras: Vec<DivisorClass> =
            (0..r).filter(|&j| j != skip).map(|j| DivisorClass::basis(r, j)).collect();
        let two = Int::from(2);
        let mut n = Int::one();
        loop {
            let candidate: Vec<DivisorClass> = std::iter::once(ample.clone())
                .chain(extras.iter().map(|e| ample.scale(&n).add(e)))
                .collect();
            let ample_enough = extras.iter().all(|e| {
                let ae = lattice.pair_unchecked(ample, e).abs();
                let majorant = &two * &ae * &ae - &a2 * lattice.sq(e);
                let lhs = &n * &a2 - &two * &ae;
                lhs.is_positive() && &lhs * &lhs > majorant * (&two + &two * &a2)
            });
            if ample_enough {
                if let Ok(basis) = PrecBasis::new(lattice, candidate) {
                    return Ok(basis);
                }
            }
            n += 1;
        }
    }

    pub fn classes(&self) -> &[DivisorClass] {
        &self.classes
    }

    pub fn degrees(&self, lattice: &Lattice, v: &DivisorClass) -> Vec<Int> {
        self.classes.iter().map(|a| lattice.pair_unchecked(a, v)).collect()
    }

    pub fn compare(&self, lattice: &Lattice, f: &DivisorClass, g: &DivisorClass) -> PrecOrder {
        self.degrees(lattice, f).cmp(&self.degrees(lattice, g)).into()
    }

    pub(crate) fn sort(&self, lattice: &Lattice, vs: &mut [DivisorClass]) {
        vs.sort_by_cached_key(|v| (self.degrees(lattice, v), v.clone()));
    }
}

pub fn prec_compare(
    lattice: &Lattice,
    f: &DivisorClass,
    g: &DivisorClass,
    basis: &[DivisorClass],
) -> Result<PrecOrder> {
    lattice.check(f)?;
    lattice.check(g)?;
    let basis = PrecBasis::new(lattice, basis.to_vec())?;
    Ok(basis.compare(lattice, f, g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum MinimalNefVerdict {
    Minimal,
    NotMinimal { witness: DivisorClass },
    Unknown(String),
}

/// Whether no nef `M ≠ 0, v` has `v − M` effective. The witness is the
/// `≺`-smallest such `M`.
pub fn is_minimal_nef(lattice: &Lattice, v: &DivisorClass, roots: &RootSet) -> Result<MinimalNefVerdict> {
    lattice.check(v)?;
    let mut oracle = RootOracle::new(lattice, roots);
    let basis = PrecBasis::from_ample(lattice, &roots.ample)?;
    minimal_with(&mut oracle, &basis, v)
}

fn minimal_with(oracle: &mut RootOracle<'_>, basis: &PrecBasis, v: &DivisorClass) -> Result<MinimalNefVerdict> {
    if v.is_zero() {
        return Err(Error::Precondition("the zero class is not minimal nef".into()));
    }
    match nef_with(oracle, v)? {
        NefVerdict::Nef => {}
        NefVerdict::NotNef(ob) => return Err(Error::Precondition(format!("{v} is not nef: {ob:?}"))),
        NefVerdict::Unknown(why) => return Ok(MinimalNefVerdict::Unknown(why)),
    }
    let d = degree(oracle.lattice, oracle.ample, v);
    let mut uncertain: Option<String> = None;
    for m in nef_candidates(oracle, basis, &(d - 1))? {
        match nef_with(oracle, &m)? {
            NefVerdict::Nef => {}
            NefVerdict::NotNef(_) => continue,
            NefVerdict::Unknown(why) => {
                uncertain.get_or_insert(why);
                continue;
            }
        }
        match effective_with(oracle, &v.sub(&m))? {
            EffectivityVerdict::Effective(_) => return Ok(MinimalNefVerdict::NotMinimal { witness: m }),
            EffectivityVerdict::NotEffective(_) => {}
            EffectivityVerdict::Unknown(why) => {
                uncertain.get_or_insert(why);
            }
        }
    }
    Ok(match uncertain {
        Some(why) => MinimalNefVerdict::Unknown(why),
        None => MinimalNefVerdict::Minimal,
    })
}

/// Classes with square `≥ 0` and degree `1..=max_degree`, in `≺` order.
fn nef_candidates(oracle: &RootOracle<'_>, basis: &PrecBasis, max_degree: &Int) -> Result<Vec<DivisorClass>> {
    let mut out: Vec<DivisorClass> =
        collect_slab(oracle.lattice, oracle.ample, &Int::one(), max_degree, &Int::zero(), |_, _, _| true)?
            .into_iter()
            .map(|(v, _, _)| v)
            .collect();
    basis.sort(oracle.lattice, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefPart {
    pub class: DivisorClass,
    #[serde(with = "crate::int::serde_int")]
    pub multiplicity: Int,
    /// Whether `is_minimal_nef` returned `Minimal` for this class.
    pub minimal_verified: bool,
}

/// Why a decomposition stopped early.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialReason {
    pub reason: String,
    /// The part of `D` not yet accounted for by `nef_parts` and `residual`.
    pub stuck: DivisorClass,
}

/// `D = Σ nef parts + Σ residual roots`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub nef_parts: Vec<NefPart>,
    pub residual: Vec<Multiple>,
    pub partial: Option<PartialReason>,
}

impl Decomposition {
    pub fn is_complete(&self) -> bool {
        self.partial.is_none()
    }

    /// `Σ multiplicity·part` over nef parts, residual roots and any stuck rest.
    pub fn reconstruct(&self, rank: usize) -> DivisorClass {
        let mut sum = DivisorClass::zero(rank);
        for p in &self.nef_parts {
            sum = sum.add(&p.class.scale(&p.multiplicity));
        }
        for m in &self.residual {
            sum = sum.add(&m.class.scale(&m.multiplicity));
        }
        if let Some(p) = &self.partial {
            sum = sum.add(&p.stuck);
        }
        sum
    }

    pub fn residual_support(&self) -> Vec<DivisorClass> {
        self.residual.iter().map(|m| m.class.clone()).collect()
    }
}

fn bump(list: &mut Vec<Multiple>, class: &DivisorClass) {
    match list.iter_mut().find(|m| &m.class == class) {
        Some(m) => m.multiplicity += 1,
        None => list.push(Multiple { class: class.clone(), multiplicity: Int::one() }),
    }
}

/// Writes an effective `D` as minimal nef classes plus a combination of
/// (−2)-curves with negative definite support. Each step peels the
/// `≺`-smallest nef `Q` with `C − Q` effective (such a `Q` is automatically
/// minimal nef); the loop ends when no nef class sits below the remainder,
/// which is then a sum of (−2)-curves.
pub fn minimal_nef_decompose(lattice: &Lattice, d: &DivisorClass, roots: &RootSet) -> Result<Decomposition> {
    lattice.check(d)?;
    let mut oracle = RootOracle::new(lattice, roots);
    let basis = PrecBasis::from_ample(lattice, &roots.ample)?;
    match effective_with(&mut oracle, d)? {
        EffectivityVerdict::Effective(_) => {}
        EffectivityVerdict::NotEffective(why) | EffectivityVerdict::Unknown(why) => {
            return Err(Error::Precondition(format!("{d} is not certified effective: {why}")))
        }
    }
    let mut nef_parts: Vec<NefPart> = Vec::new();
    let mut c = d.clone();
    let partial = |reason: String, stuck: DivisorClass, nef_parts, residual| {
        Ok(Decomposition { nef_parts, residual, partial: Some(PartialReason { reason, stuck }) })
    };
    while !c.is_zero() {
        let dc = degree(lattice, &roots.ample, &c);
        let mut uncertain: Option<String> = None;
        let mut chosen: Option<DivisorClass> = None;
        for q in nef_candidates(&oracle, &basis, &dc)? {
            match nef_with(&mut oracle, &q)? {
                NefVerdict::Nef => {}
                NefVerdict::NotNef(_) => continue,
                NefVerdict::Unknown(why) => {
                    uncertain.get_or_insert(why);
                    continue;
                }
            }
            match effective_with(&mut oracle, &c.sub(&q))? {
                EffectivityVerdict::Effective(_) => {
                    chosen = Some(q);
                    break;
                }
                EffectivityVerdict::NotEffective(_) => {}
                EffectivityVerdict::Unknown(why) => {
                    uncertain.get_or_insert(why);
                }
            }
        }
        let Some(q) = chosen else {
            if let Some(why) = uncertain {
                return partial(why, c, nef_parts, Vec::new());
            }
            break;
        };
        let next = c.sub(&q);
        if degree(lattice, &roots.ample, &next) >= dc {
            return Err(Error::Precondition("decomposition step did not lower the degree".into()));
        }
        match nef_parts.iter_mut().find(|p| p.class == q) {
            Some(p) => p.multiplicity += 1,
            None => {
                let minimal_verified =
                    matches!(minimal_with(&mut oracle, &basis, &q)?, MinimalNefVerdict::Minimal);
                nef_parts.push(NefPart { class: q, multiplicity: Int::one(), minimal_verified });
            }
        }
        c = next;
    }

    // The remainder is a sum of (−2)-curves: peel fixed components.
    let mut residual: Vec<Multiple> = Vec::new();
    while !c.is_zero() {
        let dc = degree(lattice, &roots.ample, &c);
        if !oracle.complete_to(&dc)? {
            return partial("root set incomplete".into(), c, nef_parts, residual);
        }
        let r = oracle
            .irreducible_upto(&dc)
            .find(|(r, _)| lattice.pair_unchecked(&c, r).is_negative())
            .map(|(r, _)| r.clone());
        match r {
            Some(r) => {
                c = c.sub(&r);
                bump(&mut residual, &r);
            }
            None => {
                return partial(
                    "remainder meets every (−2)-curve nonnegatively".into(),
                    c,
                    nef_parts,
                    residual,
                )
            }
        }
    }
    let support = residual.iter().map(|m| m.class.clone()).collect::<Vec<_>>();
    let sig = crate::lattice::signature_of(&lattice.gram_of(&support)?);
    if sig.positive > 0 || sig.zero > 0 {
        let stuck = residual.iter().fold(DivisorClass::zero(lattice.rank()), |acc, m| {
            acc.add(&m.class.scale(&m.multiplicity))
        });
        return partial(
            format!("residual support has signature {sig}, not negative definite"),
            stuck,
            nef_parts,
            Vec::new(),
        );
    }
    Ok(Decomposition { nef_parts, residual, partial: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::int;

    fn lat(rows: &[&[i64]]) -> Lattice {
        Lattice::from_i64s(rows).unwrap()
    }

    fn c(xs: &[i64]) -> DivisorClass {
        DivisorClass::from_i64s(xs)
    }

    fn u_setup() -> (Lattice, RootSet) {
        let u = lat(&[&[0, 1], &[1, 0]]);
        let roots = RootSet::new(&u, &c(&[2, 1]), vec![c(&[-1, 1])], &int(10), false).unwrap();
        (u, roots)
    }

    fn bryan_leung() -> (Lattice, RootSet) {
        let l = lat(&[&[-2, 1], &[1, 0]]);
        let roots = RootSet::enumerate(&l, &c(&[1, 3]), &int(10)).unwrap();
        (l, roots)
    }

    #[test]
    fn root_sets() {
        let (l, roots) = bryan_leung();
        assert_eq!(roots.roots, vec![c(&[1, 0])]);
        assert!(RootSet::new(&l, &c(&[1, 3]), vec![c(&[1, 1])], &int(10), false).is_err());
        assert!(RootSet::new(&l, &c(&[1, 3]), vec![], &int(10), true).is_err());
        let u = lat(&[&[0, 1], &[1, 0]]);
        // (1,1) is orthogonal to the root (1,−1)
        assert!(matches!(RootSet::enumerate(&u, &c(&[1, 1]), &int(5)), Err(Error::InvalidAmple(_))));
        assert_eq!(RootSet::enumerate(&u, &c(&[2, 1]), &int(5)).unwrap().roots, vec![c(&[-1, 1])]);
    }

    #[test]
    fn effectivity_examples() {
        let (l, roots) = bryan_leung();
        assert!(is_effective(&l, &c(&[0, 0]), &roots).unwrap().is_effective());
        assert!(matches!(
            is_effective(&l, &c(&[1, 3]), &roots).unwrap(),
            EffectivityVerdict::Effective(EffectivityReason::RiemannRoch { .. })
        ));
        assert!(matches!(is_effective(&l, &c(&[-1, 0]), &roots).unwrap(), EffectivityVerdict::NotEffective(_)));
        // 2C has square −8; peeling the fixed component C leaves C itself
        match is_effective(&l, &c(&[2, 0]), &roots).unwrap() {
            EffectivityVerdict::Effective(EffectivityReason::Combination { roots, remainder }) => {
                assert_eq!(roots, vec![Multiple { class: c(&[1, 0]), multiplicity: int(1) }]);
                assert_eq!(remainder, c(&[1, 0]));
            }
            other => panic!("{other:?}"),
        }
        // 2C − F: degree 2·1 − 1 = 1 but not effective
        assert!(matches!(is_effective(&l, &c(&[2, -1]), &roots).unwrap(), EffectivityVerdict::NotEffective(_)));
    }

    #[test]
    fn nef_examples() {
        let (u, roots) = u_setup();
        assert_eq!(is_nef(&u, &c(&[1, 0]), &roots).unwrap(), NefVerdict::Nef);
        assert_eq!(
            is_nef(&u, &c(&[0, 1]), &roots).unwrap(),
            NefVerdict::NotNef(NefObstruction::Root { root: c(&[-1, 1]), pairing: int(-1) })
        );
        assert_eq!(is_nef(&u, &c(&[0, 0]), &roots).unwrap(), NefVerdict::Nef);
        let (l, roots) = bryan_leung();
        assert_eq!(is_big_nef(&l, &c(&[1, 3]), &roots).unwrap(), BigNefVerdict::BigAndNef);
        assert_eq!(is_big_nef(&l, &c(&[0, 1]), &roots).unwrap(), BigNefVerdict::NefNotBig);
        let (u, roots) = u_setup();
        assert_eq!(is_big_nef(&u, &c(&[1, 0]), &roots).unwrap(), BigNefVerdict::NefNotBig);
    }

    #[test]
    fn wall_bound_examples() {
        // U, A = (2,1): A² = 4
        assert_eq!(wall_degree_bound(&int(4), &int(1), &int(0)), int(0));
        assert_eq!(wall_degree_bound(&int(4), &int(2), &int(0)), int(1));
    }

    #[test]
    fn prec_examples() {
        let u = lat(&[&[0, 1], &[1, 0]]);
        let basis = [c(&[2, 1]), c(&[1, 2])];
        assert_eq!(prec_compare(&u, &c(&[1, 0]), &c(&[0, 1]), &basis).unwrap(), PrecOrder::Less);
        assert_eq!(prec_compare(&u, &c(&[1, 0]), &c(&[1, 0]), &basis).unwrap(), PrecOrder::EquivNumerically);
        assert!(prec_compare(&u, &c(&[1, 0]), &c(&[0, 1]), &basis[..1]).is_err());
        let b = PrecBasis::from_ample(&u, &c(&[2, 1])).unwrap();
        assert_eq!(b.classes().len(), 2);
        assert_eq!(b.compare(&u, &c(&[1, 0]), &c(&[1, 0]).add(&c(&[-1, 1]))), PrecOrder::Less);
    }

    #[test]
    fn minimal_nef_examples() {
        let (u, roots) = u_setup();
        assert_eq!(is_minimal_nef(&u, &c(&[1, 0]), &roots).unwrap(), MinimalNefVerdict::Minimal);
        assert_eq!(
            is_minimal_nef(&u, &c(&[1, 1]), &roots).unwrap(),
            MinimalNefVerdict::NotMinimal { witness: c(&[1, 0]) }
        );
        assert!(matches!(is_minimal_nef(&u, &c(&[0, 0]), &roots), Err(Error::Precondition(_))));
        assert!(matches!(is_minimal_nef(&u, &c(&[0, 1]), &roots), Err(Error::Precondition(_))));
    }

    #[test]
    fn decomposition_examples() {
        let (u, roots) = u_setup();
        let dec = minimal_nef_decompose(&u, &c(&[1, 1]), &roots).unwrap();
        assert!(dec.is_complete());
        assert_eq!(dec.nef_parts.len(), 1);
        assert_eq!((dec.nef_parts[0].class.clone(), dec.nef_parts[0].multiplicity.clone()), (c(&[1, 0]), int(2)));
        assert!(dec.nef_parts[0].minimal_verified);
        assert_eq!(dec.residual, vec![Multiple { class: c(&[-1, 1]), multiplicity: int(1) }]);
        assert_eq!(dec.reconstruct(2), c(&[1, 1]));

        let dec = minimal_nef_decompose(&u, &c(&[1, 0]), &roots).unwrap();
        assert_eq!(dec.nef_parts.len(), 1);
        assert!(dec.residual.is_empty());

        let dec = minimal_nef_decompose(&u, &c(&[-1, 1]), &roots).unwrap();
        assert!(dec.nef_parts.is_empty());
        assert_eq!(dec.residual, vec![Multiple { class: c(&[-1, 1]), multiplicity: int(1) }]);

        assert!(matches!(minimal_nef_decompose(&u, &c(&[1, -1]), &roots), Err(Error::Precondition(_))));
    }
}
