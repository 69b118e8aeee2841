//! Checkers for the numerical hypotheses behind the existence of rational and
//! elliptic curves: conditions A1–A3 in rank 2, the triple condition on the
//! exceptional rank-4 lattices, the genus-1 degree inequality, Hodge-index
//! validation, the regeneration degree bound, genus reduction and the index
//! of an elliptic fibration.
//!
//! The decomposition searches are exhaustive. A part `L_i` with `L·L_i > 0`
//! and `L_i² > 0` (or `= −2`) of a class `L` with `L² > 0` satisfies
//! `1 ≤ L·L_i < L²`, and the majorant `2(L·v)² − L²·v²` bounds such parts in
//! a finite ellipsoid, so the slab with respect to `L` itself is enumerated.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerate::collect_slab;
use crate::error::{Error, Result};
use crate::int::{gcd_all, isqrt, Int};
use crate::isometry::recognize_exceptional;
use crate::lattice::{signature_of, DivisorClass, Lattice};
use crate::positivity::{is_nef, NefVerdict, PrecBasis, RootSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    A1,
    A2,
    A3,
    #[serde(rename = "R4")]
    Rank4,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A1 => "A1",
            Condition::A2 => "A2",
            Condition::A3 => "A3",
            Condition::Rank4 => "R4",
        })
    }
}

impl std::str::FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Condition::A1),
            "A2" => Ok(Condition::A2),
            "A3" => Ok(Condition::A3),
            "R4" | "RANK4" => Ok(Condition::Rank4),
            other => Err(Error::InvalidInput(format!("unknown condition {other:?}; expected A1, A2, A3 or R4"))),
        }
    }
}

/// One recorded inequality: the label names the quantity and the relation it
/// must satisfy, the value is the exact quantity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    #[serde(with = "crate::int::serde_int")]
    pub value: Int,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionWitness {
    pub condition: Condition,
    pub parts: Vec<DivisorClass>,
    pub checks: Vec<Check>,
}

impl ConditionWitness {
    /// Builds the witness after evaluating every check; `None` if one fails.
    fn build(condition: Condition, lattice: &Lattice, target: &DivisorClass, parts: Vec<DivisorClass>) -> Option<Self> {
        let evaluated = evaluate(condition, lattice, target, &parts);
        evaluated.iter().all(|(_, ok)| *ok).then(|| ConditionWitness {
            condition,
            parts,
            checks: evaluated.into_iter().map(|(c, _)| c).collect(),
        })
    }

    /// Recomputes every check from the parts alone and confirms that the
    /// parts sum to `target` (for A1: that the lattice has rank 2).
    pub fn verify(&self, lattice: &Lattice, target: &DivisorClass) -> Result<()> {
        lattice.check(target)?;
        for p in &self.parts {
            lattice.check(p)?;
        }
        let expected_parts = match self.condition {
            Condition::A1 => 0,
            Condition::A2 | Condition::Rank4 => 3,
            Condition::A3 => 2,
        };
        if self.parts.len() != expected_parts {
            return Err(Error::InvalidInput(format!(
                "{} witness needs {expected_parts} parts, found {}",
                self.condition,
                self.parts.len()
            )));
        }
        if self.condition == Condition::A1 {
            if lattice.rank() != 2 {
                return Err(Error::InvalidRank { expected: "2".into(), found: lattice.rank() });
            }
        } else {
            let sum = self.parts.iter().fold(DivisorClass::zero(lattice.rank()), |acc, p| acc.add(p));
            if &sum != target {
                return Err(Error::InvalidInput(format!("parts sum to {sum}, not {target}")));
            }
        }
        let evaluated = evaluate(self.condition, lattice, target, &self.parts);
        let recomputed: Vec<&Check> = evaluated.iter().map(|(c, _)| c).collect();
        if recomputed.len() != self.checks.len() || recomputed.iter().zip(&self.checks).any(|(a, b)| *a != b) {
            return Err(Error::InvalidInput("recorded checks do not match the parts".into()));
        }
        if let Some((c, _)) = evaluated.iter().find(|(_, ok)| !ok) {
            return Err(Error::InvalidInput(format!("check failed: {} (value {})", c.label, c.value)));
        }
        Ok(())
    }
}

fn evaluate(condition: Condition, lattice: &Lattice, target: &DivisorClass, parts: &[DivisorClass]) -> Vec<(Check, bool)> {
    let check = |label: String, value: Int, ok: bool| (Check { label, value }, ok);
    let mut out = Vec::new();
    match condition {
        Condition::A1 => {
            let det = lattice.discriminant().clone();
            let ok = det.is_even();
            out.push(check("det(Λ) even".into(), det, ok));
        }
        Condition::A2 | Condition::Rank4 => {
            for (i, p) in parts.iter().enumerate() {
                let n = i + 1;
                let lp = lattice.pair_unchecked(target, p);
                out.push(check(format!("L·L{n} > 0"), lp.clone(), lp.is_positive()));
                let sq = lattice.sq(p);
                out.push(check(format!("L{n}² > 0"), sq.clone(), sq.is_positive()));
            }
        }
        Condition::A3 => {
            let (l1, l2) = (&parts[0], &parts[1]);
            for (n, p) in [(1, l1), (2, l2)] {
                let lp = lattice.pair_unchecked(target, p);
                out.push(check(format!("L·L{n} > 0"), lp.clone(), lp.is_positive()));
            }
            let s1 = lattice.sq(l1);
            out.push(check("L1² > 0".into(), s1.clone(), s1.is_positive()));
            let s2 = lattice.sq(l2);
            out.push(check("L2² = −2".into(), s2.clone(), s2 == Int::from(-2)));
            let g1 = l1.content();
            out.push(check("content(L1) odd".into(), g1.clone(), g1.is_odd()));
            let gd = l1.sub(l2).content();
            out.push(check("content(L1 − L2) = 1".into(), gd.clone(), gd.is_one()));
            let v = &s1 + Int::from(2) * lattice.pair_unchecked(l1, l2);
            out.push(check("L1² + 2·L1·L2 ≥ 18".into(), v.clone(), v >= Int::from(18)));
        }
    }
    out
}

/// A1: the discriminant is even. Defined for rank 2 only.
pub fn check_a1(lattice: &Lattice) -> Result<bool> {
    if lattice.rank() != 2 {
        return Err(Error::InvalidRank { expected: "2".into(), found: lattice.rank() });
    }
    Ok(lattice.discriminant().is_even())
}

/// The A1 witness (no parts, one check) when A1 holds.
pub fn a1_witness(lattice: &Lattice) -> Result<Option<ConditionWitness>> {
    let target = DivisorClass::zero(lattice.rank());
    Ok(if check_a1(lattice)? { ConditionWitness::build(Condition::A1, lattice, &target, Vec::new()) } else { None })
}

/// Classes `v` with `v² ≥ min_square` and `1 ≤ L·v ≤ max_degree`, in `≺` order.
fn parts_in_slab(
    lattice: &Lattice,
    target: &DivisorClass,
    max_degree: &Int,
    min_square: &Int,
    keep: impl Fn(&Int) -> bool,
    basis: &PrecBasis,
) -> Result<Vec<DivisorClass>> {
    let mut parts: Vec<DivisorClass> = collect_slab(lattice, target, &Int::one(), max_degree, min_square, |_, _, sq| keep(sq))?
        .into_iter()
        .map(|(v, _, _)| v)
        .collect();
    basis.sort(lattice, &mut parts);
    Ok(parts)
}

/// `L = L1 + L2 + L3` with `L·Li > 0`, `Li² > 0`. Among all such multisets
/// the witness minimises its `≺`-largest part, then the middle one, then the
/// smallest (the most balanced split); parts are listed in `≺` order.
fn triple_search(
    condition: Condition,
    lattice: &Lattice,
    target: &DivisorClass,
    basis: &PrecBasis,
) -> Result<Option<ConditionWitness>> {
    lattice.check(target)?;
    lattice.require_hyperbolic()?;
    let l2 = lattice.sq(target);
    if l2 < Int::from(3) {
        // L² = Σ L·Li ≥ 3 is necessary
        return Ok(None);
    }
    let parts = parts_in_slab(lattice, target, &(&l2 - 2), &Int::one(), |_| true, basis)?;
    let index: HashMap<&DivisorClass, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // `parts` is in ≺ order, so comparing index triples compares under ≺.
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..parts.len() {
        for j in i..parts.len() {
            let rest = target.sub(&parts[i]).sub(&parts[j]);
            if let Some(&k) = index.get(&rest) {
                if k >= j && best.map_or(true, |b| (k, j, i) < b) {
                    best = Some((k, j, i));
                }
            }
        }
    }
    Ok(best.and_then(|(k, j, i)| {
        let triple = vec![parts[i].clone(), parts[j].clone(), parts[k].clone()];
        ConditionWitness::build(condition, lattice, target, triple)
    }))
}

/// A2: `L = L1 + L2 + L3` with `L·Li > 0` and `Li² > 0`.
pub fn check_a2(lattice: &Lattice, target: &DivisorClass, roots: &RootSet) -> Result<Option<ConditionWitness>> {
    let basis = PrecBasis::from_ample(lattice, &roots.ample)?;
    triple_search(Condition::A2, lattice, target, &basis)
}

/// A3: `L = L1 + L2` with `L·Li > 0`, `L1² > 0`, `L2² = −2`, `L1 ∉ 2Λ`,
/// `L1 − L2` primitive and `L1² + 2·L1·L2 ≥ 18`. The witness minimises
/// `(L1, L2)` under `≺`.
pub fn check_a3(lattice: &Lattice, target: &DivisorClass, roots: &RootSet) -> Result<Option<ConditionWitness>> {
    lattice.check(target)?;
    lattice.require_hyperbolic()?;
    let basis = PrecBasis::from_ample(lattice, &roots.ample)?;
    let l2 = lattice.sq(target);
    if l2 < Int::from(2) {
        return Ok(None);
    }
    let minus_two = Int::from(-2);
    let candidates = parts_in_slab(lattice, target, &(&l2 - 1), &minus_two, |sq| *sq == minus_two, &basis)?;
    let mut found: Vec<ConditionWitness> = candidates
        .into_iter()
        .filter_map(|r| ConditionWitness::build(Condition::A3, lattice, target, vec![target.sub(&r), r]))
        .collect();
    found.sort_by_cached_key(|w| (basis.degrees(lattice, &w.parts[0]), basis.degrees(lattice, &w.parts[1])));
    Ok(found.into_iter().next())
}

/// Triple condition on a lattice isometric to one of the two exceptional
/// rank-4 lattices.
pub fn check_rank4(lattice: &Lattice, target: &DivisorClass, ample: &DivisorClass) -> Result<Option<ConditionWitness>> {
    if recognize_exceptional(lattice)?.is_none() {
        return Err(Error::UnrecognizedLattice);
    }
    rank4_search(lattice, target, ample)
}

/// [`check_rank4`] without the recognition step, for callers that already
/// recognised the lattice.
pub fn rank4_search(lattice: &Lattice, target: &DivisorClass, ample: &DivisorClass) -> Result<Option<ConditionWitness>> {
    let basis = PrecBasis::from_ample(lattice, ample)?;
    triple_search(Condition::Rank4, lattice, target, &basis)
}

/// Degree inequality for genus-1 curves: with `s = A²` and `x = A·R`,
/// `x ≥ 4s + √(17(s − 2)s)`, evaluated by squaring.
pub fn genus1_bound(s: &Int, x: &Int) -> bool {
    let four_s = Int::from(4) * s;
    if x < &four_s {
        return false;
    }
    let gap = x - four_s;
    &gap * &gap >= Int::from(17) * (s - 2) * s
}

pub fn genus1_bound_holds(lattice: &Lattice, a: &DivisorClass, r: &DivisorClass) -> Result<bool> {
    let s = lattice.square(a)?;
    let r2 = lattice.square(r)?;
    if s < Int::from(2) {
        return Err(Error::InvalidInput(format!("A² = {s} must be at least 2")));
    }
    if r2 != Int::from(-2) {
        return Err(Error::InvalidInput(format!("R² = {r2} must be −2")));
    }
    Ok(genus1_bound(&s, &lattice.pair_unchecked(a, r)))
}

/// `(2AD + (AR)(DR))² ≥ (2A² + (AR)²)(2D² + (DR)²)`, or `None` unless
/// `A² > 0` and `R² = −2`. With `A' = A + (AR/2)R` and `D' = D + (DR/2)R`,
/// both orthogonal to `R`, this is `(A'·D')² ≥ A'²·D'²`, which holds in a
/// hyperbolic lattice because `A'² = A² + (AR)²/2 > 0`.
pub fn hodge_scalar_inequality(lattice: &Lattice, a: &DivisorClass, d: &DivisorClass, r: &DivisorClass) -> Result<Option<bool>> {
    let a2 = lattice.square(a)?;
    let d2 = lattice.square(d)?;
    let r2 = lattice.square(r)?;
    if !a2.is_positive() || r2 != Int::from(-2) {
        return Ok(None);
    }
    let two = Int::from(2);
    let ad = lattice.pair_unchecked(a, d);
    let ar = lattice.pair_unchecked(a, r);
    let dr = lattice.pair_unchecked(d, r);
    let lhs = &two * &ad + &ar * &dr;
    Ok(Some(&lhs * &lhs >= (&two * &a2 + &ar * &ar) * (&two * &d2 + &dr * &dr)))
}

/// The Gram matrix of `classes` has at most one positive eigenvalue; for three
/// classes `(A, D, R)` the scalar form is cross-checked when it applies.
pub fn hodge_index_validate(lattice: &Lattice, classes: &[DivisorClass]) -> Result<bool> {
    if classes.is_empty() {
        return Err(Error::InvalidInput("at least one class is required".into()));
    }
    let gram = lattice.gram_of(classes)?;
    if signature_of(&gram).positive > 1 {
        return Ok(false);
    }
    if let [a, d, r] = classes {
        if hodge_scalar_inequality(lattice, a, d, r)? == Some(false) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `n₀ + 2` where `n₀` is the least integer with `n₀·a > b` and
/// `(n₀·a − b)² > b² − ac`, i.e. `n₀ > (b + √(b² − ac))/a`.
pub fn regeneration_degree_bound(a: &Int, b: &Int, c: &Int) -> Result<Int> {
    if !a.is_positive() {
        return Err(Error::InvalidInput(format!("a = H² = {a} must be positive")));
    }
    let disc = b * b - a * c;
    if !disc.is_positive() {
        return Err(Error::HodgeIndex(format!("b² − ac = {disc} must be positive")));
    }
    let holds = |n: &Int| {
        let t = n * a - b;
        t.is_positive() && &t * &t > disc
    };
    let root = isqrt(&disc).expect("positive");
    // floor((b + ⌊√disc⌋)/a) never exceeds the threshold, so search upwards
    let mut n = (b + &root).div_floor(a);
    while !holds(&n) {
        n += 1;
    }
    Ok(n + 2)
}

/// Whether both classes are certified nef and their sum has positive square.
pub fn big_nef_sum(lattice: &Lattice, e1: &DivisorClass, e2: &DivisorClass, roots: &RootSet) -> Result<bool> {
    let sum = e1.add(e2);
    Ok(is_nef(lattice, e1, roots)?.is_nef()
        && is_nef(lattice, e2, roots)?.is_nef()
        && lattice.square(&sum)?.is_positive())
}

/// Glue a curve `C` to a genus-1 class `E`: possible for genus `g` when
/// `2 ≤ g ≤ C·E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReductionPlan {
    pub target: DivisorClass,
    #[serde(with = "crate::int::serde_int")]
    pub genus: Int,
    #[serde(with = "crate::int::serde_int")]
    pub intersection: Int,
}

pub fn genus_reduction_plan(
    lattice: &Lattice,
    g: &Int,
    c: &DivisorClass,
    e: &DivisorClass,
    roots: &RootSet,
) -> Result<Option<GenusReductionPlan>> {
    if g < &Int::from(2) {
        return Err(Error::InvalidInput(format!("genus {g} must be at least 2")));
    }
    let c2 = lattice.square(c)?;
    if c2 < Int::from(-2) {
        return Err(Error::Precondition(format!("C² = {c2} < −2")));
    }
    match is_nef(lattice, e, roots)? {
        NefVerdict::Nef => {}
        other => return Err(Error::Precondition(format!("E = {e} is not certified nef: {other:?}"))),
    }
    let ce = lattice.pair(c, e)?;
    Ok((&ce >= g).then(|| GenusReductionPlan { target: c.add(e), genus: g.clone(), intersection: ce }))
}

/// `gcd` of `F·e_i` over the basis: the index of the fibration with fibre
/// class `F`.
pub fn fibration_index(lattice: &Lattice, f: &DivisorClass) -> Result<Int> {
    lattice.check(f)?;
    if f.is_zero() {
        return Err(Error::InvalidInput("F must be nonzero".into()));
    }
    let sq = lattice.sq(f);
    if !sq.is_zero() {
        return Err(Error::InvalidInput(format!("F² = {sq}, but F must be isotropic")));
    }
    Ok(gcd_all(lattice.dual_form(f).iter()))
}
