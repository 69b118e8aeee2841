//! Isotropy and representation questions for the quadratic form of a lattice.
//!
//! Verdicts about solubility are always exact: rank 2 by the discriminant,
//! ranks 3 and 4 by the Hasse–Minkowski local–global principle, rank ≥ 5 by
//! Meyer's theorem. Only the extraction of an explicit witness is bounded, by
//! a coordinate cap and a point budget ([`SearchConfig`]).

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::binary;
use crate::enumerate::collect_slab;
use crate::error::{Error, Result};
use crate::int::{exact_sqrt, sign_normalized, witness_order, Int, Rat};
use crate::lattice::{DivisorClass, Lattice};
use crate::linalg::diagonalize;
use crate::local::{local_global, square_class};

/// Default bound on `|coordinate|` for witness searches.
pub const DEFAULT_SEARCH_CAP: u64 = 10_000;
/// Default number of lattice points a witness search may visit.
pub const DEFAULT_POINT_BUDGET: u64 = 2_000_000;

/// Limits for explicit witness searches. Verdicts never depend on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub coordinate_cap: u64,
    pub point_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { coordinate_cap: DEFAULT_SEARCH_CAP, point_budget: DEFAULT_POINT_BUDGET }
    }
}

impl SearchConfig {
    pub fn with_cap(coordinate_cap: u64) -> Self {
        SearchConfig { coordinate_cap, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IsotropyMethod {
    /// Rank 1: `2d·x² = 0` forces `x = 0`.
    ClosedFormRank1,
    ClosedFormRank2,
    LocalGlobal,
    MeyerRank5,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IsotropyStatus {
    /// The form represents zero. `witness` is `None` only when the search
    /// limits were exhausted before a vector was found.
    Isotropic { witness: Option<DivisorClass> },
    /// `obstruction` names a place where the form is anisotropic.
    Anisotropic { obstruction: String },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyVerdict {
    pub status: IsotropyStatus,
    pub method: IsotropyMethod,
}

impl IsotropyVerdict {
    pub fn is_isotropic(&self) -> bool {
        matches!(self.status, IsotropyStatus::Isotropic { .. })
    }

    pub fn is_anisotropic(&self) -> bool {
        matches!(self.status, IsotropyStatus::Anisotropic { .. })
    }

    pub fn witness(&self) -> Option<&DivisorClass> {
        match &self.status {
            IsotropyStatus::Isotropic { witness } => witness.as_ref(),
            _ => None,
        }
    }
}

/// Decides whether the lattice contains a nonzero `v` with `v² = 0`.
///
/// The witness, when present, is primitive and canonical: first nonzero
/// coordinate positive, smallest L1 norm, ties to earlier basis vectors.
pub fn isotropic_exists(lattice: &Lattice, config: &SearchConfig) -> Result<IsotropyVerdict> {
    if lattice.signature().zero > 0 || lattice.discriminant().is_zero() {
        return Err(Error::Degenerate);
    }
    let rank = lattice.rank();
    let verdict = |status, method| Ok(IsotropyVerdict { status, method });
    match rank {
        1 => verdict(
            IsotropyStatus::Anisotropic { obstruction: "rank 1".into() },
            IsotropyMethod::ClosedFormRank1,
        ),
        2 => match binary::isotropic_rays(lattice)? {
            Some([first, _]) => verdict(
                IsotropyStatus::Isotropic { witness: Some(first) },
                IsotropyMethod::ClosedFormRank2,
            ),
            None => verdict(
                IsotropyStatus::Anisotropic {
                    obstruction: format!("−det = {} is not a perfect square", -lattice.discriminant()),
                },
                IsotropyMethod::ClosedFormRank2,
            ),
        },
        _ => {
            let sig = lattice.signature();
            let method = if rank >= 5 { IsotropyMethod::MeyerRank5 } else { IsotropyMethod::LocalGlobal };
            if sig.positive == 0 || sig.negative == 0 {
                return verdict(
                    IsotropyStatus::Anisotropic { obstruction: "definite over ℝ".into() },
                    method,
                );
            }
            if rank <= 4 {
                let diag: Vec<Int> = diagonalize(lattice.gram()).iter().map(square_class).collect();
                let lg = local_global(&diag);
                if let Some(p) = lg.obstruction {
                    return verdict(
                        IsotropyStatus::Anisotropic { obstruction: format!("anisotropic over ℚ_{p}") },
                        method,
                    );
                }
            }
            let witness = match search_norm(lattice, &Int::zero(), config) {
                SearchOutcome::Found(v) => Some(v),
                SearchOutcome::Exhausted { .. } => None,
            };
            verdict(IsotropyStatus::Isotropic { witness }, method)
        }
    }
}

/// Result of a bounded witness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(DivisorClass),
    /// Every point with non-pivot coordinates of size `≤ radius` was examined.
    Exhausted { radius: u64 },
}

/// Searches for `v ≠ 0` with `v² = n` over growing shells `max |y_j| = s` in
/// all coordinates but one pivot, solving the quadratic in the pivot exactly.
/// For `n = 0` the witness is made primitive.
pub fn search_norm(lattice: &Lattice, n: &Int, config: &SearchConfig) -> SearchOutcome {
    let g = lattice.gram();
    let rank = lattice.rank();
    let pivot = (0..rank).find(|&i| !g[i][i].is_zero()).unwrap_or(0);
    let others: Vec<usize> = (0..rank).filter(|&i| i != pivot).collect();
    let m = others.len();
    let mut visited: u64 = 0;
    let mut y = vec![0i64; m];
    for s in 0..=config.coordinate_cap {
        let s = s as i64;
        let mut found: Vec<DivisorClass> = Vec::new();
        let mut check = |y: &[i64]| {
            let yb: Vec<Int> = y.iter().map(|&v| Int::from(v)).collect();
            let mut b = Int::zero();
            let mut c = Int::zero();
            for (j, &oj) in others.iter().enumerate() {
                if yb[j].is_zero() {
                    continue;
                }
                b += &g[pivot][oj] * &yb[j];
                for (k, &ok) in others.iter().enumerate() {
                    c += &yb[j] * &g[oj][ok] * &yb[k];
                }
            }
            for x in solve_pivot(&g[pivot][pivot], &b, &(c - n)) {
                let mut coords = vec![Int::zero(); rank];
                coords[pivot] = x;
                for (j, &oj) in others.iter().enumerate() {
                    coords[oj] = yb[j].clone();
                }
                let mut v = DivisorClass::new(coords);
                if v.is_zero() {
                    continue;
                }
                if n.is_zero() {
                    v = v.primitive_part();
                }
                found.push(DivisorClass::new(sign_normalized(v.coords())));
            }
        };
        if s == 0 {
            check(&y);
            visited += 1;
        } else {
            // Each shell point once: j is the first coordinate with |y_j| = s.
            for j in 0..m {
                for sign in [s, -s] {
                    let mut pre = vec![-(s - 1); j];
                    loop {
                        let mut post = vec![-s; m - j - 1];
                        loop {
                            y[..j].copy_from_slice(&pre);
                            y[j] = sign;
                            y[j + 1..].copy_from_slice(&post);
                            check(&y);
                            visited += 1;
                            if !odometer(&mut post, -s, s) {
                                break;
                            }
                        }
                        if !odometer(&mut pre, -(s - 1), s - 1) {
                            break;
                        }
                    }
                }
            }
        }
        if let Some(best) = found.into_iter().min_by(|a, b| witness_order(a.coords(), b.coords())) {
            return SearchOutcome::Found(best);
        }
        if visited >= config.point_budget || m == 0 {
            return SearchOutcome::Exhausted { radius: s as u64 };
        }
    }
    SearchOutcome::Exhausted { radius: config.coordinate_cap }
}

/// Advances `digits` through `[lo, hi]^k`; `false` once it wraps around.
fn odometer(digits: &mut [i64], lo: i64, hi: i64) -> bool {
    for d in digits.iter_mut() {
        if *d < hi {
            *d += 1;
            return true;
        }
        *d = lo;
    }
    false
}

/// Integer roots of `a x² + 2b x + c = 0`.
fn solve_pivot(a: &Int, b: &Int, c: &Int) -> Vec<Int> {
    if a.is_zero() {
        if b.is_zero() {
            return Vec::new();
        }
        let num = -c;
        let den = Int::from(2) * b;
        return if (&num % &den).is_zero() { vec![num / den] } else { Vec::new() };
    }
    let disc = b * b - a * c;
    let Some(r) = exact_sqrt(&disc) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for num in [-b + &r, -b - &r] {
        if (&num % a).is_zero() {
            let x = num / a;
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// All `v` with `v² = norm` and `0 < A·v ≤ degree_max`, sorted
/// lexicographically by coordinates.
pub fn enumerate_norm_vectors(
    lattice: &Lattice,
    norm: &Int,
    ample: &DivisorClass,
    degree_max: &Int,
) -> Result<Vec<DivisorClass>> {
    lattice.check(ample)?;
    let a2 = lattice.sq(ample);
    if !a2.is_positive() {
        return Err(Error::InvalidAmple(format!("A² = {a2} is not positive")));
    }
    let lo = Int::from(1);
    let mut out: Vec<DivisorClass> = collect_slab(lattice, ample, &lo, degree_max, norm, |_, _, sq| sq == norm)?
        .into_iter()
        .map(|(v, _, _)| v)
        .collect();
    out.sort();
    Ok(out)
}

/// Outcome of [`represents`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Representation {
    Found { vector: DivisorClass },
    /// Proven: no nonzero vector has the requested square.
    NotRepresented,
    /// Nothing found with non-pivot coordinates up to `radius`; not a proof.
    NoneWithinCap { radius: u64 },
}

/// Looks for a nonzero `v` with `v² = n`. Exact in ranks 1 and 2 (and for
/// `n = 0` in every rank); a bounded search otherwise.
pub fn represents(lattice: &Lattice, n: &Int, config: &SearchConfig) -> Result<Representation> {
    if lattice.rank() == 1 {
        let g = &lattice.gram()[0][0];
        if g.is_zero() || n.is_zero() {
            return Ok(Representation::NotRepresented);
        }
        if (n % g).is_zero() {
            if let Some(x) = exact_sqrt(&(n / g)) {
                return Ok(Representation::Found { vector: DivisorClass::new(vec![x]) });
            }
        }
        return Ok(Representation::NotRepresented);
    }
    if n.is_zero() && lattice.signature().zero == 0 && !lattice.discriminant().is_zero() {
        let verdict = isotropic_exists(lattice, config)?;
        return Ok(match verdict.status {
            IsotropyStatus::Isotropic { witness: Some(v) } => Representation::Found { vector: v },
            IsotropyStatus::Anisotropic { .. } => Representation::NotRepresented,
            _ => Representation::NoneWithinCap { radius: config.coordinate_cap },
        });
    }
    if lattice.rank() == 2 && !lattice.discriminant().is_zero() && !n.is_zero() {
        if let Ok(reps) = binary::representatives(lattice, n) {
            return Ok(match binary::best(reps) {
                Some(v) => Representation::Found { vector: v },
                None => Representation::NotRepresented,
            });
        }
    }
    Ok(match search_norm(lattice, n, config) {
        SearchOutcome::Found(v) => Representation::Found { vector: v },
        SearchOutcome::Exhausted { radius } => Representation::NoneWithinCap { radius },
    })
}

/// `(R − (H·R / H²)·H)² = R² − (H·R)² / H²`, exactly.
pub fn project_orthogonal(lattice: &Lattice, h: &DivisorClass, r: &DivisorClass) -> Result<Rat> {
    let h2 = lattice.square(h)?;
    if !h2.is_positive() {
        return Err(Error::InvalidInput(format!("H² = {h2} must be positive")));
    }
    let hr = lattice.pair(h, r)?;
    let r2 = lattice.sq(r);
    Ok(Rat::from_integer(r2) - Rat::new(&hr * &hr, h2))
}
