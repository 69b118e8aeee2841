//! Integral isometry testing for lattices of rank at most 4, and recognition of
//! the two exceptional rank-4 lattices.
//!
//! The search looks for the columns `t_1, …, t_r` of a change of basis in a
//! coordinate box of `L1`, matching `t_i · t_j = G2[i][j]` column by column.
//! The box radius is the largest `|diagonal entry|` of either Gram plus a
//! configurable slack, so a `None` answer after a passed invariant check means
//! "no isometry inside the box", not a proof of non-isometry.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::int::{sign_normalized, witness_order, Int};
use crate::lattice::Lattice;
use crate::linalg::{congruent, max_abs_diagonal, Matrix};

pub const MAX_ISOMETRY_RANK: usize = 4;
/// Slack added to the box radius by [`lattice_isomorphic`].
pub const DEFAULT_SLACK: u64 = 2;

/// Gram matrices of the two rank-4 lattices whose K3 surfaces are neither
/// elliptic nor have infinite automorphism group.
pub fn exceptional_rank4(which: u8) -> Lattice {
    let rows: [[i64; 4]; 4] = match which {
        1 => [[2, -1, -1, -1], [-1, -2, 0, 0], [-1, 0, -2, 0], [-1, 0, 0, -2]],
        2 => [[12, -2, 0, 0], [-2, -2, -1, 0], [0, -1, -2, -1], [0, 0, -1, -2]],
        _ => panic!("there are exactly two exceptional rank-4 lattices"),
    };
    let refs: Vec<&[i64]> = rows.iter().map(|r| &r[..]).collect();
    Lattice::from_i64s(&refs).expect("valid Gram").named(format!("vinberg-{which}"))
}

/// Which exceptional lattice `lattice` is isometric to, with the change of
/// basis `T` satisfying `Tᵀ·G·T = G_which`.
pub fn recognize_exceptional(lattice: &Lattice) -> Result<Option<(u8, Matrix)>> {
    if lattice.rank() != 4 {
        return Ok(None);
    }
    for which in [1u8, 2] {
        if let Some(t) = lattice_isomorphic(lattice, &exceptional_rank4(which))? {
            return Ok(Some((which, t)));
        }
    }
    Ok(None)
}

/// An integral `T` with `Tᵀ·G1·T = G2`, searched with [`DEFAULT_SLACK`].
pub fn lattice_isomorphic(l1: &Lattice, l2: &Lattice) -> Result<Option<Matrix>> {
    lattice_isomorphic_with_slack(l1, l2, DEFAULT_SLACK)
}

pub fn lattice_isomorphic_with_slack(l1: &Lattice, l2: &Lattice, slack: u64) -> Result<Option<Matrix>> {
    for l in [l1, l2] {
        if l.rank() > MAX_ISOMETRY_RANK {
            return Err(Error::UnsupportedRank(l.rank()));
        }
    }
    if l1.rank() != l2.rank() || l1.signature() != l2.signature() || l1.discriminant() != l2.discriminant() {
        return Ok(None);
    }
    if l1.discriminant().is_zero() {
        return Err(Error::Degenerate);
    }
    let r = l1.rank();
    let small = |g: &Matrix| -> Result<Vec<Vec<i128>>> {
        g.iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        x.to_i64().map(i128::from).ok_or_else(|| {
                            Error::InvalidInput("Gram entries too large for isometry search".into())
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let g1 = small(l1.gram())?;
    let g2 = small(l2.gram())?;
    let radius = max_abs_diagonal(l1.gram()).max(max_abs_diagonal(l2.gram())) + Int::from(slack);
    let radius = radius.to_i64().ok_or_else(|| Error::InvalidInput("box radius too large".into()))?;

    // Bucket the box by square, keeping only the squares G2 needs.
    let wanted: Vec<i128> = (0..r).map(|i| g2[i][i]).collect();
    let mut buckets: Vec<Vec<Vec<i64>>> = vec![Vec::new(); r];
    let mut x = vec![-radius; r];
    loop {
        if x.iter().any(|&c| c != 0) {
            let sq = quad(&g1, &x, &x);
            for (i, w) in wanted.iter().enumerate() {
                if sq == *w {
                    buckets[i].push(x.clone());
                }
            }
        }
        if !advance(&mut x, radius) {
            break;
        }
    }
    for b in buckets.iter_mut() {
        b.sort_by(|p, q| {
            let key = |v: &[i64]| sign_normalized(&v.iter().map(|&c| Int::from(c)).collect::<Vec<_>>());
            let (kp, kq) = (key(p), key(q));
            witness_order(&kp, &kq).then_with(|| q.cmp(p))
        });
    }

    let mut columns: Vec<Vec<i64>> = Vec::with_capacity(r);
    if !extend(&g1, &g2, &buckets, &mut columns) {
        return Ok(None);
    }
    let t: Matrix = (0..r).map(|row| (0..r).map(|col| Int::from(columns[col][row])).collect()).collect();
    if congruent(l1.gram(), &t) != *l2.gram() {
        return Err(Error::InvalidInput("isometry search produced an invalid change of basis".into()));
    }
    Ok(Some(t))
}

fn quad(g: &[Vec<i128>], x: &[i64], y: &[i64]) -> i128 {
    let mut acc = 0i128;
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0 {
            continue;
        }
        let mut inner = 0i128;
        for (j, &yj) in y.iter().enumerate() {
            inner += g[i][j] * yj as i128;
        }
        acc += xi as i128 * inner;
    }
    acc
}

fn advance(x: &mut [i64], radius: i64) -> bool {
    for c in x.iter_mut() {
        if *c < radius {
            *c += 1;
            return true;
        }
        *c = -radius;
    }
    false
}

fn extend(g1: &[Vec<i128>], g2: &[Vec<i128>], buckets: &[Vec<Vec<i64>>], columns: &mut Vec<Vec<i64>>) -> bool {
    let k = columns.len();
    if k == buckets.len() {
        return true;
    }
    for cand in &buckets[k] {
        if (0..k).all(|j| quad(g1, &columns[j], cand) == g2[j][k]) {
            columns.push(cand.clone());
            if extend(g1, g2, buckets, columns) {
                return true;
            }
            columns.pop();
        }
    }
    false
}
