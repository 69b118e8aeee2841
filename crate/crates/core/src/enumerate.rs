//! Exact enumeration of lattice points in bounded regions.
//!
//! For a class `A` with `A² > 0` in a lattice of signature `(1, r−1)` the form
//!
//! ```text
//! M_A(v) = 2·(A·v)² − A²·v²
//! ```
//!
//! is positive definite: writing `v = αA + w` with `w ⊥ A` gives
//! `M_A(v) = α²(A²)² − A²·w²` and `w² ≤ 0` with equality only at `w = 0`.
//! A class of degree `A·v = k` and square `v² ≥ n` therefore satisfies
//! `M_A(v) ≤ 2k² − A²·n`, which turns every degree-slab question into an
//! ellipsoid enumeration.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::int::{isqrt, rat_ceil, rat_floor, Int, Rat};
use crate::lattice::{DivisorClass, Lattice};
use crate::linalg::Matrix;

/// Calls `visit` on every `x ∈ ℤⁿ` with `xᵀ Q x ≤ bound`. `Q` must be
/// positive definite; otherwise [`Error::Degenerate`] is returned. Points are
/// visited in a fixed order.
pub fn fincke_pohst<F>(q: &Matrix, bound: &Rat, mut visit: F) -> Result<()>
where
    F: FnMut(&[Int]),
{
    let n = q.len();
    if bound.is_negative() {
        return Ok(());
    }
    // Q(x) = Σ_i d_i (x_i + Σ_{j>i} μ_ij x_j)²
    let mut d: Vec<Rat> = vec![Rat::zero(); n];
    let mut mu: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n];
    let mut a: Vec<Vec<Rat>> =
        q.iter().map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
    for i in 0..n {
        if !a[i][i].is_positive() {
            return Err(Error::Degenerate);
        }
        d[i] = a[i][i].clone();
        for j in i + 1..n {
            mu[i][j] = &a[i][j] / &d[i];
        }
        for j in i + 1..n {
            for k in i + 1..n {
                let delta = &mu[i][j] * &a[i][k];
                a[j][k] -= delta;
            }
        }
    }
    let mut x = vec![Int::zero(); n];
    if n == 0 {
        visit(&x);
        return Ok(());
    }
    recurse(n - 1, &d, &mu, bound, &Rat::zero(), &mut x, &mut visit);
    Ok(())
}

fn recurse<F: FnMut(&[Int])>(
    i: usize,
    d: &[Rat],
    mu: &[Vec<Rat>],
    bound: &Rat,
    partial: &Rat,
    x: &mut Vec<Int>,
    visit: &mut F,
) {
    let n = x.len();
    let mut center = Rat::zero();
    for j in i + 1..n {
        center -= &mu[i][j] * Rat::from_integer(x[j].clone());
    }
    let remaining = bound - partial;
    let t = &remaining / &d[i];
    let s: Int = isqrt(&rat_floor(&t)).unwrap_or_default() + 1;
    let lo = rat_ceil(&(&center - Rat::from_integer(s.clone())));
    let hi = rat_floor(&(&center + Rat::from_integer(s)));
    let mut xi = lo;
    while xi <= hi {
        let diff = Rat::from_integer(xi.clone()) - &center;
        let term = &d[i] * &diff * &diff;
        if term <= remaining {
            x[i] = xi.clone();
            let next = partial + &term;
            if i == 0 {
                visit(x);
            } else {
                recurse(i - 1, d, mu, bound, &next, x, visit);
            }
        }
        xi += 1;
    }
    x[i] = Int::zero();
}

/// Gram matrix of `M_A(v) = 2(A·v)² − A²·v²`.
pub fn majorant(lattice: &Lattice, a: &DivisorClass) -> Matrix {
    let ga = lattice.dual_form(a);
    let a2 = lattice.sq(a);
    let g = lattice.gram();
    let r = lattice.rank();
    (0..r)
        .map(|i| (0..r).map(|j| Int::from(2) * &ga[i] * &ga[j] - &a2 * &g[i][j]).collect())
        .collect()
}

/// Visits every class `v` with `deg_lo ≤ A·v ≤ deg_hi` and `v² ≥ min_square`,
/// passing `(v, A·v, v²)`. Requires `A² > 0` and a hyperbolic lattice.
pub fn for_each_in_slab<F>(
    lattice: &Lattice,
    a: &DivisorClass,
    deg_lo: &Int,
    deg_hi: &Int,
    min_square: &Int,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(DivisorClass, Int, Int),
{
    lattice.check(a)?;
    lattice.require_hyperbolic()?;
    let a2 = lattice.sq(a);
    if !a2.is_positive() {
        return Err(Error::InvalidAmple(format!("A² = {a2} is not positive")));
    }
    if deg_lo > deg_hi {
        return Ok(());
    }
    let k = deg_lo.abs().max(deg_hi.abs());
    let bound = Int::from(2) * &k * &k - &a2 * min_square;
    if bound.is_negative() {
        return Ok(());
    }
    let ga = lattice.dual_form(a);
    let q = majorant(lattice, a);
    fincke_pohst(&q, &Rat::from_integer(bound), |x| {
        let deg = x.iter().zip(&ga).fold(Int::zero(), |acc, (xi, gi)| acc + xi * gi);
        if &deg < deg_lo || &deg > deg_hi {
            return;
        }
        let v = DivisorClass::new(x.to_vec());
        let sq = lattice.sq(&v);
        if &sq >= min_square {
            visit(v, deg, sq);
        }
    })
}

/// Collects the slab into a list sorted by `(degree, coordinates)`.
pub fn collect_slab(
    lattice: &Lattice,
    a: &DivisorClass,
    deg_lo: &Int,
    deg_hi: &Int,
    min_square: &Int,
    filter: impl Fn(&DivisorClass, &Int, &Int) -> bool,
) -> Result<Vec<(DivisorClass, Int, Int)>> {
    let mut out = Vec::new();
    for_each_in_slab(lattice, a, deg_lo, deg_hi, min_square, |v, deg, sq| {
        if filter(&v, &deg, &sq) {
            out.push((v, deg, sq));
        }
    })?;
    out.sort_by(|x, y| x.1.cmp(&y.1).then_with(|| x.0.cmp(&y.0)));
    Ok(out)
}
