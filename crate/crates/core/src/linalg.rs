//! Exact dense linear algebra over ℤ and ℚ for small symmetric matrices.

use num_traits::{One, Signed, Zero};

use crate::int::{Int, Rat};

pub type Matrix = Vec<Vec<Int>>;

/// Fraction-free Gaussian elimination (Bareiss). Exact for any square matrix.
pub fn determinant(m: &[Vec<Int>]) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut a: Matrix = m.to_vec();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Congruence diagonalisation over ℚ: returns `d_1, …, d_n` such that the form
/// is equivalent over ℚ to `Σ d_i x_i²`. Zero pivots are resolved by the basis
/// change `e_i ↦ e_i + e_j`; a trailing all-zero block yields zeros.
pub fn diagonalize(m: &[Vec<Int>]) -> Vec<Rat> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .map(|row| row.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.remove(pos);
            let pivot = a[p][p].clone();
            for &j in &active {
                let factor = &a[j][p] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for &k in &active {
                    let delta = &factor * &a[p][k];
                    a[j][k] -= delta;
                }
            }
            out.push(pivot);
            continue;
        }
        let pair = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j))
        });
        match pair {
            Some((i, j)) => {
                // e_i ← e_i + e_j; the new diagonal entry is 2·a_ij ≠ 0.
                for k in 0..n {
                    let add = a[j][k].clone();
                    a[i][k] += add;
                }
                for k in 0..n {
                    let add = a[k][j].clone();
                    a[k][i] += add;
                }
            }
            None => {
                out.extend(active.iter().map(|_| Rat::zero()));
                active.clear();
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn transpose(m: &[Vec<Int>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vec<Int>], b: &[Vec<Int>]) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Int::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Int>], v: &[Int]) -> Vec<Int> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Int::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

/// `Tᵀ · G · T`
pub fn congruent(g: &[Vec<Int>], t: &[Vec<Int>]) -> Matrix {
    mat_mul(&transpose(t), &mat_mul(g, t))
}

pub fn is_symmetric(m: &[Vec<Int>]) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == m[j][i]))
}

pub fn max_abs_diagonal(m: &[Vec<Int>]) -> Int {
    m.iter().enumerate().map(|(i, row)| row[i].abs()).max().unwrap_or_default()
}
