//! Local isotropy of diagonal rational quadratic forms.
//!
//! Over `ℚ_p` a nondegenerate form `⟨a_1, …, a_n⟩` with discriminant `d = Π a_i`
//! and Hasse invariant `ε = Π_{i<j} (a_i, a_j)_p` represents zero iff
//!
//! * `n = 2`: `−d` is a square,
//! * `n = 3`: `(−1, −d)_p = ε`,
//! * `n = 4`: `d` is not a square, or `d` is a square and `ε = (−1, −1)_p`,
//! * `n ≥ 5`: always.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::int::{int, prime_factors, Int, Rat};

/// Squarefree integer in the square class of a nonzero rational.
pub fn square_class(r: &Rat) -> Int {
    let n = r.numer() * r.denom();
    squarefree_part(&n)
}

pub fn squarefree_part(n: &Int) -> Int {
    let mut out = if n.is_negative() { -Int::one() } else { Int::one() };
    let mut rest = n.abs();
    for p in prime_factors(n) {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            out *= &p;
        }
    }
    out
}

/// `(valuation, unit part)` of a nonzero integer at `p`.
fn split(n: &Int, p: &Int) -> (u32, Int) {
    let mut u = n.clone();
    let mut v = 0;
    while (&u % p).is_zero() {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// Legendre symbol `(u / p)` for odd prime `p` not dividing `u`.
fn legendre(u: &Int, p: &Int) -> i32 {
    let e = (p - 1u32) / 2u32;
    let r = u.mod_floor(p).modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

fn mod8(u: &Int) -> u32 {
    u.mod_floor(&int(8)).to_u32().unwrap_or(0)
}

/// Hilbert symbol `(a, b)_p` for nonzero integers and a prime `p`.
pub fn hilbert(a: &Int, b: &Int, p: &Int) -> i32 {
    let (alpha, u) = split(a, p);
    let (beta, v) = split(b, p);
    if *p == int(2) {
        let eps = |x: &Int| ((mod8(x) + 7) % 8 / 2) % 2; // (x − 1)/2 mod 2
        let omega = |x: &Int| {
            let m = mod8(x);
            if m == 3 || m == 5 {
                1
            } else {
                0
            }
        };
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let half = ((p - 1u32) / 2u32).to_u64().map(|h| h % 2).unwrap_or(1);
        let mut s = if (alpha as u64 * beta as u64 * half) % 2 == 0 { 1 } else { -1 };
        if beta % 2 == 1 {
            s *= legendre(&u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(&v, p);
        }
        s
    }
}

/// Whether the nonzero integer `a` is a square in `ℚ_p`.
pub fn is_square_qp(a: &Int, p: &Int) -> bool {
    let (v, u) = split(a, p);
    if v % 2 == 1 {
        return false;
    }
    if *p == int(2) {
        mod8(&u) == 1
    } else {
        legendre(&u, p) == 1
    }
}

/// Isotropy over `ℚ_p` of `⟨a_1, …, a_n⟩`, all `a_i` nonzero integers.
pub fn isotropic_at(diag: &[Int], p: &Int) -> bool {
    let n = diag.len();
    if n <= 1 {
        return false;
    }
    if n >= 5 {
        return true;
    }
    let d = diag.iter().fold(Int::one(), |acc, x| acc * x);
    match n {
        2 => is_square_qp(&-d, p),
        3 => hasse(diag, p) == hilbert(&int(-1), &-d, p),
        _ => !is_square_qp(&d, p) || hasse(diag, p) == hilbert(&int(-1), &int(-1), p),
    }
}

fn hasse(diag: &[Int], p: &Int) -> i32 {
    let mut e = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            e *= hilbert(&diag[i], &diag[j], p);
        }
    }
    e
}

/// Primes at which local isotropy must be checked: 2 and every prime dividing
/// some coefficient.
pub fn relevant_primes(diag: &[Int]) -> Vec<Int> {
    let mut ps = vec![int(2)];
    for a in diag {
        for p in prime_factors(a) {
            if !ps.contains(&p) {
                ps.push(p);
            }
        }
    }
    ps.sort();
    ps
}

/// Outcome of the local–global test for a nondegenerate diagonal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGlobal {
    pub real: bool,
    /// First prime at which the form is anisotropic, if any.
    pub obstruction: Option<Int>,
}

impl LocalGlobal {
    pub fn isotropic(&self) -> bool {
        self.real && self.obstruction.is_none()
    }
}

/// Hasse–Minkowski test on integer square-class representatives.
pub fn local_global(diag: &[Int]) -> LocalGlobal {
    let real = diag.iter().any(Signed::is_positive) && diag.iter().any(Signed::is_negative);
    let obstruction = relevant_primes(diag).into_iter().find(|p| !isotropic_at(diag, p));
    LocalGlobal { real, obstruction }
}
