//! Exact arithmetic for rank-2 lattices (binary forms).
//!
//! For a Gram `[[p, q], [q, r]]` the form is `p x² + 2q xy + r y²`; with
//! `p = 2d, q = a, r = 2b` its reduced discriminant `a² − 4bd` equals
//! `q² − pr = −det`. The form represents zero iff `−det` is a perfect square.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::int::{exact_sqrt, isqrt, rat_exact_sqrt, sign_normalized, signed_divisors, witness_order, Int, Rat};
use crate::lattice::{DivisorClass, Lattice};
use crate::linalg::Matrix;

/// Above this many degree values the rank-2 representation test gives up.
pub const MAX_DEGREE_SWEEP: u64 = 50_000_000;

fn entries(lattice: &Lattice) -> (Int, Int, Int) {
    let g = lattice.gram();
    (g[0][0].clone(), g[0][1].clone(), g[1][1].clone())
}

fn require_rank2(lattice: &Lattice) -> Result<()> {
    if lattice.rank() == 2 {
        Ok(())
    } else {
        Err(Error::InvalidRank { expected: "2".into(), found: lattice.rank() })
    }
}

/// The two primitive isotropic directions, sign-normalised, when they exist.
pub fn isotropic_rays(lattice: &Lattice) -> Result<Option<[DivisorClass; 2]>> {
    require_rank2(lattice)?;
    let (p, q, r) = entries(lattice);
    let delta = -lattice.discriminant();
    if delta.is_zero() {
        return Err(Error::Degenerate);
    }
    let Some(s) = exact_sqrt(&delta) else {
        return Ok(None);
    };
    let prim = |x: Int, y: Int| {
        let v = DivisorClass::new(vec![x, y]).primitive_part();
        DivisorClass::new(sign_normalized(v.coords()))
    };
    let rays = if p.is_zero() {
        // y (2q x + r y) = 0
        [prim(Int::one(), Int::zero()), prim(r.clone(), -(Int::from(2) * &q))]
    } else {
        [prim(-&q + &s, p.clone()), prim(-&q - &s, p.clone())]
    };
    let mut rays = rays;
    rays.sort_by(|a, b| witness_order(a.coords(), b.coords()));
    Ok(Some(rays))
}

/// Fundamental solution of `x² − D y² = 1` for nonsquare `D > 0`.
pub fn pell(d: &Int) -> (Int, Int) {
    let a0 = isqrt(d).expect("positive");
    let (mut m, mut den, mut a) = (Int::zero(), Int::one(), a0.clone());
    let (mut h1, mut h2) = (Int::one(), Int::zero());
    let (mut k1, mut k2) = (Int::zero(), Int::one());
    loop {
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        if &h * &h - d * &k * &k == Int::one() {
            return (h, k);
        }
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        m = &den * &a - &m;
        den = (d - &m * &m) / &den;
        a = (&a0 + &m) / &den;
    }
}

/// A hyperbolic automorph `g` (`gᵀ G g = G`, trace `t > 2`) of an anisotropic
/// indefinite binary lattice, together with its trace.
pub fn automorph(lattice: &Lattice) -> Result<(Matrix, Int)> {
    require_rank2(lattice)?;
    let delta = -lattice.discriminant();
    if !delta.is_positive() || exact_sqrt(&delta).is_some() {
        return Err(Error::InvalidInput(
            "automorph requires an anisotropic indefinite binary lattice".into(),
        ));
    }
    let (p, q, r) = entries(lattice);
    let (x, y) = pell(&delta);
    let g = vec![
        vec![&x - &q * &y, -(&r * &y)],
        vec![&p * &y, &x + &q * &y],
    ];
    Ok((g, Int::from(2) * x))
}

/// Smallest positive-square class by [`witness_order`] in a growing box.
pub fn positive_class(lattice: &Lattice) -> Result<DivisorClass> {
    require_rank2(lattice)?;
    if lattice.signature().positive == 0 {
        return Err(Error::NotHyperbolic(lattice.signature()));
    }
    let mut radius = 1i64;
    loop {
        let mut best: Option<DivisorClass> = None;
        for x in -radius..=radius {
            for y in -radius..=radius {
                let v = DivisorClass::from_i64s(&[x, y]);
                if lattice.sq(&v).is_positive() {
                    let v = DivisorClass::new(sign_normalized(v.coords()));
                    if best.as_ref().map_or(true, |b| witness_order(v.coords(), b.coords()).is_lt()) {
                        best = Some(v);
                    }
                }
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        radius *= 2;
    }
}

/// All `v` with `v² = n` in a fundamental region for the automorphism action
/// (for split forms: all of them). Exact; `n ≠ 0`.
pub fn representatives(lattice: &Lattice, n: &Int) -> Result<Vec<DivisorClass>> {
    require_rank2(lattice)?;
    if n.is_zero() {
        return Err(Error::InvalidInput("use isotropic_rays for n = 0".into()));
    }
    if n.is_odd() {
        return Ok(Vec::new());
    }
    let delta = -lattice.discriminant();
    if delta.is_zero() {
        return Err(Error::Degenerate);
    }
    if !delta.is_positive() {
        return definite_representatives(lattice, n);
    }
    match isotropic_rays(lattice)? {
        Some([e1, e2]) => split_representatives(lattice, n, &e1, &e2),
        None => anisotropic_representatives(lattice, n),
    }
}

fn split_representatives(
    lattice: &Lattice,
    n: &Int,
    e1: &DivisorClass,
    e2: &DivisorClass,
) -> Result<Vec<DivisorClass>> {
    // v² = 2 (v·e1)(v·e2) / (e1·e2)
    let m = lattice.pair_unchecked(e1, e2);
    let target = n * &m / 2;
    let f1 = lattice.dual_form(e1);
    let f2 = lattice.dual_form(e2);
    let det = &f1[0] * &f2[1] - &f1[1] * &f2[0];
    let mut out = Vec::new();
    for s in signed_divisors(&target) {
        let t = &target / &s;
        let xn = &s * &f2[1] - &f1[1] * &t;
        let yn = &f1[0] * &t - &f2[0] * &s;
        if (&xn % &det).is_zero() && (&yn % &det).is_zero() {
            let v = DivisorClass::new(vec![xn / &det, yn / &det]);
            if lattice.sq(&v) == *n {
                out.push(v);
            }
        }
    }
    Ok(out)
}

fn anisotropic_representatives(lattice: &Lattice, n: &Int) -> Result<Vec<DivisorClass>> {
    // With λ the eigenvalue of the automorph, every orbit contains some v with
    // (A·v)² ≤ (t + 2)·A²·|n| / 4, t = λ + 1/λ.
    let (_, t) = automorph(lattice)?;
    let a = positive_class(lattice)?;
    let a2 = lattice.sq(&a);
    let bound_sq = (&t + 2u32) * &a2 * n.abs();
    let k_max = isqrt(&((bound_sq + 3u32) / 4u32)).unwrap_or_default() + 1u32;
    if k_max > Int::from(MAX_DEGREE_SWEEP) {
        return Err(Error::InvalidInput(format!(
            "representation sweep of {k_max} degrees exceeds the supported bound"
        )));
    }
    let ga = lattice.dual_form(&a);
    let w = DivisorClass::new(vec![ga[1].clone(), -ga[0].clone()]).primitive_part();
    let w2 = lattice.sq(&w);
    let mut out = Vec::new();
    let mut k = -k_max.clone();
    while k <= k_max {
        // v = (k/A²)·A + s·w with s² = (n·A² − k²)/(A²·w²)
        let s2 = Rat::new(n * &a2 - &k * &k, &a2 * &w2);
        if !s2.is_negative() {
            if let Some(s) = rat_exact_sqrt(&s2) {
                for s in [s.clone(), -s] {
                    let coords: Option<Vec<Int>> = (0..2)
                        .map(|i| {
                            let c = Rat::new(&k * &a.0[i], a2.clone())
                                + &s * Rat::from_integer(w.0[i].clone());
                            c.is_integer().then(|| c.to_integer())
                        })
                        .collect();
                    if let Some(c) = coords {
                        let v = DivisorClass::new(c);
                        if lattice.sq(&v) == *n && !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
            }
        }
        k += 1;
    }
    Ok(out)
}

fn definite_representatives(lattice: &Lattice, n: &Int) -> Result<Vec<DivisorClass>> {
    // Definite forms: flip to positive definite and enumerate the ellipse.
    let sign = if lattice.gram()[0][0].is_negative() { -Int::one() } else { Int::one() };
    let q: Matrix = lattice.gram().iter().map(|row| row.iter().map(|x| x * &sign).collect()).collect();
    let target = n * &sign;
    if target.is_negative() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    crate::enumerate::fincke_pohst(&q, &Rat::from_integer(target.clone()), |x| {
        let v = DivisorClass::new(x.to_vec());
        if lattice.sq(&v) == *n {
            out.push(v);
        }
    })?;
    Ok(out)
}

/// Canonical witness among representatives.
pub fn best(mut vs: Vec<DivisorClass>) -> Option<DivisorClass> {
    for v in vs.iter_mut() {
        *v = DivisorClass::new(sign_normalized(v.coords()));
    }
    vs.into_iter().min_by(|a, b| witness_order(a.coords(), b.coords()))
}
