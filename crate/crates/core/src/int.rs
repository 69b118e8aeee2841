//! Integer helpers shared across the crate.
//!
//! Every intersection number is an arbitrary-precision [`Int`]. On the wire an
//! integer is a JSON/TOML number when it fits in an `i64` and a decimal string
//! otherwise, so no value is ever rounded through a float.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Floor of the square root; `None` for negative input.
pub fn isqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        None
    } else {
        Some(n.sqrt())
    }
}

/// Exact square root when `n` is a perfect square.
pub fn exact_sqrt(n: &Int) -> Option<Int> {
    let r = isqrt(n)?;
    (&r * &r == *n).then_some(r)
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Int>) -> Int {
    values.into_iter().fold(Int::zero(), |acc, v| acc.gcd(v))
}

pub fn floor_div(a: &Int, b: &Int) -> Int {
    a.div_floor(b)
}

pub fn rat_floor(r: &Rat) -> Int {
    r.numer().div_floor(r.denom())
}

pub fn rat_ceil(r: &Rat) -> Int {
    -((-r.numer()).div_floor(r.denom()))
}

/// Exact rational square root when `r` is the square of a rational.
pub fn rat_exact_sqrt(r: &Rat) -> Option<Rat> {
    let n = exact_sqrt(r.numer())?;
    let d = exact_sqrt(r.denom())?;
    Some(Rat::new(n, d))
}

/// Trial-division factorisation of `|n|` into primes, ascending, without
/// multiplicity. `0` and `±1` have no prime factors.
pub fn prime_factors(n: &Int) -> Vec<Int> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n <= Int::one() {
        return out;
    }
    let mut p = int(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += if p == int(2) { 1 } else { 2 };
    }
    if n > Int::one() {
        out.push(n);
    }
    out
}

/// Positive and negative divisors of a nonzero integer.
pub fn signed_divisors(n: &Int) -> Vec<Int> {
    let m = n.abs();
    let mut small = Vec::new();
    let mut d = Int::one();
    while &d * &d <= m {
        if (&m % &d).is_zero() {
            small.push(d.clone());
            let q = &m / &d;
            if q != d {
                small.push(q);
            }
        }
        d += 1;
    }
    small.sort();
    let mut out: Vec<Int> = small.iter().map(|d| -d).collect();
    out.extend(small);
    out
}

/// Makes the first nonzero entry positive.
pub fn sign_normalized(v: &[Int]) -> Vec<Int> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(first) if first.is_negative() => v.iter().map(|x| -x).collect(),
        _ => v.to_vec(),
    }
}

/// Deterministic preference among witness vectors: smaller L1 norm first, then
/// the lexicographically larger sign-normalised vector (earlier basis vectors
/// are preferred). Callers sign-normalise beforehand.
pub fn witness_order(a: &[Int], b: &[Int]) -> Ordering {
    let l1 = |v: &[Int]| v.iter().fold(Int::zero(), |acc, x| acc + x.abs());
    l1(a).cmp(&l1(b)).then_with(|| b.cmp(a))
}

pub mod serde_int {
    use super::Int;
    use num_traits::ToPrimitive;
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &Int, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(small) => s.serialize_i64(small),
            None => s.serialize_str(&v.to_string()),
        }
    }

    struct IntVisitor;

    impl<'de> Visitor<'de> for IntVisitor {
        type Value = Int;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or a decimal integer string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
            Ok(Int::from(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
            Ok(Int::from(v))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
            v.trim().parse().map_err(|_| E::custom(format!("not an integer: {v:?}")))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        d.deserialize_any(IntVisitor)
    }

    pub mod vec {
        use super::Int;
        use num_traits::ToPrimitive;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        #[derive(serde::Deserialize)]
        struct Wrapped(#[serde(with = "super")] Int);

        pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                match x.to_i64() {
                    Some(small) => seq.serialize_element(&small)?,
                    None => seq.serialize_element(&x.to_string())?,
                }
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
            let raw: Vec<Wrapped> = Vec::deserialize(d)?;
            Ok(raw.into_iter().map(|w| w.0).collect())
        }
    }

    pub mod matrix {
        use super::Int;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        #[derive(serde::Serialize)]
        struct RowRef<'a>(#[serde(with = "super::vec")] &'a Vec<Int>);

        #[derive(serde::Deserialize)]
        struct Row(#[serde(with = "super::vec")] Vec<Int>);

        pub fn serialize<S: Serializer>(m: &[Vec<Int>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(m.len()))?;
            for row in m {
                seq.serialize_element(&RowRef(row))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Int>>, D::Error> {
            let raw: Vec<Row> = Vec::deserialize(d)?;
            Ok(raw.into_iter().map(|r| r.0).collect())
        }
    }
}
