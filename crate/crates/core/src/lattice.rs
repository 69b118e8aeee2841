//! Integral even lattices and divisor classes.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::int::{gcd_all, int, Int};
use crate::linalg::{self, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignatureTriple {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl SignatureTriple {
    pub fn rank(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    /// `(1, r−1, 0)`, the signature of a K3 Picard lattice.
    pub fn is_hyperbolic(&self) -> bool {
        self.positive == 1 && self.zero == 0
    }
}

impl fmt::Display for SignatureTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

/// Integer coordinates of a class in the basis of its lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(#[serde(with = "crate::int::serde_int::vec")] pub Vec<Int>);

impl DivisorClass {
    pub fn new(coords: Vec<Int>) -> Self {
        DivisorClass(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        DivisorClass(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Int::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = Int::one();
        v
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the coordinates; zero for the zero class.
    pub fn content(&self) -> Int {
        gcd_all(&self.0)
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Int) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }

    /// Divides by the content; the zero class is returned unchanged.
    pub fn primitive_part(&self) -> DivisorClass {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        DivisorClass(self.0.iter().map(|a| a / &g).collect())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Result of [`Lattice::divisibility_violations`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    /// `v ∈ 2Λ`
    pub in_twice_lattice: bool,
    /// Largest `n ≥ 2` with `v − w ∈ nΛ` (the content of `v − w`; `None` when
    /// the content is 1). For `v = w` every `n` works and this is `Some(0)`.
    #[serde(with = "opt_int")]
    pub difference_multiple: Option<Int>,
}

impl DivisibilityReport {
    pub fn is_clear(&self) -> bool {
        !self.in_twice_lattice && self.difference_multiple.is_none()
    }
}

mod opt_int {
    use crate::int::Int;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "crate::int::serde_int")] Int);

    pub fn serialize<S: Serializer>(v: &Option<Int>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|x| W(x.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Int>, D::Error> {
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

/// An even integral lattice given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: Matrix,
    name: Option<String>,
    signature: SignatureTriple,
    discriminant: Int,
}

impl Lattice {
    pub fn new(gram: Matrix) -> Result<Self> {
        let rank = gram.len();
        if rank == 0 {
            return Err(Error::InvalidLattice("rank must be at least 1".into()));
        }
        if let Some(row) = gram.iter().find(|row| row.len() != rank) {
            return Err(Error::InvalidLattice(format!(
                "Gram matrix is not square: row of length {} in a rank-{rank} matrix",
                row.len()
            )));
        }
        if !linalg::is_symmetric(&gram) {
            return Err(Error::InvalidLattice("Gram matrix is not symmetric".into()));
        }
        if let Some(i) = (0..rank).find(|&i| gram[i][i].is_odd()) {
            return Err(Error::InvalidLattice(format!(
                "diagonal entry {i} is odd ({}); the lattice must be even",
                gram[i][i]
            )));
        }
        let signature = signature_of(&gram);
        let discriminant = linalg::determinant(&gram);
        Ok(Lattice { gram, name: None, signature, discriminant })
    }

    pub fn from_i64s(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn signature(&self) -> SignatureTriple {
        self.signature
    }

    pub fn discriminant(&self) -> &Int {
        &self.discriminant
    }

    /// Fails unless the signature is `(1, r−1, 0)`.
    pub fn require_hyperbolic(&self) -> Result<()> {
        if self.signature.is_hyperbolic() {
            Ok(())
        } else {
            Err(Error::NotHyperbolic(self.signature))
        }
    }

    pub fn check(&self, v: &DivisorClass) -> Result<()> {
        if v.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() })
        }
    }

    /// `vᵀ · G · w`
    pub fn pair(&self, v: &DivisorClass, w: &DivisorClass) -> Result<Int> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.pair_unchecked(v, w))
    }

    pub(crate) fn pair_unchecked(&self, v: &DivisorClass, w: &DivisorClass) -> Int {
        let mut acc = Int::zero();
        for (i, vi) in v.0.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            let row = &self.gram[i];
            let mut inner = Int::zero();
            for (gij, wj) in row.iter().zip(&w.0) {
                if !gij.is_zero() && !wj.is_zero() {
                    inner += gij * wj;
                }
            }
            acc += vi * inner;
        }
        acc
    }

    pub fn square(&self, v: &DivisorClass) -> Result<Int> {
        self.pair(v, v)
    }

    pub(crate) fn sq(&self, v: &DivisorClass) -> Int {
        self.pair_unchecked(v, v)
    }

    /// `G · v`: the linear form `w ↦ pair(v, w)` in coordinates.
    pub fn dual_form(&self, v: &DivisorClass) -> Vec<Int> {
        linalg::mat_vec(&self.gram, &v.0)
    }

    pub fn is_primitive(&self, v: &DivisorClass) -> Result<bool> {
        self.check(v)?;
        if v.is_zero() {
            return Err(Error::InvalidInput("primitivity is undefined for the zero class".into()));
        }
        Ok(v.content().is_one())
    }

    pub fn divisibility_violations(
        &self,
        v: &DivisorClass,
        w: &DivisorClass,
    ) -> Result<DivisibilityReport> {
        self.check(v)?;
        self.check(w)?;
        let in_twice_lattice = v.0.iter().all(|c| c.is_even());
        let g = v.sub(w).content();
        let difference_multiple = if g.is_one() { None } else { Some(g) };
        Ok(DivisibilityReport { in_twice_lattice, difference_multiple })
    }

    /// Gram matrix of a list of classes.
    pub fn gram_of(&self, classes: &[DivisorClass]) -> Result<Matrix> {
        for c in classes {
            self.check(c)?;
        }
        Ok(classes
            .iter()
            .map(|a| classes.iter().map(|b| self.pair_unchecked(a, b)).collect())
            .collect())
    }

    /// Change of basis: the lattice with Gram `Tᵀ G T`.
    pub fn transformed(&self, t: &Matrix) -> Result<Lattice> {
        Lattice::new(linalg::congruent(&self.gram, t))
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            write!(f, "{name} ")?;
        }
        write!(f, "[")?;
        for (i, row) in self.gram.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Exact signature of any symmetric integer matrix.
pub fn signature_of(gram: &[Vec<Int>]) -> SignatureTriple {
    let diag = linalg::diagonalize(gram);
    SignatureTriple {
        positive: diag.iter().filter(|d| d.is_positive()).count(),
        negative: diag.iter().filter(|d| d.is_negative()).count(),
        zero: diag.iter().filter(|d| d.is_zero()).count(),
    }
}
