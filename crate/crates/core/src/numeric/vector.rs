use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{int, Rational};

/// A point or direction with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        QVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = Rational::one();
        v
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        QVector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = Rational::zero();
        for (a, b) in self.0.iter().zip(&other.0) {
            if !a.is_zero() && !b.is_zero() {
                acc += a * b;
            }
        }
        acc
    }

    pub fn scale(&self, factor: &Rational) -> QVector {
        QVector(self.0.iter().map(|x| x * factor).collect())
    }

    /// `self + factor * other`
    pub fn add_scaled(&self, factor: &Rational, other: &QVector) -> QVector {
        QVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| if b.is_zero() { a.clone() } else { a + factor * b })
                .collect(),
        )
    }

    /// Affine combination `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &QVector, t: &Rational) -> QVector {
        self.add_scaled(t, &(other - self))
    }

    pub fn concat(&self, tail: &[Rational]) -> QVector {
        let mut coords = self.0.clone();
        coords.extend_from_slice(tail);
        QVector(coords)
    }

    /// Positive multiple with coprime integer coordinates; the zero vector
    /// is returned unchanged.
    pub fn primitive(&self) -> QVector {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints
            .iter()
            .filter(|x| !x.is_zero())
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        QVector(
            ints.into_iter()
                .map(|x| Rational::from_integer(x / &gcd))
                .collect(),
        )
    }

    /// Lexicographic sign of the first non-zero coordinate.
    pub fn leading_sign(&self) -> i32 {
        for x in &self.0 {
            if x.is_positive() {
                return 1;
            }
            if x.is_negative() {
                return -1;
            }
        }
        0
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for QVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<Rational>> for QVector {
    fn from(coords: Vec<Rational>) -> Self {
        QVector(coords)
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a QVector {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        super::rational_vec_serde::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        super::rational_vec_serde::deserialize(d).map(QVector)
    }
}
