use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

/// A multi-index `β ∈ N^n`, the exponent of the monomial `x^β`.
///
/// The derived `Ord` is plain lexicographic order on the entries. It is only
/// used for storage and canonical serialization; anything order-sensitive in
/// the mathematical sense goes through [`LocalOrder`](crate::LocalOrder).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(SmallVec<[u32; 4]>);

impl Exponent {
    pub fn new<I: IntoIterator<Item = u32>>(entries: I) -> Self {
        Exponent(entries.into_iter().collect())
    }

    pub fn zeros(n: usize) -> Self {
        Exponent(SmallVec::from_elem(0, n))
    }

    /// `d` times the `i`-th unit vector (0-based).
    pub fn axis(n: usize, i: usize, d: u32) -> Self {
        let mut e = Self::zeros(n);
        e.0[i] = d;
        e
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn entry_mut(&mut self, i: usize) -> &mut u32 {
        &mut self.0[i]
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    /// Total degree `|β|`.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&b| u64::from(b)).sum()
    }

    /// Componentwise `self ≤ other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), other.len());
        Exponent(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(Exponent)
    }

    /// Componentwise maximum, the exponent of `lcm(x^self, x^other)`.
    pub fn lcm(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), other.len());
        Exponent(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    /// If the exponent is a positive multiple of a unit vector, its axis.
    pub fn axis_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, &b) in self.0.iter().enumerate() {
            if b > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}

impl std::ops::Index<usize> for Exponent {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(v: Vec<u32>) -> Self {
        Exponent(SmallVec::from_vec(v))
    }
}

impl<const N: usize> From<[u32; N]> for Exponent {
    fn from(v: [u32; N]) -> Self {
        Exponent::new(v)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Vec::<u32>::deserialize(d).map(Exponent::from)
    }
}
