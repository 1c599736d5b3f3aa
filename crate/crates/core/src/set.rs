//! Ground sets and support sets.
//!
//! Elements of a ground set of size `n` are identified with the integers
//! `0..n`. A [`SupportSet`] is a sorted, duplicate-free subset used both as
//! a combinatorial solution and as the support of a sparse vector.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground set `{0, 1, ..., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidData("ground set must be non-empty".into()));
        }
        Ok(GroundSet { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.n
    }
}

/// A sorted, duplicate-free subset of a ground set.
///
/// Ordering on `SupportSet` is lexicographic on the sorted member list,
/// which is the tie-breaking order used by all search drivers.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SupportSet {
    members: Vec<usize>,
}

impl SupportSet {
    pub fn empty() -> Self {
        SupportSet::default()
    }

    pub fn singleton(e: usize) -> Self {
        SupportSet { members: vec![e] }
    }

    /// Builds a set from arbitrary ids, sorting and deduplicating.
    pub fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        SupportSet { members }
    }

    /// Wraps a list that is already sorted and duplicate-free.
    pub fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        SupportSet { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    /// Checks that every id lies in `0..n`. Sorted order makes this a test
    /// on the last element.
    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&last) if last >= n => Err(Error::ElementOutOfRange { element: last, n }),
            _ => Ok(()),
        }
    }

    pub fn insert(&mut self, e: usize) -> bool {
        match self.members.binary_search(&e) {
            Ok(_) => false,
            Err(pos) => {
                self.members.insert(pos, e);
                true
            }
        }
    }

    pub fn remove(&mut self, e: usize) -> bool {
        match self.members.binary_search(&e) {
            Ok(pos) => {
                self.members.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// `self ∪ {e}` as a new set.
    pub fn with(&self, e: usize) -> Self {
        let mut out = self.clone();
        out.insert(e);
        out
    }

    /// `self \ {e}` as a new set.
    pub fn without(&self, e: usize) -> Self {
        let mut out = self.clone();
        out.remove(e);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut members = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => {
                    members.push(self.members[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    members.push(other.members[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    members.push(self.members[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        members.extend_from_slice(&self.members[i..]);
        members.extend_from_slice(&other.members[j..]);
        SupportSet { members }
    }

    /// `self \ other`.
    pub fn difference(&self, other: &Self) -> Self {
        SupportSet {
            members: self
                .members
                .iter()
                .copied()
                .filter(|e| !other.contains(*e))
                .collect(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        SupportSet {
            members: self
                .members
                .iter()
                .copied()
                .filter(|e| other.contains(*e))
                .collect(),
        }
    }

    /// `(self \ other) ∪ (other \ self)`.
    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.difference(other).union(&other.difference(self))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.members.iter().all(|e| other.contains(*e))
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.members.iter().all(|e| !other.contains(*e))
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for SupportSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        SupportSet::from_iter(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_set_rejects_empty() {
        assert!(GroundSet::new(0).is_err());
        assert_eq!(GroundSet::new(3).unwrap().len(), 3);
    }

    #[test]
    fn set_ops() {
        let a = SupportSet::from_iter([3, 1, 1, 0]);
        assert_eq!(a.members(), &[0, 1, 3]);
        let b = SupportSet::from_iter([1, 2]);
        assert_eq!(a.union(&b).members(), &[0, 1, 2, 3]);
        assert_eq!(a.difference(&b).members(), &[0, 3]);
        assert_eq!(a.intersection(&b).members(), &[1]);
        assert_eq!(a.symmetric_difference(&b).members(), &[0, 2, 3]);
        assert!(b.is_subset_of(&SupportSet::from_iter([0, 1, 2, 3])));
    }

    #[test]
    fn range_check() {
        let a = SupportSet::from_iter([0, 4]);
        assert!(a.check_range(5).is_ok());
        assert!(matches!(
            a.check_range(4),
            Err(Error::ElementOutOfRange { element: 4, n: 4 })
        ));
        assert!(SupportSet::empty().check_range(1).is_ok());
    }

    #[test]
    fn ordering_is_lexicographic() {
        let a = SupportSet::from_iter([0, 2]);
        let b = SupportSet::from_iter([1]);
        assert!(a < b);
        assert!(SupportSet::empty() < a);
    }
}
