//! Partitions and the parity families classifying classical nilpotent orbits.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be positive and weakly decreasing: {0:?}")]
    NotAPartition(Vec<usize>),
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("family {kind:?} does not admit size {size}")]
    BadFamilySize { kind: FamilyKind, size: usize },
    #[error("cannot parse partition {0:?}")]
    Parse(String),
    #[error("no {0} partition is dominated by the input")]
    NoCollapse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, PartitionError> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotAPartition(parts));
        }
        Ok(Partition { parts })
    }

    /// Sorts the given parts into a partition, dropping zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, part: usize) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    pub fn transpose(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|i| self.parts.iter().filter(|&&p| p >= i).count())
            .collect();
        Partition { parts }
    }

    /// True iff every prefix sum of `self` is at least that of `other`.
    pub fn dominates(&self, other: &Partition) -> Result<bool, PartitionError> {
        if self.size() != other.size() {
            return Err(PartitionError::SizeMismatch {
                left: self.size(),
                right: other.size(),
            });
        }
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0, 0);
        for i in 0..n {
            a += self.parts.get(i).copied().unwrap_or(0);
            b += other.parts.get(i).copied().unwrap_or(0);
            if a < b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All parts even and at least one part (type D very even).
    pub fn is_very_even(&self) -> bool {
        !self.parts.is_empty() && self.parts.iter().all(|p| p % 2 == 0)
    }

    /// Adds one box to the first row.
    pub fn add_box_first(&self) -> Partition {
        let mut parts = self.parts.clone();
        match parts.first_mut() {
            Some(p) => *p += 1,
            None => parts.push(1),
        }
        Partition { parts }
    }

    /// Removes one box from the last row; the empty partition is returned unchanged.
    pub fn remove_box_last(&self) -> Partition {
        let mut parts = self.parts.clone();
        if let Some(p) = parts.last_mut() {
            *p -= 1;
        }
        Partition::from_unsorted(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Accepts `(3,1,1)`, `3,1,1`, `[3,1,1]` and exponent notation `(2^2,1)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || PartitionError::Parse(s.to_string());
        let inner = s
            .trim()
            .trim_start_matches(['(', '['])
            .trim_end_matches([')', ']']);
        let mut parts = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match tok.split_once('^') {
                Some((p, k)) => {
                    let p: usize = p.trim().parse().map_err(|_| err())?;
                    let k: usize = k.trim().parse().map_err(|_| err())?;
                    parts.extend(std::iter::repeat_n(p, k));
                }
                None => parts.push(tok.parse().map_err(|_| err())?),
            }
        }
        Partition::new(parts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// All partitions.
    A,
    /// Odd size; even parts have even multiplicity.
    B,
    /// Even size; odd parts have even multiplicity.
    C,
    /// Even size; even parts have even multiplicity.
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartitionFamily {
    kind: FamilyKind,
    size: usize,
}

impl PartitionFamily {
    pub fn new(kind: FamilyKind, size: usize) -> Result<Self, PartitionError> {
        let ok = match kind {
            FamilyKind::A => true,
            FamilyKind::B => size % 2 == 1,
            FamilyKind::C | FamilyKind::D => size.is_multiple_of(2),
        };
        if ok {
            Ok(PartitionFamily { kind, size })
        } else {
            Err(PartitionError::BadFamilySize { kind, size })
        }
    }

    /// Family of `sl(n+1)`, `so(2n+1)`, `sp(2n)` or `so(2n)` for rank `n`.
    pub fn for_rank(kind: FamilyKind, rank: usize) -> Self {
        let size = match kind {
            FamilyKind::A => rank + 1,
            FamilyKind::B => 2 * rank + 1,
            FamilyKind::C | FamilyKind::D => 2 * rank,
        };
        PartitionFamily { kind, size }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Parts of this parity must occur with even multiplicity.
    fn is_bad_part(&self, part: usize) -> bool {
        match self.kind {
            FamilyKind::A => false,
            FamilyKind::B | FamilyKind::D => part.is_multiple_of(2),
            FamilyKind::C => part % 2 == 1,
        }
    }

    pub fn is_valid(&self, p: &Partition) -> bool {
        p.size() == self.size
            && p
                .parts
                .iter()
                .all(|&q| !self.is_bad_part(q) || p.multiplicity(q).is_multiple_of(2))
    }

    /// The dominance-largest valid partition dominated by `p`.
    pub fn collapse(&self, p: &Partition) -> Result<Partition, PartitionError> {
        if p.size() != self.size {
            return Err(PartitionError::SizeMismatch {
                left: p.size(),
                right: self.size,
            });
        }
        let mut parts = p.parts.clone();
        loop {
            let current = Partition::from_unsorted(parts.clone());
            let offender = current
                .parts
                .iter()
                .copied()
                .filter(|&q| self.is_bad_part(q) && current.multiplicity(q) % 2 == 1)
                .max();
            let Some(q) = offender else {
                return Ok(current);
            };
            if q < 2 {
                return Err(PartitionError::NoCollapse(format!("{:?}", self.kind)));
            }
            parts = current.parts;
            let idx = parts.iter().rposition(|&x| x == q).expect("offending part present");
            parts[idx] -= 1;
            match parts[idx + 1..].iter().position(|&r| r < q - 1) {
                Some(off) => parts[idx + 1 + off] += 1,
                None => parts.push(1),
            }
        }
    }

    /// All valid partitions of the family's size in reverse-lexicographic order.
    pub fn enumerate(&self) -> Vec<Partition> {
        all_partitions(self.size)
            .into_iter()
            .filter(|p| self.is_valid(p))
            .collect()
    }
}

/// Every partition of `n` in reverse-lexicographic order.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for first in (1..=remaining.min(max)).rev() {
            prefix.push(first);
            rec(remaining - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}
