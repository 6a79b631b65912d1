use std::fmt;

use crate::{Result, SymFuncError};

/// An integer partition: a weakly decreasing sequence of positive parts.
///
/// The empty partition labels the constant Schur function `{0}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Builds a partition, dropping trailing zeros. Rejects increasing sequences
    /// and zeros in the middle.
    pub fn new(parts: impl Into<Vec<u32>>) -> Result<Self> {
        let mut parts = parts.into();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(SymFuncError::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// Builds a partition from parts already known to be valid.
    pub(crate) fn from_sorted(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition(parts)
    }

    /// Sorts arbitrary positive parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The one-row partition `(n)`; `(0)` is the empty partition.
    pub fn row(n: u32) -> Self {
        Partition::from_sorted(vec![n])
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: u32) -> Self {
        Partition(vec![1; n as usize])
    }

    /// The rectangle with `rows` rows of length `cols`.
    pub fn rectangle(rows: u32, cols: u32) -> Self {
        if cols == 0 {
            return Partition::empty();
        }
        Partition(vec![cols; rows as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        let parts = (0..first)
            .map(|j| self.0.iter().filter(|&&p| p > j).count() as u32)
            .collect();
        Partition(parts)
    }

    /// Whether the Young diagram of `self` contains that of `other`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().zip(&self.0).all(|(o, s)| o <= s)
    }

    /// Multiplicities `m_i` of each part size `i = 1..=max`.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.part(0) as usize + 1];
        for &p in &self.0 {
            m[p as usize] += 1;
        }
        m
    }

    /// The centralizer order `z_λ = Π i^{m_i} m_i!` of a permutation of cycle type `self`.
    pub fn z(&self) -> u128 {
        self.multiplicities()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &m)| {
                let fact: u128 = (1..=m as u128).product();
                (i as u128).pow(m) * fact
            })
            .product()
    }

    /// Concatenates parts and re-sorts; multiplication of power-sum monomials.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::from_unsorted(parts)
    }

    /// Multiplies every part by `k`.
    pub fn scale(&self, k: u32) -> Partition {
        Partition(self.0.iter().map(|p| p * k).collect())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "{{0}}");
        }
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// All partitions of `n`, in reverse lexicographic order (`(n)` first).
pub fn partitions(n: u32) -> Vec<Partition> {
    partitions_bounded(n, usize::MAX)
}

/// All partitions of `n` with at most `max_len` parts, reverse lexicographic.
pub fn partitions_bounded(n: u32, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, max_len, &mut cur, &mut out);
    out
}

fn fill(rest: u32, max_part: u32, max_len: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    if cur.len() == max_len {
        return;
    }
    for p in (1..=rest.min(max_part)).rev() {
        cur.push(p);
        fill(rest - p, p, max_len, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=14).map(|n| partitions(n).len()).collect();
        assert_eq!(
            counts,
            vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135]
        );
        assert_eq!(partitions_bounded(6, 3).len(), 7);
    }

    #[test]
    fn rejects_increasing() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0, 1]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap().parts(), &[2, 1]);
    }

    #[test]
    fn conjugate_and_z() {
        let p = Partition::new(vec![4, 2, 1]).unwrap();
        assert_eq!(p.conjugate().parts(), &[3, 2, 1, 1]);
        assert_eq!(p.conjugate().conjugate(), p);
        // z_(2,1,1) = 2 * 1^2 * 2! = 4
        assert_eq!(Partition::new(vec![2, 1, 1]).unwrap().z(), 4);
        assert_eq!(Partition::column(4).z(), 24);
        assert_eq!(Partition::empty().z(), 1);
    }

    #[test]
    fn display() {
        assert_eq!(Partition::new(vec![10, 2]).unwrap().to_string(), "{10,2}");
        assert_eq!(Partition::empty().to_string(), "{0}");
    }
}
