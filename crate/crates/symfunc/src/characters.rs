//! Irreducible characters of the symmetric groups via the Murnaghan–Nakayama rule.
//!
//! Tables are built lazily, once per degree, and then shared read-only.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::partition::{partitions, Partition};
use crate::{Result, SymFuncError};

/// Largest symmetric group degree for which character tables are available.
pub const MAX_CHARACTER_DEGREE: u32 = 16;

/// Character table of `S_n`: rows indexed by irreducibles, columns by cycle types.
#[derive(Debug)]
pub struct CharacterTable {
    n: u32,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    // values[irrep][class]
    values: Vec<Vec<i64>>,
    class_sizes: Vec<u128>,
}

static TABLES: [OnceLock<CharacterTable>; MAX_CHARACTER_DEGREE as usize + 1] =
    [const { OnceLock::new() }; MAX_CHARACTER_DEGREE as usize + 1];

/// The (cached) character table of `S_n`.
pub fn character_table(n: u32) -> Result<&'static CharacterTable> {
    if n > MAX_CHARACTER_DEGREE {
        return Err(SymFuncError::WeightBound {
            op: "character table",
            weight: n,
            limit: MAX_CHARACTER_DEGREE,
        });
    }
    Ok(TABLES[n as usize].get_or_init(|| CharacterTable::build(n)))
}

impl CharacterTable {
    fn build(n: u32) -> Self {
        let partitions = partitions(n);
        let index: HashMap<Partition, usize> = partitions
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut memo = HashMap::new();
        let values = partitions
            .iter()
            .map(|lambda| {
                partitions
                    .iter()
                    .map(|rho| mn_character(lambda.parts(), rho.parts(), &mut memo))
                    .collect()
            })
            .collect();
        let n_fact: u128 = (1..=n as u128).product();
        let class_sizes = partitions.iter().map(|rho| n_fact / rho.z()).collect();
        CharacterTable {
            n,
            partitions,
            index,
            values,
            class_sizes,
        }
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Partitions of `n`, in the row/column order of the table.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `χ^λ(ρ)`; panics if either partition has the wrong weight.
    pub fn value(&self, lambda: &Partition, rho: &Partition) -> i64 {
        self.values[self.index[lambda]][self.index[rho]]
    }

    pub fn value_at(&self, irrep: usize, class: usize) -> i64 {
        self.values[irrep][class]
    }

    pub fn class_size(&self, class: usize) -> u128 {
        self.class_sizes[class]
    }

    pub fn group_order(&self) -> u128 {
        (1..=self.n as u128).product()
    }
}

/// Murnaghan–Nakayama: strip rim hooks of length `rho[0]`, recurse on the rest.
fn mn_character(lambda: &[u32], rho: &[u32], memo: &mut HashMap<(Vec<u32>, Vec<u32>), i64>) -> i64 {
    if rho.is_empty() {
        return if lambda.is_empty() { 1 } else { 0 };
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let k = rho[0];
    let len = lambda.len() as u32;
    let beta: Vec<u32> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i as u32)
        .collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < k || beta.contains(&(b - k)) {
            continue;
        }
        let target = b - k;
        let crossed = beta.iter().filter(|&&g| g > target && g < b).count();
        let sign = if crossed % 2 == 0 { 1 } else { -1 };
        let mut next = beta.clone();
        next[idx] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<u32> = next
            .iter()
            .enumerate()
            .map(|(i, &g)| g - (len - 1 - i as u32))
            .filter(|&p| p > 0)
            .collect();
        total += sign * mn_character(&shape, &rho[1..], memo);
    }
    memo.insert(key, total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn s3_table() {
        let t = character_table(3).unwrap();
        // standard rep (2,1): values 2, 0, -1 on classes 1^3, 21, 3
        assert_eq!(t.value(&p(&[2, 1]), &p(&[1, 1, 1])), 2);
        assert_eq!(t.value(&p(&[2, 1]), &p(&[2, 1])), 0);
        assert_eq!(t.value(&p(&[2, 1]), &p(&[3])), -1);
        assert_eq!(t.value(&p(&[1, 1, 1]), &p(&[2, 1])), -1);
    }

    #[test]
    fn column_orthogonality_and_dimensions() {
        for n in 1..=8 {
            let t = character_table(n).unwrap();
            let order = t.group_order() as i128;
            let sum_sq: i128 = (0..t.partitions().len())
                .map(|i| {
                    let d = t.value_at(i, t.index_of(&Partition::column(n)).unwrap()) as i128;
                    d * d
                })
                .sum();
            assert_eq!(sum_sq, order, "sum of squared dimensions for S_{n}");
            for i in 0..t.partitions().len() {
                for j in 0..t.partitions().len() {
                    let inner: i128 = (0..t.partitions().len())
                        .map(|c| {
                            t.class_size(c) as i128
                                * t.value_at(i, c) as i128
                                * t.value_at(j, c) as i128
                        })
                        .sum();
                    assert_eq!(inner, if i == j { order } else { 0 });
                }
            }
        }
    }

    #[test]
    fn s12_largest_dimension() {
        let t = character_table(12).unwrap();
        let id = Partition::column(12);
        let max = t
            .partitions()
            .iter()
            .map(|l| t.value(l, &id))
            .max()
            .unwrap();
        assert_eq!(max, 7700);
    }

    #[test]
    fn degree_bound() {
        assert!(character_table(MAX_CHARACTER_DEGREE + 1).is_err());
    }
}
