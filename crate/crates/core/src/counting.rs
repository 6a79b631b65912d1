//! Invariant counts from exact symmetric-function arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use schurfn::{
    kronecker_coefficient, m_series, partitions_bounded, plethysm, product_power_plethysm, su3_conjugate, sun_modify,
    PairExpr, Partition, SchurExpr,
};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CountReport {
    pub degree: u32,
    pub count: u64,
    pub method: &'static str,
    /// Set when the count rests on an unproven multiplicity rule.
    pub conjecture: bool,
}

fn to_count(v: BigInt) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::OutOfRange(format!("count {v} is not a nonnegative 64-bit integer")))
}

/// Number of degree-`n` local unitary invariants of a `K`-fold pure qudit system:
/// the `K`-fold inner product coefficient of `{n}` in `(r^D)^{∘K}`.
pub fn count_lu_pure(k: usize, d: u32, n: u32) -> Result<CountReport> {
    if !(1..=4).contains(&k) || !(2..=3).contains(&d) || n > 12 {
        return Err(Error::OutOfRange(format!("pure-state counts need K ≤ 4, D ∈ {{2,3}}, n ≤ 12 (got K={k}, D={d}, n={n})")));
    }
    let count = if n % d != 0 {
        0
    } else {
        let tau = Partition::rectangle(d, n / d);
        to_count(kronecker_coefficient(&vec![tau; k], &Partition::row(n))?)?
    };
    Ok(CountReport { degree: n, count, method: "kronecker-pure", conjecture: false })
}

/// Degree-`n` coefficient of the Molien series of the mixed bipartite `D × D` system.
pub fn count_lu_mixed(d: u32, n: u32) -> Result<CountReport> {
    let limit = match d {
        2 => 8,
        3 => 5,
        _ => return Err(Error::UnsupportedDimension(d as usize)),
    };
    if n > limit {
        return Err(Error::OutOfRange(format!("mixed counts for D={d} support n ≤ {limit} (got {n})")));
    }
    let sigmas = partitions_bounded(n, d as usize);
    let mut total = BigInt::zero();
    for tau in partitions_bounded(n, (d * d) as usize) {
        let mut inner = BigInt::zero();
        for sigma in &sigmas {
            inner += kronecker_coefficient(&[sigma.clone(), sigma.clone()], &tau)?;
        }
        total += &inner * &inner;
    }
    Ok(CountReport { degree: n, count: to_count(total)?, method: "kronecker-mixed", conjecture: false })
}

fn su3(e: &SchurExpr) -> SchurExpr {
    sun_modify(e, 3)
}

/// Characters of `r^p`, `rbar^q` and `R^s` as SU(3)×SU(3) pairs.
struct GradedPieces {
    octet_powers: Vec<SchurExpr>,
    tensor_powers: Vec<PairExpr>,
}

impl GradedPieces {
    fn new(max_pq: u32, max_s: u32) -> Result<Self> {
        let octet = SchurExpr::from_parts(&[2, 1]);
        let octet_powers = (0..=max_pq)
            .map(|k| Ok(su3(&plethysm(&octet, &SchurExpr::schur(Partition::row(k)))?)))
            .collect::<Result<Vec<_>>>()?;
        let tensor_powers = (0..=max_s)
            .map(|s| Ok(product_power_plethysm(&octet, &octet, s)?.map_sides(su3)))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedPieces { octet_powers, tensor_powers })
    }

    /// Trivial-pair multiplicity in `(r^p)(rbar^q)(R^s)`: the multiplicity of the
    /// conjugate of each `R^s` term inside the product of the other two.
    fn singlets(&self, p: u32, q: u32, s: u32) -> BigInt {
        let one = SchurExpr::one();
        let left = PairExpr::tensor(&self.octet_powers[p as usize], &one);
        let right = PairExpr::tensor(&one, &self.octet_powers[q as usize]);
        let ab = left.mul_reduced(&right, su3);
        let mut total = BigInt::zero();
        for ((l, r), c) in self.tensor_powers[s as usize].terms() {
            total += c * ab.coefficient(&su3_conjugate(l), &su3_conjugate(r));
        }
        total
    }
}

fn check_grading(p: u32, q: u32, s: u32) -> Result<()> {
    if p + q + s > 4 {
        return Err(Error::OutOfRange(format!("graded counts need p+q+s ≤ 4 (got {p}{q}{s})")));
    }
    Ok(())
}

/// Raw number of linearly independent invariants of multidegree `(p, q, s)` in `(r, rbar, R)`,
/// products of lower-degree invariants included.
pub fn graded_singlets(p: u32, q: u32, s: u32) -> Result<u64> {
    check_grading(p, q, s)?;
    to_count(GradedPieces::new(p.max(q), s)?.singlets(p, q, s))
}

type Grade = [u32; 3];

/// Multiplies a truncated series by `(1 − x^g)^{−e}`.
fn mul_euler_factor(series: &mut BTreeMap<Grade, BigInt>, g: Grade, e: &BigInt, bound: Grade) {
    if e.is_zero() {
        return;
    }
    // coefficients of (1 − t)^{−e} = Σ_j C(e+j−1, j) t^j, valid for negative e as well
    let max_j = (0..3).filter(|&i| g[i] > 0).map(|i| bound[i] / g[i]).min().unwrap_or(0);
    let mut binom = vec![BigInt::one()];
    for j in 1..=max_j {
        let prev = binom[j as usize - 1].clone();
        binom.push(prev * (e + BigInt::from(j - 1)) / BigInt::from(j));
    }
    let old = series.clone();
    series.clear();
    for (d, c) in &old {
        for (j, b) in binom.iter().enumerate() {
            let j = j as u32;
            let nd = [d[0] + j * g[0], d[1] + j * g[1], d[2] + j * g[2]];
            if (0..3).any(|i| nd[i] > bound[i]) {
                break;
            }
            *series.entry(nd).or_insert_with(BigInt::zero) += c * b;
        }
    }
}

/// Number of connected (product-free) invariants of multidegree `(p, q, s)`: the
/// exponent `e_{pqs}` in `H(x,y,z) = Π (1 − x^p y^q z^s)^{−e_{pqs}}`.
pub fn count_graded_quartics(p: u32, q: u32, s: u32) -> Result<CountReport> {
    check_grading(p, q, s)?;
    let bound = [p, q, s];
    let pieces = GradedPieces::new(p.max(q), s)?;
    let mut grades: Vec<Grade> = Vec::new();
    for a in 0..=p {
        for b in 0..=q {
            for c in 0..=s {
                if a + b + c > 0 {
                    grades.push([a, b, c]);
                }
            }
        }
    }
    grades.sort_by_key(|g| (g[0] + g[1] + g[2], *g));
    let mut product: BTreeMap<Grade, BigInt> = BTreeMap::from([([0, 0, 0], BigInt::one())]);
    let mut exponent = BigInt::zero();
    for g in grades {
        let raw = pieces.singlets(g[0], g[1], g[2]);
        let have = product.get(&g).cloned().unwrap_or_default();
        exponent = raw - have;
        mul_euler_factor(&mut product, g, &exponent, bound);
    }
    if exponent.is_negative() {
        return Err(Error::OutOfRange(format!("grading {p}{q}{s} has more relations than generators")));
    }
    Ok(CountReport { degree: p + q + s, count: to_count(exponent)?, method: "graded-plethysm", conjecture: false })
}

/// The twelve quartic gradings, `r`-heavy first and pure `R` last.
pub const QUARTIC_GRADINGS: [Grade; 12] = [
    [4, 0, 0],
    [0, 4, 0],
    [1, 0, 3],
    [0, 1, 3],
    [2, 0, 2],
    [0, 2, 2],
    [1, 1, 2],
    [1, 2, 1],
    [2, 1, 1],
    [3, 0, 1],
    [0, 3, 1],
    [0, 0, 4],
];

/// Degree-`n` count of local special-linear invariants of the mixed `D × D` system.
///
/// `D = 2` uses the equivalence with local unitary invariants of four pure qubits.
/// `D = 3` sums the squared multiplicities of weight-`n` terms of `M_(3)`, which
/// assumes no modification-rule cancellations and is flagged as a conjecture.
pub fn count_lsl(d: u32, n: u32) -> Result<CountReport> {
    if n > 12 {
        return Err(Error::OutOfRange(format!("LSL counts support n ≤ 12 (got {n})")));
    }
    match d {
        2 => {
            let r = count_lu_pure(4, 2, n)?;
            Ok(CountReport { method: "four-qubit-equivalence", ..r })
        }
        3 => {
            let series = m_series(3, n)?.homogeneous_part(n);
            let mut total = BigInt::zero();
            for (lambda, c) in series.terms() {
                if lambda.len() <= 9 {
                    total += c * c;
                }
            }
            Ok(CountReport { degree: n, count: to_count(total)?, method: "m3-multiplicity", conjecture: true })
        }
        other => Err(Error::UnsupportedDimension(other as usize)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_counts() {
        assert_eq!(count_lu_pure(4, 2, 3).unwrap().count, 0);
        assert_eq!(count_lu_pure(4, 2, 2).unwrap().count, 1);
        assert_eq!(count_lu_pure(4, 2, 4).unwrap().count, 3);
        // two qubits: only the concurrence-type invariant at each even degree
        assert_eq!(count_lu_pure(2, 2, 4).unwrap().count, 1);
        assert!(count_lu_pure(5, 2, 2).is_err());
        assert!(count_lu_pure(4, 2, 14).is_err());
    }

    #[test]
    fn euler_factor_with_negative_exponent() {
        let mut s = BTreeMap::from([([0, 0, 0], BigInt::one())]);
        mul_euler_factor(&mut s, [0, 0, 1], &BigInt::from(-2), [0, 0, 4]);
        // (1 − z)^2
        assert_eq!(s[&[0, 0, 1]], BigInt::from(-2));
        assert_eq!(s[&[0, 0, 2]], BigInt::from(1));
        assert_eq!(s.get(&[0, 0, 3]).cloned().unwrap_or_default(), BigInt::zero());
    }

    #[test]
    fn low_graded_singlets() {
        assert_eq!(graded_singlets(0, 0, 0).unwrap(), 1);
        assert_eq!(graded_singlets(2, 0, 0).unwrap(), 1);
        assert_eq!(graded_singlets(1, 1, 1).unwrap(), 1);
        assert_eq!(graded_singlets(0, 0, 3).unwrap(), 2);
        assert!(graded_singlets(3, 1, 1).is_err());
    }

    #[test]
    fn lsl_bounds() {
        assert!(count_lsl(3, 15).is_err());
        assert!(count_lsl(4, 3).is_err());
        assert!(count_lsl(3, 9).unwrap().conjecture);
        assert!(!count_lsl(2, 4).unwrap().conjecture);
    }
}
