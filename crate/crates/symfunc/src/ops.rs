//! Products, skews, plethysms and SU(N) reduction of Schur expressions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::characters::character_table;
use crate::expr::SchurExpr;
use crate::lr::{lr_coefficient, lr_product};
use crate::pair::PairExpr;
use crate::partition::{partitions, partitions_bounded, Partition};
use crate::powersum::PowerSumExpr;
use crate::{Result, SymFuncError};

/// Largest weight accepted by [`kronecker`].
pub const MAX_KRONECKER_WEIGHT: u32 = 12;
/// Largest output weight accepted by [`plethysm`].
pub const MAX_PLETHYSM_WEIGHT: u32 = 14;
/// Largest weight accepted by [`m_series`].
pub const MAX_SERIES_WEIGHT: u32 = 12;
/// Largest symmetric power accepted by [`product_power_plethysm`].
pub const MAX_PRODUCT_POWER: u32 = 6;

/// Outer (pointwise) product.
pub fn outer(a: &SchurExpr, b: &SchurExpr) -> SchurExpr {
    let mut out = SchurExpr::zero();
    for (la, ca) in a.terms() {
        for (lb, cb) in b.terms() {
            let c = ca * cb;
            for (nu, m) in lr_product(la, lb, None) {
                out.add_term(nu, &c * BigInt::from(m));
            }
        }
    }
    out
}

/// Skew `a / b`, the adjoint of multiplication by `b`: `{λ}/{μ} = Σ_ν c^λ_{μν} {ν}`.
pub fn skew(a: &SchurExpr, b: &SchurExpr) -> SchurExpr {
    let mut out = SchurExpr::zero();
    for (lambda, ca) in a.terms() {
        for (mu, cb) in b.terms() {
            if mu.weight() > lambda.weight() || !lambda.contains(mu) {
                continue;
            }
            let c = ca * cb;
            for nu in partitions(lambda.weight() - mu.weight()) {
                if !lambda.contains(&nu) {
                    continue;
                }
                let m = lr_coefficient(lambda, mu, &nu);
                if m > 0 {
                    out.add_term(nu, &c * BigInt::from(m));
                }
            }
        }
    }
    out
}

/// Inner (Kronecker) product, from symmetric-group characters.
/// Terms of unequal weight annihilate.
pub fn kronecker(a: &SchurExpr, b: &SchurExpr) -> Result<SchurExpr> {
    let w = a.max_weight().max(b.max_weight());
    if w > MAX_KRONECKER_WEIGHT {
        return Err(SymFuncError::WeightBound {
            op: "kronecker",
            weight: w,
            limit: MAX_KRONECKER_WEIGHT,
        });
    }
    let mut out = SchurExpr::zero();
    for (la, ca) in a.terms() {
        for (lb, cb) in b.terms() {
            if la.weight() != lb.weight() {
                continue;
            }
            let c = ca * cb;
            let table = character_table(la.weight())?;
            let order = BigInt::from(table.group_order());
            let ia = table.index_of(la).expect("partition in table");
            let ib = table.index_of(lb).expect("partition in table");
            for (inu, nu) in table.partitions().iter().enumerate() {
                let mut acc = BigInt::zero();
                for class in 0..table.partitions().len() {
                    let prod = table.value_at(ia, class) * table.value_at(ib, class) * table.value_at(inu, class);
                    if prod != 0 {
                        acc += BigInt::from(table.class_size(class)) * BigInt::from(prod);
                    }
                }
                debug_assert!((&acc % &order).is_zero());
                out.add_term(nu.clone(), &c * (acc / &order));
            }
        }
    }
    Ok(out)
}

/// K-fold inner product coefficient `g^ν_{τ_1,…,τ_K}` for partitions of a common weight.
pub fn kronecker_coefficient(factors: &[Partition], nu: &Partition) -> Result<BigInt> {
    let n = nu.weight();
    if n > MAX_KRONECKER_WEIGHT {
        return Err(SymFuncError::WeightBound {
            op: "kronecker",
            weight: n,
            limit: MAX_KRONECKER_WEIGHT,
        });
    }
    if factors.iter().any(|t| t.weight() != n) {
        return Ok(BigInt::zero());
    }
    let table = character_table(n)?;
    let inu = table.index_of(nu).expect("partition in table");
    let idx: Vec<usize> = factors.iter().map(|t| table.index_of(t).expect("partition in table")).collect();
    let mut acc = BigInt::zero();
    for class in 0..table.partitions().len() {
        let mut prod = BigInt::from(table.class_size(class)) * BigInt::from(table.value_at(inu, class));
        for &i in &idx {
            prod *= BigInt::from(table.value_at(i, class));
        }
        acc += prod;
    }
    Ok(acc / BigInt::from(table.group_order()))
}

/// Plethysm `a ⊗ b`, the symmetrization of `a` by the pattern `b` (that is, `b[a]`).
/// So `{2}⊗{2} = {4} + {2,2}` and `|{λ}⊗{μ}| = |λ||μ|`.
///
/// Computed in the power-sum basis with exact rationals.
pub fn plethysm(a: &SchurExpr, b: &SchurExpr) -> Result<SchurExpr> {
    let wa = a.max_weight();
    for (mu, _) in b.terms() {
        let w = wa * mu.weight();
        if w > MAX_PLETHYSM_WEIGHT {
            return Err(SymFuncError::WeightBound {
                op: "plethysm",
                weight: w,
                limit: MAX_PLETHYSM_WEIGHT,
            });
        }
    }
    let inner = PowerSumExpr::from_schur(a)?;
    let max_k = b.terms().map(|(mu, _)| mu.weight()).max().unwrap_or(0);
    let adams: Vec<PowerSumExpr> = (0..=max_k).map(|k| inner.adams(k.max(1))).collect();

    let mut total = PowerSumExpr::default();
    for (mu, cmu) in b.terms() {
        let table = character_table(mu.weight())?;
        for rho in table.partitions() {
            let chi = table.value(mu, rho);
            if chi == 0 {
                continue;
            }
            let mut prod = PowerSumExpr::one();
            for &k in rho.parts() {
                prod = prod.mul(&adams[k as usize]);
            }
            let scale = BigRational::new(cmu * BigInt::from(chi), BigInt::from(rho.z()));
            for (sigma, c) in prod.terms() {
                total.add_term(sigma.clone(), c * &scale);
            }
        }
    }
    total.to_schur()
}

/// Reduction of GL(N) characters to SU(N): drop terms with more than `n` rows and
/// strip full columns of length `n`.
pub fn sun_modify(a: &SchurExpr, n: usize) -> SchurExpr {
    let mut out = SchurExpr::zero();
    for (lambda, c) in a.terms() {
        if lambda.len() > n {
            continue;
        }
        let reduced = if lambda.len() == n && n > 0 {
            let m = lambda.part(n - 1);
            Partition::from_unsorted(lambda.parts().iter().map(|p| p - m).collect())
        } else {
            lambda.clone()
        };
        out.add_term(reduced, c.clone());
    }
    out
}

/// SU(3) contragredient of a (modified) label with at most three rows:
/// `(λ1, λ2, λ3) → (λ1−λ3, λ1−λ2)`.
pub fn su3_conjugate(lambda: &Partition) -> Partition {
    let (l1, l2, l3) = (lambda.part(0), lambda.part(1), lambda.part(2));
    Partition::from_unsorted(vec![l1 - l3, l1 - l2])
}

/// The truncated series `M_(k) = Σ_n {k}⊗{n}`, keeping weights up to `max_weight`.
pub fn m_series(kind: u32, max_weight: u32) -> Result<SchurExpr> {
    if max_weight > MAX_SERIES_WEIGHT {
        return Err(SymFuncError::WeightBound {
            op: "m_series",
            weight: max_weight,
            limit: MAX_SERIES_WEIGHT,
        });
    }
    if kind == 0 {
        return Err(SymFuncError::Unsupported("M series of kind 0".into()));
    }
    let base = SchurExpr::schur(Partition::row(kind));
    let mut out = SchurExpr::zero();
    let mut n = 0;
    while kind * n <= max_weight {
        out = &out + &plethysm(&base, &SchurExpr::schur(Partition::row(n)))?;
        n += 1;
    }
    Ok(out)
}

/// `(A·B)⊗{n} = Σ_{σ⊢n} (A⊗{σ})·(B⊗{σ})` for a character `A·B` of a direct product group.
pub fn product_power_plethysm(a: &SchurExpr, b: &SchurExpr, n: u32) -> Result<PairExpr> {
    if n > MAX_PRODUCT_POWER {
        return Err(SymFuncError::WeightBound {
            op: "product_power_plethysm",
            weight: n,
            limit: MAX_PRODUCT_POWER,
        });
    }
    let mut out = PairExpr::zero();
    for sigma in partitions(n) {
        let s = SchurExpr::schur(sigma);
        let left = plethysm(a, &s)?;
        let right = plethysm(b, &s)?;
        out = &out + &PairExpr::tensor(&left, &right);
    }
    Ok(out)
}

/// Partitions of `n` with at most `max_len` rows, as a Schur sum with unit coefficients.
pub fn all_partitions_expr(n: u32, max_len: usize) -> SchurExpr {
    let mut out = SchurExpr::zero();
    for p in partitions_bounded(n, max_len) {
        out.add_term(p, 1);
    }
    out
}
