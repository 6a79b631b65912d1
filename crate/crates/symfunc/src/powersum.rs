//! Symmetric functions in the power-sum basis with exact rational coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::characters::character_table;
use crate::expr::SchurExpr;
use crate::partition::Partition;
use crate::{Result, SymFuncError};

/// `Σ c_ρ p_ρ`, with `p_∅ = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowerSumExpr {
    terms: BTreeMap<Partition, BigRational>,
}

impl PowerSumExpr {
    pub fn one() -> Self {
        let mut e = PowerSumExpr::default();
        e.add_term(Partition::empty(), BigRational::one());
        e
    }

    pub fn add_term(&mut self, rho: Partition, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(rho.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&rho);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigRational)> {
        self.terms.iter()
    }

    pub fn mul(&self, other: &PowerSumExpr) -> PowerSumExpr {
        let mut out = PowerSumExpr::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.union(b), ca * cb);
            }
        }
        out
    }

    /// The Adams operation `p_k[f]`: every `p_j` becomes `p_{jk}`.
    pub fn adams(&self, k: u32) -> PowerSumExpr {
        PowerSumExpr {
            terms: self
                .terms
                .iter()
                .map(|(rho, c)| (rho.scale(k), c.clone()))
                .collect(),
        }
    }

    /// Expands a Schur combination: `s_λ = Σ_ρ χ^λ(ρ) p_ρ / z_ρ`.
    pub fn from_schur(e: &SchurExpr) -> Result<PowerSumExpr> {
        let mut out = PowerSumExpr::default();
        for (lambda, c) in e.terms() {
            let table = character_table(lambda.weight())?;
            for rho in table.partitions() {
                let chi = table.value(lambda, rho);
                if chi == 0 {
                    continue;
                }
                let coeff = BigRational::new(c * BigInt::from(chi), BigInt::from(rho.z()));
                out.add_term(rho.clone(), coeff);
            }
        }
        Ok(out)
    }

    /// Converts back to the Schur basis: the coefficient of `s_ν` is `Σ_ρ c_ρ χ^ν(ρ)`.
    /// Fails if a coefficient is not an integer.
    pub fn to_schur(&self) -> Result<SchurExpr> {
        let mut by_weight: BTreeMap<u32, Vec<(&Partition, &BigRational)>> = BTreeMap::new();
        for (rho, c) in &self.terms {
            by_weight.entry(rho.weight()).or_default().push((rho, c));
        }
        let mut out = SchurExpr::zero();
        for (n, terms) in by_weight {
            let table = character_table(n)?;
            for nu in table.partitions() {
                let mut acc = BigRational::zero();
                for (rho, c) in &terms {
                    let chi = table.value(nu, rho);
                    if chi != 0 {
                        acc += *c * BigRational::from_integer(BigInt::from(chi));
                    }
                }
                if !acc.is_integer() {
                    return Err(SymFuncError::NonIntegral(format!("coefficient of {nu} is {acc}")));
                }
                out.add_term(nu.clone(), acc.to_integer());
            }
        }
        Ok(out)
    }
}
