use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::expr::SchurExpr;
use crate::ops::outer;
use crate::partition::Partition;

/// A formal sum of characters `{λ}·{μ}` of a direct product `G1 × G2`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PairExpr {
    terms: BTreeMap<(Partition, Partition), BigInt>,
}

impl PairExpr {
    pub fn zero() -> Self {
        PairExpr::default()
    }

    /// `{0}·{0}`.
    pub fn one() -> Self {
        let mut p = PairExpr::zero();
        p.add_term(Partition::empty(), Partition::empty(), BigInt::from(1));
        p
    }

    /// `a · b`, the external tensor product.
    pub fn tensor(a: &SchurExpr, b: &SchurExpr) -> Self {
        let mut out = PairExpr::zero();
        for (la, ca) in a.terms() {
            for (lb, cb) in b.terms() {
                out.add_term(la.clone(), lb.clone(), ca * cb);
            }
        }
        out
    }

    pub fn add_term(&mut self, left: Partition, right: Partition, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        let entry = self.terms.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, left: &Partition, right: &Partition) -> BigInt {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Partition, Partition), &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies `f` independently to each side of every term (e.g. SU(N) modification).
    pub fn map_sides(&self, f: impl Fn(&SchurExpr) -> SchurExpr) -> PairExpr {
        let mut out = PairExpr::zero();
        for ((l, r), c) in &self.terms {
            let fl = f(&SchurExpr::schur(l.clone()));
            let fr = f(&SchurExpr::schur(r.clone()));
            let t = PairExpr::tensor(&fl, &fr);
            for ((a, b), m) in t.terms {
                out.add_term(a, b, m * c);
            }
        }
        out
    }

    /// Outer product on both sides, followed by `reduce` on each side.
    pub fn mul_reduced(&self, other: &PairExpr, reduce: impl Fn(&SchurExpr) -> SchurExpr) -> PairExpr {
        let mut out = PairExpr::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                let left = reduce(&outer(&SchurExpr::schur(l1.clone()), &SchurExpr::schur(l2.clone())));
                let right = reduce(&outer(&SchurExpr::schur(r1.clone()), &SchurExpr::schur(r2.clone())));
                let c = c1 * c2;
                for (a, ca) in left.terms() {
                    for (b, cb) in right.terms() {
                        out.add_term(a.clone(), b.clone(), &c * ca * cb);
                    }
                }
            }
        }
        out
    }
}

impl Add for &PairExpr {
    type Output = PairExpr;
    fn add(self, rhs: &PairExpr) -> PairExpr {
        let mut out = self.clone();
        for ((l, r), c) in &rhs.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }
}

impl fmt::Debug for PairExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PairExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((l, r), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c != BigInt::from(1) {
                write!(f, "{c}")?;
            }
            write!(f, "{l}·{r}")?;
        }
        Ok(())
    }
}
