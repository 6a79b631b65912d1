use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::partition::Partition;
use crate::SymFuncError;

/// A finite integer combination of Schur functions `Σ c_λ {λ}`.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SchurExpr {
    terms: BTreeMap<Partition, BigInt>,
}

impl SchurExpr {
    pub fn zero() -> Self {
        SchurExpr::default()
    }

    /// The constant `{0}`.
    pub fn one() -> Self {
        SchurExpr::schur(Partition::empty())
    }

    pub fn schur(p: Partition) -> Self {
        let mut e = SchurExpr::zero();
        e.add_term(p, BigInt::one());
        e
    }

    /// Convenience for `{parts}`; panics on an invalid partition.
    pub fn from_parts(parts: &[u32]) -> Self {
        SchurExpr::schur(Partition::new(parts.to_vec()).expect("valid partition"))
    }

    pub fn add_term(&mut self, p: Partition, c: impl Into<BigInt>) {
        let c = c.into();
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &Partition) -> BigInt {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest weight present (0 for the zero expression).
    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(Partition::weight).max().unwrap_or(0)
    }

    /// Terms of exactly weight `n`.
    pub fn homogeneous_part(&self, n: u32) -> SchurExpr {
        self.filter(|p| p.weight() == n)
    }

    pub fn filter(&self, keep: impl Fn(&Partition) -> bool) -> SchurExpr {
        SchurExpr {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> SchurExpr {
        let mut out = SchurExpr::zero();
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c * k);
        }
        out
    }

    /// Sum of all coefficients.
    pub fn total_multiplicity(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl Add for &SchurExpr {
    type Output = SchurExpr;
    fn add(self, rhs: &SchurExpr) -> SchurExpr {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }
}

impl Add for SchurExpr {
    type Output = SchurExpr;
    fn add(self, rhs: SchurExpr) -> SchurExpr {
        &self + &rhs
    }
}

impl Neg for &SchurExpr {
    type Output = SchurExpr;
    fn neg(self) -> SchurExpr {
        self.scale(&BigInt::from(-1))
    }
}

impl Sub for &SchurExpr {
    type Output = SchurExpr;
    fn sub(self, rhs: &SchurExpr) -> SchurExpr {
        self + &(-rhs)
    }
}

/// Outer product, via the Littlewood–Richardson rule.
impl Mul for &SchurExpr {
    type Output = SchurExpr;
    fn mul(self, rhs: &SchurExpr) -> SchurExpr {
        crate::ops::outer(self, rhs)
    }
}

impl fmt::Debug for SchurExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints terms by decreasing weight, then reverse lexicographic order:
/// `3{4,2} + {2,2,1} - {0}`. The zero expression prints as `0`.
impl fmt::Display for SchurExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Partition> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.weight().cmp(&a.weight()).then_with(|| b.cmp(a)));
        for (i, p) in keys.into_iter().enumerate() {
            let c = &self.terms[p];
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for SchurExpr {
    type Err = SymFuncError;

    /// Parses the printed form. Parts may be separated by commas or spaces;
    /// `{0}` and `{}` both denote the constant term.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        let mut pos = 0;
        let err = |pos: usize, msg: &str| SymFuncError::Parse {
            pos,
            msg: msg.to_string(),
        };
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        let read_int = |pos: &mut usize| -> Option<BigInt> {
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if start == *pos {
                None
            } else {
                chars[start..*pos].iter().collect::<String>().parse().ok()
            }
        };

        skip_ws(&mut pos);
        if chars[pos..].iter().collect::<String>().trim() == "0" {
            return Ok(SchurExpr::zero());
        }
        let mut out = SchurExpr::zero();
        let mut first = true;
        loop {
            skip_ws(&mut pos);
            if pos >= chars.len() {
                if first {
                    return Err(err(pos, "empty expression"));
                }
                break;
            }
            let mut sign = BigInt::one();
            if chars[pos] == '+' || chars[pos] == '-' {
                if chars[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
                skip_ws(&mut pos);
            } else if !first {
                return Err(err(pos, "expected '+' or '-'"));
            }
            let coeff = read_int(&mut pos).unwrap_or_else(BigInt::one);
            skip_ws(&mut pos);
            if pos >= chars.len() || chars[pos] != '{' {
                return Err(err(pos, "expected '{'"));
            }
            pos += 1;
            let mut parts = Vec::new();
            loop {
                skip_ws(&mut pos);
                if pos < chars.len() && chars[pos] == ',' {
                    pos += 1;
                    continue;
                }
                if pos < chars.len() && chars[pos] == '}' {
                    pos += 1;
                    break;
                }
                let v = read_int(&mut pos).ok_or_else(|| err(pos, "expected a part"))?;
                let v: u32 = v.try_into().map_err(|_| err(pos, "part out of range"))?;
                parts.push(v);
            }
            let p = Partition::new(parts).map_err(|e| err(pos, &e.to_string()))?;
            out.add_term(p, sign * coeff);
            first = false;
        }
        Ok(out)
    }
}

impl From<Partition> for SchurExpr {
    fn from(p: Partition) -> Self {
        SchurExpr::schur(p)
    }
}
