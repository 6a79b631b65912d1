//! Exact arithmetic on symmetric functions in the Schur basis.
//!
//! Provides the outer (Littlewood–Richardson) product, skew, the inner
//! (Kronecker) product, plethysm, the reduction of GL(N) characters to SU(N),
//! and the symmetric plethysm series `M_(k) = Σ_n {k}⊗{n}`. All coefficients are
//! arbitrary-precision integers.

pub mod characters;
pub mod expr;
pub mod lr;
pub mod ops;
pub mod pair;
pub mod partition;
pub mod powersum;

pub use characters::{character_table, CharacterTable};
pub use expr::SchurExpr;
pub use ops::{
    kronecker, kronecker_coefficient, m_series, outer, plethysm, product_power_plethysm, skew, su3_conjugate,
    sun_modify,
};
pub use pair::PairExpr;
pub use partition::{partitions, partitions_bounded, Partition};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SymFuncError {
    #[error("not a partition: {0:?}")]
    InvalidPartition(Vec<u32>),
    #[error("{op}: weight {weight} exceeds the supported limit {limit}")]
    WeightBound { op: &'static str, weight: u32, limit: u32 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("non-integral Schur coefficient: {0}")]
    NonIntegral(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, SymFuncError>;
