//! Theoretical and semi-analytical performance measures.

pub mod codewords;
pub mod eig;
pub mod pep;
pub mod quadrature;
pub mod secrecy;

pub use codewords::{enumerate_codewords, CodewordSet, DEFAULT_ENUMERATION_CAP};
pub use pep::{diversity_rank_scan, pep, pep_from_eigenvalues, union_bound, UnionBound};
pub use secrecy::{ergodic_secrecy_rate, mutual_information, EsrParams, SecrecyEstimate};
