//! Exact (co)chain algebra.

mod chain;
mod elim;
mod homology;
mod integer;
mod matrix;
mod snf;

pub use chain::{Chain, Cochain, CochainJson};
pub use elim::{rank, EchelonSolver, Inconsistent, IncrementalBasis};
pub use homology::{betti_numbers, is_coboundary, rank_q, relative_betti_numbers};
pub use integer::{solve_integral_linear, IntegerSolver, IntegralObstruction};
pub use matrix::{boundary_matrix, boundary_matrix_unchecked, coboundary_matrix, IntegerMatrix, SparseMatrix};
pub use snf::{smith_normal_form, SmithForm};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomalgError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("degree {k} outside 1..={dim}")]
    DegreeOutOfRange { k: usize, dim: usize },
    #[error("cell index {index} out of range for {count} cells")]
    BadIndex { index: usize, count: usize },
    #[error("entry {0:?} is not an integer")]
    NotIntegral(String),
    #[error("{0}")]
    Parse(String),
}
