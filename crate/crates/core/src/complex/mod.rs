//! Finite cell complexes with oriented incidence.

mod grid;
mod simplicial;

pub use grid::{Axis, GridCell, GridCubeComplex};
pub use simplicial::{incidence_sign, Simplex, SimplicialComplex};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("no simplices given")]
    Empty,
    #[error("simplex {index} repeats a vertex")]
    RepeatedVertex { index: usize },
    #[error("simplex {index} duplicates an earlier top simplex")]
    DuplicateSimplex { index: usize },
    #[error("incidence needs a k-cell and a (k-1)-cell, got dimensions {sigma} and {tau}")]
    DimensionMismatch { sigma: usize, tau: usize },
    #[error("grid parameters must be positive (n = {n}, r = {r})")]
    BadGrid { n: usize, r: usize },
    #[error("coordinates given for unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("vertex {0} has coordinates of the wrong length")]
    CoordinateLength(usize),
}

/// A finite regular cell complex whose cells are indexed per dimension and
/// whose boundary is given by signed facets.
pub trait CellComplex {
    fn dim(&self) -> usize;

    fn num_cells(&self, k: usize) -> usize;

    /// Signed codimension-one faces of the `idx`-th `k`-cell. Vertices have
    /// empty boundary.
    fn facets(&self, k: usize, idx: usize) -> Vec<(usize, i32)>;

    fn cell_counts(&self) -> Vec<usize> {
        (0..=self.dim()).map(|k| self.num_cells(k)).collect()
    }
}
