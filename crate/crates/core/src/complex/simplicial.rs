use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{CellComplex, ComplexError};
use crate::Rat;

/// A simplex as a strictly increasing tuple of vertex ids.
pub type Simplex = Vec<usize>;

/// Immutable simplicial complex. Cells of each dimension are stored in
/// lexicographic order of their vertex tuples, so `cells(k)[i]` is a stable
/// name for the i-th k-simplex. Orientation is the increasing-id one.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    cells: Vec<Vec<Simplex>>,
    lookup: Vec<HashMap<Simplex, usize>>,
    coords: Option<BTreeMap<usize, Vec<Rat>>>,
}

impl SimplicialComplex {
    /// Builds the face closure of `simplices`.
    pub fn new(simplices: &[Vec<usize>]) -> Result<Self, ComplexError> {
        if simplices.is_empty() {
            return Err(ComplexError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
        for (index, s) in simplices.iter().enumerate() {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != s.len() || s.is_empty() {
                return Err(ComplexError::RepeatedVertex { index });
            }
            if !seen.insert(sorted.clone()) {
                return Err(ComplexError::DuplicateSimplex { index });
            }
            let d = sorted.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, BTreeSet::new);
            }
            by_dim[d].insert(sorted);
        }
        // Close downward one dimension at a time.
        for d in (1..by_dim.len()).rev() {
            let faces: Vec<Simplex> =
                by_dim[d].iter().flat_map(|s| (0..s.len()).map(move |i| drop_vertex(s, i))).collect();
            by_dim[d - 1].extend(faces);
        }
        let cells: Vec<Vec<Simplex>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let lookup = cells.iter().map(|cs| cs.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        Ok(Self { cells, lookup, coords: None })
    }

    /// Attaches rational vertex coordinates.
    pub fn with_coords(mut self, coords: BTreeMap<usize, Vec<Rat>>) -> Result<Self, ComplexError> {
        let width = coords.values().next().map_or(0, Vec::len);
        for (v, c) in &coords {
            if self.index_of(&[*v]).is_none() {
                return Err(ComplexError::UnknownVertex(*v));
            }
            if c.len() != width {
                return Err(ComplexError::CoordinateLength(*v));
            }
        }
        self.coords = Some(coords);
        Ok(self)
    }

    /// The standard n-simplex on vertices `0..=n`, with coordinates the unit
    /// vectors of Q^{n+1}.
    pub fn standard_simplex(n: usize) -> Self {
        let verts: Vec<usize> = (0..=n).collect();
        let coords = (0..=n)
            .map(|v| {
                let c = (0..=n).map(|i| if i == v { Rat::from_integer(1.into()) } else { Rat::from_integer(0.into()) });
                (v, c.collect())
            })
            .collect();
        Self::new(&[verts]).and_then(|c| c.with_coords(coords)).expect("standard simplex")
    }

    /// Boundary of the standard (n+1)-simplex, a triangulated n-sphere.
    pub fn simplex_boundary(n: usize) -> Self {
        let all: Vec<usize> = (0..=n + 1).collect();
        let facets: Vec<Vec<usize>> = (0..all.len()).map(|i| drop_vertex(&all, i)).collect();
        let coords = (0..=n + 1)
            .map(|v| {
                let c = (0..=n + 1).map(|i| Rat::from_integer(i64::from(i == v).into()));
                (v, c.collect())
            })
            .collect();
        Self::new(&facets).and_then(|c| c.with_coords(coords)).expect("simplex boundary")
    }

    pub fn cells(&self, k: usize) -> &[Simplex] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn cell(&self, k: usize, idx: usize) -> &Simplex {
        &self.cells[k][idx]
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.lookup.get(k)?.get(simplex).copied()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.cells(0).iter().map(|v| v[0])
    }

    pub fn coords(&self) -> Option<&BTreeMap<usize, Vec<Rat>>> {
        self.coords.as_ref()
    }

    /// Simplices that are not a face of any other simplex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for k in 0..self.cells.len() {
            let mut covered = vec![false; self.cells[k].len()];
            if k + 1 < self.cells.len() {
                for s in &self.cells[k + 1] {
                    for i in 0..s.len() {
                        covered[self.lookup[k][&drop_vertex(s, i)]] = true;
                    }
                }
            }
            out.extend(self.cells[k].iter().zip(covered).filter(|(_, c)| !c).map(|(s, _)| s.clone()));
        }
        out
    }

    /// True when every maximal simplex has dimension `dim()`.
    pub fn is_pure(&self) -> bool {
        self.maximal_simplices().iter().all(|s| s.len() == self.cells.len())
    }

    /// Incidence number of the `tau`-th (k-1)-cell in the `sigma`-th k-cell.
    pub fn incidence(&self, k: usize, sigma: usize, tau: usize) -> i32 {
        incidence_sign(&self.cells[k][sigma], &self.cells[k - 1][tau]).unwrap_or(0)
    }
}

impl CellComplex for SimplicialComplex {
    fn dim(&self) -> usize {
        self.cells.len() - 1
    }

    fn num_cells(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    fn facets(&self, k: usize, idx: usize) -> Vec<(usize, i32)> {
        if k == 0 {
            return Vec::new();
        }
        let s = &self.cells[k][idx];
        (0..s.len()).map(|i| (self.lookup[k - 1][&drop_vertex(s, i)], if i % 2 == 0 { 1 } else { -1 })).collect()
    }
}

fn drop_vertex(s: &[usize], i: usize) -> Simplex {
    s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect()
}

/// `(-1)^i` when `tau` is `sigma` with its i-th vertex removed, else 0.
/// Both tuples must be sorted.
pub fn incidence_sign(sigma: &[usize], tau: &[usize]) -> Result<i32, ComplexError> {
    if sigma.len() != tau.len() + 1 {
        return Err(ComplexError::DimensionMismatch {
            sigma: sigma.len().saturating_sub(1),
            tau: tau.len().saturating_sub(1),
        });
    }
    let mut missing = None;
    let mut j = 0;
    for (i, v) in sigma.iter().enumerate() {
        if j < tau.len() && tau[j] == *v {
            j += 1;
        } else if missing.is_none() {
            missing = Some(i);
        } else {
            return Ok(0);
        }
    }
    Ok(match (j == tau.len(), missing) {
        (true, Some(i)) => {
            if i % 2 == 0 {
                1
            } else {
                -1
            }
        }
        _ => 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_closure() {
        let x = SimplicialComplex::new(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(x.cell_counts(), vec![3, 3, 1]);
        assert_eq!(x.cells(1), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn cycle_and_sphere_counts() {
        let c4 = SimplicialComplex::new(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        assert_eq!(c4.cell_counts(), vec![4, 4]);
        let s2 = SimplicialComplex::new(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        assert_eq!(s2.cell_counts(), vec![4, 6, 4]);
        assert_eq!(s2.cell_counts(), SimplicialComplex::simplex_boundary(2).cell_counts());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            SimplicialComplex::new(&[vec![0, 1], vec![1, 0]]).unwrap_err(),
            ComplexError::DuplicateSimplex { index: 1 }
        );
        assert_eq!(SimplicialComplex::new(&[vec![0, 0]]).unwrap_err(), ComplexError::RepeatedVertex { index: 0 });
        assert_eq!(SimplicialComplex::new(&[]).unwrap_err(), ComplexError::Empty);
    }

    #[test]
    fn incidence_examples() {
        assert_eq!(incidence_sign(&[0, 1, 2], &[0, 2]), Ok(-1));
        assert_eq!(incidence_sign(&[0, 1, 2], &[0, 1]), Ok(1));
        assert_eq!(incidence_sign(&[0, 1, 2], &[1, 2]), Ok(1));
        assert_eq!(incidence_sign(&[0, 1, 2], &[3, 4]), Ok(0));
        assert!(incidence_sign(&[0, 1, 2], &[0]).is_err());
    }

    #[test]
    fn maximal_simplices_of_mixed_complex() {
        let x = SimplicialComplex::new(&[vec![0, 1, 2], vec![2, 3], vec![4]]).unwrap();
        assert_eq!(x.maximal_simplices(), vec![vec![4], vec![2, 3], vec![0, 1, 2]]);
        assert!(!x.is_pure());
    }
}
