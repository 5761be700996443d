use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CellComplex, ComplexError};

/// Projection of a grid cell onto one coordinate axis, in units of `1/r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    /// The point `j/r`.
    Point(usize),
    /// The interval `[j/r, (j+1)/r]`.
    Interval(usize),
}

impl Axis {
    pub fn is_interval(self) -> bool {
        matches!(self, Axis::Interval(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridCell(pub Vec<Axis>);

impl GridCell {
    pub fn dim(&self) -> usize {
        self.0.iter().filter(|a| a.is_interval()).count()
    }

    /// Axes (0-based) along which the cell has positive width.
    pub fn interval_axes(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, a)| a.is_interval()).map(|(i, _)| i).collect()
    }

    /// True when the cell lies in the boundary of the unit cube.
    pub fn on_boundary(&self, r: usize) -> bool {
        self.0.iter().any(|a| matches!(a, Axis::Point(j) if *j == 0 || *j == r))
    }

    /// True when the cell lies in the face `x_axis = side` (side 0 or r).
    pub fn in_face(&self, axis: usize, side: usize) -> bool {
        self.0[axis] == Axis::Point(side)
    }

    /// Signed codimension-one faces.
    pub fn facets(&self) -> Vec<(GridCell, i32)> {
        let mut out = Vec::new();
        for (m, axis) in self.interval_axes().into_iter().enumerate() {
            let Axis::Interval(j) = self.0[axis] else { unreachable!() };
            let sign = if m % 2 == 0 { 1 } else { -1 };
            let mut front = self.clone();
            front.0[axis] = Axis::Point(j + 1);
            let mut back = self.clone();
            back.0[axis] = Axis::Point(j);
            out.push((front, sign));
            out.push((back, -sign));
        }
        out
    }
}

/// The unit n-cube cut into a grid of side `1/r`.
#[derive(Clone, Debug)]
pub struct GridCubeComplex {
    n: usize,
    r: usize,
    cells: Vec<Vec<GridCell>>,
    lookup: HashMap<GridCell, usize>,
}

impl GridCubeComplex {
    pub fn new(n: usize, r: usize) -> Result<Self, ComplexError> {
        if n == 0 || r == 0 {
            return Err(ComplexError::BadGrid { n, r });
        }
        let per_axis: Vec<Axis> = (0..=r).map(Axis::Point).chain((0..r).map(Axis::Interval)).collect();
        let mut all = vec![Vec::new()];
        for _ in 0..n {
            all = all
                .into_iter()
                .flat_map(|prefix: Vec<Axis>| {
                    per_axis.iter().map(move |a| {
                        let mut p = prefix.clone();
                        p.push(*a);
                        p
                    })
                })
                .collect();
        }
        let mut cells = vec![Vec::new(); n + 1];
        for c in all {
            let c = GridCell(c);
            cells[c.dim()].push(c);
        }
        for cs in &mut cells {
            cs.sort();
        }
        let lookup = cells.iter().flat_map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i))).collect();
        Ok(Self { n, r, cells, lookup })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cells(&self, k: usize) -> &[GridCell] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, cell: &GridCell) -> Option<usize> {
        self.lookup.get(cell).copied()
    }

    /// Top cells of the box `prod [lo_i, hi_i]` (grid units); axes with
    /// `lo == hi` are point axes.
    pub fn box_cells(&self, ranges: &[(usize, usize)]) -> Vec<GridCell> {
        let mut out = vec![Vec::new()];
        for &(lo, hi) in ranges {
            let choices: Vec<Axis> =
                if lo == hi { vec![Axis::Point(lo)] } else { (lo..hi).map(Axis::Interval).collect() };
            out = out
                .into_iter()
                .flat_map(|p: Vec<Axis>| {
                    choices.iter().map(move |a| {
                        let mut q = p.clone();
                        q.push(*a);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(GridCell).collect()
    }

    /// Whether the given set of equal-dimensional cells is exactly the set
    /// of top cells of some box.
    pub fn is_box(&self, cells: &[GridCell]) -> bool {
        let Some(first) = cells.first() else { return true };
        let mut ranges = Vec::with_capacity(self.n);
        for axis in 0..self.n {
            let mut lo = usize::MAX;
            let mut hi = 0;
            for c in cells {
                match (first.0[axis], c.0[axis]) {
                    (Axis::Point(a), Axis::Point(b)) if a == b => {
                        lo = a;
                        hi = a;
                    }
                    (Axis::Interval(_), Axis::Interval(j)) => {
                        lo = lo.min(j);
                        hi = hi.max(j + 1);
                    }
                    _ => return false,
                }
            }
            ranges.push((lo, hi));
        }
        let mut want = self.box_cells(&ranges);
        let mut got = cells.to_vec();
        want.sort();
        got.sort();
        got.dedup();
        got.len() == cells.len() && want == got
    }
}

impl CellComplex for GridCubeComplex {
    fn dim(&self) -> usize {
        self.n
    }

    fn num_cells(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    fn facets(&self, k: usize, idx: usize) -> Vec<(usize, i32)> {
        self.cells[k][idx].facets().into_iter().map(|(c, s)| (self.lookup[&c], s)).collect()
    }
}
