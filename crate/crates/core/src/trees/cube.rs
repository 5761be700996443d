use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::TreeError;
use crate::complex::{Axis, CellComplex, GridCell, GridCubeComplex};
use crate::homalg::relative_betti_numbers;

const MAX_N: usize = 3;
const MAX_R: usize = 4;

/// The subcomplex `T_{n,k}` of the grid: every cell below dimension k plus
/// the k-cells listed in `cells` (indices into `grid.cells(k)`).
#[derive(Clone, Debug)]
pub struct CubeTree {
    pub grid: GridCubeComplex,
    pub k: usize,
    pub cells: Vec<usize>,
}

/// Number of leading interval axes.
fn ell(c: &GridCell) -> usize {
    c.0.iter().take_while(|a| a.is_interval()).count()
}

/// Closed-form membership of a k-cell.
pub fn in_cube_tree(c: &GridCell, n: usize, r: usize) -> bool {
    if c.dim() == n {
        return c.0.iter().any(|a| *a != Axis::Interval(0));
    }
    if c.on_boundary(r) {
        return false;
    }
    c.0[..ell(c)].iter().any(|a| *a != Axis::Interval(0))
}

fn check_params(n: usize, k: usize, r: usize) -> Result<(), TreeError> {
    if n == 0 || n > MAX_N || k > n || r == 0 || r > MAX_R {
        return Err(TreeError::BadCubeParameters { n, k, r });
    }
    Ok(())
}

pub fn cube_tree(n: usize, k: usize, r: usize) -> Result<CubeTree, TreeError> {
    check_params(n, k, r)?;
    let grid = GridCubeComplex::new(n, r).map_err(|_| TreeError::BadCubeParameters { n, k, r })?;
    let cells = if k == 0 {
        Vec::new()
    } else {
        (0..grid.num_cells(k)).filter(|&i| in_cube_tree(&grid.cells(k)[i], n, r)).collect()
    };
    Ok(CubeTree { grid, k, cells })
}

/// Top cells of `T_{n,k}` built by splitting off the last axis:
/// `T_{n-1,k} × {interior points} ∪ T_{n-1,k-1} × intervals`.
pub fn cube_tree_recursive(n: usize, k: usize, r: usize) -> Result<Vec<GridCell>, TreeError> {
    check_params(n, k, r)?;
    Ok(recurse(n, k, r))
}

fn recurse(n: usize, k: usize, r: usize) -> Vec<GridCell> {
    if k == 0 {
        return Vec::new();
    }
    if k == n {
        let g = GridCubeComplex::new(n, r).expect("valid grid");
        return g.cells(n).iter().filter(|c| c.0.iter().any(|a| *a != Axis::Interval(0))).cloned().collect();
    }
    let mut out = Vec::new();
    for c in recurse(n - 1, k, r) {
        for i in 1..r {
            let mut d = c.0.clone();
            d.push(Axis::Point(i));
            out.push(GridCell(d));
        }
    }
    for c in recurse(n - 1, k - 1, r) {
        for j in 0..r {
            let mut d = c.0.clone();
            d.push(Axis::Interval(j));
            out.push(GridCell(d));
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct CubeTreeReport {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    /// `T ∩ ∂K = (∂K)^{(k-1)}`.
    pub boundary_intersection: bool,
    /// `H_j(T, (∂K)^{(k-1)}; ℚ) = 0` for all j.
    pub relative_homology_vanishes: bool,
    pub relative_betti: Vec<usize>,
    /// Every k-cell outside T is, modulo T and boundaries, a chain in `∂K`
    /// whose restriction to each face is a box.
    pub boxes: bool,
    pub boxes_checked: usize,
    /// Cells for which the box argument does not apply (the missing top cell
    /// when `k = n`).
    pub not_applicable: Vec<GridCell>,
    pub failures: Vec<String>,
}

impl CubeTreeReport {
    pub fn passed(&self) -> bool {
        self.boundary_intersection && self.relative_homology_vanishes && self.boxes
    }
}

pub fn verify_cube_tree(t: &CubeTree) -> CubeTreeReport {
    let g = &t.grid;
    let (n, k, r) = (g.n(), t.k, g.r());
    let mut report = CubeTreeReport { n, k, r, ..Default::default() };
    let top: BTreeSet<usize> = t.cells.iter().copied().collect();

    let mut bad_boundary = Vec::new();
    for &i in &top {
        if g.cells(k)[i].on_boundary(r) {
            bad_boundary.push(i);
        }
    }
    report.boundary_intersection = bad_boundary.is_empty();
    for i in bad_boundary {
        report.failures.push(format!("(1) tree cell {:?} lies in the boundary", g.cells(k)[i]));
    }

    let a: Vec<Vec<usize>> =
        (0..=k).map(|d| if d < k { (0..g.num_cells(d)).collect() } else { top.iter().copied().collect() }).collect();
    let b: Vec<Vec<usize>> =
        (0..=k)
            .map(|d| {
                if d < k {
                    (0..g.num_cells(d)).filter(|&i| g.cells(d)[i].on_boundary(r)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
    report.relative_betti = relative_betti_numbers(g, &a, &b);
    report.relative_homology_vanishes = report.relative_betti.iter().all(|&v| v == 0);
    if !report.relative_homology_vanishes {
        report.failures.push(format!("(2') relative Betti numbers {:?}", report.relative_betti));
    }

    report.boxes = true;
    for (i, c) in g.cells(k).iter().enumerate() {
        if top.contains(&i) || c.on_boundary(r) {
            continue;
        }
        let l = ell(c);
        if l == n {
            report.not_applicable.push(c.clone());
            continue;
        }
        report.boxes_checked += 1;
        if let Err(msg) = check_box(g, &top, k, c, l) {
            report.boxes = false;
            report.failures.push(format!("(3) cell {c:?}: {msg}"));
        }
    }
    report
}

fn check_box(g: &GridCubeComplex, top: &BTreeSet<usize>, k: usize, c: &GridCell, l: usize) -> Result<(), String> {
    let r = g.r();
    let Axis::Point(x) = c.0[l] else { unreachable!("axis after the leading intervals is a point") };
    let ranges: Vec<(usize, usize)> =
        c.0.iter()
            .enumerate()
            .map(|(i, a)| match (i, *a) {
                (i, _) if i < l => (0, r),
                (i, _) if i == l => (x, r),
                (_, Axis::Point(j)) => (j, j),
                (_, Axis::Interval(j)) => (j, j + 1),
            })
            .collect();
    let mut chain: BTreeMap<GridCell, i64> = BTreeMap::new();
    for cell in g.box_cells(&ranges) {
        for (f, s) in cell.facets() {
            *chain.entry(f).or_default() += i64::from(s);
        }
    }
    chain.retain(|_, v| *v != 0);
    match chain.get(c) {
        Some(v) if v.abs() == 1 => {}
        other => return Err(format!("coefficient {other:?} on the cell itself")),
    }
    let mut faces: BTreeMap<(usize, usize), Vec<GridCell>> = BTreeMap::new();
    for f in chain.keys().filter(|f| *f != c) {
        if f.on_boundary(r) {
            for axis in 0..g.n() {
                for side in [0, r] {
                    if f.in_face(axis, side) {
                        faces.entry((axis, side)).or_default().push(f.clone());
                    }
                }
            }
        } else {
            let idx = g.index_of(f).expect("grid cell");
            if !top.contains(&idx) || f.dim() != k {
                return Err(format!("interior boundary cell {f:?} is not in the tree"));
            }
        }
    }
    for ((axis, side), cells) in faces {
        if !g.is_box(&cells) {
            return Err(format!("support in face x{axis}={side} is not a box"));
        }
    }
    Ok(())
}
