//! Spanning and wrapping trees, relative classes and gnarledness.

mod cube;

pub use cube::{cube_tree, cube_tree_recursive, verify_cube_tree, CubeTree, CubeTreeReport};

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::CellComplex;
use crate::homalg::{rank_q, EchelonSolver, IncrementalBasis, IntegerMatrix, IntegerSolver, SparseMatrix};
use crate::{Int, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree degree {k} exceeds complex dimension {dim}")]
    DegreeOutOfRange { k: usize, dim: usize },
    #[error("class of cell {cell} is not an integer combination of the greedy basis")]
    NotIntegral { cell: usize },
    #[error("exact search needs rank <= 2 and at most 8 classes, got rank {rank} and {classes} classes")]
    TooLarge { rank: usize, classes: usize },
    #[error("no admissible basis found with entries bounded by {bound}")]
    SearchEmpty { bound: Int },
    #[error("grid tree parameters out of range: n = {n}, k = {k}, r = {r}")]
    BadCubeParameters { n: usize, k: usize, r: usize },
    #[error("tree fails its homology conditions")]
    Unverified,
}

/// Coordinates of every k-cell in `H_k(X, T; ℚ)` with respect to the basis
/// formed by the classes of the `basis` cells.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeClasses {
    pub basis: Vec<usize>,
    /// One vector of length `basis.len()` per k-cell; zero on tree cells.
    pub classes: Vec<Vec<Rat>>,
}

impl RelativeClasses {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn compute<X: CellComplex + ?Sized>(x: &X, k: usize, in_tree: &[bool]) -> Self {
        let outside: Vec<usize> = (0..x.num_cells(k)).filter(|&c| !in_tree[c]).collect();
        let mut pos = vec![usize::MAX; x.num_cells(k)];
        for (p, &c) in outside.iter().enumerate() {
            pos[c] = p;
        }
        let mut rows: IncrementalBasis<Rat> = IncrementalBasis::new();
        let mut slot_class: Vec<BTreeMap<usize, Rat>> = Vec::new();
        let combine = |trace: &[(usize, Rat)], slot_class: &[BTreeMap<usize, Rat>]| {
            let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
            for (slot, f) in trace {
                for (b, v) in &slot_class[*slot] {
                    *acc.entry(*b).or_default() += f * v;
                }
            }
            acc.retain(|_, v| !v.is_zero());
            acc
        };
        for t in 0..x.num_cells(k + 1) {
            let row = x
                .facets(k + 1, t)
                .into_iter()
                .filter(|(c, _)| pos[*c] != usize::MAX)
                .map(|(c, s)| (pos[c], Rat::from_integer(s.into())));
            let (rem, trace) = rows.reduce(row);
            if !rem.is_empty() {
                let mut class = combine(&trace, &slot_class);
                class.values_mut().for_each(|v| *v = -v.clone());
                rows.push_reduced(rem);
                slot_class.push(class);
            }
        }
        let mut basis = Vec::new();
        let mut sparse = vec![BTreeMap::new(); x.num_cells(k)];
        for &q in &outside {
            let (rem, trace) = rows.reduce([(pos[q], Rat::one())]);
            let acc = combine(&trace, &slot_class);
            if rem.is_empty() {
                sparse[q] = acc;
            } else {
                let b = basis.len();
                basis.push(q);
                let mut class: BTreeMap<usize, Rat> = acc.into_iter().map(|(i, v)| (i, -v)).collect();
                class.insert(b, Rat::one());
                rows.push_reduced(rem);
                slot_class.push(class);
                sparse[q] = BTreeMap::from([(b, Rat::one())]);
            }
        }
        let r = basis.len();
        let classes = sparse
            .into_iter()
            .map(|m| {
                let mut v = vec![Rat::zero(); r];
                for (i, x) in m {
                    v[i] = x;
                }
                v
            })
            .collect();
        Self { basis, classes }
    }

    /// Distinct nonzero classes, each normalized so its first nonzero entry
    /// is positive.
    pub fn distinct_classes(&self) -> Vec<Vec<Rat>> {
        let set: BTreeSet<Vec<Rat>> = self
            .classes
            .iter()
            .filter(|c| c.iter().any(|v| !v.is_zero()))
            .map(|c| {
                let neg = c.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
                c.iter().map(|v| if neg { -v.clone() } else { v.clone() }).collect()
            })
            .collect();
        set.into_iter().collect()
    }
}

/// A k-spanning tree: all cells below dimension k plus `cells`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanningTree {
    pub k: usize,
    pub cells: Vec<usize>,
    pub relative: RelativeClasses,
}

/// A k-wrapping tree: all cells below dimension k plus `cells`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WrappingTree {
    pub k: usize,
    pub cells: Vec<usize>,
}

fn boundary_rows<X: CellComplex + ?Sized>(x: &X, k: usize, cell: usize) -> Vec<(usize, Rat)> {
    x.facets(k, cell).into_iter().map(|(t, s)| (t, Rat::from_integer(s.into()))).collect()
}

fn column_rank<X: CellComplex + ?Sized>(x: &X, k: usize, cells: &[usize]) -> usize {
    let mut b = IncrementalBasis::new();
    for &c in cells {
        b.insert(boundary_rows(x, k, c));
    }
    b.rank()
}

fn boundary_rank<X: CellComplex + ?Sized>(x: &X, k: usize) -> usize {
    column_rank(x, k, &(0..x.num_cells(k)).collect::<Vec<_>>())
}

/// Greedy k-spanning tree in canonical cell order. For `k = 0` the tree is
/// empty.
pub fn greedy_spanning_tree<X: CellComplex + ?Sized>(x: &X, k: usize) -> Result<SpanningTree, TreeError> {
    if k > x.dim() {
        return Err(TreeError::DegreeOutOfRange { k, dim: x.dim() });
    }
    let mut cells = Vec::new();
    if k > 0 {
        let mut b = IncrementalBasis::new();
        for c in 0..x.num_cells(k) {
            if b.insert(boundary_rows(x, k, c)) {
                cells.push(c);
            }
        }
    }
    let mut in_tree = vec![false; x.num_cells(k)];
    for &c in &cells {
        in_tree[c] = true;
    }
    let relative = RelativeClasses::compute(x, k, &in_tree);
    let tree = SpanningTree { k, cells, relative };
    if !verify_spanning(x, &tree) {
        return Err(TreeError::Unverified);
    }
    Ok(tree)
}

/// `H_k(T) = 0` and `H_{k-1}(T) → H_{k-1}(X)` an isomorphism, by ranks.
pub fn verify_spanning<X: CellComplex + ?Sized>(x: &X, t: &SpanningTree) -> bool {
    if t.k == 0 {
        return t.cells.is_empty();
    }
    let r = column_rank(x, t.k, &t.cells);
    r == t.cells.len() && r == boundary_rank(x, t.k)
}

/// Spanning tree plus the greedy basis cells of `H_k(X, T; ℚ)`.
pub fn wrapping_tree<X: CellComplex + ?Sized>(x: &X, k: usize) -> Result<WrappingTree, TreeError> {
    let t = greedy_spanning_tree(x, k)?;
    Ok(wrapping_from(&t))
}

pub fn wrapping_from(t: &SpanningTree) -> WrappingTree {
    let mut cells: Vec<usize> = t.cells.iter().chain(&t.relative.basis).copied().collect();
    cells.sort_unstable();
    WrappingTree { k: t.k, cells }
}

/// `H_{k-1}(U) ≅ H_{k-1}(X)` and `H_k(U) ≅ H_k(X)` over ℚ, by ranks.
pub fn verify_wrapping<X: CellComplex + ?Sized>(x: &X, u: &WrappingTree) -> bool {
    let k = u.k;
    let ru = if k == 0 { 0 } else { column_rank(x, k, &u.cells) };
    let rk = if k == 0 { 0 } else { boundary_rank(x, k) };
    let rk1 = boundary_rank(x, k + 1);
    let betti_k = x.num_cells(k) - rk - rk1;
    // Cycles of U meet the boundaries of X trivially.
    let mut span = IncrementalBasis::new();
    for t in 0..x.num_cells(k + 1) {
        span.insert(boundary_rows(x, k + 1, t));
    }
    for &c in &u.cells {
        span.insert([(c, Rat::one())]);
    }
    ru == rk && u.cells.len() - ru == betti_k && span.rank() == rk1 + u.cells.len()
}

/// A basis of `H_k(X, T; ℚ)` whose integer span contains every cell class,
/// with each class's integer coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralBasis {
    /// Basis vectors in the coordinates of [`RelativeClasses`].
    pub generators: Vec<Vec<Rat>>,
    /// Per k-cell coordinates in `generators`.
    pub coords: Vec<Vec<Int>>,
    pub gnarledness: Int,
    /// True when the generators are the greedy basis cells themselves.
    pub simplex_basis: bool,
}

fn l1(v: &[Int]) -> Int {
    v.iter().map(|x| x.abs()).sum()
}

fn as_ints(v: &[Rat]) -> Option<Vec<Int>> {
    v.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

/// `max_a ‖a‖₁` over cell classes in the greedy basis; fails when a class
/// has a fractional coordinate.
pub fn gnarledness_upper(t: &SpanningTree) -> Result<Int, TreeError> {
    let mut best = Int::zero();
    for (cell, c) in t.relative.classes.iter().enumerate() {
        let v = as_ints(c).ok_or(TreeError::NotIntegral { cell })?;
        best = best.max(l1(&v));
    }
    Ok(best)
}

/// The greedy basis when it is integral, otherwise an echelon basis of the
/// lattice spanned by the classes.
pub fn integral_basis(t: &SpanningTree) -> IntegralBasis {
    let rel = &t.relative;
    let r = rel.rank();
    if let Ok(g) = gnarledness_upper(t) {
        let generators =
            (0..r).map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
        let coords = rel.classes.iter().map(|c| as_ints(c).expect("integral")).collect();
        return IntegralBasis { generators, coords, gnarledness: g, simplex_basis: true };
    }
    let distinct = rel.distinct_classes();
    let denom = distinct.iter().flatten().fold(Int::one(), |acc, v| acc.lcm(v.denom()));
    let scale = Rat::from_integer(denom.clone());
    let m = IntegerMatrix::from_triplets(
        r,
        distinct.len(),
        distinct.iter().enumerate().flat_map(|(j, c)| {
            let scale = scale.clone();
            c.iter().enumerate().map(move |(i, v)| (i, j, (v * &scale).to_integer()))
        }),
    );
    let generators: Vec<Vec<Rat>> = IntegerSolver::new(&m)
        .lattice_basis()
        .into_iter()
        .map(|h| h.into_iter().map(|v| Rat::new(v, denom.clone())).collect())
        .collect();
    assert_eq!(generators.len(), r, "class lattice has full rank");
    let g = SparseMatrix::from_triplets(
        r,
        r,
        generators.iter().enumerate().flat_map(|(j, col)| col.iter().enumerate().map(move |(i, v)| (i, j, v.clone()))),
    );
    let solver = EchelonSolver::new(&g);
    let coords: Vec<Vec<Int>> = rel
        .classes
        .iter()
        .map(|c| {
            let a = solver.solve(c).expect("generators span the classes");
            as_ints(&a).expect("classes lie in the generated lattice")
        })
        .collect();
    let gnarledness = coords.iter().map(|c| l1(c)).max().unwrap_or_default();
    IntegralBasis { generators, coords, gnarledness, simplex_basis: false }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactGnarledness {
    pub value: Int,
    /// Every admissible basis with value at most this bound was examined.
    pub search_bound: Int,
    /// Bases rejected because an entry's denominator exceeded the bound.
    pub excluded_by_denominator: usize,
    /// The best basis, as columns in greedy-basis coordinates.
    pub basis: Vec<Vec<Rat>>,
}

const EXACT_MAX_RANK: usize = 2;
const EXACT_MAX_CLASSES: usize = 8;
const EXACT_MAX_BOUND: i64 = 1 << 12;

/// Minimum over bases `ℬ` with every class in `ℤℬ` and entries of
/// denominator at most `denom_bound` of `max_a ‖a‖₁`.
///
/// A basis is described by the integer matrix `W` sending greedy
/// coordinates to `ℬ`-coordinates; the greedy basis cells are themselves
/// classes, so `W` is integral and bounded entrywise by the objective.
pub fn gnarledness_exact_tiny(t: &SpanningTree, denom_bound: u64) -> Result<ExactGnarledness, TreeError> {
    let r = t.relative.rank();
    let classes = t.relative.distinct_classes();
    if r > EXACT_MAX_RANK || classes.len() > EXACT_MAX_CLASSES {
        return Err(TreeError::TooLarge { rank: r, classes: classes.len() });
    }
    if r == 0 {
        return Ok(ExactGnarledness {
            value: Int::zero(),
            search_bound: Int::zero(),
            excluded_by_denominator: 0,
            basis: vec![],
        });
    }
    let dot = |w: &[i64], a: &[Rat]| -> Rat { w.iter().zip(a).map(|(x, y)| y * Rat::from_integer((*x).into())).sum() };
    let mut bound: i64 = gnarledness_upper(t).ok().and_then(|g| i64::try_from(g).ok()).unwrap_or(1).max(1);
    while bound <= EXACT_MAX_BOUND {
        let bq = Rat::from_integer(bound.into());
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut w = vec![-bound; r];
        loop {
            if w.iter().any(|&v| v != 0)
                && classes.iter().all(|a| {
                    let d = dot(&w, a);
                    d.is_integer() && d.abs() <= bq
                })
            {
                rows.push(w.clone());
            }
            let mut i = 0;
            while i < r && w[i] == bound {
                w[i] = -bound;
                i += 1;
            }
            if i == r {
                break;
            }
            w[i] += 1;
        }
        let mut best: Option<(Int, Vec<Vec<Rat>>)> = None;
        let mut excluded = 0usize;
        let mut consider = |wm: Vec<&Vec<i64>>| {
            let Some(inv) = inverse_small(&wm) else { return };
            if inv.iter().flatten().any(|v| v.denom() > &Int::from(denom_bound)) {
                excluded += 1;
                return;
            }
            let value = classes
                .iter()
                .map(|a| wm.iter().map(|row| dot(row, a).abs().to_integer()).sum::<Int>())
                .max()
                .unwrap_or_default();
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, inv));
            }
        };
        if r == 1 {
            for a in &rows {
                consider(vec![a]);
            }
        } else {
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    consider(vec![&rows[i], &rows[j]]);
                }
            }
        }
        if let Some((value, basis)) = best {
            if value <= Int::from(bound) {
                return Ok(ExactGnarledness {
                    value,
                    search_bound: Int::from(bound),
                    excluded_by_denominator: excluded,
                    basis,
                });
            }
        }
        bound *= 2;
    }
    Err(TreeError::SearchEmpty { bound: Int::from(EXACT_MAX_BOUND) })
}

/// Inverse of a 1×1 or 2×2 integer matrix given by rows, as columns.
fn inverse_small(w: &[&Vec<i64>]) -> Option<Vec<Vec<Rat>>> {
    match w.len() {
        1 => (w[0][0] != 0).then(|| vec![vec![Rat::new(1.into(), w[0][0].into())]]),
        2 => {
            let (a, b, c, d) = (w[0][0], w[0][1], w[1][0], w[1][1]);
            let det = a * d - b * c;
            if det == 0 {
                return None;
            }
            let q = |n: i64| Rat::new(n.into(), det.into());
            // Columns of [[d, -b], [-c, a]] / det.
            Some(vec![vec![q(d), q(-c)], vec![q(-b), q(a)]])
        }
        _ => None,
    }
}

/// Rank of `∂_k` restricted to the given k-cells, over ℚ.
pub fn tree_boundary_rank<X: CellComplex + ?Sized>(x: &X, k: usize, cells: &[usize]) -> usize {
    if k == 0 {
        return 0;
    }
    let all: Vec<usize> = (0..x.num_cells(k - 1)).collect();
    rank_q(&crate::homalg::boundary_matrix_unchecked(x, k).select(&all, cells))
}
