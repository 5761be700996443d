//! Exact filling and cofilling constants of tiny complexes by vertex
//! enumeration.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{FillError, Filler};
use crate::complex::CellComplex;
use crate::homalg::{
    boundary_matrix_unchecked, coboundary_matrix, Cochain, EchelonSolver, IncrementalBasis, SparseMatrix,
};
use crate::lp::{solve_standard_form, LpOutcome};
use crate::scalar::{fmt_rat, Ring};
use crate::Rat;

/// Largest number of cells allowed in each of the two dimensions involved.
pub const MAX_TINY_CELLS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct DualityConstants {
    pub k: usize,
    /// `max min ‖α‖∞` over coboundaries `ω = δα` with `‖ω‖∞ ≤ 1`.
    pub cofilling: Rat,
    /// `max min vol τ` over boundaries `σ = ∂τ` with `vol σ ≤ 1`.
    pub filling: Rat,
    pub cofilling_vertices: usize,
    pub filling_vertices: usize,
}

impl DualityConstants {
    pub fn equal(&self) -> bool {
        self.cofilling == self.filling
    }
}

impl Serialize for DualityConstants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("DualityConstants", 6)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("cofilling_constant", &fmt_rat(&self.cofilling))?;
        st.serialize_field("filling_constant", &fmt_rat(&self.filling))?;
        st.serialize_field("equal", &self.equal())?;
        st.serialize_field("cofilling_vertices", &self.cofilling_vertices)?;
        st.serialize_field("filling_vertices", &self.filling_vertices)?;
        st.end()
    }
}

/// Indices of a maximal independent set of columns.
fn independent_columns(m: &SparseMatrix<Rat>) -> Vec<usize> {
    let mut basis = IncrementalBasis::new();
    let mt = m.transpose();
    (0..mt.nrows()).filter(|&j| basis.insert(mt.row(j).iter().cloned())).collect()
}

fn masks(n: usize, size: Option<usize>) -> impl Iterator<Item = u32> {
    (0u32..(1 << n)).filter(move |m| size.is_none_or(|s| m.count_ones() as usize == s))
}

fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

/// Normalizes the sign of a vertex so that `v` and `-v` coincide.
fn canonical(mut v: Vec<Rat>) -> Vec<Rat> {
    if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    v
}

/// Vertices of `im B ∩ [−1, 1]^N` for `B` with independent columns, up to
/// sign.
fn cube_section_vertices(b: &SparseMatrix<Rat>) -> BTreeSet<Vec<Rat>> {
    let (n, r) = (b.nrows(), b.ncols());
    let mut out = BTreeSet::new();
    if r == 0 {
        return out;
    }
    for mask in masks(n, Some(r)) {
        let rows = members(mask, n);
        let solver = EchelonSolver::new(&b.select(&rows, &(0..r).collect::<Vec<_>>()));
        if solver.rank() < r {
            continue;
        }
        for signs in 0u32..(1 << r) {
            let sigma: Vec<Rat> = (0..r).map(|i| if signs >> i & 1 == 1 { -Rat::one() } else { Rat::one() }).collect();
            let c = solver.solve(&sigma).expect("square invertible system");
            let w = b.mul_vec(&c).expect("shape");
            if w.iter().all(|x| x.abs() <= Rat::one()) {
                out.insert(canonical(w));
            }
        }
    }
    out
}

/// Vertices of `im B ∩ {‖x‖₁ ≤ 1}` up to sign: for each support `S` on which
/// `im B` meets the coordinate subspace in a line spanned by a vector
/// with support exactly `S`, that vector scaled to volume 1.
fn cross_section_vertices(b: &SparseMatrix<Rat>) -> BTreeSet<Vec<Rat>> {
    let (n, r) = (b.nrows(), b.ncols());
    let cols: Vec<usize> = (0..r).collect();
    let mut out = BTreeSet::new();
    for mask in masks(n, None) {
        let outside = members(!mask & ((1 << n) - 1), n);
        let sub = b.select(&outside, &cols);
        let solver = EchelonSolver::new(&sub);
        if r - solver.rank() != 1 {
            continue;
        }
        let pivots: BTreeSet<usize> = solver.pivot_columns().into_iter().collect();
        let f = (0..r).find(|j| !pivots.contains(j)).expect("one free column");
        let rhs: Vec<Rat> = (0..outside.len()).map(|i| -sub.get(i, f)).collect();
        let mut c = solver.solve(&rhs).expect("column lies in the column space");
        c[f] = Rat::one();
        let v = b.mul_vec(&c).expect("shape");
        if members(mask, n).iter().any(|&i| v[i].is_zero()) {
            continue;
        }
        let vol: Rat = v.iter().map(Signed::abs).sum();
        out.insert(canonical(v.into_iter().map(|x| x / &vol).collect()));
    }
    out
}

/// `min vol τ` subject to `∂τ = σ`.
fn min_volume_filling(d: &SparseMatrix<Rat>, sigma: &[Rat]) -> Result<Rat, FillError> {
    let n = d.ncols();
    let dense = d.to_dense();
    let a: Vec<Vec<Rat>> =
        dense.iter().map(|row| row.iter().cloned().chain(row.iter().map(|v| -v.clone())).collect()).collect();
    let c = vec![Rat::one(); 2 * n];
    match solve_standard_form(&a, sigma, &c) {
        LpOutcome::Optimal(s) => Ok(s.value),
        LpOutcome::Infeasible => Err(FillError::Lp("boundary vertex has no filling")),
        _ => Err(FillError::Lp("filling program")),
    }
}

/// Both sides of the chain/cochain duality for k-cochains and
/// (k-1)-chains, computed independently; they must agree.
pub fn coiso_constants_tiny<X: CellComplex + ?Sized>(x: &X, k: usize) -> Result<DualityConstants, FillError> {
    if k == 0 || k > x.dim() {
        return Err(FillError::DegreeOutOfRange { k, dim: x.dim() });
    }
    for d in [k - 1, k] {
        let cells = x.num_cells(d);
        if cells > MAX_TINY_CELLS {
            return Err(FillError::TooLarge { cells, cap: MAX_TINY_CELLS });
        }
    }
    let delta = coboundary_matrix(x, k - 1).map(Ring::to_rat);
    let cob = delta.select(&(0..delta.nrows()).collect::<Vec<_>>(), &independent_columns(&delta));
    let filler = Filler::new(x, k)?;
    let mut cofilling = Rat::zero();
    let co_vertices = cube_section_vertices(&cob);
    for w in &co_vertices {
        let r = filler.fill(&Cochain::new(k, w.clone()))?;
        cofilling = cofilling.max(r.norm_inf_alpha);
    }

    let d = boundary_matrix_unchecked(x, k).map(Ring::to_rat);
    let bnd = d.select(&(0..d.nrows()).collect::<Vec<_>>(), &independent_columns(&d));
    let mut filling = Rat::zero();
    let vertices = cross_section_vertices(&bnd);
    for s in &vertices {
        filling = filling.max(min_volume_filling(&d, s)?);
    }
    Ok(DualityConstants {
        k,
        cofilling,
        filling,
        cofilling_vertices: co_vertices.len(),
        filling_vertices: vertices.len(),
    })
}
