use super::elim::{rank, EchelonSolver};
use super::matrix::{boundary_matrix_unchecked, coboundary_matrix, IntegerMatrix};
use super::Cochain;
use crate::complex::CellComplex;
use crate::scalar::Ring;
use crate::Rat;

/// Rank over the rationals.
pub fn rank_q(m: &IntegerMatrix) -> usize {
    rank(&m.map(Ring::to_rat))
}

/// `b_k = dim ker ∂_k − rank ∂_{k+1}` over ℚ, for `k = 0..=dim`.
pub fn betti_numbers<X: CellComplex + ?Sized>(x: &X) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=x.dim() + 1).map(|k| rank_q(&boundary_matrix_unchecked(x, k))).collect();
    (0..=x.dim()).map(|k| x.num_cells(k) - ranks[k] - ranks[k + 1]).collect()
}

/// Betti numbers over ℚ of the pair `(A, B)` of subcomplexes, `B ⊂ A`,
/// given as per-dimension lists of cell indices of `x`.
pub fn relative_betti_numbers<X: CellComplex + ?Sized>(x: &X, a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<usize> {
    let top = a.len();
    let rel: Vec<Vec<usize>> = (0..top)
        .map(|k| {
            let drop: std::collections::HashSet<usize> = b.get(k).into_iter().flatten().copied().collect();
            let mut cells: Vec<usize> = a[k].iter().copied().filter(|c| !drop.contains(c)).collect();
            cells.sort_unstable();
            cells
        })
        .collect();
    let ranks: Vec<usize> = (0..=top)
        .map(|k| {
            if k == 0 || k >= top {
                return 0;
            }
            rank_q(&boundary_matrix_unchecked(x, k).select(&rel[k - 1], &rel[k]))
        })
        .collect();
    (0..top).map(|k| rel[k].len() - ranks[k] - ranks[k + 1]).collect()
}

/// Whether `omega` is in the image of `δ^{k-1}` over ℚ, `k = omega.k ≥ 1`.
pub fn is_coboundary<X: CellComplex + ?Sized>(x: &X, omega: &Cochain<Rat>) -> bool {
    if omega.k == 0 {
        return omega.is_zero();
    }
    let d = coboundary_matrix(x, omega.k - 1).map(Ring::to_rat);
    EchelonSolver::new(&d).solve(&omega.values).is_ok()
}
