use crate::complex::CellComplex;
use crate::scalar::Ring;
use crate::Int;

use super::HomalgError;

/// Row-major sparse matrix; each row is sorted by column and holds no zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<R> {
    nrows: usize,
    ncols: usize,
    rows: Vec<Vec<(usize, R)>>,
}

/// Exact integer matrix, the carrier of boundary and coboundary operators.
pub type IntegerMatrix = SparseMatrix<Int>;

impl<R: Ring> SparseMatrix<R> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    /// Entries with equal coordinates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, R)>) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for (i, j, v) in entries {
            assert!(i < nrows && j < ncols, "entry ({i},{j}) outside {nrows}x{ncols}");
            m.rows[i].push((j, v));
        }
        for row in &mut m.rows {
            row.sort_by_key(|(j, _)| *j);
            let mut merged: Vec<(usize, R)> = Vec::with_capacity(row.len());
            for (j, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lj, lv)) if *lj == j => *lv = lv.clone() + v,
                    _ => merged.push((j, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        m
    }

    pub fn from_dense(rows: &[Vec<R>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        Self::from_triplets(
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(i, r)| r.iter().cloned().enumerate().map(move |(j, v)| (i, j, v))),
        )
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &[(usize, R)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(usize, R)]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> R {
        self.rows[i].binary_search_by_key(&j, |(c, _)| *c).map_or_else(|_| R::zero(), |p| self.rows[i][p].1.clone())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (*j, i, v.clone()))),
        )
    }

    pub fn mul_vec(&self, x: &[R]) -> Result<Vec<R>, HomalgError> {
        if x.len() != self.ncols {
            return Err(HomalgError::Shape { expected: self.ncols, got: x.len() });
        }
        Ok(self.rows.iter().map(|r| r.iter().fold(R::zero(), |acc, (j, v)| acc + v.clone() * x[*j].clone())).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HomalgError> {
        if self.ncols != other.nrows {
            return Err(HomalgError::Shape { expected: self.ncols, got: other.nrows });
        }
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r {
                for (j, b) in &other.rows[*k] {
                    out.push((i, *j, a.clone() * b.clone()));
                }
            }
        }
        Ok(Self::from_triplets(self.nrows, other.ncols, out))
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let mut d = vec![vec![R::zero(); self.ncols]; self.nrows];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                d[i][*j] = v.clone();
            }
        }
        d
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SparseMatrix<S> {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            rows: self.rows.iter().map(|r| r.iter().map(|(j, v)| (*j, f(v))).collect()).collect(),
        }
    }

    /// Submatrix on the given rows and columns, renumbered in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![usize::MAX; self.ncols];
        for (p, c) in cols.iter().enumerate() {
            col_pos[*c] = p;
        }
        Self::from_triplets(
            rows.len(),
            cols.len(),
            rows.iter().enumerate().flat_map(|(p, &i)| {
                let col_pos = &col_pos;
                self.rows[i]
                    .iter()
                    .filter(move |(j, _)| col_pos[*j] != usize::MAX)
                    .map(move |(j, v)| (p, col_pos[*j], v.clone()))
            }),
        )
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.ncols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self { nrows: self.nrows + other.nrows, ncols: self.ncols, rows }
    }
}

/// `∂_k : C_k → C_{k-1}` as a `#(k-1)-cells × #k-cells` matrix; entry
/// `(τ, σ)` is the incidence number of τ in σ.
pub fn boundary_matrix<X: CellComplex + ?Sized>(x: &X, k: usize) -> Result<IntegerMatrix, HomalgError> {
    if k == 0 || k > x.dim() {
        return Err(HomalgError::DegreeOutOfRange { k, dim: x.dim() });
    }
    Ok(boundary_matrix_unchecked(x, k))
}

/// Like [`boundary_matrix`] but returns the empty map outside `1..=dim`.
pub fn boundary_matrix_unchecked<X: CellComplex + ?Sized>(x: &X, k: usize) -> IntegerMatrix {
    let rows = if k == 0 { 0 } else { x.num_cells(k - 1) };
    let cols = x.num_cells(k);
    if k == 0 {
        return IntegerMatrix::zeros(0, cols);
    }
    IntegerMatrix::from_triplets(
        rows,
        cols,
        (0..cols).flat_map(|s| x.facets(k, s).into_iter().map(move |(t, sign)| (t, s, Int::from(sign)))),
    )
}

/// `δ^k : C^k → C^{k+1}`, the transpose of `∂_{k+1}`.
pub fn coboundary_matrix<X: CellComplex + ?Sized>(x: &X, k: usize) -> IntegerMatrix {
    boundary_matrix_unchecked(x, k + 1).transpose()
}
