//! Sparse Gaussian elimination over a field.

use std::collections::{BTreeMap, HashMap};

use super::matrix::SparseMatrix;
use crate::scalar::Field;

type SparseRow<F> = Vec<(usize, F)>;

/// Subtracts `f * row` from `work`.
fn axpy<F: Field>(work: &mut BTreeMap<usize, F>, f: &F, row: &[(usize, F)]) {
    for (j, v) in row {
        let delta = f.clone() * v.clone();
        match work.get_mut(j) {
            Some(w) => {
                *w = w.clone() - delta;
                if w.is_zero() {
                    work.remove(j);
                }
            }
            None => {
                work.insert(*j, -delta);
            }
        }
    }
}

/// An echelon basis of a growing row space. Every stored row has a distinct
/// leading column and is zero in the leading columns of rows stored before
/// it.
#[derive(Clone, Debug, Default)]
pub struct IncrementalBasis<F> {
    rows: Vec<SparseRow<F>>,
    pivot_of: HashMap<usize, usize>,
}

impl<F: Field> IncrementalBasis<F> {
    pub fn new() -> Self {
        Self { rows: Vec::new(), pivot_of: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis. Returns the remainder and the
    /// `(slot, factor)` pairs used, so that `v = remainder + Σ factor·row[slot]`.
    pub fn reduce(&self, v: impl IntoIterator<Item = (usize, F)>) -> (BTreeMap<usize, F>, Vec<(usize, F)>) {
        let mut work: BTreeMap<usize, F> = BTreeMap::new();
        for (j, x) in v {
            if !x.is_zero() {
                let e = work.entry(j).or_insert_with(F::zero);
                *e = e.clone() + x;
            }
        }
        work.retain(|_, x| !x.is_zero());
        let mut trace = Vec::new();
        let mut cursor = 0;
        while let Some((&c, x)) = work.range(cursor..).next() {
            if let Some(&slot) = self.pivot_of.get(&c) {
                let row = &self.rows[slot];
                let f = x.clone() / row[0].1.clone();
                axpy(&mut work, &f, row);
                trace.push((slot, f));
            }
            cursor = c + 1;
        }
        (work, trace)
    }

    /// Appends a reduced nonzero remainder; returns its slot.
    pub fn push_reduced(&mut self, remainder: BTreeMap<usize, F>) -> usize {
        let row: SparseRow<F> = remainder.into_iter().collect();
        assert!(!row.is_empty(), "pushing a zero row");
        let slot = self.rows.len();
        self.pivot_of.insert(row[0].0, slot);
        self.rows.push(row);
        slot
    }

    /// Adds `v` if it is independent of the current rows.
    pub fn insert(&mut self, v: impl IntoIterator<Item = (usize, F)>) -> bool {
        let (rem, _) = self.reduce(v);
        if rem.is_empty() {
            false
        } else {
            self.push_reduced(rem);
            true
        }
    }

    pub fn contains(&self, v: impl IntoIterator<Item = (usize, F)>) -> bool {
        self.reduce(v).0.is_empty()
    }
}

#[derive(Clone, Debug)]
struct RowStep<F> {
    ops: Vec<(usize, F)>,
    pivot_slot: Option<usize>,
}

/// Prepared solver for `M x = b` with `M` fixed and many right-hand sides.
#[derive(Clone, Debug)]
pub struct EchelonSolver<F> {
    nrows: usize,
    ncols: usize,
    basis: IncrementalBasis<F>,
    steps: Vec<RowStep<F>>,
}

/// The system has no solution; `row` is the first row whose reduced right
/// hand side is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistent {
    pub row: usize,
}

impl<F: Field> EchelonSolver<F> {
    pub fn new(m: &SparseMatrix<F>) -> Self {
        let mut basis = IncrementalBasis::new();
        let mut steps = Vec::with_capacity(m.nrows());
        for row in m.rows() {
            let (rem, ops) = basis.reduce(row.iter().cloned());
            let pivot_slot = (!rem.is_empty()).then(|| basis.push_reduced(rem));
            steps.push(RowStep { ops, pivot_slot });
        }
        Self { nrows: m.nrows(), ncols: m.ncols(), basis, steps }
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Columns carrying a pivot; the matching square submatrix is invertible.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.basis.rows.iter().map(|r| r[0].0).collect()
    }

    /// A solution with all non-pivot variables set to zero.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>, Inconsistent> {
        assert_eq!(b.len(), self.nrows, "right-hand side length");
        let mut rhs: Vec<F> = vec![F::zero(); self.basis.rank()];
        for (i, step) in self.steps.iter().enumerate() {
            let mut v = b[i].clone();
            for (slot, f) in &step.ops {
                v = v - f.clone() * rhs[*slot].clone();
            }
            match step.pivot_slot {
                Some(slot) => rhs[slot] = v,
                None if !v.is_zero() => return Err(Inconsistent { row: i }),
                None => {}
            }
        }
        let mut x = vec![F::zero(); self.ncols];
        let mut order: Vec<usize> = (0..self.basis.rank()).collect();
        order.sort_by_key(|&s| std::cmp::Reverse(self.basis.rows[s][0].0));
        for slot in order {
            let row = &self.basis.rows[slot];
            let mut v = rhs[slot].clone();
            for (j, a) in &row[1..] {
                if !x[*j].is_zero() {
                    v = v - a.clone() * x[*j].clone();
                }
            }
            x[row[0].0] = v / row[0].1.clone();
        }
        Ok(x)
    }
}

pub fn rank<F: Field>(m: &SparseMatrix<F>) -> usize {
    let mut basis = IncrementalBasis::new();
    for row in m.rows() {
        basis.insert(row.iter().cloned());
    }
    basis.rank()
}
