//! Integral solvability of `M x = b` by unimodular column reduction.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntegerMatrix;
use super::HomalgError;
use crate::Int;

type Row = BTreeMap<usize, Int>;

fn sub_multiple(target: &mut Row, q: &Int, src: &Row) {
    for (j, v) in src {
        let e = target.entry(*j).or_insert_with(Int::zero);
        *e -= q * v;
        if e.is_zero() {
            target.remove(j);
        }
    }
}

/// Column-echelon form `M W = H` of a fixed integer matrix, reusable across
/// right-hand sides. Column `r` of `H` has its first nonzero entry in row
/// `pivots[r]`, strictly increasing in `r`; the remaining columns are zero.
#[derive(Clone, Debug)]
pub struct IntegerSolver {
    nrows: usize,
    ncols: usize,
    /// Columns of `H`, stored sparsely by row index of `M`.
    h: Vec<Row>,
    /// Matching columns of `W`.
    w: Vec<Row>,
}

/// Why `M x = b` has no integral solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegralObstruction {
    /// No rational solution: the residual is nonzero in this row of `M`.
    Inconsistent { row: usize },
    /// A rational solution exists but the echelon pivot in this row does
    /// not divide the reduced right-hand side.
    NotDivisible { row: usize, pivot: Int, value: Int },
}

impl IntegerSolver {
    pub fn new(m: &IntegerMatrix) -> Self {
        let (nrows, ncols) = (m.nrows(), m.ncols());
        let mt = m.transpose();
        let mut rows: Vec<(Row, Row)> =
            (0..ncols).map(|j| (mt.row(j).iter().cloned().collect(), BTreeMap::from([(j, Int::from(1))]))).collect();
        let mut by_lead: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for (id, (a, _)) in rows.iter().enumerate() {
            if let Some((&c, _)) = a.first_key_value() {
                by_lead.entry(c).or_default().insert(id);
            }
        }
        let mut h = Vec::new();
        let mut w = Vec::new();
        while let Some((c, ids)) = by_lead.pop_first() {
            let mut ids: Vec<usize> = ids.into_iter().collect();
            // Euclid across the rows leading in column c.
            loop {
                ids.sort_by(|&x, &y| rows[x].0[&c].abs().cmp(&rows[y].0[&c].abs()).then(x.cmp(&y)));
                let p = ids[0];
                let mut still = vec![p];
                for &id in &ids[1..] {
                    let q = rows[id].0[&c].div_floor(&rows[p].0[&c]);
                    let (src_a, src_w) = rows[p].clone();
                    let (ta, tw) = &mut rows[id];
                    sub_multiple(ta, &q, &src_a);
                    sub_multiple(tw, &q, &src_w);
                    match ta.first_key_value() {
                        Some((&lead, _)) if lead == c => still.push(id),
                        Some((&lead, _)) => {
                            by_lead.entry(lead).or_default().insert(id);
                        }
                        None => {}
                    }
                }
                ids = still;
                if ids.len() == 1 {
                    break;
                }
            }
            let (a, wr) = std::mem::take(&mut rows[ids[0]]);
            h.push(a);
            w.push(wr);
        }
        Self { nrows, ncols, h, w }
    }

    pub fn rank(&self) -> usize {
        self.h.len()
    }

    /// The nonzero columns of `H`, dense. They form a basis of the lattice
    /// spanned by the columns of `M`.
    pub fn lattice_basis(&self) -> Vec<Vec<Int>> {
        self.h
            .iter()
            .map(|c| {
                let mut v = vec![Int::zero(); self.nrows];
                for (i, x) in c {
                    v[*i] = x.clone();
                }
                v
            })
            .collect()
    }

    /// Row indices of the echelon pivots.
    pub fn pivot_rows(&self) -> Vec<usize> {
        self.h.iter().map(|c| *c.first_key_value().expect("nonzero column").0).collect()
    }

    pub fn solve(&self, b: &[Int]) -> Result<Result<Vec<Int>, IntegralObstruction>, HomalgError> {
        if b.len() != self.nrows {
            return Err(HomalgError::Shape { expected: self.nrows, got: b.len() });
        }
        let mut res: Row = b.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect();
        let mut x: Row = BTreeMap::new();
        for (col, wcol) in self.h.iter().zip(&self.w) {
            let (&c, pivot) = col.first_key_value().expect("nonzero column");
            if let Some((&first, _)) = res.first_key_value() {
                if first < c {
                    return Ok(Err(IntegralObstruction::Inconsistent { row: first }));
                }
            }
            let Some(value) = res.get(&c).cloned() else { continue };
            let (y, rem) = value.div_rem(pivot);
            if !rem.is_zero() {
                return Ok(Err(IntegralObstruction::NotDivisible { row: c, pivot: pivot.clone(), value }));
            }
            sub_multiple(&mut res, &y, col);
            sub_multiple(&mut x, &-y, wcol);
        }
        if let Some((&row, _)) = res.first_key_value() {
            return Ok(Err(IntegralObstruction::Inconsistent { row }));
        }
        let mut out = vec![Int::zero(); self.ncols];
        for (j, v) in x {
            out[j] = v;
        }
        Ok(Ok(out))
    }
}

/// One-shot `M x = b` over the integers; `None` when no integral solution
/// exists.
pub fn solve_integral_linear(m: &IntegerMatrix, b: &[Int]) -> Result<Option<Vec<Int>>, HomalgError> {
    Ok(IntegerSolver::new(m).solve(b)?.ok())
}
