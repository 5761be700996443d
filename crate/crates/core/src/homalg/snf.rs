//! Dense Smith normal form.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;
use crate::Int;

type Dense = Vec<Vec<Int>>;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`,
/// all diagonal entries nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    /// The nonzero invariant factors.
    pub factors: Vec<Int>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

fn identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()).collect()
}

fn row_axpy(a: &mut Dense, dst: usize, q: &Int, src: usize) {
    for j in 0..a[src].len() {
        let t = &a[src][j] * q;
        a[dst][j] -= t;
    }
}

fn col_axpy(a: &mut Dense, dst: usize, q: &Int, src: usize) {
    for row in a.iter_mut() {
        let t = &row[src] * q;
        row[dst] -= t;
    }
}

fn swap_cols(a: &mut Dense, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.to_dense();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let best = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !a[i][j].is_zero())
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    row_axpy(&mut a, i, &q, t);
                    row_axpy(&mut u, i, &q, t);
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    col_axpy(&mut a, j, &q, t);
                    col_axpy(&mut v, j, &q, t);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, t, j);
                        swap_cols(&mut v, t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: fold an offending row into row t and retry.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    row_axpy(&mut a, t, &-Int::one(), i);
                    row_axpy(&mut u, t, &-Int::one(), i);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
        t += 1;
    }
    let factors = (0..t).map(|i| a[i][i].clone()).collect();
    SmithForm {
        u: IntegerMatrix::from_dense(&u),
        d: IntegerMatrix::from_triplets(
            rows,
            cols,
            a.into_iter().enumerate().flat_map(|(i, r)| r.into_iter().enumerate().map(move |(j, x)| (i, j, x))),
        ),
        v: IntegerMatrix::from_dense(&v),
        factors,
    }
}
