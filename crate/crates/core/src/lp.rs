//! Dense two-phase tableau simplex for `min cᵀx, Ax = b, x ≥ 0`.
//!
//! Generic over [`LpScalar`]: run over `f64` for a fast basis guess, over
//! [`Rat`](crate::Rat) for an exact answer.

use crate::scalar::LpScalar;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<F> {
    Optimal(LpSolution<F>),
    Infeasible,
    Unbounded,
    /// Only reachable with inexact arithmetic.
    IterationLimit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<F> {
    pub x: Vec<F>,
    pub value: F,
    /// Constraint rows kept after dropping redundant ones.
    pub rows: Vec<usize>,
    /// Basic column for each kept row, in the same order.
    pub basis: Vec<usize>,
}

struct Tableau<F> {
    /// `m` rows of `n + 1` entries; the last entry is the right-hand side.
    t: Vec<Vec<F>>,
    /// Reduced costs followed by minus the objective value.
    z: Vec<F>,
    basis: Vec<usize>,
    n: usize,
}

impl<F: LpScalar> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        let prow = self.t[r].clone();
        let nz: Vec<usize> = (0..=self.n).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<F>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                row[j] = row[j].clone() - f.clone() * prow[j].clone();
            }
            row[c] = F::zero();
        };
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.z);
        self.basis[r] = c;
    }

    /// Runs simplex iterations over the allowed columns. Returns `false` when
    /// unbounded.
    fn optimize(&mut self, allowed: &dyn Fn(usize) -> bool, max_iter: usize) -> Option<bool> {
        let mut degenerate_run = 0usize;
        for _ in 0..max_iter {
            let bland = degenerate_run > 50;
            let mut enter = None;
            for j in (0..self.n).filter(|&j| allowed(j)) {
                if self.z[j].is_neg() {
                    match enter {
                        None => enter = Some(j),
                        Some(e) if !bland && self.z[j] < self.z[e] => enter = Some(j),
                        _ => {}
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some(c) = enter else { return Some(true) };
            let mut leave: Option<(usize, F)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][c];
                if a.is_pos() {
                    let ratio = self.t[i][self.n].clone() / a.clone();
                    let better = match &leave {
                        None => true,
                        Some((l, best)) => ratio < *best || (ratio <= *best && self.basis[i] < self.basis[*l]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else { return Some(false) };
            if ratio.is_negligible() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, c);
        }
        None
    }
}

/// Minimizes `cᵀx` subject to `Ax = b`, `x ≥ 0`. `a` is dense, row-major.
pub fn solve_standard_form<F: LpScalar>(a: &[Vec<F>], b: &[F], c: &[F]) -> LpOutcome<F> {
    let m = a.len();
    let nx = c.len();
    let n = nx + m;
    let max_iter = 50 * (n + m) + 1000;
    let mut t = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), nx, "row {i} has the wrong width");
        let flip = b[i].is_neg();
        let mut r: Vec<F> = row.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { F::one() } else { F::zero() }));
        r.push(if flip { -b[i].clone() } else { b[i].clone() });
        t.push(r);
    }
    // Phase one: minimize the sum of artificials.
    let mut z = vec![F::zero(); n + 1];
    for row in &t {
        for j in (0..nx).chain(std::iter::once(n)) {
            z[j] = z[j].clone() - row[j].clone();
        }
    }
    let mut tab = Tableau { t, z, basis: (nx..n).collect(), n };
    match tab.optimize(&|_| true, max_iter) {
        None => return LpOutcome::IterationLimit,
        Some(false) => unreachable!("phase one is bounded below"),
        Some(true) => {}
    }
    if (-tab.z[n].clone()).is_pos() {
        return LpOutcome::Infeasible;
    }
    // Drive artificials out of the basis; rows where that is impossible are
    // redundant.
    let mut keep = vec![true; m];
    for (r, kept) in keep.iter_mut().enumerate() {
        if tab.basis[r] >= nx {
            match (0..nx).find(|&j| !tab.t[r][j].is_negligible()) {
                Some(j) => tab.pivot(r, j),
                None => *kept = false,
            }
        }
    }
    let rows: Vec<usize> = (0..m).filter(|&r| keep[r]).collect();
    tab.t = rows.iter().map(|&r| std::mem::take(&mut tab.t[r])).collect();
    tab.basis = rows.iter().map(|&r| tab.basis[r]).collect();
    // Phase two.
    let mut z = vec![F::zero(); n + 1];
    z[..nx].clone_from_slice(c);
    for (r, &j) in tab.basis.iter().enumerate() {
        let cj = c[j].clone();
        if !cj.is_zero() {
            for (zk, tk) in z.iter_mut().zip(&tab.t[r]) {
                *zk = zk.clone() - cj.clone() * tk.clone();
            }
        }
    }
    tab.z = z;
    match tab.optimize(&|j| j < nx, max_iter) {
        None => return LpOutcome::IterationLimit,
        Some(false) => return LpOutcome::Unbounded,
        Some(true) => {}
    }
    let mut x = vec![F::zero(); nx];
    for (r, &j) in tab.basis.iter().enumerate() {
        x[j] = tab.t[r][n].clone();
    }
    LpOutcome::Optimal(LpSolution { x, value: -tab.z[n].clone(), rows, basis: tab.basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rat;

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn small_exact_program() {
        // min -x - y, x + 2y + s = 4, 3x + y + u = 6.
        let a = vec![r(&[1, 2, 1, 0]), r(&[3, 1, 0, 1])];
        let LpOutcome::Optimal(s) = solve_standard_form(&a, &r(&[4, 6]), &r(&[-1, -1, 0, 0])) else { panic!() };
        assert_eq!(s.value, rat(-14, 5));
        assert_eq!(&s.x[..2], &[rat(8, 5), rat(6, 5)]);
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![r(&[1, 1])];
        assert_eq!(solve_standard_form(&a, &r(&[-1]), &r(&[0, 0])), LpOutcome::Infeasible);
        let a = vec![r(&[1, -1])];
        assert_eq!(solve_standard_form(&a, &r(&[1]), &r(&[0, -1])), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![r(&[1, 1]), r(&[2, 2])];
        let LpOutcome::Optimal(s) = solve_standard_form(&a, &r(&[1, 2]), &r(&[1, 2])) else { panic!() };
        assert_eq!(s.value, rat(1, 1));
        assert_eq!(s.rows.len(), 1);
    }

    #[test]
    fn float_agrees_with_exact() {
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        let LpOutcome::Optimal(s) = solve_standard_form(&a, &[4.0, 6.0], &[-1.0, -1.0, 0.0, 0.0]) else { panic!() };
        assert!((s.value + 2.8).abs() < 1e-9);
    }
}
