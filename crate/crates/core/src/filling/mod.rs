//! ℓ∞-minimal cochain filling over ℚ and ℤ.

mod cip;
mod duality;
mod integral;
mod lift;

pub use cip::{estimate_cip, CipError, CipRow, CipTable};
pub use duality::{coiso_constants_tiny, DualityConstants, MAX_TINY_CELLS};
pub use integral::{integral_fill, IntegralFill, IntegralFiller};
pub use lift::{bounded_lift, LiftResult, Lifter};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::complex::CellComplex;
use crate::homalg::{
    boundary_matrix_unchecked, coboundary_matrix, Chain, Cochain, EchelonSolver, IncrementalBasis, IntegralObstruction,
    SparseMatrix,
};
use crate::lp::{solve_standard_form, LpOutcome};
use crate::scalar::Ring;
use crate::trees::TreeError;
use crate::Rat;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FillError {
    #[error("cochain degree {k} outside 1..={dim}")]
    DegreeOutOfRange { k: usize, dim: usize },
    #[error("cochain has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },
    #[error("not a coboundary: appending the cochain raises the rank of the coboundary map above {rank}")]
    NotCoboundary {
        rank: usize,
        /// A k-cycle `y` with `⟨ω, y⟩ = 1`.
        witness: Chain<Rat>,
    },
    #[error("not an integral coboundary: {0:?}")]
    NotIntegrallyFillable(IntegralObstruction),
    #[error("cochain is not a cocycle modulo the integers")]
    NotCocycleModZ,
    #[error("cochain does not lift to a rational cocycle")]
    DoesNotLift,
    #[error("linear program failed: {0}")]
    Lp(&'static str),
    #[error("{0}")]
    Tree(#[from] TreeError),
    #[error("internal check failed: {0}")]
    Check(String),
    #[error("complex too large for exhaustive enumeration: {cells} cells in one dimension (cap {cap})")]
    TooLarge { cells: usize, cap: usize },
}

/// Exact optimality certificate for `min ‖α‖∞, δα = ω`: a k-chain `y` with
/// `‖∂y‖₁ ≤ 1` and `⟨ω, y⟩ = ‖α‖∞`. Any other filling `α'` then satisfies
/// `‖α'‖∞ ≥ ⟨α', ∂y⟩ = ⟨ω, y⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate {
    pub y: Chain<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FillingResult<R> {
    pub omega: Cochain<R>,
    pub alpha: Cochain<R>,
    pub norm_inf_alpha: Rat,
    /// `δα − ω` vanishes identically.
    pub residual_zero: bool,
    pub certificate: Option<DualCertificate>,
}

impl DualCertificate {
    /// Checks the certificate against `omega` and the claimed optimum.
    pub fn verify<X: CellComplex + ?Sized>(&self, x: &X, omega: &Cochain<Rat>, optimum: &Rat) -> bool {
        let psi = self.y.boundary(x);
        psi.volume_norm() <= Rat::one() && &omega.pair(&self.y) == optimum
    }
}

/// Instances whose LP tableau has at most this many entries skip the float
/// basis guess.
const EXACT_TABLEAU_LIMIT: usize = 4096;

/// Prepared rational filler for k-cochains on a fixed complex.
#[derive(Clone, Debug)]
pub struct Filler {
    k: usize,
    n_alpha: usize,
    n_omega: usize,
    delta: SparseMatrix<Rat>,
    delta_solver: EchelonSolver<Rat>,
    boundary_solver: EchelonSolver<Rat>,
    /// Basis of the (k-1)-cocycles, one dense vector per element.
    kernel: Vec<Vec<Rat>>,
}

impl Filler {
    pub fn new<X: CellComplex + ?Sized>(x: &X, k: usize) -> Result<Self, FillError> {
        if k == 0 || k > x.dim() {
            return Err(FillError::DegreeOutOfRange { k, dim: x.dim() });
        }
        let delta = coboundary_matrix(x, k - 1).map(Ring::to_rat);
        let delta_solver = EchelonSolver::new(&delta);
        let boundary_solver = EchelonSolver::new(&boundary_matrix_unchecked(x, k).map(Ring::to_rat));
        let n_alpha = x.num_cells(k - 1);
        let dim_z = n_alpha - delta_solver.rank();
        let mut basis = IncrementalBasis::new();
        let mut kernel = Vec::with_capacity(dim_z);
        let mut offer = |v: Vec<Rat>, kernel: &mut Vec<Vec<Rat>>| {
            if kernel.len() < dim_z && basis.insert(v.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero())) {
                kernel.push(v);
            }
        };
        // Coboundaries of (k-2)-cells first: sparse and integral.
        if k >= 2 {
            let prev = coboundary_matrix(x, k - 2).map(Ring::to_rat).transpose();
            for row in prev.rows() {
                let mut v = vec![Rat::zero(); n_alpha];
                for (j, a) in row {
                    v[*j] = a.clone();
                }
                offer(v, &mut kernel);
            }
        }
        if kernel.len() < dim_z {
            let pivots: std::collections::HashSet<usize> = delta_solver.pivot_columns().into_iter().collect();
            let dt = delta.transpose();
            for f in (0..n_alpha).filter(|f| !pivots.contains(f)) {
                let mut rhs = vec![Rat::zero(); delta.nrows()];
                for (i, a) in dt.row(f) {
                    rhs[*i] = -a.clone();
                }
                let mut v = delta_solver.solve(&rhs).expect("column lies in the column space");
                v[f] = Rat::one();
                offer(v, &mut kernel);
                if kernel.len() == dim_z {
                    break;
                }
            }
        }
        assert_eq!(kernel.len(), dim_z, "cocycle basis has the expected dimension");
        Ok(Self { k, n_alpha, n_omega: x.num_cells(k), delta, delta_solver, boundary_solver, kernel })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> &SparseMatrix<Rat> {
        &self.delta
    }

    fn check_shape(&self, omega: &Cochain<Rat>) -> Result<(), FillError> {
        if omega.k != self.k || omega.len() != self.n_omega {
            return Err(FillError::Shape { expected: self.n_omega, got: omega.len() });
        }
        Ok(())
    }

    /// Some `α` with `δα = ω`, or the rank certificate.
    pub fn particular(&self, omega: &Cochain<Rat>) -> Result<Vec<Rat>, FillError> {
        self.check_shape(omega)?;
        match self.delta_solver.solve(&omega.values) {
            Ok(a) => Ok(a),
            Err(_) => {
                let aug = self.delta.transpose().vstack(&SparseMatrix::from_triplets(
                    1,
                    self.n_omega,
                    omega.values.iter().cloned().enumerate().map(|(j, v)| (0, j, v)),
                ));
                let mut e = vec![Rat::zero(); aug.nrows()];
                e[aug.nrows() - 1] = Rat::one();
                let y = EchelonSolver::new(&aug).solve(&e).map_err(|_| FillError::Check("rank witness".into()))?;
                Err(FillError::NotCoboundary { rank: self.delta_solver.rank(), witness: Chain::new(self.k, y) })
            }
        }
    }

    /// Minimizes `‖α‖∞` subject to `δα = ω`, exactly, with a dual certificate.
    pub fn fill(&self, omega: &Cochain<Rat>) -> Result<FillingResult<Rat>, FillError> {
        let alpha_p = self.particular(omega)?;
        if omega.is_zero() {
            let alpha = Cochain::zero(self.k - 1, self.n_alpha);
            return Ok(FillingResult {
                omega: omega.clone(),
                alpha,
                norm_inf_alpha: Rat::zero(),
                residual_zero: true,
                certificate: Some(DualCertificate { y: Chain::zero(self.k, self.n_omega) }),
            });
        }
        let (alpha, t, psi) = self.solve_lp(&alpha_p)?;
        let alpha = Cochain::new(self.k - 1, alpha);
        let residual_zero =
            self.delta.mul_vec(&alpha.values).map_err(|e| FillError::Check(e.to_string()))? == omega.values;
        if !residual_zero {
            return Err(FillError::Check("residual of the optimal cochain".into()));
        }
        let norm = alpha.norm_inf();
        if norm != t {
            return Err(FillError::Check("primal and dual objectives differ".into()));
        }
        let y =
            self.boundary_solver.solve(&psi).map_err(|_| FillError::Check("dual chain is not a boundary".into()))?;
        let y = Chain::new(self.k, y);
        if omega.pair(&y) != norm {
            return Err(FillError::Check("certificate pairing".into()));
        }
        Ok(FillingResult {
            omega: omega.clone(),
            alpha,
            norm_inf_alpha: norm,
            residual_zero,
            certificate: Some(DualCertificate { y }),
        })
    }

    /// Dual program: maximize `Σ s·λ_{e,s}·α_p(e)` over `λ ≥ 0` with
    /// `Σ λ = 1` and `Kᵀ(λ⁺ − λ⁻) = 0`. Its simplex multipliers are `(−φ, t)`
    /// with `α = α_p + Kφ` optimal and `t = ‖α‖∞`.
    fn solve_lp(&self, alpha_p: &[Rat]) -> Result<(Vec<Rat>, Rat, Vec<Rat>), FillError> {
        let r = self.kernel.len();
        let e = self.n_alpha;
        let column = |j: usize| -> (usize, Rat) { (j % e, if j < e { Rat::one() } else { -Rat::one() }) };
        let cost = |j: usize| -> Rat {
            let (i, s) = column(j);
            s * alpha_p[i].clone()
        };
        let entry = |row: usize, j: usize| -> Rat {
            let (i, s) = column(j);
            if row == r {
                Rat::one()
            } else {
                s * self.kernel[row][i].clone()
            }
        };
        let ncols = 2 * e;
        let guessed = if (r + 1) * ncols > EXACT_TABLEAU_LIMIT {
            let a: Vec<Vec<f64>> = (0..=r)
                .map(|row| (0..ncols).map(|j| f64::try_from_rat(&entry(row, j)).unwrap_or(0.0)).collect())
                .collect();
            let mut b = vec![0.0; r + 1];
            b[r] = 1.0;
            let c: Vec<f64> = (0..ncols).map(|j| -f64::try_from_rat(&cost(j)).unwrap_or(0.0)).collect();
            match solve_standard_form(&a, &b, &c) {
                LpOutcome::Optimal(s) if s.rows.len() == r + 1 => self.reconstruct(&s.basis, alpha_p, &entry, &cost),
                _ => None,
            }
        } else {
            None
        };
        if let Some(found) = guessed {
            return Ok(found);
        }
        let a: Vec<Vec<Rat>> = (0..=r).map(|row| (0..ncols).map(|j| entry(row, j)).collect()).collect();
        let mut b = vec![Rat::zero(); r + 1];
        b[r] = Rat::one();
        let c: Vec<Rat> = (0..ncols).map(|j| -cost(j)).collect();
        match solve_standard_form(&a, &b, &c) {
            LpOutcome::Optimal(s) if s.rows.len() == r + 1 => {
                self.reconstruct(&s.basis, alpha_p, &entry, &cost).ok_or(FillError::Lp("exact basis failed to certify"))
            }
            LpOutcome::Optimal(_) => Err(FillError::Lp("redundant constraints in the dual program")),
            LpOutcome::Infeasible => Err(FillError::Lp("dual program infeasible")),
            LpOutcome::Unbounded => Err(FillError::Lp("dual program unbounded")),
            LpOutcome::IterationLimit => Err(FillError::Lp("iteration limit")),
        }
    }

    /// Recomputes primal and dual solutions for a basis exactly. `None`
    /// unless both are feasible, i.e. the basis is optimal.
    fn reconstruct(
        &self,
        basis: &[usize],
        alpha_p: &[Rat],
        entry: &dyn Fn(usize, usize) -> Rat,
        cost: &dyn Fn(usize) -> Rat,
    ) -> Option<(Vec<Rat>, Rat, Vec<Rat>)> {
        let r = self.kernel.len();
        let e = self.n_alpha;
        let bm = SparseMatrix::from_triplets(
            r + 1,
            r + 1,
            basis.iter().enumerate().flat_map(|(p, &j)| (0..=r).map(move |row| (row, p, entry(row, j)))),
        );
        let solver = EchelonSolver::new(&bm);
        if solver.rank() != r + 1 {
            return None;
        }
        let mut rhs = vec![Rat::zero(); r + 1];
        rhs[r] = Rat::one();
        let lambda = solver.solve(&rhs).ok()?;
        if lambda.iter().any(Signed::is_negative) {
            return None;
        }
        let cb: Vec<Rat> = basis.iter().map(|&j| cost(j)).collect();
        let pi = EchelonSolver::new(&bm.transpose()).solve(&cb).ok()?;
        let t = pi[r].clone();
        let mut alpha = alpha_p.to_vec();
        for (i, col) in self.kernel.iter().enumerate() {
            let phi = -pi[i].clone();
            if !phi.is_zero() {
                for (a, v) in alpha.iter_mut().zip(col) {
                    if !v.is_zero() {
                        *a += &phi * v;
                    }
                }
            }
        }
        if alpha.iter().any(|a| a.abs() > t) {
            return None;
        }
        let mut psi = vec![Rat::zero(); e];
        for (&j, l) in basis.iter().zip(&lambda) {
            let (i, s) = (j % e, if j < e { Rat::one() } else { -Rat::one() });
            psi[i] += s * l;
        }
        Some((alpha, t, psi))
    }
}

/// One-shot rational filling.
pub fn linf_fill_rational<X: CellComplex + ?Sized>(
    x: &X,
    omega: &Cochain<Rat>,
) -> Result<FillingResult<Rat>, FillError> {
    Filler::new(x, omega.k)?.fill(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::scalar::rat;

    fn c4() -> SimplicialComplex {
        SimplicialComplex::new(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap()
    }

    #[test]
    fn zero_cochain() {
        let r = linf_fill_rational(&c4(), &Cochain::zero(1, 4)).unwrap();
        assert!(r.alpha.is_zero());
        assert_eq!(r.norm_inf_alpha, rat(0, 1));
    }

    #[test]
    fn cycle_example() {
        let x = c4();
        // ω(01) = 1, ω(12) = 0, ω(23) = -1, ω(03) = 0; canonical order is
        // (0,1), (0,3), (1,2), (2,3).
        let omega = Cochain::new(1, vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(-1, 1)]);
        let r = linf_fill_rational(&x, &omega).unwrap();
        assert_eq!(r.norm_inf_alpha, rat(1, 2));
        assert!(r.certificate.unwrap().verify(&x, &omega, &rat(1, 2)));
    }

    #[test]
    fn non_coboundary_has_witness() {
        let x = c4();
        let omega = Cochain::new(1, vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]);
        let Err(FillError::NotCoboundary { rank, witness }) = linf_fill_rational(&x, &omega) else { panic!() };
        assert_eq!(rank, 3);
        assert!(witness.boundary(&x).is_zero());
        assert_eq!(omega.pair(&witness), rat(1, 1));
    }
}
