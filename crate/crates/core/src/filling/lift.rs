//! Bounded lifting of cocycles modulo ℤ.

use num_traits::Zero;

use super::FillError;
use crate::complex::CellComplex;
use crate::homalg::{coboundary_matrix, Cochain, EchelonSolver, IntegerSolver, SparseMatrix};
use crate::scalar::{frac, Ring};
use crate::trees::{greedy_spanning_tree, integral_basis, wrapping_tree, IntegralBasis, SpanningTree, WrappingTree};
use crate::{Int, Rat};

/// Prepared lifter for j-cochains: a j-spanning tree `T`, a (j-1)-wrapping
/// tree `U` and an integral basis of `H_j(X, T; ℚ)`.
///
/// Rational j-cocycles have the basis `{δe^p : p ∉ U} ∪ {z_b}`, where
/// `z_b(q)` is the b-th coordinate of the class of q. Reducing the
/// coordinates of a cocycle into `[0, 1)` changes it by an integral cocycle
/// and leaves a cocycle of norm at most `j + 1 + G`.
#[derive(Clone, Debug)]
pub struct Lifter {
    j: usize,
    n_cells: usize,
    n_faces: usize,
    pub spanning: SpanningTree,
    pub wrapping: Option<WrappingTree>,
    pub basis: IntegralBasis,
    /// (j-1)-cells outside `U`.
    free_faces: Vec<usize>,
    /// `Mᵀ`, rows indexed by `T`, columns by `free_faces`, entries `[t : p]`.
    tree_solver: EchelonSolver<Rat>,
    /// Chains representing the basis classes, over the j-cells.
    generator_chains: Vec<Vec<(usize, Rat)>>,
    delta: SparseMatrix<Int>,
    integer: IntegerSolver,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftResult {
    pub lift: Cochain<Rat>,
    /// `j + 1 + G`.
    pub bound: Rat,
    pub gnarledness: Int,
    /// False when `H_{j-1}` has no free faces, so the tree part is empty.
    pub has_free_faces: bool,
}

impl Lifter {
    pub fn new<X: CellComplex + ?Sized>(x: &X, j: usize) -> Result<Self, FillError> {
        let spanning = greedy_spanning_tree(x, j)?;
        let wrapping = if j == 0 { None } else { Some(wrapping_tree(x, j - 1)?) };
        let basis = integral_basis(&spanning);
        let n_faces = if j == 0 { 0 } else { x.num_cells(j - 1) };
        let free_faces: Vec<usize> = match &wrapping {
            None => Vec::new(),
            Some(u) => {
                let mut inside = vec![false; n_faces];
                for &c in &u.cells {
                    inside[c] = true;
                }
                (0..n_faces).filter(|&p| !inside[p]).collect()
            }
        };
        let mut col = vec![usize::MAX; n_faces];
        for (i, &p) in free_faces.iter().enumerate() {
            col[p] = i;
        }
        let mt = SparseMatrix::from_triplets(
            spanning.cells.len(),
            free_faces.len(),
            spanning.cells.iter().enumerate().flat_map(|(row, &t)| {
                let col = &col;
                x.facets(j, t)
                    .into_iter()
                    .filter(move |(p, _)| col[*p] != usize::MAX)
                    .map(move |(p, s)| (row, col[p], Rat::from_integer(s.into())))
            }),
        );
        let tree_solver = EchelonSolver::new(&mt);
        if mt.nrows() != mt.ncols() || tree_solver.rank() != mt.nrows() {
            return Err(FillError::Check(format!(
                "tree incidence block is {}x{} of rank {}",
                mt.nrows(),
                mt.ncols(),
                tree_solver.rank()
            )));
        }
        let cells = &spanning.relative.basis;
        let generator_chains = basis
            .generators
            .iter()
            .map(|g| cells.iter().zip(g).filter(|(_, v)| !v.is_zero()).map(|(&c, v)| (c, v.clone())).collect())
            .collect();
        let delta = coboundary_matrix(x, j);
        let integer = IntegerSolver::new(&delta);
        Ok(Self {
            j,
            n_cells: x.num_cells(j),
            n_faces,
            spanning,
            wrapping,
            basis,
            free_faces,
            tree_solver,
            generator_chains,
            delta,
            integer,
        })
    }

    pub fn degree(&self) -> usize {
        self.j
    }

    pub fn gnarledness(&self) -> &Int {
        &self.basis.gnarledness
    }

    /// `j + 1 + G`.
    pub fn bound(&self) -> Rat {
        Rat::from_integer(Int::from(self.j + 1) + &self.basis.gnarledness)
    }

    /// `δ` of the (j-1)-cochain with values `c` on the free faces.
    fn face_coboundary<X: CellComplex + ?Sized>(&self, x: &X, c: &[Rat]) -> Vec<Rat> {
        if self.j == 0 {
            return vec![Rat::zero(); self.n_cells];
        }
        let mut full = Cochain::zero(self.j - 1, self.n_faces);
        for (&p, v) in self.free_faces.iter().zip(c) {
            full.values[p] = v.clone();
        }
        full.coboundary(x).values
    }

    /// A cocycle `z̃ ≡ z (mod ℤ)` with `‖z̃‖∞ ≤ j + 1 + G`.
    pub fn lift<X: CellComplex + ?Sized>(&self, x: &X, z: &Cochain<Rat>) -> Result<LiftResult, FillError> {
        if z.k != self.j || z.len() != self.n_cells {
            return Err(FillError::Shape { expected: self.n_cells, got: z.len() });
        }
        let dz = self.delta.map(Ring::to_rat).mul_vec(&z.values).map_err(|e| FillError::Check(e.to_string()))?;
        let dz: Vec<Int> = dz.iter().map(Int::try_from_rat).collect::<Option<_>>().ok_or(FillError::NotCocycleModZ)?;
        let n = self
            .integer
            .solve(&dz)
            .map_err(|e| FillError::Check(e.to_string()))?
            .map_err(|_| FillError::DoesNotLift)?;
        let z0: Vec<Rat> = z.values.iter().zip(&n).map(|(a, b)| a - Rat::from_integer(b.clone())).collect();
        let on_tree: Vec<Rat> = self.spanning.cells.iter().map(|&t| z0[t].clone()).collect();
        let y = self.tree_solver.solve(&on_tree).map_err(|_| FillError::Check("tree block solve".into()))?;
        let dy = self.face_coboundary(x, &y);
        let w: Vec<Rat> = z0.iter().zip(&dy).map(|(a, b)| a - b).collect();
        let v: Vec<Rat> =
            self.generator_chains.iter().map(|chain| chain.iter().map(|(c, g)| g * &w[*c]).sum()).collect();
        let fy: Vec<Rat> = y.iter().map(frac).collect();
        let fv: Vec<Rat> = v.iter().map(frac).collect();
        let mut lift = self.face_coboundary(x, &fy);
        for (q, coords) in self.basis.coords.iter().enumerate() {
            for (a, f) in coords.iter().zip(&fv) {
                if !a.is_zero() && !f.is_zero() {
                    lift[q] += f * Rat::from_integer(a.clone());
                }
            }
        }
        let lift = Cochain::new(self.j, lift);
        let result = LiftResult {
            bound: self.bound(),
            gnarledness: self.basis.gnarledness.clone(),
            has_free_faces: !self.free_faces.is_empty(),
            lift,
        };
        self.check(x, z, &result)?;
        Ok(result)
    }

    fn check<X: CellComplex + ?Sized>(&self, x: &X, z: &Cochain<Rat>, r: &LiftResult) -> Result<(), FillError> {
        if self.j < x.dim() && !r.lift.coboundary(x).is_zero() {
            return Err(FillError::Check("lift is not a cocycle".into()));
        }
        if r.lift.values.iter().zip(&z.values).any(|(a, b)| !(a - b).is_integer()) {
            return Err(FillError::Check("lift differs from the input by a non-integer".into()));
        }
        if r.lift.norm_inf() > r.bound {
            return Err(FillError::Check("lift exceeds its bound".into()));
        }
        Ok(())
    }
}

/// One-shot lift of the j-cochain `z`.
pub fn bounded_lift<X: CellComplex + ?Sized>(x: &X, z: &Cochain<Rat>) -> Result<LiftResult, FillError> {
    Lifter::new(x, z.k)?.lift(x, z)
}
