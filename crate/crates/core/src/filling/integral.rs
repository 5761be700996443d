//! Integral filling: rational optimum corrected by a bounded lift.

use num_traits::Zero;

use super::{FillError, Filler, FillingResult, LiftResult, Lifter};
use crate::complex::CellComplex;
use crate::homalg::{coboundary_matrix, Cochain, IntegerSolver};
use crate::scalar::Ring;
use crate::{Int, Rat};

/// Prepared integral filler for integral k-coboundaries on a fixed complex.
#[derive(Clone, Debug)]
pub struct IntegralFiller {
    k: usize,
    rational: Filler,
    integer: IntegerSolver,
    lifter: Lifter,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralFill {
    /// The integral filling `α̃` with `δα̃ = ω`.
    pub result: FillingResult<Int>,
    /// The ℓ∞-optimal rational filling `α`.
    pub rational: FillingResult<Rat>,
    /// `α − α̃`, a rational cocycle.
    pub correction: LiftResult,
    /// `‖α‖∞ + k + 1 + G`.
    pub bound: Rat,
}

impl IntegralFill {
    pub fn alpha(&self) -> &Cochain<Int> {
        &self.result.alpha
    }

    pub fn norm_inf(&self) -> &Rat {
        &self.result.norm_inf_alpha
    }
}

impl IntegralFiller {
    pub fn new<X: CellComplex + ?Sized>(x: &X, k: usize) -> Result<Self, FillError> {
        let rational = Filler::new(x, k)?;
        let integer = IntegerSolver::new(&coboundary_matrix(x, k - 1));
        let lifter = Lifter::new(x, k - 1)?;
        Ok(Self { k, rational, integer, lifter })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lifter(&self) -> &Lifter {
        &self.lifter
    }

    /// Whether `ω` is an integral coboundary.
    pub fn is_fillable(&self, omega: &Cochain<Int>) -> bool {
        matches!(self.integer.solve(&omega.values), Ok(Ok(_)))
    }

    pub fn fill<X: CellComplex + ?Sized>(&self, x: &X, omega: &Cochain<Int>) -> Result<IntegralFill, FillError> {
        self.rational.particular(&omega.to_rat())?;
        self.integer
            .solve(&omega.values)
            .map_err(|_| FillError::Shape { expected: self.integer_len(x), got: omega.len() })?
            .map_err(FillError::NotIntegrallyFillable)?;
        let rational = self.rational.fill(&omega.to_rat())?;
        let correction = self.lifter.lift(x, &rational.alpha)?;
        let alpha: Vec<Int> = rational
            .alpha
            .values
            .iter()
            .zip(&correction.lift.values)
            .map(|(a, z)| Int::try_from_rat(&(a - z)))
            .collect::<Option<_>>()
            .ok_or_else(|| FillError::Check("corrected filling is not integral".into()))?;
        let alpha = Cochain::new(self.k - 1, alpha);
        let residual_zero = alpha.coboundary(x).values == omega.values;
        if !residual_zero {
            return Err(FillError::Check("integral filling has a nonzero residual".into()));
        }
        let norm = alpha.norm_inf();
        let bound = &rational.norm_inf_alpha + Rat::from_integer(Int::from(self.k + 1) + &correction.gnarledness);
        if norm > bound {
            return Err(FillError::Check("integral filling exceeds its bound".into()));
        }
        Ok(IntegralFill {
            result: FillingResult {
                omega: omega.clone(),
                alpha,
                norm_inf_alpha: norm,
                residual_zero,
                certificate: None,
            },
            rational,
            correction,
            bound,
        })
    }

    fn integer_len<X: CellComplex + ?Sized>(&self, x: &X) -> usize {
        x.num_cells(self.k)
    }
}

/// One-shot integral filling.
pub fn integral_fill<X: CellComplex + ?Sized>(x: &X, omega: &Cochain<Int>) -> Result<IntegralFill, FillError> {
    IntegralFiller::new(x, omega.k)?.fill(x, omega)
}

impl FillingResult<Int> {
    /// `‖α‖∞` as an integer.
    pub fn norm_inf_int(&self) -> Int {
        let n = &self.norm_inf_alpha;
        debug_assert!(n.is_integer() || n.is_zero());
        n.to_integer()
    }
}
