//! Empirical coisoperimetric ratios under edgewise subdivision.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::{FillError, IntegralFiller};
use crate::complex::{CellComplex, SimplicialComplex};
use crate::homalg::Cochain;
use crate::io::{ser_int, ser_opt_rat};
use crate::sampling::{ternary, trial_rng};
use crate::subdivision::{edgewise_subdivide, SubdivisionError};
use crate::{Int, Rat};

/// Rejection attempts per trial before giving up.
pub const MAX_ATTEMPTS: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CipError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("subdivision failed: {0}")]
    Subdivision(#[from] SubdivisionError),
    #[error("filling failed: {0}")]
    Fill(#[from] FillError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CipRow {
    pub l: u32,
    pub trial: usize,
    pub omega: Cochain<Int>,
    pub norm_omega: Rat,
    pub norm_alpha: Rat,
    pub norm_rational: Rat,
    /// `‖α̃‖∞ / (L ‖ω‖∞)`.
    pub ratio: Rat,
    pub residual_zero: bool,
    /// `‖α̃ − α‖∞` and its bound `k + 1 + G`.
    pub rounding: Rat,
    pub rounding_bound: Rat,
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CipSummary {
    #[serde(rename = "L")]
    pub l: u32,
    pub trials: usize,
    pub failed_trials: Vec<usize>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub max_ratio: Option<Rat>,
    #[serde(serialize_with = "ser_int")]
    pub gnarledness: Int,
    pub cells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CipTable {
    pub k: usize,
    pub seed: u64,
    /// Ordered by `(L, trial)`.
    pub rows: Vec<CipRow>,
    pub summaries: Vec<CipSummary>,
}

impl CipTable {
    pub fn max_ratio(&self, l: u32) -> Option<&Rat> {
        self.summaries.iter().find(|s| s.l == l).and_then(|s| s.max_ratio.as_ref())
    }
}

/// A nonzero integral coboundary with entries in `{-1, 0, 1}`, drawn by
/// rejection from uniform ternary cochains.
fn sample(
    filler: &IntegralFiller,
    k: usize,
    n: usize,
    seed: u64,
    l: u32,
    trial: usize,
) -> Option<(Cochain<Int>, usize)> {
    let mut rng = trial_rng(seed, l, trial);
    for attempt in 1..=MAX_ATTEMPTS {
        let omega = Cochain::new(k, ternary(&mut rng, n).into_iter().map(Int::from).collect());
        if !omega.is_zero() && filler.is_fillable(&omega) {
            return Some((omega, attempt));
        }
    }
    None
}

/// For each L, fills `trials` random integral k-coboundaries on the L-fold
/// edgewise subdivision. Rows depend only on `(seed, L, trial)`.
pub fn estimate_cip(
    x: &SimplicialComplex,
    k: usize,
    ls: &[u32],
    trials: usize,
    seed: u64,
) -> Result<CipTable, CipError> {
    if trials == 0 {
        return Err(CipError::NoTrials);
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for &l in ls {
        let s = edgewise_subdivide(x, l)?;
        let xl = &s.result;
        let filler = IntegralFiller::new(xl, k)?;
        let n = xl.num_cells(k);
        let results: Vec<Result<Option<CipRow>, FillError>> = (0..trials)
            .into_par_iter()
            .map(|trial| {
                let Some((omega, attempts)) = sample(&filler, k, n, seed, l, trial) else { return Ok(None) };
                let r = filler.fill(xl, &omega)?;
                let norm_omega = omega.norm_inf();
                let norm_alpha = r.result.norm_inf_alpha.clone();
                let ratio = &norm_alpha / (&norm_omega * Rat::from_integer(l.into()));
                Ok(Some(CipRow {
                    l,
                    trial,
                    norm_omega,
                    norm_rational: r.rational.norm_inf_alpha.clone(),
                    ratio,
                    residual_zero: r.result.residual_zero,
                    rounding: r.correction.lift.norm_inf(),
                    rounding_bound: Rat::from_integer(Int::from(k + 1) + &r.correction.gnarledness),
                    norm_alpha,
                    omega,
                    attempts,
                }))
            })
            .collect();
        let mut failed = Vec::new();
        let mut max_ratio: Option<Rat> = None;
        for (trial, res) in results.into_iter().enumerate() {
            match res? {
                Some(row) => {
                    if max_ratio.as_ref().is_none_or(|m| row.ratio > *m) {
                        max_ratio = Some(row.ratio.clone());
                    }
                    rows.push(row);
                }
                None => failed.push(trial),
            }
        }
        summaries.push(CipSummary {
            l,
            trials,
            failed_trials: failed,
            max_ratio,
            gnarledness: filler.lifter().gnarledness().clone(),
            cells: (0..=xl.dim()).map(|d| xl.num_cells(d)).collect(),
        });
    }
    Ok(CipTable { k, seed, rows, summaries })
}
