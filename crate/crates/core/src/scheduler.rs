//! Obstruction cocycles and layered degree schedules on prisms `X × I`.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{CellComplex, SimplicialComplex};
use crate::filling::{integral_fill, FillError};
use crate::homalg::{boundary_matrix_unchecked, Chain, Cochain, CochainJson, EchelonSolver};
use crate::io::{ser_int, ser_ints};
use crate::sampling::{ternary, trial_rng};
use crate::scalar::Ring;
use crate::subdivision::{edgewise_subdivide, SubdivisionError};
use crate::{Int, Rat};

/// Sampling attempts before a degree sample is declared degenerate.
pub const MAX_DEGREE_ATTEMPTS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScheduleError {
    #[error("cochains do not match: degrees {0} and {1}, lengths {2} and {3}")]
    Mismatch(usize, usize, usize, usize),
    #[error("obstruction cochain is not a cocycle")]
    NotCocycle,
    #[error("the number of layers must be at least 1")]
    ZeroLayers,
    #[error("base complex must be pure of dimension at least 1")]
    NotPure,
    #[error("cochain degree {got} does not match the top dimension {m}")]
    Degree { m: usize, got: usize },
    #[error("δα differs from ω on {cells} cells (first: {first})")]
    Residual { cells: usize, first: usize },
    #[error("schedule fails verification: {0}")]
    Invariant(String),
    #[error("no admissible degree sample after {0} attempts")]
    Sampling(usize),
    #[error(transparent)]
    Fill(#[from] FillError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
}

/// `ω = f − g` for degree cochains of two maps.
pub fn obstruction_cocycle(
    x: &SimplicialComplex,
    f: &Cochain<Int>,
    g: &Cochain<Int>,
) -> Result<Cochain<Int>, ScheduleError> {
    if f.k != g.k || f.len() != g.len() || f.len() != x.num_cells(f.k) {
        return Err(ScheduleError::Mismatch(f.k, g.k, f.len(), g.len()));
    }
    let omega = f.sub(g);
    if f.k < x.dim() && !omega.coboundary(x).is_zero() {
        return Err(ScheduleError::NotCocycle);
    }
    Ok(omega)
}

/// A cell of the prism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PrismCell {
    /// `σ × [i, i+1]`.
    Vertical { cell: usize, layer: usize },
    /// `σ × {i}`.
    Horizontal { cell: usize, level: usize },
}

/// Product cell structure on `X × [0, T]` with T layers. In dimension j
/// the vertical cells `(τ, i)`, `τ` a (j-1)-simplex, come first, ordered by
/// layer then simplex; the horizontal cells `(σ, i)` follow, ordered by
/// level then simplex.
///
/// `∂(σ × [i, i+1]) = ε(σ × {i} − σ × {i+1}) + Σ [σ:τ] τ × [i, i+1]` with
/// `ε = (−1)^{m − dim σ}`, so a top prism has boundary
/// `q × {i} − q × {i+1} + Σ [q:p] p × [i, i+1]`.
#[derive(Clone, Debug)]
pub struct PrismComplex {
    pub base: SimplicialComplex,
    pub layers: usize,
    m: usize,
}

impl PrismComplex {
    pub fn new(base: SimplicialComplex, layers: usize) -> Result<Self, ScheduleError> {
        if layers == 0 {
            return Err(ScheduleError::ZeroLayers);
        }
        let m = base.dim();
        if m == 0 || !base.is_pure() {
            return Err(ScheduleError::NotPure);
        }
        Ok(Self { base, layers, m })
    }

    /// Dimension of the base.
    pub fn m(&self) -> usize {
        self.m
    }

    fn n_vertical(&self, j: usize) -> usize {
        if j == 0 {
            0
        } else {
            self.base.num_cells(j - 1) * self.layers
        }
    }

    pub fn vertical(&self, j: usize, cell: usize, layer: usize) -> usize {
        layer * self.base.num_cells(j - 1) + cell
    }

    pub fn horizontal(&self, j: usize, cell: usize, level: usize) -> usize {
        self.n_vertical(j) + level * self.base.num_cells(j) + cell
    }

    pub fn decode(&self, j: usize, idx: usize) -> PrismCell {
        let nv = self.n_vertical(j);
        if idx < nv {
            let n = self.base.num_cells(j - 1);
            PrismCell::Vertical { cell: idx % n, layer: idx / n }
        } else {
            let n = self.base.num_cells(j);
            PrismCell::Horizontal { cell: (idx - nv) % n, level: (idx - nv) / n }
        }
    }

    pub fn num_vertical(&self, j: usize) -> usize {
        self.n_vertical(j)
    }

    pub fn num_horizontal(&self, j: usize) -> usize {
        self.base.num_cells(j) * (self.layers + 1)
    }
}

impl CellComplex for PrismComplex {
    fn dim(&self) -> usize {
        self.m + 1
    }

    fn num_cells(&self, k: usize) -> usize {
        self.n_vertical(k) + self.num_horizontal(k)
    }

    fn facets(&self, k: usize, idx: usize) -> Vec<(usize, i32)> {
        match self.decode(k, idx) {
            PrismCell::Horizontal { cell, level } => {
                if k == 0 {
                    return Vec::new();
                }
                self.base.facets(k, cell).into_iter().map(|(t, s)| (self.horizontal(k - 1, t, level), s)).collect()
            }
            PrismCell::Vertical { cell, layer } => {
                let d = k - 1;
                let eps = if (self.m - d).is_multiple_of(2) { 1 } else { -1 };
                let mut out = vec![(self.horizontal(d, cell, layer), eps), (self.horizontal(d, cell, layer + 1), -eps)];
                if d > 0 {
                    out.extend(self.base.facets(d, cell).into_iter().map(|(t, s)| (self.vertical(d, t, layer), s)));
                }
                out
            }
        }
    }
}

/// An integer m-cochain `β` on the prism.
#[derive(Clone, Debug)]
pub struct PrismSchedule {
    pub prism: PrismComplex,
    pub omega: Cochain<Int>,
    pub alpha: Cochain<Int>,
    pub beta: Cochain<Int>,
}

impl PrismSchedule {
    pub fn vertical(&self, p: usize, layer: usize) -> &Int {
        &self.beta.values[self.prism.vertical(self.prism.m, p, layer)]
    }

    pub fn horizontal(&self, q: usize, level: usize) -> &Int {
        &self.beta.values[self.prism.horizontal(self.prism.m, q, level)]
    }

    pub fn horizontal_mut(&mut self, q: usize, level: usize) -> &mut Int {
        let i = self.prism.horizontal(self.prism.m, q, level);
        &mut self.beta.values[i]
    }
}

/// `⌊i a / T⌋`.
fn spread(a: &Int, i: usize, t: usize) -> Int {
    (a * Int::from(i)).div_floor(&Int::from(t))
}

/// Builds `β` from `δα = ω` on the top dimension:
/// vertical `(p, i) ↦ ⌊(i+1)α_p/T⌋ − ⌊iα_p/T⌋`, horizontal
/// `(q, i) ↦ −ω(q) + Σ [q:p] ⌊iα_p/T⌋` for `i < T` and 0 at `i = T`.
pub fn degree_schedule(
    x: &SimplicialComplex,
    omega: &Cochain<Int>,
    alpha: &Cochain<Int>,
    layers: usize,
) -> Result<PrismSchedule, ScheduleError> {
    let prism = PrismComplex::new(x.clone(), layers)?;
    let m = prism.m;
    if omega.k != m || omega.len() != x.num_cells(m) {
        return Err(ScheduleError::Degree { m, got: omega.k });
    }
    if alpha.k + 1 != m || alpha.len() != x.num_cells(m - 1) {
        return Err(ScheduleError::Mismatch(alpha.k, omega.k, alpha.len(), omega.len()));
    }
    let d = alpha.coboundary(x);
    let bad: Vec<usize> = (0..omega.len()).filter(|&q| d.values[q] != omega.values[q]).collect();
    if let Some(&first) = bad.first() {
        return Err(ScheduleError::Residual { cells: bad.len(), first });
    }
    let t = layers;
    let mut beta = vec![Int::zero(); prism.num_cells(m)];
    for (p, a) in alpha.values.iter().enumerate() {
        for i in 0..t {
            beta[prism.vertical(m, p, i)] = spread(a, i + 1, t) - spread(a, i, t);
        }
    }
    for q in 0..x.num_cells(m) {
        let faces = x.facets(m, q);
        for i in 0..t {
            let mut v = -omega.values[q].clone();
            for (p, s) in &faces {
                v += Int::from(*s) * spread(&alpha.values[*p], i, t);
            }
            beta[prism.horizontal(m, q, i)] = v;
        }
    }
    let s = PrismSchedule { prism, omega: omega.clone(), alpha: alpha.clone(), beta: Cochain::new(m, beta) };
    let report = verify_schedule(&s);
    if !report.passed() || !report.telescoping || !report.conservation {
        return Err(ScheduleError::Invariant(report.summary()));
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScheduleReport {
    /// Signed sum of `β` over the boundary of every (m+1)-cell vanishes.
    pub closedness: bool,
    /// Offending (m+1)-cells as `(simplex, layer)`.
    pub closedness_failures: Vec<(usize, usize)>,
    /// `β(q × {0}) = −ω(q)`.
    pub bottom_trace: bool,
    pub bottom_failures: Vec<usize>,
    /// `β(q × {T}) = 0`.
    pub top_trace: bool,
    pub top_failures: Vec<usize>,
    /// `‖β‖∞ ≤ ‖ω‖∞ + m + 1`.
    pub norm_bound: bool,
    #[serde(serialize_with = "ser_int")]
    pub norm_beta: Int,
    #[serde(serialize_with = "ser_int")]
    pub bound: Int,
    #[serde(serialize_with = "ser_int")]
    pub max_horizontal: Int,
    #[serde(serialize_with = "ser_int")]
    pub max_vertical: Int,
    /// Every vertical value lies in `{−1, 0, 1}`.
    pub vertical_unit: bool,
    /// `Σ_i β(p × [i, i+1]) = α(p)` for every (m-1)-simplex p.
    pub telescoping: bool,
    /// `Σ_p [q:p] Σ_i β(p × [i, i+1]) = ω(q) = −β(q × {0})`.
    pub conservation: bool,
}

impl ScheduleReport {
    /// Closedness, both traces and the norm bound.
    pub fn passed(&self) -> bool {
        self.closedness && self.bottom_trace && self.top_trace && self.norm_bound
    }

    fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.closedness {
            parts.push(format!("closedness fails on {} cells", self.closedness_failures.len()));
        }
        if !self.bottom_trace {
            parts.push(format!("bottom trace fails on {} cells", self.bottom_failures.len()));
        }
        if !self.top_trace {
            parts.push(format!("top trace fails on {} cells", self.top_failures.len()));
        }
        if !self.norm_bound {
            parts.push(format!("norm {} exceeds {}", self.norm_beta, self.bound));
        }
        if !self.telescoping {
            parts.push("vertical values do not telescope to α".into());
        }
        if !self.conservation {
            parts.push("degree conservation fails".into());
        }
        parts.join("; ")
    }
}

fn max_abs<'a>(v: impl Iterator<Item = &'a Int>) -> Int {
    v.map(Signed::abs).max().unwrap_or_default()
}

pub fn verify_schedule(s: &PrismSchedule) -> ScheduleReport {
    let p = &s.prism;
    let m = p.m;
    let t = p.layers;
    let x = &p.base;
    let beta = &s.beta.values;
    let top = m + 1;
    let closedness_failures: Vec<(usize, usize)> = (0..p.num_cells(top))
        .into_par_iter()
        .filter_map(|c| {
            let sum = p.facets(top, c).into_iter().fold(Int::zero(), |acc, (f, sg)| acc + Int::from(sg) * &beta[f]);
            match (sum.is_zero(), p.decode(top, c)) {
                (false, PrismCell::Vertical { cell, layer }) => Some((cell, layer)),
                _ => None,
            }
        })
        .collect();
    let nq = x.num_cells(m);
    let bottom_failures: Vec<usize> = (0..nq).filter(|&q| *s.horizontal(q, 0) != -s.omega.values[q].clone()).collect();
    let top_failures: Vec<usize> = (0..nq).filter(|&q| !s.horizontal(q, t).is_zero()).collect();
    let max_vertical =
        max_abs((0..x.num_cells(m - 1)).flat_map(|q| (0..t).map(move |i| (q, i))).map(|(q, i)| s.vertical(q, i)));
    let max_horizontal = max_abs((0..nq).flat_map(|q| (0..=t).map(move |i| (q, i))).map(|(q, i)| s.horizontal(q, i)));
    let norm_beta = max_abs(beta.iter());
    let bound = max_abs(s.omega.values.iter()) + Int::from(m + 1);
    let column: Vec<Int> = (0..x.num_cells(m - 1)).map(|q| (0..t).map(|i| s.vertical(q, i).clone()).sum()).collect();
    let telescoping = column == s.alpha.values;
    let conservation = (0..nq).all(|q| {
        let inflow: Int = x.facets(m, q).into_iter().map(|(e, sg)| Int::from(sg) * &column[e]).sum();
        inflow == s.omega.values[q] && -s.horizontal(q, 0).clone() == inflow
    });
    ScheduleReport {
        closedness: closedness_failures.is_empty(),
        closedness_failures,
        bottom_trace: bottom_failures.is_empty(),
        bottom_failures,
        top_trace: top_failures.is_empty(),
        top_failures,
        norm_bound: norm_beta <= bound,
        vertical_unit: max_vertical <= Int::from(1),
        norm_beta,
        bound,
        max_horizontal,
        max_vertical,
        telescoping,
        conservation,
    }
}

/// Signed tube count through one edge column.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TubeCount {
    pub edge: Vec<usize>,
    #[serde(serialize_with = "ser_int")]
    pub tubes: Int,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct S2Report {
    #[serde(rename = "L")]
    pub l: u32,
    pub seed: Option<u64>,
    /// Degree of the map on each 2-simplex, with respect to the orientation
    /// of the sphere.
    #[serde(serialize_with = "ser_ints")]
    pub degrees: Vec<Int>,
    #[serde(serialize_with = "ser_int")]
    pub norm_omega: Int,
    #[serde(serialize_with = "ser_int")]
    pub norm_alpha: Int,
    pub layers: usize,
    #[serde(serialize_with = "ser_int")]
    pub max_horizontal: Int,
    #[serde(serialize_with = "ser_int")]
    pub max_vertical: Int,
    /// The per-cell degree claimed for the sphere construction.
    pub reference_horizontal: u32,
    pub verification: ScheduleReport,
    /// Nonzero signed tube counts, one per edge column `p × [0, 1]`.
    pub tubes: Vec<TubeCount>,
    pub omega: CochainJson,
    pub alpha: CochainJson,
    pub beta: CochainJson,
}

/// The fundamental 2-cycle of a triangulated sphere, `±1` on every
/// triangle, positive on the first.
pub fn fundamental_cycle(x: &SimplicialComplex) -> Option<Chain<Int>> {
    let m = x.dim();
    let d = boundary_matrix_unchecked(x, m).map(Ring::to_rat);
    let solver = EchelonSolver::new(&d);
    if d.ncols() - solver.rank() != 1 {
        return None;
    }
    let pivots: std::collections::BTreeSet<usize> = solver.pivot_columns().into_iter().collect();
    let f = (0..d.ncols()).find(|j| !pivots.contains(j))?;
    let rhs: Vec<Rat> = (0..d.nrows()).map(|i| -d.get(i, f)).collect();
    let mut z = solver.solve(&rhs).ok()?;
    z[f] = Rat::from_integer(1.into());
    let scale = z[0].clone();
    let z: Vec<Int> = z.iter().map(|v| v / &scale).map(|v| Int::try_from_rat(&v)).collect::<Option<_>>()?;
    z.iter().all(|v| v.abs() == Int::from(1)).then(|| Chain::new(m, z))
}

fn s2_complex(l: u32) -> Result<SimplicialComplex, ScheduleError> {
    Ok(edgewise_subdivide(&SimplicialComplex::simplex_boundary(2), l)?.result)
}

/// Null-homotopy schedule for a degree-zero map `S² → S²` given by its
/// degrees on the 2-simplices of the L-fold subdivided tetrahedron boundary.
pub fn s2_null_demo_with_degrees(l: u32, degrees: &[Int]) -> Result<S2Report, ScheduleError> {
    let x = s2_complex(l)?;
    run_demo(&x, l, None, degrees)
}

fn run_demo(x: &SimplicialComplex, l: u32, seed: Option<u64>, degrees: &[Int]) -> Result<S2Report, ScheduleError> {
    let z = fundamental_cycle(x).ok_or(ScheduleError::NotPure)?;
    if degrees.len() != z.len() {
        return Err(ScheduleError::Mismatch(2, 2, degrees.len(), z.len()));
    }
    let omega = Cochain::new(2, z.values.iter().zip(degrees).map(|(a, b)| a * b).collect());
    let fill = integral_fill(x, &omega)?;
    let alpha = fill.result.alpha;
    let norm_alpha = max_abs(alpha.values.iter());
    let layers = usize::try_from(&norm_alpha).unwrap_or(usize::MAX).max(1);
    let s = degree_schedule(x, &omega, &alpha, layers)?;
    let verification = verify_schedule(&s);
    let tubes = alpha
        .values
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(e, a)| TubeCount { edge: x.cell(1, e).clone(), tubes: a.clone() })
        .collect();
    Ok(S2Report {
        l,
        seed,
        degrees: degrees.to_vec(),
        norm_omega: max_abs(omega.values.iter()),
        norm_alpha,
        layers,
        max_horizontal: verification.max_horizontal.clone(),
        max_vertical: verification.max_vertical.clone(),
        reference_horizontal: 3,
        verification,
        tubes,
        omega: omega.to_json(),
        alpha: alpha.to_json(),
        beta: s.beta.to_json(),
    })
}

/// Seeded degrees in `{−1, 0, 1}`, not all zero, summing to zero.
pub fn sample_degrees(n: usize, l: u32, seed: u64) -> Result<Vec<Int>, ScheduleError> {
    let mut rng = trial_rng(seed, l, 0);
    for _ in 0..MAX_DEGREE_ATTEMPTS {
        let d = ternary(&mut rng, n);
        if d.iter().sum::<i64>() == 0 && d.iter().any(|v| *v != 0) {
            return Ok(d.into_iter().map(Int::from).collect());
        }
    }
    Err(ScheduleError::Sampling(MAX_DEGREE_ATTEMPTS))
}

pub fn s2_null_demo(l: u32, seed: u64) -> Result<S2Report, ScheduleError> {
    let x = s2_complex(l)?;
    let degrees = sample_degrees(x.num_cells(2), l, seed)?;
    run_demo(&x, l, Some(seed), &degrees)
}
