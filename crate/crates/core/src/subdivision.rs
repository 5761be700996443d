//! Edgewise subdivision.
//!
//! A vertex of the subdivision `X_L` is a point `Σ a_v v / L` with
//! nonnegative integers `a_v` summing to `L`, supported on a simplex of `X`;
//! it is named by its sparse label `[(v, a_v), ...]`. Inside a base simplex
//! with vertices `v_0 < … < v_n`, the cells are the Kuhn simplices of the
//! cumulative coordinates `y_i = a_i + … + a_n` lying in
//! `L ≥ y_1 ≥ … ≥ y_n ≥ 0`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{CellComplex, ComplexError, SimplicialComplex};
use crate::scalar::fmt_rat;
use crate::{Int, Rat};

/// Sparse barycentric label: base vertex ids with positive weights.
pub type Label = Vec<(usize, u32)>;

pub const MAX_DIM: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubdivisionError {
    #[error("subdivision parameter must be at least 1")]
    ZeroL,
    #[error("dimension {0} is not supported (at most 3)")]
    Unsupported(usize),
    #[error("regularity needs vertex coordinates")]
    MissingCoordinates,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug)]
pub struct SubdividedComplex {
    pub base: SimplicialComplex,
    pub l: u32,
    pub result: SimplicialComplex,
    /// `labels[v]` names vertex `v` of `result`.
    pub labels: Vec<Label>,
    /// `provenance[k][i] = (d, j)`: the i-th k-cell of `result` lies in the
    /// interior of the j-th d-simplex of `base`.
    pub provenance: Vec<Vec<(usize, usize)>>,
}

/// Kuhn simplices of the n-simplex at scale `l`, as lists of dense labels
/// `(a_0, …, a_n)` in path order.
pub fn kuhn_cells(n: usize, l: u32) -> Vec<Vec<Vec<u32>>> {
    let to_a = |y: &[u32]| -> Vec<u32> {
        let mut a = Vec::with_capacity(n + 1);
        a.push(l - y.first().copied().unwrap_or(0));
        for i in 0..n {
            a.push(y[i] - y.get(i + 1).copied().unwrap_or(0));
        }
        a
    };
    let valid = |y: &[u32]| y.first().is_none_or(|&y1| y1 <= l) && y.windows(2).all(|w| w[0] >= w[1]);
    let mut out = Vec::new();
    let mut perms = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    let mut z = vec![0u32; n];
    loop {
        if valid(&z) {
            for p in &perms {
                let mut y = z.clone();
                let mut path = vec![y.clone()];
                for &i in p {
                    y[i] += 1;
                    path.push(y.clone());
                }
                if path.iter().all(|y| valid(y)) {
                    out.push(path.iter().map(|y| to_a(y)).collect());
                }
            }
        }
        // Odometer over {0..l}^n.
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if z[i] < l {
                z[i] += 1;
                break;
            }
            z[i] = 0;
            i += 1;
        }
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

pub fn edgewise_subdivide(x: &SimplicialComplex, l: u32) -> Result<SubdividedComplex, SubdivisionError> {
    if l == 0 {
        return Err(SubdivisionError::ZeroL);
    }
    if x.dim() > MAX_DIM {
        return Err(SubdivisionError::Unsupported(x.dim()));
    }
    let base_vertices: Vec<usize> = x.vertices().collect();
    let mut cache: HashMap<usize, Vec<Vec<Vec<u32>>>> = HashMap::new();
    let mut tops: Vec<Vec<Label>> = Vec::new();
    for sigma in x.maximal_simplices() {
        let n = sigma.len() - 1;
        let cells = cache.entry(n).or_insert_with(|| kuhn_cells(n, l));
        for cell in cells.iter() {
            tops.push(
                cell.iter()
                    .map(|a| sigma.iter().zip(a).filter(|(_, &w)| w > 0).map(|(&v, &w)| (v, w)).collect())
                    .collect(),
            );
        }
    }
    let all: BTreeSet<Label> = tops.iter().flatten().cloned().collect();
    let mut labels: Vec<Label> = all.into_iter().collect();
    let key = |lab: &Label| -> Vec<u32> {
        let mut acc = 0;
        let mut it = lab.iter().peekable();
        base_vertices
            .iter()
            .map(|v| {
                if let Some(&&(u, w)) = it.peek() {
                    if u == *v {
                        acc += w;
                        it.next();
                    }
                }
                acc
            })
            .collect()
    };
    labels.sort_by_cached_key(|lab| std::cmp::Reverse(key(lab)));
    let id: HashMap<&Label, usize> = labels.iter().enumerate().map(|(i, lab)| (lab, i)).collect();
    let simplices: Vec<Vec<usize>> = tops.iter().map(|c| c.iter().map(|lab| id[lab]).collect()).collect();
    let mut result = SimplicialComplex::new(&simplices)?;
    if let Some(coords) = x.coords() {
        let lr = Rat::from_integer(Int::from(l));
        let width = coords.values().next().map_or(0, Vec::len);
        let placed = labels
            .iter()
            .enumerate()
            .map(|(i, lab)| {
                let mut p = vec![Rat::zero(); width];
                for &(v, w) in lab {
                    for (pk, ck) in p.iter_mut().zip(&coords[&v]) {
                        *pk += ck * Rat::from_integer(Int::from(w));
                    }
                }
                (i, p.into_iter().map(|c| c / lr.clone()).collect())
            })
            .collect();
        result = result.with_coords(placed)?;
    }
    let provenance = (0..=result.dim())
        .map(|k| {
            result
                .cells(k)
                .iter()
                .map(|s| {
                    let support: BTreeSet<usize> = s.iter().flat_map(|&v| labels[v].iter().map(|p| p.0)).collect();
                    let support: Vec<usize> = support.into_iter().collect();
                    let j = x.index_of(&support).expect("support of a subdivided cell is a base simplex");
                    (support.len() - 1, j)
                })
                .collect()
        })
        .collect();
    Ok(SubdividedComplex { base: x.clone(), l, result, labels, provenance })
}

impl SubdividedComplex {
    /// Barycentric coordinates of a result vertex with respect to the base.
    pub fn barycentric(&self, v: usize) -> BTreeMap<usize, Rat> {
        let l = Int::from(self.l);
        self.labels[v].iter().map(|&(u, w)| (u, Rat::new(Int::from(w), l.clone()))).collect()
    }

    /// Serializable provenance: one entry per result cell.
    pub fn provenance_json(&self) -> ProvenanceJson {
        ProvenanceJson {
            l: self.l,
            labels: self.labels.clone(),
            cells: self
                .provenance
                .iter()
                .enumerate()
                .map(|(k, cs)| {
                    cs.iter()
                        .enumerate()
                        .map(|(i, &(d, j))| ProvenanceEntry {
                            k,
                            cell: self.result.cell(k, i).clone(),
                            base: self.base.cell(d, j).clone(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProvenanceEntry {
    pub k: usize,
    pub cell: Vec<usize>,
    pub base: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProvenanceJson {
    #[serde(rename = "L")]
    pub l: u32,
    pub labels: Vec<Label>,
    pub cells: Vec<Vec<ProvenanceEntry>>,
}

/// Edge lengths are measured in units of the longest base edge and
/// reported squared and multiplied by `L²`, so all values are exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    #[serde(rename = "L")]
    pub l: u32,
    pub edge_length_classes: usize,
    #[serde(serialize_with = "ser_rat")]
    pub min_edge_sq_l2: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub max_edge_sq_l2: Rat,
    /// `(max / min)²`.
    #[serde(serialize_with = "ser_rat")]
    pub ratio_sq: Rat,
    pub congruence_classes: usize,
}

fn ser_rat<S: serde::Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(v))
}

fn dist_sq(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn regularity_report(s: &SubdividedComplex) -> Result<RegularityReport, SubdivisionError> {
    let (Some(bc), Some(rc)) = (s.base.coords(), s.result.coords()) else {
        return Err(SubdivisionError::MissingCoordinates);
    };
    let unit = s
        .base
        .cells(1)
        .iter()
        .map(|e| dist_sq(&bc[&e[0]], &bc[&e[1]]))
        .max()
        .unwrap_or_else(|| Rat::from_integer(1.into()));
    let l2 = Rat::from_integer(Int::from(s.l) * Int::from(s.l));
    let norm = |d: Rat| d * l2.clone() / unit.clone();
    let edges: BTreeSet<Rat> = s.result.cells(1).iter().map(|e| norm(dist_sq(&rc[&e[0]], &rc[&e[1]]))).collect();
    let min = edges.iter().next().cloned().unwrap_or_default();
    let max = edges.iter().next_back().cloned().unwrap_or_default();
    let ratio_sq = if min.is_zero() { Rat::zero() } else { max.clone() / min.clone() };
    let d = s.result.dim();
    let mut perms = Vec::new();
    permutations(&mut (0..=d).collect(), 0, &mut perms);
    let shapes: BTreeSet<Vec<Rat>> = s
        .result
        .cells(d)
        .iter()
        .map(|c| {
            perms
                .iter()
                .map(|p| {
                    let mut flat = Vec::new();
                    for i in 0..=d {
                        for j in i + 1..=d {
                            flat.push(norm(dist_sq(&rc[&c[p[i]]], &rc[&c[p[j]]])));
                        }
                    }
                    flat
                })
                .min_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
                .expect("at least one permutation")
        })
        .collect();
    Ok(RegularityReport {
        l: s.l,
        edge_length_classes: edges.len(),
        min_edge_sq_l2: min,
        max_edge_sq_l2: max,
        ratio_sq,
        congruence_classes: shapes.len(),
    })
}
