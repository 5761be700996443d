#![allow(dead_code)]

use coiso_core::complex::{CellComplex, SimplicialComplex};
use coiso_core::io::complex_from_json;
use coiso_core::Rat;
use num_traits::{One, Signed, Zero};

pub const CORPUS: [&str; 8] = ["c3", "c4", "delta2", "delta3", "s2", "telescope", "rp2", "torus7"];

pub fn corpus(name: &str) -> SimplicialComplex {
    let path = format!("{}/corpus/{name}.json", env!("CARGO_MANIFEST_DIR"));
    complex_from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn r(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Dense coboundary `δ: C^{k-1} → C^k` read off the facet lists.
pub fn dense_delta(x: &SimplicialComplex, k: usize) -> Vec<Vec<Rat>> {
    let mut m = vec![vec![Rat::zero(); x.num_cells(k - 1)]; x.num_cells(k)];
    for (s, row) in m.iter_mut().enumerate() {
        for (t, sign) in x.facets(k, s) {
            row[t] = r(sign.into());
        }
    }
    m
}

/// Unique solution of a square or overdetermined system by plain
/// Gauss-Jordan elimination, `None` if singular or inconsistent.
pub fn solve_unique(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = a.first().map_or(0, Vec::len);
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = Rat::one() / &a[row][col];
        a[row].iter_mut().for_each(|v| *v *= &inv);
        b[row] *= &inv;
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot = a[row].clone();
                for (v, p) in a[i].iter_mut().zip(&pivot) {
                    *v -= &f * p;
                }
                let d = &f * &b[row];
                b[i] -= d;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() < n || b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(b[..n].to_vec())
}

/// `min ‖α‖∞` subject to `Dα = ω` by enumerating the vertices of
/// `{(α, t) : Dα = ω, |α_i| ≤ t}`: each fixes some coordinates to `±t`.
pub fn brute_force_linf(d: &[Vec<Rat>], omega: &[Rat]) -> Option<Rat> {
    let n = d.first().map_or(0, Vec::len);
    let mut best: Option<Rat> = None;
    let mut pattern = vec![0i8; n];
    loop {
        let mut a: Vec<Vec<Rat>> = d.iter().map(|row| row.iter().cloned().chain([Rat::zero()]).collect()).collect();
        let mut b = omega.to_vec();
        for (i, &p) in pattern.iter().enumerate() {
            if p != 0 {
                let mut row = vec![Rat::zero(); n + 1];
                row[i] = Rat::one();
                row[n] = r(-i64::from(p));
                a.push(row);
                b.push(Rat::zero());
            }
        }
        if let Some(sol) = solve_unique(a, b) {
            let t = sol[n].clone();
            if !t.is_negative() && sol[..n].iter().all(|v| v.abs() <= t) && best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            pattern[i] = match pattern[i] {
                0 => 1,
                1 => -1,
                _ => 0,
            };
            if pattern[i] != 0 {
                break;
            }
            i += 1;
        }
    }
}

/// Basis of `{v : Mv = 0}` from the reduced row echelon form.
pub fn nullspace(m: &[Vec<Rat>], n: usize) -> Vec<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = Rat::one() / &a[row][col];
        a[row].iter_mut().for_each(|v| *v *= &inv);
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot = a[row].clone();
                for (v, p) in a[i].iter_mut().zip(&pivot) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}
