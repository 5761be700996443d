//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use coiso_core::complex::{CellComplex, SimplicialComplex};
use coiso_core::filling::{coiso_constants_tiny, estimate_cip, Lifter};
use coiso_core::homalg::{betti_numbers, boundary_matrix, coboundary_matrix, Cochain, EchelonSolver};
use coiso_core::io::complex_from_json;
use coiso_core::scalar::{fmt_rat, Ring};
use coiso_core::scheduler::{s2_null_demo, PrismComplex};
use coiso_core::subdivision::edgewise_subdivide;
use coiso_core::trees::{
    cube_tree, cube_tree_recursive, gnarledness_exact_tiny, gnarledness_upper, greedy_spanning_tree, verify_cube_tree,
};
use coiso_core::{Int, Rat};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: [&str; 8] = ["c3", "c4", "delta2", "delta3", "s2", "telescope", "rp2", "torus7"];

const SWEEP_LS: [u32; 3] = [2, 4, 8];
const SWEEP_TRIALS: usize = 100;
const SWEEP_SEED: u64 = 7;
const SWEEP_SECONDS_PER_L: u64 = 60;
const RATIO_FACTOR: i64 = 2;
const LIFTS_PER_DEGREE: usize = 50;
const LIFT_SEED: u64 = 11;
const TELESCOPE_GNARLEDNESS: i64 = 2;
const EXACT_DENOM_BOUND: u64 = 4;
const GNARL_SLACK: i64 = 2;
const CUBE_SECONDS: u64 = 10;
const DEMO_RUNS: u64 = 100;
const DEMO_SLACK: i64 = 3;
const REFERENCE_HORIZONTAL: i64 = 3;

fn corpus_dir() -> String {
    format!("{}/../core/corpus", env!("CARGO_MANIFEST_DIR"))
}

fn corpus(name: &str) -> SimplicialComplex {
    complex_from_json(&fs::read_to_string(format!("{}/{name}.json", corpus_dir())).unwrap()).unwrap()
}

fn sphere(l: u32) -> SimplicialComplex {
    edgewise_subdivide(&SimplicialComplex::simplex_boundary(2), l).unwrap().result
}

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, fail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail())
    }
}

fn exactness_and_linearity() -> (Outcome, Outcome) {
    let x = SimplicialComplex::simplex_boundary(2);
    let mut maxima = BTreeMap::new();
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for l in SWEEP_LS {
        let start = Instant::now();
        let table = match estimate_cip(&x, 2, &[l], SWEEP_TRIALS, SWEEP_SEED) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("L={l}: {e}"));
                continue;
            }
        };
        let elapsed = start.elapsed();
        let zero = table.rows.iter().filter(|r| r.residual_zero).count();
        if zero != SWEEP_TRIALS {
            failures.push(format!("L={l}: {zero}/{SWEEP_TRIALS} zero residuals"));
        }
        if elapsed > Duration::from_secs(SWEEP_SECONDS_PER_L) {
            failures.push(format!("L={l}: {:.1} s", elapsed.as_secs_f64()));
        }
        notes.push(format!("L={l} {zero}/{SWEEP_TRIALS} in {:.1} s", elapsed.as_secs_f64()));
        if let Some(m) = table.max_ratio(l) {
            maxima.insert(l, m.clone());
        }
    }
    let exact = if failures.is_empty() { Ok(notes.join(", ")) } else { Err(failures.join("; ")) };
    let linear = match (maxima.get(&2), maxima.get(&8)) {
        (Some(a), Some(b)) => {
            let shown = maxima.iter().map(|(l, m)| format!("L={l}: {}", fmt_rat(m))).collect::<Vec<_>>().join(", ");
            check(b <= &(a * Rat::from_integer(RATIO_FACTOR.into())), format!("max ratio {shown}"), || {
                format!("max ratio {shown} exceeds factor {RATIO_FACTOR}")
            })
        }
        _ => Err("sweep incomplete".into()),
    };
    (exact, linear)
}

fn duality() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, k) in [("c4", 1), ("delta2", 1), ("s2", 2)] {
        let c = coiso_constants_tiny(&corpus(name), k).map_err(|e| format!("{name}: {e}"))?;
        ok &= c.equal();
        notes.push(format!("{name} k={k}: {} vs {}", fmt_rat(&c.cofilling), fmt_rat(&c.filling)));
    }
    check(ok, notes.join(", "), || notes.join(", "))
}

/// Basis of `ker δ^j` over ℚ.
fn cocycle_basis(x: &SimplicialComplex, j: usize) -> Vec<Vec<Rat>> {
    let n = x.num_cells(j);
    let d = coboundary_matrix(x, j).map(Ring::to_rat);
    let solver = EchelonSolver::new(&d);
    let pivots = solver.pivot_columns();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let rhs: Vec<Rat> = (0..d.nrows()).map(|i| -d.get(i, f)).collect();
            let mut v = solver.solve(&rhs).expect("column in span");
            v[f] += Rat::from_integer(1.into());
            v
        })
        .collect()
}

fn bounded_lifting() -> Outcome {
    let mut total = 0;
    let mut violations = Vec::new();
    for name in CORPUS {
        let x = corpus(name);
        for j in 0..=x.dim() {
            let basis = cocycle_basis(&x, j);
            let lifter = Lifter::new(&x, j).map_err(|e| format!("{name} j={j}: {e}"))?;
            let g = gnarledness_upper(&greedy_spanning_tree(&x, j).unwrap()).map_err(|e| e.to_string())?;
            let bound = Rat::from_integer(Int::from(j + 1) + g);
            let mut rng = ChaCha8Rng::seed_from_u64(LIFT_SEED ^ (j as u64) << 8);
            for t in 0..LIFTS_PER_DEGREE {
                let mut z = vec![Rat::zero(); x.num_cells(j)];
                for b in &basis {
                    let c = Rat::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=7).into());
                    z.iter_mut().zip(b).for_each(|(zi, bi)| *zi += &c * bi);
                }
                z.iter_mut().for_each(|zi| *zi += Rat::from_integer(rng.gen_range(-4..=4).into()));
                let z = Cochain::new(j, z);
                total += 1;
                match lifter.lift(&x, &z) {
                    Ok(r) => {
                        let integral = r.lift.values.iter().zip(&z.values).all(|(a, b)| (a - b).is_integer());
                        let closed = j == x.dim() || r.lift.coboundary(&x).is_zero();
                        if r.lift.norm_inf() > bound || !integral || !closed {
                            violations.push(format!("{name} j={j} trial {t}"));
                        }
                    }
                    Err(e) => violations.push(format!("{name} j={j} trial {t}: {e}")),
                }
            }
        }
    }
    check(violations.is_empty(), format!("{total} lifts, zero violations"), || {
        format!("{} violations: {}", violations.len(), violations.join(", "))
    })
}

fn gnarledness() -> Outcome {
    let t = greedy_spanning_tree(&corpus("telescope"), 1).unwrap();
    let exact = gnarledness_exact_tiny(&t, EXACT_DENOM_BOUND).map_err(|e| e.to_string())?.value;
    let mut ok = exact == Int::from(TELESCOPE_GNARLEDNESS);
    let mut notes = vec![format!("telescope exact {exact}")];
    let (x1, x4) = (sphere(1), sphere(4));
    for k in 1..=2 {
        let g1 = gnarledness_upper(&greedy_spanning_tree(&x1, k).unwrap()).map_err(|e| e.to_string())?;
        let g4 = gnarledness_upper(&greedy_spanning_tree(&x4, k).unwrap()).map_err(|e| e.to_string())?;
        ok &= g4 <= &g1 + GNARL_SLACK;
        notes.push(format!("k={k} G_upper L=1: {g1}, L=4: {g4}"));
    }
    check(ok, notes.join(", "), || notes.join(", "))
}

fn cube_trees() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for (n, k, r) in [(2, 1, 3), (3, 1, 2), (3, 2, 2)] {
        let t = cube_tree(n, k, r).map_err(|e| e.to_string())?;
        let closed: Vec<_> = t.cells.iter().map(|&i| t.grid.cells(k)[i].clone()).collect();
        let agrees = cube_tree_recursive(n, k, r).map_err(|e| e.to_string())? == closed;
        let rep = verify_cube_tree(&t);
        ok &= agrees && rep.passed();
        notes.push(format!(
            "({n},{k},{r}) {} cells{}",
            closed.len(),
            if agrees && rep.passed() { "" } else { " FAILED" }
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= start.elapsed() <= Duration::from_secs(CUBE_SECONDS);
    let msg = format!("{} in {secs:.2} s", notes.join(", "));
    check(ok, msg.clone(), || msg)
}

fn schedules() -> Outcome {
    let complexes: BTreeMap<u32, SimplicialComplex> = SWEEP_LS.iter().map(|&l| (l, sphere(l))).collect();
    let mut max_h = Int::zero();
    let mut failures = Vec::new();
    for seed in 0..DEMO_RUNS {
        let l = SWEEP_LS[(seed % 3) as usize];
        let r = match s2_null_demo(l, seed) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("L={l} seed {seed}: {e}"));
                continue;
            }
        };
        let prism = PrismComplex::new(complexes[&l].clone(), r.layers).unwrap();
        let beta = Cochain::<Int>::from_json(&r.beta, prism.num_cells(2)).unwrap();
        let closed = beta.coboundary(&prism).is_zero();
        let norm_beta = beta.values.iter().map(Signed::abs).max().unwrap_or_default();
        let bounded = norm_beta <= &r.norm_omega + DEMO_SLACK;
        let unit = (0..prism.num_vertical(2)).all(|i| beta.values[i].abs() <= Int::from(1));
        if !(closed && bounded && unit && r.verification.passed()) {
            failures.push(format!("L={l} seed {seed}: closed {closed}, bounded {bounded}, unit {unit}"));
        }
        max_h = max_h.max(r.max_horizontal.clone());
    }
    let verdict = if max_h <= Int::from(REFERENCE_HORIZONTAL) { "within" } else { "above" };
    check(
        failures.is_empty(),
        format!("{DEMO_RUNS} runs closed and bounded; max horizontal |β| = {max_h}, {verdict} reference {REFERENCE_HORIZONTAL}"),
        || failures.join("; "),
    )
}

fn homology() -> Outcome {
    let s2 = betti_numbers(&corpus("s2"));
    let c4 = betti_numbers(&corpus("c4"));
    let mut ok = s2 == [1, 0, 1] && c4 == [1, 1];
    for name in CORPUS {
        let x = corpus(name);
        for k in 2..=x.dim() {
            let dd = boundary_matrix(&x, k - 1).unwrap().mul(&boundary_matrix(&x, k).unwrap()).unwrap();
            ok &= dd.is_zero();
        }
    }
    let msg = format!("b(∂Δ³) = {s2:?}, b(C₄) = {c4:?}, ∂∂ = 0 on {} complexes", CORPUS.len());
    check(ok, msg.clone(), || msg)
}

fn run_cli(dir: &Path, threads: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_coiso"))
        .args(args)
        .current_dir(dir)
        .env("COISO_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let runs: Vec<Vec<&str>> = vec![
        vec!["subdivide", "--in", "s2.json", "--L", "2", "--out", "s2L.json"],
        vec!["tree", "--in", "s2L.json", "--k", "2", "--out", "spanning.json"],
        vec!["tree", "--in", "s2L.json", "--k", "1", "--kind", "wrapping", "--out", "wrapping.json"],
        vec!["tree", "--in", "grid.json", "--k", "2", "--kind", "cube", "--out", "cube.json"],
        vec!["fill", "--complex", "s2L.json", "--omega", "w.json", "--ring", "int", "--out", "a.json"],
        vec!["fill", "--complex", "s2L.json", "--omega", "w.json", "--ring", "rat", "--out", "ar.json"],
        vec![
            "cip-sweep",
            "--complex",
            "s2.json",
            "--k",
            "2",
            "--L",
            "2,4",
            "--trials",
            "12",
            "--seed",
            "5",
            "--out",
            "sweep.csv",
        ],
        vec!["schedule", "--complex", "s2L.json", "--omega", "w.json", "--alpha", "a.json", "--out", "sched.json"],
        vec!["s2demo", "--L", "4", "--seed", "3", "--out", "demo.json"],
        vec!["verify", "--complex", "rp2.json", "--out", "verify.json"],
        vec!["duality", "--complex", "c4.json", "--k", "1", "--out", "duality.json"],
        vec!["tree", "--in", "telescope.json", "--k", "1", "--exact"],
    ];
    let mut outputs = Vec::new();
    for threads in ["4", "1"] {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        for name in ["s2", "rp2", "c4", "telescope"] {
            fs::copy(format!("{}/{name}.json", corpus_dir()), dir.path().join(format!("{name}.json"))).unwrap();
        }
        fs::write(dir.path().join("grid.json"), r#"{ "n": 3, "r": 2 }"#).unwrap();
        fs::write(dir.path().join("w.json"), r#"{ "k": 2, "ring": "int", "entries": [[0, "1"], [1, "1"]] }"#).unwrap();
        let mut files = BTreeMap::new();
        for (i, args) in runs.iter().enumerate() {
            files.insert(format!("stdout {i}"), run_cli(dir.path(), threads, args)?);
        }
        for e in fs::read_dir(dir.path()).unwrap() {
            let e = e.unwrap();
            files.insert(e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap());
        }
        outputs.push(files);
    }
    let differing: Vec<&String> =
        outputs[0].iter().filter(|(k, v)| outputs[1].get(*k) != Some(v)).map(|(k, _)| k).collect();
    check(
        differing.is_empty() && outputs[0].len() == outputs[1].len(),
        format!("{} artifacts identical across runs with 4 and 1 threads", outputs[0].len()),
        || format!("differing: {differing:?}"),
    )
}

fn guarded<T>(f: impl FnOnce() -> Result<T, String>) -> Result<T, String> {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    })
}

fn main() {
    let (exact, linear) = guarded(|| Ok(exactness_and_linearity())).unwrap_or_else(|e| (Err(e.clone()), Err(e)));
    let results: Vec<(&str, Outcome)> = vec![
        ("exactness of integral fillings", exact),
        ("coisoperimetric linearity", linear),
        ("filling/cofilling duality", guarded(duality)),
        ("bounded lifting", guarded(bounded_lifting)),
        ("gnarledness", guarded(gnarledness)),
        ("cube trees", guarded(cube_trees)),
        ("schedule bounds", guarded(schedules)),
        ("homology smoke tests", guarded(homology)),
        ("CLI determinism", guarded(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(msg) => println!("criterion {} PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
