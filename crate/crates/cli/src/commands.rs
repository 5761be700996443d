//! Subcommand implementations.

use std::fs;
use std::path::Path;

use coiso_core::complex::{CellComplex, SimplicialComplex};
use coiso_core::filling::{
    coiso_constants_tiny, estimate_cip, integral_fill, linf_fill_rational, CipError, DualCertificate,
};
use coiso_core::homalg::{betti_numbers, boundary_matrix, smith_normal_form, Cochain, CochainJson};
use coiso_core::io::ComplexJson;
use coiso_core::scalar::{fmt_rat, Ring};
use coiso_core::scheduler::{degree_schedule, s2_null_demo, verify_schedule};
use coiso_core::subdivision::{edgewise_subdivide, regularity_report};
use coiso_core::trees::{
    cube_tree, cube_tree_recursive, gnarledness_exact_tiny, gnarledness_upper, greedy_spanning_tree, integral_basis,
    verify_cube_tree, verify_spanning, verify_wrapping, wrapping_tree, TreeError,
};
use coiso_core::{Int, Rat};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::output::{emit, envelope, CliError};
use crate::{
    CipArgs, DualityArgs, FillArgs, RingArg, S2Args, ScheduleArgs, SubdivideArgs, TreeArgs, TreeKind, VerifyArgs,
};

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<(ComplexJson, SimplicialComplex), CliError> {
    let j: ComplexJson = parse(path)?;
    let x = j.to_complex().map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok((j, x))
}

fn cochain<R: Ring>(json: &CochainJson, x: &SimplicialComplex) -> Result<Cochain<R>, CliError> {
    if json.k > x.dim() {
        return Err(CliError::input(format!("cochain degree {} exceeds dimension {}", json.k, x.dim())));
    }
    Cochain::from_json(json, x.num_cells(json.k)).map_err(|e| CliError::input(e.to_string()))
}

fn tree_error(e: TreeError) -> CliError {
    match e {
        TreeError::DegreeOutOfRange { .. } | TreeError::BadCubeParameters { .. } => CliError::input(e.to_string()),
        TreeError::TooLarge { rank, classes } => {
            CliError::domain("too_large", e.to_string(), json!({ "rank": rank, "classes": classes }))
        }
        _ => CliError::domain("invariant", e.to_string(), Value::Null),
    }
}

fn invariant(what: &str) -> CliError {
    CliError::domain("invariant", format!("{what} failed verification"), Value::Null)
}

fn insert(v: &mut Value, key: &str, value: Value) {
    v.as_object_mut().expect("object").insert(key.into(), value);
}

pub fn subdivide(a: &SubdivideArgs, config: &Value) -> Result<(), CliError> {
    let (j, x) = load_complex(&a.input)?;
    let s = edgewise_subdivide(&x, a.l).map_err(|e| CliError::input(e.to_string()))?;
    let base = j.name.or_else(|| a.input.file_stem().map(|s| s.to_string_lossy().into_owned()));
    let name = base.map(|b| format!("{b}-L{}", a.l));
    emit(Some(&a.out), &envelope(config, ComplexJson::from_complex(&s.result, name)))?;
    let mut prov = envelope(config, s.provenance_json());
    insert(&mut prov, "regularity", serde_json::to_value(regularity_report(&s).ok()).expect("serializable"));
    emit(Some(&a.out.with_extension("prov.json")), &prov)
}

#[derive(Deserialize)]
struct GridJson {
    n: usize,
    r: usize,
}

pub fn tree(a: &TreeArgs, config: &Value) -> Result<(), CliError> {
    let k = a.k;
    let (body, ok) = match a.kind {
        TreeKind::Spanning => {
            let (_, x) = load_complex(&a.input)?;
            let t = greedy_spanning_tree(&x, k).map_err(tree_error)?;
            let ok = verify_spanning(&x, &t);
            let basis = integral_basis(&t);
            let exact = if a.exact {
                let e = gnarledness_exact_tiny(&t, a.denom_bound).map_err(tree_error)?;
                json!({
                    "value": e.value.to_string(),
                    "search_bound": e.search_bound.to_string(),
                    "excluded_by_denominator": e.excluded_by_denominator,
                })
            } else {
                Value::Null
            };
            let body = json!({
                "kind": "spanning",
                "k": k,
                "cells": t.cells,
                "verified": ok,
                "relative_rank": t.relative.rank(),
                "relative_basis": t.relative.basis,
                "gnarledness_upper": gnarledness_upper(&t).ok().map(|g| g.to_string()),
                "gnarledness": basis.gnarledness.to_string(),
                "simplex_basis": basis.simplex_basis,
                "gnarledness_exact": exact,
            });
            (body, ok)
        }
        TreeKind::Wrapping => {
            let (_, x) = load_complex(&a.input)?;
            let u = wrapping_tree(&x, k).map_err(tree_error)?;
            let ok = verify_wrapping(&x, &u);
            (json!({ "kind": "wrapping", "k": k, "cells": u.cells, "verified": ok }), ok)
        }
        TreeKind::Cube => {
            let g: GridJson = parse(&a.input)?;
            let t = cube_tree(g.n, k, g.r).map_err(tree_error)?;
            let report = verify_cube_tree(&t);
            let mut direct: Vec<_> = t.cells.iter().map(|&i| t.grid.cells(k)[i].clone()).collect();
            direct.sort();
            let agrees = k == 0 || cube_tree_recursive(g.n, k, g.r).map_err(tree_error)? == direct;
            let ok = report.passed() && agrees;
            let body = json!({
                "kind": "cube",
                "k": k,
                "n": g.n,
                "r": g.r,
                "cells": t.cells,
                "cell_list": direct,
                "recursive_agrees": agrees,
                "report": report,
                "verified": ok,
            });
            (body, ok)
        }
    };
    emit(a.out.as_deref(), &envelope(config, body))?;
    if ok {
        Ok(())
    } else {
        Err(invariant("tree"))
    }
}

fn certificate_json(x: &SimplicialComplex, omega: &Cochain<Rat>, c: &Option<DualCertificate>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => json!({
            "y": c.y.to_json(),
            "pairing": fmt_rat(&omega.pair(&c.y)),
            "boundary_l1": fmt_rat(&c.y.boundary(x).volume_norm()),
        }),
    }
}

pub fn fill(a: &FillArgs, config: &Value) -> Result<(), CliError> {
    let (_, x) = load_complex(&a.complex)?;
    let json: CochainJson = parse(&a.omega)?;
    let out = match a.ring {
        RingArg::Int => {
            let omega = cochain::<Int>(&json, &x)?;
            let r = integral_fill(&x, &omega)?;
            let mut v = envelope(config, r.alpha().to_json());
            let report = json!({
                "norm_inf": fmt_rat(r.norm_inf()),
                "residual_zero": r.result.residual_zero,
                "rational_norm_inf": fmt_rat(&r.rational.norm_inf_alpha),
                "bound": fmt_rat(&r.bound),
                "rounding": fmt_rat(&r.correction.lift.norm_inf()),
                "gnarledness": r.correction.gnarledness.to_string(),
                "free_faces": r.correction.has_free_faces,
                "certificate": certificate_json(&x, &omega.to_rat(), &r.rational.certificate),
            });
            insert(&mut v, "report", report);
            v
        }
        RingArg::Rat => {
            let omega = cochain::<Rat>(&json, &x)?;
            let r = linf_fill_rational(&x, &omega)?;
            let mut v = envelope(config, r.alpha.to_json());
            let report = json!({
                "norm_inf": fmt_rat(&r.norm_inf_alpha),
                "residual_zero": r.residual_zero,
                "certificate": certificate_json(&x, &omega, &r.certificate),
            });
            insert(&mut v, "report", report);
            v
        }
    };
    emit(a.out.as_deref(), &out)
}

pub fn cip_sweep(a: &CipArgs, config: &Value) -> Result<(), CliError> {
    let (_, x) = load_complex(&a.complex)?;
    let table = estimate_cip(&x, a.k, &a.ls, a.trials, a.seed).map_err(|e| match e {
        CipError::Fill(f) => f.into(),
        e => CliError::input(e.to_string()),
    })?;
    let csv_err = |e: csv::Error| CliError::input(format!("cannot write {}: {e}", a.out.display()));
    let mut w = csv::Writer::from_path(&a.out).map_err(csv_err)?;
    w.write_record(["L", "trial", "norm_omega", "norm_alpha", "ratio"]).map_err(csv_err)?;
    for r in &table.rows {
        w.write_record([
            r.l.to_string(),
            r.trial.to_string(),
            fmt_rat(&r.norm_omega),
            fmt_rat(&r.norm_alpha),
            fmt_rat(&r.ratio),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::input(format!("cannot write {}: {e}", a.out.display())))?;
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "L": r.l,
                "trial": r.trial,
                "attempts": r.attempts,
                "norm_rational": fmt_rat(&r.norm_rational),
                "rounding": fmt_rat(&r.rounding),
                "rounding_bound": fmt_rat(&r.rounding_bound),
                "residual_zero": r.residual_zero,
            })
        })
        .collect();
    let meta = json!({ "k": table.k, "seed": table.seed, "summaries": table.summaries, "rows": rows });
    emit(Some(&a.out.with_extension("meta.json")), &envelope(config, meta))
}

pub fn schedule(a: &ScheduleArgs, config: &Value) -> Result<(), CliError> {
    let (_, x) = load_complex(&a.complex)?;
    let omega = cochain::<Int>(&parse(&a.omega)?, &x)?;
    let alpha = cochain::<Int>(&parse(&a.alpha)?, &x)?;
    let layers = match a.layers {
        Some(t) => t,
        None => usize::try_from(alpha.norm_inf().to_integer()).unwrap_or(usize::MAX).max(1),
    };
    let s = degree_schedule(&x, &omega, &alpha, layers)?;
    let body = json!({
        "m": s.prism.m(),
        "layers": layers,
        "prism_cells": s.prism.cell_counts(),
        "report": verify_schedule(&s),
        "beta": s.beta.to_json(),
    });
    emit(a.out.as_deref(), &envelope(config, body))
}

pub fn s2demo(a: &S2Args, config: &Value) -> Result<(), CliError> {
    let r = s2_null_demo(a.l, a.seed)?;
    emit(a.out.as_deref(), &envelope(config, r))
}

pub fn verify(a: &VerifyArgs, config: &Value) -> Result<(), CliError> {
    let (_, x) = load_complex(&a.complex)?;
    let dim = x.dim();
    let d: Vec<_> = (1..=dim).map(|k| boundary_matrix(&x, k).expect("degree in range")).collect();
    let dd_zero = d.windows(2).all(|w| w[0].mul(&w[1]).expect("shape").is_zero());
    let snf: Vec<_> = d.iter().map(smith_normal_form).collect();
    let rank = |k: usize| if k == 0 || k > dim { 0 } else { snf[k - 1].rank() };
    let betti = betti_numbers(&x);
    let betti_snf: Vec<usize> = (0..=dim).map(|k| x.num_cells(k) - rank(k) - rank(k + 1)).collect();
    let torsion: Vec<Vec<String>> = (0..=dim)
        .map(|j| match snf.get(j) {
            Some(s) => {
                s.factors.iter().map(|f| f.magnitude()).filter(|f| f.bits() > 1).map(ToString::to_string).collect()
            }
            None => Vec::new(),
        })
        .collect();
    let mut trees = Vec::new();
    let mut trees_ok = true;
    for k in 1..=dim {
        let t = greedy_spanning_tree(&x, k).map_err(tree_error)?;
        let u = wrapping_tree(&x, k).map_err(tree_error)?;
        let (sv, wv) = (verify_spanning(&x, &t), verify_wrapping(&x, &u));
        trees_ok &= sv && wv;
        trees.push(json!({
            "k": k,
            "spanning_verified": sv,
            "wrapping_verified": wv,
            "gnarledness": integral_basis(&t).gnarledness.to_string(),
        }));
    }
    let expected_ok = a.betti.as_ref().is_none_or(|b| *b == betti);
    let passed = dd_zero && betti == betti_snf && trees_ok && expected_ok;
    let body = json!({
        "cells": x.cell_counts(),
        "boundary_squared_zero": dd_zero,
        "betti": betti,
        "betti_from_smith_form": betti_snf,
        "torsion": torsion,
        "expected_betti": a.betti,
        "trees": trees,
        "passed": passed,
    });
    emit(a.out.as_deref(), &envelope(config, body))?;
    if passed {
        Ok(())
    } else {
        Err(invariant("complex"))
    }
}

pub fn duality(a: &DualityArgs, config: &Value) -> Result<(), CliError> {
    let (_, x) = load_complex(&a.complex)?;
    let c = coiso_constants_tiny(&x, a.k)?;
    emit(a.out.as_deref(), &envelope(config, &c))?;
    if c.equal() {
        Ok(())
    } else {
        Err(CliError::domain(
            "invariant",
            "filling and cofilling constants differ",
            json!({ "cofilling": fmt_rat(&c.cofilling), "filling": fmt_rat(&c.filling) }),
        ))
    }
}
