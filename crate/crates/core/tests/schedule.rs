use coiso_core::complex::{CellComplex, SimplicialComplex};
use coiso_core::filling::integral_fill;
use coiso_core::homalg::Cochain;
use coiso_core::scheduler::{degree_schedule, s2_null_demo, verify_schedule, PrismComplex};
use coiso_core::subdivision::edgewise_subdivide;
use coiso_core::Int;
use num_traits::Signed;

fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&a| Int::from(a)).collect()
}

/// Two triangles 012 and 123 glued along edge 12.
fn two_triangles() -> SimplicialComplex {
    SimplicialComplex::new(&[vec![0, 1, 2], vec![1, 2, 3]]).unwrap()
}

#[test]
fn glued_triangles_by_hand() {
    let x = two_triangles();
    // Edges in canonical order: 01, 02, 12, 13, 23. α = 1 on edge 12.
    let alpha = Cochain::new(1, ints(&[0, 0, 1, 0, 0]));
    let omega = alpha.coboundary(&x);
    // δe^{12} = [012 : 12] e^{012} + [123 : 12] e^{123} = e^{012} + e^{123}.
    assert_eq!(omega.values, ints(&[1, 1]));
    let s = degree_schedule(&x, &omega, &alpha, 2).unwrap();
    assert_eq!((s.vertical(2, 0), s.vertical(2, 1)), (&Int::from(0), &Int::from(1)));
    // Horizontal: -ω(q) + ⌊i/2⌋ on both triangles.
    for q in 0..2 {
        assert_eq!((0..=2).map(|i| s.horizontal(q, i).clone()).collect::<Vec<_>>(), ints(&[-1, -1, 0]));
    }
    let rep = verify_schedule(&s);
    assert!(rep.passed() && rep.closedness_failures.is_empty());
}

#[test]
fn schedules_reject_wrong_fillings() {
    let x = two_triangles();
    let alpha = Cochain::new(1, ints(&[0, 0, 1, 0, 0]));
    let omega = Cochain::new(2, ints(&[1, -1]));
    assert!(degree_schedule(&x, &omega, &alpha, 2).is_err());
    assert!(degree_schedule(&x, &alpha.coboundary(&x), &alpha, 0).is_err());
}

#[test]
fn prism_of_deeper_layers_is_a_chain_complex() {
    let p = PrismComplex::new(SimplicialComplex::standard_simplex(3), 2).unwrap();
    for k in 1..p.dim() {
        for c in 0..p.num_cells(k + 1) {
            let mut acc = std::collections::BTreeMap::<usize, i32>::new();
            for (f, s) in p.facets(k + 1, c) {
                for (g, t) in p.facets(k, f) {
                    *acc.entry(g).or_default() += s * t;
                }
            }
            assert!(acc.values().all(|v| *v == 0), "k={k} c={c}");
        }
    }
}

#[test]
fn sphere_pipeline_with_integral_fill() {
    let x = edgewise_subdivide(&SimplicialComplex::simplex_boundary(2), 2).unwrap().result;
    let z = coiso_core::scheduler::fundamental_cycle(&x).unwrap();
    let d: Vec<i64> = (0..16).map(|i| [1, -1, 0, 1, -1][i % 5]).collect();
    let shift: i64 = d.iter().sum();
    let mut d = d;
    d[15] -= shift;
    let omega = Cochain::new(2, z.values.iter().zip(&d).map(|(a, b)| a * Int::from(*b)).collect());
    let alpha = integral_fill(&x, &omega).unwrap().result.alpha;
    let t = alpha.values.iter().map(Signed::abs).max().unwrap();
    let s = degree_schedule(&x, &omega, &alpha, usize::try_from(&t).unwrap()).unwrap();
    let rep = verify_schedule(&s);
    assert!(rep.passed() && rep.vertical_unit && rep.telescoping && rep.conservation);
}

#[test]
fn demo_reports_are_reproducible() {
    let a = s2_null_demo(4, 1).unwrap();
    assert_eq!(a, s2_null_demo(4, 1).unwrap());
    assert!(a.verification.passed());
    assert!(a.max_horizontal <= Int::from(4));
    assert_eq!(a.degrees.iter().sum::<Int>(), Int::from(0));
}
