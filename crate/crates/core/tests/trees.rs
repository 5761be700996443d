mod common;

use coiso_core::complex::{CellComplex, SimplicialComplex};
use coiso_core::scalar::int;
use coiso_core::subdivision::edgewise_subdivide;
use coiso_core::trees::{
    cube_tree, cube_tree_recursive, gnarledness_exact_tiny, gnarledness_upper, greedy_spanning_tree, verify_cube_tree,
    wrapping_tree,
};
use common::corpus;

#[test]
fn spanning_tree_sizes() {
    assert_eq!(greedy_spanning_tree(&corpus("c4"), 1).unwrap().cells.len(), 3);
    assert_eq!(greedy_spanning_tree(&corpus("s2"), 2).unwrap().cells.len(), 3);
    assert_eq!(greedy_spanning_tree(&corpus("delta2"), 1).unwrap().cells.len(), 2);
    assert_eq!(wrapping_tree(&corpus("s2"), 2).unwrap().cells.len(), 4);
    assert_eq!(wrapping_tree(&corpus("c4"), 1).unwrap().cells.len(), 4);
    assert_eq!(wrapping_tree(&corpus("delta2"), 1).unwrap().cells.len(), 2);
}

#[test]
fn telescope_is_two_gnarled() {
    let x = corpus("telescope");
    let t = greedy_spanning_tree(&x, 1).unwrap();
    let exact = gnarledness_exact_tiny(&t, 4).unwrap();
    assert_eq!(exact.value, int(2));
    assert!(gnarledness_upper(&t).unwrap() >= exact.value);
}

#[test]
fn sphere_tree_is_one_gnarled() {
    let t = greedy_spanning_tree(&corpus("s2"), 2).unwrap();
    assert_eq!(gnarledness_upper(&t).unwrap(), int(1));
    assert_eq!(gnarledness_exact_tiny(&t, 4).unwrap().value, int(1));
    let t = greedy_spanning_tree(&corpus("delta2"), 1).unwrap();
    assert_eq!(gnarledness_exact_tiny(&t, 4).unwrap().value, int(0));
}

#[test]
fn exact_never_exceeds_upper() {
    for name in common::CORPUS {
        let x = corpus(name);
        for k in 1..=x.dim() {
            let t = greedy_spanning_tree(&x, k).unwrap();
            if let (Ok(e), Ok(u)) = (gnarledness_exact_tiny(&t, 4), gnarledness_upper(&t)) {
                assert!(e.value <= u, "{name} k={k}");
            }
        }
    }
}

#[test]
fn gnarledness_stays_bounded_under_subdivision() {
    let base = SimplicialComplex::simplex_boundary(2);
    let values: Vec<_> = [1, 2, 4]
        .iter()
        .map(|&l| {
            let x = edgewise_subdivide(&base, l).unwrap().result;
            gnarledness_upper(&greedy_spanning_tree(&x, x.dim()).unwrap()).unwrap()
        })
        .collect();
    assert_eq!(values, vec![int(1), int(1), int(1)]);
}

#[test]
fn cube_trees_pass_all_checks() {
    for (n, k, r) in [(2, 1, 3), (3, 1, 2), (3, 2, 2)] {
        let t = cube_tree(n, k, r).unwrap();
        let closed: Vec<_> = t.cells.iter().map(|&i| t.grid.cells(k)[i].clone()).collect();
        assert_eq!(closed, cube_tree_recursive(n, k, r).unwrap());
        let rep = verify_cube_tree(&t);
        assert!(rep.passed(), "{:?}", rep.failures);
        assert!(rep.boxes_checked > 0);
    }
}

#[test]
fn every_supported_cube_tree_verifies() {
    for n in 1..=3 {
        for k in 0..=n {
            for r in 1..=3 {
                let rep = verify_cube_tree(&cube_tree(n, k, r).unwrap());
                assert!(rep.passed(), "n={n} k={k} r={r}: {:?}", rep.failures);
            }
        }
    }
}
