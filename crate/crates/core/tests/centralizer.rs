use dwalg::centralizer::*;
use dwalg::diffop::DiffOp;
use dwalg::dwalgebra::{center, decompose};
use dwalg::gegenbauer::generators;
use dwalg::matpoly::{ConstMat, MatPoly};
use dwalg::Error;

fn order_two_span() -> Vec<DiffOp> {
    let g = generators();
    let mut out = vec![DiffOp::identity(2)];
    out.extend(g.all().into_iter().cloned());
    out
}

#[test]
fn order_two_is_spanned_by_generators() {
    let (c1, _) = center();
    for d in [2, 4, 6] {
        let sp = centralizer_truncated(std::slice::from_ref(c1), 2, d).unwrap();
        assert_eq!(sp.dimension, 5, "d = {d}");
        assert_eq!(sp.method, Method::Symbolic);
        assert!(same_span(&sp.basis, &order_two_span()).unwrap());
        for b in &sp.basis {
            assert!(b.commutator(c1).unwrap().is_zero());
            assert_eq!(decompose(b).unwrap().reassemble(), *b);
        }
    }
}

#[test]
fn both_center_generators_give_the_same_space() {
    let (c1, c2) = center();
    let sp = centralizer_truncated(&[c1.clone(), c2.clone()], 2, 4).unwrap();
    assert_eq!(sp.dimension, 5);
}

#[test]
fn identity_commutes_with_constants() {
    let sp = centralizer_truncated(&[DiffOp::identity(2)], 0, 0).unwrap();
    assert_eq!(sp.dimension, 4);
}

#[test]
fn order_four_matches_spanning_set() {
    let (c1, _) = center();
    let oracle = spanning_set(4);
    let expected = rank(&oracle).unwrap();
    let sp = centralizer_truncated(std::slice::from_ref(c1), 4, 4).unwrap();
    assert_eq!(sp.dimension, expected);
    assert!(same_span(&sp.basis, &oracle).unwrap());
    for b in &sp.basis {
        assert!(decompose(b).is_ok());
    }
}

#[test]
fn dimension_is_stable_in_the_degree_bound() {
    let (c1, _) = center();
    let bindings = random_bindings(3, 9);
    let dims: Vec<usize> = [4, 6, 8]
        .iter()
        .map(|&d| {
            centralizer_numeric(std::slice::from_ref(c1), 4, d, &bindings)
                .unwrap()
                .dimension
        })
        .collect();
    assert_eq!(dims, [9, 9, 9]);
}

#[test]
fn guard_triggers_numeric_fallback() {
    let (c1, _) = center();
    let opts = CentralizerOptions {
        max_terms: 1,
        ..Default::default()
    };
    let sp = centralizer_with(std::slice::from_ref(c1), 2, 4, &opts).unwrap();
    assert_eq!(sp.dimension, 5);
    match &sp.method {
        Method::NumericSpecialized { bindings } => assert!(bindings.len() >= 3),
        m => panic!("expected the numeric route, got {m:?}"),
    }
    let strict = CentralizerOptions {
        fallback: false,
        ..opts
    };
    assert!(matches!(
        centralizer_with(std::slice::from_ref(c1), 2, 4, &strict),
        Err(Error::ResourceGuard(_))
    ));
}

#[test]
fn membership_routes_agree() {
    let g = generators();
    let (c1, _) = center();
    let dx = DiffOp::monomial(1, MatPoly::identity(2));
    let x = DiffOp::multiplication(MatPoly::monomial(1, ConstMat::identity(2)));
    for (d, member) in [
        (g.d3.clone(), true),
        (c1.clone(), true),
        (&g.d1 * &g.d4, true),
        (dx, false),
        (x, false),
    ] {
        let m = membership_cross_check(&d, 6).unwrap();
        assert!(m.agree(), "{m:?}");
        assert_eq!(m.member(), Some(member));
    }
}
