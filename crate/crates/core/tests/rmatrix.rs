use qaffine::kernel::{parse_ratexpr, Ring, Var};
use qaffine::linalg::{graded_permutation, Grading, Matrix};
use qaffine::report::Status;
use qaffine::rmatrix::*;
use qaffine::{RatFn, Q};

fn r() -> RMatrix<Q> {
    build_r::<Q>()
}

fn entry(text: &str) -> RatFn {
    parse_ratexpr::<Q>(text).unwrap()
}

#[test]
fn transcribed_entries() {
    let r = r();
    assert_eq!(*r.entries.get(1, 1), entry("q*(z - w)/(z*q^2 - w)"));
    assert_eq!(*r.entries.get(1, 3), entry("w*(q^2 - 1)/(z*q^2 - w)"));
    assert_eq!(*r.entries.get(0, 0), RatFn::one());
    assert_eq!(*r.entries.get(8, 8), RatFn::one());
    assert_eq!(r.entries.nnz(), 19);
}

#[test]
fn initial_condition_entries() {
    // e|_{z=w} = -1 and b|_{z=w} = 1.
    let z = RatFn::var_pow(Var::Z, 1);
    let r = r();
    assert_eq!(r.entries.get(4, 4).substitute(Var::W, &z).unwrap(), RatFn::one().neg());
    assert_eq!(r.entries.get(1, 3).substitute(Var::W, &z).unwrap(), RatFn::one());
    assert!(verify_initial_condition(&r).unwrap().passed());
}

#[test]
fn sparsity_and_scale_invariance() {
    let r = r();
    assert!(verify_sparsity(&r).passed());
    assert!(verify_scale_invariance(&r).passed());
}

#[test]
fn ybe_holds() {
    let rep = verify_ybe(&r()).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.failing_cells);
    assert_eq!(rep.cells_checked, 729);
}

#[test]
fn ybe_identity_and_mutation() {
    assert!(verify_ybe(&identity_r::<Q>(Grading::osp12())).unwrap().passed());
    let bad = r().with_negated_entry(1, 3);
    let rep = verify_ybe(&bad).unwrap();
    assert_eq!(rep.status, Status::Fail);
    assert!(!rep.failing_cells.is_empty());
}

#[test]
fn unitarity_and_r21() {
    let r = r();
    let u = verify_unitarity(&r).unwrap();
    assert!(u.passed(), "{:?}", u.failing_cells);
    assert!(verify_unitarity(&identity_r::<Q>(Grading::osp12())).unwrap().passed());
    for rep in verify_r21(&r, &build_r21()).unwrap() {
        assert!(rep.passed(), "{}: {:?}", rep.relation, rep.failing_cells);
    }
    // R21(z/w) R(w/z) = 1 directly from the display.
    let prod = build_r21::<Q>().entries.mul(&swap_zw(&r.entries));
    assert!(prod.is_identity());
}

#[test]
fn permutation_squares_to_one() {
    let p: Matrix<RatFn> = graded_permutation(&Grading::osp12());
    assert!(p.mul(&p).is_identity());
}

#[test]
fn crossing_search_is_unique() {
    let r = r();
    let found = find_crossing_params(&r, DEFAULT_SEARCH_BOUND).unwrap();
    assert_eq!(found, vec![CrossingParams::from_halves(6, 2)]);
    for rep in verify_crossing(&r, found[0]).unwrap() {
        assert!(rep.passed(), "{}: {:?}", rep.relation, rep.notes);
    }
}

#[test]
fn crossing_identity_r() {
    let id = identity_r::<Q>(Grading::osp12());
    let cross = Crossing::new(&id).unwrap();
    for t2 in -2..=2 {
        let o = cross.check(1, CrossingParams::from_halves(0, t2), SecondLine::Consistent).unwrap();
        assert!(o.strict());
    }
}

#[test]
fn rho_commutation() {
    for t2 in -6..=6 {
        assert!(verify_rho_commutation(&r(), t2).passed());
    }
}

#[test]
fn json_round_trip() {
    let r = r();
    let text = r.to_json().unwrap();
    let back = RMatrix::<Q>::from_json(&text).unwrap();
    assert_eq!(back, r);
    assert!(RMatrix::<Q>::from_json("{\"dim\":3,\"grading\":[0,1],\"entries\":[]}").is_err());
}

#[test]
fn crossing_scalar_closed_form() {
    let cross = Crossing::new(&r()).unwrap();
    let expected: RatFn = parse_ratexpr(
        "(z - q^2)*(z - q^3)^2*(z - q^4)/((z - 1)*(z - q)*(z - q^5)*(z - q^6))",
    )
    .unwrap();
    for leg in [1, 2] {
        let o = cross.check(leg, CrossingParams::from_halves(6, 2), SecondLine::Consistent).unwrap();
        assert_eq!(o.scalar.as_ref(), Some(&expected), "leg {leg}");
        assert!(!o.strict());
    }
    let displayed = cross.check(2, CrossingParams::from_halves(6, 2), SecondLine::AsDisplayed).unwrap();
    assert!(!displayed.projective());
    let (mult, rest) = binomial_factors(&expected);
    assert_eq!(rest, RatFn::one());
    let exps: Vec<(i32, i32)> = mult.into_iter().collect();
    assert_eq!(exps, vec![(0, -1), (2, -1), (4, 1), (6, 2), (8, 1), (10, -1), (12, -1)]);
}

#[test]
fn every_sign_flip_is_detected() {
    let r = r();
    let nonzero: Vec<(usize, usize)> = r.entries.nonzero().map(|(i, j, _)| (i, j)).collect();
    assert_eq!(nonzero.len(), 19);
    for (i, j) in nonzero {
        let bad = r.with_negated_entry(i, j);
        let ybe = verify_ybe(&bad).unwrap().passed();
        let unitarity = verify_unitarity(&bad).unwrap().passed();
        assert!(!(ybe && unitarity), "flip of ({i},{j}) went unnoticed");
    }
}
