use qaffine::kernel::{expand, parse_ratexpr, Var};
use qaffine::linalg::Grading;
use qaffine::report::Status;
use qaffine::rmatrix::{build_r, identity_r};
use qaffine::rs::{
    build_l, consequence_relations, l_matrix, verify_all, verify_component_form, verify_l_inverse, verify_rll,
    verify_theta_consequences, RllContext, Sign, SignPair,
};
use qaffine::{RatFn, Q};

const W: (i32, i32) = (-3, 3);

fn q(text: &str) -> RatFn {
    parse_ratexpr(text).unwrap()
}

#[test]
fn order_zero_coefficients_are_triangular_with_known_diagonal() {
    let r = build_r::<Q>();
    let lp = build_l(Sign::Plus, &r, W).unwrap();
    let lm = build_l(Sign::Minus, &r, W).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let p0 = lp.entry(i, j).get(0).unwrap().cloned();
            let m0 = lm.entry(i, j).get(0).unwrap().cloned();
            assert_eq!(p0.is_none(), i < j, "L+ block ({i},{j})");
            assert_eq!(m0.is_none(), i > j, "L- block ({i},{j})");
        }
    }
    let diag_p = ["1", "q^-1", "q^-2", "q^-1", "q^-1", "q^-1", "q^-2", "q^-1", "1"];
    let p0 = lp.order0();
    let m0 = lm.order0();
    for (k, d) in diag_p.iter().enumerate() {
        assert_eq!(p0.get(k, k), &q(d));
        assert_eq!(m0.get(k, k), &q(d).inv().unwrap());
    }
    // The z → ∞ limit of the (21, 12) coefficient is 1 - q^-2.
    assert_eq!(p0.get(3, 1), &q("1 - q^-2"));
}

#[test]
fn both_signs_expand_one_rational_matrix() {
    let r = build_r::<Q>();
    let m = l_matrix(&r);
    for sign in Sign::BOTH {
        let l = build_l(sign, &r, W).unwrap();
        for (i, j, e) in m.nonzero() {
            let s = expand(e, sign.ratio(Var::Z), (0, W.1)).unwrap();
            for n in 0..=W.1 {
                let expect = s.get(n).unwrap().cloned().unwrap_or_else(RatFn::zero);
                let got = l.series.get(n).unwrap().map(|c| c.get(i, j).clone()).unwrap_or_else(RatFn::zero);
                assert_eq!(got, expect, "{sign} ({i},{j}) order {n}");
            }
        }
    }
}

#[test]
fn identity_r_gives_identity_l() {
    let r = identity_r::<Q>(Grading::osp12());
    for sign in Sign::BOTH {
        let l = build_l(sign, &r, W).unwrap();
        assert!(l.order0().is_identity());
        assert_eq!(l.series.coeffs().count(), 1);
    }
    let lp = build_l(Sign::Plus, &r, W).unwrap();
    let lm = build_l(Sign::Minus, &r, W).unwrap();
    for rep in verify_theta_consequences(&r, &lp, &lm).unwrap() {
        assert_eq!(rep.status, Status::Pass, "{}", rep.relation);
    }
}

#[test]
fn series_inverse_is_two_sided() {
    let r = build_r::<Q>();
    for sign in Sign::BOTH {
        let l = build_l(sign, &r, W).unwrap();
        assert!(verify_l_inverse(&l).unwrap().passed());
    }
}

#[test]
fn defining_relations_hold() {
    let r = build_r::<Q>();
    let lp = build_l(Sign::Plus, &r, W).unwrap();
    let lm = build_l(Sign::Minus, &r, W).unwrap();
    for pair in SignPair::ALL {
        let rep = verify_rll(pair, &r, &lp, &lm).unwrap();
        assert_eq!(rep.status, Status::Pass, "{}", rep.relation);
        assert!(!rep.safe_window.unwrap().is_empty());
    }
}

#[test]
fn all_consequence_families_hold_with_recorded_direction() {
    let r = build_r::<Q>();
    let lp = build_l(Sign::Plus, &r, W).unwrap();
    let lm = build_l(Sign::Minus, &r, W).unwrap();
    let reps = verify_theta_consequences(&r, &lp, &lm).unwrap();
    assert_eq!(reps.len(), 12);
    for rep in &reps {
        assert_eq!(rep.status, Status::Pass, "{}", rep.relation);
        let dir = if ["llr4", "llr7", "llr10"].contains(&rep.relation.as_str()) {
            "z/w"
        } else {
            "w/z"
        };
        assert!(rep.notes.iter().any(|n| n.ends_with(dir)), "{}: {:?}", rep.relation, rep.notes);
    }
}

#[test]
fn mutated_r_breaks_every_relation() {
    let r = build_r::<Q>().with_negated_entry(1, 3);
    let lp = build_l(Sign::Plus, &r, (-2, 2)).unwrap();
    let lm = build_l(Sign::Minus, &r, (-2, 2)).unwrap();
    let ctx = RllContext::new(&r, &lp, &lm).unwrap();
    for rel in consequence_relations() {
        assert_eq!(ctx.check(&rel).status, Status::Fail, "{}", rel.name);
    }
}

#[test]
fn component_form_matches_theta_form() {
    let r = build_r::<Q>();
    let lp = build_l(Sign::Plus, &r, W).unwrap();
    let lm = build_l(Sign::Minus, &r, W).unwrap();
    assert!(verify_component_form(&r, &lp, &lm, 1).unwrap().passed());
}

#[test]
fn tiny_cutoff_never_passes_vacuously() {
    let r = build_r::<Q>();
    for rep in verify_all(&r, 0) {
        if rep.status == Status::Pass {
            assert!(rep.cells_checked > 0, "{}", rep.relation);
        }
    }
}
