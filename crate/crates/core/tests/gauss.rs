use std::collections::BTreeMap;

use qaffine::gauss::{build_currents, gauss_decompose, leading_coefficients, verify_gauss, Current, CurrentSet};
use qaffine::kernel::{parse_ratexpr, Ring};
use qaffine::linalg::Grading;
use qaffine::opgrid::OpSeries;
use qaffine::report::Status;
use qaffine::rmatrix::{build_r, identity_r};
use qaffine::rs::{build_l, Sign};
use qaffine::{Mat, RatFn, Q};

const W: (i32, i32) = (-4, 4);

fn q(text: &str) -> RatFn {
    parse_ratexpr(text).unwrap()
}

fn currents() -> CurrentSet<Q> {
    let r = build_r::<Q>();
    let gp = gauss_decompose(&build_l(Sign::Plus, &r, W).unwrap()).unwrap();
    let gm = gauss_decompose(&build_l(Sign::Minus, &r, W).unwrap()).unwrap();
    build_currents(&gp, &gm).unwrap()
}

/// `Π_k (z − a q^k) · X(z)` on every coefficient that is determined.
fn annihilated(x: &Current<Q>, roots: &[i32]) -> (bool, usize) {
    let mut p: BTreeMap<i32, RatFn> = [(0, RatFn::one())].into();
    for k in roots {
        let mut next: BTreeMap<i32, RatFn> = BTreeMap::new();
        for (e, c) in &p {
            let hi = next.remove(&(e + 1)).unwrap_or_else(RatFn::zero).add(c);
            next.insert(e + 1, hi);
            let lo = next
                .remove(e)
                .unwrap_or_else(RatFn::zero)
                .sub(&c.mul(&q(&format!("a*q^({k})"))));
            next.insert(*e, lo);
        }
        p = next;
    }
    let mut cells = 0;
    for m in W.0..=W.1 {
        let mut acc = Some(Mat::zeros(3, 3));
        for (e, c) in &p {
            acc = match (acc, x.get(m - e)) {
                (Some(a), Some(v)) => Some(a.add(&v.scale(c))),
                _ => None,
            };
        }
        if let Some(a) = acc {
            cells += 1;
            if !a.is_zero_matrix() {
                return (false, cells);
            }
        }
    }
    (true, cells)
}

#[test]
fn round_trip_and_explicit_inverse() {
    let r = build_r::<Q>();
    for sign in Sign::BOTH {
        let l = build_l(sign, &r, W).unwrap();
        let reps = verify_gauss(&l).unwrap();
        assert_eq!(reps.len(), 4);
        for rep in reps {
            assert_eq!(rep.status, Status::Pass, "{}", rep.relation);
        }
    }
}

#[test]
fn identity_decomposes_trivially() {
    let r = identity_r::<Q>(Grading::osp12());
    for sign in Sign::BOTH {
        let g = gauss_decompose(&build_l(sign, &r, W).unwrap()).unwrap();
        for k in &g.k {
            assert_eq!(k.coeffs().count(), 1);
            assert!(k.get(0).unwrap().unwrap().is_identity());
        }
        for s in [&g.e1, &g.e2, &g.e31, &g.f1, &g.f2, &g.f13] {
            assert_eq!(s.coeffs().count(), 0);
        }
    }
    let gp = gauss_decompose(&build_l(Sign::Plus, &r, W).unwrap()).unwrap();
    let gm = gauss_decompose(&build_l(Sign::Minus, &r, W).unwrap()).unwrap();
    let cs = build_currents(&gp, &gm).unwrap();
    for name in ["Xp1", "Xm1", "Xp2", "Xm2", "Xp", "Xm"] {
        assert_eq!(cs.get(name).unwrap().current.coeffs().count(), 0, "{name}");
    }
    // φ = β·1 − 1 and ψ = 1 − β'·1 as constants.
    let phi = &cs.get("phi").unwrap().current;
    assert_eq!(phi.get(0).unwrap(), Mat::identity(3).scale(&q("q^(-1/2) - q^(1/2)")));
    let psi = &cs.get("psi").unwrap().current;
    assert_eq!(psi.get(0).unwrap(), Mat::identity(3).scale(&q("q^(-1/2) - q^(1/2)")));
}

#[test]
fn perturbing_any_factor_breaks_recomposition() {
    let r = build_r::<Q>();
    let l = build_l(Sign::Plus, &r, W).unwrap();
    let g = gauss_decompose(&l).unwrap();
    let bump = OpSeries::monomial(l.series.ratio, 1, Mat::identity(3), W.1);
    for (name, s) in g.named() {
        let mutated = g.with_factor(name, s.add(&bump).unwrap()).unwrap();
        let rec = mutated.recompose().unwrap();
        let (_, failing) = qaffine::gauss::series_diff(&rec, &l.series);
        assert!(!failing.is_empty(), "{name}");
    }
}

#[test]
fn currents_are_delta_supported() {
    let cs = currents();
    for (name, roots) in [("Xm1", [0, -1]), ("Xp1", [0, -1]), ("Xm2", [0, 1]), ("Xp2", [0, 1])] {
        let x = &cs.get(name).unwrap().current;
        assert!(x.coeffs().count() > 0, "{name}");
        let (ok, cells) = annihilated(x, &roots);
        assert!(ok && cells >= 5, "{name}");
        // A single root does not suffice.
        assert!(!annihilated(x, &roots[..1]).0, "{name}");
    }
}

#[test]
fn frozen_current_coefficients() {
    let cs = currents();
    let xm1 = cs.get("Xm1").unwrap().current.get(0).unwrap();
    let mut expect = Mat::zeros(3, 3);
    expect.set(0, 1, q("q^-1 - q"));
    expect.set(1, 2, q("q^(-1/2) - q^(3/2)"));
    assert_eq!(xm1, expect);
    let xp1 = cs.get("Xp1").unwrap().current.get(-1).unwrap();
    let mut expect = Mat::zeros(3, 3);
    expect.set(1, 0, q("(q - q^-1)*a"));
    expect.set(2, 1, q("(q^(-5/2) - q^(-1/2))*a"));
    assert_eq!(xp1, expect);
}

#[test]
fn argument_shift_scales_coefficients() {
    let cs = currents();
    let x = &cs.get("Xm2").unwrap().current;
    let shifted = x.shift(1);
    for m in -3..=3 {
        let expect = x.get(m).unwrap().scale(&q(&format!("q^({m})")));
        assert_eq!(shifted.get(m).unwrap(), expect);
    }
}

#[test]
fn phi_and_psi_are_invertible_series() {
    let cs = currents();
    for name in ["phi", "psi", "phi1", "phi2", "psi1", "psi2", "k1p", "k3m"] {
        let b = cs.get(name).unwrap();
        assert!(b.inverse.is_some(), "{name}");
        assert!(b.current.is_one_sided());
    }
    assert!(!cs.get("Xp").unwrap().current.is_one_sided());
}

#[test]
fn leading_coefficients_cover_nine_factors_per_sign() {
    let r = build_r::<Q>();
    let gs: Vec<_> = Sign::BOTH
        .iter()
        .map(|s| gauss_decompose(&build_l(*s, &r, W).unwrap()).unwrap())
        .collect();
    let lead = leading_coefficients(&gs);
    assert_eq!(lead.len(), 18);
    let k1 = &lead[0];
    assert_eq!((k1.sign.as_str(), k1.factor.as_str(), k1.order), ("+", "k1", 0));
    assert_eq!(k1.entries[0][0], "1");
}
