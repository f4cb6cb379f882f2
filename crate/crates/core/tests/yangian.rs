use qaffine::relations::{builtin_suite, parse_suite, Expr, THEOREM4};
use qaffine::report::Status;
use qaffine::yangian::{compare_suites, degenerate_compare, degenerate_suite, factor_coeff, theorem4, Factored};
use qaffine::{Error, Q};

fn coeff(text: &str) -> Expr {
    let s = parse_suite(&format!("[a] {text} * Xm(z) = 0;")).unwrap();
    s.relations[0].lhs[0].coeff.clone().unwrap()
}

fn trig(text: &str) -> Factored<Q> {
    factor_coeff(&coeff(text), false).unwrap()
}

fn rational(text: &str) -> Factored<Q> {
    factor_coeff(&coeff(text), true).unwrap()
}

#[test]
fn theorem3_degenerates_to_the_rational_suite() {
    let reports = degenerate_compare(&builtin_suite("theorem3").unwrap(), &theorem4().unwrap()).unwrap();
    assert_eq!(reports.len(), 10);
    for r in &reports {
        assert_eq!(r.status, Status::Pass, "{}: {:?}", r.relation, r.notes);
    }
}

#[test]
fn degenerate_suite_reparses_and_compares_equal_to_itself() {
    let d = degenerate_suite(&builtin_suite("theorem3").unwrap()).unwrap();
    let again = parse_suite(&d.to_string()).unwrap();
    assert!(compare_suites(&d, &again).iter().all(|r| r.passed()));
    assert!(d.to_string().contains("1/(2*h)"));
}

#[test]
fn linear_atoms_map_to_shifted_differences() {
    assert_eq!(trig("(z*q^2 - w)"), rational("(u - v + 2*h)"));
    assert_eq!(trig("(z - w*q)"), rational("(u - v - h)"));
    assert_eq!(trig("(w - z*q)"), rational("(v - u - h)"));
    assert_eq!(trig("(z_+*q^(1/2) - w_-)"), rational("(u_+ - v_- + (1/2)*h)"));
    assert_eq!(trig("q^(1/2)*z/w"), rational("1"));
}

#[test]
fn pure_q_factors_map_to_numbers_or_multiples_of_h() {
    assert_eq!(trig("1/(q - q^-1)"), rational("1/(2*h)"));
    assert_eq!(trig("(q^2 - q^-2)"), rational("4*h"));
    assert_eq!(trig("(q + q^-1)"), rational("2"));
    assert_eq!(trig("(1 + q^(-1/2) - q^(1/2))"), rational("1"));
}

#[test]
fn non_factorable_coefficients_are_rejected() {
    for bad in ["(z + w)", "(z^2 - w)", "(z*q^7 - w)", "(z_+ - z_-*w)"] {
        let e = factor_coeff::<Q>(&coeff(bad), false);
        assert!(matches!(e, Err(Error::NonFactorableCoefficient(_))), "{bad}: {e:?}");
    }
}

#[test]
fn flipping_one_h_sign_fails_exactly_the_cross_ratio() {
    let text = THEOREM4.replacen("(u_+ - v_- - 2*h)*(u_- - v_+ + 2*h)\n", "(u_+ - v_- + 2*h)*(u_- - v_+ + 2*h)\n", 1);
    assert_ne!(text, THEOREM4);
    let reports = degenerate_compare(&builtin_suite("theorem3").unwrap(), &parse_suite(&text).unwrap()).unwrap();
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.relation.as_str()).collect();
    assert_eq!(failed, vec!["phipsi"]);
}

#[test]
fn normalization_and_tags_are_compared() {
    let t3 = builtin_suite("theorem3").unwrap();
    for (from, to) in [("1/(2*h) * delta(u_+", "1/h * delta(u_+"), ("phi(u_+)", "phi(u_-)")] {
        let text = THEOREM4.replacen(from, to, 1);
        assert_ne!(text, THEOREM4, "{from}");
        let reports = degenerate_compare(&t3, &parse_suite(&text).unwrap()).unwrap();
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.relation.as_str()).collect();
        assert_eq!(failed, vec!["XpXm"], "{from}");
    }
}

#[test]
fn missing_relations_fail() {
    let t4 = theorem4().unwrap();
    let mut short = t4.clone();
    short.relations.pop();
    let reports = compare_suites(&short, &t4);
    assert_eq!(reports.iter().filter(|r| !r.passed()).count(), 1);
}
