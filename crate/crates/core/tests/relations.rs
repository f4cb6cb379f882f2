use std::sync::OnceLock;

use qaffine::gauss::CurrentSet;
use qaffine::opgrid::OpGrid;
use qaffine::relations::{
    apply_mutation, builtin_suite, builtin_suites, check_relation, currents_for, evaluate_relation, mutation_probe,
    parse_suite, verify_builtin, verify_suite, verify_transposed_pair, Mode, MutationSite, BUILTIN, THEOREM4,
};
use qaffine::report::Status;
use qaffine::rmatrix::build_r;
use qaffine::{Error, Q};

const CUTOFF: i32 = 4;

fn env() -> &'static CurrentSet<Q> {
    static ENV: OnceLock<CurrentSet<Q>> = OnceLock::new();
    ENV.get_or_init(|| currents_for(&build_r::<Q>(), CUTOFF).unwrap())
}

fn nonzero(g: &OpGrid<Q>) -> usize {
    g.cells().count()
}

#[test]
fn builtin_suites_round_trip_through_the_printer() {
    let mut all: Vec<&str> = BUILTIN.iter().map(|(_, t)| *t).collect();
    all.push(THEOREM4);
    for text in all {
        let s = parse_suite(text).unwrap();
        let printed = s.to_string();
        let again = parse_suite(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", s.name));
        assert_eq!(s, again, "{}", s.name);
        assert_eq!(printed, again.to_string());
    }
}

#[test]
fn builtin_suites_have_their_registered_names() {
    for (name, _) in BUILTIN {
        assert_eq!(builtin_suite(name).unwrap().name, name);
    }
    assert!(builtin_suite("nonexistent").is_err());
    let counts: Vec<usize> = builtin_suites().unwrap().iter().map(|s| s.relations.len()).collect();
    assert_eq!(counts, vec![22, 24, 6, 5, 12, 2, 1, 10]);
}

#[test]
fn empty_text_is_an_empty_suite() {
    let s = parse_suite("# nothing here\n").unwrap();
    assert!(s.relations.is_empty());
}

#[test]
fn unlabeled_relations_are_numbered() {
    let s = parse_suite("k1p(z) k1p(w) = k1p(w) k1p(z);\n[b] Xm(z) = Xm(z);").unwrap();
    assert_eq!(s.relations[0].label, "r1");
    assert_eq!(s.relations[1].label, "b");
}

fn syntax_position(text: &str) -> (usize, usize) {
    match parse_suite(text) {
        Err(Error::Syntax { line, col, .. }) => (line, col),
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn syntax_errors_carry_line_and_column() {
    assert_eq!(syntax_position("[a] k1p(z) = k1p(z)"), (1, 20));
    assert_eq!(syntax_position("[a] k1p(z) = k1p(z);\n[b] k1p(z) = = k1p(z);"), (2, 14));
    assert_eq!(syntax_position("[a] k1p(x) = 0;"), (1, 9));
    let (line, _) = syntax_position("[a] 0 = 0;\n[a] 0 = 0;");
    assert_eq!(line, 2, "duplicate label");
    let (line, _) = syntax_position("[a] delta(z/w) delta(z/w) k1p(z) = 0;");
    assert_eq!(line, 1, "two deltas in one term");
}

#[test]
fn unknown_currents_are_reported_at_binding() {
    let s = parse_suite("[a] k9p(z) = k1p(z);").unwrap();
    match evaluate_relation(&s.relations[0], env(), (-CUTOFF, CUTOFF)) {
        Err(Error::UnknownCurrent(name)) => assert!(name.contains("k9p")),
        other => panic!("expected UnknownCurrent, got {:?}", other.map(|e| e.mode)),
    }
    let rep = check_relation("t", &s.relations[0], env(), CUTOFF);
    assert_eq!(rep.status, Status::Error);
}

#[test]
fn every_builtin_relation_holds() {
    let reports = verify_builtin(&build_r::<Q>(), CUTOFF, None).unwrap();
    assert_eq!(reports.len(), 83);
    for r in &reports {
        assert_eq!(r.status, Status::Pass, "{}/{}: {:?} {:?}", r.suite, r.relation, r.notes, r.failing_cells);
        assert!(r.cells_checked > 0, "{}/{}", r.suite, r.relation);
    }
}

#[test]
fn only_selects_a_single_suite() {
    let reports = verify_builtin(&build_r::<Q>(), CUTOFF, Some("x+x-")).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].relation, "XmXp");
}

#[test]
fn transposed_pair_agrees() {
    let s = builtin_suite("x1-x2").unwrap();
    let rep = verify_transposed_pair(&s, env(), CUTOFF);
    assert_eq!(rep.status, Status::Pass, "{:?}", rep.notes);
}

#[test]
fn exchange_relations_are_checked_with_cleared_denominators() {
    for name in ["x+x+x-x-", "x++x--"] {
        for r in verify_suite(&builtin_suite(name).unwrap(), env(), CUTOFF) {
            assert!(r.notes.iter().any(|n| n == "denominators cleared"), "{}: {:?}", r.relation, r.notes);
        }
    }
    let s = builtin_suite("theorem3").unwrap();
    let ev = evaluate_relation(s.relation("phiXm").unwrap(), env(), (-CUTOFF, CUTOFF)).unwrap();
    assert_eq!(ev.mode, Mode::Direct);
    assert!(ev.notes.iter().any(|n| n.contains("powers of w/z")), "{:?}", ev.notes);
}

#[test]
fn cross_ratio_relation_is_present_and_holds() {
    let s = builtin_suite("theorem3").unwrap();
    let rel = s.relation("phipsi").unwrap();
    let rep = check_relation(&s.name, rel, env(), CUTOFF);
    assert_eq!(rep.status, Status::Pass);
}

/// With the delta terms written as `δ(w/z q^c) ψ − δ(w/z q^{-c}) φ` the
/// residual is exactly twice the left-hand side: the two sides differ by
/// a sign.
#[test]
fn literal_delta_signs_fail_with_residual_twice_the_lhs() {
    let lit = parse_suite(
        "[lit] Xp(z) Xm(w) + Xm(w) Xp(z) = 1/(q - q^-1) * delta(w/z*q^c) psi(w_+) \
         - 1/(q - q^-1) * delta(w/z*q^(-c)) phi(z_+);",
    )
    .unwrap();
    let ev = evaluate_relation(&lit.relations[0], env(), (-CUTOFF, CUTOFF)).unwrap();
    assert!(nonzero(&ev.residual) > 0);
    let twice = ev.lhs.add(&ev.lhs).unwrap();
    assert_eq!(nonzero(&ev.residual.sub(&twice).unwrap()), 0);
    let rep = check_relation("lit", &lit.relations[0], env(), CUTOFF);
    assert_eq!(rep.status, Status::Fail);
    assert!(!rep.failing_cells.is_empty());
}

#[test]
fn corrupted_normalization_fails() {
    let text = BUILTIN.iter().find(|(n, _)| *n == "x1-x2").unwrap().1;
    let bad = text.replacen("(q - q^-1)", "(q + q^-1)", 1);
    assert_ne!(bad, text);
    let s = parse_suite(&bad).unwrap();
    let reports = verify_suite(&s, env(), CUTOFF);
    assert_eq!(reports[0].relation, "x1-x1+");
    assert_eq!(reports[0].status, Status::Fail);
    assert!(reports[1..].iter().all(|r| r.status == Status::Pass));
}

#[test]
fn flipping_a_term_sign_is_detected() {
    let s = builtin_suite("x+x-").unwrap();
    let (mutated, what, index) = apply_mutation(&s, &MutationSite::TermSign { relation: 0, term: 2 });
    assert_eq!(index, 0);
    assert!(what.contains("sign"), "{what}");
    let rep = check_relation(&mutated.name, &mutated.relations[0], env(), CUTOFF);
    assert_eq!(rep.status, Status::Fail);
}

#[test]
fn mutation_probe_finds_a_detected_mutation_in_every_suite() {
    for s in builtin_suites().unwrap() {
        for seed in [0, 1, 7] {
            let rep = mutation_probe(&s, env(), CUTOFF, seed);
            assert_eq!(rep.status, Status::Pass, "{} seed {seed}: {:?}", s.name, rep.notes);
            assert!(rep.notes.iter().any(|n| n.ends_with("detected")));
        }
    }
}
