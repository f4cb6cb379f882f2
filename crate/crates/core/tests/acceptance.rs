//! One line per acceptance criterion, all at cutoff 6 with the built-in
//! R-matrix. Exits with a failure status if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use qaffine::gauss::verify_gauss;
use qaffine::relations::{builtin_suites, currents_for, mutation_probe, verify_builtin};
use qaffine::report::{CheckReport, Status};
use qaffine::rmatrix::{
    build_r, build_r21, find_crossing_params, verify_crossing, verify_initial_condition, verify_r21, verify_unitarity,
    verify_ybe, RMatrix, DEFAULT_SEARCH_BOUND,
};
use qaffine::rs::{build_l, verify_component_random, verify_l_inverse, Sign};
use qaffine::yangian::{degenerate_compare, degenerate_suite, theorem4};
use qaffine::{relations, Result, Q};

const CUTOFF: i32 = 6;
const SEED: u64 = 2026;

type Outcome = Result<(bool, String)>;

fn all_pass(reports: &[CheckReport]) -> (bool, String) {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.status != Status::Pass)
        .map(|r| format!("{}/{}={}", r.suite, r.relation, r.status))
        .collect();
    let cells: usize = reports.iter().map(|r| r.cells_checked).sum();
    if bad.is_empty() {
        (true, format!("{} checks, {cells} cells", reports.len()))
    } else {
        (false, format!("not passing: {}", bad.join(", ")))
    }
}

fn c1(r: &RMatrix<Q>) -> Outcome {
    let rep = verify_ybe(r)?;
    Ok((rep.passed() && rep.cells_checked == 729, format!("{} of 729 cells verified", rep.cells_checked)))
}

fn c2(r: &RMatrix<Q>) -> Outcome {
    let mut reports = vec![verify_unitarity(r)?, verify_initial_condition(r)?];
    reports.extend(verify_r21(r, &build_r21())?);
    Ok(all_pass(&reports))
}

fn c3(r: &RMatrix<Q>) -> Outcome {
    let found = find_crossing_params(r, DEFAULT_SEARCH_BOUND)?;
    let names: Vec<String> = found.iter().map(|p| p.describe()).collect();
    if found.len() != 1 {
        return Ok((false, format!("{} candidates: {}", found.len(), names.join("; "))));
    }
    let (ok, detail) = all_pass(&verify_crossing(r, found[0])?);
    Ok((ok, format!("unique {}; {detail}", names[0])))
}

fn c4(r: &RMatrix<Q>) -> Outcome {
    let reports = qaffine::rs::verify_all(r, CUTOFF);
    let windows = reports
        .iter()
        .filter(|r| r.safe_window.is_some())
        .all(|r| r.safe_window.as_ref().is_some_and(|w| w.cells > 0));
    let (ok, detail) = all_pass(&reports);
    Ok((ok && windows, detail))
}

fn c5(r: &RMatrix<Q>) -> Outcome {
    let mut reports = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let l = build_l(sign, r, (-CUTOFF, CUTOFF))?;
        reports.extend(verify_gauss(&l)?);
        reports.push(verify_l_inverse(&l)?);
    }
    Ok(all_pass(&reports))
}

fn c6(r: &RMatrix<Q>) -> Outcome {
    let reports = verify_builtin(r, CUTOFF, None)?;
    let transposed = reports.iter().any(|r| r.relation.contains("<->") && r.passed());
    let (ok, detail) = all_pass(&reports);
    Ok((ok && transposed, detail))
}

fn c7(r: &RMatrix<Q>) -> Outcome {
    let env = currents_for(r, CUTOFF)?;
    let reports: Vec<CheckReport> = builtin_suites()?.iter().map(|s| mutation_probe(s, &env, CUTOFF, SEED)).collect();
    let (ok, _) = all_pass(&reports);
    let detected: Vec<String> = reports
        .iter()
        .map(|r| format!("{}: {}", r.suite, r.notes.first().map(String::as_str).unwrap_or("-")))
        .collect();
    Ok((ok && reports.len() == relations::BUILTIN.len(), detected.join("; ")))
}

fn c8(_: &RMatrix<Q>) -> Outcome {
    let trig = relations::builtin_suite("theorem3")?;
    let text = degenerate_suite(&trig)?.to_string();
    let reports = degenerate_compare(&trig, &theorem4()?)?;
    let (ok, detail) = all_pass(&reports);
    Ok((ok && text.contains("1/(2*h)") && text.contains("u_+"), detail))
}

fn c9(_: &RMatrix<Q>) -> Outcome {
    let rep = verify_component_random::<Q>(SEED, 100);
    Ok((rep.passed(), format!("100 random instances, {} cells", rep.cells_checked)))
}

fn main() -> ExitCode {
    let r = build_r::<Q>();
    let criteria: [(&str, fn(&RMatrix<Q>) -> Outcome); 9] = [
        ("graded Yang-Baxter equation", c1),
        ("unitarity, R21 and R(z=w) = P", c2),
        ("crossing parameters unique and crossing holds", c3),
        ("RLL relations and consequences", c4),
        ("Gauss round trip and explicit inverses", c5),
        ("built-in current relation suites", c6),
        ("mutation sensitivity", c7),
        ("degeneration to the rational suite", c8),
        ("component form equals theta form", c9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match check(&r) {
            Ok(x) => x,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} - {name} ({detail}) [{:.1}s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
