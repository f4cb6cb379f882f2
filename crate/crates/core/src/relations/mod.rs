//! The relation DSL, its evaluator and the built-in relation suites.
//!
//! A suite is plain text (see [`parser`] for the grammar), parsed into the
//! [`ast`] and evaluated against the currents of a Gauss decomposition
//! ([`CurrentSet`]). Every relation yields one [`CheckReport`]; failures
//! record the residual cells `(m, n, entry)` that are nonzero.

pub mod ast;
pub mod eval;
pub mod parser;

use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

pub use ast::{Affine, Arg, CurrentRef, Delta, Direction, Exponent, Expr, Relation, SpecVar, Suite, Tag, Term};
pub use eval::{evaluate_relation, Evaluation, Mode};
pub use parser::parse_suite;

use crate::error::{Error, Result};
use crate::gauss::{build_currents, gauss_decompose, CurrentSet};
use crate::kernel::Scalar;
use crate::opgrid::{residual_report, OpGrid};
use crate::report::{CheckReport, FailingCell, Status};
use crate::rmatrix::RMatrix;
use crate::rs::{build_l, Sign};

/// Names and sources of the built-in trigonometric suites, in the fixed
/// reporting order.
pub const BUILTIN: [(&str, &str); 8] = [
    ("k1k2k3", include_str!("suites/k1k2k3.qrs")),
    ("x1k1k3-x2k1k3", include_str!("suites/x1k1k3-x2k1k3.qrs")),
    ("x+x+x-x-", include_str!("suites/xpxpxmxm.qrs")),
    ("x1-x2", include_str!("suites/x1-x2.qrs")),
    ("x+-k1k2k3", include_str!("suites/xpm-k1k2k3.qrs")),
    ("x++x--", include_str!("suites/xppxmm.qrs")),
    ("x+x-", include_str!("suites/xpxm.qrs")),
    ("theorem3", include_str!("suites/theorem3.qrs")),
];

/// Source of the rational (super-Yangian double) counterpart of
/// `theorem3`.
pub const THEOREM4: &str = include_str!("suites/theorem4.qrs");

/// The relation of `x1-x2` whose arguments are exchanged in `x1w-x2z`.
pub const TRANSPOSED_PAIR: (&str, &str) = ("x1-x2+", "x1w-x2z");

/// Parses one built-in suite by name.
pub fn builtin_suite(name: &str) -> Result<Suite> {
    let (_, text) = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Invalid(format!("no built-in suite `{name}`")))?;
    parse_suite(text)
}

/// Parses every built-in suite.
pub fn builtin_suites() -> Result<Vec<Suite>> {
    BUILTIN.iter().map(|(_, t)| parse_suite(t)).collect()
}

/// Builds the currents of the evaluation representation on the index window
/// `[-cutoff, cutoff]`.
pub fn currents_for<C: Scalar>(r: &RMatrix<C>, cutoff: i32) -> Result<CurrentSet<C>> {
    let window = (-cutoff, cutoff);
    let gp = gauss_decompose(&build_l(Sign::Plus, r, window)?)?;
    let gm = gauss_decompose(&build_l(Sign::Minus, r, window)?)?;
    build_currents(&gp, &gm)
}

/// Checks one relation on the box `[-cutoff, cutoff]²`.
pub fn check_relation<C: Scalar>(suite: &str, rel: &Relation, env: &CurrentSet<C>, cutoff: i32) -> CheckReport {
    let start = Instant::now();
    let mut rep = match evaluate_relation(rel, env, (-cutoff, cutoff)) {
        Ok(ev) => {
            let mut rep = residual_report(suite, &rel.label, &ev.residual, env.dim * env.dim);
            if ev.mode == Mode::Cleared {
                rep.notes.push("denominators cleared".into());
            }
            rep.notes.extend(ev.notes);
            rep
        }
        Err(e) => CheckReport::error(suite, &rel.label, &e),
    };
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}

/// Checks every relation of a suite, in source order.
pub fn verify_suite<C: Scalar>(suite: &Suite, env: &CurrentSet<C>, cutoff: i32) -> Vec<CheckReport> {
    suite
        .relations
        .par_iter()
        .map(|rel| check_relation(&suite.name, rel, env, cutoff))
        .collect()
}

/// Where a single-token mutation may be applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MutationSite {
    /// Flip the sign of term `term` of relation `relation`.
    TermSign {
        /// Relation index.
        relation: usize,
        /// Term index over `lhs ++ rhs`.
        term: usize,
    },
    /// Flip the `k`-th `+`/`-` inside the coefficient of a term.
    CoeffSign {
        /// Relation index.
        relation: usize,
        /// Term index over `lhs ++ rhs`.
        term: usize,
        /// Occurrence index in pre-order.
        k: usize,
    },
    /// Raise the `k`-th power of `q` inside the coefficient of a term by one.
    QPower {
        /// Relation index.
        relation: usize,
        /// Term index over `lhs ++ rhs`.
        term: usize,
        /// Occurrence index in pre-order.
        k: usize,
    },
}

fn count_nodes(e: &Expr, pred: &dyn Fn(&Expr) -> bool) -> usize {
    let here = usize::from(pred(e));
    here + match e {
        Expr::Neg(x) | Expr::Pow(x, _) => count_nodes(x, pred),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            count_nodes(a, pred) + count_nodes(b, pred)
        }
        _ => 0,
    }
}

fn is_additive(e: &Expr) -> bool {
    matches!(e, Expr::Add(..) | Expr::Sub(..))
}

/// `q` atoms and `q^e` powers (a `q` under a power counts once).
fn is_q_site(e: &Expr) -> bool {
    matches!(e, Expr::Q) || matches!(e, Expr::Pow(b, _) if **b == Expr::Q)
}

fn q_sites(e: &Expr) -> usize {
    match e {
        Expr::Pow(b, _) if **b == Expr::Q => 1,
        Expr::Q => 1,
        Expr::Neg(x) | Expr::Pow(x, _) => q_sites(x),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => q_sites(a) + q_sites(b),
        _ => 0,
    }
}

fn rewrite_nth(e: &mut Expr, k: &mut usize, pred: &dyn Fn(&Expr) -> bool, f: &dyn Fn(&mut Expr)) -> bool {
    if pred(e) {
        if *k == 0 {
            f(e);
            return true;
        }
        *k -= 1;
        if is_q_site(e) {
            return false;
        }
    }
    match e {
        Expr::Neg(x) | Expr::Pow(x, _) => rewrite_nth(x, k, pred, f),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            rewrite_nth(a, k, pred, f) || rewrite_nth(b, k, pred, f)
        }
        _ => false,
    }
}

fn term_mut(s: &mut Suite, relation: usize, term: usize) -> &mut Term {
    let rel = &mut s.relations[relation];
    let n = rel.lhs.len();
    if term < n {
        &mut rel.lhs[term]
    } else {
        &mut rel.rhs[term - n]
    }
}

/// Every mutation site of a suite, in a fixed order.
pub fn mutation_sites(s: &Suite) -> Vec<MutationSite> {
    let mut out = Vec::new();
    for (ri, rel) in s.relations.iter().enumerate() {
        for (ti, (_, t)) in rel.terms().enumerate() {
            out.push(MutationSite::TermSign { relation: ri, term: ti });
            if let Some(c) = &t.coeff {
                for k in 0..count_nodes(c, &is_additive) {
                    out.push(MutationSite::CoeffSign { relation: ri, term: ti, k });
                }
                for k in 0..q_sites(c) {
                    out.push(MutationSite::QPower { relation: ri, term: ti, k });
                }
            }
        }
    }
    out
}

/// Applies one mutation, returning the mutated suite, a description and the
/// index of the relation it touched.
pub fn apply_mutation(s: &Suite, site: &MutationSite) -> (Suite, String, usize) {
    let mut out = s.clone();
    let (relation, label) = match site {
        MutationSite::TermSign { relation, term } => {
            let t = term_mut(&mut out, *relation, *term);
            t.negative = !t.negative;
            (*relation, "term sign")
        }
        MutationSite::CoeffSign { relation, term, k } => {
            let t = term_mut(&mut out, *relation, *term);
            if let Some(c) = t.coeff.as_mut() {
                let mut k = *k;
                rewrite_nth(c, &mut k, &is_additive, &|e| {
                    let taken = std::mem::replace(e, Expr::Num(0));
                    *e = match taken {
                        Expr::Add(a, b) => Expr::Sub(a, b),
                        Expr::Sub(a, b) => Expr::Add(a, b),
                        other => other,
                    };
                });
            }
            (*relation, "coefficient sign")
        }
        MutationSite::QPower { relation, term, k } => {
            let t = term_mut(&mut out, *relation, *term);
            if let Some(c) = t.coeff.as_mut() {
                let mut k = *k;
                rewrite_nth(c, &mut k, &is_q_site, &|e| {
                    let taken = std::mem::replace(e, Expr::Num(0));
                    *e = match taken {
                        Expr::Q => Expr::pow(Expr::Q, Exponent::int(2)),
                        Expr::Pow(b, x) => Expr::Pow(
                            b,
                            Exponent {
                                num: x.num + x.den,
                                den: x.den,
                            },
                        ),
                        other => other,
                    };
                });
            }
            (*relation, "q-power shift")
        }
    };
    let label = format!("{label} in [{}]", out.relations[relation].label);
    (out, label, relation)
}

/// Soundness probe: applies single-token mutations in a seeded random order
/// until one makes its relation fail. The report passes iff some mutation is
/// detected; mutations that leave the relation satisfied (for example a sign
/// flip of a term that vanishes identically on the representation) are
/// counted in the notes.
pub fn mutation_probe<C: Scalar>(s: &Suite, env: &CurrentSet<C>, cutoff: i32, seed: u64) -> CheckReport {
    let start = Instant::now();
    let mut sites = mutation_sites(s);
    let mut rng = StdRng::seed_from_u64(seed);
    sites.shuffle(&mut rng);
    let mut undetected = 0;
    let mut rep = CheckReport::new(&s.name, "mutation", Status::Fail);
    for site in &sites {
        let (mutated, what, relation) = apply_mutation(s, site);
        let r = check_relation(&s.name, &mutated.relations[relation], env, cutoff);
        if r.status == Status::Fail {
            rep.status = Status::Pass;
            rep.cells_checked = r.cells_checked;
            rep.safe_window = r.safe_window;
            rep.failing_cells = r.failing_cells;
            rep.notes.push(format!("{what} detected"));
            break;
        }
        undetected += 1;
    }
    if sites.is_empty() {
        rep.status = Status::Skipped;
        rep.notes.push("no mutation site".into());
    }
    if undetected > 0 {
        rep.notes.push(format!("{undetected} earlier mutation(s) left their relation satisfied"));
    }
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}

/// Compares two grids on the cells known in both; returns the number of
/// compared entries and the cells where they differ.
pub fn grid_agreement<C: Scalar>(a: &OpGrid<C>, b: &OpGrid<C>, entries: usize) -> Result<(usize, Vec<FailingCell>)> {
    let d = a.sub(b)?;
    let rep = residual_report("", "", &d, entries);
    Ok((rep.cells_checked, rep.failing_cells))
}

/// Checks that `x1w-x2z` is `x1-x2+` with `z` and `w` exchanged: both sides
/// and the residuals agree cellwise after transposition.
pub fn verify_transposed_pair<C: Scalar>(suite: &Suite, env: &CurrentSet<C>, cutoff: i32) -> CheckReport {
    let start = Instant::now();
    let name = format!("{} = {} (z<->w)", TRANSPOSED_PAIR.1, TRANSPOSED_PAIR.0);
    let run = || -> Result<CheckReport> {
        let find = |l: &str| suite.relation(l).ok_or_else(|| Error::Invalid(format!("suite lacks `{l}`")));
        let window = (-cutoff, cutoff);
        let a = evaluate_relation(find(TRANSPOSED_PAIR.0)?, env, window)?;
        let b = evaluate_relation(find(TRANSPOSED_PAIR.1)?, env, window)?;
        let mut checked = 0;
        let mut failing = Vec::new();
        let mut nonzero = false;
        for (x, y) in [(&a.lhs, &b.lhs), (&a.rhs, &b.rhs), (&a.residual, &b.residual)] {
            // Exchanging the names z and w moves the z^m w^n cell to (n, m).
            let mut t = x.transpose();
            t.vars = y.vars;
            let (c, f) = grid_agreement(&t, y, env.dim * env.dim)?;
            nonzero |= y.cells().next().is_some();
            checked += c;
            failing.extend(f);
        }
        let mut rep = CheckReport::from_cells(&suite.name, &name, checked, failing);
        if !nonzero {
            rep.status = Status::Skipped;
            rep.notes.push("both sides vanish on the window".into());
        }
        Ok(rep)
    };
    let mut rep = run().unwrap_or_else(|e| CheckReport::error(&suite.name, &name, &e));
    rep.elapsed_ms = start.elapsed().as_millis();
    rep
}

/// Verifies every built-in suite (plus the `x1w-x2z` transposition check)
/// for the given R-matrix at the given cutoff.
pub fn verify_builtin<C: Scalar>(r: &RMatrix<C>, cutoff: i32, only: Option<&str>) -> Result<Vec<CheckReport>> {
    let env = currents_for(r, cutoff)?;
    let mut out = Vec::new();
    for s in builtin_suites()? {
        if only.is_some_and(|n| n != s.name) {
            continue;
        }
        out.extend(verify_suite(&s, &env, cutoff));
        if s.relation(TRANSPOSED_PAIR.1).is_some() {
            out.push(verify_transposed_pair(&s, &env, cutoff));
        }
    }
    if let Some(n) = only {
        if out.is_empty() {
            return Err(Error::Invalid(format!("no built-in suite `{n}`")));
        }
    }
    Ok(out)
}
