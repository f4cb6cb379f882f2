//! Structural degeneration of trigonometric relation suites to the rational
//! (super-Yangian double) form.
//!
//! Every coefficient is factored syntactically into admissible atoms: pure
//! powers of `q` and monomials in `z, w` (↦ 1), numbers, `q^α − q^β`
//! (↦ `(α − β)ħ`) and the linear atoms `q^a z − q^b w` (↦ `u − v + (a − b)ħ`,
//! `a, b ∈ [−6, 6]`). Tags `z_±, w_±` become `u_±, v_±` with
//! `u_± = u ± ħc/2`; `δ(z/w · q^k)` becomes `δ(u − v + kħ)` and a shifted
//! argument `z q^k` becomes `u + kħ`. The result is compared with a rational
//! suite through a canonical form of every term, so the comparison does not
//! depend on how a coefficient is written.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::kernel::{RatExpr, Scalar, Var};
use crate::relations::eval::coeff_value;
use crate::relations::{parse_suite, Arg, CurrentRef, Delta, Exponent, Expr, Relation, SpecVar, Suite, Tag, Term, THEOREM4};
use crate::report::{CheckReport, Status};

/// Name of the report group.
pub const SUITE: &str = "yangian";

/// Largest `|a|`, `|b|` accepted for a linear atom `q^a z − q^b w`.
pub const ATOM_BOUND: i64 = 6;

/// The atom `u_{tu} − v_{tv} + (k2/2)·ħ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    /// Tag of `u`.
    pub tu: Tag,
    /// Tag of `v`.
    pub tv: Tag,
    /// Twice the multiple of `ħ`.
    pub k2: i64,
}

impl Atom {
    fn expr(&self) -> Expr {
        let uv = Expr::sub(
            Expr::Var(SpecVar { name: 'u', tag: self.tu }),
            Expr::Var(SpecVar { name: 'v', tag: self.tv }),
        );
        if self.k2 == 0 {
            return uv;
        }
        let k = self.k2.unsigned_abs();
        let mult = if k == 2 {
            Expr::H
        } else if k % 2 == 0 {
            Expr::mul(Expr::Num(k / 2), Expr::H)
        } else {
            Expr::mul(Expr::div(Expr::Num(k), Expr::Num(2)), Expr::H)
        };
        if self.k2 > 0 {
            Expr::add(uv, mult)
        } else {
            Expr::sub(uv, mult)
        }
    }
}

/// A coefficient as `constant · ħ^h_power · Π atom^multiplicity`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factored<C: Scalar> {
    /// Numerical prefactor.
    pub constant: C,
    /// Power of `ħ`.
    pub h_power: i32,
    /// Atoms with nonzero multiplicity.
    pub atoms: BTreeMap<Atom, i32>,
}

impl<C: Scalar> Factored<C> {
    fn one() -> Self {
        Factored {
            constant: C::one(),
            h_power: 0,
            atoms: BTreeMap::new(),
        }
    }

    fn scale(&mut self, c: &C, e: i32) -> Result<()> {
        if c.is_zero() {
            return Err(Error::NonFactorableCoefficient("vanishing factor".into()));
        }
        for _ in 0..e.abs() {
            if e > 0 {
                self.constant = self.constant.clone() * c.clone();
            } else {
                self.constant = self.constant.clone() / c.clone();
            }
        }
        Ok(())
    }

    fn atom(&mut self, a: Atom, e: i32) {
        let m = self.atoms.entry(a).or_insert(0);
        *m += e;
        if *m == 0 {
            self.atoms.remove(&a);
        }
    }

    /// The coefficient as an expression in `u, v, h` (with the sign of the
    /// constant returned separately).
    pub fn to_expr(&self) -> (bool, Option<Expr>) {
        let negative = self.constant.is_negative();
        let c = if negative { -self.constant.clone() } else { self.constant.clone() };
        let mut num: Vec<Expr> = Vec::new();
        let mut den: Vec<Expr> = Vec::new();
        let ratio = num_rational_parts(&c);
        if let Some((n, d)) = ratio {
            if n != 1 {
                num.push(Expr::Num(n));
            }
            if d != 1 {
                den.push(Expr::Num(d));
            }
        }
        let hp = |p: i32| if p == 1 { Expr::H } else { Expr::pow(Expr::H, Exponent::int(p as i64)) };
        match self.h_power {
            p if p > 0 => num.push(hp(p)),
            p if p < 0 => den.push(hp(-p)),
            _ => {}
        }
        for (a, m) in &self.atoms {
            let base = a.expr();
            let e = if m.abs() == 1 { base } else { Expr::pow(base, Exponent::int(m.abs() as i64)) };
            if *m > 0 {
                num.push(e);
            } else {
                den.push(e);
            }
        }
        let prod = |v: Vec<Expr>| v.into_iter().reduce(Expr::mul);
        let expr = match (prod(num), prod(den)) {
            (None, None) => None,
            (Some(n), None) => Some(n),
            (None, Some(d)) => Some(Expr::div(Expr::Num(1), d)),
            (Some(n), Some(d)) => Some(Expr::div(n, d)),
        };
        (negative, expr)
    }
}

/// Numerator and denominator of a small nonnegative rational constant.
fn num_rational_parts<C: Scalar>(c: &C) -> Option<(u64, u64)> {
    let text = c.to_string();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse().ok()?, d.trim().parse().ok()?),
        None => (text.trim().parse().ok()?, 1),
    };
    Some((n, d))
}

impl<C: Scalar> fmt::Display for Factored<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        if self.h_power != 0 {
            write!(f, " h^{}", self.h_power)?;
        }
        for (a, m) in &self.atoms {
            write!(f, " ({})^{m}", a.expr())?;
        }
        Ok(())
    }
}

fn gather_tags(e: &Expr, tags: &mut BTreeMap<char, Tag>) -> Result<()> {
    match e {
        Expr::Var(v) => match tags.insert(v.name, v.tag) {
            Some(t) if t != v.tag => Err(Error::NonFactorableCoefficient(format!(
                "{} appears with two different tags",
                v.name
            ))),
            _ => Ok(()),
        },
        Expr::Neg(x) | Expr::Pow(x, _) => gather_tags(x, tags),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            gather_tags(a, tags)?;
            gather_tags(b, tags)
        }
        _ => Ok(()),
    }
}

fn exps(m: &crate::kernel::Mono) -> [i32; 7] {
    m.0
}

/// Factors an additive (sum or difference) sub-expression.
fn factor_additive<C: Scalar>(e: &Expr, pow: i32, out: &mut Factored<C>, rational: bool) -> Result<()> {
    let bad = || Error::NonFactorableCoefficient(format!("`{e}`"));
    let mut tags = BTreeMap::new();
    gather_tags(e, &mut tags)?;
    let value: RatExpr<C> = coeff_value(e)?;
    let poly = value.as_poly().ok_or_else(bad)?.clone();
    let (x, y) = if rational { (Var::U, Var::V) } else { (Var::Z, Var::W) };
    let tag = |c: char| tags.get(&c).copied().unwrap_or(Tag::None);
    let (cx, cy) = if rational { ('u', 'v') } else { ('z', 'w') };
    let two = C::one() + C::one();
    if !poly.contains_var(x) && !poly.contains_var(y) {
        if rational {
            // A number, or a multiple of ħ.
            if let Some(c) = poly.as_constant() {
                return out.scale(&c, pow);
            }
            let (c, m) = poly.as_term().ok_or_else(bad)?;
            let ex = exps(&m);
            if ex.iter().enumerate().any(|(i, &p)| p != 0 && i != Var::H.index()) || ex[Var::H.index()] != 1 {
                return Err(bad());
            }
            out.h_power += pow;
            return out.scale(&c, pow);
        }
        if let Some(v) = value.evaluate(&[(Var::S, C::one())]) {
            if !v.is_zero() {
                return out.scale(&v, pow);
            }
        }
        // λ (q^α − q^β) ↦ λ (α − β) ħ, with exponents in powers of s = q^{1/2}.
        let terms: Vec<_> = poly.terms().map(|(m, c)| (exps(m), c.clone())).collect();
        if terms.len() != 2 || terms.iter().any(|(ex, _)| ex.iter().enumerate().any(|(i, &p)| p != 0 && i != 0)) {
            return Err(bad());
        }
        let ((ea, ca), (eb, cb)) = (&terms[0], &terms[1]);
        if ca.clone() + cb.clone() != C::zero() {
            return Err(bad());
        }
        let diff = C::from_i64((ea[0] - eb[0]) as i64).ok_or_else(bad)?;
        out.h_power += pow;
        return out.scale(&(ca.clone() * diff / two), pow);
    }
    let mut coef_x: Option<(C, i32)> = None;
    let mut coef_y: Option<(C, i32)> = None;
    let mut h_coef: Option<C> = None;
    for (m, c) in poly.terms() {
        let ex = exps(m);
        let others = |keep: &[usize]| ex.iter().enumerate().any(|(i, &p)| p != 0 && !keep.contains(&i));
        if ex[x.index()] == 1 && ex[y.index()] == 0 && !others(&[x.index(), 0]) && !rational
            || rational && ex[x.index()] == 1 && !others(&[x.index()])
        {
            if coef_x.replace((c.clone(), ex[0])).is_some() {
                return Err(bad());
            }
        } else if ex[y.index()] == 1 && ex[x.index()] == 0 && !others(&[y.index(), 0]) && !rational
            || rational && ex[y.index()] == 1 && !others(&[y.index()])
        {
            if coef_y.replace((c.clone(), ex[0])).is_some() {
                return Err(bad());
            }
        } else if rational && ex[Var::H.index()] == 1 && !others(&[Var::H.index()]) {
            h_coef = Some(c.clone());
        } else {
            return Err(bad());
        }
    }
    let ((ax, sx), (ay, sy)) = (coef_x.ok_or_else(bad)?, coef_y.ok_or_else(bad)?);
    if ax.clone() + ay.clone() != C::zero() {
        return Err(bad());
    }
    let k2 = if rational {
        // (A u − A v + K h) = A (u − v + (K/A) h).
        let k = h_coef.unwrap_or_else(C::zero) * two / ax.clone();
        let s = k.to_string();
        s.parse::<i64>().map_err(|_| bad())?
    } else {
        // s^α z − s^β w = q^{α/2} z − q^{β/2} w.
        if (sx as i64).abs() > 2 * ATOM_BOUND || (sy as i64).abs() > 2 * ATOM_BOUND {
            return Err(bad());
        }
        (sx - sy) as i64
    };
    out.scale(&ax, pow)?;
    out.atom(
        Atom {
            tu: tag(cx),
            tv: tag(cy),
            k2,
        },
        pow,
    );
    Ok(())
}

/// Factors a coefficient into admissible atoms.
pub fn factor_coeff<C: Scalar>(e: &Expr, rational: bool) -> Result<Factored<C>> {
    let mut out = Factored::one();
    factor_into(e, 1, &mut out, rational)?;
    Ok(out)
}

fn factor_into<C: Scalar>(e: &Expr, pow: i32, out: &mut Factored<C>, rational: bool) -> Result<()> {
    match e {
        Expr::Mul(a, b) => {
            factor_into(a, pow, out, rational)?;
            factor_into(b, pow, out, rational)
        }
        Expr::Div(a, b) => {
            factor_into(a, pow, out, rational)?;
            factor_into(b, -pow, out, rational)
        }
        Expr::Neg(x) => {
            out.scale(&(-C::one()), pow)?;
            factor_into(x, pow, out, rational)
        }
        Expr::Pow(b, x) if x.den == 1 => factor_into(b, pow * x.num as i32, out, rational),
        Expr::Pow(b, _) if **b == Expr::Q && !rational => Ok(()),
        Expr::Num(n) => out.scale(&C::from_u64(*n).ok_or_else(|| Error::Invalid("literal out of range".into()))?, pow),
        Expr::Q if !rational => Ok(()),
        Expr::Var(v) if !rational && !v.is_rational() => Ok(()),
        Expr::H if rational => {
            out.h_power += pow;
            Ok(())
        }
        Expr::Add(..) | Expr::Sub(..) => factor_additive(e, pow, out, rational),
        _ => Err(Error::NonFactorableCoefficient(format!("`{e}`"))),
    }
}

fn rational_var(v: SpecVar) -> SpecVar {
    SpecVar {
        name: if v.is_first() { 'u' } else { 'v' },
        tag: v.tag,
    }
}

/// `δ` in the canonical form `δ(u − v + (k2/2 + kc2·c/2)ħ)`.
fn canonical_delta(d: &Delta) -> (i32, i32) {
    let (first, second, k, kc) = match d {
        Delta::Ratio { num, den, shift } => (rational_var(*num), rational_var(*den), shift.k, shift.kc),
        Delta::Difference { left, right, shift } => (*left, *right, shift.k, shift.kc),
    };
    // x_{tx} − y_{ty} + (k + kc c)ħ, with x_± = x ± cħ/2.
    let k2 = 2 * k;
    let kc2 = 2 * kc + first.tag.half_c() - second.tag.half_c();
    if first.name == 'u' {
        (k2, kc2)
    } else {
        (-k2, -kc2)
    }
}

/// The rational image of a trigonometric delta prefactor.
fn degenerate_delta(d: &Delta) -> Delta {
    match d {
        Delta::Ratio { num, den, shift } => {
            let (mut left, mut right, mut shift) = (rational_var(*num), rational_var(*den), *shift);
            if left.name != 'u' {
                std::mem::swap(&mut left, &mut right);
                shift = shift.neg();
            }
            Delta::Difference { left, right, shift }
        }
        other => *other,
    }
}

fn degenerate_arg(a: &Arg) -> Arg {
    Arg {
        var: rational_var(a.var),
        shift: a.shift,
    }
}

/// The rational image of a trigonometric suite.
pub fn degenerate_suite(s: &Suite) -> Result<Suite> {
    let mut relations = Vec::with_capacity(s.relations.len());
    for rel in &s.relations {
        let side = |terms: &[Term]| -> Result<Vec<Term>> {
            terms
                .iter()
                .map(|t| {
                    let f: Factored<crate::Q> = match &t.coeff {
                        Some(c) => factor_coeff(c, false)
                            .map_err(|e| Error::NonFactorableCoefficient(format!("[{}]: {e}", rel.label)))?,
                        None => Factored::one(),
                    };
                    let (neg, coeff) = f.to_expr();
                    Ok(Term {
                        negative: t.negative != neg,
                        coeff,
                        expand: None,
                        delta: t.delta.as_ref().map(degenerate_delta),
                        factors: t
                            .factors
                            .iter()
                            .map(|c| CurrentRef {
                                name: c.name.clone(),
                                inverse: c.inverse,
                                arg: degenerate_arg(&c.arg),
                            })
                            .collect(),
                    })
                })
                .collect()
        };
        relations.push(Relation {
            label: rel.label.clone(),
            lhs: side(&rel.lhs)?,
            rhs: side(&rel.rhs)?,
        });
    }
    Ok(Suite {
        name: format!("{}-rational", s.name),
        relations,
    })
}

/// The canonical key of a term: signed factored coefficient, canonical
/// delta and the ordered factors with their canonical arguments.
fn term_key(t: &Term, rational: bool) -> Result<String> {
    let mut f: Factored<crate::Q> = match &t.coeff {
        Some(c) => factor_coeff(c, rational)?,
        None => Factored::one(),
    };
    if t.negative {
        f.constant = -f.constant;
    }
    let delta = t.delta.as_ref().map(canonical_delta);
    let factors: Vec<String> = t
        .factors
        .iter()
        .map(|c| {
            let v = if rational { c.arg.var } else { rational_var(c.arg.var) };
            format!("{}{}({}{:?}{:+}{:+}c)", c.name, if c.inverse { "^-1" } else { "" }, v.name, v.tag, c.arg.shift.k, c.arg.shift.kc)
        })
        .collect();
    let delta = match delta {
        Some((k2, kc2)) => format!(" delta(u - v + ({k2}/2 + {kc2}c/2)h)"),
        None => String::new(),
    };
    Ok(format!("{f}{delta} {}", factors.join(" ")))
}

fn side_keys(terms: &[Term], rational: bool) -> Result<Vec<String>> {
    let mut keys = terms.iter().map(|t| term_key(t, rational)).collect::<Result<Vec<_>>>()?;
    keys.sort();
    Ok(keys)
}

/// Compares two rational suites relation by relation (matched by label).
/// A relation passes iff both sides have the same multiset of canonical
/// terms.
pub fn compare_suites(lhs: &Suite, rhs: &Suite) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let mut labels: Vec<&str> = lhs.relations.iter().map(|r| r.label.as_str()).collect();
    for r in &rhs.relations {
        if !labels.contains(&r.label.as_str()) {
            labels.push(&r.label);
        }
    }
    for label in labels {
        let start = Instant::now();
        let mut rep = match (lhs.relation(label), rhs.relation(label)) {
            (Some(a), Some(b)) => compare_relation(a, b, label),
            (Some(_), None) => CheckReport::new(SUITE, label, Status::Fail).with_note(format!("missing from {}", rhs.name)),
            (None, _) => CheckReport::new(SUITE, label, Status::Fail).with_note(format!("missing from {}", lhs.name)),
        };
        rep.elapsed_ms = start.elapsed().as_millis();
        out.push(rep);
    }
    out
}

fn compare_relation(a: &Relation, b: &Relation, label: &str) -> CheckReport {
    let run = || -> Result<CheckReport> {
        let mut rep = CheckReport::new(SUITE, label, Status::Pass);
        rep.cells_checked = a.lhs.len() + a.rhs.len();
        for (side, x, y) in [("lhs", &a.lhs, &b.lhs), ("rhs", &a.rhs, &b.rhs)] {
            let (kx, ky) = (side_keys(x, true)?, side_keys(y, true)?);
            if kx != ky {
                rep.status = Status::Fail;
                for k in kx.iter().filter(|k| !ky.contains(k)) {
                    rep.notes.push(format!("{side}: only in degeneration: {k}"));
                }
                for k in ky.iter().filter(|k| !kx.contains(k)) {
                    rep.notes.push(format!("{side}: only in reference: {k}"));
                }
            }
        }
        Ok(rep)
    };
    run().unwrap_or_else(|e| CheckReport::error(SUITE, label, &e))
}

/// Parses the built-in rational counterpart of `theorem3`.
pub fn theorem4() -> Result<Suite> {
    parse_suite(THEOREM4)
}

/// Degenerates a trigonometric suite and compares it with a rational one.
pub fn degenerate_compare(trig: &Suite, rational: &Suite) -> Result<Vec<CheckReport>> {
    let d = degenerate_suite(trig)?;
    Ok(compare_suites(&d, rational))
}
