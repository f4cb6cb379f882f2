//! Evaluation of relations on coefficient grids.
//!
//! A term `c(z, w) · δ · F₁(x₁) ⋯ F_k(x_k)` becomes the grid product of its
//! scalar coefficient, its delta prefactor and its factor distributions, in
//! that order. The relation holds on a cell iff `Σ lhs − Σ rhs` vanishes
//! there; only cells whose value is exactly determined by the truncated data
//! are compared.
//!
//! Rational coefficients are expanded in the annotated direction, or by the
//! default rule: powers of `w/z` if the leftmost current of the term is
//! evaluated at `z`, of `z/w` otherwise. When that leaves no determined cell
//! (products of two-sided currents with rational coefficients are infinite
//! sums) the relation is multiplied through by the common denominator of its
//! coefficients and re-evaluated with polynomial coefficients.

use std::collections::BTreeMap;

use super::ast::{Affine, Delta, Direction, Expr, Relation, SpecVar, Term};
use crate::error::{Error, Result};
use crate::gauss::CurrentSet;
use crate::kernel::{delta_grid, expand, CoeffGrid, GridSplit, MPoly, Ring, RatExpr, Scalar, Var};
use crate::linalg::Matrix;
use crate::opgrid::{product, scalar_times, OpGrid};

/// The grid axes of every trigonometric relation.
pub const VARS: (Var, Var) = (Var::Z, Var::W);

/// How coefficients were handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Rational coefficients expanded as series.
    Direct,
    /// Relation multiplied by the common denominator of its coefficients.
    Cleared,
}

/// Both sides and the residual of one relation.
#[derive(Clone, Debug)]
pub struct Evaluation<C: Scalar> {
    /// `Σ lhs`.
    pub lhs: OpGrid<C>,
    /// `Σ rhs`.
    pub rhs: OpGrid<C>,
    /// `lhs − rhs`.
    pub residual: OpGrid<C>,
    /// Coefficient handling.
    pub mode: Mode,
    /// Facts the verdict depends on.
    pub notes: Vec<String>,
}

/// Value of a coefficient expression at central charge 0, where
/// `z_± = z` and `w_± = w`.
pub fn coeff_value<C: Scalar>(e: &Expr) -> Result<RatExpr<C>> {
    Ok(match e {
        Expr::Num(n) => RatExpr::constant(
            C::from_u64(*n).ok_or_else(|| Error::Invalid(format!("literal {n} out of range")))?,
        ),
        Expr::Q => RatExpr::var_pow(Var::S, 2),
        Expr::H => RatExpr::var_pow(Var::H, 1),
        Expr::Var(v) => RatExpr::var_pow(spec_var(*v), 1),
        Expr::Neg(x) => coeff_value::<C>(x)?.neg(),
        Expr::Add(a, b) => coeff_value::<C>(a)?.add(&coeff_value(b)?),
        Expr::Sub(a, b) => coeff_value::<C>(a)?.sub(&coeff_value(b)?),
        Expr::Mul(a, b) => coeff_value::<C>(a)?.mul(&coeff_value(b)?),
        Expr::Div(a, b) => coeff_value::<C>(a)?
            .div(&coeff_value(b)?)
            .ok_or_else(|| Error::Invalid(format!("division by zero in `{e}`")))?,
        Expr::Pow(b, x) => {
            if x.den == 1 {
                let n = i32::try_from(x.num).map_err(|_| Error::Invalid("exponent too large".into()))?;
                coeff_value::<C>(b)?
                    .powi(n)
                    .ok_or_else(|| Error::Invalid(format!("zero to a negative power in `{e}`")))?
            } else if x.den == 2 && **b == Expr::Q {
                RatExpr::var_pow(Var::S, x.num as i32)
            } else {
                return Err(Error::Invalid(format!("fractional power of a non-q base in `{e}`")));
            }
        }
    })
}

/// The alphabet variable of a spectral variable (tags dropped).
pub fn spec_var(v: SpecVar) -> Var {
    match v.name {
        'z' => Var::Z,
        'w' => Var::W,
        'u' => Var::U,
        _ => Var::V,
    }
}

/// The coefficient of a term (1 if absent), including its sign.
fn signed_coeff<C: Scalar>(t: &Term) -> Result<RatExpr<C>> {
    let c = match &t.coeff {
        Some(e) => coeff_value(e)?,
        None => RatExpr::one(),
    };
    Ok(if t.negative { c.neg() } else { c })
}

fn depends_on_grid<C: Scalar>(c: &RatExpr<C>) -> bool {
    c.den().contains_var(Var::Z) || c.den().contains_var(Var::W)
}

/// The expansion direction of a term: the annotation, or the default rule.
pub fn direction(t: &Term) -> Direction {
    t.expand.unwrap_or_else(|| match t.factors.first() {
        Some(f) if f.arg.var.name == 'w' => Direction::ZOverW,
        _ => Direction::WOverZ,
    })
}

/// A scalar coefficient as an exact grid (no spectral denominator) or as
/// an expanded series.
fn coeff_grid<C: Scalar>(c: &RatExpr<C>, dir: Direction, window: (i32, i32)) -> Result<CoeffGrid<RatExpr<C>>> {
    if !depends_on_grid(c) {
        let cells: BTreeMap<(i32, i32), RatExpr<C>> = c.split(VARS.0, VARS.1)?.into_iter().collect();
        return Ok(CoeffGrid::from_exact(VARS, window, cells));
    }
    let ratio = match dir {
        Direction::WOverZ => (Var::W, Var::Z),
        Direction::ZOverW => (Var::Z, Var::W),
    };
    let span = window.1 - window.0;
    let s = expand(c, ratio, (0, 2 * span + 2))?;
    CoeffGrid::from_series(&s, VARS, window)
}

fn shift_at(a: Affine, central_charge: i32) -> i32 {
    a.at(central_charge)
}

fn delta_of<C: Scalar>(d: &Delta, central_charge: i32, window: (i32, i32)) -> Result<CoeffGrid<RatExpr<C>>> {
    match d {
        Delta::Ratio { num, den, shift } => {
            let k = shift_at(*shift, central_charge);
            match (num.name, den.name) {
                ('z', 'w') => Ok(delta_grid(k, VARS, window)),
                ('w', 'z') => Ok(delta_grid(-k, VARS, window)),
                _ => Err(Error::Invalid(format!("delta argument must be z/w or w/z, found {num}/{den}"))),
            }
        }
        Delta::Difference { .. } => Err(Error::Invalid(
            "rational delta functions cannot be evaluated on a trigonometric grid".into(),
        )),
    }
}

/// The ordered product of a term's currents (the identity if none).
fn factor_product<C: Scalar>(t: &Term, env: &CurrentSet<C>, window: (i32, i32)) -> Result<OpGrid<C>> {
    let mut grids = Vec::with_capacity(t.factors.len());
    for f in &t.factors {
        let b = env.get(&f.name)?;
        let cur = if f.inverse {
            b.inverse
                .as_ref()
                .ok_or_else(|| Error::SeriesNotInvertible(format!("{} has no inverse", f.name)))?
        } else {
            &b.current
        };
        let var = match f.arg.var.name {
            'z' => Var::Z,
            'w' => Var::W,
            _ => {
                return Err(Error::Invalid(format!(
                    "argument {} is not a trigonometric variable",
                    f.arg.var
                )))
            }
        };
        let k = shift_at(f.arg.shift, env.central_charge);
        let placed = if k == 0 { cur.place(VARS, var, window)? } else { cur.shift(k).place(VARS, var, window)? };
        grids.push(placed);
    }
    if grids.is_empty() {
        let cells = [((0, 0), Matrix::identity(env.dim))].into_iter().collect();
        return Ok(CoeffGrid::from_exact(VARS, window, cells));
    }
    product(&grids)
}

/// Checks that every current of the relation is bound (and invertible where
/// inverted).
pub fn bind_check<C: Scalar>(rel: &Relation, env: &CurrentSet<C>) -> Result<()> {
    for (_, t) in rel.terms() {
        for f in &t.factors {
            let b = env.get(&f.name)?;
            if f.inverse && b.inverse.is_none() {
                return Err(Error::SeriesNotInvertible(format!("{} has no inverse", f.name)));
            }
        }
    }
    Ok(())
}

struct Prepared<C: Scalar> {
    rhs: bool,
    coeff: RatExpr<C>,
    dir: Direction,
    body: OpGrid<C>,
}

fn assemble<C: Scalar>(
    parts: &[Prepared<C>],
    coeff: &dyn Fn(&Prepared<C>) -> Result<CoeffGrid<RatExpr<C>>>,
    window: (i32, i32),
) -> Result<(OpGrid<C>, OpGrid<C>)> {
    let zero = || -> OpGrid<C> { CoeffGrid::zero(VARS, window) };
    let (mut lhs, mut rhs) = (zero(), zero());
    for p in parts {
        let g = scalar_times(&coeff(p)?, &p.body)?;
        if p.rhs {
            rhs = rhs.add(&g)?;
        } else {
            lhs = lhs.add(&g)?;
        }
    }
    Ok((lhs, rhs))
}

/// Evaluates `lhs − rhs` on the box `window × window` in `(z, w)`.
pub fn evaluate_relation<C: Scalar>(rel: &Relation, env: &CurrentSet<C>, window: (i32, i32)) -> Result<Evaluation<C>> {
    bind_check(rel, env)?;
    let mut parts = Vec::new();
    for (rhs, t) in rel.terms() {
        let mut body = factor_product(t, env, window)?;
        if let Some(d) = &t.delta {
            let dg = delta_of::<C>(d, env.central_charge, window)?;
            body = scalar_times(&dg, &body)?;
        }
        parts.push(Prepared {
            rhs,
            coeff: signed_coeff(t)?,
            dir: direction(t),
            body,
        });
    }
    let (lhs, rhs) = assemble(&parts, &|p| coeff_grid(&p.coeff, p.dir, window), window)?;
    let residual = lhs.sub(&rhs)?;
    let mut notes = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        if depends_on_grid(&p.coeff) {
            notes.push(format!("term {}: coefficient expanded in powers of {}", i + 1, p.dir));
        }
    }
    if !residual.safe_window().is_empty() || !parts.iter().any(|p| depends_on_grid(&p.coeff)) {
        return Ok(Evaluation {
            lhs,
            rhs,
            residual,
            mode: Mode::Direct,
            notes,
        });
    }
    // Clear denominators: multiply every coefficient by a common multiple.
    let mut common: MPoly<C> = MPoly::one();
    for p in &parts {
        let d = p.coeff.den();
        if !(d.contains_var(Var::Z) || d.contains_var(Var::W)) {
            continue;
        }
        if common.exact_div(d).is_none() {
            common = &common * d;
        }
    }
    let cleared = RatExpr::from_poly(common.clone());
    let (lhs, rhs) = assemble(
        &parts,
        &|p| {
            let c = p.coeff.mul(&cleared);
            coeff_grid(&c, p.dir, window)
        },
        window,
    )?;
    let residual = lhs.sub(&rhs)?;
    Ok(Evaluation {
        lhs,
        rhs,
        residual,
        mode: Mode::Cleared,
        notes: vec![format!("both sides multiplied by {common}")],
    })
}
