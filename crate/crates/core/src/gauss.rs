//! Gauss decomposition of the L-operators into `k`, `e`, `f` generators and
//! the Drinfeld currents built from them.
//!
//! `L = F·K·E` with `F` lower unitriangular (entries `e`), `K` diagonal
//! (entries `k`) and `E` upper unitriangular (entries `f`). The factors are
//! computed from the closed formulas of the explicit 3×3 product, so
//! operator ordering in each Schur complement is the left-to-right order
//! `e k f`. The currents are differences of the two expansions, i.e.
//! two-sided distributions in one spectral variable. They are stored as
//! coefficient maps with an explicit known range.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{CoeffGrid, GridSplit, Interval, Mono, Ring, RatExpr, Scalar, Support, Var};
use crate::linalg::Matrix;
use crate::opgrid::{invert, OpGrid, OpSeries};
use crate::report::{CheckReport, FailingCell};
use crate::rs::{LOperator, Sign};

/// Report group name for Gauss-decomposition checks.
pub const SUITE: &str = "gauss";

/// The Gauss factors of one L-operator; every entry is a series of
/// quantum-space matrices in the expansion ratio of `L`.
#[derive(Clone, Debug)]
pub struct GaussData<C: Scalar> {
    /// Which L-operator.
    pub sign: Sign,
    /// `k₁, k₂, k₃`.
    pub k: [OpSeries<C>; 3],
    /// `e₁ = e₂₁`.
    pub e1: OpSeries<C>,
    /// `e₂ = e₃₂`.
    pub e2: OpSeries<C>,
    /// `e₃₁`.
    pub e31: OpSeries<C>,
    /// `f₁ = f₁₂`.
    pub f1: OpSeries<C>,
    /// `f₂ = f₂₃`.
    pub f2: OpSeries<C>,
    /// `f₁₃`.
    pub f13: OpSeries<C>,
}

fn mul<C: Scalar>(a: &OpSeries<C>, b: &OpSeries<C>) -> Result<OpSeries<C>> {
    a.mul(b)
}

fn mul3<C: Scalar>(a: &OpSeries<C>, b: &OpSeries<C>, c: &OpSeries<C>) -> Result<OpSeries<C>> {
    a.mul(b)?.mul(c)
}

/// Gauss-decomposes `L`.
pub fn gauss_decompose<C: Scalar>(l: &LOperator<C>) -> Result<GaussData<C>> {
    let e = |i: usize, j: usize| l.entry(i, j);
    let k1 = e(0, 0);
    let k1i = invert(&k1)?;
    let f1 = mul(&k1i, &e(0, 1))?;
    let e1 = mul(&e(1, 0), &k1i)?;
    let f13 = mul(&k1i, &e(0, 2))?;
    let e31 = mul(&e(2, 0), &k1i)?;
    let k2 = e(1, 1).sub(&mul3(&e1, &k1, &f1)?)?;
    let k2i = invert(&k2)?;
    let f2 = mul(&k2i, &e(1, 2).sub(&mul3(&e1, &k1, &f13)?)?)?;
    let e2 = mul(&e(2, 1).sub(&mul3(&e31, &k1, &f1)?)?, &k2i)?;
    let k3 = e(2, 2)
        .sub(&mul3(&e2, &k2, &f2)?)?
        .sub(&mul3(&e31, &k1, &f13)?)?;
    invert(&k3)?;
    Ok(GaussData {
        sign: l.sign,
        k: [k1, k2, k3],
        e1,
        e2,
        e31,
        f1,
        f2,
        f13,
    })
}

/// Assembles a block matrix of series into one series.
pub fn assemble<C: Scalar>(blocks: &[Vec<OpSeries<C>>]) -> Result<OpSeries<C>> {
    let nb = blocks.len();
    let first = &blocks[0][0];
    let d = match first.coeffs().next() {
        Some((_, m)) => m.rows(),
        None => return Err(Error::Invalid("cannot infer block size from a zero series".into())),
    };
    let ratio = first.ratio;
    let lo = blocks.iter().flatten().map(|s| s.lo()).min().unwrap_or(0);
    let hi = blocks.iter().flatten().map(|s| s.hi()).min().unwrap_or(0);
    let mut coeffs: BTreeMap<i32, Matrix<RatExpr<C>>> = BTreeMap::new();
    for (bi, row) in blocks.iter().enumerate() {
        for (bj, s) in row.iter().enumerate() {
            if s.ratio != ratio {
                return Err(Error::Invalid("blocks expanded in different directions".into()));
            }
            for (n, m) in s.coeffs() {
                if n > hi {
                    continue;
                }
                let out = coeffs.entry(n).or_insert_with(|| Matrix::zeros(nb * d, nb * d));
                for (i, j, v) in m.nonzero() {
                    out.set(bi * d + i, bj * d + j, v.clone());
                }
            }
        }
    }
    Ok(OpSeries::from_coeffs(ratio, lo, hi, coeffs))
}

impl<C: Scalar> GaussData<C> {
    /// Matrix size of the coefficients.
    pub fn dim(&self) -> usize {
        self.k[0].coeffs().next().map(|(_, m)| m.rows()).unwrap_or(1)
    }

    /// `F·K·E` from the explicit product formulas.
    pub fn recompose(&self) -> Result<OpSeries<C>> {
        let [k1, k2, k3] = &self.k;
        let (e1, e2, e31, f1, f2, f13) = (&self.e1, &self.e2, &self.e31, &self.f1, &self.f2, &self.f13);
        let u = mul(k2, f2)?.add(&mul3(e1, k1, f13)?)?;
        let v = mul(e2, k2)?.add(&mul3(e31, k1, f1)?)?;
        let x = k3.add(&mul3(e2, k2, f2)?)?.add(&mul3(e31, k1, f13)?)?;
        assemble(&[
            vec![k1.clone(), mul(k1, f1)?, mul(k1, f13)?],
            vec![mul(e1, k1)?, k2.add(&mul3(e1, k1, f1)?)?, u],
            vec![mul(e31, k1)?, v, x],
        ])
    }

    /// `L^{-1} = E^{-1} K^{-1} F^{-1}` from the explicit inverse formulas.
    pub fn explicit_inverse(&self) -> Result<OpSeries<C>> {
        let ki = [invert(&self.k[0])?, invert(&self.k[1])?, invert(&self.k[2])?];
        let (e1, e2, e31, f1, f2, f13) = (&self.e1, &self.e2, &self.e31, &self.f1, &self.f2, &self.f13);
        let ff = mul(f1, f2)?.sub(f13)?; // f₁f₂ − f₁₃
        let ee = mul(e2, e1)?.sub(e31)?; // e₂e₁ − e₃₁
        let u_t = mul(&ff, &ki[2])?;
        let v_t = mul(&ki[2], &ee)?;
        let y = ki[0].add(&mul3(f1, &ki[1], e1)?)?.add(&mul3(&ff, &ki[2], &ee)?)?;
        let x_t = mul(f1, &ki[1])?.neg_series().sub(&mul3(&ff, &ki[2], e2)?)?;
        let y_t = mul(&ki[1], e1)?.neg_series().sub(&mul3(f2, &ki[2], &ee)?)?;
        let mid = ki[1].add(&mul3(f2, &ki[2], e2)?)?;
        assemble(&[
            vec![y, x_t, u_t],
            vec![y_t, mid, mul(f2, &ki[2])?.neg_series()],
            vec![v_t, mul(&ki[2], e2)?.neg_series(), ki[2].clone()],
        ])
    }

    /// The nine factors by name, in a fixed order.
    pub fn named(&self) -> Vec<(&'static str, &OpSeries<C>)> {
        vec![
            ("k1", &self.k[0]),
            ("k2", &self.k[1]),
            ("k3", &self.k[2]),
            ("e1", &self.e1),
            ("e2", &self.e2),
            ("e31", &self.e31),
            ("f1", &self.f1),
            ("f2", &self.f2),
            ("f13", &self.f13),
        ]
    }

    /// A copy with one named factor replaced.
    pub fn with_factor(&self, name: &str, value: OpSeries<C>) -> Result<Self> {
        let mut g = self.clone();
        let slot = match name {
            "k1" => &mut g.k[0],
            "k2" => &mut g.k[1],
            "k3" => &mut g.k[2],
            "e1" => &mut g.e1,
            "e2" => &mut g.e2,
            "e31" => &mut g.e31,
            "f1" => &mut g.f1,
            "f2" => &mut g.f2,
            "f13" => &mut g.f13,
            _ => return Err(Error::Invalid(format!("no Gauss factor `{name}`"))),
        };
        *slot = value;
        Ok(g)
    }
}

trait NegSeries {
    fn neg_series(&self) -> Self;
}

impl<C: Scalar> NegSeries for OpSeries<C> {
    fn neg_series(&self) -> Self {
        self.map_indexed(&|_, m| m.neg())
    }
}

/// Coefficient-by-coefficient differences of two series on their common
/// known range. Returns the number of compared entries and the failures
/// (`m` = series index).
pub fn series_diff<C: Scalar>(a: &OpSeries<C>, b: &OpSeries<C>) -> (usize, Vec<FailingCell>) {
    let lo = a.lo().min(b.lo());
    let hi = a.hi().min(b.hi());
    let shape = a
        .coeffs()
        .chain(b.coeffs())
        .next()
        .map(|(_, m)| (m.rows(), m.cols()))
        .unwrap_or((0, 0));
    let zero = Matrix::zeros(shape.0, shape.1);
    let mut checked = 0;
    let mut failing = Vec::new();
    for k in lo..=hi {
        let x = a.get(k).flatten().unwrap_or(&zero);
        let y = b.get(k).flatten().unwrap_or(&zero);
        checked += shape.0 * shape.1;
        failing.extend(x.diff_cells(y).into_iter().map(|(i, j)| FailingCell {
            m: k,
            n: 0,
            entry: i * shape.1 + j,
        }));
    }
    (checked, failing)
}

fn identity_check<C: Scalar>(name: &str, prod: &OpSeries<C>, n: usize) -> CheckReport {
    let one = OpSeries::monomial(prod.ratio, 0, Matrix::identity(n), prod.hi());
    let (checked, failing) = series_diff(prod, &one);
    CheckReport::from_cells(SUITE, name, checked, failing)
}

/// Recomposition, explicit-inverse and series-inverse checks for one
/// L-operator.
pub fn verify_gauss<C: Scalar>(l: &LOperator<C>) -> Result<Vec<CheckReport>> {
    let start = Instant::now();
    let g = gauss_decompose(l)?;
    let n = l.dim() * l.dim();
    let s = l.sign;
    let (checked, failing) = series_diff(&g.recompose()?, &l.series);
    let mut out = vec![CheckReport::from_cells(SUITE, &format!("recompose L{s}"), checked, failing)];
    let inv = g.explicit_inverse()?;
    out.push(identity_check(&format!("L{s} * explicit inverse"), &l.series.mul(&inv)?, n));
    out.push(identity_check(&format!("explicit inverse * L{s}"), &inv.mul(&l.series)?, n));
    let (checked, failing) = series_diff(&inv, &l.inverse()?);
    out.push(CheckReport::from_cells(SUITE, &format!("explicit inverse = series inverse L{s}"), checked, failing));
    for r in &mut out {
        r.elapsed_ms = start.elapsed().as_millis();
    }
    Ok(out)
}

/// A formal distribution `Σ_m C_m x^m` in one spectral variable, with
/// matrix coefficients (which may carry powers of `a`).
#[derive(Clone, Debug)]
pub struct Current<C: Scalar> {
    coeffs: BTreeMap<i32, Matrix<RatExpr<C>>>,
    /// Exponents whose coefficient is exactly known.
    pub known: Interval,
    /// Exponents that may carry a nonzero coefficient.
    pub support: Interval,
    dim: usize,
}

impl<C: Scalar> Current<C> {
    /// The distribution of `s(z)` for a series in `a/z` or `z/a`.
    pub fn from_series(s: &OpSeries<C>, var: Var, dim: usize) -> Result<Self> {
        let (x, y) = s.ratio;
        let (sign, other) = if x == var {
            (1, y)
        } else if y == var {
            (-1, x)
        } else {
            return Err(Error::Invalid(format!("series is not in {var}")));
        };
        let coeffs = s
            .coeffs()
            .map(|(n, m)| (sign * n, m.map(|e| e.mul_mono(&Mono::var(other, -sign * n)))))
            .collect();
        let (known, support) = if sign > 0 {
            (Interval::at_most(s.hi()), Interval::at_least(s.lo()))
        } else {
            (Interval::at_least(-s.hi()), Interval::at_most(-s.lo()))
        };
        Ok(Current {
            coeffs,
            known,
            support,
            dim,
        })
    }

    /// The zero distribution.
    pub fn zero(dim: usize) -> Self {
        Current {
            coeffs: BTreeMap::new(),
            known: Interval::ALL,
            support: Interval::new(0, -1),
            dim,
        }
    }

    /// Coefficient of `x^m` (`None` when unknown).
    pub fn get(&self, m: i32) -> Option<Matrix<RatExpr<C>>> {
        if !self.support.contains(m) {
            return Some(Matrix::zeros(self.dim, self.dim));
        }
        if !self.known.contains(m) {
            return None;
        }
        Some(self.coeffs.get(&m).cloned().unwrap_or_else(|| Matrix::zeros(self.dim, self.dim)))
    }

    /// Known nonzero coefficients.
    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &Matrix<RatExpr<C>>)> {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    fn combine(&self, o: &Self, sign: bool) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &o.coeffs {
            let v = if sign { v.clone() } else { v.neg() };
            match coeffs.get_mut(k) {
                Some(acc) => *acc = acc.add(&v),
                None => {
                    coeffs.insert(*k, v);
                }
            }
        }
        let known = self.known.meet(&o.known);
        coeffs.retain(|k, v| known.contains(*k) && !v.is_zero());
        Current {
            coeffs,
            known,
            support: self.support.hull(&o.support),
            dim: self.dim,
        }
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    /// Multiplies by a scalar constant.
    pub fn scale(&self, c: &RatExpr<C>) -> Self {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = v.scale(c);
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    /// The distribution at `x·q^k`: the coefficient of `x^m` gains `q^{km}`.
    pub fn shift(&self, k: i32) -> Self {
        let mut out = self.clone();
        for (m, v) in out.coeffs.iter_mut() {
            *v = v.map(|e| e.mul_mono(&Mono::var(Var::S, 2 * k * m)));
        }
        out
    }

    /// Places the distribution on the grid axis of `var` (`vars.0` or
    /// `vars.1`).
    pub fn place(&self, vars: (Var, Var), var: Var, window: (i32, i32)) -> Result<OpGrid<C>> {
        let axis = if var == vars.0 {
            0
        } else if var == vars.1 {
            1
        } else {
            return Err(Error::Invalid(format!("{var} is not a grid variable")));
        };
        let mut cells = BTreeMap::new();
        for (m, v) in &self.coeffs {
            cells.insert(if axis == 0 { (*m, 0) } else { (0, *m) }, v.clone());
        }
        let p = Interval::point(0);
        let support = if axis == 0 {
            Support {
                m: self.support,
                n: p,
                d: self.support,
            }
        } else {
            Support {
                m: p,
                n: self.support,
                d: self.support,
            }
        };
        let known = self.known;
        Ok(CoeffGrid::from_parts(vars, window, support, cells, &move |m, n| {
            known.contains(if axis == 0 { m } else { n })
        }))
    }

    /// Whether the support lies on finitely many cells.
    pub fn is_one_sided(&self) -> bool {
        self.support.lo.is_some() || self.support.hi.is_some()
    }
}

/// Shifts the argument of a series in `z`: `s(z) ↦ s(z q^k)`.
pub fn shift_series<C: Scalar>(s: &OpSeries<C>, var: Var, k: i32) -> OpSeries<C> {
    let (x, y) = s.ratio;
    let sign = if x == var {
        1
    } else if y == var {
        -1
    } else {
        0
    };
    s.map_indexed(&|n, m| m.map(|e| e.mul_mono(&Mono::var(Var::S, 2 * k * sign * n))))
}

/// `β = 1 + q^{-1/2} − q^{1/2}`, the weight of `φ₁` in `φ`.
pub fn beta<C: Scalar>() -> RatExpr<C> {
    RatExpr::one()
        .add(&RatExpr::var_pow(Var::S, -1))
        .sub(&RatExpr::var_pow(Var::S, 1))
}

/// `β' = 1 + q^{1/2} − q^{-1/2}`, the weight of `ψ₂(zq)` in `ψ`.
pub fn beta_prime<C: Scalar>() -> RatExpr<C> {
    RatExpr::one()
        .add(&RatExpr::var_pow(Var::S, 1))
        .sub(&RatExpr::var_pow(Var::S, -1))
}

/// `q − q^{-1}`.
pub fn q_minus_q_inv<C: Scalar>() -> RatExpr<C> {
    RatExpr::var_pow(Var::S, 2).sub(&RatExpr::var_pow(Var::S, -2))
}

/// A named current with its series form (for one-sided currents).
#[derive(Clone, Debug)]
pub struct Binding<C: Scalar> {
    /// The distribution.
    pub current: Current<C>,
    /// The distribution of the inverse, for invertible one-sided currents.
    pub inverse: Option<Current<C>>,
}

/// Every current of the Drinfeld realization by name:
/// `k1p … k3m` (k^±ᵢ), `Xp1, Xm1, Xp2, Xm2` (X^±ᵢ), `Xp, Xm` (X^±),
/// `phi1, phi2, psi1, psi2, phi, psi`.
#[derive(Clone, Debug)]
pub struct CurrentSet<C: Scalar> {
    /// Bindings by name.
    pub bindings: BTreeMap<String, Binding<C>>,
    /// Central charge (always 0 for the evaluation representation).
    pub central_charge: i32,
    /// Matrix size of every coefficient.
    pub dim: usize,
}

impl<C: Scalar> CurrentSet<C> {
    /// Looks up a current.
    pub fn get(&self, name: &str) -> Result<&Binding<C>> {
        self.bindings
            .get(name)
            .ok_or_else(|| Error::UnknownCurrent(name.to_string()))
    }

    /// Binds a one-sided current from a series in `z` (and its inverse).
    pub fn bind_series(&mut self, name: &str, s: &OpSeries<C>) -> Result<()> {
        let current = Current::from_series(s, Var::Z, self.dim)?;
        let inverse = match invert(s) {
            Ok(i) => Some(Current::from_series(&i, Var::Z, self.dim)?),
            Err(_) => None,
        };
        self.bindings.insert(name.to_string(), Binding { current, inverse });
        Ok(())
    }

    /// Binds a two-sided current (no inverse).
    pub fn bind(&mut self, name: &str, current: Current<C>) {
        self.bindings.insert(name.to_string(), Binding { current, inverse: None });
    }

    /// Names in sorted order.
    pub fn names(&self) -> Vec<&str> {
        self.bindings.keys().map(|s| s.as_str()).collect()
    }
}

/// Builds all currents from the `+` and `−` Gauss data.
///
/// `X⁺ᵢ = f⁺ᵢ − f⁻ᵢ`, `X⁻ᵢ = e⁻ᵢ − e⁺ᵢ`, `X^± = (X^±₁(z) + X^±₂(zq))/(q − q⁻¹)`,
/// `φᵢ = k⁺ᵢ₊₁ (k⁺ᵢ)⁻¹`, `ψᵢ = k⁻ᵢ₊₁ (k⁻ᵢ)⁻¹`, `φ = β φ₁(z) − φ₂(zq)` and
/// `ψ = ψ₁(z) − β' ψ₂(zq)`.
pub fn build_currents<C: Scalar>(gp: &GaussData<C>, gm: &GaussData<C>) -> Result<CurrentSet<C>> {
    if gp.sign != Sign::Plus || gm.sign != Sign::Minus {
        return Err(Error::Invalid("build_currents expects (+, −) Gauss data".into()));
    }
    let dim = gp.dim();
    let mut set = CurrentSet {
        bindings: BTreeMap::new(),
        central_charge: 0,
        dim,
    };
    let cur = |s: &OpSeries<C>| Current::from_series(s, Var::Z, dim);
    for (i, (kp, km)) in gp.k.iter().zip(gm.k.iter()).enumerate() {
        set.bind_series(&format!("k{}p", i + 1), kp)?;
        set.bind_series(&format!("k{}m", i + 1), km)?;
    }
    let xp1 = cur(&gp.f1)?.sub(&cur(&gm.f1)?);
    let xm1 = cur(&gm.e1)?.sub(&cur(&gp.e1)?);
    let xp2 = cur(&gp.f2)?.sub(&cur(&gm.f2)?);
    let xm2 = cur(&gm.e2)?.sub(&cur(&gp.e2)?);
    let norm = q_minus_q_inv::<C>().inv().expect("q - 1/q is nonzero");
    let xp = xp1.add(&xp2.shift(1)).scale(&norm);
    let xm = xm1.add(&xm2.shift(1)).scale(&norm);
    set.bind("Xp1", xp1);
    set.bind("Xm1", xm1);
    set.bind("Xp2", xp2);
    set.bind("Xm2", xm2);
    set.bind("Xp", xp);
    set.bind("Xm", xm);
    let ratio_of = |g: &GaussData<C>, i: usize| -> Result<OpSeries<C>> { g.k[i + 1].mul(&invert(&g.k[i])?) };
    let phi1 = ratio_of(gp, 0)?;
    let phi2 = ratio_of(gp, 1)?;
    let psi1 = ratio_of(gm, 0)?;
    let psi2 = ratio_of(gm, 1)?;
    let scale = |s: &OpSeries<C>, c: &RatExpr<C>| s.map_indexed(&|_, m| m.scale(c));
    let phi = scale(&phi1, &beta()).sub(&shift_series(&phi2, Var::Z, 1))?;
    let psi = psi1.sub(&scale(&shift_series(&psi2, Var::Z, 1), &beta_prime()))?;
    for (name, s) in [("phi1", &phi1), ("phi2", &phi2), ("psi1", &psi1), ("psi2", &psi2), ("phi", &phi), ("psi", &psi)] {
        set.bind_series(name, s)?;
    }
    Ok(set)
}

/// One leading Gauss coefficient, rendered for inspection.
#[derive(Clone, Debug, Serialize)]
pub struct LeadingCoefficient {
    /// `"+"` or `"-"`.
    pub sign: String,
    /// Factor name (`k1`, …, `f13`).
    pub factor: String,
    /// Series index of the leading coefficient.
    pub order: i32,
    /// Expansion ratio, e.g. `"a/z"`.
    pub ratio: String,
    /// Row-major entries.
    pub entries: Vec<Vec<String>>,
}

/// The leading coefficients of the nine Gauss factors of both L-operators.
pub fn leading_coefficients<C: Scalar>(gs: &[GaussData<C>]) -> Vec<LeadingCoefficient> {
    let mut out = Vec::new();
    for g in gs {
        for (name, s) in g.named() {
            let (order, m) = match s.coeffs().next() {
                Some((n, m)) => (n, m.clone()),
                None => (s.hi(), Matrix::zeros(g.dim(), g.dim())),
            };
            out.push(LeadingCoefficient {
                sign: g.sign.symbol().to_string(),
                factor: name.to_string(),
                order,
                ratio: format!("{}/{}", s.ratio.0, s.ratio.1),
                entries: (0..m.rows())
                    .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect())
                    .collect(),
            });
        }
    }
    out
}
