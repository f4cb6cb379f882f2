//! Operator-valued series and grids shared by the RLL checks, the Gauss
//! decomposition and the relation evaluator.
//!
//! An [`OpSeries`] is a truncated series whose coefficients are matrices of
//! rational expressions; placing it on the axes of a [`CoeffGrid`] turns the
//! ratio variables into grid exponents. Products of factors are chains of
//! [`convolve`] calls, so every verdict is restricted to the cells whose
//! value is exactly determined by the truncated inputs.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kernel::{convolve, expand, CoeffGrid, GridSplit, LaurentSeries, Mono, Ring, RatExpr, Scalar, Var};
use crate::linalg::Matrix;
use crate::report::{CheckReport, FailingCell};

/// A truncated series with matrix coefficients.
pub type OpSeries<C> = LaurentSeries<Matrix<RatExpr<C>>>;

/// A two-variable grid with matrix cells.
pub type OpGrid<C> = CoeffGrid<Matrix<RatExpr<C>>>;

impl<C: Scalar> GridSplit for Matrix<RatExpr<C>> {
    fn split(&self, v0: Var, v1: Var) -> Result<Vec<((i32, i32), Self)>> {
        let mut parts: BTreeMap<(i32, i32), Matrix<RatExpr<C>>> = BTreeMap::new();
        for (i, j, e) in self.nonzero() {
            for (key, part) in e.split(v0, v1)? {
                parts
                    .entry(key)
                    .or_insert_with(|| Matrix::zeros(self.rows(), self.cols()))
                    .set(i, j, part);
            }
        }
        Ok(parts.into_iter().collect())
    }

    fn mul_mono(&self, m: &Mono) -> Self {
        self.map(|e| e.mul_mono(m))
    }
}

/// Expands every entry of a rational matrix in powers of `ratio.0 / ratio.1`
/// up to index `hi` and collects the result as one operator series.
pub fn expand_matrix<C: Scalar>(m: &Matrix<RatExpr<C>>, ratio: (Var, Var), hi: i32) -> Result<OpSeries<C>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut coeffs: BTreeMap<i32, Matrix<RatExpr<C>>> = BTreeMap::new();
    let mut lo = i32::MAX;
    let mut band: Option<(i32, i32)> = Some((0, 0));
    let mut any = false;
    for (i, j, e) in m.nonzero() {
        let s = expand(e, ratio, (0, hi))?;
        any = true;
        lo = lo.min(s.lo());
        band = match (band, s.band()) {
            (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
            _ => None,
        };
        for (n, c) in s.coeffs() {
            coeffs
                .entry(n)
                .or_insert_with(|| Matrix::zeros(rows, cols))
                .set(i, j, c.clone());
        }
    }
    if !any {
        lo = 0;
    }
    Ok(LaurentSeries::from_coeffs(ratio, lo.min(0), hi, coeffs).with_band(band))
}

/// Inverts an operator series whose lowest coefficient is an invertible
/// matrix.
pub fn invert<C: Scalar>(s: &OpSeries<C>) -> Result<OpSeries<C>> {
    s.inverse(&|m: &Matrix<RatExpr<C>>| m.inverse().ok())
}

/// Renames the spectral variable of a series (`z` to `w`, say), keeping its
/// expansion direction.
pub fn at_var<C: Scalar>(s: &OpSeries<C>, from: Var, to: Var) -> OpSeries<C> {
    let (x, y) = s.ratio;
    let r = |v: Var| if v == from { to } else { v };
    s.with_ratio((r(x), r(y)))
}

/// Places a series on the grid `vars × window`, after mapping every
/// coefficient (e.g. embedding it into a larger space).
pub fn place<C: Scalar>(
    s: &OpSeries<C>,
    vars: (Var, Var),
    window: (i32, i32),
    map: &dyn Fn(&Matrix<RatExpr<C>>) -> Matrix<RatExpr<C>>,
) -> Result<OpGrid<C>> {
    let mapped = s.map_indexed(&|_, c| map(c));
    CoeffGrid::from_series(&mapped, vars, window)
}

/// The ordered product of grid factors.
pub fn product<C: Scalar>(factors: &[OpGrid<C>]) -> Result<OpGrid<C>> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Invalid("empty product".into()))?;
    let mut acc = first.clone();
    for f in rest {
        acc = convolve(&acc, f, &|a: &Matrix<RatExpr<C>>, b: &Matrix<RatExpr<C>>| a.mul(b))?;
    }
    Ok(acc)
}

/// Multiplies a matrix grid by a scalar grid (cellwise convolution).
pub fn scalar_times<C: Scalar>(c: &CoeffGrid<RatExpr<C>>, g: &OpGrid<C>) -> Result<OpGrid<C>> {
    convolve(c, g, &|x: &RatExpr<C>, m: &Matrix<RatExpr<C>>| m.scale(x))
}

/// A pass/fail report from a residual grid: every known cell is compared
/// with zero, entry by entry. An empty safe window gives `skipped`.
pub fn residual_report<C: Scalar>(suite: &str, relation: &str, residual: &OpGrid<C>, entries: usize) -> CheckReport {
    let window = residual.safe_window();
    let mut failing = Vec::new();
    for (&(m, n), cell) in residual.cells() {
        for (i, j, _) in cell.nonzero() {
            failing.push(FailingCell {
                m,
                n,
                entry: i * cell.cols() + j,
            });
        }
    }
    let mut rep = CheckReport::from_cells(suite, relation, window.cells * entries, failing);
    rep.safe_window = Some(window);
    rep
}
