//! Truncated one-variable Laurent series in a ratio `t = x / y`, and
//! directional expansion of rational expressions.
//!
//! A series records the index `lo` below which every coefficient is exactly
//! zero and the index `hi` up to which coefficients are known. Binary
//! operations propagate both bounds, so callers never compare a truncated
//! coefficient by accident.

use std::collections::BTreeMap;

use super::{MPoly, Mono, Ring, RatExpr, Scalar, Var};
use crate::error::{Error, Result};

/// `Σ_{n ≥ lo} coeffs[n] · (x/y)^n`, known for `n ≤ hi`.
#[derive(Clone, Debug)]
pub struct LaurentSeries<T> {
    /// `(x, y)`: the series is in powers of `x / y`.
    pub ratio: (Var, Var),
    lo: i32,
    hi: i32,
    coeffs: BTreeMap<i32, T>,
    /// Range of exponents of `y` that may occur inside coefficients, for
    /// every index (known or not); `None` when unbounded.
    band: Option<(i32, i32)>,
}

impl<T: Ring> LaurentSeries<T> {
    /// Builds a series from known coefficients `lo..=hi` (zeros may be
    /// omitted). Coefficients are assumed free of `y` (band `(0, 0)`).
    pub fn from_coeffs(ratio: (Var, Var), lo: i32, hi: i32, coeffs: BTreeMap<i32, T>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(n, c)| *n >= lo && *n <= hi && !c.is_zero())
            .collect();
        LaurentSeries {
            ratio,
            lo,
            hi,
            coeffs,
            band: Some((0, 0)),
        }
    }

    /// A series with a single known-exact term (a monomial in `t`); all other
    /// coefficients up to `hi` are zero.
    pub fn monomial(ratio: (Var, Var), n: i32, c: T, hi: i32) -> Self {
        let mut m = BTreeMap::new();
        m.insert(n, c);
        Self::from_coeffs(ratio, n, hi.max(n), m)
    }

    /// Overrides the `y`-exponent band.
    pub fn with_band(mut self, band: Option<(i32, i32)>) -> Self {
        self.band = band;
        self
    }

    /// Index below which everything is exactly zero.
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Last known index.
    pub fn hi(&self) -> i32 {
        self.hi
    }

    /// The `y`-exponent band of the coefficients.
    pub fn band(&self) -> Option<(i32, i32)> {
        self.band
    }

    /// Known window `[lo, hi]` (empty if `hi < lo`).
    pub fn window(&self) -> (i32, i32) {
        (self.lo, self.hi)
    }

    /// Coefficient at `n`: `Some(None)` for a known zero, `None` if unknown.
    pub fn get(&self, n: i32) -> Option<Option<&T>> {
        if n < self.lo {
            Some(None)
        } else if n > self.hi {
            None
        } else {
            Some(self.coeffs.get(&n))
        }
    }

    /// Known nonzero coefficients in increasing index order.
    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &T)> {
        self.coeffs.iter().map(|(n, c)| (*n, c))
    }

    /// Drops knowledge above `hi`.
    pub fn truncate(&self, hi: i32) -> Self {
        let hi = hi.min(self.hi);
        LaurentSeries {
            ratio: self.ratio,
            lo: self.lo,
            hi,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(n, _)| **n <= hi)
                .map(|(n, c)| (*n, c.clone()))
                .collect(),
            band: self.band,
        }
    }

    /// Applies `f(index, coefficient)` to every known coefficient.
    pub fn map_indexed<U: Ring>(&self, f: &dyn Fn(i32, &T) -> U) -> LaurentSeries<U> {
        LaurentSeries {
            ratio: self.ratio,
            lo: self.lo,
            hi: self.hi,
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (*n, f(*n, c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
            band: self.band,
        }
    }

    /// Renames the ratio variables.
    pub fn with_ratio(&self, ratio: (Var, Var)) -> Self {
        let mut s = self.clone();
        s.ratio = ratio;
        s
    }

    /// Sum; fails if the ratios differ.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &|a, b| match (a, b) {
            (Some(a), Some(b)) => a.add(b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        })
    }

    /// Difference; fails if the ratios differ.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &|a, b| match (a, b) {
            (Some(a), Some(b)) => a.sub(b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.neg(),
            (None, None) => unreachable!(),
        })
    }

    fn combine(&self, other: &Self, f: &dyn Fn(Option<&T>, Option<&T>) -> T) -> Result<Self> {
        if self.ratio != other.ratio {
            return Err(Error::Invalid(format!(
                "cannot combine series in {}/{} and {}/{}",
                self.ratio.0, self.ratio.1, other.ratio.0, other.ratio.1
            )));
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi.min(other.hi);
        let mut coeffs = BTreeMap::new();
        let keys: std::collections::BTreeSet<i32> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        for n in keys {
            if n > hi {
                continue;
            }
            let v = f(self.coeffs.get(&n), other.coeffs.get(&n));
            if !v.is_zero() {
                coeffs.insert(n, v);
            }
        }
        Ok(LaurentSeries {
            ratio: self.ratio,
            lo,
            hi,
            coeffs,
            band: band_hull(self.band, other.band),
        })
    }

    /// Cauchy product with an arbitrary coefficient product `f`.
    pub fn mul_with<U: Ring, V: Ring>(
        &self,
        other: &LaurentSeries<U>,
        f: &dyn Fn(&T, &U) -> V,
    ) -> Result<LaurentSeries<V>> {
        if self.ratio != other.ratio {
            return Err(Error::Invalid(format!(
                "cannot multiply series in {}/{} and {}/{}",
                self.ratio.0, self.ratio.1, other.ratio.0, other.ratio.1
            )));
        }
        let lo = self.lo + other.lo;
        let hi = (self.hi + other.lo).min(other.hi + self.lo);
        let mut coeffs: BTreeMap<i32, V> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let n = i + j;
                if n > hi {
                    break;
                }
                let p = f(a, b);
                match coeffs.get_mut(&n) {
                    Some(acc) => *acc = acc.add(&p),
                    None => {
                        coeffs.insert(n, p);
                    }
                }
            }
        }
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let band = match (self.band, other.band) {
            (Some(a), Some(b)) => Some((a.0 + b.0, a.1 + b.1)),
            _ => None,
        };
        Ok(LaurentSeries {
            ratio: self.ratio,
            lo,
            hi,
            coeffs,
            band,
        })
    }

    /// Cauchy product (coefficients multiplied in order `self · other`).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with(other, &|a, b| a.mul(b))
    }

    /// Two-sided inverse by recursive inversion of the lowest coefficient.
    ///
    /// `inv0` inverts the order-`lo` coefficient; the recursion
    /// `b_k = -a_0^{-1} Σ_{j≥1} a_j b_{k-j}` fills the rest.
    pub fn inverse(&self, inv0: &dyn Fn(&T) -> Option<T>) -> Result<Self> {
        if self.band != Some((0, 0)) {
            return Err(Error::SeriesNotInvertible(
                "coefficients depend on the ratio denominator".into(),
            ));
        }
        if self.hi < self.lo {
            return Err(Error::SeriesNotInvertible("no known coefficients".into()));
        }
        let a0 = self
            .coeffs
            .get(&self.lo)
            .ok_or_else(|| Error::SeriesNotInvertible("order-0 coefficient is zero".into()))?;
        let a0_inv = inv0(a0)
            .ok_or_else(|| Error::SeriesNotInvertible("order-0 coefficient is singular".into()))?;
        let len = (self.hi - self.lo) as usize + 1;
        let a: Vec<Option<&T>> = (0..len).map(|k| self.coeffs.get(&(self.lo + k as i32))).collect();
        let mut b: Vec<Option<T>> = Vec::with_capacity(len);
        b.push(Some(a0_inv.clone()));
        for k in 1..len {
            let mut acc: Option<T> = None;
            for j in 1..=k {
                if let (Some(aj), Some(bk)) = (a[j], b[k - j].as_ref()) {
                    let p = aj.mul(bk);
                    acc = Some(match acc {
                        Some(x) => x.add(&p),
                        None => p,
                    });
                }
            }
            b.push(acc.map(|s| a0_inv.mul(&s).neg()).filter(|v| !v.is_zero()));
        }
        let lo = -self.lo;
        let coeffs = b
            .into_iter()
            .enumerate()
            .filter_map(|(k, c)| c.map(|c| (lo + k as i32, c)))
            .collect();
        Ok(LaurentSeries {
            ratio: self.ratio,
            lo,
            hi: lo + len as i32 - 1,
            coeffs,
            band: Some((0, 0)),
        })
    }
}

fn band_hull(a: Option<(i32, i32)>, b: Option<(i32, i32)>) -> Option<(i32, i32)> {
    match (a, b) {
        (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
        _ => None,
    }
}

/// Expands `f` in nonnegative-going powers of `t = x / y`, keeping indices
/// up to `hi`.
///
/// The substitution `x = t·y` turns numerator and denominator into Laurent
/// polynomials in `t` whose coefficients involve `y` and the remaining
/// variables; the denominator's lowest-order coefficient is inverted and the
/// rest follows by geometric-series recursion. The returned series starts at
/// its exact valuation, which may lie below the requested `lo`; coefficients
/// in `[valuation, lo)` are kept rather than dropped.
pub fn expand<C: Scalar>(
    f: &RatExpr<C>,
    ratio: (Var, Var),
    window: (i32, i32),
) -> Result<LaurentSeries<RatExpr<C>>> {
    let (x, y) = ratio;
    if x == y {
        return Err(Error::NonExpandable(format!("degenerate ratio {x}/{y}")));
    }
    let to_t = |p: &MPoly<C>| -> BTreeMap<i32, MPoly<C>> {
        p.collect_by(x)
            .into_iter()
            .map(|(i, c)| (i, c.mul_mono(&Mono::var(y, i))))
            .collect()
    };
    let num = to_t(f.num());
    let den = to_t(f.den());
    let (&i0, d0) = den
        .iter()
        .next()
        .ok_or_else(|| Error::NonExpandable("zero denominator".into()))?;
    let d0_inv = RatExpr::from_poly(d0.clone())
        .inv()
        .ok_or_else(|| Error::NonExpandable("lowest-order denominator coefficient vanishes".into()))?;
    let n_lo = match num.keys().next() {
        Some(&k) => k,
        None => {
            return Ok(LaurentSeries::from_coeffs(ratio, window.0, window.1, BTreeMap::new()))
        }
    };
    let valuation = n_lo - i0;
    let hi = window.1;
    // Homogeneity in (x, y) of the denominator bounds the y-exponents of
    // every coefficient, known or not.
    let xy = [x, y];
    let band = match f.den().total_degree_range(&xy) {
        Some((dl, dh)) if dl == dh => f
            .num()
            .total_degree_range(&xy)
            .map(|(nl, nh)| (nl - dl, nh - dl)),
        _ => None,
    };
    if hi < valuation {
        return Ok(LaurentSeries {
            ratio,
            lo: valuation,
            hi,
            coeffs: BTreeMap::new(),
            band,
        });
    }
    // e = 1 / D'(t) with D'_j = D_{i0 + j}.
    let depth = (hi - valuation) as usize;
    let dprime: Vec<RatExpr<C>> = (0..=depth)
        .map(|j| {
            den.get(&(i0 + j as i32))
                .map(|p| RatExpr::from_poly(p.clone()))
                .unwrap_or_else(RatExpr::zero)
        })
        .collect();
    let mut e: Vec<RatExpr<C>> = vec![d0_inv.clone()];
    for k in 1..=depth {
        let mut acc = RatExpr::zero();
        for j in 1..=k {
            if !dprime[j].is_zero() && !e[k - j].is_zero() {
                acc = acc.add(&dprime[j].mul(&e[k - j]));
            }
        }
        e.push(d0_inv.mul(&acc).neg());
    }
    let mut coeffs = BTreeMap::new();
    for n in valuation..=hi {
        let mut acc = RatExpr::zero();
        for (&i, ni) in &num {
            let k = n + i0 - i;
            if k < 0 || k as usize > depth {
                continue;
            }
            let ek = &e[k as usize];
            if !ek.is_zero() {
                acc = acc.add(&RatExpr::from_poly(ni.clone()).mul(ek));
            }
        }
        if !acc.is_zero() {
            coeffs.insert(n, acc);
        }
    }
    Ok(LaurentSeries {
        ratio,
        lo: valuation,
        hi,
        coeffs,
        band,
    })
}
