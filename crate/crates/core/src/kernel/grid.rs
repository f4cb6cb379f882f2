//! Two-variable coefficient grids for products of currents and formal delta
//! distributions.
//!
//! A grid stores the coefficient of `z^m w^n` for cells of a square box, an
//! explicit set of cells whose value is *exactly* known, and a support
//! over-approximation outside of which every coefficient is exactly zero.
//! Products enumerate all contributing pairs of a target cell; the cell is
//! known only if that set is finite and every pair is known. This is the safe
//! window bookkeeping: truncation can only shrink the known set, never
//! produce a wrong known value.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{LaurentSeries, Mono, Ring, RatExpr, Scalar, Var};
use crate::error::{Error, Result};

/// A possibly unbounded integer interval; `None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interval {
    /// Lower end (inclusive).
    pub lo: Option<i32>,
    /// Upper end (inclusive).
    pub hi: Option<i32>,
}

impl Interval {
    /// The whole line.
    pub const ALL: Interval = Interval { lo: None, hi: None };

    /// `[lo, hi]`.
    pub fn new(lo: i32, hi: i32) -> Interval {
        Interval {
            lo: Some(lo),
            hi: Some(hi),
        }
    }

    /// `{x}`.
    pub fn point(x: i32) -> Interval {
        Interval::new(x, x)
    }

    /// `[lo, ∞)`.
    pub fn at_least(lo: i32) -> Interval {
        Interval { lo: Some(lo), hi: None }
    }

    /// `(-∞, hi]`.
    pub fn at_most(hi: i32) -> Interval {
        Interval { lo: None, hi: Some(hi) }
    }

    /// Membership.
    pub fn contains(&self, x: i32) -> bool {
        self.lo.map_or(true, |l| x >= l) && self.hi.map_or(true, |h| x <= h)
    }

    /// Whether both ends are finite.
    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    /// Whether the interval is provably empty.
    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    /// Intersection.
    pub fn meet(&self, o: &Interval) -> Interval {
        Interval {
            lo: match (self.lo, o.lo) {
                (Some(a), Some(b)) => Some(a.max(b)),
                (a, None) => a,
                (None, b) => b,
            },
            hi: match (self.hi, o.hi) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, None) => a,
                (None, b) => b,
            },
        }
    }

    /// Smallest interval containing both.
    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: match (self.lo, o.lo) {
                (Some(a), Some(b)) => Some(a.min(b)),
                _ => None,
            },
            hi: match (self.hi, o.hi) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            },
        }
    }

    /// Minkowski sum.
    pub fn plus(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.zip(o.lo).map(|(a, b)| a + b),
            hi: self.hi.zip(o.hi).map(|(a, b)| a + b),
        }
    }

    /// `{c - x : x ∈ self}`.
    pub fn reflect(&self, c: i32) -> Interval {
        Interval {
            lo: self.hi.map(|h| c - h),
            hi: self.lo.map(|l| c - l),
        }
    }

    /// `{x + c : x ∈ self}`.
    pub fn shift(&self, c: i32) -> Interval {
        Interval {
            lo: self.lo.map(|l| l + c),
            hi: self.hi.map(|h| h + c),
        }
    }
}

/// Support over-approximation: cell `(m, n)` can be nonzero only if
/// `m ∈ m`, `n ∈ n` and `m + n ∈ d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Support {
    /// Range of the first exponent.
    pub m: Interval,
    /// Range of the second exponent.
    pub n: Interval,
    /// Range of the exponent sum.
    pub d: Interval,
}

impl Support {
    /// No constraint at all.
    pub const ALL: Support = Support {
        m: Interval::ALL,
        n: Interval::ALL,
        d: Interval::ALL,
    };

    /// Membership.
    pub fn contains(&self, m: i32, n: i32) -> bool {
        self.m.contains(m) && self.n.contains(n) && self.d.contains(m + n)
    }

    /// Support of a product (Minkowski sum).
    pub fn plus(&self, o: &Support) -> Support {
        Support {
            m: self.m.plus(&o.m),
            n: self.n.plus(&o.n),
            d: self.d.plus(&o.d),
        }
    }

    /// Support of a sum (hull).
    pub fn hull(&self, o: &Support) -> Support {
        Support {
            m: self.m.hull(&o.m),
            n: self.n.hull(&o.n),
            d: self.d.hull(&o.d),
        }
    }

    /// Support with the two axes exchanged.
    pub fn transpose(&self) -> Support {
        Support {
            m: self.n,
            n: self.m,
            d: self.d,
        }
    }
}

/// Result of looking up one cell.
#[derive(Debug)]
pub enum CellRef<'a, T> {
    /// Exactly zero.
    Zero,
    /// Exactly this value.
    Value(&'a T),
    /// Not determined by the truncated data.
    Unknown,
}

/// Extent of the verified region of a grid, as recorded in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SafeWindow {
    /// Number of exactly known cells inside the support.
    pub cells: usize,
    /// Bounding range of the first exponent of those cells.
    pub m: Option<(i32, i32)>,
    /// Bounding range of the second exponent of those cells.
    pub n: Option<(i32, i32)>,
}

impl SafeWindow {
    /// Whether no cell could be verified.
    pub fn is_empty(&self) -> bool {
        self.cells == 0
    }
}

/// Coefficients that can be split by the exponents of two grid variables.
pub trait GridSplit: Ring {
    /// Splits into parts indexed by the exponents of `(v0, v1)`, each part
    /// free of both variables.
    fn split(&self, v0: Var, v1: Var) -> Result<Vec<((i32, i32), Self)>>;
    /// Multiplies by a monomial.
    fn mul_mono(&self, m: &Mono) -> Self;
}

impl<C: Scalar> GridSplit for RatExpr<C> {
    fn split(&self, v0: Var, v1: Var) -> Result<Vec<((i32, i32), Self)>> {
        if self.den().contains_var(v0) || self.den().contains_var(v1) {
            return Err(Error::NonExpandable(format!(
                "coefficient denominator depends on {v0} or {v1}: {self}"
            )));
        }
        let mut parts: BTreeMap<(i32, i32), super::MPoly<C>> = BTreeMap::new();
        for (m, c) in self.num().terms() {
            let key = (m.exp(v0), m.exp(v1));
            parts
                .entry(key)
                .or_default()
                .add_term(m.without(v0).without(v1), c.clone());
        }
        Ok(parts
            .into_iter()
            .filter_map(|(k, p)| RatExpr::new(p, self.den().clone()).map(|r| (k, r)))
            .collect())
    }

    fn mul_mono(&self, m: &Mono) -> Self {
        self.mul_term(&C::one(), m)
    }
}

/// Coefficient array for `z^m w^n` on the box `window × window`.
#[derive(Clone, Debug)]
pub struct CoeffGrid<T> {
    /// The formal variables of the two axes.
    pub vars: (Var, Var),
    window: (i32, i32),
    cells: BTreeMap<(i32, i32), T>,
    known: BTreeSet<(i32, i32)>,
    support: Support,
}

impl<T: Ring> CoeffGrid<T> {
    /// A grid from explicit exact cells; every box cell is known (cells not
    /// listed are zero) and the support is the bounding box of the entries.
    pub fn from_exact(vars: (Var, Var), window: (i32, i32), cells: BTreeMap<(i32, i32), T>) -> Self {
        let cells: BTreeMap<_, _> = cells.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let support = if cells.is_empty() {
            Support {
                m: Interval::new(0, -1),
                n: Interval::new(0, -1),
                d: Interval::new(0, -1),
            }
        } else {
            let ms = cells.keys().map(|k| k.0);
            let ns = cells.keys().map(|k| k.1);
            let ds = cells.keys().map(|k| k.0 + k.1);
            let r = |it: &mut dyn Iterator<Item = i32>| {
                let v: Vec<i32> = it.collect();
                Interval::new(*v.iter().min().unwrap(), *v.iter().max().unwrap())
            };
            Support {
                m: r(&mut ms.into_iter()),
                n: r(&mut ns.into_iter()),
                d: r(&mut ds.into_iter()),
            }
        };
        let mut g = CoeffGrid {
            vars,
            window,
            cells: BTreeMap::new(),
            known: BTreeSet::new(),
            support,
        };
        for m in window.0..=window.1 {
            for n in window.0..=window.1 {
                if support.contains(m, n) {
                    g.known.insert((m, n));
                }
            }
        }
        g.cells = cells
            .into_iter()
            .filter(|(k, _)| in_box(window, k.0, k.1))
            .collect();
        g
    }

    /// A grid from parts, with an explicit support and known predicate.
    pub fn from_parts(
        vars: (Var, Var),
        window: (i32, i32),
        support: Support,
        cells: BTreeMap<(i32, i32), T>,
        is_known: &dyn Fn(i32, i32) -> bool,
    ) -> Self {
        let mut known = BTreeSet::new();
        for m in window.0..=window.1 {
            for n in window.0..=window.1 {
                if support.contains(m, n) && is_known(m, n) {
                    known.insert((m, n));
                }
            }
        }
        let cells = cells
            .into_iter()
            .filter(|(k, v)| known.contains(k) && !v.is_zero())
            .collect();
        CoeffGrid {
            vars,
            window,
            cells,
            known,
            support,
        }
    }

    /// The evaluation box `[lo, hi]` (same on both axes).
    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    /// The support over-approximation.
    pub fn support(&self) -> &Support {
        &self.support
    }

    /// Known nonzero cells in increasing `(m, n)` order.
    pub fn cells(&self) -> impl Iterator<Item = (&(i32, i32), &T)> {
        self.cells.iter()
    }

    /// Whether a cell's value is determined.
    pub fn is_known(&self, m: i32, n: i32) -> bool {
        !self.support.contains(m, n) || self.known.contains(&(m, n))
    }

    /// Looks up a cell.
    pub fn get(&self, m: i32, n: i32) -> CellRef<'_, T> {
        if !self.support.contains(m, n) {
            return CellRef::Zero;
        }
        if !self.known.contains(&(m, n)) {
            return CellRef::Unknown;
        }
        match self.cells.get(&(m, n)) {
            Some(v) => CellRef::Value(v),
            None => CellRef::Zero,
        }
    }

    /// The verified region: known cells inside the support.
    pub fn safe_window(&self) -> SafeWindow {
        let cells: Vec<&(i32, i32)> = self.known.iter().collect();
        let range = |f: &dyn Fn(&(i32, i32)) -> i32| {
            let v: Vec<i32> = cells.iter().map(|c| f(c)).collect();
            if v.is_empty() {
                None
            } else {
                Some((*v.iter().min().unwrap(), *v.iter().max().unwrap()))
            }
        };
        SafeWindow {
            cells: cells.len(),
            m: range(&|c| c.0),
            n: range(&|c| c.1),
        }
    }

    /// Applies `f` to every known value.
    pub fn map<U: Ring>(&self, f: &(dyn Fn(&T) -> U + Sync)) -> CoeffGrid<U> {
        CoeffGrid {
            vars: self.vars,
            window: self.window,
            cells: self
                .cells
                .iter()
                .map(|(k, v)| (*k, f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            known: self.known.clone(),
            support: self.support,
        }
    }

    /// Applies `f(m, n, value)` to every known value.
    pub fn map_cells(&self, f: &dyn Fn(i32, i32, &T) -> T) -> CoeffGrid<T> {
        CoeffGrid {
            vars: self.vars,
            window: self.window,
            cells: self
                .cells
                .iter()
                .map(|(k, v)| (*k, f(k.0, k.1, v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            known: self.known.clone(),
            support: self.support,
        }
    }

    /// Exchanges the two axes: cell `(m, n)` moves to `(n, m)`.
    pub fn transpose(&self) -> CoeffGrid<T> {
        CoeffGrid {
            vars: (self.vars.1, self.vars.0),
            window: self.window,
            cells: self.cells.iter().map(|(k, v)| ((k.1, k.0), v.clone())).collect(),
            known: self.known.iter().map(|k| (k.1, k.0)).collect(),
            support: self.support.transpose(),
        }
    }

    /// Restricts knowledge to cells satisfying `keep`.
    pub fn restrict(&self, keep: &dyn Fn(i32, i32) -> bool) -> CoeffGrid<T> {
        let known: BTreeSet<_> = self.known.iter().filter(|k| keep(k.0, k.1)).copied().collect();
        CoeffGrid {
            vars: self.vars,
            window: self.window,
            cells: self
                .cells
                .iter()
                .filter(|(k, _)| known.contains(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            known,
            support: self.support,
        }
    }

    /// Cellwise binary operation; a cell is known iff it is known in both.
    pub fn zip_with(&self, other: &CoeffGrid<T>, f: &dyn Fn(Option<&T>, Option<&T>) -> T) -> Result<CoeffGrid<T>> {
        if self.vars != other.vars || self.window != other.window {
            return Err(Error::Invalid("grids with different variables or windows".into()));
        }
        let support = self.support.hull(&other.support);
        let mut known = BTreeSet::new();
        let mut cells = BTreeMap::new();
        for m in self.window.0..=self.window.1 {
            for n in self.window.0..=self.window.1 {
                if !support.contains(m, n) {
                    continue;
                }
                let a = self.get(m, n);
                let b = other.get(m, n);
                let (a, b) = match (a, b) {
                    (CellRef::Unknown, _) | (_, CellRef::Unknown) => continue,
                    (a, b) => (as_opt(a), as_opt(b)),
                };
                known.insert((m, n));
                if a.is_none() && b.is_none() {
                    continue;
                }
                let v = f(a, b);
                if !v.is_zero() {
                    cells.insert((m, n), v);
                }
            }
        }
        Ok(CoeffGrid {
            vars: self.vars,
            window: self.window,
            cells,
            known,
            support,
        })
    }

    /// Sum.
    pub fn add(&self, other: &CoeffGrid<T>) -> Result<CoeffGrid<T>> {
        self.zip_with(other, &|a, b| match (a, b) {
            (Some(a), Some(b)) => a.add(b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!(),
        })
    }

    /// Difference.
    pub fn sub(&self, other: &CoeffGrid<T>) -> Result<CoeffGrid<T>> {
        self.zip_with(other, &|a, b| match (a, b) {
            (Some(a), Some(b)) => a.sub(b),
            (Some(a), None) => a.clone(),
            (None, Some(b)) => b.neg(),
            (None, None) => unreachable!(),
        })
    }

    /// The zero grid with empty support (every cell known).
    pub fn zero(vars: (Var, Var), window: (i32, i32)) -> Self {
        Self::from_exact(vars, window, BTreeMap::new())
    }

    /// Places a series onto the grid axes. The series variables that match
    /// `vars` become grid exponents; any other variable stays inside the
    /// coefficients.
    pub fn from_series(series: &LaurentSeries<T>, vars: (Var, Var), window: (i32, i32)) -> Result<Self>
    where
        T: GridSplit,
    {
        let (x, y) = series.ratio;
        let axis = |v: Var| {
            if v == vars.0 {
                Some(0usize)
            } else if v == vars.1 {
                Some(1usize)
            } else {
                None
            }
        };
        let (ax, ay) = (axis(x), axis(y));
        let (lo, hi) = (series.lo(), series.hi());
        let band = series.band();
        let mut cells: BTreeMap<(i32, i32), T> = BTreeMap::new();
        for (n, c) in series.coeffs() {
            let mut pre = Mono::ONE;
            let mut pos = [0i32; 2];
            match ax {
                Some(i) => pos[i] += n,
                None => pre = pre.mul(&Mono::var(x, n)),
            }
            match ay {
                Some(i) => pos[i] -= n,
                None => pre = pre.mul(&Mono::var(y, -n)),
            }
            for ((e0, e1), part) in c.split(vars.0, vars.1)? {
                if ay != Some(0) && e0 != 0 || ay != Some(1) && e1 != 0 {
                    return Err(Error::NonExpandable(
                        "series coefficient involves the other grid variable".into(),
                    ));
                }
                let key = (pos[0] + e0, pos[1] + e1);
                let v = if pre.is_one() { part } else { part.mul_mono(&pre) };
                match cells.get_mut(&key) {
                    Some(acc) => *acc = acc.add(&v),
                    None => {
                        cells.insert(key, v);
                    }
                }
            }
        }
        let support;
        let known: Box<dyn Fn(i32, i32) -> bool> = match (ax, ay) {
            (Some(i), Some(j)) => {
                let (klo, khi) = band.ok_or_else(|| {
                    Error::NonExpandable("unbounded coefficient band for a two-variable series".into())
                })?;
                let mut iv = [Interval::ALL; 2];
                iv[i] = Interval::at_least(lo);
                iv[j] = Interval::at_most(khi - lo);
                support = Support {
                    m: iv[0],
                    n: iv[1],
                    d: Interval::new(klo, khi),
                };
                Box::new(move |m, n| [m, n][i] <= hi)
            }
            (None, Some(j)) => {
                let (_, khi) = band.ok_or_else(|| {
                    Error::NonExpandable("unbounded coefficient band".into())
                })?;
                let mut iv = [Interval::point(0); 2];
                iv[j] = Interval::at_most(khi - lo);
                support = Support {
                    m: iv[0],
                    n: iv[1],
                    d: iv[j],
                };
                Box::new(move |m, n| [m, n][j] >= khi - hi)
            }
            (Some(i), None) => {
                let mut iv = [Interval::point(0); 2];
                iv[i] = Interval::at_least(lo);
                support = Support {
                    m: iv[0],
                    n: iv[1],
                    d: iv[i],
                };
                Box::new(move |m, n| [m, n][i] <= hi)
            }
            (None, None) => {
                return Err(Error::NonExpandable(
                    "series ratio involves no grid variable".into(),
                ))
            }
        };
        Ok(Self::from_parts(vars, window, support, cells, &*known))
    }
}

fn as_opt<T>(c: CellRef<'_, T>) -> Option<&T> {
    match c {
        CellRef::Value(v) => Some(v),
        _ => None,
    }
}

fn in_box(window: (i32, i32), m: i32, n: i32) -> bool {
    m >= window.0 && m <= window.1 && n >= window.0 && n <= window.1
}

enum CellOutcome<T> {
    Zero,
    Value(T),
    Unknown,
}

/// Two-variable Cauchy product `a · b` with coefficient product `f`,
/// evaluated on the common box. Cells with infinitely many or unknown
/// contributions are left unknown.
pub fn convolve<A: Ring, B: Ring, C: Ring>(
    a: &CoeffGrid<A>,
    b: &CoeffGrid<B>,
    f: &(dyn Fn(&A, &B) -> C + Sync),
) -> Result<CoeffGrid<C>> {
    if a.vars != b.vars || a.window != b.window {
        return Err(Error::Invalid("grids with different variables or windows".into()));
    }
    let window = a.window;
    let support = a.support.plus(&b.support);
    let targets: Vec<(i32, i32)> = (window.0..=window.1)
        .flat_map(|m| (window.0..=window.1).map(move |n| (m, n)))
        .filter(|&(m, n)| support.contains(m, n))
        .collect();
    let outcomes: Vec<((i32, i32), CellOutcome<C>)> = targets
        .par_iter()
        .map(|&(m, n)| ((m, n), convolve_cell(a, b, f, m, n)))
        .collect();
    let mut cells = BTreeMap::new();
    let mut known = BTreeSet::new();
    for (k, o) in outcomes {
        match o {
            CellOutcome::Zero => {
                known.insert(k);
            }
            CellOutcome::Value(v) => {
                known.insert(k);
                if !v.is_zero() {
                    cells.insert(k, v);
                }
            }
            CellOutcome::Unknown => {}
        }
    }
    Ok(CoeffGrid {
        vars: a.vars,
        window,
        cells,
        known,
        support,
    })
}

fn convolve_cell<A: Ring, B: Ring, C: Ring>(
    a: &CoeffGrid<A>,
    b: &CoeffGrid<B>,
    f: &dyn Fn(&A, &B) -> C,
    m: i32,
    n: i32,
) -> CellOutcome<C> {
    let (sa, sb) = (&a.support, &b.support);
    let m1 = sa.m.meet(&sb.m.reflect(m));
    let n1 = sa.n.meet(&sb.n.reflect(n));
    let d1 = sa.d.meet(&sb.d.reflect(m + n));
    if m1.is_empty() || n1.is_empty() || d1.is_empty() {
        return CellOutcome::Zero;
    }
    let mut pairs: Vec<(i32, i32)> = Vec::new();
    if m1.is_bounded() {
        for i in m1.lo.unwrap()..=m1.hi.unwrap() {
            let r = n1.meet(&d1.shift(-i));
            if r.is_empty() {
                continue;
            }
            if !r.is_bounded() {
                return CellOutcome::Unknown;
            }
            for j in r.lo.unwrap()..=r.hi.unwrap() {
                pairs.push((i, j));
            }
        }
    } else if n1.is_bounded() {
        for j in n1.lo.unwrap()..=n1.hi.unwrap() {
            let r = m1.meet(&d1.shift(-j));
            if r.is_empty() {
                continue;
            }
            if !r.is_bounded() {
                return CellOutcome::Unknown;
            }
            for i in r.lo.unwrap()..=r.hi.unwrap() {
                pairs.push((i, j));
            }
        }
    } else {
        return CellOutcome::Unknown;
    }
    let mut acc: Option<C> = None;
    for (i, j) in pairs {
        let x = match a.get(i, j) {
            CellRef::Zero => continue,
            CellRef::Unknown => return CellOutcome::Unknown,
            CellRef::Value(v) => v,
        };
        let y = match b.get(m - i, n - j) {
            CellRef::Zero => continue,
            CellRef::Unknown => return CellOutcome::Unknown,
            CellRef::Value(v) => v,
        };
        let p = f(x, y);
        acc = Some(match acc {
            Some(s) => s.add(&p),
            None => p,
        });
    }
    match acc {
        Some(v) => CellOutcome::Value(v),
        None => CellOutcome::Zero,
    }
}

/// `δ(z/w · q^k) = Σ_l q^{k l} z^l w^{-l}` as a scalar grid on the box
/// `window × window`; every box cell is known.
pub fn delta_grid<C: Scalar>(k: i32, vars: (Var, Var), window: (i32, i32)) -> CoeffGrid<RatExpr<C>> {
    let mut cells = BTreeMap::new();
    for l in window.0..=window.1 {
        if in_box(window, l, -l) {
            cells.insert((l, -l), RatExpr::var_pow(Var::S, 2 * k * l));
        }
    }
    let support = Support {
        m: Interval::ALL,
        n: Interval::ALL,
        d: Interval::point(0),
    };
    CoeffGrid::from_parts(vars, window, support, cells, &|_, _| true)
}

/// Multiplies a grid by a series placed on the grid axes, on the given side.
///
/// Fails with `EmptySafeWindow` when no cell of the product is exactly
/// known.
pub fn grid_mul_series<T: GridSplit>(
    g: &CoeffGrid<T>,
    s: &LaurentSeries<T>,
    left: bool,
) -> Result<CoeffGrid<T>> {
    let sg = CoeffGrid::from_series(s, g.vars, g.window)?;
    let out = if left {
        convolve(&sg, g, &|x, y| x.mul(y))?
    } else {
        convolve(g, &sg, &|x, y| x.mul(y))?
    };
    if out.safe_window().is_empty() {
        return Err(Error::EmptySafeWindow("grid times series".into()));
    }
    Ok(out)
}

