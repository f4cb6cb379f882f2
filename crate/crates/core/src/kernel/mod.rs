//! Exact arithmetic foundation: scalars, sparse Laurent polynomials, rational
//! expressions, directional series expansion, and two-variable coefficient
//! grids for products of formal distributions.

mod expr;
mod grid;
mod poly;
mod ratexpr;
mod series;

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed};

pub use expr::{parse_poly, parse_ratexpr};
pub use grid::{convolve, delta_grid, grid_mul_series, CellRef, CoeffGrid, GridSplit, Interval, SafeWindow, Support};
pub use poly::{MPoly, Mono, Var, NVARS};
pub use ratexpr::{ratexpr_equal, RatExpr};
pub use series::{expand, LaurentSeries};

/// Coefficient field for polynomials: anything behaving like a signed number.
///
/// The engine instantiates it with exact rationals; the bound is stated via
/// `num-traits` so the kernel also runs over machine types in tests.
pub trait Scalar: Num + Signed + FromPrimitive + Clone + Debug + Display + Send + Sync + 'static {
    /// The integer `n` as a scalar.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("integer scalars are representable")
    }
}

impl<T> Scalar for T where T: Num + Signed + FromPrimitive + Clone + Debug + Display + Send + Sync + 'static {}

/// Minimal ring interface shared by scalars, rational expressions and
/// matrices, so series and grids can carry any of them.
pub trait Ring: Clone + Debug + Send + Sync {
    /// Whether the element is exactly zero.
    fn is_zero(&self) -> bool;
    /// Sum.
    fn add(&self, other: &Self) -> Self;
    /// Difference.
    fn sub(&self, other: &Self) -> Self;
    /// Additive inverse.
    fn neg(&self) -> Self;
    /// Product (not necessarily commutative).
    fn mul(&self, other: &Self) -> Self;
}

/// A commutative field with static constants, used for matrix entries.
pub trait Field: Ring + PartialEq {
    /// Additive identity.
    fn zero() -> Self;
    /// Multiplicative identity.
    fn one() -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
}

impl<C: Scalar> Field for RatExpr<C> {
    fn zero() -> Self {
        RatExpr::zero()
    }
    fn one() -> Self {
        RatExpr::one()
    }
    fn inv(&self) -> Option<Self> {
        RatExpr::inv(self)
    }
}
