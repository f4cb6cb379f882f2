//! Exact symbolic verification of the super RS algebra of the quantum affine
//! superalgebra `U_q[osp(1|2)^(1)]`.
//!
//! The crate is layered:
//!
//! * [`kernel`]: scalars, Laurent polynomials in the fixed alphabet
//!   `s, z, w, a, u, v, h` (with `q = s^2`), rational expressions, truncated
//!   series and two-variable coefficient grids with safe-window bookkeeping;
//! * [`linalg`]: dense matrices over any ring, Z2 gradings, the θ ungrading
//!   matrix, graded permutations and supertranspositions;
//! * [`rmatrix`]: the trigonometric 9×9 R-matrix and its identities;
//! * [`rs`]: level-zero L-operators and the RLL relations;
//! * [`gauss`]: Gauss decomposition into Drinfeld currents;
//! * [`relations`]: the relation DSL, evaluator and built-in suites;
//! * [`yangian`]: the structural degeneration to the super-Yangian double.
//!
//! Algorithms are written against [`kernel::Scalar`]; the concrete exact
//! instantiation is exported as [`Q`], [`Poly`], [`RatFn`] and [`Mat`].

pub mod error;
pub mod gauss;
pub mod kernel;
pub mod linalg;
pub mod opgrid;
pub mod report;
pub mod rmatrix;
pub mod relations;
pub mod rs;
pub mod yangian;

pub use error::{Error, Result};

/// Exact rational numbers.
pub type Q = num_rational::BigRational;
/// Laurent polynomials with rational coefficients.
pub type Poly = kernel::MPoly<Q>;
/// Rational expressions with rational coefficients.
pub type RatFn = kernel::RatExpr<Q>;
/// Matrices of rational expressions.
pub type Mat = linalg::Matrix<RatFn>;
