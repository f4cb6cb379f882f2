//! Rational expressions `num / den` over [`MPoly`], with equality by
//! cross-multiplication and no multivariate gcd.
//!
//! Normalization is deliberately cheap: monomial content and the leading
//! coefficient of the denominator are moved into the numerator, and an exact
//! division of numerator by denominator is attempted. Nothing else cancels, so
//! equal values can have different representations; compare with
//! [`ratexpr_equal`] (which `PartialEq` uses).

use std::fmt;

use super::{MPoly, Mono, Ring, Scalar, Var};

/// A quotient of two Laurent polynomials with nonzero denominator.
#[derive(Clone, Debug)]
pub struct RatExpr<C> {
    num: MPoly<C>,
    den: MPoly<C>,
}

/// `true` iff `p.num * q.den - q.num * p.den` is the zero polynomial.
pub fn ratexpr_equal<C: Scalar>(p: &RatExpr<C>, q: &RatExpr<C>) -> bool {
    if p.den == q.den {
        return p.num == q.num;
    }
    &p.num * &q.den == &q.num * &p.den
}

impl<C: Scalar> RatExpr<C> {
    /// Builds `num / den`; returns `None` when `den` is zero.
    pub fn new(num: MPoly<C>, den: MPoly<C>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalized(num, den))
    }

    /// Builds `num / den` without normalizing (for tests of representations).
    pub fn new_raw(num: MPoly<C>, den: MPoly<C>) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(RatExpr { num, den })
        }
    }

    /// A polynomial viewed as a rational expression.
    pub fn from_poly(p: MPoly<C>) -> Self {
        RatExpr {
            num: p,
            den: MPoly::one(),
        }
    }

    /// The constant `c`.
    pub fn constant(c: C) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    /// Zero.
    pub fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }

    /// One.
    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    /// The expression `var^exp`.
    pub fn var_pow(var: Var, exp: i32) -> Self {
        Self::from_poly(MPoly::var_pow(var, exp))
    }

    /// Numerator.
    pub fn num(&self) -> &MPoly<C> {
        &self.num
    }

    /// Denominator.
    pub fn den(&self) -> &MPoly<C> {
        &self.den
    }

    /// Whether the value is zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// `Some(poly)` when the value is a Laurent polynomial.
    pub fn as_poly(&self) -> Option<&MPoly<C>> {
        if self.is_poly() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Whether `var` occurs in the numerator or the denominator.
    pub fn contains_var(&self, var: Var) -> bool {
        self.num.contains_var(var) || self.den.contains_var(var)
    }

    fn normalized(num: MPoly<C>, den: MPoly<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some((c, m)) = den.as_term() {
            let inv = C::one() / c;
            return Self::from_poly(num.mul_term(&inv, &m.inv()));
        }
        let content = den.min_mono();
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = C::one() / lc;
        let den = den.mul_term(&inv, &content.inv());
        let num = num.mul_term(&inv, &content.inv());
        if let Some(q) = num.exact_div(&den) {
            return Self::from_poly(q);
        }
        RatExpr { num, den }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }

    /// Quotient; `None` when dividing by zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| Ring::mul(self, &i))
    }

    /// Multiplies by a scalar.
    pub fn scale(&self, c: &C) -> Self {
        RatExpr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .fix_zero()
    }

    /// Multiplies by `c * m`.
    pub fn mul_term(&self, c: &C, m: &Mono) -> Self {
        RatExpr {
            num: self.num.mul_term(c, m),
            den: self.den.clone(),
        }
        .fix_zero()
    }

    fn fix_zero(self) -> Self {
        if self.num.is_zero() {
            Self::zero()
        } else {
            self
        }
    }

    /// Integer power (negative powers invert); `None` for `0^-k`.
    pub fn powi(&self, n: i32) -> Option<Self> {
        if n >= 0 {
            Some(RatExpr::normalized(
                self.num.pow(n as u32),
                self.den.pow(n as u32),
            ))
        } else {
            self.inv().and_then(|i| i.powi(-n))
        }
    }

    /// Renames variables in numerator and denominator.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Self {
        RatExpr::normalized(self.num.rename(map), self.den.rename(map))
    }

    /// Applies a term map to numerator and denominator alike (used for
    /// monomial substitutions such as `z -> z*q^k`).
    pub fn map_both(&self, f: &dyn Fn(&Mono, &C) -> (Mono, C)) -> Self {
        RatExpr::normalized(self.num.map_terms(f), self.den.map_terms(f))
    }

    /// Substitutes `var := value` (a polynomial). Returns `None` if the
    /// denominator vanishes or a negative power of a non-monomial is needed.
    pub fn substitute(&self, var: Var, value: &RatExpr<C>) -> Option<Self> {
        let sub = |p: &MPoly<C>| -> Option<RatExpr<C>> {
            // Evaluate p(value) as a rational expression, term by term.
            let mut acc = RatExpr::zero();
            for (m, c) in p.terms() {
                let e = m.exp(var);
                let rest = RatExpr::from_poly(MPoly::term(c.clone(), m.without(var)));
                let pw = value.powi(e)?;
                acc = acc.add(&rest.mul(&pw));
            }
            Some(acc)
        };
        let n = sub(&self.num)?;
        let d = sub(&self.den)?;
        n.div(&d)
    }

    /// Value at a point; `None` where the denominator vanishes.
    pub fn evaluate(&self, point: &[(Var, C)]) -> Option<C> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.evaluate(point)? / d)
    }

    /// Maps coefficients into another scalar type.
    pub fn map_coeffs<D: Scalar>(&self, f: &dyn Fn(&C) -> D) -> RatExpr<D> {
        RatExpr::normalized(self.num.map_coeffs(f), self.den.map_coeffs(f))
    }
}

impl<C: Scalar> PartialEq for RatExpr<C> {
    fn eq(&self, other: &Self) -> bool {
        ratexpr_equal(self, other)
    }
}

impl<C: Scalar> Ring for RatExpr<C> {
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = &self.num + &other.num;
            if self.den.is_one() {
                return RatExpr::from_poly(num);
            }
            return RatExpr::normalized(num, self.den.clone());
        }
        if other.den.is_one() {
            let num = &self.num + &(&other.num * &self.den);
            return RatExpr::normalized(num, self.den.clone());
        }
        if self.den.is_one() {
            let num = &(&self.num * &other.den) + &other.num;
            return RatExpr::normalized(num, other.den.clone());
        }
        if let Some(k) = self.den.exact_div(&other.den) {
            let num = &self.num + &(&other.num * &k);
            return RatExpr::normalized(num, self.den.clone());
        }
        if let Some(k) = other.den.exact_div(&self.den) {
            let num = &(&self.num * &k) + &other.num;
            return RatExpr::normalized(num, other.den.clone());
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        RatExpr::normalized(num, &self.den * &other.den)
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&Ring::neg(other))
    }

    fn neg(&self) -> Self {
        RatExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return RatExpr::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatExpr::from_poly(&self.num * &other.num);
        }
        // Cheap cross-cancellation before forming the product.
        let (mut n1, mut d1) = (self.num.clone(), self.den.clone());
        let (mut n2, mut d2) = (other.num.clone(), other.den.clone());
        if !d2.is_one() {
            if let Some(q) = n1.exact_div(&d2) {
                n1 = q;
                d2 = MPoly::one();
            }
        }
        if !d1.is_one() {
            if let Some(q) = n2.exact_div(&d1) {
                n2 = q;
                d1 = MPoly::one();
            }
        }
        let den = if d1.is_one() {
            d2
        } else if d2.is_one() {
            d1
        } else {
            &d1 * &d2
        };
        RatExpr::normalized(&n1 * &n2, den)
    }
}

impl<C: Scalar> fmt::Display for RatExpr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
