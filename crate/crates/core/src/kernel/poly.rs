//! Sparse multivariate Laurent polynomials over the fixed alphabet
//! `{s, z, w, a, u, v, h}`.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration is in
//! lexicographic monomial order and every printed form is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::Scalar;

/// Number of variables in the alphabet.
pub const NVARS: usize = 7;

/// A variable of the fixed, ordered alphabet.
///
/// `S` is `q^{1/2}`, so `q = s^2`; `Z`, `W` are spectral variables, `A` the
/// evaluation parameter, `U`, `V` the Yangian variables and `H` stands for ħ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    S = 0,
    Z = 1,
    W = 2,
    A = 3,
    U = 4,
    V = 5,
    H = 6,
}

impl Var {
    /// All variables in alphabet order.
    pub const ALL: [Var; NVARS] = [Var::S, Var::Z, Var::W, Var::A, Var::U, Var::V, Var::H];

    /// Position of the variable in the alphabet.
    pub fn index(self) -> usize {
        self as usize
    }

    /// Printed name of the variable.
    pub fn name(self) -> &'static str {
        match self {
            Var::S => "s",
            Var::Z => "z",
            Var::W => "w",
            Var::A => "a",
            Var::U => "u",
            Var::V => "v",
            Var::H => "h",
        }
    }

    /// Looks a variable up by its printed name.
    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.iter().copied().find(|v| v.name() == name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A Laurent monomial: one signed exponent per alphabet variable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(pub [i32; NVARS]);

impl Mono {
    /// The monomial 1.
    pub const ONE: Mono = Mono([0; NVARS]);

    /// The monomial `var^exp`.
    pub fn var(var: Var, exp: i32) -> Mono {
        let mut e = [0; NVARS];
        e[var.index()] = exp;
        Mono(e)
    }

    /// Builds a monomial from `(variable, exponent)` pairs.
    pub fn from_pairs(pairs: &[(Var, i32)]) -> Mono {
        let mut m = Mono::ONE;
        for &(v, e) in pairs {
            m.0[v.index()] += e;
        }
        m
    }

    /// Exponent of `var`.
    pub fn exp(&self, var: Var) -> i32 {
        self.0[var.index()]
    }

    /// Product of monomials (exponent addition).
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x += *y;
        }
        Mono(e)
    }

    /// Inverse monomial.
    pub fn inv(&self) -> Mono {
        let mut e = self.0;
        for x in e.iter_mut() {
            *x = -*x;
        }
        Mono(e)
    }

    /// Quotient `self / other`, always defined for Laurent monomials.
    pub fn div(&self, other: &Mono) -> Mono {
        self.mul(&other.inv())
    }

    /// Whether `other` divides `self` inside the ordinary polynomial ring.
    pub fn divisible_by(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a >= b)
    }

    /// Componentwise minimum.
    pub fn min(&self, other: &Mono) -> Mono {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(other.0.iter()) {
            *x = (*x).min(*y);
        }
        Mono(e)
    }

    /// Whether this is the monomial 1.
    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Replaces the exponent of `var` by zero.
    pub fn without(&self, var: Var) -> Mono {
        let mut e = self.0;
        e[var.index()] = 0;
        Mono(e)
    }

    /// Applies a variable renaming; exponents of merged variables add up.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Mono {
        let mut e = [0; NVARS];
        for v in Var::ALL {
            e[map(v).index()] += self.0[v.index()];
        }
        Mono(e)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A sparse multivariate Laurent polynomial with coefficients in `C`.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly<C> {
    terms: BTreeMap<Mono, C>,
}

impl<C: Scalar> Default for MPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> MPoly<C> {
    /// The zero polynomial.
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial 1.
    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// A constant polynomial.
    pub fn constant(c: C) -> Self {
        Self::term(c, Mono::ONE)
    }

    /// A single term `c * m`.
    pub fn term(c: C, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    /// The monomial `m` with coefficient 1.
    pub fn mono(m: Mono) -> Self {
        Self::term(C::one(), m)
    }

    /// The polynomial `var`.
    pub fn var(var: Var) -> Self {
        Self::mono(Mono::var(var, 1))
    }

    /// The polynomial `var^exp` (exp may be negative).
    pub fn var_pow(var: Var, exp: i32) -> Self {
        Self::mono(Mono::var(var, exp))
    }

    /// Builds a polynomial from terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Mono, C)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Whether the polynomial is zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the polynomial is the constant 1.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Whether there are no terms (same as [`MPoly::is_zero`]).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(monomial, coefficient)` in increasing lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: &Mono) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// The lex-largest term, if any.
    pub fn leading(&self) -> Option<(&Mono, &C)> {
        self.terms.iter().next_back()
    }

    /// `Some((c, m))` when the polynomial is a single term.
    pub fn as_term(&self) -> Option<(C, Mono)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (c.clone(), *m))
        } else {
            None
        }
    }

    /// `Some(c)` when the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .and_then(|(m, c)| if m.is_one() { Some(c.clone()) } else { None }),
            _ => None,
        }
    }

    /// Whether `var` occurs with a nonzero exponent in some term.
    pub fn contains_var(&self, var: Var) -> bool {
        self.terms.keys().any(|m| m.exp(var) != 0)
    }

    /// Componentwise minimum of all exponent vectors (the monomial content).
    pub fn min_mono(&self) -> Mono {
        let mut it = self.terms.keys();
        match it.next() {
            None => Mono::ONE,
            Some(first) => it.fold(*first, |acc, m| Mono::min(&acc, m)),
        }
    }

    /// Range of exponents of `var` over all terms.
    pub fn degree_range(&self, var: Var) -> Option<(i32, i32)> {
        let mut r: Option<(i32, i32)> = None;
        for m in self.terms.keys() {
            let e = m.exp(var);
            r = Some(match r {
                None => (e, e),
                Some((lo, hi)) => (lo.min(e), hi.max(e)),
            });
        }
        r
    }

    /// Range of total degree in the given variables over all terms.
    pub fn total_degree_range(&self, vars: &[Var]) -> Option<(i32, i32)> {
        let mut r: Option<(i32, i32)> = None;
        for m in self.terms.keys() {
            let e: i32 = vars.iter().map(|v| m.exp(*v)).sum();
            r = Some(match r {
                None => (e, e),
                Some((lo, hi)) => (lo.min(e), hi.max(e)),
            });
        }
        r
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (*m, x.clone() * c.clone()))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// Multiplies by a monomial (exponent shift).
    pub fn mul_mono(&self, m: &Mono) -> Self {
        MPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    /// Multiplies by `c * m`.
    pub fn mul_term(&self, c: &C, m: &Mono) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, x)| (k.mul(m), x.clone() * c.clone()))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// Nonnegative integer power.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Renames variables (e.g. `w -> a`); merged variables multiply.
    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.rename(map), c.clone())))
    }

    /// Multiplies the coefficient of each term by `f(monomial)`.
    pub fn map_terms(&self, f: &dyn Fn(&Mono, &C) -> (Mono, C)) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| f(m, c)))
    }

    /// Substitutes `var := value`; negative powers require `value_inv`.
    ///
    /// Returns `None` when a negative exponent occurs without an inverse.
    pub fn substitute(&self, var: Var, value: &Self, value_inv: Option<&Self>) -> Option<Self> {
        let mut pos_pows: Vec<Self> = vec![Self::one()];
        let mut neg_pows: Vec<Self> = vec![Self::one()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            let rest = Self::term(c.clone(), m.without(var));
            let factor = if e >= 0 {
                while pos_pows.len() <= e as usize {
                    let next = pos_pows.last().map(|p| p * value).expect("nonempty");
                    pos_pows.push(next);
                }
                &pos_pows[e as usize]
            } else {
                let inv = value_inv?;
                while neg_pows.len() <= (-e) as usize {
                    let next = neg_pows.last().map(|p| p * inv).expect("nonempty");
                    neg_pows.push(next);
                }
                &neg_pows[(-e) as usize]
            };
            out = &out + &(&rest * factor);
        }
        Some(out)
    }

    /// Value at a point assigning a scalar to every variable that occurs;
    /// `None` if a variable is unassigned or a negative power hits zero.
    pub fn evaluate(&self, point: &[(Var, C)]) -> Option<C> {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let x = point.iter().find(|(w, _)| *w == v).map(|(_, x)| x)?;
                if e < 0 && x.is_zero() {
                    return None;
                }
                for _ in 0..e.unsigned_abs() {
                    t = if e > 0 { t * x.clone() } else { t / x.clone() };
                }
            }
            acc = acc + t;
        }
        Some(acc)
    }

    /// Groups terms by the exponent of `var`, removing `var` from each group.
    pub fn collect_by(&self, var: Var) -> BTreeMap<i32, Self> {
        let mut out: BTreeMap<i32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exp(var))
                .or_insert_with(Self::zero)
                .add_term(m.without(var), c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor` in the Laurent ring, if one exists.
    ///
    /// Both operands are shifted to ordinary polynomials first; the quotient is
    /// then found by lex-order division and accepted only with zero remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((c, m)) = divisor.as_term() {
            let inv = C::one() / c;
            return Some(self.mul_term(&inv, &m.inv()));
        }
        let shift_a = self.min_mono();
        let shift_b = divisor.min_mono();
        let mut rem = self.mul_mono(&shift_a.inv());
        let b = divisor.mul_mono(&shift_b.inv());
        let (lm_b, lc_b) = {
            let (m, c) = b.leading().expect("nonzero");
            (*m, c.clone())
        };
        let mut quotient = Self::zero();
        while let Some((lm, lc)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
            if !lm.divisible_by(&lm_b) {
                return None;
            }
            let qm = lm.div(&lm_b);
            let qc = lc / lc_b.clone();
            rem = &rem - &b.mul_term(&qc, &qm);
            quotient.add_term(qm, qc);
        }
        Some(quotient.mul_mono(&shift_a.div(&shift_b)))
    }

    /// Maps coefficients into another scalar type.
    pub fn map_coeffs<D: Scalar>(&self, f: &dyn Fn(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }
}

impl<'a, C: Scalar> Add<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: &MPoly<C>) -> MPoly<C> {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a, C: Scalar> Sub<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: &MPoly<C>) -> MPoly<C> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a, C: Scalar> Mul<&'a MPoly<C>> for &'a MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: &MPoly<C>) -> MPoly<C> {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Scalar> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl<C: Scalar> Add for MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: MPoly<C>) -> MPoly<C> {
        &self + &rhs
    }
}

impl<C: Scalar> Sub for MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: MPoly<C>) -> MPoly<C> {
        &self - &rhs
    }
}

impl<C: Scalar> Mul for MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: MPoly<C>) -> MPoly<C> {
        &self * &rhs
    }
}

impl<C: Scalar> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        -&self
    }
}

/// Canonical form: terms in decreasing lex order, e.g. `s^2*z - w + 3/2`.
///
/// The output re-parses through [`crate::kernel::parse_poly`].
impl<C: Scalar> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let negative = c.is_negative();
            let abs = if negative { -c.clone() } else { c.clone() };
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}
