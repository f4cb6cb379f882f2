//! Parser for the canonical textual form of polynomials and rational
//! expressions, e.g. `s^2*z - w` or `(z - w)/(s^4*z - w)`.
//!
//! Accepted tokens: integers, the alphabet variables, `q` (read as `s^2`),
//! `+ - * / ^` and parentheses. Exponents are signed integers, or `(k/2)` on
//! `q` for half-integer powers.

use super::{MPoly, Ring, RatExpr, Scalar, Var};
use crate::error::{Error, Result};

/// Parses a rational expression.
pub fn parse_ratexpr<C: Scalar>(text: &str) -> Result<RatExpr<C>> {
    let mut p = Parser { text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(Error::syntax_at(text, p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a Laurent polynomial; fails if the value has a non-monomial
/// denominator.
pub fn parse_poly<C: Scalar>(text: &str) -> Result<MPoly<C>> {
    let r = parse_ratexpr::<C>(text)?;
    match r.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(Error::syntax_at(text, 0, "expected a Laurent polynomial")),
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::syntax_at(self.text, self.pos, msg))
    }

    fn expr<C: Scalar>(&mut self) -> Result<RatExpr<C>> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = acc.add(&t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = acc.sub(&t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<C: Scalar>(&mut self) -> Result<RatExpr<C>> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let t = self.unary()?;
                acc = acc.mul(&t);
            } else if self.eat('/') {
                let at = self.pos;
                let t = self.unary()?;
                acc = match acc.div(&t) {
                    Some(v) => v,
                    None => return Err(Error::syntax_at(self.text, at, "division by zero")),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary<C: Scalar>(&mut self) -> Result<RatExpr<C>> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(Ring::neg(&v));
        }
        self.power()
    }

    fn power<C: Scalar>(&mut self) -> Result<RatExpr<C>> {
        self.skip_ws();
        let start = self.pos;
        let (base, is_q) = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let (num, den) = if self.eat('(') {
            let n = self.signed_int()?;
            let d = if self.eat('/') { self.signed_int()? } else { 1 };
            if !self.eat(')') {
                return self.err("expected `)` after exponent");
            }
            (n, d)
        } else {
            (self.signed_int()?, 1)
        };
        match (den, is_q) {
            (1, _) => base
                .powi(num as i32)
                .ok_or_else(|| Error::syntax_at(self.text, start, "zero raised to a negative power")),
            (2, true) => Ok(RatExpr::var_pow(Var::S, num as i32)),
            _ => Err(Error::syntax_at(
                self.text,
                start,
                "fractional exponents are only allowed as q^(k/2)",
            )),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.eat('-');
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let v: i64 = self.text[start..self.pos]
            .parse()
            .map_err(|_| Error::syntax_at(self.text, start, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn atom<C: Scalar>(&mut self) -> Result<(RatExpr<C>, bool)> {
        self.skip_ws();
        if self.eat('(') {
            let e = self.expr()?;
            if !self.eat(')') {
                return self.err("expected `)`");
            }
            return Ok((e, false));
        }
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let digits = &self.text[start..self.pos];
                // Built digit by digit: rational `from_str_radix` wants `n/d`.
                let ten = C::int(10);
                let c = digits
                    .bytes()
                    .fold(C::zero(), |acc, b| acc * ten.clone() + C::int((b - b'0') as i64));
                Ok((RatExpr::constant(c), false))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                if name == "q" {
                    return Ok((RatExpr::var_pow(Var::S, 2), true));
                }
                match Var::from_name(name) {
                    Some(v) => Ok((RatExpr::var_pow(v, 1), false)),
                    None => Err(Error::syntax_at(
                        self.text,
                        start,
                        format!("unknown variable `{name}`"),
                    )),
                }
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}
