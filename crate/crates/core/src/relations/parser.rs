//! Lexer and recursive-descent parser for the relation DSL.
//!
//! ```text
//! suite     := ("suite" NAME ";")? relation*
//! relation  := ("[" LABEL "]")? sum "=" sum ";"
//! sum       := ("+" | "-")? term (("+" | "-") term)*  |  "0"
//! term      := coeff annot? ("*" factor+)?  |  factor+
//! annot     := "@expand" "(" ("w/z" | "z/w") ")"
//! factor    := "delta" "(" delta ")"  |  NAME ("^-1")? "(" arg ")"
//! delta     := var "/" var ("*" "q" "^" shift)?        (trigonometric)
//!            | var "-" var (("+" | "-") hterm)*          (rational)
//! arg       := var ("*" "q" ("^" shift)?)?  |  var (("+" | "-") hterm)*
//! var       := ("z" | "w" | "u" | "v") ("_+" | "_-")?
//! shift     := INT | "-" INT | "c" | "(" affine ")"
//! hterm     := (INT "*")? ("c" "*")? "h"
//! ```
//!
//! Coefficients are products and quotients of numbers, `q`, `h`, spectral
//! variables and parenthesized sums; exponents are signed integers or
//! `(p/2)`. Comments run from `#` to the end of the line.

use super::ast::{Affine, Arg, CurrentRef, Delta, Direction, Exponent, Expr, Relation, SpecVar, Suite, Tag, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(SpecVar),
    Int(u64),
    Label(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    at: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let at = i;
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[at..i]
                .parse::<u64>()
                .map_err(|_| Error::syntax_at(text, at, "integer literal too large"))?;
            out.push(Token { tok: Tok::Int(n), at });
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                if bytes[i] == b'_' && i + 1 < bytes.len() && matches!(bytes[i + 1], b'+' | b'-') {
                    break;
                }
                i += 1;
            }
            let word = &text[at..i];
            let tok = match word {
                "z" | "w" | "u" | "v" => {
                    let name = word.chars().next().unwrap();
                    let tag = if i + 1 < bytes.len() && bytes[i] == b'_' {
                        let t = if bytes[i + 1] == b'+' { Tag::Plus } else { Tag::Minus };
                        i += 2;
                        t
                    } else {
                        Tag::None
                    };
                    Tok::Var(SpecVar { name, tag })
                }
                _ => {
                    if i < bytes.len() && bytes[i] == b'_' {
                        return Err(Error::syntax_at(text, i, "tags are only allowed on z, w, u, v"));
                    }
                    Tok::Ident(word.to_string())
                }
            };
            out.push(Token { tok, at });
            continue;
        }
        if c == '[' {
            let close = text[i..]
                .find(']')
                .ok_or_else(|| Error::syntax_at(text, at, "unterminated relation label"))?;
            let label = text[i + 1..i + close].trim().to_string();
            if label.is_empty() || label.contains('\n') {
                return Err(Error::syntax_at(text, at, "empty or multi-line relation label"));
            }
            out.push(Token { tok: Tok::Label(label), at });
            i += close + 1;
            continue;
        }
        if "+-*/^()=;@".contains(c) {
            out.push(Token { tok: Tok::Sym(c), at });
            i += 1;
            continue;
        }
        return Err(Error::syntax_at(text, at, format!("unexpected character `{c}`")));
    }
    out.push(Token { tok: Tok::Eof, at: text.len() });
    Ok(out)
}

const RESERVED: [&str; 5] = ["q", "h", "c", "suite", "expand"];

struct Parser<'a> {
    text: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

/// Parses suite text.
pub fn parse_suite(text: &str) -> Result<Suite> {
    let mut p = Parser {
        text,
        toks: lex(text)?,
        pos: 0,
    };
    p.suite()
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::syntax_at(self.text, self.toks[self.pos].at, msg))
    }

    fn is_sym(&self, c: char) -> bool {
        *self.peek() == Tok::Sym(c)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn suite(&mut self) -> Result<Suite> {
        let mut name = String::new();
        if self.is_ident("suite") {
            self.bump();
            name = self.suite_name()?;
            self.expect_sym(';')?;
        }
        let mut relations: Vec<Relation> = Vec::new();
        while *self.peek() != Tok::Eof {
            let at = self.toks[self.pos].at;
            let mut rel = self.relation()?;
            if rel.label.is_empty() {
                rel.label = format!("r{}", relations.len() + 1);
            }
            if relations.iter().any(|r| r.label == rel.label) {
                return Err(Error::syntax_at(self.text, at, format!("duplicate relation label `{}`", rel.label)));
            }
            relations.push(rel);
        }
        Ok(Suite { name, relations })
    }

    /// Suite names may contain `+`, `-` and digits (`x+x-`, `k1k2k3`).
    fn suite_name(&mut self) -> Result<String> {
        let mut name = String::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(w) => name.push_str(&w),
                Tok::Var(v) => name.push_str(&v.to_string()),
                Tok::Int(n) => name.push_str(&n.to_string()),
                Tok::Sym(c) if "+-".contains(c) => name.push(c),
                _ => break,
            }
            self.bump();
        }
        if name.is_empty() {
            return self.err("expected a suite name");
        }
        Ok(name)
    }

    fn relation(&mut self) -> Result<Relation> {
        let label = match self.peek().clone() {
            Tok::Label(l) => {
                self.bump();
                l
            }
            _ => String::new(),
        };
        let lhs = self.sum()?;
        self.expect_sym('=')?;
        let rhs = self.sum()?;
        self.expect_sym(';')?;
        Ok(Relation { label, lhs, rhs })
    }

    fn sum(&mut self) -> Result<Vec<Term>> {
        if *self.peek() == Tok::Int(0) && matches!(self.peek_at(1), Tok::Sym('=') | Tok::Sym(';')) {
            self.bump();
            return Ok(Vec::new());
        }
        let mut terms = Vec::new();
        let mut negative = if self.eat_sym('-') {
            true
        } else {
            self.eat_sym('+');
            false
        };
        loop {
            let mut t = self.term()?;
            t.negative = negative;
            terms.push(t);
            if self.eat_sym('+') {
                negative = false;
            } else if self.eat_sym('-') {
                negative = true;
            } else {
                return Ok(terms);
            }
        }
    }

    fn starts_factor(&self, k: usize) -> bool {
        match self.peek_at(k) {
            Tok::Ident(w) => !RESERVED.contains(&w.as_str()),
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Term> {
        let mut term = Term {
            negative: false,
            coeff: None,
            expand: None,
            delta: None,
            factors: Vec::new(),
        };
        if !self.starts_factor(0) {
            term.coeff = Some(self.product()?);
            if self.eat_sym('@') {
                if !self.is_ident("expand") {
                    return self.err("expected `expand` after `@`");
                }
                self.bump();
                self.expect_sym('(')?;
                let a = self.var()?;
                self.expect_sym('/')?;
                let b = self.var()?;
                term.expand = Some(match (a.name, b.name) {
                    ('w', 'z') => Direction::WOverZ,
                    ('z', 'w') => Direction::ZOverW,
                    _ => return self.err("expansion direction must be w/z or z/w"),
                });
                self.expect_sym(')')?;
            }
            if !self.eat_sym('*') {
                return Ok(term);
            }
            if !self.starts_factor(0) {
                return self.err("expected a current or delta after the coefficient");
            }
        }
        while self.starts_factor(0) {
            self.factor(&mut term)?;
        }
        Ok(term)
    }

    fn factor(&mut self, term: &mut Term) -> Result<()> {
        let at = self.toks[self.pos].at;
        let name = match self.bump() {
            Tok::Ident(w) => w,
            _ => unreachable!("checked by starts_factor"),
        };
        if name == "delta" {
            if term.delta.is_some() {
                return Err(Error::syntax_at(self.text, at, "at most one delta per term"));
            }
            self.expect_sym('(')?;
            term.delta = Some(self.delta()?);
            return self.expect_sym(')');
        }
        let inverse = if self.eat_sym('^') {
            self.expect_sym('-')?;
            if *self.peek() != Tok::Int(1) {
                return self.err("expected `^-1`");
            }
            self.bump();
            true
        } else {
            false
        };
        self.expect_sym('(')?;
        let arg = self.arg()?;
        self.expect_sym(')')?;
        term.factors.push(CurrentRef { name, inverse, arg });
        Ok(())
    }

    fn var(&mut self) -> Result<SpecVar> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(v)
            }
            _ => self.err("expected a spectral variable"),
        }
    }

    fn arg(&mut self) -> Result<Arg> {
        let var = self.var()?;
        let shift = if var.is_rational() {
            self.h_terms()?
        } else if self.eat_sym('*') {
            self.q_shift()?
        } else {
            Affine::default()
        };
        Ok(Arg { var, shift })
    }

    fn delta(&mut self) -> Result<Delta> {
        let a = self.var()?;
        if self.eat_sym('/') {
            let b = self.var()?;
            let shift = if self.eat_sym('*') { self.q_shift()? } else { Affine::default() };
            Ok(Delta::Ratio { num: a, den: b, shift })
        } else if self.eat_sym('-') {
            let b = self.var()?;
            let shift = self.h_terms()?;
            Ok(Delta::Difference {
                left: a,
                right: b,
                shift,
            })
        } else {
            self.err("expected `/` or `-` in delta argument")
        }
    }

    /// `q ^ shift` (or bare `q`), after the `*`.
    fn q_shift(&mut self) -> Result<Affine> {
        if !self.is_ident("q") {
            return self.err("expected `q`");
        }
        self.bump();
        if !self.eat_sym('^') {
            return Ok(Affine::int(1));
        }
        if self.eat_sym('(') {
            let a = self.affine()?;
            self.expect_sym(')')?;
            return Ok(a);
        }
        let neg = self.eat_sym('-');
        let a = self.affine_atom()?;
        Ok(if neg { a.neg() } else { a })
    }

    fn affine_atom(&mut self) -> Result<Affine> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                let k = i32::try_from(n).map_err(|_| Error::syntax_at(self.text, self.toks[self.pos].at, "shift too large"))?;
                if self.is_sym('*') && matches!(self.peek_at(1), Tok::Ident(w) if w == "c") {
                    self.bump();
                    self.bump();
                    return Ok(Affine { k: 0, kc: k });
                }
                Ok(Affine::int(k))
            }
            Tok::Ident(w) if w == "c" => {
                self.bump();
                Ok(Affine { k: 0, kc: 1 })
            }
            _ => self.err("expected an integer or `c`"),
        }
    }

    fn affine(&mut self) -> Result<Affine> {
        let mut acc = if self.eat_sym('-') {
            self.affine_atom()?.neg()
        } else {
            self.affine_atom()?
        };
        loop {
            if self.eat_sym('+') {
                acc = acc.plus(self.affine_atom()?);
            } else if self.eat_sym('-') {
                acc = acc.plus(self.affine_atom()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    /// `(("+" | "-") (INT "*")? ("c" "*")? "h")*`.
    fn h_terms(&mut self) -> Result<Affine> {
        let mut acc = Affine::default();
        loop {
            let sign = match self.peek() {
                Tok::Sym('+') => 1,
                Tok::Sym('-') => -1,
                _ => return Ok(acc),
            };
            // Only consume the sign when an ħ term follows.
            let mut k = 1;
            let mut lookahead = 1;
            if let Tok::Int(n) = self.peek_at(1) {
                if *self.peek_at(2) != Tok::Sym('*') {
                    return Ok(acc);
                }
                k = *n as i32;
                lookahead = 3;
            }
            let is_c = matches!(self.peek_at(lookahead), Tok::Ident(w) if w == "c");
            if is_c {
                if *self.peek_at(lookahead + 1) != Tok::Sym('*') {
                    return Ok(acc);
                }
                lookahead += 2;
            }
            if !matches!(self.peek_at(lookahead), Tok::Ident(w) if w == "h") {
                return Ok(acc);
            }
            for _ in 0..=lookahead {
                self.bump();
            }
            if is_c {
                acc.kc += sign * k;
            } else {
                acc.k += sign * k;
            }
        }
    }

    /// A product-level coefficient; stops before `*` followed by a factor.
    fn product(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.is_sym('*') && !self.starts_factor(1) {
                self.bump();
                acc = Expr::mul(acc, self.unary()?);
            } else if self.eat_sym('/') {
                acc = Expr::div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.product()?;
        loop {
            if self.eat_sym('+') {
                acc = Expr::add(acc, self.product()?);
            } else if self.eat_sym('-') {
                acc = Expr::sub(acc, self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat_sym('^') {
            let e = self.exponent()?;
            return Ok(Expr::pow(base, e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Exponent> {
        if self.eat_sym('(') {
            let neg = self.eat_sym('-');
            let num = self.int()?;
            let den = if self.eat_sym('/') { self.int()? } else { 1 };
            if den == 0 {
                return self.err("zero exponent denominator");
            }
            self.expect_sym(')')?;
            return Ok(Exponent {
                num: if neg { -num } else { num },
                den,
            });
        }
        let neg = self.eat_sym('-');
        let n = self.int()?;
        Ok(Exponent::int(if neg { -n } else { n }))
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                i64::try_from(n).or_else(|_| self.err("integer too large"))
            }
            _ => self.err("expected an integer"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(n))
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Expr::Var(v))
            }
            Tok::Ident(w) if w == "q" => {
                self.bump();
                Ok(Expr::Q)
            }
            Tok::Ident(w) if w == "h" => {
                self.bump();
                Ok(Expr::H)
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(w) => self.err(format!("unexpected `{w}` in a coefficient")),
            _ => self.err("expected a coefficient or a current"),
        }
    }
}
