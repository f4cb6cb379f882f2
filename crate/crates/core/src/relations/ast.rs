//! Syntax tree of relation suites and its printer.
//!
//! Printing is the inverse of parsing: `parse(print(s)) == s` for every
//! suite the parser accepts.

use std::fmt;

/// A central-charge tag on a spectral variable (`z_+`, `z_-`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    /// Plain `z`.
    None,
    /// `z_+`.
    Plus,
    /// `z_-`.
    Minus,
}

impl Tag {
    /// `+1`, `-1` or `0`: the multiple of `c/2` the tag adds.
    pub fn half_c(self) -> i32 {
        match self {
            Tag::None => 0,
            Tag::Plus => 1,
            Tag::Minus => -1,
        }
    }
}

/// A spectral variable: `z`, `w` (trigonometric) or `u`, `v` (rational),
/// with an optional tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpecVar {
    /// One of `z`, `w`, `u`, `v`.
    pub name: char,
    /// Central-charge tag.
    pub tag: Tag,
}

impl SpecVar {
    /// An untagged variable.
    pub fn plain(name: char) -> Self {
        SpecVar { name, tag: Tag::None }
    }

    /// Whether this is the first variable of its pair (`z` or `u`).
    pub fn is_first(&self) -> bool {
        matches!(self.name, 'z' | 'u')
    }

    /// Whether this is a rational-suite variable.
    pub fn is_rational(&self) -> bool {
        matches!(self.name, 'u' | 'v')
    }
}

impl fmt::Display for SpecVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            Tag::None => write!(f, "{}", self.name),
            Tag::Plus => write!(f, "{}_+", self.name),
            Tag::Minus => write!(f, "{}_-", self.name),
        }
    }
}

/// A rational exponent `num/den` (`den` is 1 or 2 in practice).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exponent {
    /// Numerator.
    pub num: i64,
    /// Positive denominator.
    pub den: i64,
}

impl Exponent {
    /// An integer exponent.
    pub fn int(n: i64) -> Self {
        Exponent { num: n, den: 1 }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}/{})", self.num, self.den)
        }
    }
}

/// Coefficient expressions over `q`, `h`, numbers and spectral variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// A nonnegative integer literal.
    Num(u64),
    /// The deformation parameter `q`.
    Q,
    /// The Yangian parameter `ħ`, written `h`.
    H,
    /// A spectral variable.
    Var(SpecVar),
    /// `-x`.
    Neg(Box<Expr>),
    /// `x + y`.
    Add(Box<Expr>, Box<Expr>),
    /// `x - y`.
    Sub(Box<Expr>, Box<Expr>),
    /// `x * y`.
    Mul(Box<Expr>, Box<Expr>),
    /// `x / y`.
    Div(Box<Expr>, Box<Expr>),
    /// `x ^ e`.
    Pow(Box<Expr>, Exponent),
}

impl Expr {
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Q => write!(f, "q"),
            Expr::H => write!(f, "h"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.write_at(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write_at(f, 3)
            }
            Expr::Pow(b, e) => {
                b.write_at(f, 5)?;
                write!(f, "^{e}")
            }
        }
    }

    /// Convenience constructors.
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    /// `a / b`.
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    /// `a + b`.
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    /// `a - b`.
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    /// `a ^ n`.
    pub fn pow(a: Expr, e: Exponent) -> Expr {
        Expr::Pow(Box::new(a), e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// An integer affine in the central charge: `k + kc·c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Affine {
    /// Constant part.
    pub k: i32,
    /// Coefficient of `c`.
    pub kc: i32,
}

impl Affine {
    /// A constant.
    pub fn int(k: i32) -> Self {
        Affine { k, kc: 0 }
    }

    /// Whether this is zero.
    pub fn is_zero(&self) -> bool {
        self.k == 0 && self.kc == 0
    }

    /// Value at a given central charge.
    pub fn at(&self, c: i32) -> i32 {
        self.k + self.kc * c
    }

    /// Negation.
    pub fn neg(self) -> Self {
        Affine { k: -self.k, kc: -self.kc }
    }

    /// Sum.
    pub fn plus(self, o: Affine) -> Self {
        Affine {
            k: self.k + o.k,
            kc: self.kc + o.kc,
        }
    }

    /// The `q` exponent form: `2`, `-1`, `c`, `(c+1)`, `(-c-1)`.
    fn q_exponent(&self) -> String {
        match (self.k, self.kc) {
            (k, 0) => format!("{k}"),
            (0, 1) => "c".to_string(),
            _ => format!("({})", self.linear()),
        }
    }

    fn linear(&self) -> String {
        let c = match self.kc {
            0 => String::new(),
            1 => "c".into(),
            -1 => "-c".into(),
            n => format!("{n}*c"),
        };
        match (c.is_empty(), self.k) {
            (true, k) => format!("{k}"),
            (false, 0) => c,
            (false, k) if k > 0 => format!("{c}+{k}"),
            (false, k) => format!("{c}{k}"),
        }
    }

    /// The `ħ` form used in rational suites: ` + 2*h`, ` - c*h`.
    fn h_terms(&self) -> String {
        let mut out = String::new();
        let mut push = |n: i32, unit: &str| {
            if n == 0 {
                return;
            }
            let sign = if n > 0 { "+" } else { "-" };
            let a = n.abs();
            if a == 1 {
                out.push_str(&format!(" {sign} {unit}"));
            } else {
                out.push_str(&format!(" {sign} {a}*{unit}"));
            }
        };
        push(self.kc, "c*h");
        push(self.k, "h");
        out
    }
}

/// A current argument: a spectral variable shifted by `q^shift`
/// (trigonometric) or `+ shift·ħ` (rational).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arg {
    /// The variable.
    pub var: SpecVar,
    /// The shift.
    pub shift: Affine,
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.var)?;
        if self.shift.is_zero() {
            Ok(())
        } else if self.var.is_rational() {
            write!(f, "{}", self.shift.h_terms())
        } else if self.shift == Affine::int(1) {
            write!(f, "*q")
        } else {
            write!(f, "*q^{}", self.shift.q_exponent())
        }
    }
}

/// A delta-function prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Delta {
    /// `δ(x/y · q^shift)`.
    Ratio {
        /// Numerator variable.
        num: SpecVar,
        /// Denominator variable.
        den: SpecVar,
        /// Power of `q`.
        shift: Affine,
    },
    /// `δ(x − y + shift·ħ)`.
    Difference {
        /// Left variable.
        left: SpecVar,
        /// Right variable.
        right: SpecVar,
        /// Multiple of `ħ`.
        shift: Affine,
    },
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Delta::Ratio { num, den, shift } => {
                write!(f, "delta({num}/{den}")?;
                if !shift.is_zero() {
                    write!(f, "*q^{}", shift.q_exponent())?;
                }
                write!(f, ")")
            }
            Delta::Difference { left, right, shift } => {
                write!(f, "delta({left} - {right}{})", shift.h_terms())
            }
        }
    }
}

/// A reference to a bound current, possibly inverted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurrentRef {
    /// Current name.
    pub name: String,
    /// `^-1` flag.
    pub inverse: bool,
    /// Argument.
    pub arg: Arg,
}

impl fmt::Display for CurrentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}({})", self.name, if self.inverse { "^-1" } else { "" }, self.arg)
    }
}

/// Expansion direction of a rational coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Nonnegative powers of `w/z`.
    WOverZ,
    /// Nonnegative powers of `z/w`.
    ZOverW,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::WOverZ => "w/z",
            Direction::ZOverW => "z/w",
        })
    }
}

/// One signed product `± coefficient · δ · factors`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    /// Whether the term is subtracted.
    pub negative: bool,
    /// Scalar coefficient (`None` = 1).
    pub coeff: Option<Expr>,
    /// Explicit expansion direction of the coefficient.
    pub expand: Option<Direction>,
    /// Delta-function prefactor.
    pub delta: Option<Delta>,
    /// Ordered current factors.
    pub factors: Vec<CurrentRef>,
}

impl Term {
    fn write_body(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if let Some(c) = &self.coeff {
            if matches!(c, Expr::Neg(_)) {
                write!(f, "({c})")?;
            } else {
                c.write_at(f, 2)?;
            }
            if let Some(d) = self.expand {
                write!(f, " @expand({d})")?;
            }
            first = false;
        }
        let mut parts: Vec<String> = Vec::new();
        if let Some(d) = &self.delta {
            parts.push(d.to_string());
        }
        parts.extend(self.factors.iter().map(|c| c.to_string()));
        if parts.is_empty() {
            if first {
                write!(f, "1")?;
            }
            return Ok(());
        }
        if !first {
            write!(f, " * ")?;
        }
        write!(f, "{}", parts.join(" "))
    }
}

fn write_sum(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, t) in terms.iter().enumerate() {
        match (i, t.negative) {
            (0, false) => {}
            (0, true) => write!(f, "-")?,
            (_, false) => write!(f, " + ")?,
            (_, true) => write!(f, " - ")?,
        }
        t.write_body(f)?;
    }
    Ok(())
}

/// One relation `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    /// Name, unique within the suite.
    pub label: String,
    /// Left side.
    pub lhs: Vec<Term>,
    /// Right side.
    pub rhs: Vec<Term>,
}

impl Relation {
    /// All terms with the right side negated (`lhs − rhs`).
    pub fn terms(&self) -> impl Iterator<Item = (bool, &Term)> {
        self.lhs.iter().map(|t| (false, t)).chain(self.rhs.iter().map(|t| (true, t)))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.label)?;
        write_sum(f, &self.lhs)?;
        write!(f, " = ")?;
        write_sum(f, &self.rhs)?;
        write!(f, ";")
    }
}

/// A named list of relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Suite {
    /// Suite name (empty for anonymous suites).
    pub name: String,
    /// Relations in source order.
    pub relations: Vec<Relation>,
}

impl Suite {
    /// Looks up a relation by label.
    pub fn relation(&self, label: &str) -> Option<&Relation> {
        self.relations.iter().find(|r| r.label == label)
    }

    /// Whether the suite is written in the rational variables `u, v`.
    pub fn is_rational(&self) -> bool {
        self.relations.iter().flat_map(|r| r.terms()).any(|(_, t)| {
            t.factors.iter().any(|c| c.arg.var.is_rational())
                || matches!(t.delta, Some(Delta::Difference { .. }))
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.name.is_empty() {
            writeln!(f, "suite {};", self.name)?;
        }
        for r in &self.relations {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
