//! Approximation functions `ψ(q) = c·q^{-e}` and explicit tables, with the
//! small expression grammar used on the command line.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! psi     := "table:" rational ("," rational)* | product
//! product := power (("*" | "/" | <juxtaposition>) power)*
//! power   := atom ("^" exponent)?
//! atom    := number | "q" | "(" product ")"
//! exponent:= "-"? (integer | "(" "-"? rational ")")
//! ```
//!
//! so `1/(2q)`, `q^-2`, `3*q^(-5/2)` and `table:1/2,1/8,1/27` are accepted.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, pow_int, PowerProduct};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Psi {
    /// `c · q^{-e}`.
    Monomial { c: BigRational, e: BigRational },
    /// `ψ(q) = values[q - 1]`.
    Table(Vec<BigRational>),
}

impl Psi {
    pub fn power_law(tau: BigRational) -> Self {
        Psi::Monomial {
            c: BigRational::one(),
            e: tau,
        }
    }

    pub fn scaled(c: BigRational, e: BigRational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::Invalid("ψ constant must be positive".into()));
        }
        Ok(Psi::Monomial { c, e })
    }

    pub fn table(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_positive()) {
            return Err(Error::Invalid("ψ table needs positive values".into()));
        }
        Ok(Psi::Table(values))
    }

    /// `ψ(q)` as an exact power product.
    pub fn value(&self, q: u64) -> Result<PowerProduct> {
        if q == 0 {
            return Err(Error::Invalid("ψ is defined on q >= 1".into()));
        }
        match self {
            Psi::Monomial { c, e } => Ok(PowerProduct::rational(c.clone()).times_int(q, -e.clone())),
            Psi::Table(v) => v
                .get(q as usize - 1)
                .map(|x| PowerProduct::rational(x.clone()))
                .ok_or_else(|| Error::Invalid(format!("ψ table has no entry for q = {q}"))),
        }
    }

    /// `ψ(q)` when it is rational (integer exponent or table).
    pub fn rational_value(&self, q: u64) -> Option<BigRational> {
        self.value(q).ok()?.to_rational()
    }

    pub fn approx(&self, q: u64) -> f64 {
        self.value(q).map(|v| v.to_f64()).unwrap_or(f64::NAN)
    }

    /// The exact exponent `lim −log ψ(q) / log q`, if this is a monomial.
    pub fn limit_exponent(&self) -> Option<BigRational> {
        match self {
            Psi::Monomial { e, .. } => Some(e.clone()),
            Psi::Table(_) => None,
        }
    }

    /// Largest argument at which `ψ` can be evaluated.
    pub fn domain_end(&self) -> Option<u64> {
        match self {
            Psi::Monomial { .. } => None,
            Psi::Table(v) => Some(v.len() as u64),
        }
    }

    pub fn parse(src: &str) -> Result<Self> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = s.strip_prefix("table:") {
            let values = rest
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>>>()?;
            return Psi::table(values);
        }
        let mut parser = Parser {
            chars: s.chars().collect(),
            pos: 0,
        };
        let (c, k) = parser.product()?;
        if parser.pos != parser.chars.len() {
            return Err(parser.error("trailing input"));
        }
        Psi::scaled(c, -k)
    }
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psi::Monomial { c, e } => {
                if !c.is_one() {
                    write!(f, "({})*", fmt_rational(c))?;
                }
                write!(f, "q^({})", fmt_rational(&-e.clone()))
            }
            Psi::Table(v) => {
                let parts: Vec<String> = v.iter().map(fmt_rational).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

/// Monomials are carried as `(c, k)` meaning `c · q^k`.
struct Parser {
    chars: Vec<char>,
    pos: usize,
}

type Mono = (BigRational, BigRational);

impl Parser {
    fn error(&self, msg: &str) -> Error {
        let s: String = self.chars.iter().collect();
        Error::Parse(format!("ψ expression {s:?} at {}: {msg}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn product(&mut self) -> Result<Mono> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = (acc.0 * rhs.0, acc.1 + rhs.1);
                }
                Some('/') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    if rhs.0.is_zero() {
                        return Err(self.error("division by zero"));
                    }
                    acc = (acc.0 / rhs.0, acc.1 - rhs.1);
                }
                Some(c) if c == 'q' || c == '(' || c.is_ascii_digit() => {
                    let rhs = self.power()?;
                    acc = (acc.0 * rhs.0, acc.1 + rhs.1);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Mono> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let k = self.exponent()?;
        let c = if k.is_integer() {
            if base.0.is_zero() && !k.is_positive() {
                return Err(self.error("zero to a non-positive power"));
            }
            pow_int(&base.0, k.to_integer().to_i64().ok_or_else(|| self.error("huge exponent"))?)
        } else if base.0.is_one() {
            BigRational::one()
        } else {
            return Err(self.error("fractional powers of constants other than 1"));
        };
        Ok((c, base.1 * k))
    }

    fn atom(&mut self) -> Result<Mono> {
        match self.peek() {
            Some('q') => {
                self.pos += 1;
                Ok((BigRational::one(), BigRational::one()))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.product()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok((self.number()?, BigRational::zero())),
            _ => Err(self.error("expected a number, q or '('")),
        }
    }

    /// Unsigned integer or decimal.
    fn number(&mut self) -> Result<BigRational> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        match text.split_once('.') {
            None => Ok(BigRational::from_integer(
                text.parse::<BigInt>().map_err(|_| self.error("bad number"))?,
            )),
            Some((whole, frac)) => {
                let digits = format!("{whole}{frac}");
                let n: BigInt = digits.parse().map_err(|_| self.error("bad number"))?;
                let scale = num_traits::pow(BigInt::from(10), frac.len());
                Ok(BigRational::new(n, scale))
            }
        }
    }

    fn exponent(&mut self) -> Result<BigRational> {
        let negative = self.eat('-');
        let k = if self.eat('(') {
            let inner_negative = self.eat('-');
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '/') {
                self.pos += 1;
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            let r = parse_rational(&text).map_err(|_| self.error("bad exponent"))?;
            if !self.eat(')') {
                return Err(self.error("expected ')'"));
            }
            if inner_negative {
                -r
            } else {
                r
            }
        } else {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected an exponent"));
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            parse_rational(&text)?
        };
        Ok(if negative { -k } else { k })
    }
}
