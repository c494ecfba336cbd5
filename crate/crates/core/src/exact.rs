//! Exact helpers: rational parsing/formatting and comparison of products of
//! rational powers.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Format an exact rational in lowest terms as `"p/q"` or `"p"`.
pub fn fmt_rational(r: &BigRational) -> String {
    // `Ratio` keeps itself reduced; Display omits a unit denominator.
    r.to_string()
}

/// Parse `"a"`, `"-a"` or `"a/b"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `base^exp` for a small non-negative integer exponent, as an exact rational.
pub fn pow_int(base: &BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        Pow::pow(base, exp as u64)
    } else {
        Pow::pow(&base.recip(), exp.unsigned_abs())
    }
}

/// A formal product `∏ base_k^{exp_k}` with positive rational bases and
/// rational exponents. Such products are usually irrational (`q^{-5/2}`,
/// `T^{τ/(n+1)}`), but two of them can always be compared exactly by raising
/// both sides to the least common denominator of the exponents.
#[derive(Clone, Debug, Default)]
pub struct PowerProduct {
    factors: Vec<(BigRational, BigRational)>,
}

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn rational(r: BigRational) -> Self {
        Self::one().times(r, BigRational::one())
    }

    /// Multiply by `base^exp`. Panics if `base <= 0`.
    pub fn times(mut self, base: BigRational, exp: BigRational) -> Self {
        assert!(base.is_positive(), "power base must be positive");
        if exp.is_zero() || base.is_one() {
            return self;
        }
        // Merge equal bases so that e.g. `q^1 · q^{-5/2}` stays one factor.
        if let Some(pos) = self.factors.iter().position(|(b, _)| *b == base) {
            let e = &self.factors[pos].1 + exp;
            if e.is_zero() {
                self.factors.remove(pos);
            } else {
                self.factors[pos].1 = e;
            }
        } else {
            self.factors.push((base, exp));
        }
        self
    }

    pub fn times_int(self, base: u64, exp: BigRational) -> Self {
        self.times(BigRational::from_integer(BigInt::from(base)), exp)
    }

    pub fn mul(self, other: &PowerProduct) -> Self {
        other
            .factors
            .iter()
            .cloned()
            .fold(self, |acc, (b, e)| acc.times(b, e))
    }

    /// `self^k` for a rational `k`.
    pub fn pow(mut self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::one();
        }
        for f in &mut self.factors {
            f.1 = &f.1 * k;
        }
        self
    }

    /// Exact comparison against a rational; `r` must be positive.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        self.cmp_exact(&PowerProduct::rational(r.clone()))
    }

    pub fn recip(mut self) -> Self {
        for f in &mut self.factors {
            f.1 = -f.1.clone();
        }
        self
    }

    /// Exact three-way comparison.
    pub fn cmp_exact(&self, other: &PowerProduct) -> Ordering {
        let all = self
            .factors
            .iter()
            .cloned()
            .chain(other.factors.iter().map(|(b, e)| (b.clone(), -e.clone())));
        let all: Vec<_> = all.collect();
        let lcd = all
            .iter()
            .fold(BigInt::one(), |acc, (_, e)| acc.lcm(e.denom()));
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (b, e) in &all {
            let k = (e * BigRational::from_integer(lcd.clone())).to_integer();
            let k_abs = k.abs().to_u64().expect("exponent too large to compare");
            let (hi, lo) = if k.is_positive() {
                (b.numer(), b.denom())
            } else {
                (b.denom(), b.numer())
            };
            num *= Pow::pow(hi, k_abs);
            den *= Pow::pow(lo, k_abs);
        }
        num.cmp(&den)
    }

    pub fn lt(&self, other: &PowerProduct) -> bool {
        self.cmp_exact(other) == Ordering::Less
    }

    pub fn le(&self, other: &PowerProduct) -> bool {
        self.cmp_exact(other) != Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|(b, e)| {
                let b = b.to_f64().unwrap_or(f64::NAN);
                let e = e.to_f64().unwrap_or(f64::NAN);
                b.ln() * e
            })
            .sum::<f64>()
            .exp()
    }

    /// The exact value when every exponent is an integer.
    pub fn to_rational(&self) -> Option<BigRational> {
        let mut acc = BigRational::one();
        for (b, e) in &self.factors {
            if !e.is_integer() {
                return None;
            }
            acc *= pow_int(b, e.to_integer().to_i64()?);
        }
        Some(acc)
    }
}

/// `3^(10/3)*2`-style text; the empty product prints as `1`.
impl std::fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, e)| {
                let base = if b.is_integer() {
                    fmt_rational(b)
                } else {
                    format!("({})", fmt_rational(b))
                };
                if e.is_one() {
                    base
                } else {
                    format!("{base}^({})", fmt_rational(e))
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `p^e` for an integer exponent.
pub fn p_power(p: u64, e: i64) -> BigRational {
    pow_int(&BigRational::from_integer(BigInt::from(p)), e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compares_irrational_powers() {
        // 3^{-2} < 4^{-5/4} ?  1/9 = 0.111 < 0.176
        let lhs = PowerProduct::one().times_int(3, int(-2));
        let rhs = PowerProduct::one().times_int(4, rat(-5, 4));
        assert!(lhs.lt(&rhs));
        // 8^{1/3} == 2
        let a = PowerProduct::one().times_int(8, rat(1, 3));
        let b = PowerProduct::rational(int(2));
        assert_eq!(a.cmp_exact(&b), Ordering::Equal);
    }

    #[test]
    fn displays_factors() {
        let v = PowerProduct::rational(rat(1, 2)).times_int(3, rat(10, 3));
        assert_eq!(v.to_string(), "(1/2)*3^(10/3)");
        assert_eq!(PowerProduct::one().to_string(), "1");
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(fmt_rational(&rat(3, 2)), "3/2");
        assert_eq!(fmt_rational(&int(-7)), "-7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
