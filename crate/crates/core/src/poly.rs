//! Multivariate polynomials with rational coefficients, evaluated exactly
//! over the rationals and modulo `p^K` over the p-adic integers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, pow_int};
use crate::padic::PAdicInt;

/// `Σ c_β x^β`, kept merged and free of zero terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn new(nvars: usize, terms: Vec<(BigRational, Vec<u32>)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (c, exps) in terms {
            if exps.len() != nvars {
                return Err(Error::ShapeMismatch(format!(
                    "monomial {exps:?} in a polynomial of {nvars} variables"
                )));
            }
            *merged.entry(exps).or_insert_with(BigRational::zero) += c;
        }
        merged.retain(|_, c| !c.is_zero());
        Ok(Poly {
            nvars,
            terms: merged,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (exps, c) in &self.terms {
            if exps[var] == 0 {
                continue;
            }
            let mut e = exps.clone();
            e[var] -= 1;
            terms.insert(e, c * BigRational::from_integer(exps[var].into()));
        }
        Poly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(x)
                    .fold(c.clone(), |acc, (&e, xi)| acc * pow_int(xi, e as i64))
            })
            .sum()
    }

    /// Evaluation in `Z_p` at the common precision of the arguments.
    pub fn eval_padic(&self, x: &[PAdicInt]) -> Result<PAdicInt> {
        if x.len() != self.nvars || x.is_empty() {
            return Err(Error::ShapeMismatch("point has the wrong dimension".into()));
        }
        let p = x[0].prime();
        let k = x.iter().map(PAdicInt::precision).min().unwrap_or(1);
        let mut acc = PAdicInt::zero(p, k);
        for (exps, c) in &self.terms {
            let mut term = PAdicInt::embed(c, p, k)?;
            for (&e, xi) in exps.iter().zip(x) {
                for _ in 0..e {
                    term = term.mul(xi)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }
}

/// A coefficient in a JSON fixture: an integer or a string such as `"3/2"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FixtureCoef {
    Int(i64),
    Text(String),
}

impl FixtureCoef {
    pub fn value(&self) -> Result<BigRational> {
        match self {
            FixtureCoef::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
            FixtureCoef::Text(s) => parse_rational(s),
        }
    }
}

/// `{"p": 3, "d": 1, "m": 1, "polys": [[[1, [2]]]]}` is `f(x) = x²` over `Z_3`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapFixture {
    pub p: u64,
    pub d: usize,
    pub m: usize,
    pub polys: Vec<Vec<(FixtureCoef, Vec<u32>)>>,
}

impl MapFixture {
    pub fn polys(&self) -> Result<Vec<Poly>> {
        self.polys
            .iter()
            .map(|terms| {
                let terms = terms
                    .iter()
                    .map(|(c, e)| Ok((c.value()?, e.clone())))
                    .collect::<Result<Vec<_>>>()?;
                Poly::new(self.d, terms)
            })
            .collect()
    }

    pub fn from_polys(p: u64, d: usize, polys: &[Poly]) -> Self {
        let polys: Vec<Vec<_>> = polys
            .iter()
            .map(|f| {
                f.terms()
                    .map(|(e, c)| {
                        let coef = match i64::try_from(c.to_integer()) {
                            Ok(v) if c.is_integer() => FixtureCoef::Int(v),
                            _ => FixtureCoef::Text(fmt_rational(c)),
                        };
                        (coef, e.clone())
                    })
                    .collect()
            })
            .collect();
        MapFixture {
            p,
            d,
            m: polys.len(),
            polys,
        }
    }
}

/// `Π binom(β_i, α_i)`.
pub(crate) fn multi_binomial(beta: &[u32], alpha: &[u32]) -> BigInt {
    beta.iter().zip(alpha).fold(BigInt::one(), |acc, (&b, &a)| {
        let mut c = BigInt::one();
        for i in 0..a {
            c = c * BigInt::from(b - i) / BigInt::from(i + 1);
        }
        acc * c
    })
}
