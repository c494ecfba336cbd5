//! p-adic integers at finite precision, valuations and norms of rationals,
//! Euler's totient, and the digit-shift map used in the zero-one law.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::p_power;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Ambient parameters shared by the experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub p: u64,
    pub n: usize,
    pub d: usize,
    pub m: usize,
}

impl Params {
    /// Parameters for experiments in `Z_p^n` with no manifold structure.
    pub fn flat(p: u64, n: usize) -> Result<Self> {
        let params = Params { p, n, d: n, m: 0 };
        params.check()?;
        Ok(params)
    }

    pub fn manifold(p: u64, d: usize, m: usize) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(Error::Invalid("manifolds need d >= 1 and m >= 1".into()));
        }
        let params = Params { p, n: d + m, d, m };
        params.check()?;
        Ok(params)
    }

    fn check(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::Invalid(format!("{} is not prime", self.p)));
        }
        if self.n == 0 {
            return Err(Error::Invalid("dimension n must be at least 1".into()));
        }
        if self.d + self.m != self.n {
            return Err(Error::Invalid("n must equal d + m".into()));
        }
        Ok(())
    }
}

/// `ν_p(x)` for a non-zero integer, `None` for zero.
pub fn valuation_int(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = x.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

pub fn valuation_u64(mut x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// The unique `ℓ` with `x = p^ℓ a/b`, `p ∤ ab`.
pub fn valuation(x: &BigRational, p: u64) -> Result<i64> {
    let num = valuation_int(x.numer(), p).ok_or(Error::ValuationOfZero)?;
    let den = valuation_int(x.denom(), p).expect("denominator is non-zero");
    Ok(num as i64 - den as i64)
}

/// `|x|_p`, with `|0|_p = 0`.
pub fn norm_p(x: &BigRational, p: u64) -> BigRational {
    match valuation(x, p) {
        Ok(v) => p_power(p, -v),
        Err(_) => BigRational::zero(),
    }
}

pub fn euler_phi(q: u64) -> u64 {
    assert!(q >= 1, "totient of zero");
    let mut result = q;
    let mut m = q;
    let mut f = 2u64;
    while f * f <= m {
        if m % f == 0 {
            while m % f == 0 {
                m /= f;
            }
            result -= result / f;
        }
        f += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Totients of `0..=limit` (with `phi[0] = 0`).
pub fn phi_sieve(limit: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit as u64).collect();
    for i in 2..=limit {
        if phi[i] == i as u64 {
            for j in (i..=limit).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi
}

/// A p-adic integer known modulo `p^precision`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    prime: u64,
    precision: u32,
    residue: BigUint,
}

/// What is known about `|x|_p` at finite precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PNorm {
    Exact(BigRational),
    /// All known digits vanish: `|x|_p ≤ p^{-precision}`.
    AtMost(BigRational),
}

impl PAdicInt {
    pub fn new(prime: u64, precision: u32, residue: BigUint) -> Self {
        assert!(precision >= 1, "precision must be positive");
        let modulus = modulus(prime, precision);
        PAdicInt {
            prime,
            precision,
            residue: residue % modulus,
        }
    }

    pub fn from_i64(prime: u64, precision: u32, value: i64) -> Self {
        Self::from_bigint(prime, precision, &BigInt::from(value))
    }

    pub fn from_bigint(prime: u64, precision: u32, value: &BigInt) -> Self {
        let modulus = BigInt::from(modulus(prime, precision));
        let r = value.mod_floor(&modulus);
        PAdicInt {
            prime,
            precision,
            residue: r.to_biguint().expect("mod_floor is non-negative"),
        }
    }

    pub fn zero(prime: u64, precision: u32) -> Self {
        Self::new(prime, precision, BigUint::zero())
    }

    /// The residue `r` with `b r ≡ a (mod p^K)`.
    pub fn embed_rational(a: &BigInt, b: &BigInt, prime: u64, precision: u32) -> Result<Self> {
        if b.is_zero() || (b % BigInt::from(prime)).is_zero() {
            return Err(Error::NotPAdicInteger {
                denom: b.to_string(),
                p: prime,
            });
        }
        let modulus = BigInt::from(modulus(prime, precision));
        let inv = mod_inverse(&b.mod_floor(&modulus), &modulus)
            .expect("b is a unit modulo p^K");
        let r = (a.mod_floor(&modulus) * inv).mod_floor(&modulus);
        Ok(PAdicInt {
            prime,
            precision,
            residue: r.to_biguint().expect("non-negative"),
        })
    }

    pub fn embed(x: &BigRational, prime: u64, precision: u32) -> Result<Self> {
        Self::embed_rational(x.numer(), x.denom(), prime, precision)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// The residue modulo `p^k` for `k ≤ precision`.
    pub fn residue_mod(&self, k: u32) -> BigUint {
        assert!(k <= self.precision);
        &self.residue % modulus(self.prime, k)
    }

    /// `residue mod p^k` as a machine word; `p^k` must fit in `u64`.
    pub fn residue_u64(&self, k: u32) -> u64 {
        self.residue_mod(k)
            .to_u64()
            .expect("p^k must fit in a machine word")
    }

    /// Base-p digits, least significant first; always `precision` entries.
    pub fn digits(&self) -> Vec<u64> {
        let p = BigUint::from(self.prime);
        let mut r = self.residue.clone();
        (0..self.precision)
            .map(|_| {
                let (q, d) = r.div_rem(&p);
                r = q;
                d.to_u64().expect("digit < p")
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// `None` when the value is zero to the known precision.
    pub fn valuation(&self) -> Option<u32> {
        if self.residue.is_zero() {
            return None;
        }
        valuation_int(&BigInt::from(self.residue.clone()), self.prime)
    }

    pub fn norm(&self) -> PNorm {
        match self.valuation() {
            Some(v) => PNorm::Exact(p_power(self.prime, -(v as i64))),
            None => PNorm::AtMost(p_power(self.prime, -(self.precision as i64))),
        }
    }

    fn combine(&self, other: &Self, f: impl Fn(BigInt, BigInt) -> BigInt) -> Result<Self> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        let precision = self.precision.min(other.precision);
        let v = f(
            BigInt::from(self.residue.clone()),
            BigInt::from(other.residue.clone()),
        );
        Ok(Self::from_bigint(self.prime, precision, &v))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a * b)
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::from_bigint(
            self.prime,
            self.precision,
            &(BigInt::from(self.residue.clone()) * k),
        )
    }

    pub fn add_int(&self, k: &BigInt) -> Self {
        Self::from_bigint(
            self.prime,
            self.precision,
            &(BigInt::from(self.residue.clone()) + k),
        )
    }

    /// Truncate to a lower precision.
    pub fn truncate(&self, precision: u32) -> Self {
        assert!(precision >= 1 && precision <= self.precision);
        Self::new(self.prime, precision, self.residue.clone())
    }

    /// The digit-shift map: drop the lowest digit, adding 1 when it was
    /// non-zero. Loses one digit of precision.
    pub fn shift_map(&self) -> Result<Self> {
        if self.precision < 2 {
            return Err(Error::InsufficientPrecision {
                needed: 2,
                have: self.precision,
            });
        }
        let p = BigUint::from(self.prime);
        let (shifted, low) = self.residue.div_rem(&p);
        let value = if low.is_zero() {
            shifted
        } else {
            shifted + BigUint::one()
        };
        Ok(Self::new(self.prime, self.precision - 1, value))
    }
}

impl fmt::Debug for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (mod {}^{})",
            self.residue, self.prime, self.precision
        )
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn modulus(prime: u64, precision: u32) -> BigUint {
    Pow::pow(BigUint::from(prime), precision)
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Multiplicative inverse of `a` modulo `m` for machine-sized moduli.
pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    let inv = mod_inverse(&BigInt::from(a), &BigInt::from(m))?;
    inv.to_u64()
}

/// The residue of the rational `a/b` modulo `m`, or `None` when `b` is not
/// invertible modulo `m`.
pub fn rational_mod(x: &BigRational, m: u64) -> Option<u64> {
    let mb = BigInt::from(m);
    let den = x.denom().mod_floor(&mb);
    let inv = mod_inverse(&den, &mb)?;
    let r = (x.numer().mod_floor(&mb) * inv).mod_floor(&mb);
    r.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&int(12), 3).unwrap(), 1);
        assert_eq!(valuation(&rat(1, 9), 3).unwrap(), -2);
        assert_eq!(valuation(&int(11), 2).unwrap(), 0);
        assert_eq!(valuation(&int(0), 5), Err(Error::ValuationOfZero));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_p(&int(0), 5), int(0));
        assert_eq!(norm_p(&int(12), 3), rat(1, 3));
        assert_eq!(norm_p(&rat(1, 2), 2), int(2));
    }

    #[test]
    fn embed_examples() {
        let x = PAdicInt::embed_rational(&1.into(), &2.into(), 3, 2).unwrap();
        assert_eq!(x.residue(), &BigUint::from(5u32));
        let y = PAdicInt::embed_rational(&7.into(), &1.into(), 5, 3).unwrap();
        assert_eq!(y.residue(), &BigUint::from(7u32));
        assert!(matches!(
            PAdicInt::embed_rational(&1.into(), &5.into(), 5, 2),
            Err(Error::NotPAdicInteger { .. })
        ));
        let neg = PAdicInt::from_i64(3, 2, -1);
        assert_eq!(neg.residue(), &BigUint::from(8u32));
    }

    #[test]
    fn arithmetic_examples() {
        let a = PAdicInt::from_i64(3, 2, 2);
        let b = PAdicInt::from_i64(3, 2, 7);
        assert!(a.add(&b).unwrap().is_zero());
        let one = PAdicInt::from_i64(3, 2, 1);
        assert_eq!(a.mul(&one).unwrap(), a);
        assert!(b.sub(&b).unwrap().is_zero());
        let other = PAdicInt::from_i64(5, 2, 1);
        assert!(matches!(a.add(&other), Err(Error::PrimeMismatch { .. })));
        // precision drops to the minimum
        let c = PAdicInt::from_i64(3, 4, 80);
        assert_eq!(c.add(&a).unwrap().precision(), 2);
    }

    #[test]
    fn shift_map_examples() {
        assert!(PAdicInt::zero(3, 4).shift_map().unwrap().is_zero());
        // 0 + 1*3 + 2*9 -> 1 + 2*3
        let x = PAdicInt::from_i64(3, 3, 3 + 18);
        let y = x.shift_map().unwrap();
        assert_eq!(y.residue(), &BigUint::from(7u32));
        assert_eq!(y.precision(), 2);
        // 2 + 1*3 -> 1 + 1 = 2
        let x = PAdicInt::from_i64(3, 2, 5);
        assert_eq!(x.shift_map().unwrap().residue(), &BigUint::from(2u32));
        assert!(PAdicInt::from_i64(3, 1, 1).shift_map().is_err());
    }

    #[test]
    fn shift_map_bijective_on_p_z_p() {
        // π restricted to pZ_p mod p^K is a bijection onto Z/p^{K-1}.
        for p in [2u64, 3, 5] {
            let k = 4;
            let pk = p.pow(k);
            let mut seen = std::collections::BTreeSet::new();
            for r in (0..pk).step_by(p as usize) {
                let y = PAdicInt::from_i64(p, k, r as i64).shift_map().unwrap();
                assert!(seen.insert(y.residue().clone()));
            }
            assert_eq!(seen.len() as u64, p.pow(k - 1));
        }
    }

    #[test]
    fn iterated_shift_reaches_precision_one() {
        let mut x = PAdicInt::from_i64(5, 6, 12345);
        for _ in 0..5 {
            x = x.shift_map().unwrap();
        }
        assert_eq!(x.precision(), 1);
        assert!(x.residue() < &BigUint::from(5u32));
    }

    #[test]
    fn totient() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        for p in [2u64, 3, 5, 7, 97] {
            assert_eq!(euler_phi(p), p - 1);
        }
        let sieve = phi_sieve(500);
        for q in 1..=500u64 {
            let brute = (1..=q).filter(|a| a.gcd(&q) == 1).count() as u64;
            assert_eq!(sieve[q as usize], brute);
            assert_eq!(euler_phi(q), brute);
        }
    }

    #[test]
    fn params_validation() {
        assert!(Params::flat(4, 1).is_err());
        assert!(Params::flat(3, 0).is_err());
        assert!(Params::manifold(3, 1, 0).is_err());
        let m = Params::manifold(3, 1, 2).unwrap();
        assert_eq!(m.n, 3);
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-500i64..500, 1i64..500).prop_map(|(a, b)| rat(a, b))
    }

    proptest! {
        #[test]
        fn ultrametric(x in small_rational(), y in small_rational(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let nx = norm_p(&x, p);
            let ny = norm_p(&y, p);
            let nxy = norm_p(&(&x + &y), p);
            let mx = if nx > ny { nx.clone() } else { ny.clone() };
            prop_assert!(nxy <= mx);
            if nx != ny {
                prop_assert_eq!(nxy, mx);
            }
        }

        #[test]
        fn norm_multiplicative(x in small_rational(), y in small_rational(), p in prop::sample::select(vec![2u64, 3, 5])) {
            prop_assert_eq!(norm_p(&(&x * &y), p), norm_p(&x, p) * norm_p(&y, p));
        }

        #[test]
        fn embed_then_multiply(a in -10_000i64..10_000, b in 1i64..10_000, k in 1u32..20) {
            let p = 3u64;
            prop_assume!(b % 3 != 0);
            let x = PAdicInt::embed_rational(&a.into(), &b.into(), p, k).unwrap();
            let back = x.mul(&PAdicInt::from_i64(p, k, b)).unwrap();
            prop_assert_eq!(back, PAdicInt::from_i64(p, k, a));
        }
    }
}
