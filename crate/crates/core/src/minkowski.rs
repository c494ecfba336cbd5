//! A constructive p-adic Minkowski lemma for systems of linear forms.
//!
//! Given forms `L_1..L_n` in `x = (x_0, …, x_n)` with p-adic integer
//! coefficients, heights `H_j`, weights `τ` (`Σ τ_i = n + 1`) and shifts `σ`
//! (`Σ σ_i = n`), find `x ≠ 0` with `|x_j| ≤ H_j` and
//! `|L_i(x)|_p ≤ p^{σ_i} T^{-τ_i}` where `T^{n+1} = Π (H_j + 1)`.
//!
//! [`LinearFormSystem::solve`] follows the pigeonhole proof: the values
//! `L(x)` of the non-negative vectors are bucketed by their residues modulo
//! `p^{δ_i}`, and the first collision yields the answer.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::PowerProduct;
use crate::padic::PAdicInt;

/// Default cap on the vectors the bucket search may hash. Every visited
/// vector is kept until the first collision, so this bounds memory.
pub const DEFAULT_BUDGET: u128 = 1 << 23;

/// Default cap on the vectors [`LinearFormSystem::brute_force`] may test.
pub const BRUTE_FORCE_BUDGET: u128 = 1 << 32;

#[derive(Clone, Debug)]
pub struct LinearFormSystem {
    p: u64,
    /// `coeffs[i][j]` multiplies `x_j` in `L_{i+1}`.
    coeffs: Vec<Vec<PAdicInt>>,
    heights: Vec<u64>,
    tau: Vec<BigRational>,
    sigma: Vec<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pigeonhole,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinkowskiSolution {
    pub solution: Vec<i64>,
    pub bucket_exponents: Vec<u32>,
    /// Height bounds, bucket congruences (pigeonhole) and the lemma's
    /// inequalities all re-checked by direct evaluation.
    pub verified: bool,
    /// No strict pigeonhole surplus: `Π (H_j + 1) ≤ p^{Σ δ_i}`.
    pub boundary: bool,
    pub method: Method,
    /// Vectors visited before the collision.
    pub examined: u64,
}

impl LinearFormSystem {
    pub fn new(
        p: u64,
        coeffs: Vec<Vec<PAdicInt>>,
        heights: Vec<u64>,
        tau: Vec<BigRational>,
        sigma: Vec<BigRational>,
    ) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("need at least one form".into()));
        }
        if coeffs.iter().any(|row| row.len() != n + 1) || heights.len() != n + 1 {
            return Err(Error::ShapeMismatch(format!(
                "{n} forms need {} coefficients each and {} heights",
                n + 1,
                n + 1
            )));
        }
        if tau.len() != n || sigma.len() != n {
            return Err(Error::ShapeMismatch("τ and σ need one entry per form".into()));
        }
        if let Some(c) = coeffs.iter().flatten().find(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch {
                left: p,
                right: c.prime(),
            });
        }
        if heights.iter().any(|&h| h == 0) {
            return Err(Error::Hypothesis("H_j >= 1".into()));
        }
        if tau.iter().any(|t| !t.is_positive()) {
            return Err(Error::Hypothesis("τ_i > 0".into()));
        }
        let tau_sum: BigRational = tau.iter().cloned().sum();
        if tau_sum != BigRational::from_integer((n + 1).into()) {
            return Err(Error::Hypothesis(format!("Σ τ_i = n + 1 (got {tau_sum})")));
        }
        let sigma_sum: BigRational = sigma.iter().cloned().sum();
        if sigma_sum != BigRational::from_integer(n.into()) {
            return Err(Error::Hypothesis(format!("Σ σ_i = n (got {sigma_sum})")));
        }
        Ok(LinearFormSystem {
            p,
            coeffs,
            heights,
            tau,
            sigma,
        })
    }

    /// Coefficients given as rationals with p-unit denominators.
    pub fn from_rationals(
        p: u64,
        precision: u32,
        coeffs: &[Vec<BigRational>],
        heights: Vec<u64>,
        tau: Vec<BigRational>,
        sigma: Vec<BigRational>,
    ) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| PAdicInt::embed(c, p, precision))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, coeffs, heights, tau, sigma)
    }

    pub fn forms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn heights(&self) -> &[u64] {
        &self.heights
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Common coefficient precision.
    pub fn precision(&self) -> u32 {
        self.coeffs
            .iter()
            .flatten()
            .map(PAdicInt::precision)
            .min()
            .unwrap_or(0)
    }

    /// `T^{n+1} = Π (H_j + 1)`.
    pub fn t_power(&self) -> BigUint {
        self.heights.iter().map(|&h| BigUint::from(h + 1)).product()
    }

    /// `p^{-σ_i} T^{τ_i}`.
    fn scale(&self, i: usize) -> PowerProduct {
        let n1 = BigRational::from_integer((self.forms() + 1).into());
        PowerProduct::one()
            .times_int(self.p, -self.sigma[i].clone())
            .times(
                BigRational::from_integer(self.t_power().into()),
                &self.tau[i] / n1,
            )
    }

    /// `p^{σ_i} T^{-τ_i}`, the lemma's bound for `|L_i(x)|_p`.
    pub fn lemma_bound(&self, i: usize) -> PowerProduct {
        self.scale(i).recip()
    }

    fn p_pow(&self, e: i64) -> PowerProduct {
        PowerProduct::one().times_int(self.p, BigRational::from_integer(e.into()))
    }

    /// Integers `δ_i` with `p^{δ_i − 1} ≤ p^{−σ_i} T^{τ_i} < p^{δ_i}`.
    pub fn bucket_exponents(&self) -> Result<Vec<u32>> {
        (0..self.forms())
            .map(|i| {
                let v = self.scale(i);
                let guess = (v.to_f64().ln() / (self.p as f64).ln()).floor() + 1.0;
                let mut d = if guess.is_finite() { guess as i64 } else { 0 };
                while !v.lt(&self.p_pow(d)) {
                    d += 1;
                }
                while v.lt(&self.p_pow(d - 1)) {
                    d -= 1;
                }
                u32::try_from(d).map_err(|_| {
                    Error::BelowThreshold(format!(
                        "bucket exponent δ_{} = {d} < 0: T is below the H_σ threshold",
                        i + 1
                    ))
                })
            })
            .collect()
    }

    /// Smallest `w_i ≥ 0` with `p^{-w_i} ≤ p^{σ_i} T^{-τ_i}`: the lemma's
    /// inequality is `ν_p(L_i(x)) ≥ w_i`.
    pub fn lemma_valuations(&self) -> Vec<u32> {
        (0..self.forms())
            .map(|i| {
                let v = self.scale(i);
                let mut w = 0i64;
                while self.p_pow(w).lt(&v) {
                    w += 1;
                }
                w as u32
            })
            .collect()
    }

    /// `Π (H_j + 1) > p^{Σ δ_i}`.
    pub fn pigeonhole_surplus(&self) -> Result<bool> {
        let total: u32 = self.bucket_exponents()?.iter().sum();
        Ok(self.t_power() > Pow::pow(BigUint::from(self.p), total))
    }

    fn eval_mod(&self, i: usize, x: &[i64], k: u32) -> BigInt {
        let m = BigInt::from(Pow::pow(BigUint::from(self.p), k));
        let mut acc = BigInt::zero();
        for (c, &xj) in self.coeffs[i].iter().zip(x) {
            acc += BigInt::from(c.residue().clone()) * BigInt::from(xj);
        }
        acc.mod_floor(&m)
    }

    fn require_precision(&self, needed: u32) -> Result<()> {
        let have = self.precision();
        if needed > have {
            return Err(Error::InsufficientPrecision { needed, have });
        }
        Ok(())
    }

    /// `L_i(x) ≡ 0 (mod p^{k_i})` for every form.
    fn vanishes(&self, x: &[i64], ks: &[u32]) -> bool {
        ks.iter()
            .enumerate()
            .all(|(i, &k)| self.eval_mod(i, x, k).is_zero())
    }

    fn in_box(&self, x: &[i64]) -> bool {
        x.len() == self.heights.len()
            && x.iter()
                .zip(&self.heights)
                .all(|(&xi, &h)| xi.unsigned_abs() <= h)
    }

    /// Does `x` satisfy the lemma's conclusion?
    pub fn satisfies_lemma(&self, x: &[i64]) -> Result<bool> {
        let w = self.lemma_valuations();
        self.require_precision(w.iter().copied().max().unwrap_or(0))?;
        Ok(self.in_box(x) && x.iter().any(|&v| v != 0) && self.vanishes(x, &w))
    }

    /// `|L_i(x)|_p ≤ p^{-δ_i}` for all `i`, plus the height bounds.
    pub fn satisfies_buckets(&self, x: &[i64]) -> Result<bool> {
        let d = self.bucket_exponents()?;
        self.require_precision(d.iter().copied().max().unwrap_or(0))?;
        Ok(self.in_box(x) && x.iter().any(|&v| v != 0) && self.vanishes(x, &d))
    }

    pub fn solve(&self) -> Result<MinkowskiSolution> {
        self.solve_with_budget(DEFAULT_BUDGET)
    }

    pub fn solve_with_budget(&self, budget: u128) -> Result<MinkowskiSolution> {
        let delta = self.bucket_exponents()?;
        self.require_precision(delta.iter().copied().max().unwrap_or(0))?;
        let boundary = !self.pigeonhole_surplus()?;
        match self.collide(&delta, budget)? {
            Some((x, examined)) => {
                let verified = self.satisfies_buckets(&x)? && self.satisfies_lemma(&x)?;
                Ok(MinkowskiSolution {
                    solution: x,
                    bucket_exponents: delta,
                    verified,
                    boundary,
                    method: Method::Pigeonhole,
                    examined,
                })
            }
            None => {
                let x = self.brute_force(BRUTE_FORCE_BUDGET)?.ok_or_else(|| {
                    Error::NoSolution("no vector in the box meets the lemma's bounds".into())
                })?;
                let verified = self.satisfies_lemma(&x)?;
                let examined = self.heights.iter().map(|&h| 2 * h + 1).product();
                Ok(MinkowskiSolution {
                    solution: x,
                    bucket_exponents: delta,
                    verified,
                    boundary,
                    method: Method::BruteForce,
                    examined,
                })
            }
        }
    }

    /// Walk the non-negative box in row-major order (last coordinate
    /// fastest) and return the first bucket collision as `later − earlier`.
    ///
    /// At most `budget` vectors are hashed; the pigeonhole principle
    /// guarantees a collision among the first `p^{Σδ} + 1` of them.
    fn collide(&self, delta: &[u32], budget: u128) -> Result<Option<(Vec<i64>, u64)>> {
        let total: u128 = self.heights.iter().map(|&h| h as u128 + 1).product();
        let buckets = (self.p as u128)
            .checked_pow(delta.iter().sum())
            .unwrap_or(u128::MAX);
        let needed = total.min(buckets.saturating_add(1));
        let moduli: Vec<u128> = delta
            .iter()
            .map(|&d| (self.p as u128).checked_pow(d))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Invalid("bucket modulus overflows u128".into()))?;
        if moduli.iter().try_fold(1u128, |acc, &m| acc.checked_mul(m)).is_none() {
            return Err(Error::Invalid("bucket key space overflows u128".into()));
        }
        let vars = self.heights.len();
        // c[i][j] mod p^{δ_i}
        let c: Vec<Vec<u128>> = self
            .coeffs
            .iter()
            .zip(&moduli)
            .map(|(row, &m)| {
                row.iter()
                    .map(|a| (a.residue() % BigUint::from(m)).to_u128().expect("below modulus"))
                    .collect()
            })
            .collect();
        // Advancing x_j by one and resetting every later coordinate from
        // H_k to 0 changes L_i by c_ij − Σ_{k>j} c_ik H_k.
        let step: Vec<Vec<u128>> = c
            .iter()
            .zip(&moduli)
            .map(|(row, &m)| {
                (0..vars)
                    .map(|j| {
                        let back = ((j + 1)..vars).fold(0u128, |acc, k| {
                            (acc + mulmod(row[k], self.heights[k] as u128 % m, m)) % m
                        });
                        (row[j] + m - back) % m
                    })
                    .collect()
            })
            .collect();
        let mut seen: HashMap<u128, u64, BuildHasherDefault<KeyHasher>> = HashMap::default();
        let mut x = vec![0u64; vars];
        let mut value = vec![0u128; self.forms()];
        let mut index = 0u64;
        loop {
            let key = value
                .iter()
                .zip(&moduli)
                .fold(0u128, |acc, (&v, &m)| acc * m + v);
            if let Some(&earlier) = seen.get(&key) {
                let y = self.decode(earlier);
                let diff = x
                    .iter()
                    .zip(&y)
                    .map(|(&a, &b)| a as i64 - b as i64)
                    .collect();
                return Ok(Some((diff, index + 1)));
            }
            seen.insert(key, index);
            if (index + 1) as u128 >= budget {
                return Err(Error::BudgetExceeded { needed, budget });
            }
            // odometer
            let mut j = vars;
            loop {
                if j == 0 {
                    return Ok(None);
                }
                j -= 1;
                if x[j] < self.heights[j] {
                    break;
                }
            }
            x[j] += 1;
            for xk in x.iter_mut().skip(j + 1) {
                *xk = 0;
            }
            for (i, v) in value.iter_mut().enumerate() {
                *v = (*v + step[i][j]) % moduli[i];
            }
            index += 1;
        }
    }

    fn decode(&self, mut index: u64) -> Vec<u64> {
        let mut x = vec![0u64; self.heights.len()];
        for j in (0..x.len()).rev() {
            let r = self.heights[j] + 1;
            x[j] = index % r;
            index /= r;
        }
        x
    }

    /// The lexicographically smallest non-zero `x` in the box meeting the
    /// lemma's bounds, or `None`.
    pub fn brute_force(&self, budget: u128) -> Result<Option<Vec<i64>>> {
        let total: u128 = self.heights.iter().map(|&h| 2 * h as u128 + 1).product();
        if total > budget {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget,
            });
        }
        let w = self.lemma_valuations();
        self.require_precision(w.iter().copied().max().unwrap_or(0))?;
        let moduli: Vec<BigInt> = w
            .iter()
            .map(|&k| BigInt::from(Pow::pow(BigUint::from(self.p), k)))
            .collect();
        let c: Vec<Vec<BigInt>> = self
            .coeffs
            .iter()
            .zip(&moduli)
            .map(|(row, m)| {
                row.iter()
                    .map(|a| BigInt::from(a.residue().clone()).mod_floor(m))
                    .collect()
            })
            .collect();
        let mut x: Vec<i64> = self.heights.iter().map(|&h| -(h as i64)).collect();
        loop {
            if x.iter().any(|&v| v != 0)
                && c.iter().zip(&moduli).all(|(row, m)| {
                    let s: BigInt = row.iter().zip(&x).map(|(a, &v)| a * v).sum();
                    s.mod_floor(m).is_zero()
                })
            {
                return Ok(Some(x));
            }
            let mut j = x.len();
            loop {
                if j == 0 {
                    return Ok(None);
                }
                j -= 1;
                if x[j] < self.heights[j] as i64 {
                    break;
                }
            }
            x[j] += 1;
            for (k, xk) in x.iter_mut().enumerate().skip(j + 1) {
                *xk = -(self.heights[k] as i64);
            }
        }
    }
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if let Some(v) = a.checked_mul(b) {
        return v % m;
    }
    let r = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(m);
    r.to_u128().expect("below modulus")
}

/// Multiplicative hashing for bucket keys, which are already well mixed
/// residues.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(8) ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }

    fn write_u128(&mut self, v: u128) {
        let folded = (v as u64) ^ ((v >> 64) as u64).rotate_left(29);
        self.0 = folded.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (folded >> 31);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn one_form(p: u64, k: u32, alpha: &BigInt, h: u64, tau: BigRational, sigma: BigRational) -> LinearFormSystem {
        let a = PAdicInt::from_bigint(p, k, alpha);
        let minus_one = PAdicInt::from_i64(p, k, -1);
        LinearFormSystem::new(p, vec![vec![a, minus_one]], vec![h, h], vec![tau], vec![sigma]).unwrap()
    }

    #[test]
    fn bucket_example() {
        let sys = one_form(3, 8, &BigInt::from(5), 2, int(2), int(1));
        assert_eq!(sys.t_power(), BigUint::from(9u32));
        assert_eq!(sys.bucket_exponents().unwrap(), vec![2]);
    }

    #[test]
    fn exact_power_is_boundary() {
        // p = 2, T^2 = 4: p^{-1} T^2 = 2 = p^{δ-1} with δ = 2, so the four
        // non-negative vectors meet exactly four buckets.
        let sys = one_form(2, 8, &BigInt::from(3), 1, int(2), int(1));
        assert_eq!(sys.bucket_exponents().unwrap(), vec![2]);
        assert!(!sys.pigeonhole_surplus().unwrap());
        let sol = sys.solve().unwrap();
        assert!(sol.boundary);
        assert!(sol.verified);
        // the bound itself: p^{σ} T^{-τ} = 1/2
        assert_eq!(sys.lemma_valuations(), vec![1]);
    }

    #[test]
    fn below_threshold() {
        // n = 2 with σ = (2, 0): p^{-2} T^{3/2} < p^{-1} for T = 2
        let k = 6;
        let row = |a: i64| vec![PAdicInt::from_i64(3, k, a), PAdicInt::from_i64(3, k, 1), PAdicInt::from_i64(3, k, 1)];
        let sys = LinearFormSystem::new(3, vec![row(1), row(2)], vec![1, 1, 1], vec![rat(3, 2), rat(3, 2)], vec![int(2), int(0)]).unwrap();
        assert!(matches!(sys.bucket_exponents(), Err(Error::BelowThreshold(_))));
        assert!(sys.solve().is_err());
    }

    #[test]
    fn hypotheses_checked() {
        let a = PAdicInt::from_i64(3, 4, 1);
        let bad_tau = LinearFormSystem::new(3, vec![vec![a.clone(), a.clone()]], vec![2, 2], vec![int(3)], vec![int(1)]);
        assert!(matches!(bad_tau, Err(Error::Hypothesis(_))));
        let bad_sigma = LinearFormSystem::new(3, vec![vec![a.clone(), a.clone()]], vec![2, 2], vec![int(2)], vec![int(0)]);
        assert!(matches!(bad_sigma, Err(Error::Hypothesis(_))));
        let bad_shape = LinearFormSystem::new(3, vec![vec![a.clone()]], vec![2, 2], vec![int(2)], vec![int(1)]);
        assert!(matches!(bad_shape, Err(Error::ShapeMismatch(_))));
        let other = PAdicInt::from_i64(5, 4, 1);
        assert!(LinearFormSystem::new(3, vec![vec![a, other]], vec![2, 2], vec![int(2)], vec![int(1)]).is_err());
    }

    #[test]
    fn precision_is_required() {
        // H = 80: T = 81, p^{-1} T^2 = 3^7 so δ = 8, but only 3 digits are known
        let sys = one_form(3, 3, &BigInt::from(5), 80, int(2), int(1));
        assert_eq!(sys.bucket_exponents().unwrap(), vec![8]);
        assert!(matches!(sys.solve(), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn random_alpha_example() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let alpha = BigInt::from(rng.gen_range(0u64..3u64.pow(12)));
        let sys = one_form(3, 12, &alpha, 8, int(2), int(1));
        let sol = sys.solve().unwrap();
        assert!(sol.verified);
        assert!(sol.solution.iter().all(|v| v.abs() <= 8));
        // |α x0 − x1|_3 ≤ 3 · 81^{-1}
        let l = BigInt::from(sol.solution[0]) * &alpha - sol.solution[1];
        assert!((l % BigInt::from(27)).is_zero());
        let brute = sys.brute_force(BRUTE_FORCE_BUDGET).unwrap().unwrap();
        assert!(sys.satisfies_lemma(&brute).unwrap());
    }

    #[test]
    fn zero_form_and_integer_alpha() {
        let sys = one_form(3, 6, &BigInt::zero(), 4, int(2), int(1));
        let sol = sys.solve().unwrap();
        assert!(sol.verified);
        // L = −x1, so every solution has x1 ≡ 0 (mod 3^w)
        assert!(sys.brute_force(BRUTE_FORCE_BUDGET).unwrap().is_some());
        // (1, α) is an exact zero of α x0 − x1
        let sys = one_form(5, 6, &BigInt::from(3), 3, int(2), int(1));
        assert!(sys.satisfies_lemma(&[1, 3]).unwrap());
    }

    #[test]
    fn shrinking_heights_runs_out() {
        // α = 1/2 in Z_3 at precision 10 with σ = 0 forces |2x1 - x0| small
        let alpha = PAdicInt::embed_rational(&1.into(), &2.into(), 3, 10).unwrap();
        let minus_one = PAdicInt::from_i64(3, 10, -1);
        for h in 1..6u64 {
            let sys = LinearFormSystem::new(3, vec![vec![alpha.clone(), minus_one.clone()]], vec![h, h], vec![int(2)], vec![int(1)]).unwrap();
            let bf = sys.brute_force(BRUTE_FORCE_BUDGET).unwrap();
            if let Ok(sol) = sys.solve() {
                assert!(sol.verified);
                assert!(bf.is_some());
            }
        }
    }

    #[test]
    fn brute_force_is_lexicographic() {
        let sys = one_form(3, 8, &BigInt::from(4), 3, int(2), int(1));
        let first = sys.brute_force(BRUTE_FORCE_BUDGET).unwrap().unwrap();
        // every lexicographically smaller vector fails
        let h = 3i64;
        for a in -h..=h {
            for b in -h..=h {
                if [a, b] < [first[0], first[1]] && (a, b) != (0, 0) {
                    assert!(!sys.satisfies_lemma(&[a, b]).unwrap());
                }
            }
        }
    }

    #[test]
    fn budget_enforced() {
        let sys = one_form(3, 30, &BigInt::from(5), 1000, int(2), int(1));
        assert!(matches!(sys.brute_force(1000), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(sys.solve_with_budget(3), Err(Error::BudgetExceeded { .. })));
        assert!(sys.solve_with_budget(1 << 20).unwrap().verified);
    }

    fn system() -> impl Strategy<Value = LinearFormSystem> {
        (prop::sample::select(vec![2u64, 3, 5]), 1usize..=3, any::<u64>()).prop_map(|(p, n, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = 24;
            let coeffs = (0..n)
                .map(|_| (0..=n).map(|_| PAdicInt::from_i64(p, k, rng.gen_range(0..1_000_000))).collect())
                .collect();
            let max_h = if n == 3 { 6 } else { 12 };
            let heights = (0..=n).map(|_| rng.gen_range(1..=max_h)).collect();
            // random positive τ summing to n + 1 and σ summing to n
            let mut cuts: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(1..(n as i64 + 1) * 6)).collect();
            cuts.push(0);
            cuts.push((n as i64 + 1) * 6);
            cuts.sort();
            let mut tau: Vec<BigRational> = cuts.windows(2).map(|w| rat(w[1] - w[0], 6)).collect();
            for t in tau.iter_mut() {
                if t.is_zero() {
                    *t = rat(1, 6);
                }
            }
            let excess: BigRational = tau.iter().cloned().sum::<BigRational>() - int(n as i64 + 1);
            tau[0] = &tau[0] - excess;
            if !tau[0].is_positive() {
                tau = vec![rat(n as i64 + 1, n as i64); n];
            }
            let mut sigma: Vec<BigRational> = (0..n).map(|_| rat(rng.gen_range(-3..=6), 3)).collect();
            let s: BigRational = sigma.iter().cloned().sum();
            sigma[0] = &sigma[0] + int(n as i64) - s;
            LinearFormSystem::new(p, coeffs, heights, tau, sigma).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn solve_is_sound(sys in system()) {
            match sys.solve() {
                Ok(sol) => {
                    prop_assert!(sol.verified);
                    prop_assert!(sys.satisfies_lemma(&sol.solution).unwrap());
                    for (x, h) in sol.solution.iter().zip(sys.heights()) {
                        prop_assert!(x.unsigned_abs() <= *h);
                    }
                    if sol.method == Method::Pigeonhole {
                        prop_assert!(sys.satisfies_buckets(&sol.solution).unwrap());
                    }
                    prop_assert!(sys.brute_force(BRUTE_FORCE_BUDGET).unwrap().is_some());
                }
                Err(Error::BelowThreshold(_)) => {}
                Err(e) => prop_assert!(false, "unexpected error {e:?}"),
            }
        }

        #[test]
        fn surplus_implies_collision(sys in system()) {
            if let Ok(true) = sys.pigeonhole_surplus() {
                let sol = sys.solve().unwrap();
                prop_assert_eq!(sol.method, Method::Pigeonhole);
                prop_assert!(!sol.boundary);
            }
        }
    }
}
