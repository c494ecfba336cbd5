//! Polynomial maps `f: Z_p^d → Z_p^m` with quadratic-error constants, and
//! the Dirichlet-style system on the graph of `f`.
//!
//! The solver linearises the system at the base point, hands it to the
//! Minkowski solver, cancels the p-part of `b_0` and then re-checks every
//! inequality exactly. Resonant points `S_τ` are enumerated by congruence
//! classes, and their rectangles are unioned into a [`ClopenSet`] cover.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::clopen::{BallSpec, ClopenSet};
use crate::error::{Error, Result};
use crate::exact::{p_power, PowerProduct};
use crate::minkowski::{LinearFormSystem, MinkowskiSolution};
use crate::padic::{is_prime, valuation, valuation_int, PAdicInt};
use crate::poly::{multi_binomial, MapFixture, Poly};

/// Cap on vectors hashed by the bucket search inside [`dirichlet_solve`];
/// beyond it the congruence search takes over.
pub const DIRICHLET_BUCKET_BUDGET: u128 = 1 << 20;

/// Default cap on candidate tuples in [`enumerate_s_tau`].
pub const ENUMERATION_BUDGET: u128 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DQEMap {
    p: u64,
    d: usize,
    polys: Vec<Poly>,
    /// `jacobian[j][i] = ∂f_j/∂x_i`.
    jacobian: Vec<Vec<Poly>>,
}

/// `C = p^{c_exponent}`, `ε` and `λ` at the queried point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DqeConstants {
    pub c_exponent: i64,
    pub c: BigRational,
    pub epsilon: BigRational,
    pub lambda: u32,
}

impl DQEMap {
    pub fn new(p: u64, d: usize, polys: Vec<Poly>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if d == 0 || polys.is_empty() {
            return Err(Error::Invalid("need d >= 1 and m >= 1".into()));
        }
        for f in &polys {
            if f.nvars() != d {
                return Err(Error::ShapeMismatch(format!(
                    "polynomial in {} variables for d = {d}",
                    f.nvars()
                )));
            }
            if let Some((_, c)) = f.terms().find(|(_, c)| valuation_int(c.denom(), p) != Some(0)) {
                return Err(Error::NotPAdicInteger {
                    denom: c.denom().to_string(),
                    p,
                });
            }
        }
        let jacobian = polys
            .iter()
            .map(|f| (0..d).map(|i| f.derivative(i)).collect())
            .collect();
        Ok(DQEMap {
            p,
            d,
            polys,
            jacobian,
        })
    }

    pub fn from_fixture(fx: &MapFixture) -> Result<Self> {
        let polys = fx.polys()?;
        if polys.len() != fx.m {
            return Err(Error::ShapeMismatch(format!(
                "fixture declares m = {} but lists {} polynomials",
                fx.m,
                polys.len()
            )));
        }
        Self::new(fx.p, fx.d, polys)
    }

    pub fn to_fixture(&self) -> MapFixture {
        MapFixture::from_polys(self.p, self.d, &self.polys)
    }

    /// `f(x) = x²` over `Z_p`.
    pub fn square(p: u64) -> Result<Self> {
        Self::new(p, 1, vec![Poly::new(1, vec![(BigRational::one(), vec![2])])?])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.polys.len()
    }

    pub fn n(&self) -> usize {
        self.d + self.m()
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    pub fn partial(&self, j: usize, i: usize) -> &Poly {
        &self.jacobian[j][i]
    }

    pub fn eval(&self, x: &[BigRational]) -> Vec<BigRational> {
        self.polys.iter().map(|f| f.eval(x)).collect()
    }

    /// Least `c` such that `C = p^c` bounds every Taylor term of order at
    /// least two coefficientwise, with the strict inequality
    /// `|f(y) − f(x) − ∇f(x)(y − x)|_p < C |y − x|²` for `y ≠ x`.
    /// Affine maps have no quadratic error and get `C = 1`.
    pub fn c_exponent(&self) -> i64 {
        let mut best: Option<i64> = None;
        for f in &self.polys {
            for (beta, c) in f.terms() {
                if beta.iter().sum::<u32>() < 2 {
                    continue;
                }
                for alpha in sub_indices(beta) {
                    if alpha.iter().sum::<u32>() < 2 {
                        continue;
                    }
                    let coef = c * BigRational::from_integer(multi_binomial(beta, &alpha));
                    if let Ok(v) = valuation(&coef, self.p) {
                        best = Some(best.map_or(-v, |b| b.max(-v)));
                    }
                }
            }
        }
        best.map_or(0, |m| m + 1)
    }

    /// `λ ≥ 0` with `p^λ = max{1, max |∂f_j/∂x_i(x)|_p}`.
    pub fn lambda_at(&self, x: &[PAdicInt]) -> Result<u32> {
        let mut lambda = 0i64;
        for row in &self.jacobian {
            for g in row {
                if let Some(v) = g.eval_padic(x)?.valuation() {
                    lambda = lambda.max(-(v as i64));
                }
            }
        }
        Ok(lambda as u32)
    }

    pub fn constants(&self, x: &[PAdicInt]) -> Result<DqeConstants> {
        let c_exponent = self.c_exponent();
        Ok(DqeConstants {
            c_exponent,
            c: p_power(self.p, c_exponent),
            epsilon: BigRational::one(),
            lambda: self.lambda_at(x)?,
        })
    }
}

/// All `α ≤ β` componentwise.
fn sub_indices(beta: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in beta {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// An integer vector `(a_0, …, a_n)` and the flags of the coprimality
/// condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalPoint {
    pub a: Vec<i64>,
    pub height: u64,
    /// `gcd(a_0, p) = 1`.
    pub a0_coprime_p: bool,
    /// `gcd(a_0, …, a_n) = 1`.
    pub primitive: bool,
    /// `(a_1/a_0, …, a_d/a_0) ∈ Z_p^d`.
    pub in_domain: bool,
}

impl RationalPoint {
    pub fn new(a: Vec<i64>, p: u64, d: usize) -> Result<Self> {
        let height = a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        if height == 0 || a.len() < d + 1 {
            return Err(Error::Invalid("a rational point needs a non-zero vector (a_0, …, a_n)".into()));
        }
        let g = a.iter().fold(0u64, |g, x| g.gcd(&x.unsigned_abs()));
        let v0 = valuation_int(&BigInt::from(a[0]), p);
        let in_domain = match v0 {
            None => false,
            Some(v0) => a[1..=d]
                .iter()
                .all(|&x| valuation_int(&BigInt::from(x), p).is_none_or(|v| v >= v0)),
        };
        Ok(RationalPoint {
            height,
            a0_coprime_p: v0 == Some(0),
            primitive: g == 1,
            in_domain,
            a,
        })
    }

    /// Meets the coprimality condition.
    pub fn admissible(&self) -> bool {
        self.a0_coprime_p && self.primitive && self.in_domain
    }

    /// `a_i / a_0` for `i = 1..=n`.
    pub fn ratios(&self) -> Vec<BigRational> {
        let a0 = BigInt::from(self.a[0]);
        self.a[1..]
            .iter()
            .map(|&x| BigRational::new(BigInt::from(x), a0.clone()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct DirichletInstance {
    map: DQEMap,
    point: Vec<PAdicInt>,
    tau: Vec<BigRational>,
    v: Vec<BigRational>,
    height: u64,
    lambda: u32,
}

impl DirichletInstance {
    /// `tau` are the dependent exponents (one per `f_j`), `v` the
    /// independent ones (one per coordinate of `x`).
    pub fn new(
        map: DQEMap,
        point: Vec<PAdicInt>,
        tau: Vec<BigRational>,
        v: Vec<BigRational>,
        height: u64,
    ) -> Result<Self> {
        let (d, m) = (map.d(), map.m());
        if point.len() != d || v.len() != d || tau.len() != m {
            return Err(Error::ShapeMismatch(format!(
                "need {d} base coordinates, {d} exponents v and {m} exponents τ"
            )));
        }
        if let Some(x) = point.iter().find(|x| x.prime() != map.prime()) {
            return Err(Error::PrimeMismatch {
                left: map.prime(),
                right: x.prime(),
            });
        }
        let one = BigRational::one();
        let tau_sum: BigRational = tau.iter().cloned().sum();
        let v_sum: BigRational = v.iter().cloned().sum();
        let mut failed = Vec::new();
        if tau_sum >= BigRational::from_integer((m + 1).into()) {
            failed.push(format!("Σ τ_j < m + 1 (Σ τ_j = {tau_sum})"));
        }
        if tau.iter().any(|t| *t <= one) {
            failed.push("τ_j > 1".to_string());
        }
        let target = BigRational::from_integer((d + m + 1).into()) - &tau_sum;
        if v_sum != target {
            failed.push(format!("Σ v_i = n + 1 − Σ τ_j (Σ v_i = {v_sum}, want {target})"));
        }
        if v.iter().any(|x| *x <= one) {
            failed.push("v_i > 1".to_string());
        }
        if height == 0 {
            failed.push("H >= 1".to_string());
        }
        if !failed.is_empty() {
            return Err(Error::Hypothesis(failed.join("; ")));
        }
        let lambda = map.lambda_at(&point)?;
        Ok(DirichletInstance {
            map,
            point,
            tau,
            v,
            height,
            lambda,
        })
    }

    pub fn with_height(&self, height: u64) -> Result<Self> {
        if height == 0 {
            return Err(Error::Hypothesis("H >= 1".into()));
        }
        Ok(DirichletInstance {
            height,
            ..self.clone()
        })
    }

    pub fn map(&self) -> &DQEMap {
        &self.map
    }

    pub fn point(&self) -> &[PAdicInt] {
        &self.point
    }

    pub fn height(&self) -> u64 {
        self.height
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    fn precision(&self) -> u32 {
        self.point.iter().map(PAdicInt::precision).min().unwrap_or(0)
    }

    /// `(n + mλ)/d`, the shift of the first block.
    fn shift(&self) -> BigRational {
        let (d, m) = (self.map.d() as i64, self.map.m() as i64);
        BigRational::new(
            BigInt::from(d + m + m * self.lambda as i64),
            BigInt::from(d),
        )
    }

    fn sigma(&self) -> Vec<BigRational> {
        let mut s = vec![self.shift(); self.map.d()];
        s.extend(vec![BigRational::from_integer(-BigInt::from(self.lambda)); self.map.m()]);
        s
    }

    fn lemma_tau(&self) -> Vec<BigRational> {
        self.v.iter().chain(&self.tau).cloned().collect()
    }
}

#[derive(Clone, Debug)]
pub struct H0Entry {
    pub case: &'static str,
    pub value: PowerProduct,
}

#[derive(Clone, Debug)]
pub struct H0Report {
    pub entries: Vec<H0Entry>,
    pub h0: PowerProduct,
    /// The entry attaining the maximum.
    pub binding: &'static str,
    /// Smallest integer `H > H_0`.
    pub min_height: u64,
}

/// The height threshold `H_0` of the Dirichlet system: the maximum of the
/// five case bounds, with the last replaced by the height at which every
/// bucket exponent of the linearised Minkowski system is non-negative.
/// With `ε = 1` the third case reads `p^{(n+mλ)/(d(v_min − 1))}`.
pub fn dirichlet_h0(inst: &DirichletInstance) -> Result<H0Report> {
    let p = inst.map.prime();
    let one = BigRational::one();
    let (d, n) = (inst.map.d() as i64, inst.map.n() as i64);
    let lambda = inst.lambda as i64;
    let c = p_power(p, inst.map.c_exponent());
    let v_min = inst.v.iter().min().cloned().expect("d >= 1");
    let tau_max = inst.tau.iter().max().cloned().expect("m >= 1");
    let gap = &v_min - &one;

    let alpha1_den = &v_min * BigRational::from_integer(2.into()) - &tau_max;
    let alpha1 = if c.is_one() {
        PowerProduct::one()
    } else if alpha1_den.is_positive() {
        PowerProduct::one().times(c.clone(), BigRational::from_integer(2.into()) / alpha1_den)
    } else {
        return Err(Error::Hypothesis(format!(
            "2 v_min > τ_max is needed when C > 1 (v_min = {v_min}, τ_max = {tau_max})"
        )));
    };
    let alpha2 = PowerProduct::one().times(c, &one / &gap);
    let beta = PowerProduct::one().times_int(p, inst.shift() / &gap);
    let gamma_num = BigRational::from_integer((n + n * lambda).into());
    let gamma = PowerProduct::one().times_int(p, gamma_num / (BigRational::from_integer(d.into()) * &gap));
    let feasibility = inst
        .sigma()
        .iter()
        .zip(inst.lemma_tau())
        .map(|(s, t)| PowerProduct::one().times_int(p, (s - &one) / t))
        .fold(PowerProduct::one(), |acc, x| if acc.lt(&x) { x } else { acc });

    let entries = vec![
        H0Entry { case: "alpha1", value: alpha1 },
        H0Entry { case: "alpha2", value: alpha2 },
        H0Entry { case: "beta", value: beta },
        H0Entry { case: "gamma", value: gamma },
        H0Entry { case: "delta", value: feasibility },
    ];
    let mut top = 0;
    for (i, e) in entries.iter().enumerate() {
        if entries[top].value.lt(&e.value) {
            top = i;
        }
    }
    let h0 = entries[top].value.clone();
    let mut min_height = (h0.to_f64().floor() as u64).saturating_sub(1).max(1);
    while !h0.lt(&PowerProduct::rational(BigRational::from_integer(min_height.into()))) {
        min_height += 1;
    }
    Ok(H0Report {
        binding: entries[top].case,
        entries,
        h0,
        min_height,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Minkowski,
    Exhaustive,
}

#[derive(Clone, Debug, Serialize)]
pub struct DirichletSolution {
    pub point: RationalPoint,
    pub k: u32,
    pub height: u64,
    pub method: SolveMethod,
    /// `H > H_0`.
    pub above_threshold: bool,
    pub minkowski: Option<MinkowskiSolution>,
    /// Why the Minkowski pipeline was not used, if it was not.
    pub fallback_reason: Option<String>,
}

/// Smallest integer `w` with `p^{-w} < bound`.
fn min_valuation(p: u64, bound: &PowerProduct) -> i64 {
    let below = |w: i64| PowerProduct::rational(p_power(p, -w)).lt(bound);
    let guess = -bound.to_f64().ln() / (p as f64).ln();
    let mut w = if guess.is_finite() { guess.floor() as i64 } else { 0 };
    while !below(w) {
        w += 1;
    }
    while below(w - 1) {
        w -= 1;
    }
    w
}

/// The three blocks of the system for a candidate `a` with shift `k`.
fn system_bounds(inst: &DirichletInstance, k: u32) -> (Vec<PowerProduct>, Vec<PowerProduct>) {
    let p = inst.map.prime();
    let h = BigRational::from_integer(inst.height.into());
    let first = inst
        .v
        .iter()
        .map(|v| {
            PowerProduct::one()
                .times_int(p, inst.shift() + BigRational::from_integer(k.into()))
                .times(h.clone(), -v.clone())
        })
        .collect();
    let second = inst
        .tau
        .iter()
        .map(|t| {
            PowerProduct::one()
                .times_int(p, t * BigRational::from_integer(k.into()))
                .times(h.clone(), -t.clone())
        })
        .collect();
    (first, second)
}

/// Exact re-evaluation of all three blocks and the coprimality condition.
pub fn verify_solution(inst: &DirichletInstance, a: &[i64], k: u32) -> Result<bool> {
    let (p, d, m) = (inst.map.prime(), inst.map.d(), inst.map.m());
    if a.len() != d + m + 1 {
        return Err(Error::ShapeMismatch("solution has the wrong length".into()));
    }
    let point = RationalPoint::new(a.to_vec(), p, d)?;
    if !point.admissible() {
        return Ok(false);
    }
    let scale = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if (point.height as u128).saturating_mul(scale) > inst.height as u128 {
        return Ok(false);
    }
    let (first, second) = system_bounds(inst, k);
    let a0 = BigInt::from(a[0]);
    let precision = inst.precision();
    for i in 0..d {
        // a_0 is a unit, so |x_i − a_i/a_0| = |a_0 x_i − a_i|.
        let diff = inst.point[i].mul_int(&a0).add_int(&-BigInt::from(a[i + 1]));
        let norm = match diff.valuation() {
            Some(v) => p_power(p, -(v as i64)),
            None => {
                let floor = p_power(p, -(precision as i64));
                if PowerProduct::rational(floor.clone()).lt(&first[i]) {
                    continue;
                }
                return Err(Error::BelowPrecision(format!(
                    "|x_{} − a_{}/a_0|_p ≤ {floor} cannot be compared with {}",
                    i + 1,
                    i + 1,
                    first[i]
                )));
            }
        };
        if !PowerProduct::rational(norm).lt(&first[i]) {
            return Ok(false);
        }
    }
    let ratios = point.ratios();
    let values = inst.map.eval(&ratios[..d]);
    for j in 0..m {
        let err = &values[j] - &ratios[d + j];
        if err.is_zero() {
            continue;
        }
        let norm = p_power(p, -valuation(&err, p)?);
        if !PowerProduct::rational(norm).lt(&second[j]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solve the Dirichlet-style system at the instance's height.
///
/// The linearised system in `b = (b_0, …, b_n)`
///
/// ```text
/// |b_0 x_i − b_i|_p                                   ≤ p^{(n+mλ)/d} T^{-v_i}
/// |p^λ (b_0 f_j(x) − Σ ∂_i f_j(x)(b_0 x_i − b_i) − b_{d+j})|_p ≤ p^{-λ} T^{-τ_j}
/// ```
///
/// with `T = H + 1` goes to the Minkowski solver; dividing `b` by the
/// p-free part of its gcd and then by `p^k`, `k = ν_p(b_0)`, gives `a`.
/// If the bucket search is too large, or its output fails verification,
/// a congruence search over `a_0` takes over.
pub fn dirichlet_solve(inst: &DirichletInstance) -> Result<DirichletSolution> {
    let above_threshold = {
        let h0 = dirichlet_h0(inst)?;
        h0.h0
            .lt(&PowerProduct::rational(BigRational::from_integer(inst.height.into())))
    };
    let reason = match minkowski_attempt(inst) {
        Ok((point, k, sol)) => {
            return Ok(DirichletSolution {
                point,
                k,
                height: inst.height,
                method: SolveMethod::Minkowski,
                above_threshold,
                minkowski: Some(sol),
                fallback_reason: None,
            })
        }
        Err(e @ (Error::BudgetExceeded { .. }
        | Error::BelowThreshold(_)
        | Error::NoSolution(_)
        | Error::InsufficientPrecision { .. })) => e.to_string(),
        Err(e) => return Err(e),
    };
    let (point, k) = exhaustive_search(inst)?.ok_or_else(|| {
        Error::NoSolution(format!(
            "no (a_0, …, a_n) of height at most {} satisfies the system",
            inst.height
        ))
    })?;
    Ok(DirichletSolution {
        point,
        k,
        height: inst.height,
        method: SolveMethod::Exhaustive,
        above_threshold,
        minkowski: None,
        fallback_reason: Some(reason),
    })
}

/// The linear forms in `(b_0, …, b_n)`.
pub fn linearised_system(inst: &DirichletInstance) -> Result<LinearFormSystem> {
    let (p, d, m) = (inst.map.prime(), inst.map.d(), inst.map.m());
    let n = d + m;
    let k = inst.precision();
    let zero = PAdicInt::zero(p, k);
    let minus_one = PAdicInt::from_i64(p, k, -1);
    let p_lambda = BigInt::from(p).pow(inst.lambda);
    let mut rows = Vec::with_capacity(n);
    for i in 0..d {
        let mut row = vec![zero.clone(); n + 1];
        row[0] = inst.point[i].clone();
        row[i + 1] = minus_one.clone();
        rows.push(row);
    }
    let fx: Vec<PAdicInt> = inst
        .map
        .polys()
        .iter()
        .map(|f| f.eval_padic(&inst.point))
        .collect::<Result<_>>()?;
    for (j, fj) in fx.iter().enumerate() {
        let grads: Vec<PAdicInt> = (0..d)
            .map(|i| inst.map.partial(j, i).eval_padic(&inst.point))
            .collect::<Result<_>>()?;
        let mut constant = fj.clone();
        for (g, x) in grads.iter().zip(&inst.point) {
            constant = constant.sub(&g.mul(x)?)?;
        }
        let mut row = vec![zero.clone(); n + 1];
        row[0] = constant.mul_int(&p_lambda);
        for (i, g) in grads.iter().enumerate() {
            row[i + 1] = g.mul_int(&p_lambda);
        }
        row[d + j + 1] = minus_one.mul_int(&p_lambda);
        rows.push(row);
    }
    LinearFormSystem::new(p, rows, vec![inst.height; n + 1], inst.lemma_tau(), inst.sigma())
}

fn minkowski_attempt(inst: &DirichletInstance) -> Result<(RationalPoint, u32, MinkowskiSolution)> {
    let p = inst.map.prime();
    let system = linearised_system(inst)?;
    let sol = system.solve_with_budget(DIRICHLET_BUCKET_BUDGET)?;
    let fail = |why: &str| Error::NoSolution(format!("Minkowski output {:?}: {why}", sol.solution));
    if !sol.verified {
        return Err(fail("did not re-verify"));
    }
    let mut b: Vec<BigInt> = sol.solution.iter().map(|&x| BigInt::from(x)).collect();
    let g = b.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let g_p = valuation_int(&g, p).unwrap_or(0);
    let unit_part = g / BigInt::from(p).pow(g_p);
    for x in &mut b {
        *x = &*x / &unit_part;
    }
    let k = valuation_int(&b[0], p).ok_or_else(|| fail("b_0 = 0"))?;
    let pk = BigInt::from(p).pow(k);
    if b.iter().any(|x| !(x % &pk).is_zero()) {
        return Err(fail("p^k does not divide every b_i"));
    }
    let mut a: Vec<i64> = b
        .iter()
        .map(|x| (x / &pk).to_i64().expect("bounded by H"))
        .collect();
    if a[0] < 0 {
        a.iter_mut().for_each(|x| *x = -*x);
    }
    if !verify_solution(inst, &a, k)? {
        return Err(fail("normalised point fails the system"));
    }
    Ok((RationalPoint::new(a, p, inst.map.d())?, k, sol))
}

/// Integers in `[-bound, bound]` congruent to `r` modulo `modulus`.
fn class_members(r: &BigInt, modulus: &BigInt, bound: u64) -> Vec<i64> {
    let lo = -BigInt::from(bound);
    let first = &lo + (r - &lo).mod_floor(modulus);
    let mut out = Vec::new();
    let mut x = first;
    let hi = BigInt::from(bound);
    while x <= hi {
        out.push(x.to_i64().expect("within the bound"));
        x += modulus;
    }
    out
}

/// `a_0 · y mod p^w` for a p-integral rational `y`.
fn scaled_residue(y: &BigRational, a0: i64, p: u64, w: u32) -> Result<BigInt> {
    let modulus = BigInt::from(p).pow(w);
    let inv = crate::padic::mod_inverse(&y.denom().mod_floor(&modulus), &modulus).ok_or(
        Error::NotPAdicInteger {
            denom: y.denom().to_string(),
            p,
        },
    )?;
    Ok((y.numer() * inv * BigInt::from(a0)).mod_floor(&modulus))
}

fn cartesian(lists: &[Vec<i64>]) -> Vec<Vec<i64>> {
    lists.iter().fold(vec![vec![]], |acc, list| {
        acc.into_iter()
            .flat_map(|prefix| {
                list.iter().map(move |&x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect()
    })
}

/// Scan `k = 0, 1, …` and `a_0 ≤ p^{-k} H` coprime to `p`; for each, the
/// admissible `a_i` form congruence classes modulo the valuations the
/// system demands. Returns the first verified point.
pub fn exhaustive_search(inst: &DirichletInstance) -> Result<Option<(RationalPoint, u32)>> {
    let (p, d, m) = (inst.map.prime(), inst.map.d(), inst.map.m());
    let precision = inst.precision();
    let mut k = 0u32;
    let mut pk = 1u64;
    while pk <= inst.height {
        let hk = inst.height / pk;
        let (first, second) = system_bounds(inst, k);
        let w1: Vec<u32> = first.iter().map(|b| min_valuation(p, b).max(0) as u32).collect();
        let w2: Vec<u32> = second.iter().map(|b| min_valuation(p, b).max(0) as u32).collect();
        if let Some(&needed) = w1.iter().max().filter(|&&w| w > precision) {
            return Err(Error::InsufficientPrecision {
                needed,
                have: precision,
            });
        }
        for a0 in (1..=hk as i64).filter(|a| a.unsigned_abs() % p != 0) {
            let a0_big = BigInt::from(a0);
            let lists: Vec<Vec<i64>> = (0..d)
                .map(|i| {
                    let r = BigInt::from(inst.point[i].mul_int(&a0_big).residue_mod(w1[i]));
                    class_members(&r, &BigInt::from(p).pow(w1[i]), hk)
                })
                .collect();
            for head in cartesian(&lists) {
                let ratios: Vec<BigRational> = head
                    .iter()
                    .map(|&x| BigRational::new(BigInt::from(x), a0_big.clone()))
                    .collect();
                let values = inst.map.eval(&ratios);
                let tails: Vec<Vec<i64>> = (0..m)
                    .map(|j| {
                        let r = scaled_residue(&values[j], a0, p, w2[j])?;
                        Ok(class_members(&r, &BigInt::from(p).pow(w2[j]), hk))
                    })
                    .collect::<Result<_>>()?;
                for tail in cartesian(&tails) {
                    let mut a = vec![a0];
                    a.extend(&head);
                    a.extend(tail);
                    if verify_solution(inst, &a, k)? {
                        return Ok(Some((RationalPoint::new(a, p, d)?, k)));
                    }
                }
            }
        }
        k += 1;
        pk = match pk.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    Ok(None)
}

/// Smallest `e ≥ 0` with `p^e > h^τ`, for `h = 0..=hmax` (entry 0 unused).
fn norm_thresholds(p: u64, tau: &BigRational, hmax: u64) -> Vec<u32> {
    let mut out = vec![0u32; hmax as usize + 1];
    let mut e = 0u32;
    for h in 1..=hmax {
        let target = PowerProduct::one().times(BigRational::from_integer(h.into()), tau.clone());
        // h^τ is nondecreasing in h, so e never moves backwards.
        while !target.lt(&PowerProduct::rational(p_power(p, e as i64))) {
            e += 1;
        }
        out[h as usize] = e;
    }
    out
}

/// The resonant points: all `(a_0, …, a_n)` with `a_0 > 0`, `h ≤ hmax`,
/// the coprimality condition, and `|f_j(a/a_0) − a_{d+j}/a_0|_p < h^{-τ_j}`.
///
/// Points come in `±` pairs with the same ratios; only `a_0 > 0` is kept.
pub fn enumerate_s_tau(map: &DQEMap, tau: &[BigRational], hmax: u64) -> Result<Vec<RationalPoint>> {
    enumerate_s_tau_with_budget(map, tau, hmax, ENUMERATION_BUDGET)
}

pub fn enumerate_s_tau_with_budget(
    map: &DQEMap,
    tau: &[BigRational],
    hmax: u64,
    budget: u128,
) -> Result<Vec<RationalPoint>> {
    let (p, d, m) = (map.prime(), map.d(), map.m());
    if tau.len() != m {
        return Err(Error::ShapeMismatch(format!("need {m} exponents τ, got {}", tau.len())));
    }
    if tau.iter().any(|t| !t.is_positive()) {
        return Err(Error::Hypothesis("τ_j > 0".into()));
    }
    let work = (hmax as u128).saturating_mul((2 * hmax as u128 + 1).saturating_pow(d as u32));
    if work > budget {
        return Err(Error::BudgetExceeded {
            needed: work,
            budget,
        });
    }
    let thresholds: Vec<Vec<u32>> = tau.iter().map(|t| norm_thresholds(p, t, hmax)).collect();
    let boxes = vec![(-(hmax as i64)..=hmax as i64).collect::<Vec<_>>(); d];
    let heads = cartesian(&boxes);
    let shards: Vec<Vec<RationalPoint>> = (1..=hmax as i64)
        .into_par_iter()
        .filter(|a0| a0.unsigned_abs() % p != 0)
        .map(|a0| -> Result<Vec<RationalPoint>> {
            let mut found = Vec::new();
            let a0_big = BigInt::from(a0);
            for head in &heads {
                let h_head = head.iter().map(|x| x.unsigned_abs()).fold(a0 as u64, u64::max);
                let ratios: Vec<BigRational> = head
                    .iter()
                    .map(|&x| BigRational::new(BigInt::from(x), a0_big.clone()))
                    .collect();
                let values = map.eval(&ratios);
                let mut lists = Vec::with_capacity(m);
                for j in 0..m {
                    // A necessary condition: h ≥ h_head, so e(h) ≥ e(h_head).
                    let w = thresholds[j][h_head as usize];
                    let r = scaled_residue(&values[j], a0, p, w)?;
                    lists.push(class_members(&r, &BigInt::from(p).pow(w), hmax));
                }
                for tail in cartesian(&lists) {
                    let h = tail.iter().map(|x| x.unsigned_abs()).fold(h_head, u64::max);
                    let ok = (0..m).all(|j| {
                        let err = &values[j] * BigRational::from_integer(a0_big.clone())
                            - BigRational::from_integer(tail[j].into());
                        err.is_zero()
                            || valuation(&err, p).expect("non-zero") >= thresholds[j][h as usize] as i64
                    });
                    if !ok {
                        continue;
                    }
                    let mut a = vec![a0];
                    a.extend(head);
                    a.extend(&tail);
                    let point = RationalPoint::new(a, p, d)?;
                    if point.admissible() {
                        found.push(point);
                    }
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(shards.into_iter().flatten().collect())
}

/// Counts of points with height in `[2^k, 2^{k+1})`, as `(2^k, count)`.
pub fn dyadic_counts(points: &[RationalPoint]) -> Vec<(u64, usize)> {
    let mut counts: Vec<(u64, usize)> = Vec::new();
    for pt in points {
        let lo = 1u64 << (63 - pt.height.leading_zeros());
        match counts.iter_mut().find(|(l, _)| *l == lo) {
            Some(c) => c.1 += 1,
            None => counts.push((lo, 1)),
        }
    }
    counts.sort();
    counts
}

/// Smallest `t ≥ 0` with `p^{-t} < δ h^{-τ}`.
fn rectangle_exponent(p: u64, delta: &BigRational, h: u64, tau: &BigRational) -> u32 {
    let bound = PowerProduct::rational(delta.clone())
        .times(BigRational::from_integer(h.into()), -tau.clone());
    min_valuation(p, &bound).max(0) as u32
}

/// The rectangles `B_a(τ;δ) = Π_{i ≤ d} {|x_i − a_i/a_0|_p < δ h^{-τ_i}}`
/// of a resonant point.
pub fn rectangle(p: u64, d: usize, point: &RationalPoint, tau: &[BigRational], delta: &BigRational) -> BallSpec {
    let ratios = point.ratios();
    let centre = ratios[..d].to_vec();
    let radii = tau[..d]
        .iter()
        .map(|t| rectangle_exponent(p, delta, point.height, t))
        .collect();
    BallSpec::new(centre, radii)
}

/// Union of the rectangles `B_a(τ;δ)` over the resonant points of height at
/// most `hmax`, as a clopen subset of `Z_p^d` at the given depth.
///
/// Needs `0 < δ ≤ 1` and `min_{i ≤ d} τ_i ≥ max_j τ_{d+j}`. Polynomial maps
/// with p-integral coefficients are 1-Lipschitz, so the equality case
/// needs nothing beyond `δ ≤ 1`.
pub fn cover_preimage(
    map: &DQEMap,
    tau: &[BigRational],
    delta: &BigRational,
    hmax: u64,
    depth: u32,
) -> Result<ClopenSet> {
    let (p, d) = (map.prime(), map.d());
    if tau.len() != map.n() {
        return Err(Error::ShapeMismatch(format!(
            "need n = {} weights, got {}",
            map.n(),
            tau.len()
        )));
    }
    if !delta.is_positive() || *delta > BigRational::one() {
        return Err(Error::Hypothesis(format!("0 < δ ≤ 1 (δ = {delta})")));
    }
    let head_min = tau[..d].iter().min().expect("d >= 1");
    let tail_max = tau[d..].iter().max().expect("m >= 1");
    if head_min < tail_max {
        return Err(Error::Hypothesis(format!(
            "min_(i ≤ d) τ_i ≥ max_j τ_(d+j) ({head_min} < {tail_max})"
        )));
    }
    let points = enumerate_s_tau(map, &tau[d..], hmax)?;
    let rects: Vec<BallSpec> = points
        .iter()
        .map(|pt| rectangle(p, d, pt, tau, delta))
        .collect();
    if let Some(needed) = rects
        .iter()
        .flat_map(|r| r.radius_exponents.iter().copied())
        .max()
        .filter(|&t| t > depth)
    {
        return Err(Error::InsufficientDepth { needed, depth });
    }
    let chunk = rects.len().div_ceil(rayon::current_num_threads().max(1)).max(1);
    rects
        .par_chunks(chunk)
        .map(|c| ClopenSet::from_rectangles(p, d, depth, c))
        .try_reduce(|| ClopenSet::empty(p, d, depth), |a, b| a.union(&b))
}

/// Largest rectangle exponent the cover would need, to size the depth.
pub fn cover_depth(map: &DQEMap, tau: &[BigRational], delta: &BigRational, hmax: u64) -> u32 {
    let p = map.prime();
    tau[..map.d()]
        .iter()
        .map(|t| rectangle_exponent(p, delta, hmax, t))
        .max()
        .unwrap_or(0)
}
