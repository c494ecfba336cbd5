//! Dimension formulas: weighted Jarník–Besicovitch, Rynne's real formula,
//! the manifold lower bounds, the Wang–Wu rectangle exponent, the
//! water-filling exponent constructions, and a box-counting estimator.
//!
//! Everything except [`limit_exponents`] and [`boxdim_estimate`] is generic
//! over [`Scalar`]; use [`crate::Rational`] for exact values.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::approx::ApproxTuple;
use crate::error::{Error, Result};
use crate::psi::Psi;
use crate::scalar::{min_of, sum_of, Scalar};

/// One named hypothesis and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub hypothesis: String,
    pub holds: bool,
}

fn check(hypothesis: &str, holds: bool) -> Check {
    Check {
        hypothesis: hypothesis.to_string(),
        holds,
    }
}

fn require(checks: &[Check]) -> Result<()> {
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.hypothesis.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Hypothesis(failed.join("; ")))
    }
}

fn int<T: Scalar>(v: usize) -> T {
    T::from_usize_lossless(v)
}

/// The hypotheses shared by the weighted formulas.
pub fn weighted_checks<T: Scalar>(tau: &[T]) -> Vec<Check> {
    let n = tau.len();
    vec![
        check("n >= 1", n >= 1),
        check("τ_i > 1", tau.iter().all(|t| *t > T::one())),
        check("Σ τ_i > n+1", sum_of(tau) > int(n + 1)),
    ]
}

/// `(n + 1 + Σ_{τ_j < τ_i} (τ_i − τ_j)) / τ_i`.
fn jb_candidate<T: Scalar>(tau: &[T], i: usize) -> T {
    let excess = tau
        .iter()
        .filter(|t| **t < tau[i])
        .fold(T::zero(), |acc, t| acc + tau[i].clone() - t.clone());
    (int::<T>(tau.len() + 1) + excess) / tau[i].clone()
}

fn min_over<T: Scalar>(values: impl Iterator<Item = T>) -> Option<T> {
    values.reduce(min_of)
}

/// Hausdorff dimension of the weighted simultaneously τ-approximable set in
/// `Z_p^n`: `min_i (n + 1 + Σ_{τ_j < τ_i} (τ_i − τ_j)) / τ_i`.
pub fn jb_dimension<T: Scalar>(tau: &[T]) -> Result<T> {
    require(&weighted_checks(tau))?;
    Ok(min_over((0..tau.len()).map(|i| jb_candidate(tau, i))).expect("n >= 1"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RynneValue<T> {
    pub value: T,
    /// The input was not in descending order and was sorted first.
    pub sorted: bool,
}

/// Rynne's formula for the real weighted set:
/// `min_k (n + 1 + Σ_{i ≥ k} (τ_k − τ_i)) / (τ_k + 1)` with `τ` descending.
pub fn rynne_dimension<T: Scalar>(tau: &[T]) -> Result<RynneValue<T>> {
    require(&[
        check("n >= 1", !tau.is_empty()),
        check("τ_i > 0", tau.iter().all(|t| t.is_positive())),
        check("Σ τ_i >= 1", sum_of(tau) >= T::one()),
    ])?;
    let mut t = tau.to_vec();
    let sorted = t.windows(2).any(|w| w[0] < w[1]);
    t.sort_by(|a, b| b.partial_cmp(a).expect("weights are comparable"));
    let n = t.len();
    let value = min_over((0..n).map(|k| {
        let excess = t[k..]
            .iter()
            .fold(T::zero(), |acc, ti| acc + t[k].clone() - ti.clone());
        (int::<T>(n + 1) + excess) / (t[k].clone() + T::one())
    }))
    .expect("n >= 1");
    Ok(RynneValue { value, sorted })
}

#[derive(Clone, Debug, PartialEq)]
pub enum LimitExponent {
    Exact(BigRational),
    /// Tables have no limit; the slope between the probe ends is reported.
    Undetermined { estimate: f64 },
}

/// `v_i = lim −log ψ_i(q) / log q` for each component.
pub fn limit_exponents(psi: &ApproxTuple, probe: (u64, u64)) -> Vec<LimitExponent> {
    psi.comps
        .iter()
        .map(|c| match c {
            Psi::Monomial { e, .. } => LimitExponent::Exact(e.clone()),
            Psi::Table(v) => {
                let end = v.len() as u64;
                let (q1, q2) = (probe.0.clamp(1, end), probe.1.clamp(1, end));
                let estimate = if q1 == q2 {
                    f64::NAN
                } else {
                    -(c.approx(q2).ln() - c.approx(q1).ln()) / ((q2 as f64).ln() - (q1 as f64).ln())
                };
                LimitExponent::Undetermined { estimate }
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WWVariant {
    /// Subtract `Σ_{K_2} t_j`, as in the rectangle application.
    K2Sum,
    /// Subtract `Σ_{K_3} t_j`, as in the displayed general statement.
    K3Sum,
}

/// The Wang–Wu exponent data with `δ_j = 1` and `k = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WWInstance<T> {
    pub a: Vec<T>,
    pub t: Vec<T>,
}

impl<T: Scalar> WWInstance<T> {
    pub fn new(a: Vec<T>, t: Vec<T>) -> Result<Self> {
        if a.is_empty() || a.len() != t.len() {
            return Err(Error::ShapeMismatch("a and t need the same positive length".into()));
        }
        require(&[
            check("a_i > 0", a.iter().all(|x| x.is_positive())),
            check("t_i >= 0", t.iter().all(|x| !x.is_negative())),
        ])?;
        Ok(WWInstance { a, t })
    }

    /// `{a_i} ∪ {a_i + t_i}`, sorted and deduplicated.
    pub fn candidates(&self) -> Vec<T> {
        let mut out: Vec<T> = self
            .a
            .iter()
            .cloned()
            .chain(self.a.iter().zip(&self.t).map(|(a, t)| a.clone() + t.clone()))
            .collect();
        out.sort_by(|x, y| x.partial_cmp(y).expect("comparable"));
        out.dedup();
        out
    }

    /// Which of `K_1`, `K_2`, `K_3` each index falls in at level `A`.
    pub fn partition(&self, level: &T) -> Vec<u8> {
        self.a
            .iter()
            .zip(&self.t)
            .map(|(a, t)| {
                if a >= level {
                    1
                } else if a.clone() + t.clone() <= *level {
                    2
                } else {
                    3
                }
            })
            .collect()
    }

    /// `#K_1 + #K_2 + (Σ_{K_3} a_j − Σ_T t_j) / A`.
    pub fn value_at(&self, level: &T, variant: WWVariant) -> T {
        let part = self.partition(level);
        let mut whole = 0usize;
        let mut num = T::zero();
        for (j, &k) in part.iter().enumerate() {
            match k {
                1 => whole += 1,
                2 => {
                    whole += 1;
                    if variant == WWVariant::K2Sum {
                        num = num - self.t[j].clone();
                    }
                }
                _ => {
                    num = num + self.a[j].clone();
                    if variant == WWVariant::K3Sum {
                        num = num - self.t[j].clone();
                    }
                }
            }
        }
        int::<T>(whole) + num / level.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WWValue<T> {
    pub value: T,
    pub argmin: T,
    /// `1`, `2` or `3` for `K_1`, `K_2`, `K_3`, per index.
    pub partition: Vec<u8>,
}

/// Minimum of the candidate values over `A ∈ {a_i} ∪ {a_i + t_i}`; ties go
/// to the smallest `A`.
pub fn ww_exponent<T: Scalar>(inst: &WWInstance<T>, variant: WWVariant) -> WWValue<T> {
    let mut best: Option<WWValue<T>> = None;
    for level in inst.candidates() {
        let value = inst.value_at(&level, variant);
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(WWValue {
                partition: inst.partition(&level),
                value,
                argmin: level,
            });
        }
    }
    best.expect("at least one candidate")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Waterfill<T> {
    pub values: Vec<T>,
    /// The level `c` with `Σ min(τ_i, c) = target`.
    pub level: T,
}

/// `x_i = min(τ_i, c)` with `Σ x_i = target`; needs `0 < target ≤ Σ τ_i`.
pub fn waterfill<T: Scalar>(tau: &[T], target: &T) -> Result<Waterfill<T>> {
    if tau.is_empty() {
        return Err(Error::ShapeMismatch("need at least one weight".into()));
    }
    if !target.is_positive() || *target > sum_of(tau) {
        return Err(Error::Hypothesis(format!(
            "0 < target <= Σ τ_i (target = {target})"
        )));
    }
    let mut sorted = tau.to_vec();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("comparable"));
    let n = sorted.len();
    let mut fixed = T::zero();
    let mut level = None;
    for k in 0..n {
        let c = (target.clone() - fixed.clone()) / int::<T>(n - k);
        if c <= sorted[k] {
            level = Some(c);
            break;
        }
        fixed = fixed + sorted[k].clone();
    }
    let level = level.expect("target <= Σ τ_i leaves a level");
    let values = tau.iter().map(|t| min_of(t.clone(), level.clone())).collect();
    Ok(Waterfill { values, level })
}

/// The exponents `α` of the covering argument: water-filling `τ` to `n + 1`.
pub fn waterfill_alpha<T: Scalar>(tau: &[T]) -> Result<Waterfill<T>> {
    waterfill_alpha_to(tau, &int(tau.len() + 1))
}

pub fn waterfill_alpha_to<T: Scalar>(tau: &[T], target: &T) -> Result<Waterfill<T>> {
    require(&weighted_checks(tau))?;
    let w = waterfill(tau, target)?;
    // With Σ τ > target ≥ n the level exceeds 1, so each α_i > 1.
    if *target >= int(tau.len()) {
        assert!(w.values.iter().all(|a| *a > T::one()));
    }
    Ok(w)
}

fn manifold_checks<T: Scalar>(tau: &[T], d: usize, m: usize) -> Vec<Check> {
    let n = d + m;
    let shape = tau.len() == n && d >= 1;
    let (head, tail) = if shape { tau.split_at(d) } else { (tau, &[][..]) };
    let head_min = min_over(head.iter().cloned());
    let tail_max = tail.iter().cloned().reduce(|a, b| if b > a { b } else { a });
    vec![
        check("τ has n = d + m entries", shape),
        check("τ_i > 1", tau.iter().all(|t| *t > T::one())),
        check("Σ τ_(d+j) < m+1", sum_of(tail) < int(m + 1)),
        check("Σ τ_i > n+1", sum_of(tau) > int(n + 1)),
        check(
            "min_(i<=d) τ_i >= max_j τ_(d+j)",
            match (head_min, tail_max) {
                (Some(h), Some(t)) => h >= t,
                _ => true,
            },
        ),
    ]
}

/// The independent-coordinate exponents `v` for the manifold bound:
/// water-filling the first `d` weights to `n + 1 − Σ_j τ_{d+j}`.
pub fn waterfill_v<T: Scalar>(tau: &[T], d: usize, m: usize) -> Result<Waterfill<T>> {
    require(&manifold_checks(tau, d, m))?;
    let target = int::<T>(d + m + 1) - sum_of(&tau[d..]);
    let w = waterfill(&tau[..d], &target)?;
    if w.values.iter().any(|v| *v <= T::one()) {
        return Err(Error::Hypothesis(
            "v_i > 1: hypotheses do not support construction".into(),
        ));
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ManifoldBound {
    /// Equal weights: `(n+1)/τ − m` for `1 + 1/n < τ < 1 + 1/m`.
    Uniform,
    /// Curves (`d = 1`): `(n + 1 − Σ_{j ≥ 2} τ_j) / τ_1`.
    Curve,
    /// General weights: `min_{i ≤ d} (n + 1 + Σ_{τ_j < τ_i} (τ_i − τ_j))/τ_i − m`.
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T> {
    pub value: T,
    pub checks: Vec<Check>,
}

/// Lower bound for the dimension of the points of `Z_p^d` whose graph
/// point is τ-approximable. For [`ManifoldBound::Uniform`] `tau` may be a
/// single weight or `n` equal weights.
pub fn manifold_lower_bound<T: Scalar>(
    tau: &[T],
    d: usize,
    m: usize,
    which: ManifoldBound,
) -> Result<BoundReport<T>> {
    let n = d + m;
    let (value, checks) = match which {
        ManifoldBound::Uniform => {
            let uniform = !tau.is_empty() && tau.iter().all(|t| *t == tau[0]);
            let shape = tau.len() == 1 || tau.len() == n;
            let checks = vec![
                check("one weight or n equal weights", uniform && shape),
                check("d >= 1", d >= 1),
                check("1 + 1/n < τ", uniform && tau[0] > T::one() + T::one() / int(n)),
                check(
                    "τ < 1 + 1/m",
                    uniform && (m == 0 || tau[0] < T::one() + T::one() / int(m)),
                ),
            ];
            require(&checks)?;
            (int::<T>(n + 1) / tau[0].clone() - int(m), checks)
        }
        ManifoldBound::Curve => {
            let shape = d == 1 && tau.len() == n && n >= 2;
            let tilde = if shape { sum_of(&tau[1..]) } else { T::zero() };
            let checks = vec![
                check("d = 1 and τ has n >= 2 entries", shape),
                check("Σ_(j>=2) τ_j < n", shape && tilde < int(n)),
                check(
                    "τ_1 >= max(τ_j, n+1 − Σ_(j>=2) τ_j)",
                    shape
                        && tau[1..].iter().all(|t| tau[0] >= *t)
                        && tau[0] >= int::<T>(n + 1) - tilde.clone(),
                ),
                check("τ_j > 1 for j >= 2", shape && tau[1..].iter().all(|t| *t > T::one())),
            ];
            require(&checks)?;
            ((int::<T>(n + 1) - tilde) / tau[0].clone(), checks)
        }
        ManifoldBound::General => {
            let checks = if m == 0 {
                let mut c = weighted_checks(tau);
                c.push(check("τ has n = d entries", tau.len() == d));
                c
            } else {
                manifold_checks(tau, d, m)
            };
            require(&checks)?;
            let v = min_over((0..d).map(|i| jb_candidate(tau, i) - int(m))).expect("d >= 1");
            (v, checks)
        }
    };
    Ok(BoundReport { value, checks })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoxDimFit {
    pub slope: f64,
    pub intercept: f64,
    pub levels: Vec<u32>,
    pub residuals: Vec<f64>,
}

/// Coarse levels dropped by [`boxdim_estimate`].
pub const COARSE_LEVELS_SKIPPED: usize = 2;

/// Least-squares slope of `log N_k` against `k log p`, after dropping the
/// two coarsest levels. A heuristic: no exactness is claimed.
pub fn boxdim_estimate(counts: &[(u32, BigUint)], p: u64) -> Result<BoxDimFit> {
    boxdim_fit(counts, p, COARSE_LEVELS_SKIPPED)
}

pub fn boxdim_fit(counts: &[(u32, BigUint)], p: u64, skip: usize) -> Result<BoxDimFit> {
    let mut pts: Vec<(u32, &BigUint)> = counts.iter().map(|(k, c)| (*k, c)).collect();
    pts.sort_by_key(|(k, _)| *k);
    let pts: Vec<_> = pts.into_iter().skip(skip).collect();
    if pts.len() < 3 {
        return Err(Error::Invalid(format!(
            "box-dimension fit needs at least 3 levels after dropping {skip}, got {}",
            pts.len()
        )));
    }
    if pts.iter().any(|(_, c)| c.bits() == 0) {
        return Err(Error::Invalid("box counts must be positive".into()));
    }
    let lp = (p as f64).ln();
    let xs: Vec<f64> = pts.iter().map(|(k, _)| *k as f64 * lp).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, c)| ln_big(c)).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    Ok(BoxDimFit {
        slope,
        intercept,
        levels: pts.iter().map(|(k, _)| *k).collect(),
        residuals,
    })
}

fn ln_big(x: &BigUint) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let shift = x.bits().saturating_sub(64);
            (x >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}
