//! Approximation layers `𝔄_{a0}(Ψ)`, `𝔄'_{a0}(Ψ)`, their partial limsup
//! unions, and the Khintchine / Duffin–Schaeffer volume series.
//!
//! The strict condition `|x_i − a_i/a0|_p < ψ_i(a0)` is the closed ball of
//! radius `p^{-t}` with `t` the step exponent, so every layer is an exact
//! [`ClopenSet`].

use std::cmp::Ordering;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::clopen::{rational_digits, ClopenSet, DigitRect};
use crate::error::{Error, Result};
use crate::exact::{p_power, pow_int, PowerProduct};
use crate::padic::{euler_phi, valuation_u64};
use crate::psi::Psi;

/// `Ψ = (ψ_1, …, ψ_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxTuple {
    pub comps: Vec<Psi>,
}

impl ApproxTuple {
    pub fn new(comps: Vec<Psi>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::Invalid("Ψ needs at least one component".into()));
        }
        Ok(ApproxTuple { comps })
    }

    /// `n` copies of the same function.
    pub fn symmetric(psi: Psi, n: usize) -> Result<Self> {
        Self::new(vec![psi; n])
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    /// Every `ψ_i(q) < 1/q` on the range; reports the first failure.
    pub fn check_proper(&self, range: RangeInclusive<u64>) -> Result<()> {
        for q in range {
            for (i, psi) in self.comps.iter().enumerate() {
                let bound = BigRational::new(BigInt::one(), BigInt::from(q));
                if psi.value(q)?.cmp_rational(&bound) != Ordering::Less {
                    return Err(Error::Hypothesis(format!(
                        "ψ_{} is not proper: ψ({q}) >= 1/{q}",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_proper(&self, range: RangeInclusive<u64>) -> bool {
        self.check_proper(range).is_ok()
    }

    pub fn step_exponents(&self, a0: u64, p: u64) -> Result<Vec<u32>> {
        self.comps
            .iter()
            .map(|psi| step_exponent(psi, a0, p).map(|s| s.t))
            .collect()
    }

    /// `Π_i ψ_i(q)`.
    pub fn volume(&self, q: u64) -> Result<PowerProduct> {
        self.comps
            .iter()
            .try_fold(PowerProduct::one(), |acc, psi| Ok(acc.mul(&psi.value(q)?)))
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        ApproxTuple {
            comps: perm.iter().map(|&i| self.comps[i].clone()).collect(),
        }
    }
}

/// Exponents of approximation `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub tau: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(tau: Vec<BigRational>) -> Result<Self> {
        if tau.is_empty() {
            return Err(Error::Invalid("τ must be non-empty".into()));
        }
        if let Some(i) = tau.iter().position(|t| !t.is_positive()) {
            return Err(Error::Hypothesis(format!("τ_{} > 0", i + 1)));
        }
        Ok(WeightVector { tau })
    }

    pub fn dim(&self) -> usize {
        self.tau.len()
    }

    pub fn sum(&self) -> BigRational {
        self.tau.iter().cloned().sum()
    }

    pub fn all_exceed_one(&self) -> bool {
        self.tau.iter().all(|t| *t > BigRational::one())
    }

    /// `Σ τ_i > n + 1`.
    pub fn sum_exceeds_n_plus_one(&self) -> bool {
        self.sum() > BigRational::from_integer(BigInt::from(self.dim() + 1))
    }

    pub fn as_psi(&self) -> ApproxTuple {
        ApproxTuple {
            comps: self.tau.iter().cloned().map(Psi::power_law).collect(),
        }
    }
}

/// `t` with `p^{-t} < ψ(a0) ≤ p^{-t+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub t: u32,
    /// `ψ(a0) > 1`: no such `t`, and 0 is returned.
    pub clamped: bool,
}

pub fn step_exponent(psi: &Psi, a0: u64, p: u64) -> Result<Step> {
    let value = psi.value(a0)?;
    let pt = |t: u32| PowerProduct::one().times_int(p, -BigRational::from_integer(t.into()));
    if !pt(0).lt(&value) {
        // ψ(a0) ≤ 1: search from the float estimate and fix up exactly.
        let guess = (-value.to_f64().ln() / (p as f64).ln()).floor();
        let mut t = if guess.is_finite() && guess > 0.0 {
            guess as u32
        } else {
            0
        };
        while !pt(t).lt(&value) {
            t += 1;
        }
        while t > 0 && pt(t - 1).lt(&value) {
            t -= 1;
        }
        return Ok(Step { t, clamped: false });
    }
    let one = PowerProduct::one();
    Ok(Step {
        t: 0,
        clamped: one.lt(&value),
    })
}

/// Numerators `a` with `|a| ≤ a0` such that `a/a0 ∈ Z_p`, restricted to
/// `gcd(a, a0) = 1` for reduced layers.
pub fn admissible_numerators(a0: u64, p: u64, reduced: bool) -> Vec<i64> {
    let a0i = a0 as i64;
    let v0 = valuation_u64(a0, p).unwrap_or(0);
    (-a0i..=a0i)
        .filter(|&a| {
            if reduced {
                a.unsigned_abs().gcd(&a0) == 1 && v0 == 0
            } else {
                a == 0 || valuation_u64(a.unsigned_abs(), p).unwrap_or(0) >= v0
            }
        })
        .collect()
}

/// The one-coordinate set `∪_a {x : |x − a/a0|_p < ψ(a0)}`.
pub fn coordinate_set(psi: &Psi, p: u64, a0: u64, reduced: bool, depth: u32) -> Result<ClopenSet> {
    let t = step_exponent(psi, a0, p)?.t;
    if t > depth {
        return Err(Error::InsufficientDepth { needed: t, depth });
    }
    let rects = admissible_numerators(a0, p, reduced)
        .into_iter()
        .map(|a| {
            let x = BigRational::new(a.into(), a0.into());
            Ok(DigitRect {
                digits: vec![rational_digits(&x, p, t)?],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ClopenSet::from_digit_rects(p, 1, depth, &rects)
}

/// Per-coordinate factors of a layer. The admissibility conditions act on
/// each `a_i` separately, so the layer is exactly their product.
pub fn layer_factors(
    p: u64,
    psi: &ApproxTuple,
    a0: u64,
    reduced: bool,
    depth: u32,
) -> Result<Vec<ClopenSet>> {
    if a0 == 0 {
        return Err(Error::Invalid("a0 must be positive".into()));
    }
    psi.comps
        .iter()
        .map(|c| coordinate_set(c, p, a0, reduced, depth))
        .collect()
}

/// `𝔄_{a0}(Ψ)` (or `𝔄'_{a0}(Ψ)` when `reduced`) in `Z_p^n`.
pub fn build_layer(
    p: u64,
    psi: &ApproxTuple,
    a0: u64,
    reduced: bool,
    depth: u32,
) -> Result<ClopenSet> {
    ClopenSet::product(&layer_factors(p, psi, a0, reduced, depth)?)
}

/// Union of the layers over `a0 ∈ range`, built in parallel. The result is
/// canonical, hence independent of the reduction order.
pub fn partial_limsup(
    p: u64,
    psi: &ApproxTuple,
    range: RangeInclusive<u64>,
    reduced: bool,
    depth: u32,
) -> Result<ClopenSet> {
    check_range(&range)?;
    let empty = ClopenSet::empty(p, psi.dim(), depth);
    let layers: Vec<u64> = range.collect();
    layers
        .par_iter()
        .map(|&a0| build_layer(p, psi, a0, reduced, depth))
        .try_reduce(|| empty.clone(), |a, b| a.union(&b))
}

/// Left-to-right reference version of [`partial_limsup`].
pub fn partial_limsup_serial(
    p: u64,
    psi: &ApproxTuple,
    range: RangeInclusive<u64>,
    reduced: bool,
    depth: u32,
) -> Result<ClopenSet> {
    check_range(&range)?;
    let mut acc = ClopenSet::empty(p, psi.dim(), depth);
    for a0 in range {
        if acc.is_full() {
            break;
        }
        acc = acc.union(&build_layer(p, psi, a0, reduced, depth)?)?;
    }
    Ok(acc)
}

fn check_range(range: &RangeInclusive<u64>) -> Result<()> {
    if range.is_empty() || *range.start() == 0 {
        return Err(Error::Invalid("range must be non-empty and start at 1 or later".into()));
    }
    Ok(())
}

/// A partial sum that is exact when every term is rational.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSum {
    pub exact: Option<BigRational>,
    pub approx: f64,
}

impl SeriesSum {
    fn zero() -> Self {
        SeriesSum {
            exact: Some(BigRational::zero()),
            approx: 0.0,
        }
    }

    fn add(&mut self, term: &PowerProduct) {
        self.approx += term.to_f64();
        self.exact = match (self.exact.take(), term.to_rational()) {
            (Some(acc), Some(t)) => Some(acc + t),
            _ => None,
        };
    }
}

/// `Σ_{q=1}^N q^n Π ψ_i(q)`.
pub fn khintchine_sum(psi: &ApproxTuple, n_terms: u64) -> Result<SeriesSum> {
    let n = psi.dim() as i64;
    let mut sum = SeriesSum::zero();
    for q in 1..=n_terms {
        sum.add(&psi.volume(q)?.times_int(q, BigRational::from_integer(n.into())));
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DuffinSchaeffer {
    pub sum: SeriesSum,
    pub khintchine: SeriesSum,
    /// Duffin–Schaeffer over Khintchine partial sums.
    pub ratio: SeriesSum,
}

/// `Σ_{q=1}^N φ(q)^n Π ψ_i(q)` and its ratio to the Khintchine sum.
pub fn duffin_schaeffer_sum(psi: &ApproxTuple, n_terms: u64) -> Result<DuffinSchaeffer> {
    let n = psi.dim() as u32;
    let mut sum = SeriesSum::zero();
    for q in 1..=n_terms {
        let phi = BigRational::from_integer(BigInt::from(euler_phi(q)).pow(n));
        sum.add(&psi.volume(q)?.mul(&PowerProduct::rational(phi)));
    }
    let khintchine = khintchine_sum(psi, n_terms)?;
    let ratio = SeriesSum {
        exact: match (&sum.exact, &khintchine.exact) {
            (Some(a), Some(b)) if !b.is_zero() => Some(a / b),
            _ => None,
        },
        approx: if khintchine.approx == 0.0 {
            f64::NAN
        } else {
            sum.approx / khintchine.approx
        },
    };
    Ok(DuffinSchaeffer {
        sum,
        khintchine,
        ratio,
    })
}

/// `φ(a0)^n Π p^{-t_i(a0)}`, the layer-measure reference value.
pub fn phi_reference(p: u64, t: &[u32], a0: u64) -> BigRational {
    let phi = BigRational::from_integer(BigInt::from(euler_phi(a0)));
    let total: i64 = t.iter().map(|&x| x as i64).sum();
    pow_int(&phi, t.len() as i64) * p_power(p, -total)
}

/// Exact measure report for two reduced layers.
#[derive(Clone, Debug, PartialEq)]
pub struct ClaimsReport {
    pub a0: u64,
    pub b0: u64,
    pub t_a0: Vec<u32>,
    pub t_b0: Vec<u32>,
    /// `μ(𝔄'_{a0})`.
    pub measure: BigRational,
    /// `φ(a0)^n Π p^{-t_i(a0)}`.
    pub reference: BigRational,
    pub equal: bool,
    /// Number of admissible numerators per coordinate.
    pub numerators: usize,
    /// `#numerators^n Π p^{-t_i(a0)}`: the measure when the rectangles are
    /// pairwise disjoint.
    pub disjoint_reference: BigRational,
    pub disjoint: bool,
    /// `μ(𝔄'_{a0} ∩ 𝔄'_{b0})`.
    pub intersection: BigRational,
    /// `a0^n b0^n Π ψ_i(a0) ψ_i(b0)`, approximately.
    pub volume: f64,
    pub ratio: f64,
}

pub fn measure_claims_check(
    p: u64,
    psi: &ApproxTuple,
    a0: u64,
    b0: u64,
    depth: u32,
) -> Result<ClaimsReport> {
    for q in [a0, b0] {
        if q == 0 || q % p == 0 {
            return Err(Error::Hypothesis(format!("gcd({q}, p) = 1 with {q} >= 1")));
        }
    }
    let n = psi.dim();
    let t_a0 = psi.step_exponents(a0, p)?;
    let t_b0 = psi.step_exponents(b0, p)?;
    let fa = layer_factors(p, psi, a0, true, depth)?;
    let layer_a = ClopenSet::product(&fa)?;
    let layer_b = build_layer(p, psi, b0, true, depth)?;
    let measure = layer_a.measure();
    let reference = phi_reference(p, &t_a0, a0);
    let numerators = admissible_numerators(a0, p, true).len();
    let total: i64 = t_a0.iter().map(|&x| x as i64).sum();
    let disjoint_reference =
        pow_int(&BigRational::from_integer(numerators.into()), n as i64) * p_power(p, -total);
    let intersection = layer_a.intersect(&layer_b)?.measure();
    let volume = intersection_volume(psi, a0, b0)?;
    let ratio = intersection.to_f64().unwrap_or(f64::NAN) / volume.to_f64();
    Ok(ClaimsReport {
        a0,
        b0,
        t_a0,
        t_b0,
        equal: measure == reference,
        disjoint: measure == disjoint_reference,
        measure,
        reference,
        numerators,
        disjoint_reference,
        intersection,
        volume: volume.to_f64(),
        ratio,
    })
}

/// `a0^n b0^n Π ψ_i(a0) ψ_i(b0)`.
pub fn intersection_volume(psi: &ApproxTuple, a0: u64, b0: u64) -> Result<PowerProduct> {
    let n = BigRational::from_integer(psi.dim().into());
    Ok(psi
        .volume(a0)?
        .mul(&psi.volume(b0)?)
        .times_int(a0, n.clone())
        .times_int(b0, n))
}

/// `μ(𝔄'_{a0} ∩ 𝔄'_{b0})` through the product structure: both layers are
/// products of one-coordinate sets, so the intersection is the product of
/// the coordinatewise intersections.
pub fn layer_intersection_measure(
    p: u64,
    psi: &ApproxTuple,
    a0: u64,
    b0: u64,
    reduced: bool,
    depth: u32,
) -> Result<BigRational> {
    let fa = layer_factors(p, psi, a0, reduced, depth)?;
    let fb = layer_factors(p, psi, b0, reduced, depth)?;
    fa.iter()
        .zip(&fb)
        .try_fold(BigRational::one(), |acc, (x, y)| Ok(acc * x.intersect(y)?.measure()))
}

/// Certified bounds on `Σ_{a0 > N, p ∤ a0} φ(a0)^n Π p^{-t_i(a0)}` for
/// power-law `Ψ` with `Σ e_i > n + 1`.
#[derive(Clone, Debug)]
pub struct TailBound {
    pub from: u64,
    pub to: u64,
    /// Exact partial sum over `(from, to]`: a lower bound for the tail.
    pub partial: BigRational,
    /// Upper bound for the terms beyond `to`:
    /// `Π c_i · to^{n+1-Σe} / (Σe − n − 1)`.
    pub remainder: PowerProduct,
}

impl TailBound {
    /// `Some(true)` if the tail is certainly below `eps`, `Some(false)` if
    /// certainly not, `None` if the truncation cannot decide.
    pub fn below(&self, eps: &BigRational) -> Option<bool> {
        if self.partial >= *eps {
            return Some(false);
        }
        let slack = eps - &self.partial;
        if self.remainder.cmp_rational(&slack) == Ordering::Less {
            return Some(true);
        }
        None
    }

    pub fn upper_f64(&self) -> f64 {
        self.partial.to_f64().unwrap_or(f64::NAN) + self.remainder.to_f64()
    }
}

pub fn tail_layer_bound(p: u64, psi: &ApproxTuple, from: u64, to: u64) -> Result<TailBound> {
    let n = psi.dim();
    let mut consts = BigRational::one();
    let mut e_sum = BigRational::zero();
    for c in &psi.comps {
        match c {
            Psi::Monomial { c, e } => {
                consts *= c;
                e_sum += e;
            }
            Psi::Table(_) => {
                return Err(Error::Invalid("tail bounds need monomial ψ".into()));
            }
        }
    }
    let excess = &e_sum - BigRational::from_integer((n + 1).into());
    if !excess.is_positive() {
        return Err(Error::Hypothesis("Σ e_i > n + 1 (convergent series)".into()));
    }
    let mut partial = BigRational::zero();
    for a0 in (from + 1)..=to {
        if a0 % p == 0 {
            continue;
        }
        let t = psi.step_exponents(a0, p)?;
        partial += phi_reference(p, &t, a0);
    }
    // φ(q)^n Π p^{-t_i} ≤ q^n Π ψ_i(q) = Π c_i · q^{n − Σe}, which is
    // decreasing, so the sum over q > to is at most the integral from `to`.
    let remainder = PowerProduct::rational(consts / &excess).times_int(to.max(1), -excess);
    Ok(TailBound {
        from,
        to,
        partial,
        remainder,
    })
}

/// One CSV row of the layer table.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerRow {
    pub a0: u64,
    pub measure: BigRational,
    pub reference: BigRational,
    pub union_measure: BigRational,
    pub khintchine: SeriesSum,
    pub duffin_schaeffer: SeriesSum,
}

/// Per-`a0` layer measures, the running union and both running series.
pub fn layer_table(
    p: u64,
    psi: &ApproxTuple,
    range: RangeInclusive<u64>,
    reduced: bool,
    depth: u32,
) -> Result<Vec<LayerRow>> {
    check_range(&range)?;
    let n = psi.dim() as u32;
    let mut union = ClopenSet::empty(p, psi.dim(), depth);
    let mut k_sum = SeriesSum::zero();
    let mut ds_sum = SeriesSum::zero();
    // the series start at q = 1 whatever the range
    for q in 1..*range.start() {
        let vol = psi.volume(q)?;
        k_sum.add(&vol.clone().times_int(q, BigRational::from_integer(n.into())));
        ds_sum.add(&vol.mul(&PowerProduct::rational(BigRational::from_integer(
            BigInt::from(euler_phi(q)).pow(n),
        ))));
    }
    let mut rows = Vec::new();
    for a0 in range {
        let layer = build_layer(p, psi, a0, reduced, depth)?;
        let t = psi.step_exponents(a0, p)?;
        union = union.union(&layer)?;
        let vol = psi.volume(a0)?;
        k_sum.add(&vol.clone().times_int(a0, BigRational::from_integer(n.into())));
        ds_sum.add(&vol.mul(&PowerProduct::rational(BigRational::from_integer(
            BigInt::from(euler_phi(a0)).pow(n),
        ))));
        rows.push(LayerRow {
            a0,
            measure: layer.measure(),
            reference: if reduced && a0 % p == 0 {
                BigRational::zero()
            } else {
                phi_reference(p, &t, a0)
            },
            union_measure: union.measure(),
            khintchine: k_sum.clone(),
            duffin_schaeffer: ds_sum.clone(),
        });
    }
    Ok(rows)
}
