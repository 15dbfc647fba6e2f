//! Adversarial empirical risk, exact empirical Rademacher complexity, and the
//! closed-form generalization / sample-complexity bounds.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corruption::{corrupt_at, corrupted_from_dual, zero_one_loss, TabularRelation};
use crate::corruption::CorruptedLabel;
use crate::error::{check_dim, Error, Result};
use crate::exact::Rational;
use crate::geometry::ConstraintSet;
use crate::hypotheses::{Halfspace, IndexedDataset, Label, LabeledDataset};

/// Default cap on `n` for exhaustive `2ⁿ` Rademacher enumeration.
pub const RADEMACHER_CAP: usize = 16;

/// `(1/n) Σ_i 1(κ_B(h)(x_i) ≠ c_i)`, exactly.
pub fn adversarial_empirical_risk(h: &Halfspace, body: &ConstraintSet, data: &LabeledDataset) -> Result<Rational> {
    Ok(Rational::new(BigInt::from(adversarial_loss_count(h, body, data)?), BigInt::from(data.len())))
}

/// Number of examples on which the adversary wins.
pub fn adversarial_loss_count(h: &Halfspace, body: &ConstraintSet, data: &LabeledDataset) -> Result<usize> {
    Ok(loss_vector(h, body, data)?.iter().filter(|&&b| b == 1).count())
}

/// Per-example adversarial 0-1 losses of a halfspace.
pub fn loss_vector(h: &Halfspace, body: &ConstraintSet, data: &LabeledDataset) -> Result<Vec<u8>> {
    check_dim(body.dim(), h.dim())?;
    check_dim(body.dim(), data.dim())?;
    let dual = body.dual_seminorm(&h.a)?;
    data.examples().map(|(x, c)| Ok(zero_one_loss(corrupted_from_dual(h, &dual, x)?, c))).collect()
}

/// Adversarial empirical risk of a tabulated hypothesis under a finite relation.
pub fn adversarial_empirical_risk_tabular(
    row: &[CorruptedLabel],
    relation: &TabularRelation,
    data: &IndexedDataset,
) -> Result<Rational> {
    let mut losses = 0usize;
    for (x, c) in data.examples() {
        losses += usize::from(zero_one_loss(corrupt_at(row, relation, x)?, c));
    }
    Ok(Rational::new(BigInt::from(losses), BigInt::from(data.len())))
}

/// The margin loss `ℓ′(c, s)`: zero iff `c·s > 1`.
pub fn margin_loss(c: Label, score: &Rational) -> u8 {
    u8::from(c.as_rational() * score <= Rational::one())
}

/// A deduplicated set of `{0,1}ⁿ` loss vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LossVectorSet {
    n: usize,
    vectors: BTreeSet<Vec<u8>>,
}

impl LossVectorSet {
    pub fn new(n: usize, vectors: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        let vectors: BTreeSet<Vec<u8>> = vectors.into_iter().collect();
        for v in &vectors {
            if v.len() != n {
                return Err(Error::InvalidInput(format!("loss vector of length {} in a set with n = {n}", v.len())));
            }
            if v.iter().any(|&b| b > 1) {
                return Err(Error::InvalidInput("loss vectors must be 0/1".into()));
            }
        }
        Ok(LossVectorSet { n, vectors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &BTreeSet<Vec<u8>> {
        &self.vectors
    }

    fn masks(&self) -> Vec<u64> {
        self.vectors
            .iter()
            .map(|v| v.iter().enumerate().fold(0u64, |m, (i, &b)| m | (u64::from(b) << i)))
            .collect()
    }
}

/// `R(T) = (1/(n 2ⁿ)) Σ_{s ∈ {±1}ⁿ} max_{t∈T} sᵀt`, by full enumeration.
pub fn rademacher_complexity(set: &LossVectorSet) -> Result<Rational> {
    rademacher_complexity_capped(set, RADEMACHER_CAP)
}

pub fn rademacher_complexity_capped(set: &LossVectorSet, cap: usize) -> Result<Rational> {
    let n = set.n;
    if set.is_empty() {
        return Err(Error::Precondition("Rademacher complexity needs a nonempty set".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("Rademacher complexity needs n >= 1".into()));
    }
    if n > cap || n > 62 {
        return Err(Error::Capacity {
            n,
            cap,
            hint: "use the sampling estimate (rademacher_estimate) instead".into(),
        });
    }
    let masks = set.masks();
    let full: u64 = (1u64 << n) - 1;
    let total: i64 = (0..1u64 << n)
        .into_par_iter()
        .map(|s| sup_correlation(&masks, s, full))
        .sum();
    let denom = BigInt::from(n) << n;
    Ok(Rational::new(BigInt::from(total), denom))
}

/// `max_t sᵀt` where bit `i` of `s` set means `s_i = +1`.
fn sup_correlation(masks: &[u64], s: u64, full: u64) -> i64 {
    masks
        .iter()
        .map(|&t| i64::from((t & s).count_ones()) - i64::from((t & !s & full).count_ones()))
        .max()
        .expect("nonempty set")
}

/// A Monte Carlo estimate, tagged as such, for sets too large to enumerate.
#[derive(Clone, Debug, Serialize)]
pub struct RademacherEstimate {
    pub kind: &'static str,
    pub value: f64,
    pub samples: usize,
    pub seed: u64,
}

pub fn rademacher_estimate(set: &LossVectorSet, samples: usize, seed: u64) -> Result<RademacherEstimate> {
    if set.is_empty() || samples == 0 {
        return Err(Error::Precondition("need a nonempty set and at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0i64;
    for _ in 0..samples {
        let signs: Vec<i64> = (0..set.n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        total += set
            .vectors
            .iter()
            .map(|t| t.iter().zip(&signs).map(|(&b, &s)| i64::from(b) * s).sum::<i64>())
            .max()
            .expect("nonempty set");
    }
    Ok(RademacherEstimate {
        kind: "monte_carlo_estimate",
        value: total as f64 / (samples as f64 * set.n as f64),
        samples,
        seed,
    })
}

fn check_unit_interval(name: &str, v: &Rational) -> Result<()> {
    if *v <= Rational::zero() || *v >= Rational::one() {
        return Err(Error::Precondition(format!("{name} must lie strictly between 0 and 1, got {v}")));
    }
    Ok(())
}

/// `2 R + sqrt(32 ln(4/δ) / n)`.
pub fn generalization_bound(rad: &Rational, n: usize, delta: &Rational) -> Result<f64> {
    check_unit_interval("delta", delta)?;
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let rad = rad.to_f64().unwrap_or(f64::NAN);
    let delta = delta.to_f64().unwrap_or(f64::NAN);
    Ok(2.0 * rad + (32.0 * (4.0 / delta).ln() / n as f64).sqrt())
}

/// `ceil(C (d ln(d/ε) + ln(1/δ)) / ε²)`.
pub fn sample_complexity_bound(d: usize, eps: &Rational, delta: &Rational, c: &Rational) -> Result<u64> {
    check_unit_interval("eps", eps)?;
    check_unit_interval("delta", delta)?;
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    if *c <= Rational::zero() {
        return Err(Error::Precondition("the constant C must be positive".into()));
    }
    let eps = eps.to_f64().unwrap_or(f64::NAN);
    let delta = delta.to_f64().unwrap_or(f64::NAN);
    let c = c.to_f64().unwrap_or(f64::NAN);
    let d = d as f64;
    let value = c * (d * (d / eps).ln() + (1.0 / delta).ln()) / (eps * eps);
    Ok(value.ceil() as u64)
}

/// Massart's bound `sqrt(2 ln|T| / n)` on `R(T)` for `T ⊆ {0,1}ⁿ`.
pub fn massart_bound(set_size: usize, n: usize) -> f64 {
    (2.0 * (set_size as f64).ln() / n as f64).sqrt()
}

/// `min(P̂(+1), P̂(−1))`: the risk of the better constant classifier.
pub fn minority_rate(labels: &[Label]) -> Rational {
    let pos = labels.iter().filter(|&&l| l == Label::Pos).count();
    let neg = labels.len() - pos;
    Rational::new(BigInt::from(pos.min(neg)), BigInt::from(labels.len()))
}

pub fn risk_from_count(losses: usize, n: usize) -> Rational {
    Rational::new(BigInt::from(losses), BigInt::from(n))
}
