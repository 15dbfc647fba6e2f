//! Seeded learning-curve and budget-sweep experiments on synthetic data.
//!
//! These designs are original: they give evidence about learnability on
//! particular distributions and prove nothing about all distributions.
//! Every sampled coordinate is rounded to a multiple of `2^-20`, so all
//! downstream risks are exact rationals. The "best" hypothesis on the holdout
//! is approximated (by AERM on the holdout, or by the best of a candidate set
//! when that search is out of reach) and is labeled `best_holdout`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aerm::{aerm_halfspace, AermConfig};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, round_to_denominator, Rational, Vector};
use crate::geometry::ConstraintSet;
use crate::hypotheses::{Halfspace, Label, LabeledDataset};
use crate::io::{serialize_opt_rational, serialize_rational};
use crate::risk::adversarial_empirical_risk;

pub const SAMPLE_DENOMINATOR: i64 = 1 << 20;
pub const DEFAULT_HOLDOUT: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistributionSpec {
    /// Label `+1` with probability `p_pos`; the point is `N(mean_c, scale² I)`.
    TwoGaussianMixture { neg_mean: Vec<f64>, pos_mean: Vec<f64>, scale: f64, p_pos: f64 },
    /// Positives uniform on `[gap/2, gap/2 + width] × [-width, width]^{d-1}`,
    /// negatives on the mirror image in the first coordinate.
    UniformMargin { dim: usize, gap: f64, width: f64, p_pos: f64 },
    /// An explicit finite pmf over labeled points.
    Tabular { points: Vec<Vec<String>>, labels: Vec<i64>, probs: Vec<f64> },
}

impl DistributionSpec {
    pub fn dim(&self) -> usize {
        match self {
            DistributionSpec::TwoGaussianMixture { neg_mean, .. } => neg_mean.len(),
            DistributionSpec::UniformMargin { dim, .. } => *dim,
            DistributionSpec::Tabular { points, .. } => points.first().map_or(0, Vec::len),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
        let prob_ok = |p: f64| (0.0..=1.0).contains(&p);
        match self {
            DistributionSpec::TwoGaussianMixture { neg_mean, pos_mean, scale, p_pos } => {
                if neg_mean.is_empty() || neg_mean.len() != pos_mean.len() {
                    return bad("means must be nonempty and of equal length");
                }
                if !(*scale > 0.0) || !prob_ok(*p_pos) {
                    return bad("scale must be positive and p_pos in [0, 1]");
                }
            }
            DistributionSpec::UniformMargin { dim, gap, width, p_pos } => {
                if *dim == 0 || !(*gap > 0.0) || !(*width > 0.0) || !prob_ok(*p_pos) {
                    return bad("uniform-margin needs dim >= 1, gap > 0, width > 0, p_pos in [0, 1]");
                }
            }
            DistributionSpec::Tabular { points, labels, probs } => {
                if points.is_empty() || points.len() != labels.len() || points.len() != probs.len() {
                    return bad("tabular spec needs equally many points, labels and probabilities");
                }
                let d = points[0].len();
                if d == 0 || points.iter().any(|p| p.len() != d) {
                    return bad("tabular points must share a positive dimension");
                }
                for p in points {
                    for v in p {
                        parse_rational(v)?;
                    }
                }
                for &c in labels {
                    Label::from_sign(c)?;
                }
                if probs.iter().any(|&p| !(p >= 0.0)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                    return bad("probabilities must be nonnegative and sum to 1");
                }
            }
        }
        Ok(())
    }
}

/// `n` examples from the stream `stream` of the generator seeded with `seed`.
///
/// Examples are drawn one after another, so a smaller `n` on the same stream
/// yields a prefix of a larger draw.
pub fn sample_stream(spec: &DistributionSpec, n: usize, seed: u64, stream: u64) -> Result<LabeledDataset> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let round = |x: f64| round_to_denominator(x, SAMPLE_DENOMINATOR);
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    match spec {
        DistributionSpec::TwoGaussianMixture { neg_mean, pos_mean, scale, p_pos } => {
            for _ in 0..n {
                let pos = rng.random::<f64>() < *p_pos;
                let mean = if pos { pos_mean } else { neg_mean };
                let p: Vector = mean
                    .iter()
                    .map(|&m| round(Normal::new(m, *scale).expect("validated scale").sample(&mut rng)))
                    .collect();
                points.push(p);
                labels.push(if pos { Label::Pos } else { Label::Neg });
            }
        }
        DistributionSpec::UniformMargin { dim, gap, width, p_pos } => {
            for _ in 0..n {
                let pos = rng.random::<f64>() < *p_pos;
                let mut p = Vec::with_capacity(*dim);
                let first = gap / 2.0 + rng.random::<f64>() * width;
                p.push(round(if pos { first } else { -first }));
                for _ in 1..*dim {
                    p.push(round((2.0 * rng.random::<f64>() - 1.0) * width));
                }
                points.push(p);
                labels.push(if pos { Label::Pos } else { Label::Neg });
            }
        }
        DistributionSpec::Tabular { points: support, labels: support_labels, probs } => {
            let support: Vec<Vector> =
                support.iter().map(|p| p.iter().map(|v| parse_rational(v)).collect()).collect::<Result<_>>()?;
            let atoms = WeightedIndex::new(probs).map_err(|e| Error::InvalidInput(format!("tabular probabilities: {e}")))?;
            for _ in 0..n {
                let pick = atoms.sample(&mut rng);
                points.push(support[pick].clone());
                labels.push(Label::from_sign(support_labels[pick])?);
            }
        }
    }
    LabeledDataset::new(points, labels)
}

pub fn sample(spec: &DistributionSpec, n: usize, seed: u64) -> Result<LabeledDataset> {
    sample_stream(spec, n, seed, 0)
}

/// Small random rationals (numerators in `[-20, 20]`, denominators in
/// `[1, 4]`) with random labels, for counterexample searches.
pub fn random_rational_dataset(n: usize, d: usize, seed: u64, stream: u64) -> Result<LabeledDataset> {
    if n == 0 || d == 0 {
        return Err(Error::Precondition("n and d must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let points = (0..n)
        .map(|_| (0..d).map(|_| Rational::new(rng.random_range(-20..=20i64).into(), rng.random_range(1..=4i64).into())).collect())
        .collect();
    let labels = (0..n).map(|_| if rng.random::<bool>() { Label::Pos } else { Label::Neg }).collect();
    LabeledDataset::new(points, labels)
}

/// Stream of trial `t`; stream 0 is reserved for the holdout set.
fn trial_stream(trial: usize) -> u64 {
    trial as u64 + 1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub experiment: &'static str,
    pub seed: u64,
    pub trial: usize,
    pub n: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub eps: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub train_risk: Rational,
    #[serde(serialize_with = "serialize_opt_rational", skip_serializing_if = "Option::is_none")]
    pub holdout_risk: Option<Rational>,
    #[serde(serialize_with = "serialize_opt_rational", skip_serializing_if = "Option::is_none")]
    pub best_holdout_risk: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_holdout_method: Option<&'static str>,
    #[serde(serialize_with = "serialize_opt_rational", skip_serializing_if = "Option::is_none")]
    pub excess_risk: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<crate::io::HalfspaceJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub holdout: usize,
    pub aerm: AermConfig,
    /// Wall times make record streams differ between runs, so they are opt-in.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { holdout: DEFAULT_HOLDOUT, aerm: AermConfig::default(), timing: false }
    }
}

fn exact_risk(losses: usize, n: usize) -> Rational {
    Rational::new(BigInt::from(losses), BigInt::from(n))
}

fn canonical_order(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| (a.n, &a.eps, a.trial).cmp(&(b.n, &b.eps, b.trial)));
}

/// Learning curve: AERM on nested training sets, scored on a shared holdout.
pub fn run_sample_complexity(
    spec: &DistributionSpec,
    body: &ConstraintSet,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    options: &RunOptions,
) -> Result<Vec<ExperimentRecord>> {
    if spec.dim() != body.dim() {
        return Err(Error::DimensionMismatch { expected: body.dim(), found: spec.dim() });
    }
    if n_grid.is_empty() || trials == 0 {
        return Err(Error::Precondition("need a nonempty n grid and at least one trial".into()));
    }
    let holdout = sample_stream(spec, options.holdout, seed, 0)?;
    let eps = body_radius(body);
    let jobs: Vec<(usize, usize)> = n_grid.iter().flat_map(|&n| (0..trials).map(move |t| (n, t))).collect();
    let learned = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let start = Instant::now();
            let train = sample_stream(spec, n, seed, trial_stream(trial))?;
            let fit = aerm_halfspace(&train, body, &options.aerm)?;
            let h = fit.halfspace().expect("halfspace AERM").clone();
            let holdout_risk = adversarial_empirical_risk(&h, body, &holdout)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            Ok((n, trial, fit.risk, h, holdout_risk, elapsed))
        })
        .collect::<Result<Vec<_>>>()?;

    let candidates: Vec<Halfspace> = learned.iter().map(|l| l.3.clone()).collect();
    let (best, method) = best_on_holdout(&holdout, body, &candidates, &options.aerm)?;
    let mut records: Vec<ExperimentRecord> = learned
        .into_iter()
        .map(|(n, trial, train_risk, h, holdout_risk, elapsed)| {
            let excess = &holdout_risk - &best;
            assert!(!excess.is_negative(), "best_holdout must not exceed a candidate's risk");
            ExperimentRecord {
                experiment: "sample_complexity",
                seed,
                trial,
                n,
                eps: eps.clone(),
                train_risk,
                holdout_risk: Some(holdout_risk),
                best_holdout_risk: Some(best.clone()),
                best_holdout_method: Some(method),
                excess_risk: Some(excess),
                hypothesis: Some((&h).into()),
                wall_time_ms: options.timing.then_some(elapsed),
            }
        })
        .collect();
    canonical_order(&mut records);
    Ok(records)
}

/// Approximates `inf_h L(h)` on the holdout. AERM on the holdout is exact
/// when it is feasible; otherwise the minimum over `candidates` and the two
/// constant classifiers is used.
fn best_on_holdout(
    holdout: &LabeledDataset,
    body: &ConstraintSet,
    candidates: &[Halfspace],
    config: &AermConfig,
) -> Result<(Rational, &'static str)> {
    match aerm_halfspace(holdout, body, config) {
        Ok(r) => Ok((r.risk, "aerm_on_holdout")),
        Err(Error::Capacity { .. }) => {
            let d = holdout.dim();
            let constants = [Rational::from_integer(1.into()), Rational::from_integer((-1).into())]
                .map(|b| Halfspace::new(vec![Rational::zero(); d], b));
            let mut best: Option<Rational> = None;
            for h in candidates.iter().chain(constants.iter()) {
                let r = adversarial_empirical_risk(h, body, holdout)?;
                if best.as_ref().is_none_or(|b| r < *b) {
                    best = Some(r);
                }
            }
            Ok((best.expect("constants are always candidates"), "candidate_minimum"))
        }
        Err(e) => Err(e),
    }
}

fn body_radius(body: &ConstraintSet) -> Rational {
    match body.body() {
        crate::geometry::Body::Lp { radius, .. } => radius.clone(),
        crate::geometry::Body::Polytope { .. } => Rational::from_integer(1.into()),
        crate::geometry::Body::Identity => Rational::zero(),
    }
}

/// Budget sweep: one training set per trial, optimal empirical adversarial
/// risk for every radius in `eps_grid` (applied to `base_body`).
pub fn run_monotonicity(
    spec: &DistributionSpec,
    base_body: &ConstraintSet,
    eps_grid: &[Rational],
    n: usize,
    trials: usize,
    seed: u64,
    options: &RunOptions,
) -> Result<Vec<ExperimentRecord>> {
    if spec.dim() != base_body.dim() {
        return Err(Error::DimensionMismatch { expected: base_body.dim(), found: spec.dim() });
    }
    let mut grid = eps_grid.to_vec();
    grid.sort();
    grid.dedup();
    let bodies = grid.iter().map(|e| base_body.with_radius(e.clone())).collect::<Result<Vec<_>>>()?;
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let train = sample_stream(spec, n, seed, trial_stream(trial))?;
            let mut out = Vec::with_capacity(bodies.len());
            for (eps, body) in grid.iter().zip(&bodies) {
                let start = Instant::now();
                let fit = aerm_halfspace(&train, body, &options.aerm)?;
                let elapsed = start.elapsed().as_secs_f64() * 1e3;
                out.push(ExperimentRecord {
                    experiment: "monotonicity",
                    seed,
                    trial,
                    n,
                    eps: eps.clone(),
                    train_risk: fit.risk.clone(),
                    holdout_risk: None,
                    best_holdout_risk: None,
                    best_holdout_method: None,
                    excess_risk: None,
                    hypothesis: fit.halfspace().map(Into::into),
                    wall_time_ms: options.timing.then_some(elapsed),
                });
            }
            for w in out.windows(2) {
                assert!(w[0].train_risk <= w[1].train_risk, "optimal adversarial risk decreased as the budget grew");
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records: Vec<ExperimentRecord> = per_trial.into_iter().flatten().collect();
    canonical_order(&mut records);
    Ok(records)
}

/// One CSV row per `(n, ε)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub n: usize,
    pub eps: String,
    pub trials: usize,
    pub median_train_risk: f64,
    pub median_excess: Option<f64>,
    pub iqr_excess: Option<f64>,
}

/// Exact median (mean of the two middle values for even counts).
pub fn median(values: &[Rational]) -> Option<Rational> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort();
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m].clone() } else { (&v[m - 1] + &v[m]) / Rational::from_integer(2.into()) })
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(records: &[ExperimentRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(usize, Rational), Vec<&ExperimentRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n, r.eps.clone())).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((n, eps), rs)| {
            let train: Vec<Rational> = rs.iter().map(|r| r.train_risk.clone()).collect();
            let excess: Vec<Rational> = rs.iter().filter_map(|r| r.excess_risk.clone()).collect();
            let (median_excess, iqr_excess) = if excess.is_empty() {
                (None, None)
            } else {
                let mut f: Vec<f64> = excess.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
                f.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
                (median(&excess).and_then(|m| m.to_f64()), Some(quantile(&f, 0.75) - quantile(&f, 0.25)))
            };
            SummaryRow {
                n,
                eps: format_rational(&eps),
                trials: rs.len(),
                median_train_risk: median(&train).and_then(|m| m.to_f64()).unwrap_or(f64::NAN),
                median_excess,
                iqr_excess,
            }
        })
        .collect()
}

/// The exact median excess per `n`, in increasing `n`.
pub fn median_excess_curve(records: &[ExperimentRecord]) -> Vec<(usize, Rational)> {
    let mut groups: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    for r in records {
        if let Some(e) = &r.excess_risk {
            groups.entry(r.n).or_default().push(e.clone());
        }
    }
    groups.into_iter().map(|(n, v)| (n, median(&v).expect("nonempty group"))).collect()
}

pub fn exact_minority_risk(data: &LabeledDataset) -> Rational {
    let pos = data.labels().iter().filter(|&&l| l == Label::Pos).count();
    exact_risk(pos.min(data.len() - pos), data.len())
}
