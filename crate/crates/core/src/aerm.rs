//! Adversarial empirical risk minimization at desk scale.
//!
//! For halfspaces the minimizer is found by searching robust-correct subsets
//! `S` in decreasing size. An example in `S` must be classified correctly on
//! its whole neighborhood; examples outside `S` are unconstrained. Feasibility
//! is monotone (a subset of a feasible `S` is feasible), so every infeasible
//! `S` is shrunk to a minimal infeasible core and all later candidates that
//! contain a known core are skipped without solving an LP.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::corruption::{corrupt_at, zero_one_loss, TabularRelation};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::geometry::ConstraintSet;
use crate::hypotheses::{FiniteClass, Halfspace, IndexedDataset, LabeledDataset};
use crate::risk::adversarial_empirical_risk;
use crate::shattering::{combinations, HalfspaceOracle, LossPattern};

/// Default cap on `n` for the halfspace subset search.
pub const DEFAULT_MAX_N: usize = 18;

/// Candidates tested concurrently before the first feasible one is looked for.
const BATCH: usize = 64;

#[derive(Clone, Debug)]
pub struct AermConfig {
    pub max_n: usize,
}

impl Default for AermConfig {
    fn default() -> Self {
        AermConfig { max_n: DEFAULT_MAX_N }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub subsets_tested: u64,
    pub lps_solved: u64,
    pub cores_found: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErmHypothesis {
    Halfspace(Halfspace),
    Finite { id: usize, name: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErmResult {
    pub hypothesis: ErmHypothesis,
    pub risk: Rational,
    pub pattern: LossPattern,
    pub stats: SearchStats,
}

impl ErmResult {
    pub fn halfspace(&self) -> Option<&Halfspace> {
        match &self.hypothesis {
            ErmHypothesis::Halfspace(h) => Some(h),
            ErmHypothesis::Finite { .. } => None,
        }
    }

    pub fn losses(&self) -> usize {
        self.pattern.weight()
    }
}

/// Exhaustive scan of a finite class; ties go to the lowest hypothesis id.
pub fn aerm_finite(class: &FiniteClass, relation: &TabularRelation, data: &IndexedDataset) -> Result<ErmResult> {
    if class.num_hypotheses() == 0 {
        return Err(Error::InvalidInput("hypothesis class is empty".into()));
    }
    let mut best: Option<(usize, Vec<u8>)> = None;
    for h in 0..class.num_hypotheses() {
        let row = class.row(h);
        let bits = data
            .examples()
            .map(|(x, c)| Ok(zero_one_loss(corrupt_at(row, relation, x)?, c)))
            .collect::<Result<Vec<u8>>>()?;
        let weight = bits.iter().filter(|&&b| b == 1).count();
        if best.as_ref().is_none_or(|(_, b)| weight < b.iter().filter(|&&v| v == 1).count()) {
            best = Some((h, bits));
        }
    }
    let (id, bits) = best.expect("nonempty class");
    let pattern = LossPattern::new(bits)?;
    Ok(ErmResult {
        risk: Rational::new(BigInt::from(pattern.weight()), BigInt::from(data.len())),
        hypothesis: ErmHypothesis::Finite { id, name: class.names()[id].clone() },
        pattern,
        stats: SearchStats { subsets_tested: class.num_hypotheses() as u64, ..SearchStats::default() },
    })
}

/// Exact AERM over halfspaces under a polyhedral body.
pub fn aerm_halfspace(data: &LabeledDataset, body: &ConstraintSet, config: &AermConfig) -> Result<ErmResult> {
    let oracle = HalfspaceOracle::new(data, body)?;
    let n = data.len();
    let mut stats = SearchStats::default();

    // Realizable shortcut: this needs no subset search, so it is not capped.
    stats.subsets_tested += 1;
    stats.lps_solved += 1;
    if let Some(h) = oracle.robust_subset(&vec![true; n]) {
        return finish(&oracle, body, h, 0, stats);
    }
    if n > config.max_n || n > 63 {
        return Err(Error::Capacity {
            n,
            cap: config.max_n.min(63),
            hint: "subset search is exponential in n; raise the cap or subsample".into(),
        });
    }

    let mut cores: Vec<u64> = Vec::new();
    for size in (1..n).rev() {
        let mut candidates = combinations(n, size).map(|c| c.iter().fold(0u64, |m, &i| m | (1 << i)));
        loop {
            let batch: Vec<u64> = candidates.by_ref().filter(|&s| !cores.iter().any(|&c| is_subset(c, s))).take(BATCH).collect();
            if batch.is_empty() {
                break;
            }
            let outcomes: Vec<Option<Halfspace>> =
                batch.par_iter().map(|&s| oracle.robust_subset(&members(s, n))).collect();
            stats.subsets_tested += batch.len() as u64;
            stats.lps_solved += batch.len() as u64;
            if let Some(h) = outcomes.iter().flatten().next() {
                return finish(&oracle, body, h.clone(), n - size, stats);
            }
            // Shrink each infeasible candidate to a minimal infeasible core.
            let shrunk: Vec<(u64, u64)> = batch.par_iter().map(|&s| deletion_filter(&oracle, s, n)).collect();
            for (core, lps) in shrunk {
                stats.lps_solved += lps;
                if !cores.iter().any(|&c| is_subset(c, core)) {
                    cores.retain(|&c| core & c != core);
                    cores.push(core);
                    stats.cores_found += 1;
                }
            }
        }
    }
    // The empty subset is always feasible.
    let h = oracle.robust_subset(&vec![false; n]).expect("empty constraint set is feasible");
    finish(&oracle, body, h, n, stats)
}

fn members(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

fn is_subset(a: u64, b: u64) -> bool {
    a & b == a
}

/// Drops elements one at a time while the set stays infeasible.
fn deletion_filter(oracle: &HalfspaceOracle<'_>, mut set: u64, n: usize) -> (u64, u64) {
    let mut lps = 0;
    for i in 0..n {
        if set >> i & 1 == 0 {
            continue;
        }
        let without = set & !(1 << i);
        lps += 1;
        if oracle.robust_subset(&members(without, n)).is_none() {
            set = without;
        }
    }
    (set, lps)
}

fn finish(
    oracle: &HalfspaceOracle<'_>,
    body: &ConstraintSet,
    h: Halfspace,
    expected_losses: usize,
    stats: SearchStats,
) -> Result<ErmResult> {
    let data = oracle.data();
    let pattern = oracle.achieved_pattern(&h)?;
    assert_eq!(pattern.weight(), expected_losses, "witness loses on more examples than its robust subset allows");
    let risk = adversarial_empirical_risk(&h, body, data)?;
    assert_eq!(risk, Rational::new(BigInt::from(expected_losses), BigInt::from(data.len())));
    Ok(ErmResult { hypothesis: ErmHypothesis::Halfspace(h), risk, pattern, stats })
}

/// Standard 0-1 ERM over halfspaces: AERM with a point body.
pub fn erm_halfspace(data: &LabeledDataset, config: &AermConfig) -> Result<ErmResult> {
    aerm_halfspace(data, &ConstraintSet::identity(data.dim()), config)
}

/// Optimal empirical adversarial risk for each body, in order.
pub fn risk_sweep(data: &LabeledDataset, bodies: &[ConstraintSet], config: &AermConfig) -> Result<Vec<Rational>> {
    bodies.iter().map(|b| Ok(aerm_halfspace(data, b, config)?.risk)).collect()
}
