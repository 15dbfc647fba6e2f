//! Loss patterns, shattering, and adversarial VC-dimension.
//!
//! For halfspaces under a polyhedral body the question "is this loss pattern
//! achievable?" is decided exactly. Normalizing `‖a‖_{B*} = 1` turns the
//! signed distance into the linear function `c(aᵀx − b)`, and the nonconvex
//! normalization splits into one linear piece per vertex `v*` of the body
//! (`aᵀv* = 1`, `aᵀv <= 1` for every vertex). Each piece is an exact LP whose
//! strict inequalities are handled with a slack variable `t` that is
//! maximized and then tested for `t > 0`. Normals with zero dual seminorm
//! (constant classifiers, and all normals when the body is a single point)
//! form one more homogeneous piece.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::corruption::{corrupt_at, corrupted_evaluate, zero_one_loss, CorruptedLabel, TabularRelation};
use crate::error::{check_dim, Error, Result};
use crate::exact::{dot, int, is_zero_vector, scale, sqrt_lower_bound, sub, ExactReal, Extended, Rational, Vector};
use crate::geometry::ConstraintSet;
use crate::hypotheses::{lattice_box, FiniteClass, Halfspace, IndexedDataset, Label, LabeledDataset, PointIndicatorClass};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome, Relation};

/// A `{0,1}ⁿ` loss pattern; bit `i` is 1 when the adversary wins on example `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LossPattern {
    bits: Vec<u8>,
}

impl LossPattern {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidInput("pattern bits must be 0 or 1".into()));
        }
        Ok(LossPattern { bits })
    }

    /// Bit `i` of `mask` becomes entry `i`.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        LossPattern { bits: (0..n).map(|i| ((mask >> i) & 1) as u8).collect() }
    }

    pub fn all_ones(n: usize) -> Self {
        LossPattern { bits: vec![1; n] }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }
}

impl fmt::Display for LossPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeasibilityStatus {
    Feasible,
    Infeasible,
}

/// Which linear piece produced a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessPiece {
    /// `‖a‖_{B*} = aᵀv* = 1` at this vertex.
    Vertex(Vector),
    /// `‖a‖_{B*} = 0`.
    ZeroDual,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub halfspace: Halfspace,
    pub piece: WitnessPiece,
}

/// Result of one linear piece: the optimal slack, or `None` if the piece is infeasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpRecord {
    pub piece: WitnessPiece,
    pub slack: Option<Rational>,
}

/// Coefficients `a` with `Σ a_i = 0`, `Σ |a_i| = 2`, `Σ a_i x_i ∈ V_B`, and
/// the loss pattern they rule out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixCertificate {
    pub a: Vector,
    pub j: Vec<usize>,
    pub k: Vec<usize>,
    pub alpha_j_pos: Rational,
    pub alpha_j_neg: Rational,
    pub alpha_k_pos: Rational,
    pub alpha_k_neg: Rational,
    /// Whether the nullspace vector was negated to satisfy the weight condition.
    pub flipped: bool,
    pub eta: LossPattern,
}

impl AppendixCertificate {
    /// Checks the algebraic conditions against the dataset and body.
    pub fn verify(&self, data: &LabeledDataset, body: &ConstraintSet) -> bool {
        let n = data.len();
        if self.a.len() != n || self.eta.len() != n {
            return false;
        }
        let sum: Rational = self.a.iter().sum();
        let abs_sum: Rational = self.a.iter().map(|v| v.abs()).sum();
        let mut combo = vec![Rational::zero(); data.dim()];
        for (ai, x) in self.a.iter().zip(data.points()) {
            for (c, xi) in combo.iter_mut().zip(x) {
                *c += ai * xi;
            }
        }
        let (_, lineality) = body.lineality();
        let weights_ok = &self.alpha_j_pos + &self.alpha_k_neg >= &self.alpha_j_neg + &self.alpha_k_pos;
        sum.is_zero() && abs_sum == int(2) && linalg::in_span(&lineality, &combo) && weights_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityCertificate {
    pub pattern: LossPattern,
    pub status: FeasibilityStatus,
    pub witness: Option<Witness>,
    pub appendix: Option<AppendixCertificate>,
    pub lp_records: Vec<LpRecord>,
}

impl FeasibilityCertificate {
    pub fn is_feasible(&self) -> bool {
        self.status == FeasibilityStatus::Feasible
    }
}

/// Exact loss-pattern oracle for halfspaces on a fixed dataset and polyhedral body.
pub struct HalfspaceOracle<'a> {
    data: &'a LabeledDataset,
    body: &'a ConstraintSet,
    vertices: Vec<Vector>,
    lineality: Vec<Vector>,
    /// Rows `(c_i x_i, −c_i)`: the margin of example `i` is `row · (a, b)`.
    margin_rows: Vec<Vector>,
}

/// Above this many constrained examples the relaxed LP is solved by row generation.
const ROW_GENERATION_THRESHOLD: usize = 40;
const ROW_GENERATION_BATCH: usize = 16;

impl<'a> HalfspaceOracle<'a> {
    pub fn new(data: &'a LabeledDataset, body: &'a ConstraintSet) -> Result<Self> {
        check_dim(body.dim(), data.dim())?;
        if !body.is_polyhedral() {
            return Err(Error::UnsupportedBody(
                "exact pattern feasibility needs a polyhedral body (ℓ1, ℓ∞, polytope, or a point)".into(),
            ));
        }
        let vertices = body.vertices()?;
        let (_, lineality) = body.lineality();
        let margin_rows = data
            .examples()
            .map(|(x, c)| {
                let cq = c.as_rational();
                let mut row: Vector = x.iter().map(|v| v * &cq).collect();
                row.push(-cq);
                row
            })
            .collect();
        Ok(HalfspaceOracle { data, body, vertices, lineality, margin_rows })
    }

    pub fn data(&self) -> &LabeledDataset {
        self.data
    }

    fn dim(&self) -> usize {
        self.data.dim()
    }

    /// Variables: `a` (d, free), `b` (free), `t` (free, <= 1).
    fn base_program(&self) -> LinearProgram {
        let mut lp = self.uncapped_program();
        let mut cap = vec![Rational::zero(); self.dim() + 2];
        cap[self.dim() + 1] = Rational::one();
        lp.constrain(cap, Relation::Le, Rational::one());
        lp
    }

    /// Same variables and objective (maximize `t`) without the cap on `t`.
    fn uncapped_program(&self) -> LinearProgram {
        let d = self.dim();
        let mut lp = LinearProgram::new(d + 2);
        for v in 0..d + 2 {
            lp.set_free(v);
        }
        let mut obj = vec![Rational::zero(); d + 2];
        obj[d + 1] = Rational::one();
        lp.maximize(obj);
        for l in &self.lineality {
            lp.constrain(self.normal_row(l), Relation::Eq, Rational::zero());
        }
        lp
    }

    fn normal_row(&self, v: &[Rational]) -> Vector {
        let mut row = v.to_vec();
        row.push(Rational::zero());
        row.push(Rational::zero());
        row
    }

    fn example_row(&self, i: usize, with_slack: bool) -> Vector {
        let mut row = self.margin_rows[i].clone();
        row.push(if with_slack { -Rational::one() } else { Rational::zero() });
        row
    }

    fn solve_piece(&self, pattern: &LossPattern, piece: &WitnessPiece) -> (LpRecord, Option<Halfspace>) {
        let mut lp = self.base_program();
        let threshold = match piece {
            WitnessPiece::Vertex(vstar) => {
                lp.constrain(self.normal_row(vstar), Relation::Eq, Rational::one());
                for v in &self.vertices {
                    if v != vstar {
                        lp.constrain(self.normal_row(v), Relation::Le, Rational::one());
                    }
                }
                Rational::one()
            }
            WitnessPiece::ZeroDual => {
                for v in self.vertices.iter().filter(|v| !is_zero_vector(v)) {
                    lp.constrain(self.normal_row(v), Relation::Eq, Rational::zero());
                }
                Rational::zero()
            }
        };
        for (i, &bit) in pattern.bits().iter().enumerate() {
            if bit == 0 {
                lp.constrain(self.example_row(i, true), Relation::Ge, threshold.clone());
            } else {
                lp.constrain(self.example_row(i, false), Relation::Le, threshold.clone());
            }
        }
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                let witness = value.is_positive().then(|| self.halfspace_from(&x));
                (LpRecord { piece: piece.clone(), slack: Some(value) }, witness)
            }
            LpOutcome::Infeasible => (LpRecord { piece: piece.clone(), slack: None }, None),
            LpOutcome::Unbounded => unreachable!("slack is bounded above by 1"),
        }
    }

    fn halfspace_from(&self, x: &[Rational]) -> Halfspace {
        let d = self.dim();
        Halfspace::new(x[..d].to_vec(), x[d].clone())
    }

    /// Decides whether some halfspace achieves exactly `pattern`.
    pub fn feasible(&self, pattern: &LossPattern) -> Result<FeasibilityCertificate> {
        if pattern.len() != self.data.len() {
            return Err(Error::InvalidInput(format!(
                "pattern has length {} but the dataset has {} examples",
                pattern.len(),
                self.data.len()
            )));
        }
        let mut records = Vec::new();
        let pieces = self
            .vertices
            .iter()
            .filter(|v| !is_zero_vector(v))
            .map(|v| WitnessPiece::Vertex(v.clone()))
            .chain(std::iter::once(WitnessPiece::ZeroDual));
        for piece in pieces {
            let (record, witness) = self.solve_piece(pattern, &piece);
            records.push(record);
            if let Some(h) = witness {
                let achieved = self.achieved_pattern(&h)?;
                assert_eq!(&achieved, pattern, "LP witness does not reproduce the requested pattern");
                return Ok(FeasibilityCertificate {
                    pattern: pattern.clone(),
                    status: FeasibilityStatus::Feasible,
                    witness: Some(Witness { halfspace: h, piece }),
                    appendix: None,
                    lp_records: records,
                });
            }
        }
        Ok(FeasibilityCertificate {
            pattern: pattern.clone(),
            status: FeasibilityStatus::Infeasible,
            witness: None,
            appendix: None,
            lp_records: records,
        })
    }

    pub fn is_feasible(&self, pattern: &LossPattern) -> Result<bool> {
        Ok(self.feasible(pattern)?.is_feasible())
    }

    /// The loss pattern a halfspace actually achieves, by corrupted evaluation.
    pub fn achieved_pattern(&self, h: &Halfspace) -> Result<LossPattern> {
        achieved_pattern(h, self.body, self.data)
    }

    /// A halfspace that is robustly correct on every example with
    /// `members[i] = true` (other examples unconstrained), if one exists.
    ///
    /// Robust correctness is monotone in the member set, so the normalization
    /// can be relaxed to `‖a‖_{B*} <= 1`, which is a single LP. The slack is
    /// maximized without a cap whenever that is bounded, so the witness is the
    /// max-robust-margin separator of the members.
    pub fn robust_subset(&self, members: &[bool]) -> Option<Halfspace> {
        let chosen: Vec<usize> = (0..members.len()).filter(|&i| members[i]).collect();
        if chosen.is_empty() {
            return Some(Halfspace::new(vec![Rational::zero(); self.dim()], Rational::zero()));
        }
        if chosen.len() <= ROW_GENERATION_THRESHOLD {
            return self.solve_relaxed(&chosen).map(|(h, _)| h);
        }
        // Row generation: start from a spread-out sample and add the rows that
        // fall below the current optimal margin until none is left.
        let step = chosen.len() / ROW_GENERATION_BATCH;
        let mut active: Vec<usize> = chosen.iter().step_by(step.max(1)).copied().collect();
        loop {
            let (h, t) = self.solve_relaxed(&active)?;
            let hb: Vector = h.a.iter().cloned().chain(std::iter::once(h.b.clone())).collect();
            let floor = Rational::one() + t;
            let mut violated: Vec<(Rational, usize)> = chosen
                .iter()
                .filter_map(|&i| {
                    let m = dot(&self.margin_rows[i], &hb);
                    (m < floor).then_some((m, i))
                })
                .collect();
            if violated.is_empty() {
                return Some(h);
            }
            violated.sort();
            active.extend(violated.into_iter().take(ROW_GENERATION_BATCH).map(|(_, i)| i));
        }
    }

    fn solve_relaxed(&self, chosen: &[usize]) -> Option<(Halfspace, Rational)> {
        let build = |capped: bool| {
            let mut lp = if capped { self.base_program() } else { self.uncapped_program() };
            for v in self.vertices.iter().filter(|v| !is_zero_vector(v)) {
                lp.constrain(self.normal_row(v), Relation::Le, Rational::one());
            }
            for &i in chosen {
                lp.constrain(self.example_row(i, true), Relation::Ge, Rational::one());
            }
            lp
        };
        let outcome = match build(false).solve() {
            LpOutcome::Unbounded => build(true).solve(),
            other => other,
        };
        match outcome {
            LpOutcome::Optimal { x, value } if value.is_positive() => Some((self.halfspace_from(&x), value)),
            _ => None,
        }
    }

    /// Every achievable pattern, by testing all `2ⁿ` candidates.
    pub fn pattern_set(&self) -> Result<BTreeSet<LossPattern>> {
        let n = self.data.len();
        if n > 20 {
            return Err(Error::Capacity { n, cap: 20, hint: "pattern enumeration is exponential in n".into() });
        }
        let found: Vec<Option<LossPattern>> = (0..1u64 << n)
            .into_par_iter()
            .map(|mask| {
                let p = LossPattern::from_mask(mask, n);
                self.is_feasible(&p).map(|ok| ok.then_some(p))
            })
            .collect::<Result<_>>()?;
        Ok(found.into_iter().flatten().collect())
    }

    /// True iff all `2ⁿ` patterns are achievable; stops at the first failure.
    pub fn shattered(&self) -> Result<bool> {
        let n = self.data.len();
        if n > 20 {
            return Err(Error::Capacity { n, cap: 20, hint: "pattern enumeration is exponential in n".into() });
        }
        let missing = (0..1u64 << n)
            .into_par_iter()
            .map(|mask| self.is_feasible(&LossPattern::from_mask(mask, n)).map(|ok| !ok))
            .collect::<Result<Vec<bool>>>()?;
        Ok(!missing.into_iter().any(|m| m))
    }
}

pub fn achieved_pattern(h: &Halfspace, body: &ConstraintSet, data: &LabeledDataset) -> Result<LossPattern> {
    let bits = data
        .examples()
        .map(|(x, c)| Ok(zero_one_loss(corrupted_evaluate(h, body, x)?, c)))
        .collect::<Result<Vec<u8>>>()?;
    LossPattern::new(bits)
}

/// Exact feasibility of one loss pattern for halfspaces.
pub fn halfspace_pattern_feasible(
    data: &LabeledDataset,
    pattern: &LossPattern,
    body: &ConstraintSet,
) -> Result<FeasibilityCertificate> {
    HalfspaceOracle::new(data, body)?.feasible(pattern)
}

/// All achievable halfspace loss patterns on `data`.
pub fn halfspace_loss_patterns(data: &LabeledDataset, body: &ConstraintSet) -> Result<BTreeSet<LossPattern>> {
    HalfspaceOracle::new(data, body)?.pattern_set()
}

pub fn halfspace_shatter_check(data: &LabeledDataset, body: &ConstraintSet) -> Result<bool> {
    HalfspaceOracle::new(data, body)?.shattered()
}

/// Loss patterns of a finite class under a tabular relation.
pub fn finite_loss_patterns(
    class: &FiniteClass,
    relation: &TabularRelation,
    data: &IndexedDataset,
) -> Result<BTreeSet<LossPattern>> {
    class
        .rows()
        .iter()
        .map(|row| {
            let bits = data
                .examples()
                .map(|(x, c)| Ok(zero_one_loss(corrupt_at(row, relation, x)?, c)))
                .collect::<Result<Vec<u8>>>()?;
            LossPattern::new(bits)
        })
        .collect()
}

pub fn finite_shatter_check(class: &FiniteClass, relation: &TabularRelation, data: &IndexedDataset) -> Result<bool> {
    Ok(finite_loss_patterns(class, relation, data)?.len() == 1usize << data.len())
}

/// Number of distinct raw labelings a finite class produces on the given points.
pub fn labeling_count(class: &FiniteClass, ids: &[usize]) -> usize {
    class
        .rows()
        .iter()
        .map(|row| ids.iter().map(|&i| row[i]).collect::<Vec<CorruptedLabel>>())
        .collect::<HashSet<_>>()
        .len()
}

/// `max` over the supplied candidate datasets of the number of loss patterns.
pub fn shattering_coefficient_halfspace(datasets: &[LabeledDataset], body: &ConstraintSet) -> Result<usize> {
    datasets.iter().map(|d| Ok(halfspace_loss_patterns(d, body)?.len())).try_fold(0, |m, c: Result<usize>| Ok(m.max(c?)))
}

pub fn shattering_coefficient_finite(
    class: &FiniteClass,
    relation: &TabularRelation,
    datasets: &[IndexedDataset],
) -> Result<usize> {
    datasets
        .iter()
        .map(|d| Ok(finite_loss_patterns(class, relation, d)?.len()))
        .try_fold(0, |m, c: Result<usize>| Ok(m.max(c?)))
}

/// `d + 1 − dim(V_B)`.
pub fn avc_theorem_value(d: usize, body: &ConstraintSet) -> Result<usize> {
    check_dim(d, body.dim())?;
    Ok(d + 1 - body.lineality().0)
}

/// The explicit shattered example list: `0` and a basis of `V_B^⊥`, scaled by
/// `max(3/ε, 3K)`. `ε` is the least pairwise dual-seminorm distance and `K`
/// bounds `‖Σ_{i∈T} x_i*‖_{B*}` over subsets `T` of the dual basis.
///
/// `3/ε` alone is too small for ℓ∞ bodies with two or more basis points: with
/// `0, 3e₁, 3e₂` the labels (−,+,+) cannot all be robustly correct. Any scale
/// above `2K` shatters every label vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShatteredWitness {
    pub points: Vec<Vector>,
    pub min_dual_distance: ExactReal,
    /// Rational upper bound on the largest dual-basis subset sum norm.
    pub dual_basis_bound: Rational,
    pub scale: Rational,
}

impl ShatteredWitness {
    pub fn dataset(&self, labels: Vec<Label>) -> Result<LabeledDataset> {
        LabeledDataset::new(self.points.clone(), labels)
    }
}

pub fn shattered_witness(body: &ConstraintSet, d: usize) -> Result<ShatteredWitness> {
    check_dim(d, body.dim())?;
    let mut base = vec![vec![Rational::zero(); d]];
    base.extend(body.complement_basis());
    let mut min: Option<ExactReal> = None;
    for i in 0..base.len() {
        for j in i + 1..base.len() {
            let dist = match body.dual_seminorm(&sub(&base[i], &base[j]))? {
                Extended::Finite(v) => v,
                Extended::Infinite => return Err(Error::InvalidInput("degenerate basis: infinite dual distance".into())),
            };
            if min.as_ref().is_none_or(|m| dist < *m) {
                min = Some(dist);
            }
        }
    }
    let min = match min {
        Some(m) if m.is_positive() => m,
        Some(_) => return Err(Error::InvalidInput("degenerate basis: zero dual distance between witness points".into())),
        // A single point (all of ℝ^d is lineality): nothing to scale.
        None => {
            return Ok(ShatteredWitness {
                points: base,
                min_dual_distance: ExactReal::zero(),
                dual_basis_bound: Rational::zero(),
                scale: Rational::one(),
            })
        }
    };
    let stated = match min.to_rational() {
        Some(r) => int(3) / r,
        // Round 3/ε up: a larger scale only widens the separations.
        None => int(3) / sqrt_lower_bound(min.square()),
    };
    let bound = dual_basis_bound(body, &base[1..])?;
    let scale_factor = std::cmp::max(stated, int(3) * &bound);
    let points = base.iter().map(|p| scale(p, &scale_factor)).collect();
    Ok(ShatteredWitness { points, min_dual_distance: min, dual_basis_bound: bound, scale: scale_factor })
}

/// Upper bound on `‖Σ_{i∈T} x_i*‖_{B*}` over nonempty `T`, where `x_i*` is the
/// basis of span(x) with `x_i*ᵀx_j = δ_ij`.
///
/// With `a = (2M/s)·σ Σ_{i∈T} x_i*` and `b = ∓M`, every sign vector on the
/// scaled points `0, s·x_1, …, s·x_t` is met with value `±M`, which beats
/// `‖a‖_{B*}` once `s > 2‖Σ_T x_i*‖_{B*}`.
fn dual_basis_bound(body: &ConstraintSet, basis: &[Vector]) -> Result<Rational> {
    let t = basis.len();
    let gram: Vec<Vector> = (0..t)
        .map(|i| {
            let mut row: Vector = (0..t).map(|j| dot(&basis[i], &basis[j])).collect();
            row.extend((0..t).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let (reduced, pivots) = linalg::rref(&gram, 2 * t);
    if pivots.len() < t || pivots.iter().any(|&c| c >= t) {
        return Err(Error::InvalidInput("degenerate basis: singular Gram matrix".into()));
    }
    let d = body.dim();
    let dual: Vec<Vector> = (0..t)
        .map(|i| {
            let mut v = vec![Rational::zero(); d];
            for (j, x) in basis.iter().enumerate() {
                let c = &reduced[i][t + j];
                for k in 0..d {
                    v[k] += c * &x[k];
                }
            }
            v
        })
        .collect();
    let mut best = Rational::zero();
    for mask in 1u64..1 << t {
        let mut sum = vec![Rational::zero(); d];
        for (_, v) in dual.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1) {
            for k in 0..d {
                sum[k] += &v[k];
            }
        }
        let norm = match body.dual_seminorm(&sum)? {
            Extended::Finite(v) => v,
            Extended::Infinite => return Err(Error::InvalidInput("degenerate basis: infinite dual norm".into())),
        };
        let upper = match norm.to_rational() {
            Some(r) => r,
            None => norm.square() / sqrt_lower_bound(norm.square()),
        };
        best = std::cmp::max(best, upper);
    }
    Ok(best)
}

/// A loss pattern no halfspace achieves on `data`, with its certificate.
pub fn unachievable_pattern(data: &LabeledDataset, body: &ConstraintSet) -> Result<AppendixCertificate> {
    check_dim(body.dim(), data.dim())?;
    let n = data.len();
    let d = data.dim();
    let lineality_dim = body.lineality().0;
    if n < d + 2 - lineality_dim {
        return Err(Error::Precondition(format!(
            "need n >= d + 2 - dim(V_B) = {} examples, got {n}",
            d + 2 - lineality_dim
        )));
    }
    // Coordinates in the quotient by V_B: pair each point with a basis of V_B^⊥.
    let complement = body.complement_basis();
    let mut rows: Vec<Vector> = complement.iter().map(|q| data.points().iter().map(|x| dot(q, x)).collect()).collect();
    rows.push(vec![Rational::one(); n]);
    let null = linalg::nullspace(&rows, n);
    let mut a = null.into_iter().next().expect("nullspace is nontrivial when n >= d + 2 - dim(V_B)");
    let abs_sum: Rational = a.iter().map(|v| v.abs()).sum();
    a = scale(&a, &(int(2) / abs_sum));

    let mut flipped = false;
    let (mut j, mut k, mut alphas) = split_coefficients(&a, data.labels());
    if &alphas[0] + &alphas[3] < &alphas[1] + &alphas[2] {
        a = a.iter().map(|v| -v).collect();
        flipped = true;
        (j, k, alphas) = split_coefficients(&a, data.labels());
    }
    let eta = a
        .iter()
        .zip(data.labels())
        .map(|(ai, c)| {
            if ai.is_zero() {
                0
            } else {
                let sign = if ai.is_positive() { Label::Pos } else { Label::Neg };
                u8::from(sign != *c)
            }
        })
        .collect();
    let [alpha_j_pos, alpha_j_neg, alpha_k_pos, alpha_k_neg] = alphas;
    Ok(AppendixCertificate {
        a,
        j,
        k,
        alpha_j_pos,
        alpha_j_neg,
        alpha_k_pos,
        alpha_k_neg,
        flipped,
        eta: LossPattern::new(eta)?,
    })
}

/// `(J, K, [α_J⁺, α_J⁻, α_K⁺, α_K⁻])`.
fn split_coefficients(a: &[Rational], labels: &[Label]) -> (Vec<usize>, Vec<usize>, [Rational; 4]) {
    let mut j = Vec::new();
    let mut k = Vec::new();
    let mut alphas: [Rational; 4] = Default::default();
    for (i, (ai, c)) in a.iter().zip(labels).enumerate() {
        let slot = match (ai.is_positive(), ai.is_negative(), c) {
            (true, _, Label::Pos) => 0,
            (true, _, Label::Neg) => 1,
            (_, true, Label::Pos) => 2,
            (_, true, Label::Neg) => 3,
            _ => continue,
        };
        if slot < 2 {
            j.push(i);
        } else {
            k.push(i);
        }
        alphas[slot] += ai.abs();
    }
    (j, k, alphas)
}

/// Runs [`unachievable_pattern`] and confirms the LP oracle rejects `η`.
pub fn certify_unachievable(data: &LabeledDataset, body: &ConstraintSet) -> Result<FeasibilityCertificate> {
    let cert = unachievable_pattern(data, body)?;
    let mut result = halfspace_pattern_feasible(data, &cert.eta, body)?;
    result.appendix = Some(cert);
    Ok(result)
}

/// The lattice construction in `ℤ^d`: `d` points `x_i` with `(x_i)_j = −1` if
/// `i = j` and `1` otherwise, all labeled `−1`, the indicator hypotheses of
/// `{0,1}^d`, and the ℓ∞ lattice relation with budget 1.
#[derive(Clone, Debug)]
pub struct PointIndicatorInstance {
    pub dim: usize,
    pub data: LabeledDataset,
    pub centers: Vec<Vector>,
    pub class: FiniteClass,
    pub relation: TabularRelation,
    pub indexed: IndexedDataset,
}

pub fn point_indicator_construction(d: usize) -> Result<PointIndicatorInstance> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    let points: Vec<Vector> = (0..d).map(|i| (0..d).map(|j| int(if i == j { -1 } else { 1 })).collect()).collect();
    let data = LabeledDataset::new(points, vec![Label::Neg; d])?;
    let centers = lattice_box(d, 0, 1);
    let window = lattice_box(d, -2, 2);
    let class = PointIndicatorClass::new(d).tabulate_centers(&window, &centers)?;
    let indexed = IndexedDataset::locate(&class, &data)?;
    let relation = TabularRelation::lattice_linf_for(&class, 1, indexed.ids());
    Ok(PointIndicatorInstance { dim: d, data, centers, class, relation, indexed })
}

/// Result of the exhaustive pair search on a finite class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    /// Points on which the class realizes both labels.
    pub shattered_points: usize,
    /// First pair `(p, q)` on which some hypothesis outputs `(+1, +1)`.
    pub positive_pair: Option<(usize, usize)>,
    /// First pair on which all four labelings are realized.
    pub shattered_pair: Option<(usize, usize)>,
    /// `1` when a point but no pair is shattered, `0` when no point is; when a
    /// pair is shattered the value is only a lower bound (`2`).
    pub vc_dimension: usize,
}

/// Exhaustive pair check. Pairs that can realize `(+1, +1)` are collected
/// first (that set is small for sparse classes) and then tested for the
/// remaining three labelings.
pub fn vc_pair_check(class: &FiniteClass) -> PairCheck {
    let m = class.num_points();
    let has = |p: usize, l: CorruptedLabel| class.rows().iter().any(|r| r[p] == l);
    let shattered_points = (0..m).filter(|&p| has(p, CorruptedLabel::Pos) && has(p, CorruptedLabel::Neg)).count();
    let mut positive_pairs = BTreeSet::new();
    for row in class.rows() {
        let pos: Vec<usize> = (0..m).filter(|&p| row[p] == CorruptedLabel::Pos).collect();
        for (a, &p) in pos.iter().enumerate() {
            for &q in &pos[a + 1..] {
                positive_pairs.insert((p, q));
            }
        }
    }
    let realizes = |p: usize, q: usize, lp: CorruptedLabel, lq: CorruptedLabel| {
        class.rows().iter().any(|r| r[p] == lp && r[q] == lq)
    };
    let shattered_pair = positive_pairs.iter().copied().find(|&(p, q)| {
        realizes(p, q, CorruptedLabel::Pos, CorruptedLabel::Neg)
            && realizes(p, q, CorruptedLabel::Neg, CorruptedLabel::Pos)
            && realizes(p, q, CorruptedLabel::Neg, CorruptedLabel::Neg)
    });
    let vc_dimension = if shattered_pair.is_some() {
        2
    } else {
        usize::from(shattered_points > 0)
    };
    PairCheck { shattered_points, positive_pair: positive_pairs.iter().next().copied(), shattered_pair, vc_dimension }
}

/// Brute-force VC dimension of a small finite class (clean labels only).
pub fn vc_dimension_exhaustive(class: &FiniteClass) -> usize {
    let m = class.num_points();
    let mut best = 0;
    let max_k = (usize::BITS - class.num_hypotheses().leading_zeros()) as usize;
    for k in 1..=max_k.min(m) {
        let shattered = combinations(m, k).any(|ids| labeling_count_clean(class, &ids) == 1usize << k);
        if !shattered {
            break;
        }
        best = k;
    }
    best
}

fn labeling_count_clean(class: &FiniteClass, ids: &[usize]) -> usize {
    class
        .rows()
        .iter()
        .filter(|row| ids.iter().all(|&i| row[i] != CorruptedLabel::Bottom))
        .map(|row| ids.iter().map(|&i| row[i]).collect::<Vec<_>>())
        .collect::<HashSet<_>>()
        .len()
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let cur = current.as_mut().expect("checked above");
        let mut i = k;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// `Σ_{i=0}^{d} C(n, i)`.
pub fn sauer_bound(n: usize, d: usize) -> BigInt {
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for i in 0..=d.min(n) {
        if i > 0 {
            binom = binom * BigInt::from(n - i + 1) / BigInt::from(i);
        }
        total += &binom;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, vector};

    fn data1(xs: &[i64], labels: &[i64]) -> LabeledDataset {
        LabeledDataset::new(
            xs.iter().map(|&x| vector(&[x])).collect(),
            labels.iter().map(|&l| Label::from_sign(l).unwrap()).collect(),
        )
        .unwrap()
    }

    fn pat(bits: &[u8]) -> LossPattern {
        LossPattern::new(bits.to_vec()).unwrap()
    }

    #[test]
    fn well_separated_points_realize_all_patterns() {
        let body = ConstraintSet::linf(1, int(1)).unwrap();
        let data = data1(&[0, 10], &[1, 1]);
        let set = halfspace_loss_patterns(&data, &body).unwrap();
        assert_eq!(set.len(), 4);
    }

    #[test]
    fn feasible_witness_rechecks() {
        let body = ConstraintSet::linf(1, int(1)).unwrap();
        let data = data1(&[0, 10], &[1, 1]);
        let cert = halfspace_pattern_feasible(&data, &pat(&[0, 0]), &body).unwrap();
        assert!(cert.is_feasible());
        let w = cert.witness.unwrap();
        assert_eq!(achieved_pattern(&w.halfspace, &body, &data).unwrap(), pat(&[0, 0]));
        // normalized: ‖a‖_{B*} = |a| = 1, threshold strictly inside (1, 9)... for
        // positive labels on both sides this means a = -1 or 1 with b below -1.
        assert_eq!(body.dual_seminorm(&w.halfspace.a).unwrap(), Extended::rational(&int(1)));
    }

    #[test]
    fn middle_point_cannot_lose_alone() {
        let body = ConstraintSet::linf(1, int(1)).unwrap();
        let data = data1(&[0, 1, 2], &[1, 1, 1]);
        let cert = halfspace_pattern_feasible(&data, &pat(&[0, 1, 0]), &body).unwrap();
        assert_eq!(cert.status, FeasibilityStatus::Infeasible);
        // one record per nonzero vertex plus the zero-dual piece
        assert_eq!(cert.lp_records.len(), 3);
    }

    #[test]
    fn all_ones_always_feasible() {
        let body = ConstraintSet::l1(2, int(1)).unwrap();
        let data = LabeledDataset::new(vec![vector(&[0, 0]), vector(&[1, 1]), vector(&[2, 0])], vec![Label::Pos, Label::Neg, Label::Pos]).unwrap();
        assert!(halfspace_pattern_feasible(&data, &LossPattern::all_ones(3), &body).unwrap().is_feasible());
    }

    #[test]
    fn l2_is_rejected() {
        let body = ConstraintSet::l2(1, int(1)).unwrap();
        let data = data1(&[0], &[1]);
        assert!(matches!(halfspace_pattern_feasible(&data, &pat(&[0]), &body), Err(Error::UnsupportedBody(_))));
        // a zero-radius ℓ2 ball is a point and therefore polyhedral
        let point = ConstraintSet::l2(1, int(0)).unwrap();
        assert!(halfspace_pattern_feasible(&data, &pat(&[0]), &point).unwrap().is_feasible());
    }

    #[test]
    fn unachievable_examples() {
        let body = ConstraintSet::linf(1, int(1)).unwrap();
        let data = data1(&[0, 1, 2], &[1, 1, 1]);
        let cert = unachievable_pattern(&data, &body).unwrap();
        assert_eq!(cert.a, vec![ratio(1, 2), int(-1), ratio(1, 2)]);
        assert_eq!(cert.j, vec![0, 2]);
        assert_eq!(cert.k, vec![1]);
        assert_eq!(cert.eta, pat(&[0, 1, 0]));
        assert!(cert.verify(&data, &body));
        assert!(!halfspace_pattern_feasible(&data, &cert.eta, &body).unwrap().is_feasible());

        // With labels (+1, −1, +1) the same coefficients give η = 1(sgn a_i ≠ c_i) = (0, 0, 0).
        let data = data1(&[0, 1, 2], &[1, -1, 1]);
        let cert = unachievable_pattern(&data, &body).unwrap();
        assert_eq!(cert.eta, pat(&[0, 0, 0]));
        assert!(!halfspace_pattern_feasible(&data, &cert.eta, &body).unwrap().is_feasible());
        assert!(halfspace_pattern_feasible(&data, &pat(&[1, 0, 1]), &body).unwrap().is_feasible());

        let small = data1(&[0, 1], &[1, 1]);
        assert!(matches!(unachievable_pattern(&small, &body), Err(Error::Precondition(_))));
    }

    #[test]
    fn witness_examples() {
        let body = ConstraintSet::linf(1, int(1)).unwrap();
        let w = shattered_witness(&body, 1).unwrap();
        assert_eq!(w.points, vec![vector(&[0]), vector(&[3])]);

        let line = ConstraintSet::linf(2, int(1)).unwrap().with_lineality(vec![vector(&[0, 1])]).unwrap();
        let w = shattered_witness(&line, 2).unwrap();
        assert_eq!(w.points.len(), 2);
        assert!(w.points.iter().all(|p| p[1].is_zero()));

        // ℓ1: K = 1 and 3/ε = 3 agree. ℓ∞: K = d overrides 3/ε = 3.
        let w = shattered_witness(&ConstraintSet::l1(2, int(1)).unwrap(), 2).unwrap();
        assert_eq!(w.scale, int(3));
        let w = shattered_witness(&ConstraintSet::linf(2, int(1)).unwrap(), 2).unwrap();
        assert_eq!((w.dual_basis_bound.clone(), w.scale.clone()), (int(2), int(6)));
    }

    #[test]
    fn stated_scale_fails_for_linf_pairs() {
        let body = ConstraintSet::linf(2, int(1)).unwrap();
        let pts = vec![vector(&[0, 0]), vector(&[3, 0]), vector(&[0, 3])];
        let data = LabeledDataset::new(pts, vec![Label::Neg, Label::Pos, Label::Pos]).unwrap();
        assert!(!halfspace_pattern_feasible(&data, &pat(&[0, 0, 0]), &body).unwrap().is_feasible());
    }

    #[test]
    fn witness_shatters_every_labeling() {
        let bodies = [
            ConstraintSet::linf(2, int(1)).unwrap(),
            ConstraintSet::l1(2, int(1)).unwrap(),
            ConstraintSet::linf(3, int(1)).unwrap().with_lineality(vec![vector(&[0, 0, 1])]).unwrap(),
        ];
        for body in &bodies {
            let w = shattered_witness(body, body.dim()).unwrap();
            let k = w.points.len();
            for m in 0..1u32 << k {
                let labels = (0..k).map(|i| if m >> i & 1 == 1 { Label::Pos } else { Label::Neg }).collect();
                let data = w.dataset(labels).unwrap();
                assert!(HalfspaceOracle::new(&data, body).unwrap().shattered().unwrap(), "{body:?} labels {m:b}");
            }
        }
    }

    #[test]
    fn avc_values() {
        assert_eq!(avc_theorem_value(2, &ConstraintSet::linf(2, ratio(1, 2)).unwrap()).unwrap(), 3);
        let b = ConstraintSet::linf(3, int(1)).unwrap().with_lineality(vec![vector(&[0, 0, 1])]).unwrap();
        assert_eq!(avc_theorem_value(3, &b).unwrap(), 3);
        assert_eq!(avc_theorem_value(1, &ConstraintSet::identity(1)).unwrap(), 2);
    }

    #[test]
    fn sauer_values() {
        assert_eq!(sauer_bound(5, 2), BigInt::from(16));
        for n in 0..10 {
            assert_eq!(sauer_bound(n, n), BigInt::from(1u64 << n));
        }
        assert_eq!(sauer_bound(4, 0), BigInt::from(1));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = combinations(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    #[test]
    fn point_indicator_d2() {
        let inst = point_indicator_construction(2).unwrap();
        assert_eq!(inst.data.points(), &[vector(&[-1, 1]), vector(&[1, -1])]);
        let pats = finite_loss_patterns(&inst.class, &inst.relation, &inst.indexed).unwrap();
        assert_eq!(pats.len(), 4);
    }

    #[test]
    fn point_indicator_pairs() {
        let window = lattice_box(1, -2, 2);
        let class = PointIndicatorClass::new(1).tabulate(&window).unwrap();
        let check = vc_pair_check(&class);
        assert_eq!(check.vc_dimension, 1);
        assert_eq!(check.positive_pair, None);
        assert_eq!(vc_dimension_exhaustive(&class), 1);
        // two distinct points labeled (+1, +1): the corresponding loss pattern (0, 0) never occurs
        let ids = IndexedDataset::new(vec![0, 1], vec![Label::Pos, Label::Pos]).unwrap();
        let pats = finite_loss_patterns(&class, &TabularRelation::identity(5), &ids).unwrap();
        assert!(!pats.contains(&pat(&[0, 0])));
    }
}
