//! Hypothesis classes: halfspaces, explicit finite tables, and the lattice
//! point-indicator family, plus labeled datasets.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::corruption::CorruptedLabel;
use crate::error::{check_dim, Error, Result};
use crate::exact::{dot, int, is_zero_vector, ExactReal, Extended, Rational, Vector};
use crate::geometry::ConstraintSet;

/// A clean label in `{-1, +1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn from_sign(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(Label::Neg),
            1 => Ok(Label::Pos),
            other => Err(Error::InvalidInput(format!("label must be -1 or 1, got {other}"))),
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Label::Neg => -1,
            Label::Pos => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Neg => Label::Pos,
            Label::Pos => Label::Neg,
        }
    }

    pub fn as_rational(self) -> Rational {
        int(self.sign())
    }
}

/// The classifier `x ↦ sgn(aᵀx − b)` with `sgn(0) = ⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub a: Vector,
    pub b: Rational,
}

impl Halfspace {
    pub fn new(a: Vector, b: Rational) -> Self {
        Halfspace { a, b }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// `a = 0`: the classifier is constant (`⊥` everywhere when also `b = 0`).
    pub fn is_degenerate(&self) -> bool {
        is_zero_vector(&self.a)
    }

    /// `g(x) = aᵀx − b`.
    pub fn score(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.a.len(), x.len())?;
        Ok(dot(&self.a, x) - &self.b)
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<CorruptedLabel> {
        let g = self.score(x)?;
        Ok(if g.is_positive() {
            CorruptedLabel::Pos
        } else if g.is_negative() {
            CorruptedLabel::Neg
        } else {
            CorruptedLabel::Bottom
        })
    }

    pub fn scaled(&self, t: &Rational) -> Halfspace {
        Halfspace { a: self.a.iter().map(|v| v * t).collect(), b: &self.b * t }
    }

    /// Label-signed seminorm distance from `x` to the decision boundary.
    pub fn signed_distance(&self, x: &[Rational], c: Label, body: &ConstraintSet) -> Result<SignedDistance> {
        check_dim(body.dim(), self.a.len())?;
        if self.is_degenerate() {
            return Err(Error::DegenerateHypothesis);
        }
        let g = self.score(x)? * c.as_rational();
        match body.dual_seminorm(&self.a)? {
            Extended::Infinite => Ok(SignedDistance::Finite(ExactReal::zero())),
            Extended::Finite(dual) if dual.is_zero() => Ok(if g.is_zero() {
                SignedDistance::Finite(ExactReal::zero())
            } else {
                SignedDistance::Infinite { positive: g.is_positive() }
            }),
            Extended::Finite(dual) => Ok(SignedDistance::Finite(ExactReal::from_rational(&g).div(&dual))),
        }
    }

    /// The signed distances of every example in `data`.
    pub fn signed_distance_set(&self, data: &LabeledDataset, body: &ConstraintSet) -> Result<Vec<SignedDistance>> {
        data.examples().map(|(x, c)| self.signed_distance(x, c, body)).collect()
    }
}

/// A signed distance: finite (exact, possibly irrational) or `±∞`. The
/// infinite case arises only for bodies whose bounded part is the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignedDistance {
    Finite(ExactReal),
    Infinite { positive: bool },
}

impl SignedDistance {
    pub fn is_positive(&self) -> bool {
        match self {
            SignedDistance::Finite(v) => v.is_positive(),
            SignedDistance::Infinite { positive } => *positive,
        }
    }

    /// Strictly greater than the rational `r`.
    pub fn exceeds(&self, r: &Rational) -> bool {
        match self {
            SignedDistance::Finite(v) => v.cmp_rational(r) == std::cmp::Ordering::Greater,
            SignedDistance::Infinite { positive } => *positive,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            SignedDistance::Finite(v) => v.to_f64(),
            SignedDistance::Infinite { positive: true } => f64::INFINITY,
            SignedDistance::Infinite { positive: false } => f64::NEG_INFINITY,
        }
    }
}

/// Examples `x_0..x_{n-1}` with labels in `{-1, +1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDataset {
    points: Vec<Vector>,
    labels: Vec<Label>,
}

impl LabeledDataset {
    pub fn new(points: Vec<Vector>, labels: Vec<Label>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("dataset must contain at least one example".into()));
        }
        if points.len() != labels.len() {
            return Err(Error::InvalidInput(format!("{} points but {} labels", points.len(), labels.len())));
        }
        let d = points[0].len();
        for p in &points {
            check_dim(d, p.len())?;
        }
        Ok(LabeledDataset { points, labels })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn examples(&self) -> impl Iterator<Item = (&Vector, Label)> {
        self.points.iter().zip(self.labels.iter().copied())
    }

    pub fn with_labels(&self, labels: Vec<Label>) -> Result<Self> {
        Self::new(self.points.clone(), labels)
    }

    pub fn subset(&self, idx: &[usize]) -> Result<Self> {
        Self::new(idx.iter().map(|&i| self.points[i].clone()).collect(), idx.iter().map(|&i| self.labels[i]).collect())
    }
}

/// Examples given as ground-set ids of a [`FiniteClass`], with labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedDataset {
    ids: Vec<usize>,
    labels: Vec<Label>,
}

impl IndexedDataset {
    pub fn new(ids: Vec<usize>, labels: Vec<Label>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::InvalidInput("dataset must contain at least one example".into()));
        }
        if ids.len() != labels.len() {
            return Err(Error::InvalidInput(format!("{} ids but {} labels", ids.len(), labels.len())));
        }
        Ok(IndexedDataset { ids, labels })
    }

    /// Looks up every point of `data` in the ground set of `class`.
    pub fn locate(class: &FiniteClass, data: &LabeledDataset) -> Result<Self> {
        let ids = data
            .points()
            .iter()
            .map(|p| {
                class
                    .point_id(p)
                    .ok_or_else(|| Error::InvalidInput(format!("point {} is not in the tabulated window", fmt_point(p))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ids, data.labels().to_vec())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn examples(&self) -> impl Iterator<Item = (usize, Label)> + '_ {
        self.ids.iter().copied().zip(self.labels.iter().copied())
    }

    pub fn with_labels(&self, labels: Vec<Label>) -> Result<Self> {
        Self::new(self.ids.clone(), labels)
    }
}

/// An explicit hypothesis table over a finite ground set of points.
///
/// Cells may hold `⊥` so that halfspaces can be tabulated on windows that
/// touch their boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteClass {
    points: Vec<Vector>,
    index: HashMap<Vector, usize>,
    names: Vec<String>,
    table: Vec<Vec<CorruptedLabel>>,
}

impl FiniteClass {
    pub fn new(points: Vec<Vector>, names: Vec<String>, table: Vec<Vec<CorruptedLabel>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty ground set".into()));
        }
        if names.len() != table.len() {
            return Err(Error::InvalidInput("one name per hypothesis row is required".into()));
        }
        for row in &table {
            if row.len() != points.len() {
                return Err(Error::InvalidInput("table row does not cover the ground set".into()));
            }
        }
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::InvalidInput("duplicate ground-set point".into()));
            }
        }
        Ok(FiniteClass { points, index, names, table })
    }

    /// A table over an abstract ground set `0..size` (points are `(i)`).
    pub fn from_rows(rows: Vec<Vec<Label>>) -> Result<Self> {
        let size = rows.first().map_or(0, Vec::len);
        let points = (0..size as i64).map(|i| vec![int(i)]).collect();
        let names = (0..rows.len()).map(|i| format!("h{i}")).collect();
        let table = rows.into_iter().map(|r| r.into_iter().map(CorruptedLabel::from).collect()).collect();
        Self::new(points, names, table)
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn point_id(&self, p: &[Rational]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<CorruptedLabel>] {
        &self.table
    }

    pub fn row(&self, h: usize) -> &[CorruptedLabel] {
        &self.table[h]
    }

    pub fn num_hypotheses(&self) -> usize {
        self.table.len()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }
}

/// `{h_x : x ∈ ℤ^d}` with `h_x(y) = +1` iff `y = x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointIndicatorClass {
    pub dim: usize,
}

impl PointIndicatorClass {
    pub fn new(dim: usize) -> Self {
        PointIndicatorClass { dim }
    }

    pub fn evaluate(&self, center: &[Rational], y: &[Rational]) -> Label {
        if center == y {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    /// One row per window point used as a center, plus a single all-`-1` row
    /// standing for every center outside the window.
    pub fn tabulate(&self, window: &[Vector]) -> Result<FiniteClass> {
        let mut class = self.tabulate_centers(window, window)?;
        class.names.push("outside".into());
        class.table.push(vec![CorruptedLabel::Neg; window.len()]);
        Ok(class)
    }

    /// Rows for exactly the given centers.
    pub fn tabulate_centers(&self, window: &[Vector], centers: &[Vector]) -> Result<FiniteClass> {
        if window.is_empty() {
            return Err(Error::InvalidInput("empty window".into()));
        }
        for p in window.iter().chain(centers) {
            check_dim(self.dim, p.len())?;
        }
        let names = centers.iter().map(|c| format!("h{}", fmt_point(c))).collect();
        let table = centers
            .iter()
            .map(|c| window.iter().map(|y| CorruptedLabel::from(self.evaluate(c, y))).collect())
            .collect();
        FiniteClass::new(window.to_vec(), names, table)
    }
}

/// Tabulates a finite set of halfspaces on a window (boundary points get `⊥`).
pub fn tabulate_halfspaces(halfspaces: &[Halfspace], window: &[Vector]) -> Result<FiniteClass> {
    if window.is_empty() {
        return Err(Error::InvalidInput("empty window".into()));
    }
    let table = halfspaces
        .iter()
        .map(|h| window.iter().map(|x| h.evaluate(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let names = (0..halfspaces.len()).map(|i| format!("halfspace{i}")).collect();
    FiniteClass::new(window.to_vec(), names, table)
}

/// All integer points of `[lo, hi]^d` in lexicographic order.
pub fn lattice_box(dim: usize, lo: i64, hi: i64) -> Vec<Vector> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1).max(0) as usize);
        for p in &out {
            for v in lo..=hi {
                let mut q = p.clone();
                q.push(int(v));
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub(crate) fn fmt_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(","))
}

impl From<Label> for CorruptedLabel {
    fn from(l: Label) -> Self {
        match l {
            Label::Neg => CorruptedLabel::Neg,
            Label::Pos => CorruptedLabel::Pos,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vector;

    fn hs(a: &[i64], b: i64) -> Halfspace {
        Halfspace::new(vector(a), int(b))
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(hs(&[1, 0], 0).evaluate(&vector(&[2, 0])).unwrap(), CorruptedLabel::Pos);
        assert_eq!(hs(&[1, 0], 0).evaluate(&vector(&[0, 3])).unwrap(), CorruptedLabel::Bottom);
        assert_eq!(hs(&[1, 0], 1).evaluate(&vector(&[0, 0])).unwrap(), CorruptedLabel::Neg);
        assert!(hs(&[1, 0], 0).evaluate(&vector(&[1])).is_err());
    }

    #[test]
    fn signed_distance_examples() {
        let l2 = ConstraintSet::l2(2, int(1)).unwrap();
        let h = hs(&[1, 0], 0);
        let x = vector(&[2, 0]);
        assert_eq!(h.signed_distance(&x, Label::Pos, &l2).unwrap(), SignedDistance::Finite(ExactReal::from_rational(&int(2))));
        assert_eq!(h.signed_distance(&x, Label::Neg, &l2).unwrap(), SignedDistance::Finite(ExactReal::from_rational(&int(-2))));

        let line = ConstraintSet::linf(2, int(1)).unwrap().with_lineality(vec![vector(&[1, 0])]).unwrap();
        for c in [Label::Neg, Label::Pos] {
            assert_eq!(hs(&[1, 1], 0).signed_distance(&vector(&[7, -3]), c, &line).unwrap(), SignedDistance::Finite(ExactReal::zero()));
        }
        assert!(matches!(hs(&[0, 0], 1).signed_distance(&x, Label::Pos, &l2), Err(Error::DegenerateHypothesis)));
    }

    #[test]
    fn tabulate_examples() {
        let window = lattice_box(1, -1, 1);
        let class = PointIndicatorClass::new(1).tabulate(&window).unwrap();
        assert_eq!(class.num_hypotheses(), 4);
        assert_eq!(class.row(1), &[CorruptedLabel::Neg, CorruptedLabel::Pos, CorruptedLabel::Neg]);
        assert!(class.row(3).iter().all(|l| *l == CorruptedLabel::Neg));

        let single = PointIndicatorClass::new(2).tabulate(&[vector(&[0, 0])]).unwrap();
        assert_eq!(single.row(0), &[CorruptedLabel::Pos]);

        let t = tabulate_halfspaces(&[hs(&[1], 0)], &[vector(&[-1]), vector(&[1])]).unwrap();
        assert_eq!(t.row(0), &[CorruptedLabel::Neg, CorruptedLabel::Pos]);
        assert!(PointIndicatorClass::new(1).tabulate(&[]).is_err());
    }

    #[test]
    fn lattice_box_order() {
        let b = lattice_box(2, 0, 1);
        assert_eq!(b, vec![vector(&[0, 0]), vector(&[0, 1]), vector(&[1, 0]), vector(&[1, 1])]);
        assert_eq!(lattice_box(3, -2, 2).len(), 125);
    }

    #[test]
    fn dataset_validation() {
        assert!(LabeledDataset::new(vec![], vec![]).is_err());
        assert!(LabeledDataset::new(vec![vector(&[1]), vector(&[1, 2])], vec![Label::Pos, Label::Neg]).is_err());
        assert!(Label::from_sign(0).is_err());
    }
}
