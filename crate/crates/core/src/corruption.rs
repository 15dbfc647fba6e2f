//! The corrupted-hypothesis map and the 0-1 loss over `{-1, +1, ⊥}`.
//!
//! A corrupted hypothesis answers `+1` (or `-1`) at `x` only when the clean
//! hypothesis answers `+1` (or `-1`) on the whole neighborhood `N(x)`; any
//! disagreement inside the neighborhood yields `⊥`, which is wrong for every
//! label.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{check_dim, Error, Result};
use crate::exact::{ExactReal, Extended, Rational, Vector};
use crate::geometry::ConstraintSet;
use crate::hypotheses::{fmt_point, FiniteClass, Halfspace, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CorruptedLabel {
    Neg,
    Pos,
    Bottom,
}

impl CorruptedLabel {
    pub fn symbol(self) -> &'static str {
        match self {
            CorruptedLabel::Neg => "-1",
            CorruptedLabel::Pos => "1",
            CorruptedLabel::Bottom => "bottom",
        }
    }

    pub fn label(self) -> Option<Label> {
        match self {
            CorruptedLabel::Neg => Some(Label::Neg),
            CorruptedLabel::Pos => Some(Label::Pos),
            CorruptedLabel::Bottom => None,
        }
    }
}

/// `1(l ≠ c)`; `⊥` never equals a label.
pub fn zero_one_loss(l: CorruptedLabel, c: Label) -> u8 {
    u8::from(l.label() != Some(c))
}

/// `κ_R(h)(x)` for a halfspace under the perturbation body `B`.
pub fn corrupted_evaluate(h: &Halfspace, body: &ConstraintSet, x: &[Rational]) -> Result<CorruptedLabel> {
    check_dim(body.dim(), h.dim())?;
    let dual = body.dual_seminorm(&h.a)?;
    corrupted_from_dual(h, &dual, x)
}

/// Same as [`corrupted_evaluate`] with the dual seminorm of `h.a` precomputed.
pub fn corrupted_from_dual(h: &Halfspace, dual: &Extended, x: &[Rational]) -> Result<CorruptedLabel> {
    let g = h.score(x)?;
    let Extended::Finite(dual) = dual else {
        return Ok(CorruptedLabel::Bottom);
    };
    let g = ExactReal::from_rational(&g);
    Ok(if g.cmp(dual) == Ordering::Greater {
        CorruptedLabel::Pos
    } else if g.cmp(&dual.neg()) == Ordering::Less {
        CorruptedLabel::Neg
    } else {
        CorruptedLabel::Bottom
    })
}

/// A finite adversarial relation: point id ↦ nonempty neighborhood.
///
/// Points without an entry are not covered (their neighborhood leaves the
/// tabulated domain) and cannot be corrupted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabularRelation {
    size: usize,
    neighbors: BTreeMap<usize, Vec<usize>>,
    uncovered: BTreeMap<usize, String>,
}

impl TabularRelation {
    pub fn new(size: usize, neighbors: BTreeMap<usize, Vec<usize>>) -> Result<Self> {
        for (&x, n) in &neighbors {
            if x >= size {
                return Err(Error::InvalidInput(format!("point {x} outside ground set of size {size}")));
            }
            if n.is_empty() {
                return Err(Error::InvalidInput(format!("neighborhood of point {x} is empty")));
            }
        }
        Ok(TabularRelation { size, neighbors, uncovered: BTreeMap::new() })
    }

    /// `I_X`: every point is its own only neighbor.
    pub fn identity(size: usize) -> Self {
        TabularRelation { size, neighbors: (0..size).map(|i| (i, vec![i])).collect(), uncovered: BTreeMap::new() }
    }

    /// Lattice ℓ∞ relation over the ground set of `class`: `y ∈ N(x)` iff
    /// `‖y − x‖∞ <= radius` with `y` integral. Points whose neighborhood
    /// leaves the ground set stay uncovered.
    pub fn lattice_linf(class: &FiniteClass, radius: i64) -> Self {
        let all: Vec<usize> = (0..class.points().len()).collect();
        Self::lattice_linf_for(class, radius, &all)
    }

    /// [`TabularRelation::lattice_linf`] restricted to the listed point ids.
    pub fn lattice_linf_for(class: &FiniteClass, radius: i64, ids: &[usize]) -> Self {
        let points = class.points();
        let d = points.first().map_or(0, Vec::len);
        let offsets = crate::hypotheses::lattice_box(d, -radius, radius);
        let mut neighbors = BTreeMap::new();
        let mut uncovered = BTreeMap::new();
        for &i in ids {
            let p = &points[i];
            let mut ids = Vec::with_capacity(offsets.len());
            let mut missing = None;
            for off in &offsets {
                let q: Vector = p.iter().zip(off).map(|(a, b)| a + b).collect();
                match class.point_id(&q) {
                    Some(j) => ids.push(j),
                    None => {
                        missing = Some(fmt_point(&q));
                        break;
                    }
                }
            }
            match missing {
                None => {
                    neighbors.insert(i, ids);
                }
                Some(q) => {
                    uncovered.insert(i, q);
                }
            }
        }
        TabularRelation { size: points.len(), neighbors, uncovered }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn neighbors(&self, x: usize) -> Result<&[usize]> {
        match self.neighbors.get(&x) {
            Some(n) => Ok(n),
            None => Err(Error::Coverage {
                point: x,
                neighbor: self.uncovered.get(&x).cloned().unwrap_or_else(|| "unknown".into()),
            }),
        }
    }

    pub fn entries(&self) -> &BTreeMap<usize, Vec<usize>> {
        &self.neighbors
    }

    /// `R₁ ⊆ R₂` on the points both relations cover.
    pub fn is_subrelation_of(&self, other: &TabularRelation) -> bool {
        self.neighbors.iter().all(|(x, n)| other.neighbors.get(x).is_some_and(|m| n.iter().all(|y| m.contains(y))))
    }
}

/// Corrupted label of a tabulated hypothesis at point `x`, by scanning `N(x)`.
pub fn corrupt_at(row: &[CorruptedLabel], relation: &TabularRelation, x: usize) -> Result<CorruptedLabel> {
    let mut seen_pos = false;
    let mut seen_neg = false;
    for &y in relation.neighbors(x)? {
        match row.get(y) {
            None => return Err(Error::Coverage { point: x, neighbor: format!("#{y}") }),
            Some(CorruptedLabel::Bottom) => return Ok(CorruptedLabel::Bottom),
            Some(CorruptedLabel::Pos) => seen_pos = true,
            Some(CorruptedLabel::Neg) => seen_neg = true,
        }
        if seen_pos && seen_neg {
            return Ok(CorruptedLabel::Bottom);
        }
    }
    Ok(if seen_pos { CorruptedLabel::Pos } else { CorruptedLabel::Neg })
}

/// Corrupted row restricted to the listed points.
pub fn corrupt_tabular(row: &[CorruptedLabel], relation: &TabularRelation, points: &[usize]) -> Result<Vec<CorruptedLabel>> {
    points.iter().map(|&x| corrupt_at(row, relation, x)).collect()
}

/// Corrupted row over every covered point of the relation.
pub fn corrupt_row(row: &[CorruptedLabel], relation: &TabularRelation) -> Result<BTreeMap<usize, CorruptedLabel>> {
    relation.neighbors.keys().map(|&x| Ok((x, corrupt_at(row, relation, x)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio, vector};
    use crate::hypotheses::{lattice_box, PointIndicatorClass};

    #[test]
    fn corrupted_evaluate_l2_examples() {
        let h = Halfspace::new(vector(&[1, 0]), int(0));
        let b = ConstraintSet::l2(2, int(1)).unwrap();
        assert_eq!(corrupted_evaluate(&h, &b, &vector(&[2, 0])).unwrap(), CorruptedLabel::Pos);
        assert_eq!(corrupted_evaluate(&h, &b, &[ratio(1, 2), int(0)]).unwrap(), CorruptedLabel::Bottom);
        assert_eq!(corrupted_evaluate(&h, &b, &vector(&[-3, 0])).unwrap(), CorruptedLabel::Neg);
        // exactly at budget: the boundary point is reachable
        assert_eq!(corrupted_evaluate(&h, &b, &vector(&[1, 0])).unwrap(), CorruptedLabel::Bottom);
    }

    #[test]
    fn identity_body_matches_clean_evaluation() {
        let h = Halfspace::new(vector(&[2, -1]), int(1));
        let id = ConstraintSet::identity(2);
        for x in lattice_box(2, -2, 2) {
            assert_eq!(corrupted_evaluate(&h, &id, &x).unwrap(), h.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn figure_instance() {
        // h_{(0,1)} on ℤ² with an ℓ∞ budget of 1.
        let window = lattice_box(2, -2, 2);
        let class = PointIndicatorClass::new(2).tabulate_centers(&window, &[vector(&[0, 1])]).unwrap();
        let rel = TabularRelation::lattice_linf(&class, 1);
        let x0 = class.point_id(&vector(&[-1, 1])).unwrap();
        let x1 = class.point_id(&vector(&[1, -1])).unwrap();
        assert_eq!(corrupt_at(class.row(0), &rel, x0).unwrap(), CorruptedLabel::Bottom);
        assert_eq!(corrupt_at(class.row(0), &rel, x1).unwrap(), CorruptedLabel::Neg);
        let corner = class.point_id(&vector(&[2, 2])).unwrap();
        assert!(matches!(corrupt_at(class.row(0), &rel, corner), Err(Error::Coverage { .. })));
    }

    #[test]
    fn tabular_examples() {
        let row = [CorruptedLabel::Pos, CorruptedLabel::Neg, CorruptedLabel::Neg];
        let id = TabularRelation::identity(3);
        assert_eq!(corrupt_tabular(&row, &id, &[0, 1, 2]).unwrap(), row.to_vec());
        let mut n = BTreeMap::new();
        n.insert(0, vec![1, 2]);
        n.insert(1, vec![0, 1]);
        n.insert(2, vec![5]);
        let rel = TabularRelation::new(6, n).unwrap();
        assert_eq!(corrupt_at(&row, &rel, 0).unwrap(), CorruptedLabel::Neg);
        assert_eq!(corrupt_at(&row, &rel, 1).unwrap(), CorruptedLabel::Bottom);
        assert!(matches!(corrupt_at(&row, &rel, 2), Err(Error::Coverage { .. })));
        let mut empty = BTreeMap::new();
        empty.insert(0, vec![]);
        assert!(TabularRelation::new(1, empty).is_err());
    }

    #[test]
    fn zero_one_loss_examples() {
        assert_eq!(zero_one_loss(CorruptedLabel::Pos, Label::Pos), 0);
        assert_eq!(zero_one_loss(CorruptedLabel::Bottom, Label::Neg), 1);
        assert_eq!(zero_one_loss(CorruptedLabel::Neg, Label::Pos), 1);
    }
}
