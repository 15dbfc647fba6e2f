//! The adversary's perturbation body `B` and the seminorms it induces.
//!
//! A [`ConstraintSet`] is the Minkowski sum of a bounded, origin-symmetric
//! convex body (an ℓ_p ball, a symmetric polytope, or the origin) with an
//! explicitly given linear subspace. The budget is part of the body: a point
//! `y` is a legal perturbation of `x` iff `seminorm(y - x) <= 1`.

use std::collections::HashSet;

use num_traits::{Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exact::{dot, int, is_zero_vector, scale, sub, ExactReal, Extended, Rational, Vector};
use crate::linalg;
use crate::lp::{LinearProgram, LpOutcome, Relation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpNorm {
    One,
    Two,
    Inf,
}

impl LpNorm {
    pub fn name(self) -> &'static str {
        match self {
            LpNorm::One => "1",
            LpNorm::Two => "2",
            LpNorm::Inf => "inf",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    Lp { p: LpNorm, radius: Rational },
    Polytope { vertices: Vec<Vector> },
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSet {
    dim: usize,
    body: Body,
    lineality: Vec<Vector>,
}

impl ConstraintSet {
    pub fn new(dim: usize, body: Body, lineality: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        match &body {
            Body::Lp { radius, .. } if radius.is_negative() => {
                return Err(Error::InvalidInput("radius must be nonnegative".into()));
            }
            Body::Polytope { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::InvalidInput("polytope needs at least one vertex".into()));
                }
                for v in vertices {
                    check_dim(dim, v.len())?;
                }
                let set: HashSet<&Vector> = vertices.iter().collect();
                for v in vertices {
                    let neg: Vector = v.iter().map(|x| -x).collect();
                    if !set.contains(&neg) {
                        return Err(Error::InvalidInput("polytope vertex set is not origin-symmetric".into()));
                    }
                }
            }
            _ => {}
        }
        for l in &lineality {
            check_dim(dim, l.len())?;
        }
        if linalg::rank(&lineality, dim) != lineality.len() {
            return Err(Error::InvalidInput("lineality basis is not linearly independent".into()));
        }
        Ok(ConstraintSet { dim, body, lineality })
    }

    pub fn lp_ball(dim: usize, p: LpNorm, radius: Rational) -> Result<Self> {
        Self::new(dim, Body::Lp { p, radius }, Vec::new())
    }

    pub fn linf(dim: usize, radius: Rational) -> Result<Self> {
        Self::lp_ball(dim, LpNorm::Inf, radius)
    }

    pub fn l1(dim: usize, radius: Rational) -> Result<Self> {
        Self::lp_ball(dim, LpNorm::One, radius)
    }

    pub fn l2(dim: usize, radius: Rational) -> Result<Self> {
        Self::lp_ball(dim, LpNorm::Two, radius)
    }

    pub fn polytope(dim: usize, vertices: Vec<Vector>) -> Result<Self> {
        Self::new(dim, Body::Polytope { vertices }, Vec::new())
    }

    pub fn identity(dim: usize) -> Self {
        ConstraintSet { dim, body: Body::Identity, lineality: Vec::new() }
    }

    pub fn with_lineality(self, basis: Vec<Vector>) -> Result<Self> {
        Self::new(self.dim, self.body, basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    /// Same body shape with the radius replaced; only meaningful for ℓ_p balls.
    pub fn with_radius(&self, radius: Rational) -> Result<Self> {
        match &self.body {
            Body::Lp { p, .. } => Self::new(self.dim, Body::Lp { p: *p, radius }, self.lineality.clone()),
            Body::Identity => self.clone().rescaled_identity(radius),
            Body::Polytope { vertices } => {
                Self::new(self.dim, Body::Polytope { vertices: vertices.iter().map(|v| scale(v, &radius)).collect() }, self.lineality.clone())
            }
        }
    }

    fn rescaled_identity(self, radius: Rational) -> Result<Self> {
        if radius.is_zero() {
            Ok(self)
        } else {
            Err(Error::InvalidInput("the identity body has no radius".into()))
        }
    }

    /// True when the bounded part is just the origin.
    pub fn is_point_body(&self) -> bool {
        match &self.body {
            Body::Identity => true,
            Body::Lp { radius, .. } => radius.is_zero(),
            Body::Polytope { vertices } => vertices.iter().all(|v| is_zero_vector(v)),
        }
    }

    pub fn is_polyhedral(&self) -> bool {
        !matches!(&self.body, Body::Lp { p: LpNorm::Two, radius } if !radius.is_zero())
    }

    /// Vertices of the bounded part of a polyhedral body, in a fixed order.
    pub fn vertices(&self) -> Result<Vec<Vector>> {
        if self.is_point_body() {
            return Ok(vec![vec![Rational::zero(); self.dim]]);
        }
        match &self.body {
            Body::Lp { p: LpNorm::Inf, radius } => {
                let d = self.dim;
                Ok((0..1u64 << d)
                    .map(|mask| {
                        (0..d)
                            .map(|i| if mask >> (d - 1 - i) & 1 == 1 { radius.clone() } else { -radius.clone() })
                            .collect()
                    })
                    .collect())
            }
            Body::Lp { p: LpNorm::One, radius } => {
                let mut out = Vec::with_capacity(2 * self.dim);
                for i in 0..self.dim {
                    for s in [-radius.clone(), radius.clone()] {
                        let mut v = vec![Rational::zero(); self.dim];
                        v[i] = s;
                        out.push(v);
                    }
                }
                Ok(out)
            }
            Body::Polytope { vertices } => Ok(vertices.clone()),
            _ => Err(Error::UnsupportedBody("the ℓ2 ball is not polyhedral".into())),
        }
    }

    /// Dimension and basis of the largest subspace contained in the body.
    pub fn lineality(&self) -> (usize, Vec<Vector>) {
        (self.lineality.len(), self.lineality.clone())
    }

    /// A basis of the orthogonal complement of the lineality space.
    pub fn complement_basis(&self) -> Vec<Vector> {
        linalg::nullspace(&self.lineality, self.dim)
    }

    /// True iff `w` is orthogonal to every lineality direction.
    pub fn annihilates_lineality(&self, w: &[Rational]) -> bool {
        self.lineality.iter().all(|l| dot(l, w).is_zero())
    }

    /// `inf { t >= 0 : x ∈ tB }`.
    pub fn seminorm(&self, x: &[Rational]) -> Result<Extended> {
        check_dim(self.dim, x.len())?;
        if linalg::in_span(&self.lineality, x) {
            return Ok(Extended::zero());
        }
        if self.is_point_body() {
            return Ok(Extended::Infinite);
        }
        match &self.body {
            Body::Lp { p: LpNorm::Two, radius } => {
                let r = self.project_off_lineality(x);
                let sq = dot(&r, &r) / (radius * radius);
                Ok(Extended::Finite(ExactReal::sqrt(sq)))
            }
            Body::Lp { p, radius } if self.lineality.is_empty() => {
                let norm = match p {
                    LpNorm::One => x.iter().fold(Rational::zero(), |acc, v| acc + v.abs()),
                    _ => x.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero),
                };
                Ok(Extended::rational(&(norm / radius)))
            }
            _ => self.gauge_by_lp(x),
        }
    }

    /// Minimizes `Σ μ_v` subject to `Σ μ_v v + Σ λ_j l_j = x`, `μ >= 0`.
    fn gauge_by_lp(&self, x: &[Rational]) -> Result<Extended> {
        let verts = self.vertices()?;
        let k = self.lineality.len();
        let nv = verts.len();
        let mut lp = LinearProgram::new(nv + k);
        for j in 0..k {
            lp.set_free(nv + j);
        }
        let mut obj = vec![Rational::zero(); nv + k];
        for o in obj.iter_mut().take(nv) {
            *o = int(-1);
        }
        lp.maximize(obj);
        for i in 0..self.dim {
            let mut row: Vector = verts.iter().map(|v| v[i].clone()).collect();
            row.extend(self.lineality.iter().map(|l| l[i].clone()));
            lp.constrain(row, Relation::Eq, x[i].clone());
        }
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => Ok(Extended::rational(&-value)),
            LpOutcome::Infeasible => Ok(Extended::Infinite),
            LpOutcome::Unbounded => unreachable!("gauge is bounded below by zero"),
        }
    }

    /// Orthogonal projection of `x` onto the complement of the lineality span.
    fn project_off_lineality(&self, x: &[Rational]) -> Vector {
        if self.lineality.is_empty() {
            return x.to_vec();
        }
        // Normal equations G λ = Lᵀx.
        let gram: Vec<Vector> = self
            .lineality
            .iter()
            .map(|li| self.lineality.iter().map(|lj| dot(li, lj)).collect())
            .collect();
        let rhs: Vector = self.lineality.iter().map(|l| dot(l, x)).collect();
        let lambda = linalg::solve_in_span(&transpose(&gram), &rhs).expect("Gram matrix of an independent basis is invertible");
        let mut r = x.to_vec();
        for (l, lam) in self.lineality.iter().zip(&lambda) {
            r = sub(&r, &scale(l, lam));
        }
        r
    }

    /// `sup_{y ∈ B} wᵀy`.
    pub fn dual_seminorm(&self, w: &[Rational]) -> Result<Extended> {
        check_dim(self.dim, w.len())?;
        if !self.annihilates_lineality(w) {
            return Ok(Extended::Infinite);
        }
        if self.is_point_body() {
            return Ok(Extended::zero());
        }
        match &self.body {
            Body::Lp { p: LpNorm::Inf, radius } => {
                Ok(Extended::rational(&(w.iter().fold(Rational::zero(), |acc, v| acc + v.abs()) * radius)))
            }
            Body::Lp { p: LpNorm::One, radius } => {
                Ok(Extended::rational(&(w.iter().map(|v| v.abs()).max().unwrap_or_else(Rational::zero) * radius)))
            }
            Body::Lp { p: LpNorm::Two, radius } => Ok(Extended::Finite(ExactReal::sqrt(dot(w, w) * radius * radius))),
            Body::Polytope { vertices } => {
                let best = vertices.iter().map(|v| dot(w, v)).max().expect("nonempty vertex list");
                Ok(Extended::rational(&best))
            }
            Body::Identity => Ok(Extended::zero()),
        }
    }

    /// Rational dual seminorm for polyhedral bodies, `None` when infinite.
    pub fn dual_seminorm_rational(&self, w: &[Rational]) -> Result<Option<Rational>> {
        match self.dual_seminorm(w)? {
            Extended::Infinite => Ok(None),
            Extended::Finite(v) => Ok(Some(v.to_rational().ok_or_else(|| {
                Error::UnsupportedBody("dual seminorm is irrational for this body".into())
            })?)),
        }
    }

    /// A point `z* ∈ B` with `wᵀz* = dual_seminorm(w)`. Among tied vertices the
    /// lexicographically greatest is returned.
    pub fn support_vertex(&self, w: &[Rational]) -> Result<Vector> {
        check_dim(self.dim, w.len())?;
        if !self.is_polyhedral() {
            return Err(Error::UnsupportedBody("support points are only computed for polyhedral bodies".into()));
        }
        if !self.annihilates_lineality(w) {
            return Err(Error::NoSupport);
        }
        let verts = self.vertices()?;
        let mut best: Option<(Rational, Vector)> = None;
        for v in verts {
            let val = dot(w, &v);
            let replace = match &best {
                None => true,
                Some((bv, bvert)) => val > *bv || (val == *bv && v > *bvert),
            };
            if replace {
                best = Some((val, v));
            }
        }
        Ok(best.expect("at least one vertex").1)
    }

    pub fn contains(&self, y: &[Rational]) -> Result<bool> {
        Ok(match self.seminorm(y)? {
            Extended::Infinite => false,
            Extended::Finite(v) => v.cmp_rational(&int(1)) != std::cmp::Ordering::Greater,
        })
    }
}

fn transpose(m: &[Vector]) -> Vec<Vector> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, vector};

    fn e(i: usize, d: usize) -> Vector {
        let mut v = vec![Rational::zero(); d];
        v[i] = int(1);
        v
    }

    #[test]
    fn seminorm_examples() {
        let l2 = ConstraintSet::l2(2, int(1)).unwrap();
        assert_eq!(l2.seminorm(&vector(&[2, 0])).unwrap().to_rational(), Some(int(2)));

        let with_line = ConstraintSet::linf(2, int(1)).unwrap().with_lineality(vec![e(0, 2)]).unwrap();
        assert_eq!(with_line.seminorm(&vector(&[5, 0])).unwrap(), Extended::zero());

        let segment = ConstraintSet::polytope(2, vec![vector(&[1, 0]), vector(&[-1, 0])]).unwrap();
        assert_eq!(segment.seminorm(&vector(&[0, 1])).unwrap(), Extended::Infinite);
        assert_eq!(segment.seminorm(&vector(&[3, 0])).unwrap(), Extended::rational(&int(3)));
    }

    #[test]
    fn seminorm_with_lineality_uses_quotient() {
        let d = 3;
        let b = ConstraintSet::linf(d, int(2)).unwrap().with_lineality(vec![vector(&[1, 1, 0])]).unwrap();
        // x = (3, 1, 1): subtract λ(1,1,0) to minimize the max-abs of (3-λ, 1-λ, 1): λ = 2 -> (1,-1,1), norm 1, /2.
        assert_eq!(b.seminorm(&vector(&[3, 1, 1])).unwrap(), Extended::rational(&ratio(1, 2)));
        let b2 = ConstraintSet::l2(d, int(1)).unwrap().with_lineality(vec![e(2, d)]).unwrap();
        assert_eq!(b2.seminorm(&vector(&[3, 4, 9])).unwrap().to_rational(), Some(int(5)));
    }

    #[test]
    fn dual_seminorm_examples() {
        let b1 = ConstraintSet::linf(2, int(1)).unwrap();
        assert_eq!(b1.dual_seminorm(&vector(&[3, -4])).unwrap(), Extended::rational(&int(7)));
        let b2 = ConstraintSet::linf(2, int(2)).unwrap();
        assert_eq!(b2.dual_seminorm(&vector(&[3, -4])).unwrap(), Extended::rational(&int(14)));
        let line = ConstraintSet::linf(2, int(1)).unwrap().with_lineality(vec![e(0, 2)]).unwrap();
        assert_eq!(line.dual_seminorm(&vector(&[1, 0])).unwrap(), Extended::Infinite);
        let l2 = ConstraintSet::l2(2, int(1)).unwrap();
        assert_eq!(l2.dual_seminorm(&vector(&[1, 1])).unwrap(), Extended::Finite(ExactReal::sqrt(int(2))));
    }

    #[test]
    fn support_vertex_examples() {
        let linf = ConstraintSet::linf(2, int(1)).unwrap();
        assert_eq!(linf.support_vertex(&vector(&[3, -4])).unwrap(), vector(&[1, -1]));
        let l1 = ConstraintSet::l1(2, int(1)).unwrap();
        assert_eq!(l1.support_vertex(&vector(&[3, -4])).unwrap(), vector(&[0, -1]));
        assert_eq!(l1.support_vertex(&vector(&[1, 1])).unwrap(), vector(&[1, 0]));
        let l2 = ConstraintSet::l2(2, int(1)).unwrap();
        assert!(matches!(l2.support_vertex(&vector(&[1, 1])), Err(Error::UnsupportedBody(_))));
        let line = linf.clone().with_lineality(vec![e(0, 2)]).unwrap();
        assert!(matches!(line.support_vertex(&vector(&[1, 0])), Err(Error::NoSupport)));
    }

    #[test]
    fn lineality_examples() {
        assert_eq!(ConstraintSet::l2(2, int(1)).unwrap().lineality(), (0, vec![]));
        let b = ConstraintSet::linf(3, int(1)).unwrap().with_lineality(vec![e(2, 3)]).unwrap();
        assert_eq!(b.lineality(), (1, vec![e(2, 3)]));
        assert_eq!(ConstraintSet::identity(4).lineality().0, 0);
    }

    #[test]
    fn rejects_bad_bodies() {
        assert!(ConstraintSet::polytope(2, vec![vector(&[1, 0])]).is_err());
        assert!(ConstraintSet::linf(2, int(-1)).is_err());
        assert!(ConstraintSet::identity(2).with_lineality(vec![vector(&[1, 1]), vector(&[2, 2])]).is_err());
        let b = ConstraintSet::linf(2, int(1)).unwrap();
        assert!(matches!(b.seminorm(&vector(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn identity_body() {
        let id = ConstraintSet::identity(2);
        assert_eq!(id.seminorm(&vector(&[0, 0])).unwrap(), Extended::zero());
        assert_eq!(id.seminorm(&vector(&[0, 1])).unwrap(), Extended::Infinite);
        assert_eq!(id.dual_seminorm(&vector(&[5, 1])).unwrap(), Extended::zero());
        assert_eq!(id.support_vertex(&vector(&[5, 1])).unwrap(), vector(&[0, 0]));
    }
}
