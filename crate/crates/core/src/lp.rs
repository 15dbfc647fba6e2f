//! Exact rational linear programming: a dense two-phase tableau simplex with
//! Bland's anti-cycling rule.
//!
//! Problems here have a handful of variables and at most a few hundred rows,
//! so a dense tableau over big rationals is adequate and exact.

use num_traits::{One, Signed, Zero};

use crate::exact::{Rational, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vector,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective·x` subject to the constraints. Variables are
/// nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    vars: usize,
    free: Vec<bool>,
    objective: Vector,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vector, value: Rational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&Vector, &Rational)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        LinearProgram {
            vars,
            free: vec![false; vars],
            objective: vec![Rational::zero(); vars],
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn maximize(&mut self, objective: Vector) -> &mut Self {
        assert_eq!(objective.len(), self.vars);
        self.objective = objective;
        self
    }

    pub fn constrain(&mut self, coeffs: Vector, relation: Relation, rhs: Rational) -> &mut Self {
        assert_eq!(coeffs.len(), self.vars);
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(self)
    }
}

struct Tableau {
    /// Each row holds `ncols` coefficients followed by the right-hand side.
    rows: Vec<Vector>,
    basis: Vec<usize>,
    ncols: usize,
    /// Structural columns: for each original variable, (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut var_cols = Vec::with_capacity(lp.vars);
        let mut col = 0;
        for v in 0..lp.vars {
            if lp.free[v] {
                var_cols.push((col, Some(col + 1)));
                col += 2;
            } else {
                var_cols.push((col, None));
                col += 1;
            }
        }
        let structural = col;
        let m = lp.constraints.len();
        // Normalize every row to a nonnegative right-hand side.
        let normalized: Vec<(Vector, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let rel = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|x| -x).collect(), rel, -c.rhs.clone())
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let slacks = normalized.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let artificials = normalized.iter().filter(|(_, r, _)| *r != Relation::Le).count();
        let artificial_start = structural + slacks;
        let ncols = artificial_start + artificials;

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack_col = structural;
        let mut art_col = artificial_start;
        for (coeffs, rel, rhs) in normalized {
            let mut row = vec![Rational::zero(); ncols + 1];
            for (v, a) in coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (pos, neg) = var_cols[v];
                row[pos] = a.clone();
                if let Some(neg) = neg {
                    row[neg] = -a.clone();
                }
            }
            row[ncols] = rhs;
            match rel {
                Relation::Le => {
                    row[slack_col] = Rational::one();
                    basis.push(slack_col);
                    slack_col += 1;
                }
                Relation::Ge => {
                    row[slack_col] = -Rational::one();
                    slack_col += 1;
                    row[art_col] = Rational::one();
                    basis.push(art_col);
                    art_col += 1;
                }
                Relation::Eq => {
                    row[art_col] = Rational::one();
                    basis.push(art_col);
                    art_col += 1;
                }
            }
            rows.push(row);
        }
        Tableau { rows, basis, ncols, var_cols, artificial_start }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        if self.ncols > self.artificial_start {
            let mut cost = vec![Rational::zero(); self.ncols];
            for c in cost.iter_mut().skip(self.artificial_start) {
                *c = -Rational::one();
            }
            let value = match self.optimize(&cost, self.ncols) {
                Some(v) => v,
                None => unreachable!("phase one is bounded"),
            };
            if value.is_negative() {
                return LpOutcome::Infeasible;
            }
            self.evict_artificials();
        }
        let mut cost = vec![Rational::zero(); self.ncols];
        for (v, c) in lp.objective.iter().enumerate() {
            let (pos, neg) = self.var_cols[v];
            cost[pos] = c.clone();
            if let Some(neg) = neg {
                cost[neg] = -c.clone();
            }
        }
        match self.optimize(&cost, self.artificial_start) {
            None => LpOutcome::Unbounded,
            Some(value) => {
                let mut col_value = vec![Rational::zero(); self.ncols];
                for (r, &b) in self.basis.iter().enumerate() {
                    col_value[b] = self.rows[r][self.ncols].clone();
                }
                let x = self
                    .var_cols
                    .iter()
                    .map(|&(pos, neg)| match neg {
                        Some(neg) => &col_value[pos] - &col_value[neg],
                        None => col_value[pos].clone(),
                    })
                    .collect();
                LpOutcome::Optimal { x, value }
            }
        }
    }

    /// Maximizes `cost·x` over columns `< allowed`. Returns `None` if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Option<Rational> {
        let rhs = self.ncols;
        // Reduced costs r_j = c_j - c_B·A_j, and the current objective value.
        let mut reduced: Vector = cost[..self.ncols].to_vec();
        reduced.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=rhs {
                if !self.rows[r][j].is_zero() {
                    let delta = cb * &self.rows[r][j];
                    reduced[j] -= delta;
                }
            }
        }
        loop {
            // Bland: lowest-index improving column.
            let Some(enter) = (0..allowed).find(|&j| reduced[j].is_positive()) else {
                return Some(-reduced[rhs].clone());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][rhs] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let (leave, _) = leave?;
            self.pivot(leave, enter);
            let f = reduced[enter].clone();
            for j in 0..=rhs {
                if !self.rows[leave][j].is_zero() {
                    let delta = &f * &self.rows[leave][j];
                    reduced[j] -= delta;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.ncols + 1;
        let inv = Rational::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nonzero: Vec<usize> = (0..width).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nonzero {
                let delta = &f * &pivot_row[j];
                row[j] -= delta;
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// After a successful phase one, pivot zero-valued artificials out of the
    /// basis, dropping rows that turn out to be redundant.
    fn evict_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(j) => {
                        self.pivot(r, j);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
    }
}
