//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::exact::{Rational, Vector};

/// Reduced row echelon form. Returns the reduced matrix and its pivot columns.
pub fn rref(rows: &[Vector], cols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(rows: &[Vector], cols: usize) -> usize {
    rref(rows, cols).1.len()
}

/// Canonical nullspace basis of the matrix with the given rows: one vector per
/// free column (in increasing order), with a 1 in that column.
pub fn nullspace(rows: &[Vector], cols: usize) -> Vec<Vector> {
    let (m, pivots) = rref(rows, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -m[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `Σ λ_j basis_j = x` when `x` lies in the span; returns `None` otherwise.
pub fn solve_in_span(basis: &[Vector], x: &[Rational]) -> Option<Vector> {
    let k = basis.len();
    let d = x.len();
    // Augmented system with one row per coordinate.
    let rows: Vec<Vector> = (0..d)
        .map(|i| {
            let mut row: Vector = basis.iter().map(|b| b[i].clone()).collect();
            row.push(x[i].clone());
            row
        })
        .collect();
    let (m, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut lambda = vec![Rational::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        lambda[p] = m[r][k].clone();
    }
    Some(lambda)
}

pub fn in_span(basis: &[Vector], x: &[Rational]) -> bool {
    solve_in_span(basis, x).is_some()
}
