//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::rational::{dot, QVec, Q};

/// Reduced row echelon form in place. Rows of zeros are dropped; pivots are 1
/// and are the only nonzero entry of their column. Returns the pivot columns.
///
/// Only the first `ncols` columns are eligible as pivots, so an augmented
/// matrix `[A | b]` can be reduced with `ncols = A.ncols()`; an inconsistent
/// system then shows up as a row that is zero in the first `ncols` entries.
pub fn rref(rows: &mut Vec<QVec>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    // Rows past the last pivot are zero in the pivot-eligible columns; keep
    // only the ones that are nonzero overall (inconsistency witnesses).
    let mut tail: Vec<QVec> = rows
        .drain(r..)
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .collect();
    if let Some(first) = tail.first_mut() {
        // Normalize the witness so the representation stays canonical.
        let lead = first.iter().find(|x| !x.is_zero()).cloned().unwrap();
        for x in first.iter_mut() {
            *x /= &lead;
        }
        rows.push(first.clone());
    }
    pivots
}

pub fn rank(rows: &[QVec], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of the null space of a matrix already in reduced row echelon form
/// (columns `0..ncols`), one vector per free column, with a 1 in that column.
pub fn nullspace_from_rref(rows: &[QVec], pivots: &[usize], ncols: usize) -> Vec<QVec> {
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Q::zero(); ncols];
        v[free] = Q::one();
        for (row, &p) in rows.iter().zip(pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn nullspace(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let mut m = rows.to_vec();
    let piv = rref(&mut m, ncols);
    nullspace_from_rref(&m, &piv, ncols)
}

/// Solves the square system `m x = b`; `None` if `m` is singular.
pub fn solve_square(m: &[QVec], b: &[Q]) -> Option<QVec> {
    let n = m.len();
    let mut aug: Vec<QVec> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug, n);
    if piv.len() < n {
        return None;
    }
    Some(aug.iter().map(|r| r[n].clone()).collect())
}

/// Minimum-norm solution of `a x = b` for `a` with linearly independent rows:
/// `x = aᵀ (a aᵀ)⁻¹ b`. This is the orthogonal projection of every solution
/// onto the row space of `a`.
pub fn min_norm_solution(a: &[QVec], b: &[Q], ncols: usize) -> QVec {
    if a.is_empty() {
        return vec![Q::zero(); ncols];
    }
    let gram: Vec<QVec> = a
        .iter()
        .map(|ri| a.iter().map(|rj| dot(ri, rj)).collect())
        .collect();
    let y = solve_square(&gram, b).expect("rows of a flat's equations are independent");
    let mut x = vec![Q::zero(); ncols];
    for (row, yi) in a.iter().zip(&y) {
        if yi.is_zero() {
            continue;
        }
        for (xj, aj) in x.iter_mut().zip(row) {
            if !aj.is_zero() {
                *xj += yi * aj;
            }
        }
    }
    x
}
