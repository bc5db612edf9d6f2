//! Gaussian elimination over the rational function field.

use alloc::vec::Vec;

use super::ScalarExpr;
use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<ScalarExpr>>;

/// Reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Matrix,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
    /// Pivot entries before normalization; their zero sets are where the
    /// generic rank can drop.
    pub pivot_values: Vec<ScalarExpr>,
}

/// Row-reduces `m`, choosing in each column the first row (top to bottom)
/// with a nonzero entry.
pub fn rref(m: &Matrix) -> Echelon {
    let mut rows = m.clone();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut pivot_values = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let pv = rows[r][col].clone();
        let inv = pv.inv().expect("nonzero pivot");
        for e in rows[r].iter_mut() {
            *e = &*e * &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            let (pivot_row, target) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (t, p) in target.iter_mut().zip(pivot_row) {
                if !p.is_zero() {
                    *t = &*t - &(&factor * p);
                }
            }
        }
        pivots.push(col);
        pivot_values.push(pv);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    Echelon { rows, pivots, pivot_values }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).pivots.len()
}

pub fn determinant(m: &Matrix) -> ScalarExpr {
    let n = m.len();
    let mut a = m.clone();
    let mut det = ScalarExpr::one();
    for col in 0..n {
        let Some(found) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return ScalarExpr::zero();
        };
        if found != col {
            a.swap(found, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det = &det * &pv;
        let inv = pv.inv().expect("nonzero pivot");
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = &a[i][col] * &inv;
            let (top, bottom) = a.split_at_mut(i);
            for (t, p) in bottom[0].iter_mut().zip(&top[col]).skip(col) {
                *t = &*t - &(&factor * p);
            }
        }
    }
    det
}

/// Basis of the right null space `{f : m f = 0}`, one vector per free column.
pub fn null_space(m: &Matrix, ncols: usize) -> Vec<Vec<ScalarExpr>> {
    if m.is_empty() {
        return (0..ncols)
            .map(|j| (0..ncols).map(|i| if i == j { ScalarExpr::one() } else { ScalarExpr::zero() }).collect())
            .collect();
    }
    null_space_of(&rref(m), ncols)
}

/// [`null_space`] from an already reduced matrix.
pub fn null_space_of(e: &Echelon, ncols: usize) -> Vec<Vec<ScalarExpr>> {
    let free: Vec<usize> = (0..ncols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = alloc::vec![ScalarExpr::zero(); ncols];
            v[fc] = ScalarExpr::one();
            for (row, &pc) in e.rows.iter().zip(&e.pivots) {
                v[pc] = -&row[fc];
            }
            v
        })
        .collect()
}

/// Solves the square system `a x = b`.
pub fn solve(a: &Matrix, b: &[ScalarExpr]) -> Result<Vec<ScalarExpr>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) || b.len() != n {
        return Err(Error::SingularCoframe);
    }
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let e = rref(&aug);
    if e.pivots.len() < n || e.pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::SingularCoframe);
    }
    Ok(e.rows.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { ScalarExpr::one() } else { ScalarExpr::zero() }));
            r
        })
        .collect();
    let e = rref(&aug);
    if a.iter().any(|r| r.len() != n) || e.pivots.len() < n || e.pivots[..n].iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::SingularCoframe);
    }
    Ok(e.rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &Matrix) -> Matrix {
    let ncols = m.first().map_or(0, Vec::len);
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use alloc::vec;

    #[test]
    fn rank_and_determinant() {
        let x = ScalarExpr::var(0);
        let m = vec![vec![x.clone(), int(1)], vec![int(1), x.clone()]];
        assert_eq!(determinant(&m), &x * &x - int(1));
        assert_eq!(rank(&m), 2);
        let singular = vec![vec![x.clone(), &x * &x], vec![int(1), x.clone()]];
        assert!(determinant(&singular).is_zero());
        assert_eq!(rank(&singular), 1);
    }

    #[test]
    fn null_space_annihilates() {
        let x = ScalarExpr::var(0);
        let m = vec![vec![int(1), x.clone(), int(0)], vec![int(0), int(0), int(1)]];
        let ns = null_space(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let s = row.iter().zip(&ns[0]).fold(ScalarExpr::zero(), |acc, (a, b)| acc + a * b);
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_square() {
        let y = ScalarExpr::var(1);
        let a = vec![vec![int(2), int(0)], vec![y.clone(), int(1)]];
        let sol = solve(&a, &[int(4), int(0)]).unwrap();
        assert_eq!(sol, vec![int(2), -(int(2) * &y)]);
        assert!(solve(&vec![vec![int(1), int(1)], vec![int(1), int(1)]], &[int(0), int(1)]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let x = ScalarExpr::var(0);
        let a = vec![vec![x.clone(), int(1)], vec![int(1), int(0)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![int(0), int(1)], vec![int(1), -&x]]);
        assert!(inverse(&vec![vec![x.clone(), x.clone()], vec![int(1), int(1)]]).is_err());
    }
}
