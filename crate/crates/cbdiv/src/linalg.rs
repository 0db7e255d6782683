//! Just enough exact linear algebra for the rest of the crate: row
//! reduction over big rationals, matrix inversion, and row-span
//! membership tests.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Reduces `rows` to row echelon form in place and returns the rank.
pub fn rref(rows: &mut Vec<Vec<BigRational>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col].clone();
            for j in 0..ncols {
                let t = &rows[rank][j] * &factor;
                rows[i][j] -= t;
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

pub fn row_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m)
}

/// True iff `target` lies in the rational span of `rows`.
pub fn in_row_span(rows: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    if target.iter().all(Zero::is_zero) {
        return true;
    }
    let base = row_rank(rows);
    let mut augmented = rows.to_vec();
    augmented.push(target.to_vec());
    row_rank(&augmented) == base
}

/// Inverse of a square matrix; `None` if singular.
pub fn invert(m: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let left: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n, "matrix must be square");
            row.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    if row_rank(&left) != n {
        return None;
    }
    let mut aug: Vec<Vec<BigRational>> = left
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    rref(&mut aug);
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
