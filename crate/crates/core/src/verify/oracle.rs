//! Brute-force SP-reduction on dense matrices.
//!
//! Deliberately naive: every round scans all rows, then all columns, and
//! applies the first reduction found by direct comparison of dense vectors.
//! Meant for matrices up to about 12×12.

use crate::matrix::{DenseMatrix, Mode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub series_parallel: bool,
    pub remaining_rows: usize,
    pub remaining_cols: usize,
}

/// Reduces `matrix` until no zero, unit or (signed) copy reduction applies.
pub fn oracle_is_series_parallel(matrix: &DenseMatrix, mode: Mode) -> OracleVerdict {
    let mut a = matrix.clone();
    let mut alive_rows = vec![true; a.rows()];
    let mut alive_cols = vec![true; a.cols()];
    while let Some((is_row, index)) = find_reducible(&a, &alive_rows, &alive_cols, mode) {
        if is_row {
            alive_rows[index] = false;
            for c in 0..a.cols() {
                a.set(index, c, 0);
            }
        } else {
            alive_cols[index] = false;
            for r in 0..a.rows() {
                a.set(r, index, 0);
            }
        }
    }
    let remaining_rows = alive_rows.iter().filter(|&&x| x).count();
    let remaining_cols = alive_cols.iter().filter(|&&x| x).count();
    OracleVerdict { series_parallel: remaining_rows == 0 && remaining_cols == 0, remaining_rows, remaining_cols }
}

fn find_reducible(a: &DenseMatrix, alive_rows: &[bool], alive_cols: &[bool], mode: Mode) -> Option<(bool, usize)> {
    let rows: Vec<Vec<i8>> = (0..a.rows()).map(|r| a.row(r).to_vec()).collect();
    let t = a.transpose();
    let cols: Vec<Vec<i8>> = (0..t.rows()).map(|c| t.row(c).to_vec()).collect();
    if let Some(r) = first_reducible(&rows, alive_rows, mode) {
        return Some((true, r));
    }
    first_reducible(&cols, alive_cols, mode).map(|c| (false, c))
}

fn first_reducible(vectors: &[Vec<i8>], alive: &[bool], mode: Mode) -> Option<usize> {
    (0..vectors.len()).filter(|&i| alive[i]).find(|&i| {
        let support = vectors[i].iter().filter(|&&v| v != 0).count();
        if support <= 1 {
            return true;
        }
        (0..vectors.len()).filter(|&j| j != i && alive[j]).any(|j| {
            let same = vectors[i] == vectors[j];
            let negated = mode == Mode::Ternary && vectors[i].iter().zip(&vectors[j]).all(|(x, y)| *x == -*y);
            same || negated
        })
    })
}
