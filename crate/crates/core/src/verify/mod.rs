//! Independent checks for reduction sequences and forbidden submatrices.

pub mod oracle;

use std::collections::HashSet;

use thiserror::Error;

use crate::matrix::{DenseMatrix, Element, SparseMatrix};
use crate::reduce::{replay_step, Reduction, ReplayError};
use crate::wheel::WheelKind;

pub use oracle::{oracle_is_series_parallel, OracleVerdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("reduction {position} ({reduction}) is invalid: {reason}")]
pub struct ReductionRejection {
    /// Zero-based position in the sequence.
    pub position: usize,
    pub reduction: Reduction,
    pub reason: ReplayError,
}

/// Replays `reductions` on a copy of `matrix`. Maximality is not checked.
pub fn verify_reductions(matrix: &SparseMatrix, reductions: &[Reduction]) -> Result<(), ReductionRejection> {
    let mut m = matrix.clone();
    for (position, reduction) in reductions.iter().enumerate() {
        replay_step(&mut m, reduction).map_err(|reason| ReductionRejection {
            position,
            reduction: *reduction,
            reason,
        })?;
    }
    Ok(())
}

/// How entry values are treated by [`verify_wheel`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WheelCheckMode {
    /// Entries must be 0 or 1.
    ExactBinary,
    /// Only the nonzero pattern matters.
    Support,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WheelRejection {
    #[error("{rows} rows and {cols} columns given, a wheel needs the same number")]
    NotSquare { rows: usize, cols: usize },
    #[error("order {0} is below 3")]
    TooSmall(usize),
    #[error("{0} is out of range")]
    OutOfRange(Element),
    #[error("{0} is listed twice")]
    Duplicate(Element),
    #[error("entry at (row {row}, column {col}) is {value}, expected 0 or 1")]
    NotBinary { row: usize, col: usize, value: i8 },
    #[error("{element} has {degree} nonzeros in the submatrix")]
    BadDegree { element: Element, degree: usize },
    #[error("a row with three nonzeros needs a matching column with three nonzeros")]
    UnpairedBranch,
    #[error("entry at (row {row}, column {col}) joining the two branch elements is zero")]
    MissingChord { row: usize, col: usize },
    #[error("the nonzeros form a cycle through {found} of {expected} elements")]
    NotSpanning { found: usize, expected: usize },
    #[error("the extra entry spans distance {0} along the cycle, expected 3")]
    ChordDistance(usize),
}

/// Facts about an accepted wheel submatrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WheelInfo {
    pub kind: WheelKind,
    pub order: usize,
    /// Product of the values on the spanning cycle (excluding the extra
    /// entry of an `M_ℓ′`); always 1 for binary matrices.
    pub cycle_sign_product: i8,
}

/// Checks that `matrix[rows, cols]` is `M_ℓ` or `M_ℓ′` up to row and column
/// permutations.
pub fn verify_wheel(
    matrix: &SparseMatrix,
    rows: &[usize],
    cols: &[usize],
    mode: WheelCheckMode,
) -> Result<WheelInfo, WheelRejection> {
    let l = rows.len();
    if cols.len() != l {
        return Err(WheelRejection::NotSquare { rows: l, cols: cols.len() });
    }
    if l < 3 {
        return Err(WheelRejection::TooSmall(l));
    }
    check_indices(rows, matrix.rows(), Element::Row)?;
    check_indices(cols, matrix.cols(), Element::Column)?;
    let sub = matrix.dense_submatrix(rows, cols).expect("indices were checked");
    if mode == WheelCheckMode::ExactBinary {
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                let value = sub.get(i, j);
                if value != 0 && value != 1 {
                    return Err(WheelRejection::NotBinary { row: r, col: c, value });
                }
            }
        }
    }
    check_wheel_pattern(&sub, rows, cols)
}

fn check_indices(indices: &[usize], bound: usize, make: fn(usize) -> Element) -> Result<(), WheelRejection> {
    let mut seen = HashSet::with_capacity(indices.len());
    for &i in indices {
        if i >= bound {
            return Err(WheelRejection::OutOfRange(make(i)));
        }
        if !seen.insert(i) {
            return Err(WheelRejection::Duplicate(make(i)));
        }
    }
    Ok(())
}

/// Degree and cycle analysis of a dense square submatrix. `rows` and `cols`
/// only label error messages.
fn check_wheel_pattern(sub: &DenseMatrix, rows: &[usize], cols: &[usize]) -> Result<WheelInfo, WheelRejection> {
    let l = sub.rows();
    let row_deg: Vec<usize> = (0..l).map(|i| (0..l).filter(|&j| sub.get(i, j) != 0).count()).collect();
    let col_deg: Vec<usize> = (0..l).map(|j| (0..l).filter(|&i| sub.get(i, j) != 0).count()).collect();
    let mut branch_row = None;
    let mut branch_col = None;
    for (i, &d) in row_deg.iter().enumerate() {
        match d {
            2 => {}
            3 if branch_row.is_none() => branch_row = Some(i),
            _ => return Err(WheelRejection::BadDegree { element: Element::Row(rows[i]), degree: d }),
        }
    }
    for (j, &d) in col_deg.iter().enumerate() {
        match d {
            2 => {}
            3 if branch_col.is_none() => branch_col = Some(j),
            _ => return Err(WheelRejection::BadDegree { element: Element::Column(cols[j]), degree: d }),
        }
    }
    let chord = match (branch_row, branch_col) {
        (None, None) => None,
        (Some(i), Some(j)) => {
            if sub.get(i, j) == 0 {
                return Err(WheelRejection::MissingChord { row: rows[i], col: cols[j] });
            }
            Some((i, j))
        }
        _ => return Err(WheelRejection::UnpairedBranch),
    };

    let on_cycle = |i: usize, j: usize| sub.get(i, j) != 0 && chord != Some((i, j));
    let row_nbrs: Vec<Vec<usize>> = (0..l).map(|i| (0..l).filter(|&j| on_cycle(i, j)).collect()).collect();
    let col_nbrs: Vec<Vec<usize>> = (0..l).map(|j| (0..l).filter(|&i| on_cycle(i, j)).collect()).collect();

    // Walk the 2-regular graph from row 0; positions are even for rows, odd for columns.
    let mut row_pos = vec![usize::MAX; l];
    let mut col_pos = vec![usize::MAX; l];
    let mut product: i8 = 1;
    let (mut row, mut prev_col) = (0, usize::MAX);
    let mut steps = 0;
    loop {
        row_pos[row] = steps;
        let col = if row_nbrs[row][0] != prev_col { row_nbrs[row][0] } else { row_nbrs[row][1] };
        product *= sub.get(row, col);
        if col_pos[col] != usize::MAX {
            break;
        }
        col_pos[col] = steps + 1;
        let next = if col_nbrs[col][0] != row { col_nbrs[col][0] } else { col_nbrs[col][1] };
        product *= sub.get(next, col);
        steps += 2;
        if row_pos[next] != usize::MAX {
            break;
        }
        row = next;
        prev_col = col;
    }
    if steps != 2 * l {
        return Err(WheelRejection::NotSpanning { found: steps.min(2 * l), expected: 2 * l });
    }
    let kind = match chord {
        None => WheelKind::Cycle,
        Some((i, j)) => {
            let d = row_pos[i].abs_diff(col_pos[j]);
            let distance = d.min(2 * l - d);
            if distance != 3 {
                return Err(WheelRejection::ChordDistance(distance));
            }
            WheelKind::CycleWithChordBlock
        }
    };
    Ok(WheelInfo { kind, order: l, cycle_sign_product: product })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum N2Rejection {
    #[error("{0} is out of range")]
    OutOfRange(Element),
    #[error("{0} is listed twice")]
    Duplicate(Element),
    #[error("entry at (row {row}, column {col}) is zero")]
    ZeroEntry { row: usize, col: usize },
    #[error("determinant is {0}, expected 2 or -2")]
    Determinant(i32),
}

/// Checks that `matrix[rows, cols]` has four nonzeros and determinant ±2,
/// i.e. it cannot be turned into the all-ones matrix by negating rows and
/// columns.
pub fn verify_n2(matrix: &SparseMatrix, rows: [usize; 2], cols: [usize; 2]) -> Result<(), N2Rejection> {
    for (idx, bound, make) in
        [(rows, matrix.rows(), Element::Row as fn(usize) -> Element), (cols, matrix.cols(), Element::Column)]
    {
        for i in idx {
            if i >= bound {
                return Err(N2Rejection::OutOfRange(make(i)));
            }
        }
        if idx[0] == idx[1] {
            return Err(N2Rejection::Duplicate(make(idx[0])));
        }
    }
    let mut v = [[0i32; 2]; 2];
    for (a, &r) in rows.iter().enumerate() {
        for (b, &c) in cols.iter().enumerate() {
            v[a][b] = i32::from(matrix.get(r, c));
            if v[a][b] == 0 {
                return Err(N2Rejection::ZeroEntry { row: r, col: c });
            }
        }
    }
    let det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
    if det.abs() != 2 {
        return Err(N2Rejection::Determinant(det));
    }
    Ok(())
}
