//! Splitting a reduced core along a 2-separation.
//!
//! With reached rows `X¹`, reached columns `Y¹` and the rest `X²`, `Y²`, the
//! core looks like
//!
//! ```text
//!        Y¹    Y²
//! X¹  [  B    b·cᵀ ]
//! X²  [  0     C   ]
//! ```
//!
//! where `b·cᵀ` is the all-ones block `X × Y` (or zero when the core is
//! disconnected). The two parts are `[B | b]` and `[cᵀ ; C]`. The extra column
//! `b` is represented by a real column of `Y` and the extra row `cᵀ` by a real
//! row of `X`, so both parts are submatrices of the core.

use crate::matrix::{Element, SparseMatrix};

use super::SearchError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartSide {
    /// `[B | b]`: the reached side.
    Reached,
    /// `[cᵀ ; C]`: the unreached side.
    Unreached,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub rows1: Vec<usize>,
    pub cols1: Vec<usize>,
    pub rows2: Vec<usize>,
    pub cols2: Vec<usize>,
    /// The all-ones interface block, absent in the disconnected case.
    pub block: Option<(Vec<usize>, Vec<usize>)>,
    /// Row standing in for `cᵀ` and column standing in for `b`.
    pub representatives: Option<(usize, usize)>,
}

/// The part chosen for the next round, as a submatrix of the core.
#[derive(Clone, Debug)]
pub struct Part {
    pub matrix: SparseMatrix,
    /// Core row index of each part row.
    pub rows: Vec<usize>,
    /// Core column index of each part column.
    pub cols: Vec<usize>,
    pub side: PartSide,
    pub separation: Separation,
    pub core_nnz: usize,
    pub part_nnz: usize,
}

/// Builds the separation induced by `reach` (a set of core elements closed
/// under the search) and extracts the part with fewer nonzeros; ties go to
/// the part with fewer elements, then to the reached part.
///
/// `block` is the all-ones block `X × Y` whose edges the search ignored, or
/// `None` if `reach` is a connected component.
pub fn decompose(
    core: &SparseMatrix,
    reach: &[Element],
    block: Option<(&[usize], &[usize])>,
) -> Result<Part, SearchError> {
    let (m, n) = (core.rows(), core.cols());
    let mut row_side = vec![2u8; m];
    let mut col_side = vec![2u8; n];
    for &e in reach {
        match e {
            Element::Row(r) => row_side[r] = 1,
            Element::Column(c) => col_side[c] = 1,
        }
    }
    let live_rows: Vec<usize> = core.live_rows().collect();
    let live_cols: Vec<usize> = core.live_cols().collect();
    let split = |live: &[usize], side: &[u8], which: u8| -> Vec<usize> {
        live.iter().copied().filter(|&i| side[i] == which).collect()
    };
    let (rows1, rows2) = (split(&live_rows, &row_side, 1), split(&live_rows, &row_side, 2));
    let (cols1, cols2) = (split(&live_cols, &col_side, 1), split(&live_cols, &col_side, 2));

    let mut in_x = vec![false; m];
    let mut in_y = vec![false; n];
    if let Some((x, y)) = block {
        for &r in x {
            if row_side[r] != 1 {
                return Err(SearchError::Internal(format!("block row {r} was not reached")));
            }
            in_x[r] = true;
        }
        for &c in y {
            if col_side[c] != 2 {
                return Err(SearchError::Internal(format!("block column {c} was reached")));
            }
            in_y[c] = true;
        }
    }

    // Cross blocks: nothing below-left, exactly the X × Y block above-right.
    let mut nnz1 = 0;
    let mut nnz2 = 0;
    let mut cross = 0;
    for &r in &live_rows {
        for (_, c, _) in core.entries(Element::Row(r)) {
            match (row_side[r], col_side[c]) {
                (1, 1) => nnz1 += 1,
                (2, 2) => nnz2 += 1,
                (1, 2) if in_x[r] && in_y[c] => cross += 1,
                _ => {
                    return Err(SearchError::Internal(format!(
                        "entry ({r}, {c}) crosses the separation outside the interface block"
                    )))
                }
            }
        }
    }
    let (x_len, y_len) = block.map_or((0, 0), |(x, y)| (x.len(), y.len()));
    if cross != x_len * y_len {
        return Err(SearchError::Internal("interface block is not all ones".into()));
    }
    if rows1.len() + cols1.len() < 2 || rows2.len() + cols2.len() < 2 {
        return Err(SearchError::Internal("degenerate separation".into()));
    }

    let representatives = block.map(|(x, y)| (*x.iter().min().unwrap(), *y.iter().min().unwrap()));
    let (mut p1_rows, mut p1_cols) = (rows1.clone(), cols1.clone());
    let (mut p2_rows, mut p2_cols) = (rows2.clone(), cols2.clone());
    if let Some((x0, y0)) = representatives {
        insert_sorted(&mut p1_cols, y0);
        insert_sorted(&mut p2_rows, x0);
    }
    let k1 = nnz1 + x_len;
    let k2 = nnz2 + y_len;
    let e1 = p1_rows.len() + p1_cols.len();
    let e2 = p2_rows.len() + p2_cols.len();
    let side = if (k1, e1) <= (k2, e2) { PartSide::Reached } else { PartSide::Unreached };
    let (rows, cols, part_nnz) = match side {
        PartSide::Reached => (std::mem::take(&mut p1_rows), std::mem::take(&mut p1_cols), k1),
        PartSide::Unreached => (std::mem::take(&mut p2_rows), std::mem::take(&mut p2_cols), k2),
    };
    let matrix = core.submatrix(&rows, &cols).map_err(|e| SearchError::Internal(e.to_string()))?;
    debug_assert_eq!(matrix.nnz(), part_nnz);
    Ok(Part {
        matrix,
        rows,
        cols,
        side,
        separation: Separation {
            rows1,
            cols1,
            rows2,
            cols2,
            block: block.map(|(x, y)| (x.to_vec(), y.to_vec())),
            representatives,
        },
        core_nnz: core.nnz(),
        part_nnz,
    })
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    let at = v.partition_point(|&y| y < x);
    v.insert(at, x);
}
