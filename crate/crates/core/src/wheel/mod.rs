//! Certifying recognition of binary series-parallel matrices.
//!
//! After SP-reduction, a non-series-parallel matrix leaves a nonempty core in
//! which every row and column has at least two nonzeros. [`search_wheel`]
//! finds a wheel submatrix there: a chordless cycle of length at least 6 in
//! the bipartite graph is an `M_ℓ`; a 4-cycle is grown to a maximal all-ones
//! block and a shortest path around it yields an `M_ℓ′`; if no such path
//! exists, the core is split along a 2-separation and the search continues on
//! the part with fewer nonzeros.

pub mod bipartite;
pub mod separation;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::matrix::{DenseMatrix, Element, Mode, SparseMatrix};
use crate::reduce::{reduce, ReduceOptions, ReduceOutcome, Reduction};
use crate::verify::{verify_wheel, WheelCheckMode, WheelRejection};

pub use bipartite::{find_crossing_path, find_shortest_cycle, grow_all_ones, CrossingSearch, CycleSearch};
pub use separation::{decompose, Part, PartSide, Separation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WheelKind {
    /// `M_ℓ`: the bipartite graph is one chordless cycle.
    Cycle,
    /// `M_ℓ′`: `M_ℓ` plus one entry closing a 4-cycle.
    CycleWithChordBlock,
}

/// A wheel submatrix given by row and column indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WheelCertificate {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub kind: WheelKind,
}

impl WheelCertificate {
    pub fn order(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("wheel search needs a binary matrix")]
    NotBinary,
    #[error("the reduced core is empty")]
    EmptyCore,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinaryCertificate {
    /// All `m + n` elements were reduced.
    SeriesParallel(Vec<Reduction>),
    /// The maximal reduction sequence of the input and a wheel in original indices.
    Wheel { reductions: Vec<Reduction>, wheel: WheelCertificate },
}

/// One run of the reducer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReduceRun {
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub iterations: usize,
    pub iteration_bound: usize,
}

/// One split of a core along a separation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecompositionStep {
    pub core_nnz: usize,
    pub part_nnz: usize,
    pub core_elements: usize,
    pub part_elements: usize,
    pub disconnected: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub reduce_time: Duration,
    pub search_time: Duration,
    pub reduce_runs: Vec<ReduceRun>,
    pub decompositions: Vec<DecompositionStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WheelSearch {
    pub certificate: BinaryCertificate,
    pub stats: SearchStats,
}

fn reduce_timed(matrix: &mut SparseMatrix, options: &ReduceOptions, stats: &mut SearchStats) -> ReduceOutcome {
    let (rows, cols, nnz) = (matrix.rows(), matrix.cols(), matrix.nnz());
    let start = Instant::now();
    let outcome = reduce(matrix, options);
    stats.reduce_time += start.elapsed();
    stats.reduce_runs.push(ReduceRun {
        rows,
        cols,
        nnz,
        iterations: outcome.iterations,
        iteration_bound: outcome.iteration_bound,
    });
    outcome
}

/// Decides whether a binary matrix is series-parallel and returns either the
/// reductions or a wheel submatrix that passed [`verify_wheel`] on `matrix`.
pub fn search_wheel(matrix: &SparseMatrix, options: &ReduceOptions) -> Result<WheelSearch, SearchError> {
    if matrix.mode() != Mode::Binary {
        return Err(SearchError::NotBinary);
    }
    let started = Instant::now();
    let mut stats = SearchStats::default();
    let mut work = matrix.clone();
    let outcome = reduce_timed(&mut work, options, &mut stats);
    if outcome.is_series_parallel() {
        stats.search_time = started.elapsed().saturating_sub(stats.reduce_time);
        return Ok(WheelSearch { certificate: BinaryCertificate::SeriesParallel(outcome.reductions), stats });
    }

    let (mut core, mut row_map, mut col_map) = work.compact();
    let local = loop {
        let part = match find_shortest_cycle(&core)? {
            CycleSearch::Cycle(cycle) if cycle.len() >= 6 => break certificate_from_cycle(&cycle),
            CycleSearch::Cycle(cycle) => {
                let (seed_rows, seed_cols) = four_cycle_seed(&cycle);
                let (x, y) = grow_all_ones(&core, seed_rows, seed_cols)?;
                match find_crossing_path(&core, &x, &y) {
                    CrossingSearch::Path(path) => break assemble_wheel_prime(&core, &path, &x, &y)?,
                    CrossingSearch::Reach(reach) => decompose(&core, &reach, Some((&x, &y)))?,
                }
            }
            CycleSearch::DisconnectedReach(reach) => decompose(&core, &reach, None)?,
        };
        stats.decompositions.push(DecompositionStep {
            core_nnz: part.core_nnz,
            part_nnz: part.part_nnz,
            core_elements: core.rows() + core.cols(),
            part_elements: part.rows.len() + part.cols.len(),
            disconnected: part.separation.block.is_none(),
        });
        if 2 * part.part_nnz > part.core_nnz {
            return Err(SearchError::Internal(format!("part has {} of {} nonzeros", part.part_nnz, part.core_nnz)));
        }
        let mut next = part.matrix;
        if reduce_timed(&mut next, options, &mut stats).is_series_parallel() {
            return Err(SearchError::Internal("a separation part is series-parallel".into()));
        }
        let (c, rows, cols) = next.compact();
        row_map = rows.iter().map(|&i| row_map[part.rows[i]]).collect();
        col_map = cols.iter().map(|&j| col_map[part.cols[j]]).collect();
        core = c;
    };

    let wheel = WheelCertificate {
        rows: local.rows.iter().map(|&i| row_map[i]).collect(),
        cols: local.cols.iter().map(|&j| col_map[j]).collect(),
        kind: local.kind,
    };
    check_certificate(matrix, &wheel)?;
    stats.search_time = started.elapsed().saturating_sub(stats.reduce_time);
    Ok(WheelSearch { certificate: BinaryCertificate::Wheel { reductions: outcome.reductions, wheel }, stats })
}

fn check_certificate(matrix: &SparseMatrix, wheel: &WheelCertificate) -> Result<(), SearchError> {
    match verify_wheel(matrix, &wheel.rows, &wheel.cols, WheelCheckMode::ExactBinary) {
        Ok(info) if info.kind == wheel.kind => Ok(()),
        Ok(info) => Err(SearchError::Internal(format!("certificate is {:?}, expected {:?}", info.kind, wheel.kind))),
        Err(e) => Err(SearchError::Internal(format!("certificate rejected: {e}"))),
    }
}

fn certificate_from_cycle(cycle: &[Element]) -> WheelCertificate {
    let rows = cycle.iter().filter(|e| e.is_row()).map(|e| e.index()).collect();
    let cols = cycle.iter().filter(|e| !e.is_row()).map(|e| e.index()).collect();
    WheelCertificate { rows, cols, kind: WheelKind::Cycle }
}

fn four_cycle_seed(cycle: &[Element]) -> ([usize; 2], [usize; 2]) {
    let mut rows = [0; 2];
    let mut cols = [0; 2];
    let (mut i, mut j) = (0, 0);
    for e in cycle {
        match *e {
            Element::Row(r) => {
                rows[i] = r;
                i += 1;
            }
            Element::Column(c) => {
                cols[j] = c;
                j += 1;
            }
        }
    }
    rows.sort_unstable();
    cols.sort_unstable();
    (rows, cols)
}

/// Builds the `M_ℓ′` from a shortest path `x, c, …, r, y` around the maximal
/// all-ones block `X × Y`: its rows and columns plus the first row of `X`
/// that is zero in `c` and the first column of `Y` that is zero in `r`.
pub fn assemble_wheel_prime(
    core: &SparseMatrix,
    path: &[Element],
    x: &[usize],
    y: &[usize],
) -> Result<WheelCertificate, SearchError> {
    if path.len() < 4 || !path[0].is_row() || path[path.len() - 1].is_row() {
        return Err(SearchError::Internal("crossing path has the wrong shape".into()));
    }
    let c = path[1].index();
    let r = path[path.len() - 2].index();
    let r_prime = x
        .iter()
        .copied()
        .find(|&row| core.get(row, c) == 0)
        .ok_or_else(|| SearchError::Internal("block is not maximal at the path's first column".into()))?;
    let c_prime = y
        .iter()
        .copied()
        .find(|&col| core.get(r, col) == 0)
        .ok_or_else(|| SearchError::Internal("block is not maximal at the path's last row".into()))?;
    let mut rows: Vec<usize> = path.iter().filter(|e| e.is_row()).map(|e| e.index()).collect();
    let mut cols: Vec<usize> = path.iter().filter(|e| !e.is_row()).map(|e| e.index()).collect();
    rows.push(r_prime);
    cols.push(c_prime);
    let wheel = WheelCertificate { rows, cols, kind: WheelKind::CycleWithChordBlock };
    check_certificate(core, &wheel)?;
    Ok(wheel)
}

/// Shrinks an `M_ℓ′` with `ℓ ≥ 4` to the `M_{ℓ-1}` it contains by deleting
/// the other row and column of its all-ones 2×2 block. Other certificates
/// are returned unchanged. The result is a minimal non-series-parallel
/// submatrix.
pub fn minimalize_certificate(
    cert: &WheelCertificate,
    matrix: &SparseMatrix,
) -> Result<WheelCertificate, WheelRejection> {
    let info = verify_wheel(matrix, &cert.rows, &cert.cols, WheelCheckMode::Support)?;
    if info.kind == WheelKind::Cycle || info.order == 3 {
        return Ok(WheelCertificate { kind: info.kind, ..cert.clone() });
    }
    let sub = matrix.dense_submatrix(&cert.rows, &cert.cols).expect("certificate indices were verified");
    let l = info.order;
    let deg = |cells: &mut dyn Iterator<Item = i8>| cells.filter(|&v| v != 0).count();
    let branch_row = (0..l).find(|&i| deg(&mut (0..l).map(|j| sub.get(i, j))) == 3).expect("verified M_ℓ′");
    let branch_col = (0..l).find(|&j| deg(&mut (0..l).map(|i| sub.get(i, j))) == 3).expect("verified M_ℓ′");
    let (drop_row, drop_col) = (0..l)
        .filter(|&i| i != branch_row && sub.get(i, branch_col) != 0)
        .find_map(|i| {
            (0..l).find(|&j| j != branch_col && sub.get(branch_row, j) != 0 && sub.get(i, j) != 0).map(|j| (i, j))
        })
        .expect("verified M_ℓ′ contains a 2x2 all-nonzero block");
    let rows: Vec<usize> = cert.rows.iter().enumerate().filter(|&(i, _)| i != drop_row).map(|(_, &r)| r).collect();
    let cols: Vec<usize> = cert.cols.iter().enumerate().filter(|&(j, _)| j != drop_col).map(|(_, &c)| c).collect();
    let out = WheelCertificate { rows, cols, kind: WheelKind::Cycle };
    let check = verify_wheel(matrix, &out.rows, &out.cols, WheelCheckMode::Support)?;
    debug_assert_eq!(check.kind, WheelKind::Cycle);
    Ok(out)
}

/// `M_ℓ`: row 0 has ones in columns 0 and ℓ−1, row i ≥ 1 in columns i−1 and i.
pub fn wheel_matrix(l: usize) -> DenseMatrix {
    assert!(l >= 2);
    let mut d = DenseMatrix::zeros(l, l);
    d.set(0, 0, 1);
    d.set(0, l - 1, 1);
    for i in 1..l {
        d.set(i, i - 1, 1);
        d.set(i, i, 1);
    }
    d
}

/// `M_ℓ′`: `M_ℓ` with an extra one at row 0, column 1.
pub fn wheel_prime_matrix(l: usize) -> DenseMatrix {
    let mut d = wheel_matrix(l);
    d.set(0, 1, 1);
    d
}

/// A reduced matrix whose maximal all-ones block admits no crossing path.
#[cfg(test)]
pub(crate) fn fig3_matrix() -> DenseMatrix {
    DenseMatrix::from_rows(&[
        [1, 1, 1, 1, 0, 1, 0, 0, 1],
        [1, 1, 1, 1, 0, 1, 0, 0, 0],
        [1, 1, 1, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 1],
        [0, 0, 0, 0, 0, 0, 1, 0, 1],
        [1, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 1, 0, 0, 0, 0],
        [1, 1, 0, 0, 1, 0, 0, 0, 0],
    ])
}
