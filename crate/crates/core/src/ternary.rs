//! Certifying recognition of ternary series-parallel matrices.
//!
//! Ternary SP-reductions also allow negated copies. If they do not empty the
//! matrix, the binary support of the remaining core is searched for a wheel.
//! When the support turns out to be series-parallel, some support copy
//! reduction must pair two vectors with equal support whose signs agree in
//! one position and disagree in another; those two positions give an `N₂`.

use std::time::{Duration, Instant};

use crate::hashing::vectors_match;
use crate::matrix::{DenseMatrix, Element, SparseMatrix};
use crate::reduce::{reduce, replay_step, ReduceOptions, Reduction, ReductionKind};
use crate::verify::{verify_n2, verify_wheel, WheelCheckMode};
use crate::wheel::{search_wheel, BinaryCertificate, SearchError, SearchStats, WheelCertificate};

/// The binary support of a matrix.
pub fn support(matrix: &SparseMatrix) -> SparseMatrix {
    matrix.support()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TernaryCertificate {
    SeriesParallel(Vec<Reduction>),
    /// A wheel in the support; `values` is the signed submatrix at
    /// `wheel.rows × wheel.cols`.
    SignedWheel {
        reductions: Vec<Reduction>,
        wheel: WheelCertificate,
        values: DenseMatrix,
        cycle_sign_product: i8,
    },
    /// A 2×2 submatrix with four nonzeros and determinant ±2.
    N2 {
        reductions: Vec<Reduction>,
        rows: [usize; 2],
        cols: [usize; 2],
        values: [[i8; 2]; 2],
    },
}

impl TernaryCertificate {
    pub fn is_series_parallel(&self) -> bool {
        matches!(self, TernaryCertificate::SeriesParallel(_))
    }

    pub fn reductions(&self) -> &[Reduction] {
        match self {
            TernaryCertificate::SeriesParallel(r)
            | TernaryCertificate::SignedWheel { reductions: r, .. }
            | TernaryCertificate::N2 { reductions: r, .. } => r,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TernaryStats {
    pub reduce_time: Duration,
    pub wheel_search_time: Duration,
    pub n2_search_time: Duration,
    /// Statistics of the support search, if one ran.
    pub support_search: Option<SearchStats>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TernarySearch {
    pub certificate: TernaryCertificate,
    pub stats: TernaryStats,
}

/// Decides whether `matrix` is ternary series-parallel and returns a
/// certificate either way.
pub fn certify_ternary(matrix: &SparseMatrix, options: &ReduceOptions) -> Result<TernarySearch, SearchError> {
    let mut stats = TernaryStats::default();
    let start = Instant::now();
    let mut work = matrix.clone();
    let outcome = reduce(&mut work, options);
    stats.reduce_time = start.elapsed();
    if outcome.is_series_parallel() {
        return Ok(TernarySearch { certificate: TernaryCertificate::SeriesParallel(outcome.reductions), stats });
    }
    let reductions = outcome.reductions;

    let start = Instant::now();
    let (core, row_map, col_map) = work.compact();
    let supp = core.support();
    let search = search_wheel(&supp, options)?;
    stats.wheel_search_time = start.elapsed();
    stats.support_search = Some(search.stats);
    let support_reductions = match search.certificate {
        BinaryCertificate::Wheel { wheel, .. } => {
            let rows: Vec<usize> = wheel.rows.iter().map(|&i| row_map[i]).collect();
            let cols: Vec<usize> = wheel.cols.iter().map(|&j| col_map[j]).collect();
            let info = verify_wheel(matrix, &rows, &cols, WheelCheckMode::Support)
                .map_err(|e| SearchError::Internal(format!("signed wheel rejected: {e}")))?;
            let values = matrix.dense_submatrix(&rows, &cols).expect("verified indices");
            let wheel = WheelCertificate { rows, cols, kind: info.kind };
            let certificate = TernaryCertificate::SignedWheel {
                reductions,
                wheel,
                values,
                cycle_sign_product: info.cycle_sign_product,
            };
            return Ok(TernarySearch { certificate, stats });
        }
        BinaryCertificate::SeriesParallel(r) => r,
    };

    let start = Instant::now();
    let (e, partner) = first_sign_conflict(&core, &supp, &support_reductions)?;
    let (mut same, mut opposite) = (None, None);
    let left = core.vector(e);
    let right = core.vector(partner);
    for (&(f, u), &(g, v)) in left.iter().zip(&right) {
        debug_assert_eq!(f, g);
        if u == v {
            same.get_or_insert(f);
        } else {
            opposite.get_or_insert(f);
        }
    }
    let (f, f_prime) =
        same.zip(opposite).ok_or_else(|| SearchError::Internal("conflicting copy has no sign disagreement".into()))?;
    let (rows, cols) = match e {
        Element::Row(r) => ([row_map[r], row_map[partner.index()]], [col_map[f], col_map[f_prime]]),
        Element::Column(c) => ([row_map[f], row_map[f_prime]], [col_map[c], col_map[partner.index()]]),
    };
    verify_n2(matrix, rows, cols).map_err(|err| SearchError::Internal(format!("N2 rejected: {err}")))?;
    let values = [
        [matrix.get(rows[0], cols[0]), matrix.get(rows[0], cols[1])],
        [matrix.get(rows[1], cols[0]), matrix.get(rows[1], cols[1])],
    ];
    stats.n2_search_time = start.elapsed();
    Ok(TernarySearch { certificate: TernaryCertificate::N2 { reductions, rows, cols, values }, stats })
}

/// Replays the support reductions on copies of the support and of the signed
/// core in lockstep and returns the first copy pair that is not a valid
/// signed copy.
fn first_sign_conflict(
    core: &SparseMatrix,
    supp: &SparseMatrix,
    support_reductions: &[Reduction],
) -> Result<(Element, Element), SearchError> {
    let mut signed = core.clone();
    let mut plain = supp.clone();
    for step in support_reductions {
        let signed_step = match step.kind {
            ReductionKind::Copy { representative, .. } => match vectors_match(&signed, step.element, representative) {
                Some(sign) => Reduction { element: step.element, kind: ReductionKind::Copy { representative, sign } },
                None => return Ok((step.element, representative)),
            },
            _ => *step,
        };
        replay_step(&mut plain, step).map_err(|e| SearchError::Internal(e.to_string()))?;
        replay_step(&mut signed, &signed_step).map_err(|e| SearchError::Internal(e.to_string()))?;
    }
    Err(SearchError::Internal("support reductions are all valid signed reductions".into()))
}

/// Product of the entries of `matrix[rows, cols]` along its wheel cycle.
pub fn cycle_sign_product(matrix: &SparseMatrix, rows: &[usize], cols: &[usize]) -> Option<i8> {
    verify_wheel(matrix, rows, cols, WheelCheckMode::Support).ok().map(|info| info.cycle_sign_product)
}
