//! Maximal sequences of SP-reductions.
//!
//! [`reduce`] processes a queue of candidate elements. A dequeued element with
//! no nonzeros is a zero reduction, one with a single nonzero is a unit
//! reduction, and otherwise the hash tables are asked for an element with the
//! same vector (or its negation, for ternary matrices). Whenever a nonzero
//! `{e, f}` is deleted, `f` changes and goes back into the queue.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hashing::{vectors_match, ElementHashes, Sign, WeightMode};
use crate::matrix::{Element, Mode, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    Zero,
    Unit { partner: Element },
    Copy { representative: Element, sign: Sign },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Reduction {
    pub element: Element,
    pub kind: ReductionKind,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ReductionKind::Zero => write!(f, "{}: zero", self.element),
            ReductionKind::Unit { partner } => write!(f, "{}: unit at {}", self.element, partner),
            ReductionKind::Copy { representative, sign: Sign::Plus } => {
                write!(f, "{}: copy of {}", self.element, representative)
            }
            ReductionKind::Copy { representative, sign: Sign::Minus } => {
                write!(f, "{}: negated copy of {}", self.element, representative)
            }
        }
    }
}

/// Order in which the initial queue is filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QueueOrder {
    /// Rows then columns, each by increasing index.
    #[default]
    Fifo,
    /// A seeded random permutation of all elements. Used to test order invariance.
    Shuffled { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ReduceOptions {
    pub weights: WeightMode,
    pub queue_order: QueueOrder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReduceOutcome {
    pub reductions: Vec<Reduction>,
    /// Main-loop iterations performed.
    pub iterations: usize,
    /// `m + n + k` of the input, an upper bound for `iterations`.
    pub iteration_bound: usize,
    pub remaining_rows: Vec<usize>,
    pub remaining_cols: Vec<usize>,
}

impl ReduceOutcome {
    /// Whether every element was reduced.
    pub fn is_series_parallel(&self) -> bool {
        self.remaining_rows.is_empty() && self.remaining_cols.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("{element} is out of range for a {rows}x{cols} matrix")]
    OutOfRange { element: Element, rows: usize, cols: usize },
    #[error("{element} was already removed")]
    AlreadyRemoved { element: Element },
    #[error("{element} has {count} nonzeros, a zero reduction needs none")]
    NotZero { element: Element, count: usize },
    #[error("{element} has {count} nonzeros, a unit reduction needs exactly one")]
    NotUnit { element: Element, count: usize },
    #[error("the nonzero of {element} is not at {partner}")]
    WrongPartner { element: Element, partner: Element },
    #[error("{element} and {representative} are not of the same kind")]
    KindMismatch { element: Element, representative: Element },
    #[error("{element} cannot be a copy of itself")]
    SelfCopy { element: Element },
    #[error("representative {representative} was already removed")]
    RepresentativeRemoved { representative: Element },
    #[error("negated copies are not allowed in binary mode")]
    NegatedInBinary,
    #[error("{element} is not a {sign} copy of {representative}")]
    NotACopy { element: Element, representative: Element, sign: SignName },
}

/// Human-readable sign for error messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignName(pub Sign);

impl fmt::Display for SignName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            Sign::Plus => "positive",
            Sign::Minus => "negated",
        })
    }
}

/// Checks that `reduction` is applicable to `matrix` and applies it: all live
/// nonzeros of the element are deleted and the element is flagged removed.
pub fn replay_step(matrix: &mut SparseMatrix, reduction: &Reduction) -> Result<(), ReplayError> {
    let e = reduction.element;
    let in_range = |x: Element| matrix.contains(x);
    if !in_range(e) {
        return Err(ReplayError::OutOfRange { element: e, rows: matrix.rows(), cols: matrix.cols() });
    }
    if matrix.is_removed(e) {
        return Err(ReplayError::AlreadyRemoved { element: e });
    }
    let count = matrix.count(e);
    match reduction.kind {
        ReductionKind::Zero => {
            if count != 0 {
                return Err(ReplayError::NotZero { element: e, count });
            }
        }
        ReductionKind::Unit { partner } => {
            if partner.is_row() == e.is_row() || !in_range(partner) {
                return Err(ReplayError::WrongPartner { element: e, partner });
            }
            if count != 1 {
                return Err(ReplayError::NotUnit { element: e, count });
            }
            let (_, at, _) = matrix.entries(e).next().expect("count is one");
            if at != partner.index() {
                return Err(ReplayError::WrongPartner { element: e, partner });
            }
        }
        ReductionKind::Copy { representative, sign } => {
            if representative.is_row() != e.is_row() {
                return Err(ReplayError::KindMismatch { element: e, representative });
            }
            if !in_range(representative) {
                return Err(ReplayError::OutOfRange {
                    element: representative,
                    rows: matrix.rows(),
                    cols: matrix.cols(),
                });
            }
            if representative == e {
                return Err(ReplayError::SelfCopy { element: e });
            }
            if matrix.is_removed(representative) {
                return Err(ReplayError::RepresentativeRemoved { representative });
            }
            if sign == Sign::Minus && matrix.mode() == Mode::Binary {
                return Err(ReplayError::NegatedInBinary);
            }
            let matches = match vectors_match(matrix, e, representative) {
                Some(s) => s == sign || count == 0,
                None => false,
            };
            if !matches {
                return Err(ReplayError::NotACopy { element: e, representative, sign: SignName(sign) });
            }
        }
    }
    matrix.remove_element(e, |_, _| {});
    Ok(())
}

/// Applies a maximal sequence of SP-reductions to `matrix` in place and
/// returns it. Afterwards the live part of `matrix` is its SP-reduced core.
pub fn reduce(matrix: &mut SparseMatrix, options: &ReduceOptions) -> ReduceOutcome {
    let (m, n) = (matrix.rows(), matrix.cols());
    let iteration_bound = m + n + matrix.nnz();
    let mut lists = Lists::new(matrix);
    let mut hashes = ElementHashes::from_slices(
        matrix.mode(),
        options.weights,
        (m, n),
        |r| lists.vector(Element::Row(r)),
        |c| lists.vector(Element::Column(c)),
    );

    let mut initial: Vec<Element> =
        matrix.live_rows().map(Element::Row).chain(matrix.live_cols().map(Element::Column)).collect();
    if let QueueOrder::Shuffled { seed } = options.queue_order {
        initial.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut queue = VecDeque::with_capacity(initial.len());
    for e in initial {
        lists.enqueue(e, &mut queue);
    }

    let mut reductions = Vec::new();
    let mut iterations = 0;

    while let Some(e) = queue.pop_front() {
        iterations += 1;
        lists.compact(e);
        let kind = match lists.len(e) {
            0 => ReductionKind::Zero,
            1 => ReductionKind::Unit { partner: e.cross(lists.vector(e).0[0] as usize) },
            _ => match hashes.find_equal_with(e, |candidate| lists.matches(e, candidate)) {
                Some((representative, sign)) => ReductionKind::Copy { representative, sign },
                None => {
                    hashes.insert(e);
                    continue;
                }
            },
        };
        reductions.push(Reduction { element: e, kind });
        lists.remove(e, &mut queue, |other, value| hashes.update_on_removal(other, e.index(), value));
        hashes.remove(e);
    }

    debug_assert!(iterations <= iteration_bound);
    matrix.remove_elements(&lists.rows.removed, &lists.cols.removed);
    ReduceOutcome {
        reductions,
        iterations,
        iteration_bound,
        remaining_rows: matrix.live_rows().collect(),
        remaining_cols: matrix.live_cols().collect(),
    }
}

/// Where the list of one element sits and how much of it is live.
#[derive(Clone, Copy, Debug)]
struct Span {
    start: u32,
    /// Length of the stored prefix, which may still hold entries whose
    /// crossing element has been removed since the last compaction.
    len: u32,
    /// Live entries in the stored prefix.
    live: u32,
    queued: bool,
}

/// Index lists of one orientation, stored back to back.
struct Side {
    spans: Vec<Span>,
    index: Vec<u32>,
    value: Vec<i8>,
    removed: Vec<bool>,
}

impl Side {
    fn new(lengths: &[u32], index: Vec<u32>, value: Vec<i8>, removed: Vec<bool>) -> Self {
        let mut start = 0;
        let spans = lengths
            .iter()
            .map(|&len| {
                let span = Span { start, len, live: len, queued: false };
                start += len;
                span
            })
            .collect();
        Self { spans, index, value, removed }
    }
}

/// Row and column lists for the reducer. Entries of removed elements are not
/// unlinked; a list drops them when its element is next dequeued. An element
/// only sits in a hash table while its list is compact, because every removal
/// of one of its entries also evicts it from the table.
struct Lists {
    mode: Mode,
    rows: Side,
    cols: Side,
}

impl Lists {
    fn new(matrix: &SparseMatrix) -> Self {
        let (m, n) = (matrix.rows(), matrix.cols());
        let mut row_len = vec![0u32; m];
        let mut col_len = vec![0u32; n];
        let mut row_index = Vec::with_capacity(matrix.nnz());
        let mut row_value = Vec::with_capacity(matrix.nnz());
        for (r, len) in row_len.iter_mut().enumerate() {
            for (_, c, v) in matrix.entries(Element::Row(r)) {
                row_index.push(c as u32);
                row_value.push(v);
                col_len[c] += 1;
            }
            *len = matrix.count(Element::Row(r)) as u32;
        }

        let mut cursor = Vec::with_capacity(n);
        let mut total = 0;
        for &len in &col_len {
            cursor.push(total);
            total += len as usize;
        }
        let mut col_index = vec![0u32; total];
        let mut col_value = vec![0i8; total];
        let mut k = 0;
        for (r, &len) in row_len.iter().enumerate() {
            for _ in 0..len {
                let c = row_index[k] as usize;
                col_index[cursor[c]] = r as u32;
                col_value[cursor[c]] = row_value[k];
                cursor[c] += 1;
                k += 1;
            }
        }
        let row_removed = (0..m).map(|r| matrix.is_removed(Element::Row(r))).collect();
        let col_removed = (0..n).map(|c| matrix.is_removed(Element::Column(c))).collect();
        Self {
            mode: matrix.mode(),
            rows: Side::new(&row_len, row_index, row_value, row_removed),
            cols: Side::new(&col_len, col_index, col_value, col_removed),
        }
    }

    fn sides(&mut self, e: Element) -> (&mut Side, &mut Side) {
        match e {
            Element::Row(_) => (&mut self.rows, &mut self.cols),
            Element::Column(_) => (&mut self.cols, &mut self.rows),
        }
    }

    fn side(&self, e: Element) -> &Side {
        if e.is_row() {
            &self.rows
        } else {
            &self.cols
        }
    }

    /// Puts `e` at the back of `queue` unless it is already waiting there.
    fn enqueue(&mut self, e: Element, queue: &mut VecDeque<Element>) {
        let span = &mut self.sides(e).0.spans[e.index()];
        if !span.queued {
            span.queued = true;
            queue.push_back(e);
        }
    }

    /// Takes `e` off the queue and drops entries whose crossing element is
    /// gone from its list.
    fn compact(&mut self, e: Element) {
        let (own, cross) = self.sides(e);
        let span = &mut own.spans[e.index()];
        span.queued = false;
        if span.live == span.len {
            return;
        }
        let start = span.start as usize;
        let mut kept = start;
        for k in start..start + span.len as usize {
            if !cross.removed[own.index[k] as usize] {
                own.index[kept] = own.index[k];
                own.value[kept] = own.value[k];
                kept += 1;
            }
        }
        span.len = (kept - start) as u32;
        debug_assert_eq!(span.len, span.live);
    }

    fn len(&self, e: Element) -> usize {
        self.side(e).spans[e.index()].len as usize
    }

    fn vector(&self, e: Element) -> (&[u32], &[i8]) {
        let side = self.side(e);
        let span = side.spans[e.index()];
        let range = span.start as usize..(span.start + span.len) as usize;
        (&side.index[range.clone()], &side.value[range])
    }

    /// Compares two compact lists like [`vectors_match`].
    fn matches(&self, a: Element, b: Element) -> Option<Sign> {
        let (ai, av) = self.vector(a);
        let (bi, bv) = self.vector(b);
        if ai != bi {
            return None;
        }
        let s = av.first().zip(bv.first()).map_or(1, |(x, y)| x * y);
        if av.iter().zip(bv).any(|(x, y)| x * y != s) {
            return None;
        }
        let sign = Sign::from_value(s)?;
        if sign == Sign::Minus && self.mode == Mode::Binary {
            return None;
        }
        Some(sign)
    }

    /// Removes `e`, whose list must be compact. Each crossing element loses
    /// an entry, is reported to `visit` together with the entry's value and
    /// goes back into `queue`.
    fn remove(&mut self, e: Element, queue: &mut VecDeque<Element>, mut visit: impl FnMut(Element, i8)) {
        let (own, cross) = self.sides(e);
        let span = &mut own.spans[e.index()];
        let start = span.start as usize;
        for k in start..start + span.len as usize {
            let f = own.index[k] as usize;
            let other = e.cross(f);
            let cross_span = &mut cross.spans[f];
            cross_span.live -= 1;
            if !cross_span.queued {
                cross_span.queued = true;
                queue.push_back(other);
            }
            visit(other, own.value[k]);
        }
        *span = Span { start: span.start, len: 0, live: 0, queued: false };
        own.removed[e.index()] = true;
    }
}
