//! Mutable sparse ±1/0 matrix stored as a grid of doubly-linked nonzero lists.
//!
//! Every nonzero lives in an arena and is linked into the list of its row and
//! the list of its column. Both lists are kept in increasing cross-index order,
//! so traversing a row yields its nonzeros sorted by column. Removing a nonzero
//! unlinks it in constant time; entries are never renumbered. Elements (rows and
//! columns) can additionally be flagged as removed, which is how reductions mark
//! the part of the matrix that is gone.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

const NIL: u32 = u32::MAX;

/// Value domain of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Entries in {0, 1}.
    Binary,
    /// Entries in {-1, 0, 1}.
    Ternary,
}

impl Mode {
    /// Whether `value` is an admissible nonzero in this mode.
    pub fn admits(self, value: i8) -> bool {
        match self {
            Mode::Binary => value == 1,
            Mode::Ternary => value == 1 || value == -1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Binary => "binary",
            Mode::Ternary => "ternary",
        })
    }
}

/// A row or a column. Rows and columns are treated symmetrically throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Row(usize),
    Column(usize),
}

impl Element {
    pub fn index(self) -> usize {
        match self {
            Element::Row(i) | Element::Column(i) => i,
        }
    }

    pub fn is_row(self) -> bool {
        matches!(self, Element::Row(_))
    }

    /// The element of the opposite kind with the given index.
    pub fn cross(self, index: usize) -> Element {
        match self {
            Element::Row(_) => Element::Column(index),
            Element::Column(_) => Element::Row(index),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Row(i) => write!(f, "row {i}"),
            Element::Column(j) => write!(f, "column {j}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("triplet {position} at ({row}, {col}) breaks lexicographic order")]
    Unsorted { position: usize, row: usize, col: usize },
    #[error("triplet {position} duplicates coordinate ({row}, {col})")]
    Duplicate { position: usize, row: usize, col: usize },
    #[error("triplet {position}: row {row} out of range for {rows} rows")]
    RowOutOfRange { position: usize, row: usize, rows: usize },
    #[error("triplet {position}: column {col} out of range for {cols} columns")]
    ColumnOutOfRange { position: usize, col: usize, cols: usize },
    #[error("triplet {position} has value zero")]
    ZeroValue { position: usize },
    #[error("triplet {position}: value {value} is not allowed in {mode} mode")]
    ValueOutOfDomain { position: usize, value: i8, mode: Mode },
    #[error("no live nonzero at ({row}, {col})")]
    NotLive { row: usize, col: usize },
    #[error("{element} out of range for a {rows}x{cols} matrix")]
    ElementOutOfRange { element: Element, rows: usize, cols: usize },
    #[error("index list contains {index} twice")]
    DuplicateIndex { index: usize },
    #[error("matrix dimensions exceed the supported index range")]
    TooLarge,
}

/// Handle of a nonzero inside a [`SparseMatrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EntryId(u32);

#[derive(Clone, Debug)]
struct Entry {
    row: u32,
    col: u32,
    value: i8,
    live: bool,
    row_prev: u32,
    row_next: u32,
    col_prev: u32,
    col_next: u32,
}

/// Small dense matrix used for certificate-sized extractions and test inputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i8>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    /// Builds a matrix from row slices. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: i8) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| format!("{v:>2}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Sparse matrix over {-1, 0, 1} with O(1) nonzero removal and O(1) counts.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    mode: Mode,
    rows: usize,
    cols: usize,
    entries: Vec<Entry>,
    row_head: Vec<u32>,
    col_head: Vec<u32>,
    row_count: Vec<u32>,
    col_count: Vec<u32>,
    row_removed: Vec<bool>,
    col_removed: Vec<bool>,
    nnz: usize,
}

impl SparseMatrix {
    /// The all-zero `rows`×`cols` matrix.
    pub fn zeros(mode: Mode, rows: usize, cols: usize) -> Self {
        Self {
            mode,
            rows,
            cols,
            entries: Vec::new(),
            row_head: vec![NIL; rows],
            col_head: vec![NIL; cols],
            row_count: vec![0; rows],
            col_count: vec![0; cols],
            row_removed: vec![false; rows],
            col_removed: vec![false; cols],
            nnz: 0,
        }
    }

    /// Builds a matrix from triplets sorted lexicographically by (row, column).
    ///
    /// Runs in O(rows + cols + triplets). Rejects unsorted or duplicate
    /// coordinates, out-of-range indices and values outside the mode's domain.
    pub fn from_triplets(
        mode: Mode,
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, i8)],
    ) -> Result<Self, MatrixError> {
        if rows >= NIL as usize || cols >= NIL as usize || triplets.len() >= NIL as usize {
            return Err(MatrixError::TooLarge);
        }
        let mut matrix = Self::zeros(mode, rows, cols);
        matrix.entries.reserve_exact(triplets.len());
        let mut row_tail = vec![NIL; rows];
        let mut col_tail = vec![NIL; cols];
        let mut last: Option<(usize, usize)> = None;
        for (position, &(row, col, value)) in triplets.iter().enumerate() {
            if row >= rows {
                return Err(MatrixError::RowOutOfRange { position, row, rows });
            }
            if col >= cols {
                return Err(MatrixError::ColumnOutOfRange { position, col, cols });
            }
            if value == 0 {
                return Err(MatrixError::ZeroValue { position });
            }
            if !mode.admits(value) {
                return Err(MatrixError::ValueOutOfDomain { position, value, mode });
            }
            if let Some(prev) = last {
                if prev == (row, col) {
                    return Err(MatrixError::Duplicate { position, row, col });
                }
                if prev > (row, col) {
                    return Err(MatrixError::Unsorted { position, row, col });
                }
            }
            last = Some((row, col));

            let id = matrix.entries.len() as u32;
            matrix.entries.push(Entry {
                row: row as u32,
                col: col as u32,
                value,
                live: true,
                row_prev: row_tail[row],
                row_next: NIL,
                col_prev: col_tail[col],
                col_next: NIL,
            });
            match row_tail[row] {
                NIL => matrix.row_head[row] = id,
                tail => matrix.entries[tail as usize].row_next = id,
            }
            match col_tail[col] {
                NIL => matrix.col_head[col] = id,
                tail => matrix.entries[tail as usize].col_next = id,
            }
            row_tail[row] = id;
            col_tail[col] = id;
            matrix.row_count[row] += 1;
            matrix.col_count[col] += 1;
        }
        matrix.nnz = triplets.len();
        Ok(matrix)
    }

    pub fn from_dense(mode: Mode, dense: &DenseMatrix) -> Result<Self, MatrixError> {
        let mut triplets = Vec::new();
        for r in 0..dense.rows() {
            for c in 0..dense.cols() {
                let v = dense.get(r, c);
                if v != 0 {
                    triplets.push((r, c, v));
                }
            }
        }
        Self::from_triplets(mode, dense.rows(), dense.cols(), &triplets)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of live nonzeros.
    pub fn nnz(&self) -> usize {
        self.nnz
    }

    pub fn contains(&self, element: Element) -> bool {
        match element {
            Element::Row(r) => r < self.rows,
            Element::Column(c) => c < self.cols,
        }
    }

    pub(crate) fn check_element(&self, element: Element) -> Result<(), MatrixError> {
        if self.contains(element) {
            Ok(())
        } else {
            Err(MatrixError::ElementOutOfRange { element, rows: self.rows, cols: self.cols })
        }
    }

    /// Number of live nonzeros of a row or column.
    pub fn count(&self, element: Element) -> usize {
        match element {
            Element::Row(r) => self.row_count[r] as usize,
            Element::Column(c) => self.col_count[c] as usize,
        }
    }

    pub fn row_count(&self, row: usize) -> usize {
        self.row_count[row] as usize
    }

    pub fn col_count(&self, col: usize) -> usize {
        self.col_count[col] as usize
    }

    pub fn is_removed(&self, element: Element) -> bool {
        match element {
            Element::Row(r) => self.row_removed[r],
            Element::Column(c) => self.col_removed[c],
        }
    }

    /// Rows not flagged as removed, in increasing order.
    pub fn live_rows(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.rows).filter(|&r| !self.row_removed[r])
    }

    /// Columns not flagged as removed, in increasing order.
    pub fn live_cols(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cols).filter(|&c| !self.col_removed[c])
    }

    /// Number of elements not flagged as removed.
    pub fn live_elements(&self) -> usize {
        self.row_removed.iter().chain(&self.col_removed).filter(|&&r| !r).count()
    }

    fn head(&self, element: Element) -> u32 {
        match element {
            Element::Row(r) => self.row_head[r],
            Element::Column(c) => self.col_head[c],
        }
    }

    /// Live nonzeros of an element as `(entry, cross index, value)` in
    /// increasing cross-index order.
    pub fn entries(&self, element: Element) -> EntryIter<'_> {
        EntryIter { matrix: self, along_row: element.is_row(), cursor: self.head(element) }
    }

    /// The vector A(e): live nonzeros as `(cross index, value)`.
    pub fn vector(&self, element: Element) -> Vec<(usize, i8)> {
        self.entries(element).map(|(_, i, v)| (i, v)).collect()
    }

    /// Row, column and value of an entry.
    pub fn entry(&self, id: EntryId) -> (usize, usize, i8) {
        let e = &self.entries[id.0 as usize];
        (e.row as usize, e.col as usize, e.value)
    }

    pub fn is_live(&self, id: EntryId) -> bool {
        self.entries[id.0 as usize].live
    }

    /// Locates the live entry at (row, col) by scanning the shorter of the two lists.
    pub fn find_entry(&self, row: usize, col: usize) -> Option<EntryId> {
        if row >= self.rows || col >= self.cols {
            return None;
        }
        if self.row_count[row] <= self.col_count[col] {
            self.entries(Element::Row(row)).find(|&(_, c, _)| c == col).map(|(id, _, _)| id)
        } else {
            self.entries(Element::Column(col)).find(|&(_, r, _)| r == row).map(|(id, _, _)| id)
        }
    }

    /// Value at (row, col); zero where there is no live entry.
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.find_entry(row, col).map_or(0, |id| self.entries[id.0 as usize].value)
    }

    /// Unlinks a live entry from its row and column lists in constant time.
    pub fn remove_entry(&mut self, id: EntryId) -> Result<(), MatrixError> {
        let idx = id.0 as usize;
        let e = self.entries[idx].clone();
        if !e.live {
            return Err(MatrixError::NotLive { row: e.row as usize, col: e.col as usize });
        }
        match e.row_prev {
            NIL => self.row_head[e.row as usize] = e.row_next,
            p => self.entries[p as usize].row_next = e.row_next,
        }
        if e.row_next != NIL {
            self.entries[e.row_next as usize].row_prev = e.row_prev;
        }
        match e.col_prev {
            NIL => self.col_head[e.col as usize] = e.col_next,
            p => self.entries[p as usize].col_next = e.col_next,
        }
        if e.col_next != NIL {
            self.entries[e.col_next as usize].col_prev = e.col_prev;
        }
        let entry = &mut self.entries[idx];
        entry.live = false;
        entry.row_prev = NIL;
        entry.row_next = NIL;
        entry.col_prev = NIL;
        entry.col_next = NIL;
        self.row_count[e.row as usize] -= 1;
        self.col_count[e.col as usize] -= 1;
        self.nnz -= 1;
        Ok(())
    }

    /// Removes every nonzero of `element`, calling `visit(cross index, value)`
    /// for each one in list order, and flags the element as removed. Only
    /// the crossing lists are relinked since the element's own list goes away
    /// as a whole.
    pub(crate) fn remove_element(&mut self, element: Element, mut visit: impl FnMut(usize, i8)) {
        let along_row = element.is_row();
        let mut cur = self.head(element);
        while cur != NIL {
            let e = self.entries[cur as usize].clone();
            if along_row {
                match e.col_prev {
                    NIL => self.col_head[e.col as usize] = e.col_next,
                    p => self.entries[p as usize].col_next = e.col_next,
                }
                if e.col_next != NIL {
                    self.entries[e.col_next as usize].col_prev = e.col_prev;
                }
                self.col_count[e.col as usize] -= 1;
            } else {
                match e.row_prev {
                    NIL => self.row_head[e.row as usize] = e.row_next,
                    p => self.entries[p as usize].row_next = e.row_next,
                }
                if e.row_next != NIL {
                    self.entries[e.row_next as usize].row_prev = e.row_prev;
                }
                self.row_count[e.row as usize] -= 1;
            }
            let entry = &mut self.entries[cur as usize];
            entry.live = false;
            entry.row_prev = NIL;
            entry.row_next = NIL;
            entry.col_prev = NIL;
            entry.col_next = NIL;
            self.nnz -= 1;
            cur = if along_row { e.row_next } else { e.col_next };
            visit(if along_row { e.col as usize } else { e.row as usize }, e.value);
        }
        match element {
            Element::Row(r) => {
                self.row_head[r] = NIL;
                self.row_count[r] = 0;
                self.row_removed[r] = true;
            }
            Element::Column(c) => {
                self.col_head[c] = NIL;
                self.col_count[c] = 0;
                self.col_removed[c] = true;
            }
        }
    }

    /// Flags every row `r` with `rows[r]` and column `c` with `cols[c]` as
    /// removed together with their nonzeros, rebuilding the storage from what
    /// survives.
    pub(crate) fn remove_elements(&mut self, rows: &[bool], cols: &[bool]) {
        let mut triplets = Vec::new();
        for r in (0..self.rows).filter(|&r| !rows[r]) {
            triplets.extend(self.entries(Element::Row(r)).filter(|&(_, c, _)| !cols[c]).map(|(_, c, v)| (r, c, v)));
        }
        let mut rebuilt =
            Self::from_triplets(self.mode, self.rows, self.cols, &triplets).expect("surviving entries are valid");
        for (flag, (&was, &now)) in rebuilt.row_removed.iter_mut().zip(self.row_removed.iter().zip(rows)) {
            *flag = was || now;
        }
        for (flag, (&was, &now)) in rebuilt.col_removed.iter_mut().zip(self.col_removed.iter().zip(cols)) {
            *flag = was || now;
        }
        *self = rebuilt;
    }

    /// Removes the nonzero at (row, col) and returns its value.
    pub fn remove_nonzero(&mut self, row: usize, col: usize) -> Result<i8, MatrixError> {
        let id = self.find_entry(row, col).ok_or(MatrixError::NotLive { row, col })?;
        let value = self.entries[id.0 as usize].value;
        self.remove_entry(id)?;
        Ok(value)
    }

    /// Dense copy of a certificate-sized submatrix, rows and columns in the given order.
    pub fn dense_submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<DenseMatrix, MatrixError> {
        let row_pos = positions(rows, self.rows, Element::Row, self)?;
        let col_pos = positions(cols, self.cols, Element::Column, self)?;
        let mut out = DenseMatrix::zeros(rows.len(), cols.len());
        for (&r, &i) in &row_pos {
            for (_, c, v) in self.entries(Element::Row(r)) {
                if let Some(&j) = col_pos.get(&c) {
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// All live nonzeros as `(row, column, value)` in storage order, which
    /// is cheaper than walking the lists but has no particular order.
    pub fn live_entries(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.entries.iter().filter(|e| e.live).map(|e| (e.row as usize, e.col as usize, e.value))
    }

    /// All live nonzeros in row-major order.
    pub fn to_triplets(&self) -> Vec<(usize, usize, i8)> {
        let mut out = Vec::with_capacity(self.nnz);
        for r in 0..self.rows {
            out.extend(self.entries(Element::Row(r)).map(|(_, c, v)| (r, c, v)));
        }
        out
    }

    /// Dense copy of the whole matrix. Only meant for small matrices.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.to_triplets() {
            out.set(r, c, v);
        }
        out
    }

    /// A fresh matrix on the given rows and columns (local index `i` is
    /// `rows[i]` here). Removal flags are not carried over.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<SparseMatrix, MatrixError> {
        let mut col_pos = vec![NIL; self.cols];
        for (j, &c) in cols.iter().enumerate() {
            self.check_element(Element::Column(c))?;
            if col_pos[c] != NIL {
                return Err(MatrixError::DuplicateIndex { index: c });
            }
            col_pos[c] = j as u32;
        }
        let cols_sorted = cols.windows(2).all(|w| w[0] < w[1]);
        let mut seen_rows = vec![false; self.rows];
        let mut triplets = Vec::new();
        let mut scratch = Vec::new();
        for (i, &r) in rows.iter().enumerate() {
            self.check_element(Element::Row(r))?;
            if std::mem::replace(&mut seen_rows[r], true) {
                return Err(MatrixError::DuplicateIndex { index: r });
            }
            scratch.clear();
            scratch.extend(
                self.entries(Element::Row(r))
                    .filter(|&(_, c, _)| col_pos[c] != NIL)
                    .map(|(_, c, v)| (i, col_pos[c] as usize, v)),
            );
            if !cols_sorted {
                scratch.sort_unstable_by_key(|&(_, j, _)| j);
            }
            triplets.extend_from_slice(&scratch);
        }
        SparseMatrix::from_triplets(self.mode, rows.len(), cols.len(), &triplets)
    }

    /// Materializes the non-removed part with dense renumbering.
    ///
    /// Returns the compacted matrix together with the maps from its row and
    /// column indices back to this matrix.
    pub fn compact(&self) -> (SparseMatrix, Vec<usize>, Vec<usize>) {
        let rows: Vec<usize> = self.live_rows().collect();
        let cols: Vec<usize> = self.live_cols().collect();
        let core = self.submatrix(&rows, &cols).expect("live indices are valid and distinct");
        (core, rows, cols)
    }

    /// The binary support: same pattern, every nonzero replaced by 1.
    pub fn support(&self) -> SparseMatrix {
        let mut out = self.clone();
        out.mode = Mode::Binary;
        for e in &mut out.entries {
            e.value = 1;
        }
        out
    }

    /// Checks the linked-list and count invariants by full traversal.
    pub fn validate(&self) -> Result<(), String> {
        let mut row_sum = 0;
        for r in 0..self.rows {
            let mut len = 0;
            let mut prev: Option<usize> = None;
            for (id, c, v) in self.entries(Element::Row(r)) {
                let e = &self.entries[id.0 as usize];
                if !e.live || e.row as usize != r {
                    return Err(format!("row {r} reaches a foreign or dead entry"));
                }
                if prev.is_some_and(|p| p >= c) {
                    return Err(format!("row {r} is not sorted"));
                }
                if !self.mode.admits(v) {
                    return Err(format!("row {r} holds inadmissible value {v}"));
                }
                prev = Some(c);
                len += 1;
            }
            if len != self.row_count[r] as usize {
                return Err(format!("row {r}: count {} but {len} reachable", self.row_count[r]));
            }
            if self.row_removed[r] && len != 0 {
                return Err(format!("removed row {r} still has nonzeros"));
            }
            row_sum += len;
        }
        let mut col_sum = 0;
        for c in 0..self.cols {
            let mut len = 0;
            let mut prev: Option<usize> = None;
            for (id, r, _) in self.entries(Element::Column(c)) {
                let e = &self.entries[id.0 as usize];
                if !e.live || e.col as usize != c {
                    return Err(format!("column {c} reaches a foreign or dead entry"));
                }
                if prev.is_some_and(|p| p >= r) {
                    return Err(format!("column {c} is not sorted"));
                }
                prev = Some(r);
                len += 1;
            }
            if len != self.col_count[c] as usize {
                return Err(format!("column {c}: count {} but {len} reachable", self.col_count[c]));
            }
            if self.col_removed[c] && len != 0 {
                return Err(format!("removed column {c} still has nonzeros"));
            }
            col_sum += len;
        }
        if row_sum != self.nnz || col_sum != self.nnz {
            return Err(format!("nnz {} but rows sum to {row_sum}, columns to {col_sum}", self.nnz));
        }
        Ok(())
    }
}

fn positions(
    indices: &[usize],
    bound: usize,
    make: fn(usize) -> Element,
    matrix: &SparseMatrix,
) -> Result<HashMap<usize, usize>, MatrixError> {
    let mut map = HashMap::with_capacity(indices.len());
    for (pos, &i) in indices.iter().enumerate() {
        if i >= bound {
            return Err(MatrixError::ElementOutOfRange { element: make(i), rows: matrix.rows, cols: matrix.cols });
        }
        if map.insert(i, pos).is_some() {
            return Err(MatrixError::DuplicateIndex { index: i });
        }
    }
    Ok(map)
}

/// Iterator over the live nonzeros of one row or column.
pub struct EntryIter<'a> {
    matrix: &'a SparseMatrix,
    along_row: bool,
    cursor: u32,
}

impl Iterator for EntryIter<'_> {
    type Item = (EntryId, usize, i8);

    fn next(&mut self) -> Option<Self::Item> {
        if self.cursor == NIL {
            return None;
        }
        let id = self.cursor;
        let e = &self.matrix.entries[id as usize];
        if self.along_row {
            self.cursor = e.row_next;
            Some((EntryId(id), e.col as usize, e.value))
        } else {
            self.cursor = e.col_next;
            Some((EntryId(id), e.row as usize, e.value))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_ones_2x2() -> SparseMatrix {
        SparseMatrix::from_triplets(Mode::Binary, 2, 2, &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]).unwrap()
    }

    fn m3() -> SparseMatrix {
        SparseMatrix::from_triplets(
            Mode::Binary,
            3,
            3,
            &[(0, 0, 1), (0, 2, 1), (1, 0, 1), (1, 1, 1), (2, 1, 1), (2, 2, 1)],
        )
        .unwrap()
    }

    fn n2() -> SparseMatrix {
        SparseMatrix::from_triplets(Mode::Ternary, 2, 2, &[(0, 0, -1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]).unwrap()
    }

    #[test]
    fn builds_from_triplets() {
        let a = all_ones_2x2();
        assert_eq!(a.nnz(), 4);
        let m = m3();
        assert_eq!((0..3).map(|r| m.row_count(r)).collect::<Vec<_>>(), [2, 2, 2]);
        assert_eq!((0..3).map(|c| m.col_count(c)).collect::<Vec<_>>(), [2, 2, 2]);
        let n = n2();
        assert_eq!(n.to_dense(), DenseMatrix::from_rows(&[[-1, 1], [1, 1]]));
        m.validate().unwrap();
    }

    #[test]
    fn rejects_bad_triplets() {
        let e = SparseMatrix::from_triplets(Mode::Binary, 2, 2, &[(0, 1, 1), (0, 0, 1)]).unwrap_err();
        assert_eq!(e, MatrixError::Unsorted { position: 1, row: 0, col: 0 });
        let e = SparseMatrix::from_triplets(Mode::Binary, 2, 2, &[(0, 1, 1), (0, 1, 1)]).unwrap_err();
        assert_eq!(e, MatrixError::Duplicate { position: 1, row: 0, col: 1 });
        let e = SparseMatrix::from_triplets(Mode::Binary, 2, 2, &[(2, 0, 1)]).unwrap_err();
        assert!(matches!(e, MatrixError::RowOutOfRange { row: 2, .. }));
        let e = SparseMatrix::from_triplets(Mode::Binary, 2, 2, &[(0, 5, 1)]).unwrap_err();
        assert!(matches!(e, MatrixError::ColumnOutOfRange { col: 5, .. }));
        let e = SparseMatrix::from_triplets(Mode::Ternary, 2, 2, &[(0, 0, 0)]).unwrap_err();
        assert_eq!(e, MatrixError::ZeroValue { position: 0 });
        let e = SparseMatrix::from_triplets(Mode::Binary, 2, 2, &[(0, 0, -1)]).unwrap_err();
        assert!(matches!(e, MatrixError::ValueOutOfDomain { value: -1, .. }));
        let e = SparseMatrix::from_triplets(Mode::Ternary, 2, 2, &[(0, 0, 2)]).unwrap_err();
        assert!(matches!(e, MatrixError::ValueOutOfDomain { value: 2, .. }));
    }

    #[test]
    fn removal_updates_counts() {
        let mut a = all_ones_2x2();
        assert_eq!(a.remove_nonzero(0, 0), Ok(1));
        assert_eq!((a.row_count(0), a.row_count(1)), (1, 2));
        assert_eq!((a.col_count(0), a.col_count(1)), (1, 2));
        assert_eq!(a.nnz(), 3);
        for (r, c) in [(0, 1), (1, 0), (1, 1)] {
            a.remove_nonzero(r, c).unwrap();
        }
        assert_eq!(a.nnz(), 0);
        assert!((0..2).all(|i| a.row_count(i) == 0 && a.col_count(i) == 0));
        a.validate().unwrap();
    }

    #[test]
    fn removing_a_zero_is_an_error() {
        let mut m = m3();
        assert_eq!(m.remove_nonzero(0, 1), Err(MatrixError::NotLive { row: 0, col: 1 }));
        assert_eq!(m.col_count(1), 2);
        let id = m.find_entry(0, 0).unwrap();
        m.remove_entry(id).unwrap();
        assert!(m.remove_entry(id).is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(m3().vector(Element::Row(0)), [(0, 1), (2, 1)]);
        let z = SparseMatrix::zeros(Mode::Binary, 3, 4);
        assert!(z.vector(Element::Row(2)).is_empty());
        assert!(z.vector(Element::Column(3)).is_empty());
        assert_eq!(n2().vector(Element::Column(0)), [(0, -1), (1, 1)]);
    }

    #[test]
    fn dense_extraction() {
        let m = m3();
        assert_eq!(m.dense_submatrix(&[0, 1, 2], &[0, 1, 2]).unwrap(), m.to_dense());
        assert_eq!(m.dense_submatrix(&[0], &[1]).unwrap(), DenseMatrix::from_rows(&[[0]]));
        assert_eq!(all_ones_2x2().dense_submatrix(&[1], &[0, 1]).unwrap(), DenseMatrix::from_rows(&[[1, 1]]));
        assert!(m.dense_submatrix(&[0, 0], &[1]).is_err());
        assert!(m.dense_submatrix(&[3], &[1]).is_err());
    }

    #[test]
    fn submatrix_with_unsorted_columns() {
        let m = m3();
        let s = m.submatrix(&[2, 0], &[2, 0]).unwrap();
        assert_eq!(s.to_dense(), DenseMatrix::from_rows(&[[1, 0], [1, 1]]));
        s.validate().unwrap();
    }

    #[test]
    fn support_drops_signs() {
        let s = n2().support();
        assert_eq!(s.mode(), Mode::Binary);
        assert_eq!(s.to_dense(), DenseMatrix::from_rows(&[[1, 1], [1, 1]]));
    }
}
