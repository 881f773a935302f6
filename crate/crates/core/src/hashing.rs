//! Incremental row/column fingerprints and the chained tables used to find copies.
//!
//! The fingerprint of a row is the weighted sum of its live entries against a
//! weight per column (and symmetrically for columns). Removing one nonzero
//! changes it by a single term, so it is maintained in constant time. Sums are
//! kept modulo 2^62 in balanced representation, which keeps every intermediate
//! value inside `i64` and makes the fingerprint of a negated vector exactly the
//! negation of the original.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{Element, Mode, SparseMatrix};

/// Fingerprints live modulo this value.
pub const WEIGHT_MODULUS: i64 = 1 << 62;
const HALF_MODULUS: i64 = 1 << 61;
const NIL: u32 = u32::MAX;

/// How weight vectors are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WeightMode {
    /// `weights[i] = 3^(i+1) mod 2^62`.
    #[default]
    Deterministic,
    /// Independent uniform integers in `[1, 2^62)` drawn from ChaCha8 seeded with `seed`.
    Randomized { seed: u64 },
}

/// Per-index hashing weights, all in `[0, 2^62)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<i64>,
}

impl WeightVector {
    pub fn deterministic(len: usize) -> Self {
        let mut weights = Vec::with_capacity(len);
        let mut w: u64 = 1;
        for _ in 0..len {
            // w < 2^62, so 3w fits in u64.
            w = (w * 3) % WEIGHT_MODULUS as u64;
            weights.push(w as i64);
        }
        Self { weights }
    }

    pub fn randomized(len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = (0..len).map(|_| rng.gen_range(1..WEIGHT_MODULUS)).collect();
        Self { weights }
    }

    /// Builds weights of the given length; the seed of a randomized mode is
    /// mixed with `stream` so that row and column weights differ.
    pub fn new(len: usize, mode: WeightMode, stream: u64) -> Self {
        match mode {
            WeightMode::Deterministic => Self::deterministic(len),
            WeightMode::Randomized { seed } => Self::randomized(len, seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15)),
        }
    }

    pub fn from_vec(weights: Vec<i64>) -> Self {
        assert!(weights.iter().all(|w| (0..WEIGHT_MODULUS).contains(w)), "weight out of range");
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, index: usize) -> i64 {
        self.weights[index]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.weights
    }
}

/// Weights of the given length in the given mode.
pub fn make_weights(len: usize, mode: WeightMode) -> WeightVector {
    WeightVector::new(len, mode, 0)
}

/// Reduces into the balanced residue range `(-2^61, 2^61]`.
fn balance(x: i64) -> i64 {
    balance_wrapped(x as u64)
}

/// Balanced residue of a sum accumulated with wrapping `u64` arithmetic;
/// exact because 2^62 divides 2^64.
fn balance_wrapped(x: u64) -> i64 {
    let r = (x & (WEIGHT_MODULUS as u64 - 1)) as i64;
    if r > HALF_MODULUS {
        r - WEIGHT_MODULUS
    } else {
        r
    }
}

fn signed_term(value: i8, weight: i64) -> u64 {
    if value < 0 {
        (weight as u64).wrapping_neg()
    } else {
        weight as u64
    }
}

/// Freshly computed fingerprint of `element` against `weights` (indexed by
/// the element's cross index).
pub fn fingerprint(matrix: &SparseMatrix, element: Element, weights: &WeightVector) -> i64 {
    let sum = matrix.entries(element).fold(0u64, |h, (_, i, v)| h.wrapping_add(signed_term(v, weights.get(i))));
    balance_wrapped(sum)
}

/// Table key of a fingerprint: the fingerprint itself for binary matrices,
/// its absolute value for ternary ones so that negated vectors collide.
pub fn table_key(hash: i64, mode: Mode) -> i64 {
    match mode {
        Mode::Binary => hash,
        Mode::Ternary => hash.abs(),
    }
}

/// Chained hash table over the elements of one axis.
#[derive(Clone, Debug)]
pub struct HashTable {
    buckets: Vec<u32>,
    links: Vec<Link>,
}

/// Chain successor and bucket of one member, kept side by side since they
/// are always read together.
#[derive(Clone, Copy, Debug)]
struct Link {
    next: u32,
    slot: u32,
}

const UNLINKED: Link = Link { next: NIL, slot: NIL };

impl HashTable {
    /// Table for `elements` members with a power-of-two bucket count of at least `min_buckets`.
    pub fn new(elements: usize, min_buckets: usize) -> Self {
        let size = min_buckets.max(1).next_power_of_two();
        Self { buckets: vec![NIL; size], links: vec![UNLINKED; elements] }
    }

    fn bucket(&self, key: i64) -> usize {
        key.rem_euclid(self.buckets.len() as i64) as usize
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.links[index].slot != NIL
    }

    /// Pushes `index` onto the chain for `key`. No-op if already present.
    pub fn insert(&mut self, index: usize, key: i64) {
        if self.contains(index) {
            return;
        }
        let b = self.bucket(key);
        self.links[index] = Link { next: self.buckets[b], slot: b as u32 };
        self.buckets[b] = index as u32;
    }

    /// Unlinks `index` from the chain it was inserted into. No-op if absent.
    pub fn remove(&mut self, index: usize) {
        let Link { next, slot } = self.links[index];
        if slot == NIL {
            return;
        }
        let b = slot as usize;
        let target = index as u32;
        if self.buckets[b] == target {
            self.buckets[b] = next;
        } else {
            let mut cur = self.buckets[b];
            while self.links[cur as usize].next != target {
                cur = self.links[cur as usize].next;
                debug_assert_ne!(cur, NIL, "member missing from its chain");
            }
            self.links[cur as usize].next = next;
        }
        self.links[index] = UNLINKED;
    }

    /// Members in the chain that `key` maps to, in chain order.
    pub fn chain(&self, key: i64) -> impl Iterator<Item = usize> + '_ {
        let mut cur = self.buckets[self.bucket(key)];
        std::iter::from_fn(move || {
            if cur == NIL {
                None
            } else {
                let i = cur as usize;
                cur = self.links[i].next;
                Some(i)
            }
        })
    }
}

/// Relative sign between two equal-support vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Compares two live vectors; returns `s` with `A(a) = s·A(b)` if one exists.
/// Negation is only considered in ternary mode.
pub fn vectors_match(matrix: &SparseMatrix, a: Element, b: Element) -> Option<Sign> {
    if matrix.count(a) != matrix.count(b) {
        return None;
    }
    let mut left = matrix.entries(a);
    let mut right = matrix.entries(b);
    let mut sign: Option<i8> = None;
    loop {
        match (left.next(), right.next()) {
            (None, None) => break,
            (Some((_, i, u)), Some((_, j, v))) => {
                if i != j {
                    return None;
                }
                let s = u * v;
                match sign {
                    None => sign = Some(s),
                    Some(prev) if prev != s => return None,
                    Some(_) => {}
                }
            }
            _ => return None,
        }
    }
    let sign = Sign::from_value(sign.unwrap_or(1))?;
    if sign == Sign::Minus && matrix.mode() == Mode::Binary {
        return None;
    }
    Some(sign)
}

/// Fingerprints of every element of a matrix plus one table per axis.
#[derive(Clone, Debug)]
pub struct ElementHashes {
    mode: Mode,
    /// Weights against column positions, used for rows.
    row_weights: WeightVector,
    /// Weights against row positions, used for columns.
    col_weights: WeightVector,
    row_hash: Vec<i64>,
    col_hash: Vec<i64>,
    row_table: HashTable,
    col_table: HashTable,
}

impl ElementHashes {
    pub fn new(matrix: &SparseMatrix, mode: WeightMode) -> Self {
        let (m, n) = (matrix.rows(), matrix.cols());
        Self::with_weights(matrix, WeightVector::new(n, mode, 1), WeightVector::new(m, mode, 2))
    }

    /// Uses explicit weights: `row_weights` has one entry per column,
    /// `col_weights` one per row.
    pub fn with_weights(matrix: &SparseMatrix, row_weights: WeightVector, col_weights: WeightVector) -> Self {
        let (m, n) = (matrix.rows(), matrix.cols());
        assert_eq!(row_weights.len(), n);
        assert_eq!(col_weights.len(), m);
        let mut row_sum = vec![0u64; m];
        let mut col_sum = vec![0u64; n];
        for (r, c, v) in matrix.live_entries() {
            row_sum[r] = row_sum[r].wrapping_add(signed_term(v, row_weights.get(c)));
            col_sum[c] = col_sum[c].wrapping_add(signed_term(v, col_weights.get(r)));
        }
        let row_hash = row_sum.into_iter().map(balance_wrapped).collect();
        let col_hash = col_sum.into_iter().map(balance_wrapped).collect();
        Self::from_hashes(matrix.mode(), row_weights, col_weights, row_hash, col_hash)
    }

    /// Hashes vectors handed over as parallel index and value slices, for
    /// callers that keep their own copy of the matrix.
    pub(crate) fn from_slices<'a>(
        mode: Mode,
        weights: WeightMode,
        (m, n): (usize, usize),
        row: impl Fn(usize) -> (&'a [u32], &'a [i8]),
        col: impl Fn(usize) -> (&'a [u32], &'a [i8]),
    ) -> Self {
        let row_weights = WeightVector::new(n, weights, 1);
        let col_weights = WeightVector::new(m, weights, 2);
        let sum = |(index, value): (&[u32], &[i8]), w: &WeightVector| {
            let total =
                index.iter().zip(value).fold(0u64, |h, (&i, &v)| h.wrapping_add(signed_term(v, w.get(i as usize))));
            balance_wrapped(total)
        };
        let row_hash = (0..m).map(|r| sum(row(r), &row_weights)).collect();
        let col_hash = (0..n).map(|c| sum(col(c), &col_weights)).collect();
        Self::from_hashes(mode, row_weights, col_weights, row_hash, col_hash)
    }

    fn from_hashes(
        mode: Mode,
        row_weights: WeightVector,
        col_weights: WeightVector,
        row_hash: Vec<i64>,
        col_hash: Vec<i64>,
    ) -> Self {
        let (m, n) = (row_hash.len(), col_hash.len());
        let buckets = 2 * (m + n);
        Self {
            mode,
            row_weights,
            col_weights,
            row_hash,
            col_hash,
            row_table: HashTable::new(m, buckets),
            col_table: HashTable::new(n, buckets),
        }
    }

    pub fn hash(&self, element: Element) -> i64 {
        match element {
            Element::Row(r) => self.row_hash[r],
            Element::Column(c) => self.col_hash[c],
        }
    }

    pub fn key(&self, element: Element) -> i64 {
        table_key(self.hash(element), self.mode)
    }

    /// Weights used for hashing elements of the same kind as `element`.
    pub fn weights_for(&self, element: Element) -> &WeightVector {
        if element.is_row() {
            &self.row_weights
        } else {
            &self.col_weights
        }
    }

    fn table(&self, element: Element) -> &HashTable {
        if element.is_row() {
            &self.row_table
        } else {
            &self.col_table
        }
    }

    fn table_mut(&mut self, element: Element) -> &mut HashTable {
        if element.is_row() {
            &mut self.row_table
        } else {
            &mut self.col_table
        }
    }

    pub fn contains(&self, element: Element) -> bool {
        self.table(element).contains(element.index())
    }

    pub fn insert(&mut self, element: Element) {
        let key = self.key(element);
        self.table_mut(element).insert(element.index(), key);
    }

    pub fn remove(&mut self, element: Element) {
        self.table_mut(element).remove(element.index());
    }

    /// Accounts for the removal of the entry at cross index `removed_index`
    /// with value `removed_value` from `element`, and drops `element` from its
    /// table since its key is stale.
    pub fn update_on_removal(&mut self, element: Element, removed_index: usize, removed_value: i8) {
        let delta = i64::from(removed_value) * self.weights_for(element).get(removed_index);
        let h = match element {
            Element::Row(r) => &mut self.row_hash[r],
            Element::Column(c) => &mut self.col_hash[c],
        };
        *h = balance(*h - delta);
        self.remove(element);
    }

    /// First tabled element whose vector equals `A(element)` (or its negation in
    /// ternary mode), confirmed by full comparison.
    pub fn find_equal(&self, matrix: &SparseMatrix, element: Element) -> Option<(Element, Sign)> {
        self.find_equal_with(element, |candidate| vectors_match(matrix, element, candidate))
    }

    /// Like [`find_equal`](Self::find_equal), with the full comparison
    /// supplied by the caller.
    pub fn find_equal_with(
        &self,
        element: Element,
        mut compare: impl FnMut(Element) -> Option<Sign>,
    ) -> Option<(Element, Sign)> {
        let key = self.key(element);
        let table = self.table(element);
        table.chain(key).find_map(|i| {
            let candidate = match element {
                Element::Row(_) => Element::Row(i),
                Element::Column(_) => Element::Column(i),
            };
            if candidate == element || self.key(candidate) != key {
                return None;
            }
            compare(candidate).map(|s| (candidate, s))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent modular exponentiation through u128.
    fn pow3_mod(exp: u32) -> i64 {
        let m = WEIGHT_MODULUS as u128;
        let mut acc: u128 = 1;
        for _ in 0..exp {
            acc = acc * 3 % m;
        }
        acc as i64
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

    #[test]
    fn deterministic_weights() {
        assert_eq!(WeightVector::deterministic(3).as_slice(), [3, 9, 27]);
        assert!(WeightVector::deterministic(0).is_empty());
        let w = WeightVector::deterministic(64);
        // 3^64 mod 2^62, computed with the u128 oracle above.
        assert_eq!(w.get(63), 4_121_400_093_284_678_913);
        assert_eq!(w.get(63), pow3_mod(64));
        for i in 0..64 {
            assert_eq!(w.get(i), pow3_mod(i as u32 + 1));
        }
    }

    #[test]
    fn randomized_weights_are_seeded_and_in_range() {
        let a = WeightVector::randomized(100, 7);
        assert_eq!(a, WeightVector::randomized(100, 7));
        assert_ne!(a, WeightVector::randomized(100, 8));
        assert!(a.as_slice().iter().all(|&w| (1..WEIGHT_MODULUS).contains(&w)));
    }

    #[test]
    fn fingerprints() {
        let w = WeightVector::deterministic(3);
        assert_eq!(fingerprint(&m3(), Element::Row(0), &w), 30);
        let z = SparseMatrix::zeros(Mode::Binary, 2, 3);
        assert_eq!(fingerprint(&z, Element::Row(1), &w), 0);

        let n2 =
            SparseMatrix::from_triplets(Mode::Ternary, 2, 2, &[(0, 0, -1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]).unwrap();
        let q = WeightVector::deterministic(2);
        let h = fingerprint(&n2, Element::Column(0), &q);
        assert_eq!(h, 6);
        let negated = SparseMatrix::from_triplets(Mode::Ternary, 2, 1, &[(0, 0, 1), (1, 0, -1)]).unwrap();
        let hn = fingerprint(&negated, Element::Column(0), &q);
        assert_eq!(hn, -6);
        assert_eq!(table_key(h, Mode::Ternary), table_key(hn, Mode::Ternary));
    }

    #[test]
    fn balanced_residue_is_negation_symmetric() {
        for x in [0, 1, HALF_MODULUS, HALF_MODULUS - 1, WEIGHT_MODULUS - 1, 3 * HALF_MODULUS] {
            assert_eq!(balance(x).abs(), balance(-x).abs());
        }
        assert_eq!(balance(HALF_MODULUS), HALF_MODULUS);
        assert_eq!(balance(-HALF_MODULUS), HALF_MODULUS);
    }

    #[test]
    fn update_on_removal_arithmetic() {
        let mut m = m3();
        let mut hashes =
            ElementHashes::with_weights(&m, WeightVector::deterministic(3), WeightVector::deterministic(3));
        assert_eq!(hashes.hash(Element::Row(0)), 30);
        m.remove_nonzero(0, 2).unwrap();
        hashes.update_on_removal(Element::Row(0), 2, 1);
        assert_eq!(hashes.hash(Element::Row(0)), 3);
        assert_eq!(hashes.hash(Element::Row(0)), fingerprint(&m, Element::Row(0), &WeightVector::deterministic(3)));

        let n2 =
            SparseMatrix::from_triplets(Mode::Ternary, 2, 2, &[(0, 0, -1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]).unwrap();
        let mut th = ElementHashes::with_weights(&n2, WeightVector::deterministic(2), WeightVector::deterministic(2));
        assert_eq!(th.hash(Element::Column(0)), 6);
        th.insert(Element::Column(1));
        th.update_on_removal(Element::Column(0), 0, -1);
        assert_eq!(th.hash(Element::Column(0)), 9);
        // Column 1 was untouched and stays tabled.
        assert!(th.contains(Element::Column(1)));
        assert!(!th.contains(Element::Column(0)));
    }

    #[test]
    fn finds_binary_copies() {
        let m =
            SparseMatrix::from_triplets(Mode::Binary, 3, 2, &[(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1), (2, 0, 1)])
                .unwrap();
        let mut h = ElementHashes::new(&m, WeightMode::Deterministic);
        assert_eq!(h.find_equal(&m, Element::Row(1)), None);
        h.insert(Element::Row(0));
        assert_eq!(h.find_equal(&m, Element::Row(1)), Some((Element::Row(0), Sign::Plus)));
        assert_eq!(h.find_equal(&m, Element::Row(2)), None);
        h.remove(Element::Row(0));
        h.remove(Element::Row(0));
        assert_eq!(h.find_equal(&m, Element::Row(1)), None);
    }

    #[test]
    fn finds_negated_ternary_copies() {
        let m =
            SparseMatrix::from_triplets(Mode::Ternary, 2, 2, &[(0, 0, 1), (0, 1, -1), (1, 0, -1), (1, 1, 1)]).unwrap();
        let mut h = ElementHashes::new(&m, WeightMode::Deterministic);
        h.insert(Element::Row(0));
        assert_eq!(h.find_equal(&m, Element::Row(1)), Some((Element::Row(0), Sign::Minus)));
    }

    #[test]
    fn stale_members_are_not_found() {
        let mut m = SparseMatrix::from_triplets(
            Mode::Binary,
            2,
            3,
            &[(0, 0, 1), (0, 1, 1), (0, 2, 1), (1, 0, 1), (1, 1, 1), (1, 2, 1)],
        )
        .unwrap();
        let mut h = ElementHashes::new(&m, WeightMode::Deterministic);
        h.insert(Element::Row(0));
        m.remove_nonzero(0, 2).unwrap();
        h.update_on_removal(Element::Row(0), 2, 1);
        assert!(!h.contains(Element::Row(0)));
        assert_eq!(h.find_equal(&m, Element::Row(1)), None);
    }

    #[test]
    fn collisions_never_report_false_copies() {
        // With unit weights, rows {0,1} and {1,2} both hash to 2.
        let m = SparseMatrix::from_triplets(Mode::Binary, 2, 3, &[(0, 0, 1), (0, 1, 1), (1, 1, 1), (1, 2, 1)]).unwrap();
        let mut h =
            ElementHashes::with_weights(&m, WeightVector::from_vec(vec![1, 1, 1]), WeightVector::from_vec(vec![1, 1]));
        assert_eq!(h.key(Element::Row(0)), h.key(Element::Row(1)));
        h.insert(Element::Row(0));
        assert_eq!(h.find_equal(&m, Element::Row(1)), None);
    }

    #[test]
    fn chained_removal_from_middle() {
        let mut t = HashTable::new(4, 2);
        for i in 0..4 {
            t.insert(i, 0);
        }
        assert_eq!(t.chain(0).collect::<Vec<_>>(), [3, 2, 1, 0]);
        t.remove(2);
        assert_eq!(t.chain(0).collect::<Vec<_>>(), [3, 1, 0]);
        t.remove(0);
        t.remove(3);
        assert_eq!(t.chain(0).collect::<Vec<_>>(), [1]);
        assert!(!t.contains(2));
    }
}
