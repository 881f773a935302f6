#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use serpar::{wheel_matrix, wheel_prime_matrix, DenseMatrix, Mode, SparseMatrix, WheelKind};

pub fn sparse(d: &DenseMatrix, mode: Mode) -> SparseMatrix {
    SparseMatrix::from_dense(mode, d).unwrap()
}

/// Dense matrices up to `max_rows`×`max_cols` whose cells are nonzero with
/// probability 0.2, 0.5 or 0.8; ternary nonzeros get a uniform sign.
pub fn dense(max_rows: usize, max_cols: usize, mode: Mode) -> impl Strategy<Value = DenseMatrix> {
    (1..=max_rows, 1..=max_cols, prop_oneof![Just(0.2), Just(0.5), Just(0.8)]).prop_flat_map(move |(m, n, p)| {
        let cell = (any::<f64>(), any::<bool>()).prop_map(move |(u, neg)| {
            let u = u.abs().fract();
            match (u < p, mode, neg) {
                (false, _, _) => 0,
                (true, Mode::Ternary, true) => -1,
                (true, _, _) => 1,
            }
        });
        prop::collection::vec(cell, m * n).prop_map(move |cells| {
            let rows: Vec<&[i8]> = cells.chunks(n).collect();
            DenseMatrix::from_rows(&rows)
        })
    })
}

pub fn random_dense(rng: &mut impl Rng, m: usize, n: usize, p: f64, mode: Mode) -> DenseMatrix {
    let mut d = DenseMatrix::zeros(m, n);
    for r in 0..m {
        for c in 0..n {
            if rng.gen_bool(p) {
                let v = if mode == Mode::Ternary && rng.gen_bool(0.5) { -1 } else { 1 };
                d.set(r, c, v);
            }
        }
    }
    d
}

pub fn support_of(d: &DenseMatrix) -> DenseMatrix {
    let mut out = d.clone();
    for r in 0..d.rows() {
        for c in 0..d.cols() {
            out.set(r, c, d.get(r, c).abs());
        }
    }
    out
}

/// Every permutation of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Whether `a` equals `b` after permuting rows and columns, by trying all row
/// permutations and comparing the multisets of columns.
pub fn equal_up_to_permutation(a: &DenseMatrix, b: &DenseMatrix) -> bool {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) || a.nnz() != b.nnz() {
        return false;
    }
    let columns = |d: &DenseMatrix, order: &[usize]| {
        let mut cols: Vec<Vec<i8>> = (0..d.cols()).map(|c| order.iter().map(|&r| d.get(r, c)).collect()).collect();
        cols.sort();
        cols
    };
    let identity: Vec<usize> = (0..b.rows()).collect();
    let target = columns(b, &identity);
    permutations(a.rows()).iter().any(|order| columns(a, order) == target)
}

/// The wheel kind of a square 0/1 matrix found by exhaustive permutation
/// search against the closed-form patterns.
pub fn brute_force_wheel(d: &DenseMatrix) -> Option<WheelKind> {
    let l = d.rows();
    if l < 3 || d.cols() != l {
        return None;
    }
    if equal_up_to_permutation(d, &wheel_matrix(l)) {
        Some(WheelKind::Cycle)
    } else if equal_up_to_permutation(d, &wheel_prime_matrix(l)) {
        Some(WheelKind::CycleWithChordBlock)
    } else {
        None
    }
}

/// `[[B, b·cᵀ], [0, C]]` from `[B | b]` (last column is `b`) and `[cᵀ ; C]`
/// (first row is `cᵀ`).
pub fn two_sum(left: &DenseMatrix, right: &DenseMatrix) -> DenseMatrix {
    let (m1, n1) = (left.rows(), left.cols() - 1);
    let (m2, n2) = (right.rows() - 1, right.cols());
    let mut d = DenseMatrix::zeros(m1 + m2, n1 + n2);
    for r in 0..m1 {
        for c in 0..n1 {
            d.set(r, c, left.get(r, c));
        }
        for c in 0..n2 {
            d.set(r, n1 + c, left.get(r, n1) * right.get(0, c));
        }
    }
    for r in 0..m2 {
        for c in 0..n2 {
            d.set(m1 + r, n1 + c, right.get(r + 1, c));
        }
    }
    d
}

pub fn direct_sum(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let mut d = DenseMatrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            d.set(r, c, a.get(r, c));
        }
    }
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            d.set(a.rows() + r, a.cols() + c, b.get(r, c));
        }
    }
    d
}

/// Appends `count` SP extensions: unit rows/columns and copies of existing
/// rows/columns, chosen at random.
pub fn pad_series_parallel(rng: &mut impl Rng, d: &DenseMatrix, count: usize) -> DenseMatrix {
    let mut rows: Vec<Vec<i8>> = (0..d.rows()).map(|r| d.row(r).to_vec()).collect();
    let mut n = d.cols();
    for _ in 0..count {
        let m = rows.len();
        match rng.gen_range(0..4) {
            0 => {
                let mut row = vec![0; n];
                row[rng.gen_range(0..n)] = 1;
                rows.push(row);
            }
            1 => {
                let at = rng.gen_range(0..m);
                for (r, row) in rows.iter_mut().enumerate() {
                    row.push(i8::from(r == at));
                }
                n += 1;
            }
            2 => {
                let row = rows[rng.gen_range(0..m)].clone();
                rows.push(row);
            }
            _ => {
                let c = rng.gen_range(0..n);
                for row in &mut rows {
                    let v = row[c];
                    row.push(v);
                }
                n += 1;
            }
        }
    }
    DenseMatrix::from_rows(&rows)
}

pub fn shuffle(rng: &mut impl Rng, d: &DenseMatrix) -> DenseMatrix {
    let mut rows: Vec<usize> = (0..d.rows()).collect();
    let mut cols: Vec<usize> = (0..d.cols()).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    d.select(&rows, &cols)
}

/// A random binary matrix that the oracle finds not series-parallel.
pub fn random_non_sp(rng: &mut impl Rng, max_dim: usize) -> DenseMatrix {
    loop {
        let m = rng.gen_range(3..=max_dim);
        let n = rng.gen_range(3..=max_dim);
        let p = rng.gen_range(0.3..0.7);
        let d = random_dense(rng, m, n, p, Mode::Binary);
        if !serpar::oracle_is_series_parallel(&d, Mode::Binary).series_parallel {
            return d;
        }
    }
}
