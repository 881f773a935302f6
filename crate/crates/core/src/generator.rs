//! Random structured test matrices.
//!
//! An `N×N` matrix is built from a random base block that is extended by unit
//! rows, unit columns, copied rows and copied columns, and finally perturbed
//! by flipping entries at distinct random positions. By default the extension
//! steps are applied in a random order; [`ExtensionOrder::Sequential`] applies
//! all unit rows, then all unit columns, then the row copies, then the column
//! copies.
//!
//! Randomness comes from `ChaCha8Rng::seed_from_u64(seed)` (crate
//! `rand_chacha` 0.3) with integers drawn by `Rng::gen_range` and
//! probabilities by `Rng::gen_bool` of `rand` 0.8; a seed therefore produces
//! the same matrix on every platform.

use std::collections::HashSet;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::{Mode, SparseMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    /// Relative size of the random base block.
    pub alpha: f64,
    /// Fraction of unit rows (and of unit columns).
    pub beta: f64,
    /// Fraction of copied rows (and of copied columns).
    pub gamma: f64,
    /// Number of flipped entries relative to `n`.
    pub delta: f64,
    /// Probability of a nonzero in the base block.
    pub p: f64,
    pub mode: Mode,
    pub seed: u64,
    pub order: ExtensionOrder,
}

/// Order in which the extension steps are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExtensionOrder {
    /// A uniformly random interleaving of all steps.
    #[default]
    Shuffled,
    /// Unit rows, unit columns, copied rows, copied columns.
    Sequential,
}

#[derive(Clone, Copy)]
enum Step {
    UnitRow,
    UnitColumn,
    CopyRow,
    CopyColumn,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            n: 100,
            alpha: 0.0,
            beta: 0.5,
            gamma: 0.5,
            delta: 0.0,
            p: 1.0,
            mode: Mode::Binary,
            seed: 0,
            order: ExtensionOrder::Shuffled,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("n must be positive")]
    EmptyMatrix,
    #[error("{name} = {value} is outside [0, 1]")]
    FractionOutOfRange { name: &'static str, value: f64 },
    #[error("alpha + beta + gamma = {sum}, expected 1")]
    FractionsDoNotSumToOne { sum: f64 },
    #[error("delta = {0} is negative or not finite")]
    BadDelta(f64),
    #[error("{flips} flips requested but the matrix has only {cells} entries")]
    TooManyFlips { flips: usize, cells: usize },
    #[error("line {line}: {message}")]
    Config { line: usize, message: String },
}

/// Rows (equivalently columns) contributed by each construction step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepCounts {
    pub base: usize,
    pub units: usize,
    pub copies: usize,
    pub flips: usize,
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), GenError> {
        if self.n == 0 {
            return Err(GenError::EmptyMatrix);
        }
        for (name, value) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma), ("p", self.p)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(GenError::FractionOutOfRange { name, value });
            }
        }
        let sum = self.alpha + self.beta + self.gamma;
        if (sum - 1.0).abs() > 1e-6 {
            return Err(GenError::FractionsDoNotSumToOne { sum });
        }
        if !self.delta.is_finite() || self.delta < 0.0 {
            return Err(GenError::BadDelta(self.delta));
        }
        let counts = self.counts();
        let size = self.size();
        let cells = size.saturating_mul(size);
        if counts.flips > cells {
            return Err(GenError::TooManyFlips { flips: counts.flips, cells });
        }
        Ok(())
    }

    /// Base size `max(⌈αN⌉, 1)`, `⌊βN⌋` unit vectors, and copies filling up to `N`.
    ///
    /// When `α = 0` and `β = 1` the 1×1 base comes on top of `N` unit vectors.
    pub fn counts(&self) -> StepCounts {
        let n = self.n as f64;
        let base = ((self.alpha * n - 1e-9).ceil().max(1.0) as usize).min(self.n.max(1));
        let units = (self.beta * n + 1e-9).floor() as usize;
        let copies = self.n.saturating_sub(base + units);
        let flips = (self.delta * n).round() as usize;
        StepCounts { base, units, copies, flips }
    }

    /// Number of rows (and columns) of the generated matrix.
    pub fn size(&self) -> usize {
        let c = self.counts();
        c.base + c.units + c.copies
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are ignored;
    /// keys not given keep their default.
    pub fn parse_config(text: &str) -> Result<Self, GenError> {
        let mut config = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| GenError::Config { line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            config.set(key.trim(), value.trim()).map_err(err)?;
        }
        Ok(config)
    }

    /// Sets one parameter from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
            value.parse().map_err(|_| format!("invalid value {value:?} for {key}"))
        }
        match key {
            "n" => self.n = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "beta" => self.beta = num(key, value)?,
            "gamma" => self.gamma = num(key, value)?,
            "delta" => self.delta = num(key, value)?,
            "p" => self.p = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "mode" => {
                self.mode = match value {
                    "binary" => Mode::Binary,
                    "ternary" => Mode::Ternary,
                    _ => return Err(format!("unknown mode {value:?}")),
                }
            }
            "order" => {
                self.order = match value {
                    "shuffled" => ExtensionOrder::Shuffled,
                    "sequential" => ExtensionOrder::Sequential,
                    _ => return Err(format!("unknown extension order {value:?}")),
                }
            }
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }
}

struct Builder {
    mode: Mode,
    rows: Vec<Vec<(u32, i8)>>,
    cols: Vec<Vec<(u32, i8)>>,
}

impl Builder {
    fn push(&mut self, r: usize, c: usize, v: i8) {
        self.rows[r].push((c as u32, v));
        self.cols[c].push((r as u32, v));
    }

    fn sign(&self, rng: &mut ChaCha8Rng) -> i8 {
        match self.mode {
            Mode::Binary => 1,
            Mode::Ternary => {
                if rng.gen_bool(0.5) {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// Generates the matrix described by `config`.
pub fn generate(config: &GenConfig) -> Result<SparseMatrix, GenError> {
    config.validate()?;
    let counts = config.counts();
    let n = config.size();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut b = Builder { mode: config.mode, rows: Vec::with_capacity(n), cols: Vec::with_capacity(n) };

    b.rows.resize(counts.base, Vec::new());
    b.cols.resize(counts.base, Vec::new());
    for r in 0..counts.base {
        for c in 0..counts.base {
            if rng.gen_bool(config.p) {
                let v = b.sign(&mut rng);
                b.push(r, c, v);
            }
        }
    }

    let mut steps = Vec::with_capacity(4 * (counts.units + counts.copies));
    steps.extend(std::iter::repeat_n(Step::UnitRow, counts.units));
    steps.extend(std::iter::repeat_n(Step::UnitColumn, counts.units));
    steps.extend(std::iter::repeat_n(Step::CopyRow, counts.copies));
    steps.extend(std::iter::repeat_n(Step::CopyColumn, counts.copies));
    if config.order == ExtensionOrder::Shuffled {
        steps.shuffle(&mut rng);
    }
    for step in steps {
        match step {
            Step::UnitRow => {
                let c = rng.gen_range(0..b.cols.len());
                let v = b.sign(&mut rng);
                b.rows.push(Vec::new());
                b.push(b.rows.len() - 1, c, v);
            }
            Step::UnitColumn => {
                let r = rng.gen_range(0..b.rows.len());
                let v = b.sign(&mut rng);
                b.cols.push(Vec::new());
                b.push(r, b.cols.len() - 1, v);
            }
            Step::CopyRow => {
                let source = rng.gen_range(0..b.rows.len());
                let s = b.sign(&mut rng);
                let new = b.rows.len();
                b.rows.push(Vec::new());
                for k in 0..b.rows[source].len() {
                    let (c, v) = b.rows[source][k];
                    b.push(new, c as usize, v * s);
                }
            }
            Step::CopyColumn => {
                let source = rng.gen_range(0..b.cols.len());
                let s = b.sign(&mut rng);
                let new = b.cols.len();
                b.cols.push(Vec::new());
                for k in 0..b.cols[source].len() {
                    let (r, v) = b.cols[source][k];
                    b.push(r as usize, new, v * s);
                }
            }
        }
    }
    debug_assert_eq!((b.rows.len(), b.cols.len()), (n, n));

    let mut flipped = HashSet::with_capacity(counts.flips);
    let mut flips = Vec::with_capacity(counts.flips);
    while flips.len() < counts.flips {
        let cell = (rng.gen_range(0..n) as u32, rng.gen_range(0..n) as u32);
        if flipped.insert(cell) {
            flips.push(cell);
        }
    }
    let mut flip_values = Vec::with_capacity(flips.len());
    for &(r, c) in &flips {
        let current = b.rows[r as usize].iter().find(|&&(j, _)| j == c).map_or(0, |&(_, v)| v);
        let next = match (config.mode, current) {
            (Mode::Binary, 0) => 1,
            (Mode::Binary, _) => 0,
            (Mode::Ternary, v) => {
                let others: [i8; 2] = match v {
                    0 => [1, -1],
                    1 => [0, -1],
                    _ => [0, 1],
                };
                others[usize::from(rng.gen_bool(0.5))]
            }
        };
        flip_values.push((r, c, next));
    }
    flip_values.sort_unstable_by_key(|&(r, c, _)| (r, c));

    let mut triplets = Vec::new();
    let mut pending = flip_values.iter().peekable();
    for (r, row) in b.rows.iter_mut().enumerate() {
        row.sort_unstable_by_key(|&(c, _)| c);
        let mut overrides = Vec::new();
        while let Some(&&(fr, fc, fv)) = pending.peek() {
            if fr as usize != r {
                break;
            }
            overrides.push((fc, fv));
            pending.next();
        }
        let mut k = 0;
        let mut emit = |c: u32, v: i8| {
            if v != 0 {
                triplets.push((r, c as usize, v));
            }
        };
        for &(c, v) in row.iter() {
            while k < overrides.len() && overrides[k].0 < c {
                emit(overrides[k].0, overrides[k].1);
                k += 1;
            }
            if k < overrides.len() && overrides[k].0 == c {
                emit(c, overrides[k].1);
                k += 1;
            } else {
                emit(c, v);
            }
        }
        for &(c, v) in &overrides[k..] {
            emit(c, v);
        }
    }
    Ok(SparseMatrix::from_triplets(config.mode, n, n, &triplets).expect("generated triplets are well-formed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Element;
    use crate::reduce::{reduce, ReduceOptions};

    fn config(n: usize, alpha: f64, beta: f64, gamma: f64, delta: f64, p: f64, mode: Mode, seed: u64) -> GenConfig {
        GenConfig { n, alpha, beta, gamma, delta, p, mode, seed, order: ExtensionOrder::Shuffled }
    }

    #[test]
    fn unit_only_instance() {
        let c = config(4, 0.0, 1.0, 0.0, 0.0, 1.0, Mode::Binary, 3);
        assert_eq!(c.counts(), StepCounts { base: 1, units: 4, copies: 0, flips: 0 });
        let m = generate(&c).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 5));
        let out = reduce(&mut m.clone(), &ReduceOptions::default());
        assert_eq!(out.reductions.len(), 10);
        assert!(out.is_series_parallel());
    }

    #[test]
    fn sequential_order() {
        let c = GenConfig { order: ExtensionOrder::Sequential, ..config(6, 0.0, 0.5, 0.5, 0.0, 1.0, Mode::Binary, 5) };
        let m = generate(&c).unwrap();
        // Unit rows are added while the base column is the only column.
        for r in 1..4 {
            assert_eq!(m.vector(Element::Row(r))[0], (0, 1));
        }
        assert_eq!(reduce(&mut m.clone(), &ReduceOptions::default()).reductions.len(), 12);
    }

    #[test]
    fn p_zero_gives_zero_matrix() {
        for mode in [Mode::Binary, Mode::Ternary] {
            let m = generate(&config(30, 1.0, 0.0, 0.0, 0.0, 0.0, mode, 1)).unwrap();
            assert_eq!(m.nnz(), 0);
            assert!(reduce(&mut m.clone(), &ReduceOptions::default()).is_series_parallel());
        }
    }

    #[test]
    fn unperturbed_extensions_are_series_parallel() {
        for seed in 0..20 {
            for mode in [Mode::Binary, Mode::Ternary] {
                let c = config(200, 0.0, 0.3, 0.7, 0.0, 1.0, mode, seed);
                let mut m = generate(&c).unwrap();
                let out = reduce(&mut m, &ReduceOptions::default());
                assert_eq!(out.reductions.len(), 400);
            }
        }
    }

    #[test]
    fn reproducible() {
        let c = config(300, 0.2, 0.4, 0.4, 0.5, 0.3, Mode::Ternary, 42);
        assert_eq!(generate(&c).unwrap().to_triplets(), generate(&c).unwrap().to_triplets());
        let other = GenConfig { seed: 43, ..c.clone() };
        assert_ne!(generate(&c).unwrap().to_triplets(), generate(&other).unwrap().to_triplets());
    }

    #[test]
    fn flips_change_exactly_that_many_cells() {
        let base = config(50, 0.3, 0.3, 0.4, 0.0, 0.5, Mode::Ternary, 9);
        let a = generate(&base).unwrap().to_dense();
        let b = generate(&GenConfig { delta: 2.0, ..base }).unwrap().to_dense();
        let changed = (0..50).flat_map(|r| (0..50).map(move |c| (r, c))).filter(|&(r, c)| a.get(r, c) != b.get(r, c));
        assert_eq!(changed.count(), 100);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(
            generate(&config(10, 0.5, 0.5, 0.5, 0.0, 1.0, Mode::Binary, 0)),
            Err(GenError::FractionsDoNotSumToOne { .. })
        ));
        assert!(matches!(
            generate(&config(10, 0.0, 1.0, 0.0, 0.0, 1.5, Mode::Binary, 0)),
            Err(GenError::FractionOutOfRange { name: "p", .. })
        ));
        assert!(matches!(
            generate(&config(2, 0.0, 1.0, 0.0, 5.0, 1.0, Mode::Binary, 0)),
            Err(GenError::TooManyFlips { .. })
        ));
        assert!(matches!(generate(&config(0, 0.0, 1.0, 0.0, 0.0, 1.0, Mode::Binary, 0)), Err(GenError::EmptyMatrix)));
    }

    #[test]
    fn parses_config_files() {
        let c = GenConfig::parse_config(
            "# sweep\nn = 12\nalpha=0.5\nbeta = 0.25 # units\ngamma=0.25\nmode = ternary\nseed=7\norder = sequential\n",
        )
        .unwrap();
        assert_eq!(c.n, 12);
        assert_eq!(c.mode, Mode::Ternary);
        assert_eq!(c.seed, 7);
        assert_eq!(c.order, ExtensionOrder::Sequential);
        assert_eq!(c.counts(), StepCounts { base: 6, units: 3, copies: 3, flips: 0 });
        assert_eq!(
            GenConfig::parse_config("n = 1\nbogus = 2"),
            Err(GenError::Config { line: 2, message: "unknown key \"bogus\"".into() })
        );
        assert!(matches!(GenConfig::parse_config("n 3"), Err(GenError::Config { line: 1, .. })));
    }
}
