//! The SBM text format: a header `m n k mode` followed by `k` lines `r c v`
//! with 1-based indices sorted by (r, c).

use std::fmt::Write as _;
use std::path::Path;

use serpar::{Mode, SparseMatrix};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SbmError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("expected {expected} entries, found {found}")]
    Count { expected: usize, found: usize },
    #[error("empty file, expected a header `m n k mode`")]
    MissingHeader,
}

fn at(line: usize, message: impl Into<String>) -> SbmError {
    SbmError::Line { line, message: message.into() }
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Binary => "binary",
        Mode::Ternary => "ternary",
    }
}

pub fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "binary" => Some(Mode::Binary),
        "ternary" => Some(Mode::Ternary),
        _ => None,
    }
}

pub fn parse(text: &str) -> Result<SparseMatrix, SbmError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines.next().ok_or(SbmError::MissingHeader)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [m, n, k, mode] = fields[..] else {
        return Err(at(header_line, format!("expected `m n k mode`, found {header:?}")));
    };
    let number = |s: &str, what: &str| s.parse::<usize>().map_err(|_| at(header_line, format!("invalid {what} {s:?}")));
    let (m, n, k) = (number(m, "row count")?, number(n, "column count")?, number(k, "entry count")?);
    let mode = parse_mode(mode).ok_or_else(|| at(header_line, format!("unknown mode {mode:?}")))?;

    let mut triplets = Vec::with_capacity(k.min(1 << 24));
    let mut last = None;
    for (line, content) in lines {
        if triplets.len() == k {
            return Err(at(line, format!("more than the {k} entries announced in the header")));
        }
        let mut parts = content.split_whitespace();
        let (Some(r), Some(c), Some(v), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(at(line, format!("expected `row col value`, found {content:?}")));
        };
        let index = |s: &str, bound: usize, what: &str| match s.parse::<usize>() {
            Ok(i) if (1..=bound).contains(&i) => Ok(i - 1),
            _ => Err(at(line, format!("{what} {s:?} is not in 1..={bound}"))),
        };
        let (r, c) = (index(r, m, "row")?, index(c, n, "column")?);
        let v: i8 = match v.parse() {
            Ok(v) if v != 0 && mode.admits(v) => v,
            _ => return Err(at(line, format!("value {v:?} is not allowed in a {} matrix", mode_name(mode)))),
        };
        if let Some(prev) = last {
            if prev == (r, c) {
                return Err(at(line, format!("entry ({}, {}) appears twice", r + 1, c + 1)));
            }
            if prev > (r, c) {
                return Err(at(line, format!("entry ({}, {}) is out of order", r + 1, c + 1)));
            }
        }
        last = Some((r, c));
        triplets.push((r, c, v));
    }
    if triplets.len() != k {
        return Err(SbmError::Count { expected: k, found: triplets.len() });
    }
    Ok(SparseMatrix::from_triplets(mode, m, n, &triplets).expect("triplets were validated"))
}

pub fn format(matrix: &SparseMatrix) -> String {
    let mut out = String::with_capacity(16 * matrix.nnz() + 32);
    let _ = writeln!(out, "{} {} {} {}", matrix.rows(), matrix.cols(), matrix.nnz(), mode_name(matrix.mode()));
    for (r, c, v) in matrix.to_triplets() {
        let _ = writeln!(out, "{} {} {}", r + 1, c + 1, v);
    }
    out
}

pub fn read(path: &Path) -> anyhow::Result<SparseMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    parse(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn write(matrix: &SparseMatrix, path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, format(matrix)).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use serpar::{wheel_matrix, DenseMatrix};

    proptest! {
        #[test]
        fn write_then_read_keeps_triplets(
            m in 1usize..12,
            n in 1usize..12,
            ternary in any::<bool>(),
            cells in prop::collection::vec(-1i8..=1, 144),
        ) {
            let mode = if ternary { Mode::Ternary } else { Mode::Binary };
            let mut d = DenseMatrix::zeros(m, n);
            for r in 0..m {
                for c in 0..n {
                    let v = cells[r * 12 + c];
                    d.set(r, c, if ternary { v } else { v.abs() });
                }
            }
            let matrix = SparseMatrix::from_dense(mode, &d).unwrap();
            let text = format(&matrix);
            let back = parse(&text).unwrap();
            prop_assert_eq!(back.to_triplets(), matrix.to_triplets());
            prop_assert_eq!((back.rows(), back.cols(), back.mode()), (m, n, mode));
            prop_assert_eq!(format(&back), text);
        }
    }

    #[test]
    fn parses_m3() {
        let m = parse("3 3 6 binary\n1 1 1\n1 3 1\n2 1 1\n2 2 1\n3 2 1\n3 3 1\n").unwrap();
        assert_eq!(m.to_dense(), wheel_matrix(3));
    }

    #[test]
    fn round_trips() {
        let d = DenseMatrix::from_rows(&[[1, 0, -1], [0, 0, 0], [-1, 1, 1]]);
        let m = SparseMatrix::from_dense(Mode::Ternary, &d).unwrap();
        let text = format(&m);
        assert_eq!(format(&parse(&text).unwrap()), text);
    }

    #[test]
    fn names_the_offending_line() {
        let err = parse("2 2 2 binary\n2 1 1\n1 2 1\n").unwrap_err();
        assert_eq!(err, at(3, "entry (1, 2) is out of order"));
        assert!(matches!(parse("2 2 1 binary\n1 1 -1\n"), Err(SbmError::Line { line: 2, .. })));
        assert!(matches!(parse("2 2 1 binary\n3 1 1\n"), Err(SbmError::Line { line: 2, .. })));
        assert!(matches!(parse("2 2 binary\n"), Err(SbmError::Line { line: 1, .. })));
        assert!(matches!(parse("2 2 1 ternary\n1 1 1\n1 2 1\n"), Err(SbmError::Line { line: 3, .. })));
        assert!(matches!(parse("2 2 2 binary\n1 1 1\n"), Err(SbmError::Count { expected: 2, found: 1 })));
        assert!(matches!(parse(""), Err(SbmError::MissingHeader)));
    }
}
