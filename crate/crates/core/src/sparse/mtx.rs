//! Matrix Market exchange (`coordinate`, `general`).
//!
//! Writing always emits the `complex` field with 17 significant digits per
//! component, entries sorted by `(row, col)`, 1-based indices. Reading also
//! accepts `real` and `integer` fields, which are promoted to complex.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::sparse::{SparseMatrix, C64};

pub const HEADER: &str = "%%MatrixMarket matrix coordinate complex general";

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Complex,
}

pub fn to_string(m: &SparseMatrix) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    let _ = writeln!(out, "{} {} {}", m.dim(), m.dim(), m.nnz());
    for (r, c, a) in m.triplets() {
        let _ = writeln!(out, "{} {} {:.16e} {:.16e}", r + 1, c + 1, a.re, a.im);
    }
    out
}

pub fn write(m: &SparseMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_string(m))?;
    Ok(())
}

pub fn read(path: impl AsRef<Path>) -> Result<SparseMatrix> {
    parse(&fs::read_to_string(path)?)
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, reason: reason.into() }
}

pub fn parse(text: &str) -> Result<SparseMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, "expected `%%MatrixMarket matrix coordinate <field> general`"));
    }
    if tokens[2] != "coordinate" {
        return Err(parse_err(1, format!("unsupported format `{}`", tokens[2])));
    }
    let field = match tokens[3].as_str() {
        "complex" => Field::Complex,
        "real" | "integer" => Field::Real,
        other => return Err(parse_err(1, format!("unsupported field `{other}`"))),
    };
    if tokens[4] != "general" {
        return Err(parse_err(1, format!("unsupported symmetry `{}`", tokens[4])));
    }

    let mut body = lines.filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('%'));
    let (size_line, size) = body.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_line, format!("bad size token `{t}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_err(size_line, "size line must be `rows cols nnz`"));
    };
    if rows != cols {
        return Err(parse_err(size_line, format!("matrix must be square, got {rows}x{cols}")));
    }

    let mut triplets = Vec::with_capacity(nnz);
    for (ln, line) in body {
        let t: Vec<&str> = line.split_whitespace().collect();
        let want = if field == Field::Complex { 4 } else { 3 };
        if t.len() != want {
            return Err(parse_err(ln, format!("expected {want} fields, found {}", t.len())));
        }
        let index = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| parse_err(ln, format!("bad index `{s}`")))?;
            if v == 0 || v > rows {
                return Err(parse_err(ln, format!("index {v} outside 1..={rows}")));
            }
            Ok(v - 1)
        };
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| parse_err(ln, format!("bad number `{s}`")))
        };
        let re = num(t[2])?;
        let im = if field == Field::Complex { num(t[3])? } else { 0.0 };
        triplets.push((index(t[0])?, index(t[1])?, C64::new(re, im)));
    }
    if triplets.len() != nnz {
        return Err(parse_err(size_line, format!("declared {nnz} entries, found {}", triplets.len())));
    }
    SparseMatrix::from_triplets(rows, triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_emitted_exactly() {
        let s = to_string(&SparseMatrix::identity(1));
        assert_eq!(s.lines().next().unwrap(), HEADER);
        assert_eq!(s.lines().nth(1).unwrap(), "1 1 1");
    }

    #[test]
    fn real_field_promoted() {
        let m = parse("%%MatrixMarket matrix coordinate real general\n% c\n2 2 1\n1 2 3.5\n").unwrap();
        assert_eq!(m.get(0, 1), C64::new(3.5, 0.0));
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse("%%MatrixMarket matrix array real general\n").is_err());
        assert!(parse("%%MatrixMarket matrix coordinate complex general\n2 2 1\n3 1 1 0\n").is_err());
        let dup = parse("%%MatrixMarket matrix coordinate complex general\n2 2 2\n1 1 1 0\n1 1 2 0\n");
        assert!(matches!(dup, Err(Error::DuplicateEntry { row: 0, col: 0 })));
        assert!(parse("%%MatrixMarket matrix coordinate complex general\n2 2 2\n1 1 1 0\n").is_err());
    }

    #[test]
    fn entries_sorted_on_write() {
        let text = "%%MatrixMarket matrix coordinate complex general\n2 2 2\n2 1 1 0\n1 2 0.5 -0.25\n";
        let out = to_string(&parse(text).unwrap());
        let body: Vec<&str> = out.lines().skip(2).collect();
        assert!(body[0].starts_with("1 2 "));
        assert!(body[1].starts_with("2 1 "));
        assert_eq!(parse(&out).unwrap(), parse(text).unwrap());
    }
}
