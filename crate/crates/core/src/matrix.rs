//! Dense matrices over the min-plus semiring and their text/JSON formats.

use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{int, ExactScalar, ExtScalar};

/// An `m × n` matrix over `R ∪ {+∞}`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExtScalar>,
}

impl TropicalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExtScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<ExtScalar>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(m, n, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for finite integer matrices.
    ///
    /// Panics on ragged or empty input.
    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<ExtScalar>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| ExtScalar::from_int(v)).collect())
            .collect();
        Self::from_rows(rows).expect("well-formed integer matrix")
    }

    pub fn from_rationals(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(ExtScalar::Finite).collect())
                .collect(),
        )
    }

    /// Square matrix with `+∞` on the diagonal and `f(i, j)` elsewhere.
    pub fn square_with(m: usize, f: impl Fn(usize, usize) -> ExtScalar) -> Result<Self> {
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                entries.push(if i == j { ExtScalar::Infinity } else { f(i, j) });
            }
        }
        Self::new(m, m, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExtScalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[ExtScalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[ExtScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ExtScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Finite entry at `(i, j)`, or an error naming the position.
    pub fn finite(&self, i: usize, j: usize) -> Result<&ExactScalar> {
        self.get(i, j)
            .finite()
            .ok_or(Error::NonFinite { row: i, col: j })
    }

    pub fn require_finite(&self) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                self.finite(i, j)?;
            }
        }
        Ok(())
    }

    /// All entries as finite rationals, row-major.
    pub fn finite_rows(&self) -> Result<Vec<Vec<ExactScalar>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.finite(i, j).cloned()).collect())
            .collect()
    }

    pub fn is_integer(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.finite().is_some_and(|v| v.is_integer()))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        Self {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    /// Every finite entry multiplied by `factor` (classical scaling).
    pub fn scaled(&self, factor: &ExactScalar) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                ExtScalar::Finite(v) => ExtScalar::Finite(v * factor),
                ExtScalar::Infinity => ExtScalar::Infinity,
            })
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// `(A ⊙ B)_ij = min_k (a_ik + b_kj)`.
    pub fn minplus_product(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let v = (0..self.cols)
                    .map(|k| self.get(i, k).odot(other.get(k, j)))
                    .min()
                    .expect("inner dimension is positive");
                entries.push(v);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Shifts each column so its first entry is zero. The tropical convex hull
    /// in `TP^{m-1}` is unchanged.
    pub fn normalize_generators(&self) -> Result<Self> {
        self.require_finite()?;
        let mut out = self.clone();
        for j in 0..self.cols {
            let top = self.finite(0, j)?.clone();
            if top.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let v = self.finite(i, j)? - &top;
                out.set(i, j, ExtScalar::Finite(v));
            }
        }
        Ok(out)
    }

    /// Renders the plain-text matrix format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the plain-text format: a header `m n`, then `m` rows of `n`
    /// entries (integers, `p/q`, or `inf`). Blank lines and `#` comments are
    /// ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
            .filter(|(_, l)| !l.trim().is_empty());

        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "missing 'm n' header"))?;
        let dims: Vec<(usize, &str)> = tokens(header).collect();
        if dims.len() != 2 {
            return Err(Error::parse(hline, 1, "header must be 'm n'"));
        }
        let parse_dim = |(col, tok): (usize, &str)| -> Result<usize> {
            tok.parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::parse(hline, col, format!("bad dimension '{tok}'")))
        };
        let m = parse_dim(dims[0])?;
        let n = parse_dim(dims[1])?;

        let mut entries = Vec::with_capacity(m * n);
        let mut last_line = hline;
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or_else(|| {
                Error::parse(last_line + 1, 1, format!("expected {m} rows of entries"))
            })?;
            last_line = ln;
            let toks: Vec<(usize, &str)> = tokens(line).collect();
            if toks.len() != n {
                return Err(Error::parse(
                    ln,
                    1,
                    format!("expected {n} entries, found {}", toks.len()),
                ));
            }
            for (col, tok) in toks {
                let v = tok
                    .parse::<ExtScalar>()
                    .map_err(|_| Error::parse(ln, col, format!("bad entry '{tok}'")))?;
                entries.push(v);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, 1, "trailing content after matrix"));
        }
        Self::new(m, n, entries)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.rows)
            .map(|i| {
                Value::Array(
                    self.row(i)
                        .iter()
                        .map(|e| Value::String(e.to_string()))
                        .collect(),
                )
            })
            .collect();
        json!({"m": self.rows, "n": self.cols, "entries": rows})
    }

    /// Parses `{"m":…, "n":…, "entries":[[…]]}`; entries may be JSON integers
    /// or strings in the text-format syntax.
    pub fn parse_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            Error::parse(e.line(), e.column(), format!("invalid JSON: {e}"))
        })?;
        let dim = |key: &str| -> Result<usize> {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::parse(1, 1, format!("missing or invalid '{key}'")))
        };
        let (m, n) = (dim("m")?, dim("n")?);
        let rows = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse(1, 1, "missing 'entries' array"))?;
        if rows.len() != m {
            return Err(Error::parse(1, 1, format!("expected {m} rows, found {}", rows.len())));
        }
        let mut entries = Vec::with_capacity(m * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == n)
                .ok_or_else(|| Error::parse(i + 1, 1, format!("row {} must have {n} entries", i + 1)))?;
            for (j, e) in row.iter().enumerate() {
                let parsed = match e {
                    Value::Number(num) => num.as_i64().map(ExtScalar::from_int),
                    Value::String(s) => s.parse().ok(),
                    _ => None,
                };
                entries.push(parsed.ok_or_else(|| {
                    Error::parse(i + 1, j + 1, format!("bad entry {e}"))
                })?);
            }
        }
        Self::new(m, n, entries)
    }

    /// Detects JSON by a leading `{`.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ExtScalar::Finite(int(0)); rows * cols],
        }
    }
}

fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut pos = 0;
    line.split_whitespace().map(move |tok| {
        let start = line[pos..].find(tok).map_or(pos, |p| p + pos);
        pos = start + tok.len();
        (start + 1, tok)
    })
}

impl fmt::Display for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}
