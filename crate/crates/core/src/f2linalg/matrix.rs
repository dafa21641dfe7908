use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BitVec;
use crate::error::{Error, Result};

/// Dense binary matrix stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<BitVec>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl From<F2Matrix> for MatrixRepr {
    fn from(m: F2Matrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.cols,
            data: m.rows,
        }
    }
}

impl TryFrom<MatrixRepr> for F2Matrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        if r.data.len() != r.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix row count",
                expected: r.rows,
                found: r.data.len(),
            });
        }
        Self::from_rows(r.cols, r.data)
    }
}

impl F2Matrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from its rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                context: "matrix row length",
                expected: cols,
                found: r.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    context: "matrix column length",
                    expected: rows,
                    found: c.len(),
                });
            }
            for i in c.iter_ones() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    /// Parses rows given as 0/1 strings, e.g. `F2Matrix::parse_rows(&["110", "011"])`.
    ///
    /// # Panics
    /// If the strings are malformed or of unequal length; intended for literals.
    #[must_use]
    pub fn parse_rows(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.parse().expect("bit string"))
            .collect();
        Self::from_rows(cols, rows).expect("rows of equal length")
    }

    #[must_use]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[must_use]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    #[must_use]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    #[must_use]
    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    #[must_use]
    pub fn column(&self, j: usize) -> BitVec {
        let mut c = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                c.set(i, true);
            }
        }
        c
    }

    #[must_use]
    pub fn columns(&self) -> Vec<BitVec> {
        self.transpose().rows
    }

    #[must_use]
    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Matrix product `self · rhs`.
    ///
    /// # Panics
    /// If the inner dimensions differ.
    #[must_use]
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.nrows(), "matrix product dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(rhs.cols);
                for k in r.iter_ones() {
                    acc += &rhs.rows[k];
                }
                acc
            })
            .collect();
        Self {
            cols: rhs.cols,
            rows,
        }
    }

    /// Matrix-vector product `self · v`.
    ///
    /// # Panics
    /// If `v` has the wrong length.
    #[must_use]
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        let mut out = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    #[must_use]
    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.nrows(), self.cols), (rhs.nrows(), rhs.cols));
        Self {
            cols: self.cols,
            rows: self
                .rows
                .iter()
                .zip(&rhs.rows)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Horizontal concatenation. All blocks need the same row count.
    pub fn hstack(blocks: &[&Self]) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Ok(Self::zeros(0, 0));
        };
        let rows = first.nrows();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            if b.nrows() != rows {
                return Err(Error::DimensionMismatch {
                    context: "hstack row count",
                    expected: rows,
                    found: b.nrows(),
                });
            }
            for (i, r) in b.rows.iter().enumerate() {
                for j in r.iter_ones() {
                    out.rows[i].set(offset + j, true);
                }
            }
            offset += b.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation. All blocks need the same column count.
    pub fn vstack(blocks: &[&Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let mut rows = Vec::new();
        for b in blocks {
            if b.cols != cols {
                return Err(Error::DimensionMismatch {
                    context: "vstack column count",
                    expected: cols,
                    found: b.cols,
                });
            }
            rows.extend(b.rows.iter().cloned());
        }
        Ok(Self { cols, rows })
    }

    #[must_use]
    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let mut out = Self::zeros(a.nrows() + b.nrows(), a.cols + b.cols);
        for (i, r) in a.rows.iter().enumerate() {
            for j in r.iter_ones() {
                out.rows[i].set(j, true);
            }
        }
        for (i, r) in b.rows.iter().enumerate() {
            for j in r.iter_ones() {
                out.rows[a.nrows() + i].set(a.cols + j, true);
            }
        }
        out
    }

    #[must_use]
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            cols: self.cols,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    #[must_use]
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        Self {
            cols: indices.len(),
            rows: self.rows.iter().map(|r| r.select(indices)).collect(),
        }
    }

    #[must_use]
    pub fn rank(&self) -> usize {
        super::rref(self).pivots.len()
    }

    /// True when this is a permutation matrix.
    #[must_use]
    pub fn is_permutation(&self) -> bool {
        self.nrows() == self.cols
            && self.rows.iter().all(|r| r.weight() == 1)
            && self.transpose().rows.iter().all(|c| c.weight() == 1)
    }
}

impl fmt::Display for F2Matrix {
    /// The shared text format: a `rows cols` header then one 0/1 line per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.nrows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Matrix {}x{} [", self.nrows(), self.cols)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

impl F2Matrix {
    /// Reads one matrix in the text format from a line iterator, advancing it.
    /// `line_no` tracks the current line for error messages.
    pub fn read_from<'a, I>(lines: &mut I, line_no: &mut usize) -> Result<Self>
    where
        I: Iterator<Item = &'a str>,
    {
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let header = loop {
            *line_no += 1;
            match lines.next() {
                None => return Err(parse_err(*line_no, "missing matrix header".into())),
                Some(l) if l.trim().is_empty() => continue,
                Some(l) => break l.trim(),
            }
        };
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(*line_no, format!("bad header {header:?}")))?;
        let [rows, cols] = dims[..] else {
            return Err(parse_err(*line_no, format!("bad header {header:?}")));
        };
        let mut data = Vec::with_capacity(rows);
        for _ in 0..rows {
            *line_no += 1;
            let l = lines
                .next()
                .ok_or_else(|| parse_err(*line_no, "unexpected end of matrix".into()))?
                .trim();
            if l.len() != cols {
                return Err(parse_err(
                    *line_no,
                    format!("row has {} entries, expected {cols}", l.len()),
                ));
            }
            data.push(
                l.parse()
                    .map_err(|_| parse_err(*line_no, format!("bad row {l:?}")))?,
            );
        }
        Self::from_rows(cols, data)
    }
}

impl FromStr for F2Matrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let mut line_no = 0;
        let m = Self::read_from(&mut lines, &mut line_no)?;
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse {
                line: line_no + 1,
                msg: format!("trailing content {extra:?}"),
            });
        }
        Ok(m)
    }
}
