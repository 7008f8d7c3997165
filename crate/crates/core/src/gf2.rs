//! Dense linear algebra over GF(2) on bit-packed rows.
//!
//! Rows are stored row-major as `u64` words, least significant bit first.
//! Bits past `cols` in the last word of each row are always zero.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD_BITS);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    /// Builds a matrix from boolean rows. All rows must have length `cols`.
    pub fn from_bool_rows<R: AsRef<[bool]>>(rows: &[R], cols: usize) -> Result<Self> {
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::invalid(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &bit) in row.iter().enumerate() {
                m.set(i, j, bit);
            }
        }
        Ok(m)
    }

    /// Parses rows written as `0`/`1` strings, e.g. `["110", "011"]`.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let parsed: Result<Vec<Vec<bool>>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::invalid(format!("bad matrix digit {other:?}"))),
                    })
                    .collect()
            })
            .collect();
        BitMatrix::from_bool_rows(&parsed?, cols)
    }

    /// A single column holding `bits`.
    pub fn column(bits: &[bool]) -> Self {
        let mut m = BitMatrix::zeros(bits.len(), 1);
        for (i, &b) in bits.iter().enumerate() {
            m.set(i, 0, b);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.words_per_row + col / WORD_BITS] >> (col % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        let word = &mut self.data[row * self.words_per_row + col / WORD_BITS];
        let mask = 1u64 << (col % WORD_BITS);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, row: usize, col: usize) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.words_per_row + col / WORD_BITS] ^= 1u64 << (col % WORD_BITS);
    }

    pub fn row_words(&self, row: usize) -> &[u64] {
        &self.data[row * self.words_per_row..(row + 1) * self.words_per_row]
    }

    pub fn count_ones(&self, row: usize) -> usize {
        self.row_words(row).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Horizontal concatenation `[P0 | P1 | ...]`. All parts need the same row count.
    pub fn hstack(parts: &[&BitMatrix]) -> Result<Self> {
        let rows = parts.first().map_or(0, |p| p.rows);
        if let Some(bad) = parts.iter().find(|p| p.rows != rows) {
            return Err(Error::invalid(format!(
                "cannot stack matrices with {} and {} rows",
                rows, bad.rows
            )));
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = BitMatrix::zeros(rows, cols);
        let mut offset = 0;
        for part in parts {
            for r in 0..rows {
                for c in 0..part.cols {
                    if part.get(r, c) {
                        out.set(r, offset + c, true);
                    }
                }
            }
            offset += part.cols;
        }
        Ok(out)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * w);
        head[lo * w..(lo + 1) * w].swap_with_slice(&mut tail[..w]);
    }

    /// Forward Gaussian elimination with pivots restricted to `pivot_cols`,
    /// scanned left to right. Returns the number of pivots `r`; afterwards
    /// rows `r..` are zero on every column of `pivot_cols`.
    pub fn eliminate(&mut self, pivot_cols: Range<usize>) -> usize {
        assert!(pivot_cols.end <= self.cols, "pivot range exceeds column count");
        let w = self.words_per_row;
        let mut rank = 0;
        for col in pivot_cols {
            if rank == self.rows {
                break;
            }
            let word = col / WORD_BITS;
            let mask = 1u64 << (col % WORD_BITS);
            let Some(p) = (rank..self.rows).find(|&i| self.data[i * w + word] & mask != 0) else {
                continue;
            };
            self.swap_rows(rank, p);
            // Rows at and below `rank` are zero left of `col` on the pivot range,
            // so the XOR can start at the pivot's word.
            let (head, tail) = self.data.split_at_mut((rank + 1) * w);
            let pivot = &head[rank * w + word..];
            for row in tail.chunks_exact_mut(w) {
                if row[word] & mask != 0 {
                    for (d, s) in row[word..].iter_mut().zip(pivot) {
                        *d ^= *s;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// True if row `row` has no set bit in columns `cols`.
    pub fn row_is_zero_on(&self, row: usize, cols: Range<usize>) -> bool {
        cols.into_iter().all(|c| !self.get(row, c))
    }

    pub fn row_is_zero(&self, row: usize) -> bool {
        self.row_words(row).iter().all(|&w| w == 0)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        write!(f, "]")
    }
}

/// Dimension of the row space.
pub fn rank(m: &BitMatrix) -> usize {
    let mut scratch = m.clone();
    scratch.eliminate(0..m.cols)
}

pub fn is_full_row_rank(m: &BitMatrix) -> bool {
    m.rows <= m.cols && rank(m) == m.rows
}

/// Whether `E y = c` has a solution, i.e. `c` lies in the column space of `E`.
pub fn consistent(e: &BitMatrix, c: &[bool]) -> Result<bool> {
    if c.len() != e.rows {
        return Err(Error::invalid(format!(
            "right-hand side has length {}, matrix has {} rows",
            c.len(),
            e.rows
        )));
    }
    let mut aug = BitMatrix::hstack(&[e, &BitMatrix::column(c)])?;
    let r = aug.eliminate(0..e.cols);
    Ok((r..aug.rows).all(|i| !aug.get(i, e.cols)))
}

/// Whether every column of `A` lies in the column space of `E`.
pub fn image_contains(e: &BitMatrix, a: &BitMatrix) -> Result<bool> {
    if a.rows != e.rows {
        return Err(Error::invalid(format!(
            "row counts differ: E has {}, A has {}",
            e.rows, a.rows
        )));
    }
    let mut aug = BitMatrix::hstack(&[e, a])?;
    let r = aug.eliminate(0..e.cols);
    Ok((r..aug.rows).all(|i| aug.row_is_zero(i)))
}
