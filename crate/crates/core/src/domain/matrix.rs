use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// An `n × d` matrix of ±1 entries stored as packed sign bits, one bit-column
/// per coordinate (bit set ⇔ entry is +1).
///
/// Coordinates are numbered `1..=d` to match `x(1), …, x(d)`; coordinate `d`
/// is the target. Rows are numbered from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleMatrix {
    n: usize,
    d: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SampleMatrix {
    /// Builds a matrix from a predicate giving `true` for +1 entries.
    pub fn from_fn(n: usize, d: usize, mut plus: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        Self::check_shape(n, d)?;
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; words * d];
        for c in 1..=d {
            let col = &mut bits[(c - 1) * words..c * words];
            for r in 0..n {
                if plus(r, c) {
                    col[r / 64] |= 1 << (r % 64);
                }
            }
        }
        Ok(Self { n, d, words, bits })
    }

    /// Builds a matrix from explicit rows of ±1 values.
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::InvalidParameter(format!(
                    "row {r} has {} entries, expected {d}",
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|&&v| v != 1 && v != -1) {
                return Err(Error::InvalidParameter(format!("row {r} contains {v}, expected ±1")));
            }
        }
        Self::from_fn(rows.len(), d, |r, c| rows[r][c - 1] == 1)
    }

    /// Builds a matrix column by column from packed words. Bits beyond row
    /// `n` in the last word are cleared.
    pub(crate) fn from_columns(n: usize, d: usize, mut fill: impl FnMut(usize, &mut [u64])) -> Result<Self> {
        Self::check_shape(n, d)?;
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; words * d];
        let tail = Self::tail_mask(n);
        for c in 1..=d {
            let col = &mut bits[(c - 1) * words..c * words];
            fill(c, col);
            if let Some(last) = col.last_mut() {
                *last &= tail;
            }
        }
        Ok(Self { n, d, words, bits })
    }

    fn check_shape(n: usize, d: usize) -> Result<()> {
        if n < 1 || d < 2 {
            return Err(Error::InvalidParameter(format!(
                "sample matrix needs n ≥ 1 and d ≥ 2, got {n}×{d}"
            )));
        }
        Ok(())
    }

    fn tail_mask(n: usize) -> u64 {
        match n % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Entry at `(row, coord)` as ±1.
    pub fn get(&self, row: usize, coord: usize) -> i8 {
        assert!(row < self.n && (1..=self.d).contains(&coord), "index out of range");
        if self.bit(row, coord) {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub(crate) fn bit(&self, row: usize, coord: usize) -> bool {
        (self.column(coord)[row / 64] >> (row % 64)) & 1 == 1
    }

    #[inline]
    pub(crate) fn column(&self, coord: usize) -> &[u64] {
        &self.bits[(coord - 1) * self.words..coord * self.words]
    }

    /// Number of rows where coordinates `a` and `b` agree.
    pub(crate) fn agreements(&self, a: usize, b: usize) -> u64 {
        let (ca, cb) = (self.column(a), self.column(b));
        let tail = Self::tail_mask(self.n);
        let last = self.words - 1;
        ca.iter()
            .zip(cb)
            .enumerate()
            .map(|(w, (x, y))| {
                let agree = !(x ^ y);
                let agree = if w == last { agree & tail } else { agree };
                u64::from(agree.count_ones())
            })
            .sum()
    }

    /// Number of +1 entries in a coordinate.
    pub fn column_plus_count(&self, coord: usize) -> u64 {
        self.column(coord).iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Copies the given rows (in the given order) into a new matrix.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        Self::from_columns(rows.len(), self.d, |c, col| {
            let src = self.column(c);
            for (i, &r) in rows.iter().enumerate() {
                if (src[r / 64] >> (r % 64)) & 1 == 1 {
                    col[i / 64] |= 1 << (i % 64);
                }
            }
        })
    }

    /// Contiguous block of rows `[start, end)`.
    pub fn row_range(&self, start: usize, end: usize) -> Result<Self> {
        assert!(start <= end && end <= self.n);
        let rows: Vec<usize> = (start..end).collect();
        self.select_rows(&rows)
    }

    /// Uniformly random partition into a part of `first` rows and the rest.
    pub fn random_split<R: Rng + ?Sized>(&self, first: usize, rng: &mut R) -> Result<(Self, Self)> {
        if first == 0 || first >= self.n {
            return Err(Error::InvalidParameter(format!(
                "split size {first} must lie strictly between 0 and n = {}",
                self.n
            )));
        }
        let mut perm: Vec<usize> = (0..self.n).collect();
        perm.shuffle(rng);
        let (a, b) = perm.split_at(first);
        Ok((self.select_rows(a)?, self.select_rows(b)?))
    }
}
