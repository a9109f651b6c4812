//! Word-packed GF(2) vectors and matrices with row reduction.
//!
//! Every bit vector carries an explicit length; all operations mask the
//! trailing bits of the last word so equality and popcount stay honest.

use crate::error::{Error, Result};
use std::fmt;

const WORD_BITS: usize = 64;

/// A fixed-length bit vector over GF(2), packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    /// Build from an iterator of bits, most significant (index 0) first.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = BitVec::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            v.set(i, *b);
        }
        v
    }

    /// Parse a string of '0'/'1' characters.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(Error::Parse {
                        index: i,
                        message: format!("expected '0' or '1', found {c:?}"),
                    })
                }
            }
        }
        Ok(BitVec::from_bits(bits))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let w = i / WORD_BITS;
        let b = i % WORD_BITS;
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the AND of two vectors: `popcount(a & b) mod 2`.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Concatenate two vectors (self first).
    pub fn concat(&self, other: &BitVec) -> BitVec {
        BitVec::from_bits(self.iter().chain(other.iter()))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An elementary row operation applied during Gaussian elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowOp {
    Swap(usize, usize),
    /// `rows[target] ^= rows[source]`
    AddInto {
        source: usize,
        target: usize,
    },
}

/// A dense bit matrix stored as one `BitVec` per row.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Self {
        let cols = rows.first().map_or(0, BitVec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged bit matrix");
        BitMatrix { rows, cols }
    }

    /// Parse newline-separated rows of '0'/'1' characters. A '|' inside a row
    /// is ignored, so Z|X block notation round-trips.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let cleaned: String = line.chars().filter(|c| *c != '|').collect();
            rows.push(BitVec::parse(&cleaned)?);
        }
        if rows.is_empty() {
            return Err(Error::Parse {
                index: 0,
                message: "empty matrix".into(),
            });
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("rows have unequal lengths".into()));
        }
        Ok(BitMatrix { rows, cols })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v);
    }

    pub fn apply_row_op(&mut self, op: &RowOp) {
        match *op {
            RowOp::Swap(a, b) => self.rows.swap(a, b),
            RowOp::AddInto { source, target } => {
                let src = self.rows[source].clone();
                self.rows[target].xor_assign(&src);
            }
        }
    }

    /// Transpose.
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in 0..self.cols {
                if row.get(c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// GF(2) matrix product.
    pub fn multiply(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.n_rows());
        let ot = other.transpose();
        let mut out = BitMatrix::zeros(self.rows.len(), other.n_cols());
        for (r, row) in self.rows.iter().enumerate() {
            for c in 0..other.n_cols() {
                if row.dot(ot.row(c)) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    /// Reduced row-echelon form, returning the reduced matrix, its rank, and
    /// the elementary row operations that were applied.
    pub fn rref(&self) -> (BitMatrix, usize, Vec<RowOp>) {
        let mut m = self.clone();
        let mut ops = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows.len() {
                break;
            }
            let Some(r) = (pivot_row..m.rows.len()).find(|&r| m.get(r, col)) else {
                continue;
            };
            if r != pivot_row {
                let op = RowOp::Swap(r, pivot_row);
                m.apply_row_op(&op);
                ops.push(op);
            }
            for other in 0..m.rows.len() {
                if other != pivot_row && m.get(other, col) {
                    let op = RowOp::AddInto {
                        source: pivot_row,
                        target: other,
                    };
                    m.apply_row_op(&op);
                    ops.push(op);
                }
            }
            pivot_row += 1;
        }
        (m, pivot_row, ops)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Solve `xᵀ · self = target` for a row-combination `x`, if one exists.
    ///
    /// Returns the indicator vector over rows whose XOR equals `target`.
    pub fn solve_row_combination(&self, target: &BitVec) -> Option<BitVec> {
        assert_eq!(target.len(), self.cols);
        let n = self.rows.len();
        // Augment each row with an identity tag so the elimination tracks
        // which original rows were combined.
        let mut work: Vec<(BitVec, BitVec)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut tag = BitVec::zeros(n);
                tag.set(i, true);
                (r.clone(), tag)
            })
            .collect();
        let mut t = target.clone();
        let mut t_tag = BitVec::zeros(n);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(r) = (pivot_row..n).find(|&r| work[r].0.get(col)) else {
                continue;
            };
            work.swap(r, pivot_row);
            let (prow, ptag) = (work[pivot_row].0.clone(), work[pivot_row].1.clone());
            for (row, tag) in work.iter_mut().skip(pivot_row + 1) {
                if row.get(col) {
                    row.xor_assign(&prow);
                    tag.xor_assign(&ptag);
                }
            }
            if t.get(col) {
                t.xor_assign(&prow);
                t_tag.xor_assign(&ptag);
            }
            pivot_row += 1;
            if pivot_row == n {
                break;
            }
        }
        if t.is_zero() {
            Some(t_tag)
        } else {
            None
        }
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_has_full_rank() {
        let mut m = BitMatrix::zeros(3, 3);
        for i in 0..3 {
            m.set(i, i, true);
        }
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn parse_round_trip() {
        let m = BitMatrix::parse("0110|1001\n1010|0101").unwrap();
        assert_eq!(m.n_rows(), 2);
        assert_eq!(m.n_cols(), 8);
        assert_eq!(m.row(0).to_string(), "01101001");
    }

    #[test]
    fn solve_row_combination_finds_witness() {
        let m = BitMatrix::parse("1100\n0110\n0011").unwrap();
        let target = BitVec::parse("1010").unwrap(); // row0 ^ row1
        let combo = m.solve_row_combination(&target).unwrap();
        assert_eq!(combo.to_string(), "110");
        let missing = BitVec::parse("1000").unwrap();
        assert!(m.solve_row_combination(&missing).is_none());
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let rows = rng.random_range(1..7usize);
            let cols = rng.random_range(1..13usize);
            let mut m = BitMatrix::zeros(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, rng.random_bool(0.5));
                }
            }
            let (reduced, rank, _) = m.rref();
            let (again, rank2, ops) = reduced.rref();
            prop_assert_eq!(&again, &reduced);
            prop_assert_eq!(rank, rank2);
            prop_assert!(ops.is_empty());
        }

        #[test]
        fn rank_matches_independent_elimination(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let mut m = BitMatrix::zeros(6, 12);
            for r in 0..6 {
                for c in 0..12 {
                    m.set(r, c, rng.random_bool(0.5));
                }
            }
            // Row-by-row Gaussian oracle: count rows independent of those
            // already kept, eliminating with plain Vec<bool> arithmetic.
            let mut basis: Vec<Vec<bool>> = Vec::new();
            for r in 0..6 {
                let mut row: Vec<bool> = (0..12).map(|c| m.get(r, c)).collect();
                for b in &basis {
                    let lead = b.iter().position(|&x| x).unwrap();
                    if row[lead] {
                        for (x, y) in row.iter_mut().zip(b) {
                            *x ^= *y;
                        }
                    }
                }
                if row.iter().any(|&x| x) {
                    // reduce the new row against nothing further; keep as-is
                    basis.push(row);
                    basis.sort_by_key(|b| b.iter().position(|&x| x).unwrap());
                }
            }
            prop_assert_eq!(m.rank(), basis.len());
        }
    }
}
