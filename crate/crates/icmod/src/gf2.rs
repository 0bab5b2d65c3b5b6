//! Exact linear algebra over the two-element field.
//!
//! Vectors and matrix rows are bit-packed into single machine words; every
//! problem size in scope (n <= 16 messages) fits comfortably. Bit `i` of a
//! length-`len` vector is stored at word position `len - 1 - i`, so the
//! packed word equals the integer value of the bit string read left to
//! right and the derived ordering is plain lexicographic order.

use crate::{Error, Result};
use std::fmt;

/// Hard cap on vector length / matrix columns, one word per row.
pub const MAX_DIM: usize = 32;

/// A vector over GF(2).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    word: u32,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_DIM, "vector length {len} exceeds {MAX_DIM}");
        BitVec { len, word: 0 }
    }

    /// Builds from a slice of 0/1 values, index 0 first.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b != 0);
        }
        v
    }

    /// Parses a bit string such as `"0100"`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.len() > MAX_DIM {
            return Err(Error::UnsupportedSize(format!("bit string of length {}", s.len())));
        }
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(Error::Parse(format!("invalid bit character {c:?} in {s:?}"))),
            }
        }
        Ok(v)
    }

    /// Vector whose packed word equals `index` (bit 0 is the most
    /// significant position). Inverse of [`BitVec::index`].
    pub fn from_index(len: usize, index: usize) -> Self {
        assert!(len <= MAX_DIM && (len == MAX_DIM || index < (1usize << len)));
        BitVec { len, word: index as u32 }
    }

    /// Integer value of the bit string read left to right.
    pub fn index(&self) -> usize {
        self.word as usize
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.word == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.word >> (self.len - 1 - i)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u32 << (self.len - 1 - i);
        if value {
            self.word |= mask;
        } else {
            self.word &= !mask;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len);
        BitVec { len: self.len, word: self.word ^ other.word }
    }

    pub fn weight(&self) -> u32 {
        self.word.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Dot product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        (self.word & other.word).count_ones() & 1 == 1
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
        write!(f, "BitVec({self})")
    }
}

/// A dense matrix over GF(2), one packed word per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    row_words: Vec<u32>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= MAX_DIM, "column count {cols} exceeds {MAX_DIM}");
        BitMatrix { rows, cols, row_words: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BitVec]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols));
        BitMatrix { rows: rows.len(), cols, row_words: rows.iter().map(|r| r.word).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.row_words[r] >> (self.cols - 1 - c)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let mask = 1u32 << (self.cols - 1 - c);
        if value {
            self.row_words[r] |= mask;
        } else {
            self.row_words[r] &= !mask;
        }
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec { len: self.cols, word: self.row_words[r] }
    }

    /// Rank over GF(2) by Gaussian elimination on a scratch copy.
    pub fn rank2(&self) -> usize {
        let mut work = self.row_words.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let mask = 1u32 << (self.cols - 1 - c);
            let Some(pivot) = (rank..self.rows).find(|&r| work[r] & mask != 0) else {
                continue;
            };
            work.swap(rank, pivot);
            for r in 0..self.rows {
                if r != rank && work[r] & mask != 0 {
                    work[r] ^= work[rank];
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Message indices participating in coded bit `j`: `{k : m[k][j] = 1}`.
    pub fn column_support(&self, j: usize) -> Result<Vec<usize>> {
        if j >= self.cols {
            return Err(Error::IndexOutOfRange { index: j, limit: self.cols });
        }
        Ok((0..self.rows).filter(|&r| self.get(r, j)).collect())
    }

    /// Row-vector product `x * M` over GF(2); the codeword of message word `x`.
    pub fn mat_vec_mul(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: x.len() });
        }
        let mut acc = 0u32;
        for r in 0..self.rows {
            if x.get(r) {
                acc ^= self.row_words[r];
            }
        }
        Ok(BitVec { len: self.cols, word: acc })
    }

    /// A row-echelon basis of the span of the given rows.
    pub fn row_basis(rows: impl IntoIterator<Item = BitVec>, cols: usize) -> Vec<BitVec> {
        let mut basis: Vec<u32> = Vec::new();
        for r in rows {
            assert_eq!(r.len(), cols);
            let mut w = r.word;
            for &b in &basis {
                let lead = 31 - b.leading_zeros();
                if (w >> lead) & 1 == 1 {
                    w ^= b;
                }
            }
            if w != 0 {
                basis.push(w);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis.into_iter().map(|word| BitVec { len: cols, word }).collect()
    }

    /// Reduces `v` modulo an echelon basis produced by [`BitMatrix::row_basis`].
    pub fn reduce(basis: &[BitVec], v: &BitVec) -> BitVec {
        let mut w = v.word;
        for b in basis {
            let lead = 31 - b.word.leading_zeros();
            if (w >> lead) & 1 == 1 {
                w ^= b.word;
            }
        }
        BitVec { len: v.len, word: w }
    }

    /// Solves `A z = b` treating the rows of `self` as equations over the
    /// `cols` unknowns. Returns one solution, free variables set to zero.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows);
        let w = self.cols + 1;
        assert!(w <= MAX_DIM);
        // Augmented rows: unknown bits first, right-hand side in the last bit.
        let mut aug: Vec<u32> = (0..self.rows)
            .map(|r| (self.row_words[r] << 1) | u32::from(b.get(r)))
            .collect();
        let mut pivot_col: Vec<usize> = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let mask = 1u32 << (w - 1 - c);
            let Some(p) = (rank..self.rows).find(|&r| aug[r] & mask != 0) else {
                continue;
            };
            aug.swap(rank, p);
            for r in 0..self.rows {
                if r != rank && aug[r] & mask != 0 {
                    aug[r] ^= aug[rank];
                }
            }
            pivot_col.push(c);
            rank += 1;
        }
        // Inconsistent if a zero row has a non-zero right-hand side.
        if aug[rank..].iter().any(|&row| row & 1 != 0) {
            return None;
        }
        let mut z = BitVec::zeros(self.cols);
        for (r, &c) in pivot_col.iter().enumerate() {
            if aug[r] & 1 != 0 {
                z.set(c, true);
            }
        }
        Some(z)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// All distinct codewords `x * M` over inputs `x` that agree with the fixed
/// coordinates, sorted lexicographically.
///
/// `fixed` assigns values to a subset of the row variables; the remaining
/// variables range over all combinations.
pub fn consistent_solutions(m: &BitMatrix, fixed: &[(usize, bool)]) -> Vec<BitVec> {
    let mut base = BitVec::zeros(m.rows());
    let mut is_fixed = vec![false; m.rows()];
    for &(i, v) in fixed {
        assert!(i < m.rows(), "fixed variable {i} out of range");
        assert!(!is_fixed[i], "variable {i} fixed twice");
        is_fixed[i] = true;
        base.set(i, v);
    }
    let free: Vec<usize> = (0..m.rows()).filter(|&i| !is_fixed[i]).collect();
    assert!(free.len() <= 20, "too many free variables for enumeration");
    let base_word = m.mat_vec_mul(&base).expect("dimensions checked");
    let mut out: Vec<BitVec> = Vec::with_capacity(1 << free.len());
    for combo in 0u32..(1 << free.len()) {
        let mut acc = base_word.word;
        for (bit, &var) in free.iter().enumerate() {
            if (combo >> bit) & 1 == 1 {
                acc ^= m.row_words[var];
            }
        }
        out.push(BitVec { len: m.cols(), word: acc });
    }
    out.sort_unstable();
    out.dedup();
    out
}
