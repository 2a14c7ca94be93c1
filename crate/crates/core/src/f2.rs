//! Bit-packed linear algebra over GF(2).
//!
//! Bits are packed 64 per word, little-endian within a word: bit `c` of a row
//! lives in word `c / 64` at position `c % 64`. Padding bits past the last
//! column are always zero, so word-wise XOR and popcount are exact.

use std::fmt;

use crate::error::{Error, Result};

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % 64 {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let mut v = Self::zeros(text.chars().count());
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(Error::parse(
                        format!("column {i}"),
                        format!("expected '0' or '1', found {other:?}"),
                    ))
                }
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of equal length. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has length {}, expected {cols}",
                    row.len()
                )));
            }
            m.row_words_mut(r).copy_from_slice(row.words());
        }
        Ok(m)
    }

    /// Parses one row per line of `0`/`1` characters. Blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut cols = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = BitVec::parse(line).map_err(|e| match e {
                Error::Parse { location, message } => {
                    Error::parse(format!("line {}, {location}", lineno + 1), message)
                }
                other => other,
            })?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(Error::parse(
                        format!("line {}", lineno + 1),
                        format!("row has {} columns, expected {c}", row.len()),
                    ))
                }
                _ => {}
            }
            rows.push(row);
        }
        Self::from_rows(cols.unwrap_or(0), &rows)
    }

    /// Convenience constructor from string literals; panics on bad input.
    pub fn from_strs(rows: &[&str]) -> Self {
        Self::parse(&rows.join("\n")).expect("valid 0/1 rows")
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
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of bounds");
        (self.data[r * self.stride + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of bounds");
        let w = &mut self.data[r * self.stride + c / 64];
        let mask = 1u64 << (c % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of bounds");
        self.data[r * self.stride + c / 64] ^= 1u64 << (c % 64);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_vecs(&self) -> Vec<BitVec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        assert_eq!(v.len(), self.cols);
        self.row_words_mut(r).copy_from_slice(v.words());
    }

    pub fn push_row(&mut self, v: &BitVec) {
        assert_eq!(v.len(), self.cols);
        self.data.extend_from_slice(v.words());
        self.rows += 1;
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn row_count_ones(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        assert!(dst != src && dst < self.rows && src < self.rows);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x ^= y;
        }
    }

    pub fn xor_row_with(&mut self, dst: usize, v: &BitVec) {
        assert_eq!(v.len(), self.cols);
        for (x, y) in self.row_words_mut(dst).iter_mut().zip(v.words()) {
            *x ^= y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `col[dst] ^= col[src]`.
    pub fn add_col(&mut self, src: usize, dst: usize) {
        assert!(src < self.cols && dst < self.cols);
        for r in 0..self.rows {
            if self.get(r, src) {
                self.flip(r, dst);
            }
        }
    }

    pub fn col(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn col_is_zero(&self, c: usize) -> bool {
        (0..self.rows).all(|r| !self.get(r, c))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in BitVec::from_words(self.cols, self.row_words(r).to_vec()).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            for k in row.iter_ones() {
                for (x, y) in out.row_words_mut(r).iter_mut().zip(other.row_words(k)) {
                    *x ^= y;
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(self.cols, v.len());
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            if parity % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "vstack of widths {} and {}",
                self.cols, other.cols
            )));
        }
        let mut out = self.clone();
        out.data.extend_from_slice(&other.data);
        out.rows += other.rows;
        Ok(out)
    }

    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack of heights {} and {}",
                self.rows, other.rows
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            for c in 0..other.cols {
                if other.get(r, c) {
                    out.set(r, self.cols + c, true);
                }
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        out
    }

    pub fn select_cols(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    /// Reduced row echelon form with leftmost-pivot, topmost-row elimination.
    /// Returns the reduced matrix and its strictly increasing pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of the right null space `{v : self * v = 0}`, one vector per row,
    /// ordered by the free column it is anchored on.
    pub fn kernel_basis(&self) -> BitMatrix {
        let (red, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = BitMatrix::zeros(0, self.cols);
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::unit(self.cols, f);
            for (i, &p) in pivots.iter().enumerate() {
                if red.get(i, f) {
                    v.set(p, true);
                }
            }
            basis.push_row(&v);
        }
        basis
    }

    /// True iff both matrices span the same row space.
    pub fn row_space_equal(&self, other: &BitMatrix) -> Result<bool> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "row spaces of widths {} and {} are incomparable",
                self.cols, other.cols
            )));
        }
        let ra = self.rank();
        let rb = other.rank();
        Ok(ra == rb && self.vstack(other)?.rank() == ra)
    }

    /// Finds `x` with `x * self = b`, i.e. expresses `b` as a combination of
    /// rows. Returns `None` when `b` lies outside the row space.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.cols, "target length must equal column count");
        // Echelon form with the row combination tracked alongside.
        let mut work = self.clone();
        let mut combo = BitMatrix::identity(self.rows);
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| work.get(i, c)) else {
                continue;
            };
            work.swap_rows(r, p);
            combo.swap_rows(r, p);
            for i in (r + 1)..self.rows {
                if work.get(i, c) {
                    work.xor_rows(i, r);
                    combo.xor_rows(i, r);
                }
            }
            pivots.push((r, c));
            r += 1;
        }
        let mut residual = b.clone();
        let mut x = BitVec::zeros(self.rows);
        for &(row, col) in &pivots {
            if residual.get(col) {
                residual.xor_assign(&work.row(row));
                x.xor_assign(&combo.row(row));
            }
        }
        residual.is_zero().then_some(x)
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&BitMatrix::identity(n)).ok()?;
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(red.select_cols(&cols))
    }

    /// Indices of a maximal set of linearly independent rows, chosen greedily
    /// from the top.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut basis = BitMatrix::zeros(0, self.cols);
        let mut keep = Vec::new();
        for r in 0..self.rows {
            basis.push_row(&self.row(r));
            if basis.rank() == keep.len() + 1 {
                keep.push(r);
            } else {
                basis.rows -= 1;
                basis.data.truncate(basis.rows * basis.stride);
            }
        }
        keep
    }

    /// One row per line of `0`/`1` characters, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn steane_hx() -> BitMatrix {
        BitMatrix::from_strs(&["0110110", "1010101", "0001111"])
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(4).rank(), 4);
        assert_eq!(steane_hx().rank(), 3);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(0, 0).rank(), 0);
        assert_eq!(BitMatrix::zeros(4, 0).rank(), 0);
    }

    #[test]
    fn rref_examples() {
        let (r, p) = BitMatrix::identity(5).rref();
        assert_eq!(r, BitMatrix::identity(5));
        assert_eq!(p, vec![0, 1, 2, 3, 4]);

        let (r, p) = BitMatrix::from_strs(&["11", "11"]).rref();
        assert_eq!(r, BitMatrix::from_strs(&["11", "00"]));
        assert_eq!(p, vec![0]);

        let (r, p) = steane_hx().rref();
        assert_eq!(p, vec![0, 1, 3]);
        assert_eq!(r, BitMatrix::from_strs(&["1010101", "0110110", "0001111"]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(BitMatrix::identity(4).kernel_basis().rows(), 0);
        let k = BitMatrix::from_strs(&["11"]).kernel_basis();
        assert_eq!(k, BitMatrix::from_strs(&["11"]));

        // Enumerate all 2^7 vectors and keep the ones annihilated by H_X.
        let h = steane_hx();
        let mut annihilated = Vec::new();
        for bits in 0u32..128 {
            let v = BitVec::from_bools(&(0..7).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>());
            if h.mul_vec(&v).is_zero() {
                annihilated.push(v);
            }
        }
        assert_eq!(annihilated.len(), 16);
        let basis = h.kernel_basis();
        assert_eq!(basis.rows(), 4);
        for r in 0..basis.rows() {
            assert!(h.mul_vec(&basis.row(r)).is_zero());
        }
        let enumerated = BitMatrix::from_rows(7, &annihilated).unwrap();
        assert!(enumerated.row_space_equal(&basis).unwrap());
    }

    #[test]
    fn row_space_examples() {
        let m = steane_hx();
        let permuted = m.select_rows(&[2, 0, 1]);
        assert!(m.row_space_equal(&permuted).unwrap());
        let mut added = m.clone();
        added.xor_rows(0, 1);
        assert!(m.row_space_equal(&added).unwrap());
        let a = BitMatrix::from_strs(&["10"]);
        let b = BitMatrix::from_strs(&["01"]);
        assert!(!a.row_space_equal(&b).unwrap());
        assert!(matches!(
            a.row_space_equal(&BitMatrix::zeros(1, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let id = BitMatrix::identity(4);
        let b = BitVec::parse("1011").unwrap();
        assert_eq!(id.solve(&b), Some(b.clone()));
        let zero = BitVec::zeros(4);
        assert_eq!(id.solve(&zero), Some(zero));
        let a = BitMatrix::from_strs(&["11"]);
        assert_eq!(a.solve(&BitVec::parse("10").unwrap()), None);
    }

    #[test]
    fn inverse_and_independent_rows() {
        let m = BitMatrix::from_strs(&["110", "011", "001"]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), BitMatrix::identity(3));
        assert!(BitMatrix::from_strs(&["11", "11"]).inverse().is_none());
        let dup = BitMatrix::from_strs(&["110", "011", "101", "001"]);
        assert_eq!(dup.independent_rows(), vec![0, 1, 3]);
    }

    #[test]
    fn parse_rejects_ragged_and_bad_chars() {
        assert!(BitMatrix::parse("01\n011").is_err());
        assert!(BitMatrix::parse("0x1").is_err());
        let m = BitMatrix::parse("").unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 0));
    }

    #[test]
    fn text_round_trip_wide() {
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 0, true);
        m.set(1, 64, true);
        m.set(2, 129, true);
        assert_eq!(BitMatrix::parse(&m.to_text()).unwrap(), m);
    }

    fn arb_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = BitMatrix> {
        (0..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
                let mut m = BitMatrix::zeros(r, c);
                for (i, b) in bits.into_iter().enumerate() {
                    if b {
                        m.set(i / c, i % c, true);
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_matches_rref(m in arb_matrix(12, 80)) {
            let (red, pivots) = m.rref();
            prop_assert_eq!(m.rank(), red.rank());
            prop_assert_eq!(m.rank(), pivots.len());
            prop_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(m.row_space_equal(&red).unwrap());
        }

        #[test]
        fn kernel_is_annihilated(m in arb_matrix(10, 70)) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.rows() + m.rank(), m.cols());
            for r in 0..k.rows() {
                prop_assert!(m.mul_vec(&k.row(r)).is_zero());
            }
            prop_assert_eq!(k.rank(), k.rows());
        }

        #[test]
        fn row_mixing_preserves_space(m in arb_matrix(8, 20), ops in proptest::collection::vec((0usize..8, 0usize..8), 0..20)) {
            let mut mixed = m.clone();
            for (a, b) in ops {
                if m.rows() > 1 {
                    let (a, b) = (a % m.rows(), b % m.rows());
                    if a != b { mixed.xor_rows(a, b); } else { mixed.swap_rows(a, (a + 1) % m.rows()); }
                }
            }
            prop_assert!(m.row_space_equal(&mixed).unwrap());
            prop_assert!(mixed.row_space_equal(&m).unwrap());
        }

        #[test]
        fn row_space_equal_is_equivalence(
            a in arb_matrix(4, 5),
            mix1 in proptest::collection::vec((0usize..4, 0usize..4), 0..8),
            mix2 in proptest::collection::vec((0usize..4, 0usize..4), 0..8),
            flip in proptest::option::of((0usize..4, 0usize..5)),
        ) {
            let mix = |m: &BitMatrix, ops: &[(usize, usize)]| {
                let mut out = m.clone();
                for &(x, y) in ops {
                    if m.rows() > 1 && x % m.rows() != y % m.rows() {
                        out.xor_rows(x % m.rows(), y % m.rows());
                    }
                }
                out
            };
            let b = mix(&a, &mix1);
            let mut c = mix(&b, &mix2);
            if let Some((r, col)) = flip {
                if c.rows() > 0 { c.flip(r % c.rows(), col % c.cols()); }
            }
            prop_assert!(a.row_space_equal(&a).unwrap());
            let ab = a.row_space_equal(&b).unwrap();
            let bc = b.row_space_equal(&c).unwrap();
            let ac = a.row_space_equal(&c).unwrap();
            prop_assert_eq!(ab, b.row_space_equal(&a).unwrap());
            prop_assert_eq!(bc, c.row_space_equal(&b).unwrap());
            if ab && bc { prop_assert!(ac); }
            if ab && ac { prop_assert!(bc); }
        }

        #[test]
        fn solve_reconstructs(m in arb_matrix(8, 30), pick in proptest::collection::vec(any::<bool>(), 8)) {
            let mut b = BitVec::zeros(m.cols());
            for r in 0..m.rows() {
                if pick[r] { b.xor_assign(&m.row(r)); }
            }
            let x = m.solve(&b).expect("b is in the row space");
            let mut rebuilt = BitVec::zeros(m.cols());
            for r in x.iter_ones() { rebuilt.xor_assign(&m.row(r)); }
            prop_assert_eq!(rebuilt, b);
        }
    }
}
