//! Packed binary matrices over GF(2).

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::ring::RingMatrix;
use std::fmt;

/// Row-major dense binary matrix; each row is `stride` words, unused tail bits zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        BitMatrix {
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

    pub fn from_rows(cols: usize, rows: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} bits, expected {cols}",
                    r.len()
                )));
            }
            m.set_row(i, r);
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
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
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / 64];
        if b {
            *w |= 1u64 << (c % 64);
        } else {
            *w &= !(1u64 << (c % 64));
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r))
    }

    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        debug_assert_eq!(v.len(), self.cols);
        let s = self.stride;
        self.data[r * s..(r + 1) * s].copy_from_slice(&v.words()[..s]);
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
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

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        for r in 0..self.rows {
            for k in self.row(r).iter_ones() {
                let src = other.row_words(k);
                for (x, y) in out.data[r * s..(r + 1) * s].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let mut acc = 0u64;
            for (a, b) in self.row_words(r).iter().zip(v.words()) {
                acc ^= a & b;
            }
            if acc.count_ones() & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(None).len()
    }

    /// Forward plus backward elimination to reduced row echelon form,
    /// mirroring every row operation onto `companion` when given.
    /// Returns the pivot columns in row order.
    fn eliminate(&mut self, mut companion: Option<&mut BitMatrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(row, p);
            if let Some(t) = companion.as_deref_mut() {
                t.swap_rows(row, p);
            }
            for r in 0..self.rows {
                if r != row && self.get(r, c) {
                    self.xor_rows(r, row);
                    if let Some(t) = companion.as_deref_mut() {
                        t.xor_rows(r, row);
                    }
                }
            }
            pivots.push(c);
            row += 1;
        }
        pivots
    }

    /// The unique `x` with `self * x = rhs`.
    pub fn solve(&self, rhs: &BitVec) -> Result<BitVec> {
        LeftSolver::new(self)?.solve(rhs)
    }

    pub fn invert(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(LeftSolver::new(self)?.left_inverse().clone())
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "row counts {} and {} differ",
                self.rows, other.rows
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                out.set(r, c, true);
            }
            for c in other.row(r).iter_ones() {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    /// Rows `r0..r0+h`, columns `c0..c0+w`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> BitMatrix {
        let mut out = BitMatrix::zeros(h, w);
        for r in 0..h {
            let row = self.row(r0 + r).shr(c0).resized(w);
            out.set_row(r, &row);
        }
        out
    }

    /// Columns `j*block..(j+1)*block` for each `j` in `blocks`, in that order.
    pub fn submatrix_columns(&self, blocks: &[usize], block: usize) -> Result<BitMatrix> {
        if block == 0 || !self.cols.is_multiple_of(block) {
            return Err(Error::DimensionMismatch(format!(
                "{} columns are not a multiple of block size {block}",
                self.cols
            )));
        }
        let nb = self.cols / block;
        if let Some(&b) = blocks.iter().find(|&&b| b >= nb) {
            return Err(Error::IndexOutOfRange(format!("column block {b} of {nb}")));
        }
        let mut out = BitMatrix::zeros(self.rows, blocks.len() * block);
        for r in 0..self.rows {
            let row = self.row(r);
            for (k, &b) in blocks.iter().enumerate() {
                for c in 0..block {
                    if row.get(b * block + c) {
                        out.set(r, k * block + c, true);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Rows packed LSB-first into `ceil(cols / 8)` bytes each, concatenated.
    pub fn to_row_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.rows * self.cols.div_ceil(8));
        for r in 0..self.rows {
            out.extend(self.row(r).to_bytes());
        }
        out
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Block matrix whose `(i, j)` block is the circulant of entry `(i, j)` with
/// its last `tau` rows and columns removed.
pub fn tmap(b: &RingMatrix) -> BitMatrix {
    let rp = b.params();
    let l = rp.row_size();
    let mut out = BitMatrix::zeros(b.rows() * l, b.cols() * l);
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            let e = b.get(i, j);
            if e.is_zero() {
                continue;
            }
            for r in 0..l {
                let row = e.bits().rotate_up(r).resized(l);
                for c in row.iter_ones() {
                    out.set(i * l + r, j * l + c, true);
                }
            }
        }
    }
    out
}

/// Precomputed left inverse of a full-column-rank matrix `A` (`R x C`):
/// `T A = [I_C; 0]` for an invertible `T`. The top `C` rows of `T` recover
/// `x` from `A x`; the bottom rows annihilate the column space of `A`.
#[derive(Clone, Debug)]
pub struct LeftSolver {
    top: BitMatrix,
    check: BitMatrix,
}

impl LeftSolver {
    pub fn new(a: &BitMatrix) -> Result<Self> {
        let mut w = a.clone();
        let mut t = BitMatrix::identity(a.rows);
        let pivots = w.eliminate(Some(&mut t));
        if pivots.len() < a.cols {
            return Err(Error::NotUniquelySolvable {
                rank: pivots.len(),
                cols: a.cols,
            });
        }
        let c = a.cols;
        Ok(LeftSolver {
            top: t.block(0, 0, c, a.rows),
            check: t.block(c, 0, a.rows - c, a.rows),
        })
    }

    pub fn unknowns(&self) -> usize {
        self.top.rows
    }

    pub fn left_inverse(&self) -> &BitMatrix {
        &self.top
    }

    /// Bit-level XORs of one solve: `weight - 1` for each nonempty row of the left inverse.
    pub fn xor_cost(&self) -> u64 {
        (0..self.top.rows)
            .map(|r| self.top.row_weight(r).saturating_sub(1) as u64)
            .sum()
    }

    pub fn solve(&self, rhs: &BitVec) -> Result<BitVec> {
        if rhs.len() != self.top.cols {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} bits, expected {}",
                rhs.len(),
                self.top.cols
            )));
        }
        if !self.check.mul_vec(rhs)?.is_zero() {
            return Err(Error::NoSolution);
        }
        self.top.mul_vec(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverse_and_rank() {
        let i = BitMatrix::identity(70);
        assert_eq!(i.rank(), 70);
        assert_eq!(i.invert().unwrap(), i);
    }

    #[test]
    fn singular_and_inconsistent() {
        let a = BitMatrix::from_fn(3, 3, |r, c| r == c || (r == 2 && c == 0));
        let mut s = a.clone();
        for c in 0..3 {
            s.set(1, c, a.get(0, c));
        }
        assert!(matches!(
            s.invert(),
            Err(Error::NotUniquelySolvable { rank: 2, cols: 3 })
        ));
        let tall = BitMatrix::from_fn(3, 1, |_, _| true);
        let bad = BitVec::from_bools([true, false, true]);
        assert_eq!(tall.solve(&bad), Err(Error::NoSolution));
        let good = BitVec::from_bools([true, true, true]);
        assert_eq!(tall.solve(&good).unwrap(), BitVec::from_bools([true]));
    }

    #[test]
    fn submatrix_columns_picks_blocks() {
        let m = BitMatrix::from_fn(2, 6, |r, c| (r + c) % 2 == 0);
        let s = m.submatrix_columns(&[2, 0], 2).unwrap();
        assert_eq!(
            s,
            BitMatrix::from_fn(2, 4, |r, c| (r + [4, 5, 0, 1][c]) % 2 == 0)
        );
        assert!(m.submatrix_columns(&[3], 2).is_err());
    }
}
