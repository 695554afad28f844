//! Fixed-length packed bit vectors.

use smallvec::SmallVec;
use std::fmt;

type Words = SmallVec<[u64; 2]>;

/// A bit vector of fixed length; bit `i` lives in word `i / 64` at position `i % 64`.
/// Bits at positions `>= len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Words,
}

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: smallvec::smallvec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: smallvec::smallvec![u64::MAX; word_count(len)],
        };
        v.clear_tail();
        v
    }

    /// Ones exactly on `range`.
    pub fn range_ones(len: usize, range: std::ops::Range<usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in range {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_words(len: usize, words: &[u64]) -> Self {
        let mut v = Self::zeros(len);
        let n = v.words.len().min(words.len());
        v.words[..n].copy_from_slice(&words[..n]);
        v.clear_tail();
        v
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
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Population count of `self & other`.
    pub fn and_count(&self, other: &BitVec) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Parity of `self & other`.
    pub fn and_parity(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= b;
        }
    }

    #[inline]
    pub fn or_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    #[inline]
    pub fn and_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    /// Cyclic rotation towards higher indices: bit `i` moves to `(i + k) mod len`.
    pub fn rotate_up(&self, k: usize) -> BitVec {
        let n = self.len;
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        if k == 0 {
            return self.clone();
        }
        if n <= 64 {
            let w = self.words[0];
            let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
            let r = ((w << k) | (w >> (n - k))) & mask;
            let mut out = BitVec::zeros(n);
            out.words[0] = r;
            return out;
        }
        let mut out = self.shl_truncate(k);
        out.or_assign(&self.shr(n - k));
        out
    }

    /// `self << k`, dropping bits shifted past `len`.
    pub fn shl_truncate(&self, k: usize) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        let ws = k >> 6;
        let bs = k & 63;
        let nw = self.words.len();
        for i in (ws..nw).rev() {
            let mut w = self.words[i - ws] << bs;
            if bs != 0 && i > ws {
                w |= self.words[i - ws - 1] >> (64 - bs);
            }
            out.words[i] = w;
        }
        out.clear_tail();
        out
    }

    /// `self >> k`.
    pub fn shr(&self, k: usize) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        let ws = k >> 6;
        let bs = k & 63;
        let nw = self.words.len();
        for i in 0..nw.saturating_sub(ws) {
            let mut w = self.words[i + ws] >> bs;
            if bs != 0 && i + ws + 1 < nw {
                w |= self.words[i + ws + 1] << (64 - bs);
            }
            out.words[i] = w;
        }
        out
    }

    /// Copy of bits `[0, new_len)` (zero-extended when growing).
    pub fn resized(&self, new_len: usize) -> BitVec {
        let mut out = BitVec::zeros(new_len);
        let n = out.words.len().min(self.words.len());
        out.words[..n].copy_from_slice(&self.words[..n]);
        out.clear_tail();
        out
    }

    /// Bits `[start, start + len)` as a new vector; positions past the end read as zero.
    pub fn extract(&self, start: usize, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        let ws = start >> 6;
        let bs = start & 63;
        for i in 0..out.words.len() {
            let lo = self.words.get(ws + i).copied().unwrap_or(0);
            let hi = self.words.get(ws + i + 1).copied().unwrap_or(0);
            out.words[i] = if bs == 0 {
                lo
            } else {
                (lo >> bs) | (hi << (64 - bs))
            };
        }
        out.clear_tail();
        out
    }

    /// ORs `src` into positions `[start, start + src.len())`, clipped at `len`.
    pub fn or_at(&mut self, start: usize, src: &BitVec) {
        let ws = start >> 6;
        let bs = start & 63;
        for (i, &w) in src.words.iter().enumerate() {
            if let Some(d) = self.words.get_mut(ws + i) {
                *d |= w << bs;
            }
            if bs != 0 {
                if let Some(d) = self.words.get_mut(ws + i + 1) {
                    *d |= w >> (64 - bs);
                }
            }
        }
        self.clear_tail();
    }

    /// Reverses bit order: bit `i` moves to `len - 1 - i`.
    pub fn reversed(&self) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        for i in self.iter_ones() {
            out.set(self.len - 1 - i, true);
        }
        out
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + t)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Bits packed LSB-first into `ceil(len / 8)` bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let nb = self.len.div_ceil(8);
        let mut out = Vec::with_capacity(nb);
        for i in 0..nb {
            out.push((self.words[i / 8] >> ((i % 8) * 8)) as u8);
        }
        out
    }

    pub fn from_bytes(len: usize, bytes: &[u8]) -> BitVec {
        let mut v = BitVec::zeros(len);
        for (i, &b) in bytes.iter().enumerate().take(len.div_ceil(8)) {
            v.words[i / 8] |= (b as u64) << ((i % 8) * 8);
        }
        v.clear_tail();
        v
    }

    #[inline]
    fn clear_tail(&mut self) {
        let r = self.len & 63;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, "]")
    }
}
