//! Mapping between a byte stream and code stripes.
//!
//! Input bytes form a bit stream, least significant bit first. Stripe `s`
//! holds bits `[s B, (s + 1) B)` with `B = data_cols * (m - tau)`; bit `k`
//! of data column `c` is stream bit `s B + c (m - tau) + k`. The final stripe
//! is zero-padded.

use varray_core::BitVec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StripeLayout {
    pub data_cols: usize,
    pub row_size: usize,
}

impl StripeLayout {
    pub fn bits_per_stripe(&self) -> usize {
        self.data_cols * self.row_size
    }

    pub fn bytes_per_column(&self) -> usize {
        self.row_size.div_ceil(8)
    }

    pub fn stripe_count(&self, payload_len: u64) -> u64 {
        (payload_len * 8).div_ceil(self.bits_per_stripe() as u64)
    }

    /// Data columns of stripe `s` taken from the packed input stream.
    pub fn split(&self, stream: &BitVec, s: usize) -> Vec<BitVec> {
        let base = s * self.bits_per_stripe();
        (0..self.data_cols)
            .map(|c| stream.extract(base + c * self.row_size, self.row_size))
            .collect()
    }

    /// Writes the data columns of stripe `s` back into `stream`.
    pub fn join(&self, stream: &mut BitVec, s: usize, cols: &[BitVec]) {
        let base = s * self.bits_per_stripe();
        for (c, col) in cols.iter().take(self.data_cols).enumerate() {
            stream.or_at(base + c * self.row_size, col);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_join_round_trip() {
        let layout = StripeLayout {
            data_cols: 5,
            row_size: 10,
        };
        let bytes: Vec<u8> = (0..23u8).map(|i| i.wrapping_mul(37)).collect();
        let stream = BitVec::from_bytes(bytes.len() * 8, &bytes);
        let stripes = layout.stripe_count(bytes.len() as u64) as usize;
        assert_eq!(stripes, 4);
        let mut out = BitVec::zeros(stripes * layout.bits_per_stripe());
        for s in 0..stripes {
            layout.join(&mut out, s, &layout.split(&stream, s));
        }
        assert_eq!(&out.to_bytes()[..bytes.len()], &bytes[..]);
    }
}
