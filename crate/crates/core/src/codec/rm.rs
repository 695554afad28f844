//! Superset-sum (binary Reed-Muller style) transform over `2^n0` vectors.

use super::ledger::{Phase, Tracked, XorLedger};
use crate::bits::BitVec;
use crate::error::{invalid, Result};

/// `y_S = sum over i containing S of x_i`, for every index `S`.
/// The input length must be a power of two. The transform is an involution.
pub fn rm_transform(xs: &[BitVec]) -> Result<Vec<BitVec>> {
    let n = xs.len();
    if n == 0 || !n.is_power_of_two() {
        return invalid(format!("transform length must be a power of two, got {n}"));
    }
    let mut y = xs.to_vec();
    let mut half = 1;
    while half < n {
        for i in 0..n {
            if i & half == 0 {
                let (lo, hi) = y.split_at_mut(i + half);
                lo[i].xor_assign(&hi[0]);
            }
        }
        half <<= 1;
    }
    Ok(y)
}

/// Whether the butterfly into slot `i` at stage `j` feeds an output of weight <= `kmax`.
#[inline]
pub(crate) fn butterfly_needed(i: usize, j: usize, kmax: u32) -> bool {
    let low = (i & ((2usize << j) - 1)).count_ones();
    low <= kmax
}

/// In-place transform computing only outputs `y_S` with `|S| <= kmax`.
/// Slots with larger weight hold unspecified partial sums afterwards.
pub(crate) fn rm_transform_pruned(slots: &mut [Tracked], kmax: u32, ledger: &mut XorLedger) {
    let n = slots.len();
    debug_assert!(n.is_power_of_two());
    let stages = n.trailing_zeros() as usize;
    for j in 0..stages {
        let half = 1usize << j;
        for i in 0..n {
            if i & half == 0 && butterfly_needed(i, j, kmax) {
                let (lo, hi) = slots.split_at_mut(i + half);
                lo[i].xor_from(&hi[0], ledger, Phase::RmTransform);
            }
        }
    }
}

/// Number of butterflies the pruned transform performs.
pub fn pruned_butterflies(n0: usize, kmax: u32) -> u64 {
    let n = 1usize << n0;
    let mut count = 0;
    for j in 0..n0 {
        for i in 0..n {
            if i & (1 << j) == 0 && butterfly_needed(i, j, kmax) {
                count += 1;
            }
        }
    }
    count
}
