//! Coefficients expressing `sum_j (h'_j)^i x_j` through superset sums `y_S`.
//!
//! With `h'_j = sum_{t in bits(j)} x^t` and Frobenius,
//! `(h'_j)^i = prod_{a in bits(i)} sum_{t in bits(j)} x^{t 2^a}`. Expanding
//! and grouping tuples by their set of distinct `t` gives
//! `sum_j (h'_j)^i x_j = sum_S f(i, S) y_S` with `|S| <= popcount(i)`.

use crate::error::{invalid, Result};
use crate::ring::{RingElem, RingParams};
use std::collections::BTreeMap;

/// `f(i, S)` for every `S` (as a bitmask over `0..n0`) with a nonzero coefficient,
/// ordered by `(|S|, S)`.
pub fn derive_fij(i: usize, n0: usize, params: RingParams) -> Result<Vec<(usize, RingElem)>> {
    if n0 == 0 || n0 >= usize::BITS as usize {
        return invalid(format!("n0 must be in 1..{}, got {n0}", usize::BITS));
    }
    let m = params.m();
    if i == 0 {
        return Ok(vec![(0, params.one())]);
    }
    let bits: Vec<usize> = (0..usize::BITS as usize)
        .filter(|a| i >> a & 1 == 1)
        .collect();
    let k = bits.len();
    let mut coeff: BTreeMap<(u32, usize), RingElem> = BTreeMap::new();
    let mut tuple = vec![0usize; k];
    loop {
        let s = tuple.iter().fold(0usize, |acc, &t| acc | 1 << t);
        let e = tuple
            .iter()
            .zip(&bits)
            .fold(0usize, |acc, (&t, &a)| (acc + ((t % m) << a) % m) % m);
        let slot = coeff
            .entry((s.count_ones(), s))
            .or_insert_with(|| params.zero());
        let mut bitsv = slot.bits().clone();
        bitsv.toggle(e);
        *slot = RingElem::from_bits(bitsv);
        // odometer
        let mut pos = 0;
        while pos < k {
            tuple[pos] += 1;
            if tuple[pos] < n0 {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
    }
    Ok(coeff
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((_, s), c)| (s, c))
        .collect())
}

/// `f(i, S)` for `0 <= i < r`.
#[derive(Debug, Clone)]
pub struct FijTable {
    n0: usize,
    rows: Vec<Vec<(usize, RingElem)>>,
}

impl FijTable {
    pub fn new(r: usize, n0: usize, params: RingParams) -> Result<Self> {
        let rows = (0..r)
            .map(|i| derive_fij(i, n0, params))
            .collect::<Result<Vec<_>>>()?;
        Ok(FijTable { n0, rows })
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn terms(&self, i: usize) -> &[(usize, RingElem)] {
        &self.rows[i]
    }

    /// Coefficient of `y_S` in row `i`, if nonzero.
    pub fn get(&self, i: usize, s: usize) -> Option<&RingElem> {
        self.rows[i].iter().find(|(t, _)| *t == s).map(|(_, c)| c)
    }

    /// Largest `|S|` referenced by any row.
    pub fn max_weight(&self) -> u32 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().map(|(s, _)| s.count_ones()))
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2poly::Poly;

    #[test]
    fn singletons_are_monomials() {
        let rp = RingParams::new(11, 1).unwrap();
        for i in 1..8 {
            let t = derive_fij(i, 4, rp).unwrap();
            for (s, c) in &t {
                if s.count_ones() == 1 {
                    let tt = s.trailing_zeros() as usize;
                    assert_eq!(*c, rp.monomial(i * tt), "i={i} t={tt}");
                }
            }
        }
    }

    #[test]
    fn power_of_two_rows_are_singletons_only() {
        let rp = RingParams::new(13, 1).unwrap();
        for i in [1usize, 2, 4] {
            let t = derive_fij(i, 5, rp).unwrap();
            assert_eq!(t.len(), 5);
            assert!(t.iter().all(|(s, _)| s.count_ones() == 1));
        }
    }

    #[test]
    fn row_three_pair_coefficient() {
        let rp = RingParams::new(11, 1).unwrap();
        let t = derive_fij(3, 2, rp).unwrap();
        let pair = t.iter().find(|(s, _)| *s == 0b11).unwrap();
        assert_eq!(pair.1.to_poly(), Poly::from_exponents([1, 2]));
    }
}
