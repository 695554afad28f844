//! Bit-level XOR accounting.
//!
//! Every working vector carries a mask of positions that may be nonzero.
//! XOR-ing `src` into `dst` costs `|mask(src) & mask(dst)|`: a write into a
//! position known to be zero is a copy, not an XOR. Masks depend only on the
//! code, never on data, so counts are deterministic per code.

use crate::bits::BitVec;
use std::fmt;
use std::ops::AddAssign;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    /// Superset-sum butterflies over the columns.
    RmTransform,
    /// Coefficient products and sums forming the per-row combinations.
    Combine,
    /// Multiplication by `(1+x^tau)^i`, truncation, systematic additions.
    Finish,
    /// Solving for erased or parity columns.
    Solve,
    /// Plain binary matrix-vector product.
    Naive,
}

impl Phase {
    pub const ALL: [Phase; 5] = [
        Phase::RmTransform,
        Phase::Combine,
        Phase::Finish,
        Phase::Solve,
        Phase::Naive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::RmTransform => "rm-transform",
            Phase::Combine => "combine",
            Phase::Finish => "finish",
            Phase::Solve => "solve",
            Phase::Naive => "naive",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct XorLedger {
    counts: [u64; 5],
}

impl XorLedger {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, phase: Phase, n: u64) {
        self.counts[phase.index()] += n;
    }

    pub fn get(&self, phase: Phase) -> u64 {
        self.counts[phase.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Total excluding the solve phase.
    pub fn syndrome_total(&self) -> u64 {
        self.total() - self.get(Phase::Solve)
    }
}

impl AddAssign for XorLedger {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.counts.iter_mut().zip(rhs.counts) {
            *a += b;
        }
    }
}

impl fmt::Display for XorLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Phase::ALL
            .iter()
            .filter(|p| self.get(**p) > 0)
            .map(|p| format!("{}={}", p.name(), self.get(*p)))
            .collect();
        write!(f, "total={} [{}]", self.total(), parts.join(", "))
    }
}

/// A working vector together with its may-be-nonzero mask.
#[derive(Clone, Debug)]
pub(crate) struct Tracked {
    pub v: BitVec,
    pub mask: BitVec,
}

impl Tracked {
    pub fn zero(len: usize) -> Self {
        Tracked {
            v: BitVec::zeros(len),
            mask: BitVec::zeros(len),
        }
    }

    pub fn new(v: BitVec, mask: BitVec) -> Self {
        Tracked { v, mask }
    }

    #[inline]
    pub fn xor_from(&mut self, src: &Tracked, ledger: &mut XorLedger, phase: Phase) {
        ledger.add(phase, self.mask.and_count(&src.mask) as u64);
        self.v.xor_assign(&src.v);
        self.mask.or_assign(&src.mask);
    }

    /// Multiplication by `x^k` in the cyclic ring.
    #[inline]
    pub fn rotated(&self, k: usize) -> Tracked {
        Tracked {
            v: self.v.rotate_up(k),
            mask: self.mask.rotate_up(k),
        }
    }

    /// `self <- self * (1 + x^k)`, evaluating only positions in `keep`
    /// (positions outside `keep` become unspecified and are masked off).
    pub fn times_one_plus(&mut self, k: usize, keep: Option<&BitVec>, ledger: &mut XorLedger) {
        let mut rot = self.rotated(k);
        if let Some(keep) = keep {
            self.v.and_assign(keep);
            self.mask.and_assign(keep);
            rot.v.and_assign(keep);
            rot.mask.and_assign(keep);
        }
        self.xor_from(&rot, ledger, Phase::Finish);
    }
}
