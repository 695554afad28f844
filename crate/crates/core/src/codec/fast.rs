//! Fast syndrome computation for the Vandermonde families.
//!
//! Columns enter in reversed coefficient order, `x_j(x) = sum_k x_{j,k} x^{m-1-k}`,
//! so the `tau` padding bits are the low coefficients and the syndrome bits
//! are the coefficients of degree `tau..m`.

use super::fij::FijTable;
use super::ledger::{Phase, Tracked, XorLedger};
use super::rm::rm_transform_pruned;
use super::{CodewordArray, Syndrome};
use crate::binmat::BitMatrix;
use crate::bits::BitVec;
use crate::constructions::{CodeSpec, Family};
use crate::error::{Error, Result};
use crate::ring::{RingElem, RingParams};

/// From this many rows on, coefficient products run as materialized circulant
/// matrix-vector products instead of shift-and-add.
pub const STEP2_MATRIX_THRESHOLD: usize = 8;

#[derive(Debug, Clone)]
enum Kind {
    Vetbr,
    Vesip4 { w: usize, half: usize },
}

#[derive(Debug, Clone)]
pub(crate) struct FastPlan {
    kind: Kind,
    params: RingParams,
    r: usize,
    table: FijTable,
    mats: Option<Vec<Vec<(usize, BitMatrix)>>>,
    /// Degrees `tau..m`: nonzero input positions and needed output positions.
    live: BitVec,
}

/// Matrix of multiplication by `c` acting on coefficient vectors.
fn product_matrix(c: &RingElem) -> BitMatrix {
    let m = c.len();
    let mut out = BitMatrix::zeros(m, m);
    for e in c.bits().iter_ones() {
        for d in 0..m {
            let col = (d + m - e) % m;
            out.set(d, col, !out.get(d, col));
        }
    }
    out
}

fn tracked_matvec(mat: &BitMatrix, src: &Tracked, ledger: &mut XorLedger) -> Tracked {
    let m = src.v.len();
    let mut out = Tracked::zero(m);
    for d in 0..m {
        let row = mat.row(d);
        let hits = row.and_count(&src.mask);
        if hits == 0 {
            continue;
        }
        ledger.add(Phase::Combine, hits as u64 - 1);
        out.mask.set(d, true);
        if row.and_parity(&src.v) {
            out.v.set(d, true);
        }
    }
    out
}

impl FastPlan {
    pub fn for_spec(spec: &CodeSpec) -> Option<FastPlan> {
        let params = spec.params();
        let n0 = spec.size_exponent()?;
        let kind = match spec.family() {
            Family::VandVetbr => Kind::Vetbr,
            Family::VandVesip4 => Kind::Vesip4 {
                w: spec.shift_w()?,
                half: 1 << n0,
            },
            _ => return None,
        };
        let r = spec.r();
        let table = FijTable::new(r, n0, params).ok()?;
        let mats = (r >= STEP2_MATRIX_THRESHOLD).then(|| {
            (0..r)
                .map(|i| {
                    table
                        .terms(i)
                        .iter()
                        .map(|(s, c)| (*s, product_matrix(c)))
                        .collect()
                })
                .collect()
        });
        let m = params.m();
        Some(FastPlan {
            kind,
            params,
            r,
            table,
            mats,
            live: BitVec::range_ones(m, params.tau()..m),
        })
    }

    pub fn table(&self) -> &FijTable {
        &self.table
    }

    fn reversed_in(&self, col: &BitVec) -> Tracked {
        let m = self.params.m();
        Tracked::new(col.resized(m).reversed(), self.live.clone())
    }

    pub fn syndrome(&self, x: &CodewordArray) -> Result<(Syndrome, XorLedger)> {
        let mut ledger = XorLedger::new();
        let m = self.params.m();
        let tau = self.params.tau();
        let l = self.params.row_size();
        let n = 1usize << self.table.n0();
        let mut slots: Vec<Tracked> = (0..n).map(|j| self.reversed_in(x.column(j))).collect();
        rm_transform_pruned(&mut slots, self.table.max_weight(), &mut ledger);

        let mut p: Vec<Tracked> = Vec::with_capacity(self.r);
        for i in 0..self.r {
            if i == 0 {
                p.push(slots[0].clone());
                continue;
            }
            let mut acc = Tracked::zero(m);
            match &self.mats {
                Some(mats) => {
                    for (s, mat) in &mats[i] {
                        let prod = tracked_matvec(mat, &slots[*s], &mut ledger);
                        acc.xor_from(&prod, &mut ledger, Phase::Combine);
                    }
                }
                None => {
                    for (s, c) in self.table.terms(i) {
                        for e in c.bits().iter_ones() {
                            acc.xor_from(&slots[*s].rotated(e), &mut ledger, Phase::Combine);
                        }
                    }
                }
            }
            p.push(acc);
        }

        if let Kind::Vesip4 { w, .. } = self.kind {
            // (h' + x^w)^i expanded by the binomial theorem over GF(2)
            let mut q = p.clone();
            q[1].xor_from(&p[0].rotated(w), &mut ledger, Phase::Combine);
            q[2].xor_from(&p[0].rotated(2 * w), &mut ledger, Phase::Combine);
            q[3].xor_from(&p[2].rotated(w), &mut ledger, Phase::Combine);
            q[3].xor_from(&p[1].rotated(2 * w), &mut ledger, Phase::Combine);
            q[3].xor_from(&p[0].rotated(3 * w), &mut ledger, Phase::Combine);
            p = q;
        }

        let mut parts = Vec::with_capacity(self.r);
        for (i, mut v) in p.into_iter().enumerate() {
            let top = (usize::BITS - i.leading_zeros()) as usize;
            for a in (0..top).filter(|a| i >> a & 1 == 1) {
                let last = a + 1 == top;
                v.times_one_plus((tau << a) % m, last.then_some(&self.live), &mut ledger);
            }
            let bits = v.v.reversed().resized(l);
            let mask = v.mask.reversed().resized(l);
            parts.push(Tracked::new(bits, mask));
        }

        if let Kind::Vesip4 { half, .. } = self.kind {
            let full = BitVec::ones(l);
            for (i, part) in parts.iter_mut().enumerate() {
                let col = Tracked::new(x.column(half + i).clone(), full.clone());
                part.xor_from(&col, &mut ledger, Phase::Finish);
            }
        }
        Ok((
            Syndrome::new(parts.into_iter().map(|t| t.v).collect()),
            ledger,
        ))
    }
}

pub(crate) fn require_plan<'a>(
    plan: Option<&'a FastPlan>,
    spec: &CodeSpec,
) -> Result<&'a FastPlan> {
    plan.ok_or_else(|| {
        Error::Unsupported(format!(
            "no fast syndrome path for family {}",
            spec.family()
        ))
    })
}
