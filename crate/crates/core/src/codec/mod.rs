//! Syndrome computation, encoding and erasure decoding.
//!
//! Encoding and decoding share one procedure: compute the syndrome of the
//! array with the unknown columns zeroed, then solve `H_e e = s` for them.

mod fast;
mod fij;
mod ledger;
mod rm;

pub use fast::STEP2_MATRIX_THRESHOLD;
pub use fij::{derive_fij, FijTable};
pub use ledger::{Phase, XorLedger};
pub use rm::{pruned_butterflies, rm_transform};

use crate::binmat::{BitMatrix, LeftSolver};
use crate::bits::BitVec;
use crate::constructions::{CodeSpec, Layout};
use crate::error::{Error, Result};
use crate::par::Exec;
use fast::FastPlan;
use rand::{Rng, SeedableRng};
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

/// An `(m - tau) x total_cols` array stored column by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordArray {
    row_size: usize,
    cols: Vec<BitVec>,
}

impl CodewordArray {
    pub fn zeros(row_size: usize, cols: usize) -> Self {
        CodewordArray {
            row_size,
            cols: vec![BitVec::zeros(row_size); cols],
        }
    }

    pub fn from_columns(row_size: usize, cols: Vec<BitVec>) -> Result<Self> {
        if let Some((j, c)) = cols.iter().enumerate().find(|(_, c)| c.len() != row_size) {
            return Err(Error::DimensionMismatch(format!(
                "column {j} has {} bits, expected {row_size}",
                c.len()
            )));
        }
        Ok(CodewordArray { row_size, cols })
    }

    pub fn random<R: Rng>(row_size: usize, cols: usize, rng: &mut R) -> Self {
        CodewordArray {
            row_size,
            cols: (0..cols)
                .map(|_| BitVec::from_bools((0..row_size).map(|_| rng.gen::<bool>())))
                .collect(),
        }
    }

    pub fn row_size(&self) -> usize {
        self.row_size
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &BitVec {
        &self.cols[j]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut BitVec {
        &mut self.cols[j]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.cols
    }

    pub fn into_columns(self) -> Vec<BitVec> {
        self.cols
    }

    /// Column-first concatenation: bit `k` of column `j` lands at `j * row_size + k`.
    pub fn flatten(&self) -> BitVec {
        let mut out = BitVec::zeros(self.row_size * self.cols.len());
        for (j, c) in self.cols.iter().enumerate() {
            for k in c.iter_ones() {
                out.set(j * self.row_size + k, true);
            }
        }
        out
    }
}

/// Sorted, duplicate-free set of erased column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ErasurePattern(Vec<usize>);

impl ErasurePattern {
    pub fn new(mut cols: Vec<usize>) -> Self {
        cols.sort_unstable();
        cols.dedup();
        ErasurePattern(cols)
    }

    pub fn columns(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.0.binary_search(&j).is_ok()
    }
}

/// `r` parts of `m - tau` bits, one per ring row of the parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndrome {
    parts: Vec<BitVec>,
}

impl Syndrome {
    pub fn new(parts: Vec<BitVec>) -> Self {
        Syndrome { parts }
    }

    pub fn parts(&self) -> &[BitVec] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.is_zero())
    }

    pub fn flatten(&self) -> BitVec {
        let l = self.parts.first().map_or(0, |p| p.len());
        let mut out = BitVec::zeros(l * self.parts.len());
        for (i, p) in self.parts.iter().enumerate() {
            for k in p.iter_ones() {
                out.set(i * l + k, true);
            }
        }
        out
    }

    fn from_flat(flat: &BitVec, parts: usize, l: usize) -> Self {
        Syndrome {
            parts: (0..parts).map(|i| flat.shr(i * l).resized(l)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyndromeMode {
    Naive,
    Fast,
}

impl std::str::FromStr for SyndromeMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(SyndromeMode::Naive),
            "fast" => Ok(SyndromeMode::Fast),
            _ => Err(Error::InvalidParameter(format!(
                "unknown syndrome mode {s:?}"
            ))),
        }
    }
}

/// `Hbin x` as a plain product; each row costs its weight minus one.
pub fn syndrome_naive(spec: &CodeSpec, x: &CodewordArray) -> Result<(Syndrome, XorLedger)> {
    check_shape(spec, x)?;
    let hbin = spec.hbin();
    let s = hbin.mul_vec(&x.flatten())?;
    let mut ledger = XorLedger::new();
    let cost: u64 = (0..hbin.rows())
        .map(|r| hbin.row_weight(r).saturating_sub(1) as u64)
        .sum();
    ledger.add(Phase::Naive, cost);
    Ok((Syndrome::from_flat(&s, spec.r(), spec.row_size()), ledger))
}

fn check_shape(spec: &CodeSpec, x: &CodewordArray) -> Result<()> {
    if x.num_cols() != spec.total_cols() || x.row_size() != spec.row_size() {
        return Err(Error::DimensionMismatch(format!(
            "array is {}x{}, code needs {}x{}",
            x.row_size(),
            x.num_cols(),
            spec.row_size(),
            spec.total_cols()
        )));
    }
    Ok(())
}

/// How parity columns follow from the syndrome of the data.
#[derive(Debug, Clone)]
enum ParityPlan {
    /// Parity block is the identity: parity column `k` is syndrome part `k`.
    Identity,
    /// First parity column is syndrome part 0; the others add a coupling
    /// block applied to it.
    UnitLower(Vec<Option<BitMatrix>>),
    /// Anything else goes through the cached solver.
    General,
}

fn parity_plan(spec: &CodeSpec) -> ParityPlan {
    if spec.layout() != Layout::Esip {
        return ParityPlan::General;
    }
    let h = spec.h();
    let lead = spec.n() - 1;
    if !h.get(0, lead).is_one() {
        return ParityPlan::General;
    }
    let rp = spec.params();
    let tau = rp.tau();
    let couplings: Vec<Option<BitMatrix>> = (0..spec.r())
        .map(|i| {
            let e = h.get(i, lead);
            (i > 0 && !e.is_zero()).then(|| rp.circulant(e, tau, tau).expect("matching ring"))
        })
        .collect();
    if couplings.iter().all(Option::is_none) {
        ParityPlan::Identity
    } else {
        ParityPlan::UnitLower(couplings)
    }
}

/// Encoder and decoder for one code, with per-pattern solver caching.
pub struct Codec {
    spec: CodeSpec,
    fast: Option<FastPlan>,
    parity: ParityPlan,
    cache: RwLock<HashMap<ErasurePattern, Arc<LeftSolver>>>,
}

impl std::fmt::Debug for Codec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Codec")
            .field("spec", &self.spec)
            .field("fast", &self.fast.is_some())
            .finish()
    }
}

impl Codec {
    pub fn new(spec: CodeSpec) -> Self {
        let fast = FastPlan::for_spec(&spec);
        let parity = parity_plan(&spec);
        Codec {
            spec,
            fast,
            parity,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn has_fast_path(&self) -> bool {
        self.fast.is_some()
    }

    /// Coefficient table of the fast path, if any.
    pub fn fij_table(&self) -> Option<&FijTable> {
        self.fast.as_ref().map(|f| f.table())
    }

    /// Fast when available, naive otherwise.
    pub fn preferred_mode(&self) -> SyndromeMode {
        if self.fast.is_some() {
            SyndromeMode::Fast
        } else {
            SyndromeMode::Naive
        }
    }

    pub fn syndrome(&self, x: &CodewordArray, mode: SyndromeMode) -> Result<(Syndrome, XorLedger)> {
        check_shape(&self.spec, x)?;
        match mode {
            SyndromeMode::Naive => syndrome_naive(&self.spec, x),
            SyndromeMode::Fast => fast::require_plan(self.fast.as_ref(), &self.spec)?.syndrome(x),
        }
    }

    /// Cached left inverse for an erasure pattern; built once per pattern.
    pub fn solver(&self, pattern: &ErasurePattern) -> Result<Arc<LeftSolver>> {
        if let Some(s) = self.cache.read().expect("cache lock").get(pattern) {
            return Ok(s.clone());
        }
        let sub = self
            .spec
            .hbin()
            .submatrix_columns(pattern.columns(), self.spec.row_size())?;
        let solver = Arc::new(LeftSolver::new(&sub)?);
        let mut w = self.cache.write().expect("cache lock");
        Ok(w.entry(pattern.clone()).or_insert(solver).clone())
    }

    pub fn cached_patterns(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    /// Appends `r` parity columns to `data_cols` data columns.
    pub fn encode(&self, data: &[BitVec]) -> Result<CodewordArray> {
        Ok(self.encode_traced(data)?.0)
    }

    pub fn encode_traced(&self, data: &[BitVec]) -> Result<(CodewordArray, XorLedger)> {
        let spec = &self.spec;
        let l = spec.row_size();
        if data.len() != spec.data_cols() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} data columns, got {}",
                spec.data_cols(),
                data.len()
            )));
        }
        let mut cols = data.to_vec();
        cols.extend((0..spec.r()).map(|_| BitVec::zeros(l)));
        let mut x = CodewordArray::from_columns(l, cols)?;
        let (s, mut ledger) = self.syndrome(&x, self.preferred_mode())?;
        let first = spec.data_cols();
        match &self.parity {
            ParityPlan::Identity => {
                for (k, part) in s.parts().iter().enumerate() {
                    *x.column_mut(first + k) = part.clone();
                }
            }
            ParityPlan::UnitLower(couplings) => {
                let p0 = s.parts()[0].clone();
                for (k, part) in s.parts().iter().enumerate() {
                    let mut col = part.clone();
                    if let Some(c) = &couplings[k] {
                        col.xor_assign(&c.mul_vec(&p0)?);
                        let cost: u64 = (0..c.rows()).map(|row| c.row_weight(row) as u64).sum();
                        ledger.add(Phase::Solve, cost);
                    }
                    *x.column_mut(first + k) = col;
                }
            }
            ParityPlan::General => {
                let pattern = ErasurePattern::new(spec.parity_columns());
                let solver = self.solver(&pattern)?;
                let e = solver.solve(&s.flatten())?;
                ledger.add(Phase::Solve, solver.xor_cost());
                for (k, &j) in pattern.columns().iter().enumerate() {
                    *x.column_mut(j) = e.shr(k * l).resized(l);
                }
            }
        }
        Ok((x, ledger))
    }

    /// Recovers the columns in `pattern`; their contents in `damaged` are ignored.
    pub fn decode(
        &self,
        damaged: &CodewordArray,
        pattern: &ErasurePattern,
    ) -> Result<CodewordArray> {
        Ok(self.decode_traced(damaged, pattern)?.0)
    }

    pub fn decode_traced(
        &self,
        damaged: &CodewordArray,
        pattern: &ErasurePattern,
    ) -> Result<(CodewordArray, XorLedger)> {
        let spec = &self.spec;
        check_shape(spec, damaged)?;
        if pattern.len() > spec.r() {
            return Err(Error::TooManyErasures {
                erased: pattern.len(),
                r: spec.r(),
            });
        }
        if let Some(&j) = pattern.columns().iter().find(|&&j| j >= spec.total_cols()) {
            return Err(Error::IndexOutOfRange(format!(
                "erased column {j} of {}",
                spec.total_cols()
            )));
        }
        let l = spec.row_size();
        let mut x = damaged.clone();
        for &j in pattern.columns() {
            *x.column_mut(j) = BitVec::zeros(l);
        }
        let (s, mut ledger) = self.syndrome(&x, self.preferred_mode())?;
        if pattern.is_empty() {
            return if s.is_zero() {
                Ok((x, ledger))
            } else {
                Err(Error::NoSolution)
            };
        }
        let solver = self.solver(pattern)?;
        let e = solver.solve(&s.flatten())?;
        ledger.add(Phase::Solve, solver.xor_cost());
        for (k, &j) in pattern.columns().iter().enumerate() {
            *x.column_mut(j) = e.shr(k * l).resized(l);
        }
        Ok((x, ledger))
    }

    pub fn encode_batch(&self, stripes: &[Vec<BitVec>], exec: Exec) -> Result<Vec<CodewordArray>> {
        exec.try_map(stripes, |d| self.encode(d))
    }

    pub fn decode_batch(
        &self,
        arrays: &[CodewordArray],
        pattern: &ErasurePattern,
        exec: Exec,
    ) -> Result<Vec<CodewordArray>> {
        if !pattern.is_empty() && pattern.len() <= self.spec.r() {
            // build the solver once before fanning out
            self.solver(pattern)?;
        }
        exec.try_map(arrays, |a| self.decode(a, pattern))
    }
}

/// Averaged XOR counts of syndrome computation over random arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct XorReport {
    pub mode: SyndromeMode,
    pub trials: usize,
    pub ledger: XorLedger,
    /// Array bits the count is normalized by: `total_cols * (m - tau)`.
    pub data_bits: u64,
}

impl XorReport {
    pub fn total(&self) -> u64 {
        self.ledger.total()
    }

    pub fn per_data_bit(&self) -> f64 {
        self.ledger.total() as f64 / self.data_bits as f64
    }
}

/// `floor(log2 r) + 1`, the asymptotic per-bit cost of the fast path.
pub fn theoretical_xors_per_bit(r: usize) -> u32 {
    usize::BITS - r.leading_zeros()
}

/// Runs `trials` syndrome computations on seeded random arrays. Counts must
/// agree across trials; a mismatch is reported as an internal inconsistency.
pub fn measure_xors(
    codec: &Codec,
    mode: SyndromeMode,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<XorReport> {
    let spec = codec.spec();
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let ledgers = exec.try_map(&(0..trials as u64).collect::<Vec<_>>(), |&t| {
        let mut rng =
            rand::rngs::StdRng::seed_from_u64(seed ^ t.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let x = CodewordArray::random(spec.row_size(), spec.total_cols(), &mut rng);
        codec.syndrome(&x, mode).map(|(_, l)| l)
    })?;
    let first = ledgers[0];
    if let Some(bad) = ledgers.iter().find(|l| **l != first) {
        return Err(Error::Inconsistent(format!(
            "XOR counts differ between trials: {first} vs {bad}"
        )));
    }
    Ok(XorReport {
        mode,
        trials,
        ledger: first,
        data_bits: (spec.total_cols() * spec.row_size()) as u64,
    })
}
