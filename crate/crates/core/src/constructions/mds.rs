//! Sufficient MDS conditions over the ring and exhaustive binary verification.

use super::{CodeSpec, Layout};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::ring::{RingElem, RingMatrix, RingParams};
use std::fmt;

/// Default cap on erasure patterns enumerated by [`verify_mds_exhaustive`].
pub const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 1_000_000;

/// Which sufficient criterion applies to a code's shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// ETBR layout: every entry has `gcd(h, x^m+1) = x^tau+1`.
    EtbrUnitGcd,
    /// ETBR layout with an all-one first row: per entry, either its gcd or the
    /// gcd of its sum with every other entry of the row is `x^tau+1`.
    EtbrAllOneRow,
    /// ESIP layout whose `H` has an all-one first row.
    EsipAllOneRow,
    /// ESIP layout whose `H` ends in the column `(1,0,...,0)`.
    EsipIdentityTail,
    /// No sufficient criterion covers this shape.
    Unsupported,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::EtbrUnitGcd => "etbr: entry gcd",
            Criterion::EtbrAllOneRow => "etbr: all-one first row",
            Criterion::EsipAllOneRow => "esip: all-one first row",
            Criterion::EsipIdentityTail => "esip: identity tail",
            Criterion::Unsupported => "no applicable criterion",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub name: String,
    pub holds: bool,
    /// Number of elementary checks performed.
    pub checked: u64,
    /// True when the check was truncated and `holds` is only partial evidence.
    pub partial: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdsConditionReport {
    pub criterion: Criterion,
    pub conditions: Vec<ConditionResult>,
}

impl MdsConditionReport {
    /// Every condition of an applicable criterion holds (possibly partially checked).
    pub fn holds(&self) -> bool {
        self.criterion != Criterion::Unsupported && self.conditions.iter().all(|c| c.holds)
    }

    pub fn partial(&self) -> bool {
        self.conditions.iter().any(|c| c.partial)
    }

    pub fn first_failure(&self) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| !c.holds)
    }
}

impl fmt::Display for MdsConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "criterion: {}", self.criterion)?;
        for c in &self.conditions {
            write!(
                f,
                "  [{}] {} ({} checks{})",
                if c.holds { "ok" } else { "FAIL" },
                c.name,
                c.checked,
                if c.partial { ", partial" } else { "" }
            )?;
            if let Some(w) = &c.witness {
                write!(f, ": {w}")?;
            }
            writeln!(f)?;
        }
        write!(
            f,
            "sufficient conditions {}{}",
            if self.holds() { "hold" } else { "do not hold" },
            if self.partial() {
                " (partially checked)"
            } else {
                ""
            }
        )
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MdsCheckOptions {
    /// Largest minor size evaluated by Laplace expansion.
    pub cap: usize,
    /// Maximum number of column subsets examined for the ring minors.
    pub minor_budget: u64,
    pub exec: Exec,
}

impl Default for MdsCheckOptions {
    fn default() -> Self {
        MdsCheckOptions {
            cap: 4,
            minor_budget: 200_000,
            exec: Exec::default(),
        }
    }
}

/// Evaluates every hypothesis of the criterion matching the spec's shape.
pub fn check_mds_conditions(spec: &CodeSpec, opts: &MdsCheckOptions) -> MdsConditionReport {
    let rp = spec.params();
    let h = spec.h_core();
    let (r, n) = (h.rows(), h.cols());
    let first_row_ones = (0..n).all(|j| h.get(0, j).is_one());
    let last_col_e0 = h.get(0, n - 1).is_one() && (1..r).all(|i| h.get(i, n - 1).is_zero());
    let criterion = match spec.layout() {
        Layout::Etbr if first_row_ones => Criterion::EtbrAllOneRow,
        Layout::Etbr => Criterion::EtbrUnitGcd,
        Layout::Esip if first_row_ones => Criterion::EsipAllOneRow,
        Layout::Esip if last_col_e0 => Criterion::EsipIdentityTail,
        Layout::Esip => Criterion::Unsupported,
    };
    let target = rp.x_tau_plus_one();
    let good_gcd = |e: &RingElem| rp.gcd_with_modulus(e) == target;
    let mut conditions = vec![ring_mds(spec.h(), opts)];
    match criterion {
        Criterion::EtbrUnitGcd => {
            conditions.push(entry_gcd(&h, 0..r, 0..n, &good_gcd, &rp));
        }
        Criterion::EtbrAllOneRow => {
            let mut checked = 0u64;
            let mut witness = None;
            'outer: for i in 1..r {
                for j in 0..n {
                    checked += 1;
                    if good_gcd(h.get(i, j)) {
                        continue;
                    }
                    for k in (0..n).filter(|&k| k != j) {
                        checked += 1;
                        let s = h.get(i, j).add(h.get(i, k));
                        if !good_gcd(&s) {
                            witness = Some(format!(
                                "row {i}, columns {j},{k}: gcd(h, x^m+1) = {}, gcd(h_j+h_k, x^m+1) = {}",
                                rp.gcd_with_modulus(h.get(i, j)),
                                rp.gcd_with_modulus(&s)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
            conditions.push(ConditionResult {
                name: "gcd(h_ij, x^m+1) = x^tau+1 or gcd(h_ij + h_ik, x^m+1) = x^tau+1 for i >= 1"
                    .into(),
                holds: witness.is_none(),
                checked,
                partial: false,
                witness,
            });
        }
        Criterion::EsipAllOneRow => {
            let mut checked = 0u64;
            let mut witness = None;
            'rows: for i in 1..r {
                let base = h.get(i, 0).to_poly().rem(&target).expect("nonzero");
                for j in 1..n {
                    checked += 1;
                    let res = h.get(i, j).to_poly().rem(&target).expect("nonzero");
                    if res != base {
                        witness = Some(format!(
                            "row {i}: x^tau+1 does not divide h_{i},0 + h_{i},{j} = {}",
                            h.get(i, 0).add(h.get(i, j))
                        ));
                        break 'rows;
                    }
                }
            }
            conditions.push(ConditionResult {
                name: "x^tau+1 divides h_ij + h_ik for i >= 1".into(),
                holds: witness.is_none(),
                checked,
                partial: false,
                witness,
            });
        }
        Criterion::EsipIdentityTail => {
            conditions.push(entry_gcd(&h, 0..r, 0..n - 1, &good_gcd, &rp));
        }
        Criterion::Unsupported => {
            conditions.push(ConditionResult {
                name: "H has an all-one first row or ends in (1,0,...,0)".into(),
                holds: false,
                checked: 1,
                partial: false,
                witness: Some("neither shape applies".into()),
            });
        }
    }
    MdsConditionReport {
        criterion,
        conditions,
    }
}

fn entry_gcd(
    h: &RingMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
    good: &dyn Fn(&RingElem) -> bool,
    rp: &RingParams,
) -> ConditionResult {
    let mut checked = 0u64;
    let mut witness = None;
    'outer: for i in rows {
        for j in cols.clone() {
            checked += 1;
            if !good(h.get(i, j)) {
                witness = Some(format!(
                    "h_{i},{j} = {}: gcd with x^m+1 is {}",
                    h.get(i, j),
                    rp.gcd_with_modulus(h.get(i, j))
                ));
                break 'outer;
            }
        }
    }
    ConditionResult {
        name: "gcd(h_ij, x^m+1) = x^tau+1".into(),
        holds: witness.is_none(),
        checked,
        partial: false,
        witness,
    }
}

/// Laplace expansion along the first row.
pub(crate) fn ring_det(m: &[Vec<RingElem>], rp: &RingParams) -> RingElem {
    let k = m.len();
    match k {
        0 => rp.one(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).add(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = rp.zero();
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<RingElem>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, e)| e.clone())
                            .collect()
                    })
                    .collect();
                acc.add_assign(&m[0][c].mul(&ring_det(&minor, rp)));
            }
            acc
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Lexicographic `k`-subsets of `0..n`, at most `limit` of them.
pub(crate) fn combinations(n: usize, k: usize, limit: u64) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if out.len() as u64 >= limit {
            break;
        }
        out.push(idx.clone());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            break;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Minors over `R_{p,tau}`: all `r`-column minors of the full matrix when
/// `r <= cap`, otherwise the `k`-column minors of the first `k` rows for
/// `k <= cap` (flagged partial).
fn ring_mds(full: &RingMatrix, opts: &MdsCheckOptions) -> ConditionResult {
    let rp = full.params();
    let f = rp.f();
    let (r, cols) = (full.rows(), full.cols());
    let sizes: Vec<usize> = if r <= opts.cap {
        vec![r]
    } else {
        (1..=opts.cap).collect()
    };
    let mut partial = r > opts.cap;
    let mut checked = 0u64;
    for k in sizes {
        let remaining = opts.minor_budget.saturating_sub(checked);
        let total = binomial(cols, k);
        if total > remaining as u128 {
            partial = true;
        }
        let subsets = combinations(cols, k, remaining);
        checked += subsets.len() as u64;
        let is_unit = |cs: &Vec<usize>| {
            let m: Vec<Vec<RingElem>> = (0..k)
                .map(|i| cs.iter().map(|&j| full.get(i, j).clone()).collect())
                .collect();
            let det = rp.reduce_to_quotient(&ring_det(&m, &rp));
            !det.is_zero() && det.gcd(&f).expect("f nonzero").is_one()
        };
        if let Some(bad) = opts
            .exec
            .find_first(subsets.len(), |t| !is_unit(&subsets[t]))
        {
            return ConditionResult {
                name: format!("{k}x{k} minors are units of R_{{p,tau}}"),
                holds: false,
                checked,
                partial,
                witness: Some(format!("columns {:?} (rows 0..{k})", subsets[bad])),
            };
        }
    }
    ConditionResult {
        name: if r <= opts.cap {
            format!("code is MDS over R_{{p,tau}} ({r}x{r} minors are units)")
        } else {
            format!(
                "leading minors up to {0}x{0} are units (r={r} exceeds cap)",
                opts.cap
            )
        },
        holds: true,
        checked,
        partial,
        witness: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub patterns: u64,
    /// Up to 16 failing erasure patterns, in enumeration order.
    pub failures: Vec<Vec<usize>>,
}

impl ExhaustiveReport {
    pub fn is_mds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every set of `r` erased columns leaves a full-rank submatrix of `Hbin`.
pub fn verify_mds_exhaustive(spec: &CodeSpec, limit: u128, exec: Exec) -> Result<ExhaustiveReport> {
    let (cols, r, l) = (spec.total_cols(), spec.r(), spec.row_size());
    let needed = binomial(cols, r);
    if needed > limit {
        return Err(Error::EnumerationTooLarge { needed, limit });
    }
    let patterns = combinations(cols, r, u64::MAX);
    let hbin = spec.hbin();
    let ok = exec.map(&patterns, |pat| {
        hbin.submatrix_columns(pat, l)
            .map(|s| s.rank() == r * l)
            .unwrap_or(false)
    });
    let failures = patterns
        .iter()
        .zip(ok)
        .filter(|(_, ok)| !ok)
        .map(|(p, _)| p.clone())
        .take(16)
        .collect();
    Ok(ExhaustiveReport {
        patterns: patterns.len() as u64,
        failures,
    })
}
