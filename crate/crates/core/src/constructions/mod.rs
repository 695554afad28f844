//! Code families and their binary parity-check matrices.
//!
//! Two layouts exist. An ETBR-style code uses its `r x n` ring matrix `H`
//! directly. An ESIP-style code appends `I_r` with its first column removed,
//! giving `H' = [H | I^]` with `n + r - 1` columns. In both cases the binary
//! parity-check matrix is `tmap` of the full ring matrix and the last `r`
//! array columns carry parity.

mod mds;

pub use mds::{
    check_mds_conditions, verify_mds_exhaustive, ConditionResult, Criterion, ExhaustiveReport,
    MdsCheckOptions, MdsConditionReport, DEFAULT_EXHAUSTIVE_LIMIT,
};

use crate::binmat::{tmap, BitMatrix};
use crate::error::{invalid, Error, Result};
use crate::gf2poly::Poly;
use crate::ring::{RingElem, RingMatrix, RingParams};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    Etbr,
    Esip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// ESIP layout with a Cauchy block `(x^tau+1)/(a_i+b_j)` followed by `I_r`.
    CauchyVesip,
    /// ETBR layout with Vandermonde rows `h_j^i`, `n = 2^n0`.
    VandVetbr,
    /// ESIP layout, `r = 4`, shifted Vandermonde points, `n = 2^n1 + 1`.
    VandVesip4,
    /// ESIP layout over `m = p` with `h_{i,j} = x^{(p-j) i}`.
    GenRdp,
    /// ETBR layout over `m = p` with `h_{i,j} = x^{i j}`.
    Br,
    /// User-supplied ring matrix.
    Custom(Layout),
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::CauchyVesip => "cauchy-vesip",
            Family::VandVetbr => "vand-vetbr",
            Family::VandVesip4 => "vand-vesip4",
            Family::GenRdp => "gen-rdp",
            Family::Br => "br",
            Family::Custom(Layout::Etbr) => "custom-etbr",
            Family::Custom(Layout::Esip) => "custom-esip",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cauchy-vesip" => Family::CauchyVesip,
            "vand-vetbr" => Family::VandVetbr,
            "vand-vesip4" => Family::VandVesip4,
            "gen-rdp" => Family::GenRdp,
            "br" => Family::Br,
            "custom-etbr" => Family::Custom(Layout::Etbr),
            "custom-esip" => Family::Custom(Layout::Esip),
            _ => return invalid(format!("unknown family {s:?}")),
        })
    }
}

/// A fully materialized code: ring parity-check matrix and its binary image.
#[derive(Clone)]
pub struct CodeSpec {
    family: Family,
    layout: Layout,
    params: RingParams,
    r: usize,
    n: usize,
    h: RingMatrix,
    hbin: BitMatrix,
    size_exp: Option<usize>,
    a_list: Vec<Poly>,
    b_list: Vec<Poly>,
    w: Option<usize>,
}

impl fmt::Debug for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodeSpec")
            .field("family", &self.family)
            .field("p", &self.params.p())
            .field("tau", &self.params.tau())
            .field("r", &self.r)
            .field("n", &self.n)
            .field("total_cols", &self.total_cols())
            .finish()
    }
}

impl CodeSpec {
    /// ETBR-style code from an `r x n` ring matrix, `2 <= r < n`.
    pub fn from_etbr(params: RingParams, h: RingMatrix) -> Result<Self> {
        Self::etbr(Family::Custom(Layout::Etbr), params, h)
    }

    /// ESIP-style code from the `r x n` ring matrix `H`; `I^` is appended.
    pub fn from_esip(params: RingParams, h: RingMatrix) -> Result<Self> {
        Self::esip(Family::Custom(Layout::Esip), params, h)
    }

    fn etbr(family: Family, params: RingParams, h: RingMatrix) -> Result<Self> {
        let (r, n) = (h.rows(), h.cols());
        if h.params() != params {
            return invalid("ring matrix built over different ring parameters");
        }
        if r < 2 || r >= n {
            return invalid(format!("ETBR layout needs 2 <= r < n, got r={r}, n={n}"));
        }
        let hbin = tmap(&h);
        Ok(CodeSpec {
            family,
            layout: Layout::Etbr,
            params,
            r,
            n,
            h,
            hbin,
            size_exp: None,
            a_list: Vec::new(),
            b_list: Vec::new(),
            w: None,
        })
    }

    fn esip(family: Family, params: RingParams, h: RingMatrix) -> Result<Self> {
        let (r, n) = (h.rows(), h.cols());
        if h.params() != params {
            return invalid("ring matrix built over different ring parameters");
        }
        if r < 2 || n < 2 {
            return invalid(format!(
                "ESIP layout needs r >= 2 and n >= 2, got r={r}, n={n}"
            ));
        }
        let ihat = RingMatrix::from_fn(params, r, r - 1, |i, j| {
            if i == j + 1 {
                params.one()
            } else {
                params.zero()
            }
        });
        let full = h.hconcat(&ihat)?;
        let hbin = tmap(&full);
        Ok(CodeSpec {
            family,
            layout: Layout::Esip,
            params,
            r,
            n,
            h: full,
            hbin,
            size_exp: None,
            a_list: Vec::new(),
            b_list: Vec::new(),
            w: None,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Columns of `H` (for ESIP layouts, excluding the appended `I^`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Array columns: `n` or `n + r - 1`.
    pub fn total_cols(&self) -> usize {
        self.h.cols()
    }

    pub fn data_cols(&self) -> usize {
        self.total_cols() - self.r
    }

    /// Bits per column, `m - tau`.
    pub fn row_size(&self) -> usize {
        self.params.row_size()
    }

    /// Indices of the parity columns (the last `r`).
    pub fn parity_columns(&self) -> Vec<usize> {
        (self.data_cols()..self.total_cols()).collect()
    }

    /// Full ring parity-check matrix (`H` or `H'`).
    pub fn h(&self) -> &RingMatrix {
        &self.h
    }

    /// The `r x n` matrix `H` without any appended identity part.
    pub fn h_core(&self) -> RingMatrix {
        self.h.select_columns(&(0..self.n).collect::<Vec<_>>())
    }

    pub fn hbin(&self) -> &BitMatrix {
        &self.hbin
    }

    /// `n0` for `vand-vetbr`, `n1` for `vand-vesip4`.
    pub fn size_exponent(&self) -> Option<usize> {
        self.size_exp
    }

    /// Cauchy evaluation points `a_i` (rows) and `b_j` (columns).
    pub fn cauchy_points(&self) -> (&[Poly], &[Poly]) {
        (&self.a_list, &self.b_list)
    }

    /// Shift exponent `w` of `vand-vesip4`.
    pub fn shift_w(&self) -> Option<usize> {
        self.w
    }
}

fn check_lambda_degree(list: &[Poly], lambda: usize, name: &str) -> Result<()> {
    for (i, a) in list.iter().enumerate() {
        if a.degree().is_some_and(|d| d >= lambda) {
            return invalid(format!("{name}[{i}] = {a} has degree >= λ={lambda}"));
        }
    }
    for i in 0..list.len() {
        for j in 0..i {
            if list[i] == list[j] {
                return invalid(format!("{name}[{j}] and {name}[{i}] are both {}", list[i]));
            }
        }
    }
    Ok(())
}

/// Polynomial whose coefficient vector is the binary expansion of `i`.
pub fn poly_of_index(i: usize) -> Poly {
    Poly::from_u64(i as u64)
}

/// `h'_i`: `h'_0 = 0`, `h'_{i + 2^j} = h'_i + x^j`.
pub fn vandermonde_point(i: usize) -> Poly {
    poly_of_index(i)
}

/// Cauchy V-ESIP: `H' = [H_I | I_r]` with `H_I[i][j] = (x^tau+1)(a_i+b_j)^{-1}`,
/// inverses taken in `R_{p,tau}`. `H_I` has `n - 1` columns.
///
/// Without explicit lists, `a_i` is the polynomial of integer `i` and `b_j`
/// that of `r + j`.
pub fn build_cauchy_vesip(
    p: usize,
    tau: usize,
    r: usize,
    n: usize,
    a_list: Option<Vec<Poly>>,
    b_list: Option<Vec<Poly>>,
) -> Result<CodeSpec> {
    let params = RingParams::new(p, tau)?;
    let lambda = params.lambda();
    if r < 2 || n < 2 {
        return invalid(format!("need r >= 2 and n >= 2, got r={r}, n={n}"));
    }
    let a = match a_list {
        Some(a) => a,
        None => (0..r).map(poly_of_index).collect(),
    };
    let b = match b_list {
        Some(b) => b,
        None => {
            let needed = (r + n - 1) as u128;
            if lambda < 64 && needed > 1u128 << lambda {
                return invalid(format!(
                    "r + n - 1 = {needed} exceeds the 2^λ = {} polynomials of degree < λ={lambda}",
                    1u128 << lambda
                ));
            }
            (r..r + n - 1).map(poly_of_index).collect()
        }
    };
    if a.len() != r || b.len() != n - 1 {
        return invalid(format!(
            "need {r} row points and {} column points, got {} and {}",
            n - 1,
            a.len(),
            b.len()
        ));
    }
    check_lambda_degree(&a, lambda, "a")?;
    check_lambda_degree(&b, lambda, "b")?;
    for (i, ai) in a.iter().enumerate() {
        if let Some(j) = b.iter().position(|bj| bj == ai) {
            return invalid(format!("a[{i}] equals b[{j}] = {ai}"));
        }
    }
    let xt1 = params.x_tau_plus_one();
    let mut h = RingMatrix::zeros(params, r, n);
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let inv = params.quotient_inv(&(ai + bj))?;
            h.set(i, j, params.lift(&xt1.mul(&inv)));
        }
    }
    h.set(0, n - 1, params.one());
    let mut spec = CodeSpec::esip(Family::CauchyVesip, params, h)?;
    spec.a_list = a;
    spec.b_list = b;
    Ok(spec)
}

/// Vandermonde V-ETBR: `n = 2^n0` points `h_j = (1+x^tau) h'_j`, rows `h_j^i`.
pub fn build_vand_vetbr(p: usize, tau: usize, r: usize, n0: usize) -> Result<CodeSpec> {
    let params = RingParams::new(p, tau)?;
    let lambda = params.lambda();
    if n0 > lambda {
        return invalid(format!("n0 exceeds λ={lambda} (got n0={n0})"));
    }
    if n0 >= usize::BITS as usize - 1 {
        return invalid(format!("n0={n0} too large"));
    }
    let n = 1usize << n0;
    if r < 2 || r >= n {
        return invalid(format!("need 2 <= r < n = {n}, got r={r}"));
    }
    let xt1 = params.lift(&params.x_tau_plus_one());
    let points: Vec<RingElem> = (0..n)
        .map(|j| xt1.mul(&params.lift(&vandermonde_point(j))))
        .collect();
    let h = vandermonde_rows(params, &points, r);
    let mut spec = CodeSpec::etbr(Family::VandVetbr, params, h)?;
    spec.size_exp = Some(n0);
    Ok(spec)
}

/// `r = 4` Vandermonde V-ESIP: `n = 2^n1 + 1` points
/// `h_j = (h'_j + x^w)(1+x^tau)` for `j < 2^n1` and `h_{n-1} = 0`,
/// `w = floor((λ-1)/2)`.
pub fn build_vand_vesip_r4(p: usize, tau: usize, n1: usize) -> Result<CodeSpec> {
    let params = RingParams::new(p, tau)?;
    let lambda = params.lambda();
    let w = (lambda - 1) / 2;
    if n1 == 0 || n1 > w {
        return invalid(format!(
            "n1 must satisfy 1 <= n1 <= w={w} (λ={lambda}), got n1={n1}"
        ));
    }
    vand_vesip_r4(params, n1, w)
}

/// Same matrix as [`build_vand_vesip_r4`] but accepting any `1 <= n1 <= λ`.
/// Beyond `n1 = w` evaluation points may collide and the code need not be
/// MDS; the shape is still valid for encoding-cost measurements.
pub fn build_vand_vesip_r4_relaxed(p: usize, tau: usize, n1: usize) -> Result<CodeSpec> {
    let params = RingParams::new(p, tau)?;
    let lambda = params.lambda();
    if n1 == 0 || n1 > lambda {
        return invalid(format!(
            "n1 must satisfy 1 <= n1 <= λ={lambda}, got n1={n1}"
        ));
    }
    vand_vesip_r4(params, n1, (lambda - 1) / 2)
}

fn vand_vesip_r4(params: RingParams, n1: usize, w: usize) -> Result<CodeSpec> {
    let half = 1usize << n1;
    let xt1 = params.lift(&params.x_tau_plus_one());
    let xw = params.monomial(w);
    let mut points: Vec<RingElem> = (0..half)
        .map(|j| params.lift(&vandermonde_point(j)).add(&xw).mul(&xt1))
        .collect();
    points.push(params.zero());
    let h = vandermonde_rows(params, &points, 4);
    let mut spec = CodeSpec::esip(Family::VandVesip4, params, h)?;
    spec.size_exp = Some(n1);
    spec.w = Some(w);
    Ok(spec)
}

fn vandermonde_rows(params: RingParams, points: &[RingElem], r: usize) -> RingMatrix {
    let mut h = RingMatrix::zeros(params, r, points.len());
    for (j, pt) in points.iter().enumerate() {
        let mut acc = params.one();
        for i in 0..r {
            h.set(i, j, acc.clone());
            acc = acc.mul(pt);
        }
    }
    h
}

fn is_prime(p: usize) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// Generalized RDP as an ESIP-style code over `m = p`: `h_{i,j} = x^{(p-j) i}`.
pub fn build_generalized_rdp(p: usize, r: usize) -> Result<CodeSpec> {
    if !is_prime(p) || p < 3 {
        return invalid(format!("p must be an odd prime, got {p}"));
    }
    if r < 2 || r >= p {
        return invalid(format!("need 2 <= r < p, got r={r}"));
    }
    let params = RingParams::new(p, 1)?;
    let h = RingMatrix::from_fn(params, r, p, |i, j| params.monomial(((p - j) * i) % p));
    CodeSpec::esip(Family::GenRdp, params, h)
}

/// Blaum-Roth style ETBR code over `m = p` with `h_{i,j} = x^{i j}`.
pub fn build_br(p: usize, r: usize) -> Result<CodeSpec> {
    if !is_prime(p) || p < 3 {
        return invalid(format!("p must be an odd prime, got {p}"));
    }
    if r < 2 || r >= p {
        return invalid(format!("need 2 <= r < p, got r={r}"));
    }
    let params = RingParams::new(p, 1)?;
    let h = RingMatrix::from_fn(params, r, p, |i, j| params.monomial((i * j) % p));
    CodeSpec::etbr(Family::Br, params, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vand_vetbr_shape() {
        let s = build_vand_vetbr(11, 1, 3, 8).unwrap();
        assert_eq!((s.total_cols(), s.row_size()), (256, 10));
        assert_eq!((s.hbin().rows(), s.hbin().cols()), (30, 2560));
        assert!(s.h().get(1, 0).is_zero());
        assert!(s.h().get(0, 0).is_one());
    }

    #[test]
    fn vand_vetbr_rejects_n0_above_lambda() {
        let e = build_vand_vetbr(11, 1, 3, 11).unwrap_err();
        assert!(e.to_string().contains("n0 exceeds λ=10"), "{e}");
    }

    #[test]
    fn vand_vesip4_shape() {
        let s = build_vand_vesip_r4(11, 1, 2).unwrap();
        assert_eq!(s.shift_w(), Some(4));
        assert_eq!((s.n(), s.total_cols()), (5, 8));
        // last column of H is (1,0,0,0)
        assert!(s.h().get(0, 4).is_one());
        assert!((1..4).all(|i| s.h().get(i, 4).is_zero()));
        assert!(build_vand_vesip_r4(11, 1, 5).is_err());
    }

    #[test]
    fn cauchy_defaults_and_validation() {
        let s = build_cauchy_vesip(5, 1, 2, 3, None, None).unwrap();
        let (a, b) = s.cauchy_points();
        assert_eq!(a, &[Poly::zero(), Poly::one()]);
        assert_eq!(b, &[Poly::from_u64(2), Poly::from_u64(3)]);
        assert_eq!(s.total_cols(), 4);
        let bad = build_cauchy_vesip(
            5,
            1,
            2,
            3,
            Some(vec![Poly::zero(), Poly::one()]),
            Some(vec![Poly::one(), Poly::from_u64(2)]),
        );
        assert!(bad.is_err());
        let deg = build_cauchy_vesip(
            5,
            1,
            2,
            3,
            None,
            Some(vec![Poly::from_u64(16), Poly::from_u64(2)]),
        );
        assert!(deg.is_err());
    }

    #[test]
    fn family_tags_round_trip() {
        for f in [
            Family::CauchyVesip,
            Family::VandVetbr,
            Family::VandVesip4,
            Family::GenRdp,
            Family::Br,
        ] {
            assert_eq!(f.tag().parse::<Family>().unwrap(), f);
        }
    }

    #[test]
    fn prime_checks() {
        assert!(build_generalized_rdp(9, 2).is_err());
        assert!(build_br(7, 7).is_err());
        assert!(build_br(7, 3).is_ok());
    }
}
