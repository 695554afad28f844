//! The cyclic ring `R = F2[x]/(x^m + 1)` with `m = p * tau`, its quotient
//! `R_{p,tau} = F2[x]/f_{p,tau}`, and circulant matrices.
//!
//! Multiplication by `x` in `R` is a cyclic shift of the `m` coefficients.
//! Since `x^m + 1 = (x^tau + 1) f_{p,tau}`, reduction `R -> R_{p,tau}` is a
//! ring homomorphism and can be applied after any computation in `R`.

use crate::binmat::BitMatrix;
use crate::bits::BitVec;
use crate::error::{invalid, Error, Result};
use crate::gf2poly::{f_poly, lambda_of, Poly};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    p: usize,
    tau: usize,
}

impl RingParams {
    /// `p` odd and greater than one, `tau` a power of two.
    pub fn new(p: usize, tau: usize) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) {
            return invalid(format!("p must be odd and > 1, got {p}"));
        }
        if tau == 0 || !tau.is_power_of_two() {
            return invalid(format!("tau must be a power of two, got {tau}"));
        }
        Ok(RingParams { p, tau })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn m(&self) -> usize {
        self.p * self.tau
    }

    /// Bits per array column, `m - tau`.
    pub fn row_size(&self) -> usize {
        self.m() - self.tau
    }

    pub fn lambda(&self) -> usize {
        lambda_of(self.p).expect("validated p")
    }

    /// `f_{p,tau}`, the modulus of the quotient ring.
    pub fn f(&self) -> Poly {
        f_poly(self.p, self.tau)
    }

    /// `x^m + 1`.
    pub fn modulus(&self) -> Poly {
        Poly::from_exponents([0, self.m()])
    }

    /// `x^tau + 1` as a polynomial.
    pub fn x_tau_plus_one(&self) -> Poly {
        Poly::from_exponents([0, self.tau])
    }

    pub fn zero(&self) -> RingElem {
        RingElem {
            bits: BitVec::zeros(self.m()),
        }
    }

    pub fn one(&self) -> RingElem {
        self.monomial(0)
    }

    /// `x^k` reduced modulo `x^m + 1`.
    pub fn monomial(&self, k: usize) -> RingElem {
        let mut e = self.zero();
        e.bits.set(k % self.m(), true);
        e
    }

    /// Image of a polynomial in `R`; exponents fold modulo `m`.
    pub fn lift(&self, a: &Poly) -> RingElem {
        let mut e = self.zero();
        for k in a.exponents() {
            e.bits.toggle(k % self.m());
        }
        e
    }

    /// Reduction `R -> R_{p,tau}`.
    pub fn reduce_to_quotient(&self, a: &RingElem) -> Poly {
        a.to_poly().rem(&self.f()).expect("f has positive degree")
    }

    /// Inverse in `R_{p,tau}` of an element given as a polynomial.
    pub fn quotient_inv(&self, a: &Poly) -> Result<Poly> {
        a.inv_mod(&self.f())
    }

    /// `gcd(a, x^m + 1)`; equals `x^m + 1` for `a = 0`.
    pub fn gcd_with_modulus(&self, a: &RingElem) -> Poly {
        a.to_poly()
            .gcd(&self.modulus())
            .expect("modulus is nonzero")
    }

    /// The `m x m` circulant of `a` with its last `i` rows and last `j`
    /// columns removed. Entry `(r, c)` is `a_{(c - r) mod m}`.
    pub fn circulant(&self, a: &RingElem, i: usize, j: usize) -> Result<BitMatrix> {
        let m = self.m();
        if a.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "ring element has {} coefficients, ring has m = {m}",
                a.len()
            )));
        }
        if i > m || j > m {
            return invalid(format!(
                "cannot delete {i} rows / {j} columns from a {m}x{m} circulant"
            ));
        }
        let mut out = BitMatrix::zeros(m - i, m - j);
        for r in 0..m - i {
            out.set_row(r, &a.bits.rotate_up(r).resized(m - j));
        }
        Ok(out)
    }
}

/// An element of `R`, stored as its `m` coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    bits: BitVec,
}

impl RingElem {
    pub fn from_bits(bits: BitVec) -> Self {
        RingElem { bits }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.bits.count_ones() == 1 && self.bits.get(0)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.bits.get(k)
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_exponents(self.bits.iter_ones())
    }

    pub fn add(&self, other: &RingElem) -> RingElem {
        let mut out = self.clone();
        out.bits.xor_assign(&other.bits);
        out
    }

    pub fn add_assign(&mut self, other: &RingElem) {
        self.bits.xor_assign(&other.bits);
    }

    /// `x^k * self`: a cyclic shift by `k`.
    pub fn shift(&self, k: usize) -> RingElem {
        RingElem {
            bits: self.bits.rotate_up(k),
        }
    }

    /// Cyclic convolution.
    pub fn mul(&self, other: &RingElem) -> RingElem {
        debug_assert_eq!(self.len(), other.len());
        let mut acc = BitVec::zeros(self.len());
        for k in self.bits.iter_ones() {
            acc.xor_assign(&other.bits.rotate_up(k));
        }
        RingElem { bits: acc }
    }

    pub fn pow(&self, mut e: u64) -> RingElem {
        let m = self.len();
        let mut acc = RingElem {
            bits: BitVec::zeros(m),
        };
        acc.bits.set(0, true);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem({self})")
    }
}

/// A dense matrix over `R`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    params: RingParams,
    rows: usize,
    cols: usize,
    entries: Vec<RingElem>,
}

impl RingMatrix {
    pub fn zeros(params: RingParams, rows: usize, cols: usize) -> Self {
        RingMatrix {
            params,
            rows,
            cols,
            entries: vec![params.zero(); rows * cols],
        }
    }

    pub fn from_fn(
        params: RingParams,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElem,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.len(), params.m(), "entry ({i},{j}) has wrong length");
                entries.push(e);
            }
        }
        RingMatrix {
            params,
            rows,
            cols,
            entries,
        }
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: RingElem) {
        assert_eq!(e.len(), self.params.m());
        self.entries[i * self.cols + j] = e;
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.rows != other.rows || self.params != other.params {
            return Err(Error::DimensionMismatch(format!(
                "cannot join {}x{} and {}x{} ring matrices",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RingMatrix::from_fn(
            self.params,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j).clone()
                } else {
                    other.get(i, j - self.cols).clone()
                }
            },
        ))
    }

    /// Columns `cols` in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> RingMatrix {
        RingMatrix::from_fn(self.params, self.rows, cols.len(), |i, j| {
            self.get(i, cols[j]).clone()
        })
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "RingMatrix {}x{} (m={}):",
            self.rows,
            self.cols,
            self.params.m()
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
