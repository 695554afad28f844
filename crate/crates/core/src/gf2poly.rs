//! Dense polynomials over GF(2).
//!
//! Coefficients are packed little-endian in `u64` words: bit `k` of the
//! vector is the coefficient of `x^k`. The word vector never has trailing
//! zero words, so structural equality is polynomial equality.

use crate::error::{invalid, Error, Result};
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    words: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { words: vec![1] }
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut p = Poly {
            words: vec![0; k / 64 + 1],
        };
        p.words[k / 64] = 1u64 << (k % 64);
        p
    }

    /// Sum of `x^e` over `exps`; repeated exponents cancel.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exps: I) -> Self {
        let mut p = Poly::zero();
        for e in exps {
            p.toggle(e);
        }
        p
    }

    /// Bit `k` of `bits` is the coefficient of `x^k`.
    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Poly { words };
        p.normalize();
        p
    }

    /// Parses the hex encoding produced by [`Poly::to_hex`].
    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .unwrap_or(s);
        if s.is_empty() {
            return invalid("empty hex polynomial");
        }
        let mut p = Poly::zero();
        for (i, c) in s.chars().rev().enumerate() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Error::InvalidParameter(format!("bad hex digit {c:?} in {s:?}")))?
                as u64;
            for b in 0..4 {
                if d >> b & 1 == 1 {
                    p.toggle(4 * i + b);
                }
            }
        }
        Ok(p)
    }

    /// Lower-case hex of the coefficient integer, most significant digit first.
    pub fn to_hex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        let top = self.words.len() - 1;
        s.push_str(&format!("{:x}", self.words[top]));
        for w in self.words[..top].iter().rev() {
            s.push_str(&format!("{w:016x}"));
        }
        s
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Lowest word, or zero. Exact for polynomials of degree below 64.
    pub fn low_u64(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, k: usize) -> bool {
        self.words
            .get(k / 64)
            .is_some_and(|w| w >> (k % 64) & 1 == 1)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
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

    pub fn toggle(&mut self, k: usize) {
        if self.words.len() <= k / 64 {
            self.words.resize(k / 64 + 1, 0);
        }
        self.words[k / 64] ^= 1u64 << (k % 64);
        self.normalize();
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let ws = k / 64;
        let bs = k % 64;
        let mut out = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            out[i + ws] ^= w << bs;
            if bs != 0 {
                out[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        Poly::from_words(out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.words.len() + other.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            for (j, &b) in other.words.iter().enumerate() {
                let (lo, hi) = clmul(a, b);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        Poly::from_words(out)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Quotient and remainder with `deg(rem) < deg(divisor)`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let shift = rd - dd;
            quo.toggle(shift);
            rem += &divisor.shl(shift);
        }
        Ok((quo, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic gcd; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a)
    }

    /// Inverse of `self` modulo `modulus`, reduced below `deg(modulus)`.
    pub fn inv_mod(&self, modulus: &Poly) -> Result<Poly> {
        match modulus.degree() {
            None => return Err(Error::DivisionByZero),
            Some(0) => return Err(Error::ConstantModulus),
            _ => {}
        }
        let mut r0 = modulus.clone();
        let mut r1 = self.rem(modulus)?;
        let mut s0 = Poly::zero();
        let mut s1 = Poly::one();
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = &s0 + &q.mul(&s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if !r0.is_one() {
            let gcd = if r0.is_zero() { modulus.clone() } else { r0 };
            return Err(Error::NotInvertible {
                gcd: gcd.to_string(),
            });
        }
        s0.rem(modulus)
    }

    fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

/// Carry-less 64x64 -> 128 bit product as (low, high).
#[inline]
fn clmul(a: u64, b: u64) -> (u64, u64) {
    let mut lo = 0u64;
    let mut hi = 0u64;
    let mut a = a;
    while a != 0 {
        let i = a.trailing_zeros();
        a &= a - 1;
        lo ^= b << i;
        if i != 0 {
            hi ^= b >> (64 - i);
        }
    }
    (lo, hi)
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        if self.words.len() < rhs.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a ^= b;
        }
        self.normalize();
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .exponents()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// `1 + x^tau + x^{2 tau} + ... + x^{(p-1) tau}`.
pub fn f_poly(p: usize, tau: usize) -> Poly {
    Poly::from_exponents((0..p).map(|k| k * tau))
}

/// Size of the smallest 2-cyclotomic coset modulo odd `p > 1`, which equals
/// the smallest degree among irreducible factors of `1 + x + ... + x^{p-1}`.
pub fn lambda_of(p: usize) -> Result<usize> {
    if p < 3 || p.is_multiple_of(2) {
        return invalid(format!("p must be odd and > 1, got {p}"));
    }
    let mut best = usize::MAX;
    for a in 1..p {
        let mut size = 1;
        let mut c = (2 * a) % p;
        while c != a {
            c = (2 * c) % p;
            size += 1;
        }
        best = best.min(size);
    }
    Ok(best)
}
