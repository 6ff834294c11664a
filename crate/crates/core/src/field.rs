//! Arithmetic in `F_q` for odd prime powers `q = p^e`, `e <= 4`.
//!
//! Elements are stored as their base-`p` integer: the polynomial
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` is the integer `sum c_i p^i`.
//! That integer is also the serialized form of an element, and the
//! enumeration order of the field. All operations go through lookup tables
//! built once per context, so a `FieldCtx` is immutable and can be shared
//! freely between threads.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest field order for which tables are built.
pub const MAX_ORDER: u32 = 1024;
/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 4;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// Base-`p` integer encoding, `0 <= v < q`.
    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub(crate) fn from_value(v: u16) -> Self {
        Self(v)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, lowest coefficient first, length `e + 1`.
    modulus: Vec<u32>,
    nonsquare: FieldElement,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    square: Vec<bool>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .field("nonsquare", &self.nonsquare)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r[r.len() - 1] % p;
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p * p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

fn digits(mut v: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = v % p;
        v /= p;
    }
    out
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    for deg in 1..=e / 2 {
        for t in 0..p.pow(deg as u32) {
            let mut cand = digits(t, p, deg);
            cand.push(1);
            if poly_rem(m, &cand, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `e`, ordering candidates by
/// `(c_{e-1}, ..., c_0)` read as a base-`p` integer.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    for t in 0..p.pow(e) {
        let mut m = digits(t, p, e as usize);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// Builds `F_{p^e}` with the smallest monic irreducible modulus.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenCharacteristic { p });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime { p });
        }
        if e == 0 || e > MAX_DEGREE {
            return Err(Error::UnsupportedDegree { e });
        }
        let q64 = (p as u64).pow(e);
        if q64 > MAX_ORDER as u64 {
            return Err(Error::OrderTooLarge {
                q: q64,
                limit: MAX_ORDER,
            });
        }
        let q = q64 as u32;
        let modulus = smallest_irreducible(p, e);
        let qs = q as usize;

        let coeffs: Vec<Vec<u32>> = (0..q).map(|v| digits(v, p, e as usize)).collect();
        let encode = |c: &[u32]| -> u16 { c.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u16 };

        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        let mut prod = vec![0u32; 2 * e as usize - 1];
        for a in 0..qs {
            for b in 0..qs {
                let ca = &coeffs[a];
                let cb = &coeffs[b];
                let sum: Vec<u32> = ca.iter().zip(cb).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = encode(&sum);
                prod.iter_mut().for_each(|c| *c = 0);
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                mul[a * qs + b] = encode(&poly_rem(&prod, &modulus, p));
            }
        }
        let mut neg = vec![0u16; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u16;
        }
        let mut inv = vec![0u16; qs];
        for a in 1..qs {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u16;
        }
        let mut square = vec![false; qs];
        for a in 0..qs {
            square[mul[a * qs + a] as usize] = true;
        }
        let nonsquare = (1..qs)
            .find(|&a| !square[a])
            .map(|a| FieldElement(a as u16))
            .expect("odd order fields have non-squares");

        Ok(Self {
            p,
            e,
            q,
            modulus,
            nonsquare,
            add,
            mul,
            neg,
            inv,
            square,
        })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// Builds the field from its order by factoring `q = p^e`.
    pub fn with_order(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower { q });
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut rest = q;
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower { q });
        }
        Self::new(p, e)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The canonical non-square: first non-square in enumeration order.
    #[inline]
    pub fn nonsquare(&self) -> FieldElement {
        self.nonsquare
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value < self.q as u64 {
            Ok(FieldElement(value as u16))
        } else {
            Err(Error::InvalidElement { value, q: self.q })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn scalar(&self, x: i64) -> FieldElement {
        FieldElement(x.rem_euclid(self.p as i64) as u16)
    }

    /// Polynomial-basis coefficients `c_0, ..., c_{e-1}`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0 as u32, self.p, self.e as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.e as usize {
            return Err(Error::DimensionMismatch {
                expected: self.e as usize,
                found: coeffs.len(),
            });
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::InvalidElement {
                    value: c as u64,
                    q: self.p,
                });
            }
            v = v * self.p as u64 + c as u64;
        }
        self.element(v)
    }

    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q as u16).map(FieldElement)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q as u16).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FieldElement(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// True iff `a = b^2` for some `b`; zero counts as a square, so callers
    /// that need the non-zero square class must test for zero first.
    #[inline]
    pub fn is_square(&self, a: FieldElement) -> bool {
        self.square[a.0 as usize]
    }

    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        debug_assert_eq!(a.len(), b.len());
        if self.e == 1 {
            // products are < p^2 <= 2^20, so a few thousand terms fit in u64
            let p = self.p as u64;
            let s: u64 = a.iter().zip(b).map(|(x, y)| x.0 as u64 * y.0 as u64).sum();
            FieldElement((s % p) as u16)
        } else {
            a.iter().zip(b).fold(FieldElement::ZERO, |acc, (&x, &y)| {
                self.add(acc, self.mul(x, y))
            })
        }
    }

    /// `y += a * x`.
    pub fn axpy(&self, y: &mut [FieldElement], a: FieldElement, x: &[FieldElement]) {
        debug_assert_eq!(y.len(), x.len());
        if a.is_zero() {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.add(*yi, self.mul(a, xi));
        }
    }

    pub fn scale(&self, a: FieldElement, x: &mut [FieldElement]) {
        for xi in x.iter_mut() {
            *xi = self.mul(a, *xi);
        }
    }
}
