use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order handled by the table-driven arithmetic.
pub const MAX_ORDER: u32 = 256;

/// GF(p^m) with a fixed monic irreducible modulus.
///
/// Elements are encoded as integers in `[0, q)`: the polynomial
/// `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` maps to `Σ c_i p^i`. All four
/// operations are precomputed into `q × q` tables at construction.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u32;
    while i.saturating_mul(i) <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Returns `(p, m)` when `q = p^m` for a prime `p`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|c| q.is_multiple_of(*c))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

// Polynomials over GF(p) as coefficient vectors, low degree first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
        }
        r = trim(r);
    }
    r
}

fn decode(value: u32, p: u32, m: u32) -> Vec<u32> {
    let mut v = value;
    (0..m)
        .map(|_| {
            let c = v % p;
            v /= p;
            c
        })
        .collect()
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-p
/// digits of `index`.
fn monic_from_index(index: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut poly = decode(index, p, deg);
    poly.push(1);
    poly
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg == 0 {
        return false;
    }
    for dd in 1..=deg / 2 {
        for idx in 0..p.pow(dd) {
            let divisor = monic_from_index(idx, p, dd);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// GF(p^m) with the smallest monic irreducible modulus of degree `m`,
    /// where candidates are ordered by their base-p integer encoding (the
    /// constant term is the least significant digit).
    pub fn new(p: u32, m: u32) -> Result<Arc<Self>> {
        Self::check_order(p, m)?;
        let modulus = (0..p.pow(m))
            .map(|idx| monic_from_index(idx, p, m))
            .find(|poly| is_irreducible(poly, p))
            .expect("an irreducible polynomial exists in every degree");
        Ok(Arc::new(Self::build(p, m, modulus)))
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Arc<Self>> {
        let (p, m) = prime_power(q).ok_or_else(|| Error::InvalidParams(format!("{q} is not a prime power")))?;
        Self::new(p, m)
    }

    /// GF(p^m) with an explicit modulus (coefficients low to high).
    pub fn with_modulus(p: u32, m: u32, modulus: &[u32]) -> Result<Arc<Self>> {
        Self::check_order(p, m)?;
        if modulus.len() != m as usize + 1 {
            return Err(Error::BadModulus(format!(
                "expected {} coefficients, got {}",
                m + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus(format!("coefficients must lie in [0, {p})")));
        }
        if modulus[m as usize] != 1 {
            return Err(Error::BadModulus("modulus is not monic".into()));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::BadModulus("modulus is reducible".into()));
        }
        Ok(Arc::new(Self::build(p, m, modulus.to_vec())))
    }

    fn check_order(p: u32, m: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::BadExponent(m));
        }
        let q = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::OrderTooLarge(q));
        }
        Ok(())
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(m);
        let qs = q as usize;
        let elems: Vec<Vec<u32>> = (0..q).map(|v| decode(v, p, m)).collect();
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let sum: Vec<u32> = elems[a].iter().zip(&elems[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = encode(&sum, p) as u8;
                let prod = poly_rem(&poly_mul(&elems[a], &elems[b], p), &modulus, p);
                mul[a * qs + b] = encode(&prod, p) as u8;
            }
        }
        let neg = (0..qs)
            .map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8)
            .collect();
        let inv = (0..qs)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u8
                }
            })
            .collect();
        Self {
            p,
            m,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    // Raw arithmetic on encoded values. Callers guarantee `a, b < q`.

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; zero maps to zero and must be excluded by the caller.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }

    /// Polynomial-basis coefficients of an encoded element.
    pub fn coefficients(&self, value: u8) -> Vec<u32> {
        decode(value as u32, self.p, self.m)
    }

    pub fn element(self: &Arc<Self>, value: u32) -> Result<FieldElement> {
        if value >= self.q {
            return Err(Error::ElementOutOfRange { value, q: self.q });
        }
        Ok(FieldElement {
            field: Arc::clone(self),
            value: value as u8,
        })
    }

    /// Generator `x` of the polynomial basis (equal to the integer `p` when `m > 1`).
    pub fn alpha(self: &Arc<Self>) -> FieldElement {
        let v = if self.m == 1 { 0 } else { self.p as u8 };
        FieldElement {
            field: Arc::clone(self),
            value: v,
        }
    }
}

/// An element of a specific field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Arc<FieldSpec>,
    value: u8,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈GF({})", self.value, self.field.q)
    }
}

/// The operations accepted by [`FieldElement::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
}

impl FieldElement {
    pub fn value(&self) -> u8 {
        self.value
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn coefficients(&self) -> Vec<u32> {
        self.field.coefficients(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, rhs: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.field, &rhs.field) || *self.field == *rhs.field {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    fn with(&self, value: u8) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            value,
        }
    }

    pub fn add(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.add(self.value, rhs.value)))
    }

    pub fn sub(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.sub(self.value, rhs.value)))
    }

    pub fn mul(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.mul(self.value, rhs.value)))
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        self.same_field(rhs)?;
        let inv = rhs.inv()?;
        Ok(self.with(self.field.mul(self.value, inv.value)))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.with(self.field.inv(self.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }

    /// Dispatches on `op`; unary operations ignore `rhs`.
    pub fn apply(&self, op: FieldOp, rhs: Option<&FieldElement>) -> Result<FieldElement> {
        let need = || rhs.ok_or_else(|| Error::InvalidParams(format!("{op:?} needs a second operand")));
        match op {
            FieldOp::Add => self.add(need()?),
            FieldOp::Sub => self.sub(need()?),
            FieldOp::Mul => self.mul(need()?),
            FieldOp::Div => self.div(need()?),
            FieldOp::Inv => self.inv(),
            FieldOp::Neg => Ok(self.neg()),
        }
    }
}
