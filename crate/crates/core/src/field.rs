//! Finite fields GF(p^k) for small prime powers.
//!
//! An element is stored as the index `c0 + c1*p + ... + c_{k-1}*p^{k-1}` of its
//! coefficient vector in the polynomial basis `1, g, ..., g^{k-1}`, where `g` is
//! the class of `x` modulo the field's defining polynomial. Arithmetic goes
//! through precomputed tables for fields of order at most 256 and through
//! log/antilog tables beyond that.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default ceiling on `p^k` accepted by [`Field::new`].
pub const DEFAULT_FIELD_BOUND: usize = 64;

/// Absolute ceiling on field order; element indices must fit in `u16` and the
/// log tables must stay small.
pub const MAX_FIELD_ORDER: usize = 1 << 12;

const FULL_TABLE_LIMIT: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    ReducibleModulus(u32),
    #[error("field of order {order} exceeds the configured bound {bound}")]
    FieldTooLarge { order: u64, bound: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

/// Raw field element: an index into the owning field's element list.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Immutable arithmetic context for GF(p^k).
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Option<Box<[u16]>>,
    mul: Option<Box<[u16]>>,
    neg: Box<[u16]>,
    inv: Box<[u16]>,
    log: Box<[u16]>,
    exp: Box<[u16]>,
}

/// Shared handle to a [`FieldCtx`]. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<FieldCtx>);

impl Deref for Field {
    type Target = FieldCtx;
    fn deref(&self) -> &FieldCtx {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p == other.p && self.k == other.k && self.modulus == other.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.k.hash(state);
        self.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{}; {:?})", self.p, self.k, self.modulus)
        }
    }
}

/// Wire form of a field: `{"p":…, "k":…, "modulus":[…]}`, modulus constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

// Polynomials over GF(p) as plain coefficient vectors; only used while the
// context is being built.
fn trim(v: &mut Vec<u32>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn pp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while r.len() > dm && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p * p - c * mi % p) % p;
        }
        trim(&mut r);
        if r.len() - 1 < dm {
            break;
        }
    }
    r
}

fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u32;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn digits(mut i: usize, p: u32, k: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(k as usize);
    for _ in 0..k {
        d.push((i % p as usize) as u32);
        i /= p as usize;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> usize {
    d.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn is_irreducible_mod_p(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 || m[deg] != 1 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for idx in 0..count {
            let mut cand = digits(idx, p, d as u32);
            cand.push(1);
            let r = pp_rem(m, &cand, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `k` over GF(p), ordered by the
/// coefficient tuple read from the highest non-leading coefficient down.
pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    let count = (p as usize).pow(k);
    for idx in 0..count {
        let mut cand = digits(idx, p, k);
        cand.push(1);
        if is_irreducible_mod_p(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// GF(p^k) with the default bound on the order.
    pub fn new(p: u64, k: u32, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
        Self::with_bound(p, k, modulus, DEFAULT_FIELD_BOUND)
    }

    /// Prime field GF(p).
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        Self::new(p, 1, None)
    }

    /// GF(q) for a prime power `q`, default modulus.
    pub fn of_order(q: u64) -> Result<Field, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        Self::new(p as u64, k, None)
    }

    pub fn with_bound(
        p: u64,
        k: u32,
        modulus: Option<&[u32]>,
        bound: usize,
    ) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ReducibleModulus(0));
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        let limit = bound.min(MAX_FIELD_ORDER) as u128;
        if order > limit {
            return Err(FieldError::FieldTooLarge {
                order: order.min(u64::MAX as u128) as u64,
                bound,
            });
        }
        let p = p as u32;
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u32> = m.iter().map(|&c| c % p).collect();
                if m.len() != k as usize + 1 || !is_irreducible_mod_p(&m, p) {
                    return Err(FieldError::ReducibleModulus(k));
                }
                m
            }
            None => default_modulus(p, k),
        };
        Ok(Field(Arc::new(FieldCtx::build(p, k, modulus))))
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, k: self.k, modulus: self.modulus.clone() }
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field, FieldError> {
        Field::with_bound(spec.p as u64, spec.k, Some(&spec.modulus), MAX_FIELD_ORDER)
    }

    pub fn element(&self, value: Elem) -> FieldElement {
        FieldElement { field: self.clone(), value }
    }

    /// Parses the text form. Accepts integers (reduced mod p, negatives allowed),
    /// bracketed coefficient tuples `[c0,c1,...]`, and `g`-expressions.
    pub fn parse(&self, s: &str) -> Result<Elem, FieldError> {
        let t = s.trim();
        if t.starts_with('[') && t.ends_with(']') {
            let inner = &t[1..t.len() - 1];
            let mut coeffs = Vec::new();
            for part in inner.split(',') {
                let v: i64 = part.trim().parse().map_err(|_| FieldError::Parse(s.to_string()))?;
                coeffs.push(v.rem_euclid(self.p as i64) as u32);
            }
            if coeffs.len() > self.k as usize {
                return Err(FieldError::Parse(format!("{s}: too many coefficients")));
            }
            return Ok(self.from_coefficients(&coeffs));
        }
        crate::poly::parse_constant(self, t).map_err(|e| FieldError::Parse(format!("{s}: {e}")))
    }
}

impl FieldCtx {
    fn build(p: u32, k: u32, modulus: Vec<u32>) -> FieldCtx {
        let q = (p as usize).pow(k);
        let slow_mul = |a: usize, b: usize| -> usize {
            let (da, db) = (digits(a, p, k), digits(b, p, k));
            let mut prod = vec![0u32; (2 * k - 1) as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = pp_rem(&prod, &modulus, p);
            r.resize(k as usize, 0);
            undigits(&r, p)
        };
        let slow_add = |a: usize, b: usize| -> usize {
            let (da, db) = (digits(a, p, k), digits(b, p, k));
            let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            undigits(&s, p)
        };

        let neg: Vec<u16> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a, p, k).iter().map(|&c| (p - c) % p).collect();
                undigits(&d, p) as u16
            })
            .collect();

        // Primitive element: smallest nonzero element of multiplicative order q-1.
        let mut exp = vec![0u16; q.max(2) - 1];
        let mut log = vec![0u16; q];
        'search: for g in 1..q {
            let mut x = 1usize;
            for (i, slot) in exp.iter_mut().enumerate() {
                if i > 0 && x == 1 {
                    continue 'search;
                }
                *slot = x as u16;
                x = slow_mul(x, g);
            }
            if x == 1 {
                break;
            }
        }
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u16;
        }

        let mut inv = vec![0u16; q];
        for a in 1..q {
            let l = log[a] as usize;
            inv[a] = exp[(q - 1 - l) % (q - 1)];
        }

        let (add, mul) = if q <= FULL_TABLE_LIMIT {
            let mut add = vec![0u16; q * q];
            let mut mul = vec![0u16; q * q];
            for a in 0..q {
                for b in 0..q {
                    add[a * q + b] = slow_add(a, b) as u16;
                    mul[a * q + b] = if a == 0 || b == 0 {
                        0
                    } else {
                        exp[(log[a] as usize + log[b] as usize) % (q - 1)]
                    };
                }
            }
            (Some(add.into_boxed_slice()), Some(mul.into_boxed_slice()))
        } else {
            (None, None)
        };

        FieldCtx {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg: neg.into_boxed_slice(),
            inv: inv.into_boxed_slice(),
            log: log.into_boxed_slice(),
            exp: exp.into_boxed_slice(),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Number of elements `q = p^k`.
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.q).map(|i| Elem(i as u16))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.q).map(|i| Elem(i as u16))
    }

    pub fn elem(&self, index: usize) -> Elem {
        assert!(index < self.q, "element index {index} out of range for GF({})", self.q);
        Elem(index as u16)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.p as i64) as u16)
    }

    /// The class of `x` modulo the defining polynomial (equals 0 for prime fields).
    pub fn generator(&self) -> Elem {
        if self.k == 1 {
            Elem(0)
        } else {
            Elem(self.p as u16)
        }
    }

    /// A fixed generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        Elem(self.exp.get(1).copied().unwrap_or(1))
    }

    /// Discrete log to the base [`FieldCtx::primitive`]. Panics on zero.
    pub fn log(&self, a: Elem) -> usize {
        assert!(!a.is_zero(), "log of zero");
        self.log[a.index()] as usize
    }

    pub fn exp(&self, e: usize) -> Elem {
        Elem(self.exp[e % (self.q - 1)])
    }

    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        digits(a.index(), self.p, self.k)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Elem {
        let mut d: Vec<u32> = c.iter().map(|&x| x % self.p).collect();
        d.resize(self.k as usize, 0);
        if c.len() > self.k as usize {
            // reduce modulo the defining polynomial
            let r = pp_rem(&c.iter().map(|&x| x % self.p).collect::<Vec<_>>(), &self.modulus, self.p);
            d = r;
            d.resize(self.k as usize, 0);
        }
        Elem(undigits(&d, self.p) as u16)
    }

    pub fn in_prime_field(&self, a: Elem) -> bool {
        a.index() < self.p as usize
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add {
            Some(t) => Elem(t[a.index() * self.q + b.index()]),
            None if self.p == 2 => Elem(a.0 ^ b.0),
            None => {
                let (da, db) = (digits(a.index(), self.p, self.k), digits(b.index(), self.p, self.k));
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
                Elem(undigits(&s, self.p) as u16)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.mul {
            Some(t) => Elem(t[a.index() * self.q + b.index()]),
            None => {
                if a.is_zero() || b.is_zero() {
                    Elem::ZERO
                } else {
                    self.exp(self.log[a.index()] as usize + self.log[b.index()] as usize)
                }
            }
        }
    }

    /// Multiplicative inverse. Panics on zero; use [`FieldCtx::try_inv`] for a checked version.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        Elem(self.inv[a.index()])
    }

    pub fn try_inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv(a))
        }
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let l = self.log[a.index()] as u64;
        self.exp(((l * (e % (self.q as u64 - 1))) % (self.q as u64 - 1)) as usize)
    }

    /// `a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ONE, |acc, x| self.mul(acc, x))
    }

    /// Text form: integers `0..p-1` for prime fields, otherwise an expression in
    /// `g` such as `g^2+2*g+1`.
    pub fn format(&self, a: Elem) -> String {
        if self.k == 1 {
            return a.index().to_string();
        }
        let c = self.coefficients(a);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            parts.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => mono,
                _ => format!("{ci}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

/// A field element bundled with its context; arithmetic across different
/// fields is an error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub field: Field,
    pub value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElement {
    fn same(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
        self.same(other)?;
        let f = &self.field;
        let (a, b) = (self.value, other.value);
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.mul(a, f.try_inv(b)?),
        };
        Ok(f.element(value))
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.arith(other, ArithOp::Add)
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.arith(other, ArithOp::Sub)
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.arith(other, ArithOp::Mul)
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.arith(other, ArithOp::Div)
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.field.element(self.field.try_inv(self.value)?))
    }

    pub fn neg(&self) -> FieldElement {
        self.field.element(self.field.neg(self.value))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.element(self.field.pow(self.value, e))
    }
}

/// An extension `L ⊇ K` together with the embedding of `K` into `L`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub field: Field,
    embedding: Vec<Elem>,
}

impl Extension {
    pub fn embed(&self, a: Elem) -> Elem {
        self.embedding[a.index()]
    }

    pub fn embedding(&self) -> &[Elem] {
        &self.embedding
    }
}

/// Builds GF(p^{kd}) and the embedding of `base` into it.
pub fn extension_field(base: &Field, d: u32, bound: usize) -> Result<Extension, FieldError> {
    let field = Field::with_bound(base.p as u64, base.k * d, None, bound)?;
    if d == 1 && field == *base {
        let embedding = base.elements().collect();
        return Ok(Extension { field, embedding });
    }
    if base.k == 1 {
        let embedding = base.elements().map(|a| field.from_int(a.index() as i64)).collect();
        return Ok(Extension { field, embedding });
    }
    // Smallest root of the base modulus in the extension is the image of g.
    let m: Vec<Elem> = base.modulus.iter().map(|&c| field.from_int(c as i64)).collect();
    let root = field
        .elements()
        .find(|&z| {
            let v = m.iter().rev().fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, z), c));
            v.is_zero()
        })
        .expect("extension of degree divisible by k contains a root of the modulus");
    let embedding = base
        .elements()
        .map(|a| {
            let c = base.coefficients(a);
            c.iter()
                .rev()
                .fold(Elem::ZERO, |acc, &ci| field.add(field.mul(acc, root), field.from_int(ci as i64)))
        })
        .collect();
    Ok(Extension { field, embedding })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_elements() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.elements().map(|e| e.index()).collect::<Vec<_>>(), vec![0, 1, 2]);
        let g2 = Field::prime(2).unwrap();
        assert_eq!(g2.elements().count(), 2);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(Field::new(2, 7, None), Err(FieldError::FieldTooLarge { .. })));
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert_eq!(Field::new(2, 2, Some(&[1, 0, 1])).unwrap_err(), FieldError::ReducibleModulus(2));
        assert!(Field::new(3, 2, Some(&[1, 0, 1])).is_ok());
    }

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn gf4_generator_squared() {
        let f = Field::new(2, 2, None).unwrap();
        let g = f.generator();
        assert_eq!(f.mul(g, g), f.add(g, f.one()));
    }

    #[test]
    fn small_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.mul(f3.from_int(2), f3.from_int(2)), f3.one());
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.inv(f5.from_int(2)), f5.from_int(3));
    }

    #[test]
    fn checked_element_ops() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        let a = f3.element(f3.from_int(2));
        let b = f5.element(f5.from_int(2));
        assert_eq!(a.add(&b).unwrap_err(), FieldError::MixedFields);
        let z = f3.element(Elem::ZERO);
        assert_eq!(a.div(&z).unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(z.inv().unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(a.mul(&a).unwrap().value, f3.one());
    }

    fn check_axioms(f: &Field) {
        let els: Vec<Elem> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.pow(a, f.order() as u64), a, "Frobenius fixed point");
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                if !a.is_zero() && !b.is_zero() {
                    assert_eq!(f.inv(f.mul(a, b)), f.mul(f.inv(b), f.inv(a)));
                }
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_exhaustive_small_fields() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27] {
            check_axioms(&Field::of_order(q).unwrap());
        }
    }

    #[test]
    fn large_field_paths_agree_with_structure() {
        let f = Field::with_bound(3, 6, None, 1024).unwrap();
        assert!(f.mul.is_none());
        let a = f.elem(100);
        let b = f.elem(371);
        assert_eq!(f.mul(f.div(a, b), b), a);
        assert_eq!(f.sub(f.add(a, b), b), a);
        assert_eq!(f.pow(a, f.order() as u64), a);
        let f2 = Field::with_bound(2, 9, None, 1024).unwrap();
        let c = f2.elem(300);
        assert_eq!(f2.add(c, c), Elem::ZERO);
    }

    #[test]
    fn extension_embeddings() {
        let f2 = Field::prime(2).unwrap();
        let e = extension_field(&f2, 2, 64).unwrap();
        assert_eq!(e.field.order(), 4);
        assert_eq!(e.embed(f2.one()), e.field.one());

        let f3 = Field::prime(3).unwrap();
        let e9 = extension_field(&f3, 2, 64).unwrap();
        let two = e9.embed(f3.from_int(2));
        assert_eq!(e9.field.mul(two, two), e9.embed(f3.from_int(1)));

        let e8 = extension_field(&f2, 3, 64).unwrap();
        assert_eq!(e8.field.modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn extension_of_extension_is_homomorphic_and_fixed() {
        let f4 = Field::of_order(4).unwrap();
        let e = extension_field(&f4, 2, 64).unwrap();
        let l = &e.field;
        let mut image = std::collections::BTreeSet::new();
        for a in f4.elements() {
            for b in f4.elements() {
                assert_eq!(e.embed(f4.mul(a, b)), l.mul(e.embed(a), e.embed(b)));
                assert_eq!(e.embed(f4.add(a, b)), l.add(e.embed(a), e.embed(b)));
            }
            image.insert(e.embed(a));
        }
        assert_eq!(image.len(), 4);
        // the image is the fixed field of x -> x^4
        let fixed: std::collections::BTreeSet<Elem> =
            l.elements().filter(|&z| l.pow(z, 4) == z).collect();
        assert_eq!(fixed, image);
    }

    #[test]
    fn text_round_trip() {
        let f9 = Field::of_order(9).unwrap();
        for a in f9.elements() {
            assert_eq!(f9.parse(&f9.format(a)).unwrap(), a);
            let c = f9.coefficients(a);
            assert_eq!(f9.parse(&format!("[{},{}]", c[0], c[1])).unwrap(), a);
        }
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("-1").unwrap(), f5.from_int(4));
        assert_eq!(f5.parse("12").unwrap(), f5.from_int(2));
    }
}
