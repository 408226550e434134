//! Exact arithmetic in GF(p) and GF(2^h).
//!
//! A [`FieldSpec`] is a cheap, shareable handle (reference counted) that
//! carries the precomputed tables of one field. Elements are stored as their
//! canonical integer representative: the residue for prime fields and the
//! polynomial-basis bit encoding for binary extensions, so in GF(4) built on
//! `x^2 + x + 1` the element `a` is `2` and `a + 1` is `3`.
//!
//! Two entry points exist for arithmetic. [`FieldElement`] is the checked,
//! self-describing value type; the raw `u32` methods on [`FieldSpec`] are what
//! the linear algebra uses in its inner loops.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Default irreducible modulus per extension degree, bit-encoded with the
/// leading term included. Index `h` holds the modulus of degree `h`.
pub const DEFAULT_MODULI: [u32; 17] = [
    0, 0b11, 0b111, 0b1011, 0b1_0011, 0b10_0101, 0b100_0011, 0b1000_0011, 0x11B, 0x211, 0x409,
    0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {modulus:#b} is not irreducible over GF(2)")]
    Reducible { modulus: u32 },
    #[error("modulus {modulus:#b} does not have degree {degree}")]
    ModulusDegree { modulus: u32, degree: u32 },
    #[error("extension fields GF({p}^{h}) with odd characteristic are not supported")]
    UnsupportedExtension { p: u32, h: u32 },
    #[error("field order {p}^{h} exceeds the supported maximum of 2^16")]
    OrderTooLarge { p: u32, h: u32 },
    #[error("cannot combine elements of {left} and {right}")]
    MixedFields { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} is not an element of a field of order {q}")]
    ValueOutOfRange { value: u32, q: u32 },
    #[error("invalid field literal {0:?}")]
    Literal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Prime,
    BinaryExtension,
}

struct Tables {
    kind: FieldKind,
    p: u32,
    h: u32,
    modulus: Option<u32>,
    q: u32,
    /// `exp[i] = g^i` for `i < 2(q-1)`; binary extensions only.
    exp: Vec<u32>,
    /// Discrete log base `g`; `log[0]` is unused. Binary extensions only.
    log: Vec<u32>,
    inv: Vec<u32>,
}

/// Description of GF(q), shared by every element and matrix over it.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl FieldSpec {
    /// Builds and validates a field description.
    ///
    /// For `BinaryExtension` the characteristic must be 2; a missing modulus
    /// selects [`DEFAULT_MODULI`]. GF(2^1) is normalised to the prime field
    /// GF(2).
    pub fn new(kind: FieldKind, p: u32, h: u32, modulus: Option<u32>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        match kind {
            FieldKind::Prime => {
                if h != 1 {
                    return Err(FieldError::UnsupportedExtension { p, h });
                }
                if p > MAX_ORDER {
                    return Err(FieldError::OrderTooLarge { p, h });
                }
                Ok(Self::prime_unchecked(p))
            }
            FieldKind::BinaryExtension => {
                if p != 2 {
                    return Err(FieldError::UnsupportedExtension { p, h });
                }
                if h == 0 {
                    return Err(FieldError::Literal(format!("2^{h}")));
                }
                if h > 16 {
                    return Err(FieldError::OrderTooLarge { p, h });
                }
                if h == 1 && modulus.is_none_or(|m| m == 0b11) {
                    return Ok(Self::prime_unchecked(2));
                }
                let modulus = modulus.unwrap_or(DEFAULT_MODULI[h as usize]);
                if degree(modulus) != Some(h) {
                    return Err(FieldError::ModulusDegree { modulus, degree: h });
                }
                if !is_irreducible_gf2(modulus) {
                    return Err(FieldError::Reducible { modulus });
                }
                Ok(Self::binary_unchecked(h, modulus))
            }
        }
    }

    /// GF(p) for a prime `p`.
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        Self::new(FieldKind::Prime, p, 1, None)
    }

    /// GF(2^h) with the default modulus.
    pub fn binary(h: u32) -> Result<Self, FieldError> {
        Self::new(FieldKind::BinaryExtension, 2, h, None)
    }

    /// GF(q) for a supported order: a prime or a power of two.
    pub fn with_order(q: u32) -> Result<Self, FieldError> {
        if q >= 2 && q.is_power_of_two() {
            Self::binary(q.trailing_zeros())
        } else if is_prime(q) {
            Self::prime(q)
        } else {
            Err(FieldError::Literal(format!("gf({q})")))
        }
    }

    /// The smallest supported field of order at least `min_q`.
    pub fn smallest_with_order_at_least(min_q: u32) -> Result<Self, FieldError> {
        let q = (min_q.max(2)..=MAX_ORDER)
            .find(|&q| q.is_power_of_two() || is_prime(q))
            .ok_or(FieldError::OrderTooLarge { p: min_q, h: 1 })?;
        Self::with_order(q)
    }

    fn prime_unchecked(p: u32) -> Self {
        let mut inv = vec![0u32; p as usize];
        for a in 1..p {
            inv[a as usize] = mod_pow(a, p - 2, p);
        }
        FieldSpec(Arc::new(Tables {
            kind: FieldKind::Prime,
            p,
            h: 1,
            modulus: None,
            q: p,
            exp: Vec::new(),
            log: Vec::new(),
            inv,
        }))
    }

    fn binary_unchecked(h: u32, modulus: u32) -> Self {
        let q = 1u32 << h;
        let order = q - 1;
        // The modulus need not be primitive, so look for a generator.
        let generator = (2..q)
            .find(|&g| multiplicative_order(g, modulus, h) == order)
            .unwrap_or(1);
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x;
            exp[(i + order) as usize] = x;
            log[x as usize] = i;
            x = clmul_mod(x, generator, modulus, h);
        }
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            inv[a as usize] = exp[((order - log[a as usize]) % order) as usize];
        }
        FieldSpec(Arc::new(Tables {
            kind: FieldKind::BinaryExtension,
            p: 2,
            h,
            modulus: Some(modulus),
            q,
            exp,
            log,
            inv,
        }))
    }

    pub fn kind(&self) -> FieldKind {
        self.0.kind
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.h
    }

    pub fn modulus(&self) -> Option<u32> {
        self.0.modulus
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// True for GF(2^h), h ≥ 1 (including GF(2) itself).
    pub fn is_binary(&self) -> bool {
        self.0.p == 2
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        v < self.0.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self.0.kind {
            FieldKind::BinaryExtension => a ^ b,
            FieldKind::Prime => {
                let s = a + b;
                if s >= self.0.p {
                    s - self.0.p
                } else {
                    s
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.0.kind {
            FieldKind::BinaryExtension => a,
            FieldKind::Prime => {
                if a == 0 {
                    0
                } else {
                    self.0.p - a
                }
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.0.kind {
            FieldKind::Prime => ((a as u64 * b as u64) % self.0.p as u64) as u32,
            FieldKind::BinaryExtension => {
                if a == 0 || b == 0 {
                    0
                } else {
                    let t = &self.0;
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.0.inv[a as usize])
        }
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Wraps a raw value, checking range.
    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if value < self.0.q {
            Ok(FieldElement {
                value,
                field: self.clone(),
            })
        } else {
            Err(FieldError::ValueOutOfRange {
                value,
                q: self.0.q,
            })
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: self.clone(),
        }
    }

    /// All q elements in canonical order 0, 1, …, q−1.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |value| FieldElement {
            value,
            field: self.clone(),
        })
    }

    fn uses_default_modulus(&self) -> bool {
        match self.0.modulus {
            Some(m) => DEFAULT_MODULI[self.0.h as usize] == m,
            None => true,
        }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.kind == other.0.kind
                && self.0.p == other.0.p
                && self.0.h == other.0.h
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

/// Canonical literal: `gf(7)`, `gf(2^3)`, or `gf(2^3;0b1101)` for a
/// non-default modulus.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.kind {
            FieldKind::Prime => write!(f, "gf({})", self.0.p),
            FieldKind::BinaryExtension if self.uses_default_modulus() => {
                write!(f, "gf(2^{})", self.0.h)
            }
            FieldKind::BinaryExtension => {
                write!(f, "gf(2^{};{:#b})", self.0.h, self.0.modulus.unwrap_or(0))
            }
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::Literal(s.to_string());
        let inner = s
            .trim()
            .strip_prefix("gf(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (order, modulus) = match inner.split_once(';') {
            Some((o, m)) => (o.trim(), Some(parse_modulus(m.trim()).ok_or_else(bad)?)),
            None => (inner.trim(), None),
        };
        match order.split_once('^') {
            Some((p, h)) => {
                let p: u32 = p.trim().parse().map_err(|_| bad())?;
                let h: u32 = h.trim().parse().map_err(|_| bad())?;
                if p == 2 {
                    Self::new(FieldKind::BinaryExtension, p, h, modulus)
                } else if h == 1 && modulus.is_none() {
                    Self::prime(p)
                } else {
                    Err(FieldError::UnsupportedExtension { p, h })
                }
            }
            None => {
                if modulus.is_some() {
                    return Err(bad());
                }
                // gf(q) also names the default binary field when q = 2^h
                let q: u32 = order.parse().map_err(|_| bad())?;
                if q > 2 && q.is_power_of_two() {
                    Self::binary(q.trailing_zeros())
                } else {
                    Self::prime(q)
                }
            }
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn parse_modulus(s: &str) -> Option<u32> {
    if let Some(bits) = s.strip_prefix("0b") {
        u32::from_str_radix(bits, 2).ok()
    } else if let Some(hex) = s.strip_prefix("0x") {
        u32::from_str_radix(hex, 16).ok()
    } else {
        s.parse().ok()
    }
}

/// An element of a specific field. Arithmetic between elements of different
/// fields is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: u32,
    field: FieldSpec,
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::MixedFields {
                left: self.field.to_string(),
                right: other.field.to_string(),
            })
        }
    }

    fn with(&self, value: u32) -> Self {
        FieldElement {
            value,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        self.field
            .inv(self.value)
            .map(|v| self.with(v))
            .ok_or(FieldError::DivisionByZero)
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        self.mul(&other.inv()?)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(base: u32, mut e: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    let mut b = base as u64 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc as u32
}

fn degree(poly: u32) -> Option<u32> {
    if poly == 0 {
        None
    } else {
        Some(31 - poly.leading_zeros())
    }
}

/// Remainder of polynomial division over GF(2).
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b).expect("nonzero divisor");
    while let Some(da) = degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible_gf2(modulus: u32) -> bool {
    let Some(d) = degree(modulus) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    for divisor in 2u32..(1u32 << (d / 2 + 1)) {
        if poly_rem(modulus, divisor) == 0 {
            return false;
        }
    }
    true
}

fn clmul_mod(mut a: u32, mut b: u32, modulus: u32, h: u32) -> u32 {
    let top = 1u32 << h;
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc
}

fn multiplicative_order(g: u32, modulus: u32, h: u32) -> u32 {
    let mut x = g;
    let mut k = 1u32;
    while x != 1 {
        x = clmul_mod(x, g, modulus, h);
        k += 1;
        if k > (1 << h) {
            return 0;
        }
    }
    k
}
