//! Arbitrary-precision naturals with an inline fast path for values that fit
//! in a machine word.
//!
//! Almost every value the interpreters touch is small, so `Nat` keeps those
//! as a bare `u64` and only falls back to a heap-allocated [`BigUint`] when a
//! result overflows. The representation is canonical: a `Big` value is always
//! larger than `u64::MAX`, so derived equality and hashing are sound.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(u64),
    Big(BigUint),
}

/// A natural number (including zero) of unbounded size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Nat(Repr);

impl Nat {
    pub const ZERO: Nat = Nat(Repr::Small(0));
    pub const ONE: Nat = Nat(Repr::Small(1));

    pub const fn small(v: u64) -> Nat {
        Nat(Repr::Small(v))
    }

    pub fn from_big(v: BigUint) -> Nat {
        match v.to_u64() {
            Some(s) => Nat(Repr::Small(s)),
            None => Nat(Repr::Big(v)),
        }
    }

    pub fn to_big(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(*v),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn into_big(self) -> BigUint {
        match self.0 {
            Repr::Small(v) => BigUint::from(v),
            Repr::Big(b) => b,
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        match &self.0 {
            Repr::Small(v) => Some(*v),
            Repr::Big(_) => None,
        }
    }

    pub fn to_usize(&self) -> Option<usize> {
        self.to_u64().and_then(|v| usize::try_from(v).ok())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_small(&self) -> bool {
        matches!(self.0, Repr::Small(_))
    }

    /// Number of decimal digits.
    pub fn decimal_len(&self) -> usize {
        match &self.0 {
            Repr::Small(v) => v.to_string().len(),
            Repr::Big(b) => b.to_str_radix(10).len(),
        }
    }

    pub fn add(&self, other: &Nat) -> Nat {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_add(*b) {
                Some(s) => Nat::small(s),
                None => Nat(Repr::Big(BigUint::from(*a) + *b)),
            },
            _ => Nat::from_big(self.to_big() + other.to_big()),
        }
    }

    pub fn add_u64(&self, c: u64) -> Nat {
        self.add(&Nat::small(c))
    }

    /// Truncated subtraction: `max(0, self - other)`.
    pub fn monus(&self, other: &Nat) -> Nat {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => Nat::small(a.saturating_sub(*b)),
            (Repr::Small(_), Repr::Big(_)) => Nat::ZERO,
            (Repr::Big(a), _) => {
                let b = other.to_big();
                if *a > b {
                    Nat::from_big(a - b)
                } else {
                    Nat::ZERO
                }
            }
        }
    }

    pub fn mul(&self, other: &Nat) -> Nat {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_mul(*b) {
                Some(p) => Nat::small(p),
                None => Nat(Repr::Big(BigUint::from(*a) * *b)),
            },
            _ => Nat::from_big(self.to_big() * other.to_big()),
        }
    }

    /// In-place `self += c`.
    pub fn add_assign(&mut self, c: &Nat) {
        match (&mut self.0, &c.0) {
            (Repr::Small(a), Repr::Small(b)) => {
                if let Some(s) = a.checked_add(*b) {
                    *a = s;
                    return;
                }
            }
            (Repr::Big(a), Repr::Small(b)) => {
                *a += *b;
                return;
            }
            (Repr::Big(a), Repr::Big(b)) => {
                *a += b;
                return;
            }
            _ => {}
        }
        *self = self.add(c);
    }

    /// In-place `self := max(0, self - c)`.
    pub fn monus_assign(&mut self, c: &Nat) {
        match (&mut self.0, &c.0) {
            (Repr::Small(a), Repr::Small(b)) => *a = a.saturating_sub(*b),
            (Repr::Small(a), Repr::Big(_)) => *a = 0,
            (Repr::Big(a), _) => {
                let b = c.to_big();
                if *a > b {
                    *a -= b;
                    self.normalize();
                } else {
                    *self = Nat::ZERO;
                }
            }
        }
    }

    fn normalize(&mut self) {
        if let Repr::Big(b) = &self.0 {
            if let Some(v) = b.to_u64() {
                self.0 = Repr::Small(v);
            }
        }
    }

    /// Decrement by one; zero stays zero.
    pub fn decrement(&mut self) {
        match &mut self.0 {
            Repr::Small(a) => *a = a.saturating_sub(1),
            Repr::Big(_) => self.monus_assign(&Nat::ONE),
        }
    }

    /// Parses decimal or `0x`-prefixed hexadecimal.
    pub fn parse_literal(s: &str) -> Option<Nat> {
        let s = s.trim();
        let (digits, radix) = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(rest) => (rest, 16),
            None => (s, 10),
        };
        if digits.is_empty() || digits.starts_with('+') || digits.contains('_') {
            return None;
        }
        BigUint::parse_bytes(digits.as_bytes(), radix).map(Nat::from_big)
    }
}

impl Default for Nat {
    fn default() -> Self {
        Nat::ZERO
    }
}

impl From<u64> for Nat {
    fn from(v: u64) -> Self {
        Nat::small(v)
    }
}

impl From<u32> for Nat {
    fn from(v: u32) -> Self {
        Nat::small(u64::from(v))
    }
}

impl From<usize> for Nat {
    fn from(v: usize) -> Self {
        Nat::small(v as u64)
    }
}

impl From<BigUint> for Nat {
    fn from(v: BigUint) -> Self {
        Nat::from_big(v)
    }
}

impl From<&Nat> for BigUint {
    fn from(v: &Nat) -> Self {
        v.to_big()
    }
}

impl PartialEq<u64> for Nat {
    fn eq(&self, other: &u64) -> bool {
        matches!(self.0, Repr::Small(v) if v == *other)
    }
}

impl Ord for Nat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            (Repr::Small(_), Repr::Big(_)) => Ordering::Less,
            (Repr::Big(_), Repr::Small(_)) => Ordering::Greater,
            (Repr::Big(a), Repr::Big(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Nat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid natural number literal `{0}`")]
pub struct ParseNatError(pub String);

impl FromStr for Nat {
    type Err = ParseNatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Nat::parse_literal(s).ok_or_else(|| ParseNatError(s.to_string()))
    }
}

impl Zero for Nat {
    fn zero() -> Self {
        Nat::ZERO
    }

    fn is_zero(&self) -> bool {
        Nat::is_zero(self)
    }
}

impl std::ops::Add for Nat {
    type Output = Nat;

    fn add(self, rhs: Nat) -> Nat {
        Nat::add(&self, &rhs)
    }
}

// Small values serialize as JSON numbers, larger ones as decimal strings so
// that consumers without big-number support can still read the output.
impl Serialize for Nat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Small(v) => serializer.serialize_u64(*v),
            Repr::Big(b) => serializer.serialize_str(&b.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Nat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct NatVisitor;

        impl Visitor<'_> for NatVisitor {
            type Value = Nat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a natural number or a decimal string")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Nat, E> {
                Ok(Nat::small(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Nat, E> {
                u64::try_from(v)
                    .map(Nat::small)
                    .map_err(|_| E::custom("negative natural"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Nat, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(NatVisitor)
    }
}
