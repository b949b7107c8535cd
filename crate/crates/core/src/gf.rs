//! Arithmetic in a prime field `F_p` whose modulus is chosen at runtime.
//!
//! Hot loops work on raw `u32` residues through [`PrimeField`]; [`FieldElement`]
//! is the typed scalar used at API boundaries.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Default modulus.
pub const DEFAULT_PRIME: u32 = 101;

/// The field `F_p`. Copyable context carried by matrices, forms and groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p > (1 << 31) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.reduce(v),
            modulus: self.p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// Wraps an already reduced residue.
    pub fn wrap(&self, v: u32) -> FieldElement {
        debug_assert!(v < self.p);
        FieldElement {
            value: v,
            modulus: self.p,
        }
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^k` for a possibly negative exponent; `a` must be nonzero when `k < 0`.
    pub fn pow_signed(&self, a: u32, k: i64) -> Result<u32> {
        if k >= 0 {
            Ok(self.pow(a, k as u64))
        } else {
            Ok(self.pow(self.inv(a)?, k.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::DivisionByZero(self.p));
        }
        // extended Euclid
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.reduce(t0))
    }

    /// Both square roots `(x, p - x)` with `x <= p - x`, or `None` for a non-residue.
    /// `sqrt(0)` is `(0, 0)`.
    pub fn sqrt(&self, a: u32) -> Option<(FieldElement, FieldElement)> {
        let a = a % self.p;
        if a == 0 {
            return Some((self.zero(), self.zero()));
        }
        // exhaustive scan; only the smaller half needs checking
        (1..=self.p / 2)
            .find(|&x| self.mul(x, x) == a)
            .map(|x| (self.wrap(x), self.wrap(self.p - x)))
    }

    /// The smaller square root, if any.
    pub fn principal_sqrt(&self, a: u32) -> Option<u32> {
        self.sqrt(a).map(|(x, _)| x.value)
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.sqrt(a).is_some()
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order(&self, a: u32) -> Result<u32> {
        if a % self.p == 0 {
            return Err(Error::DivisionByZero(self.p));
        }
        let n = self.p - 1;
        let mut ord = n;
        for q in prime_factors(n) {
            while ord % q == 0 && self.pow(a, (ord / q) as u64) == 1 {
                ord /= q;
            }
        }
        Ok(ord)
    }

    /// Smallest generator of `F_p^*`.
    pub fn primitive_root(&self) -> FieldElement {
        let n = self.p - 1;
        if n <= 1 {
            return self.one();
        }
        let factors = prime_factors(n);
        let z = (2..self.p)
            .find(|&z| factors.iter().all(|&q| self.pow(z, (n / q) as u64) != 1))
            .expect("F_p^* is cyclic");
        self.wrap(z)
    }

    /// `primitive_root()^((p-1)/n)`, an element of order exactly `n`.
    pub fn root_of_unity(&self, n: u32) -> Result<FieldElement> {
        if n == 0 || (self.p - 1) % n != 0 {
            return Err(Error::UnsupportedOrder {
                order: n,
                prime: self.p,
            });
        }
        let z = self.primitive_root().value;
        Ok(self.wrap(self.pow(z, ((self.p - 1) / n) as u64)))
    }

    /// Residue viewed as the nearest signed integer, for display.
    pub fn signed(&self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// A residue together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElement {
    value: u32,
    #[serde(skip)]
    modulus: u32,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<FieldElement> {
        let f = self.field();
        Ok(f.wrap(f.inv(self.value)?))
    }

    pub fn pow(self, e: u64) -> FieldElement {
        let f = self.field();
        f.wrap(f.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.modulus, rhs.modulus, "mixed moduli");
                let f = self.field();
                f.wrap(f.$method(self.value, rhs.value))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let f = self.field();
        f.wrap(f.neg(self.value))
    }
}
