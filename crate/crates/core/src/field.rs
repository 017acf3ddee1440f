//! The [`Field`] abstraction plus the two lower levels of the tower: the
//! prime field `F_p` and `F_q = F_p[y]/(f)`.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::arith::{self, mul_mod};
use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// A finite field given by a runtime context object.
///
/// Elements are plain values; every operation goes through the context, so the
/// same generic code (polynomials, linear algebra) runs over `F_p`, `F_q` and
/// `F_{q^m}`.
pub trait Field {
    type Elem: Clone + PartialEq + Eq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Number of elements.
    fn size(&self) -> u128;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, mut exp: u128) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

pub type FpElem = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = FpElem;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(arith::pow_mod(*a, self.p - 2, self.p))
    }
    fn size(&self) -> u128 {
        self.p as u128
    }
}

/// An element of `F_q`, stored as its canonical index `sum a_j p^j` where
/// `a_j` are the coordinates over `{1, y, ..., y^{s-1}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FqElem(pub u64);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn index(self) -> u64 {
        self.0
    }
}

// Fields this small get full addition and multiplication tables.
const TABLE_LIMIT: u64 = 256;

#[derive(Debug, Clone)]
enum Backend {
    Prime,
    Table {
        add: Vec<u32>,
        mul: Vec<u32>,
        neg: Vec<u32>,
        inv: Vec<u32>,
    },
    Digits,
}

/// `F_q = F_p[y]/(f)` with `f` monic irreducible of degree `s`.
#[derive(Debug, Clone)]
pub struct BaseField {
    prime: PrimeField,
    s: u32,
    q: u64,
    modulus: Vec<u64>,
    backend: Backend,
}

impl BaseField {
    /// `f` is the full coefficient list of the monic modulus, constant first.
    /// For `s = 1` any monic linear `f` is accepted; the field is `F_p`.
    pub fn new(p: u64, f: Vec<u64>) -> Result<Self> {
        let prime = PrimeField::new(p)?;
        let s = f
            .len()
            .checked_sub(1)
            .filter(|&s| s >= 1)
            .ok_or(Error::ZeroDegree)? as u32;
        if f[s as usize] != 1 || f.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus {
                which: "f",
                expected: s as usize,
            });
        }
        let q = p.checked_pow(s).ok_or(Error::FieldTooLarge)?;
        if s > 1 && !poly::is_irreducible(&prime, &Poly::new(&prime, f.clone())) {
            return Err(Error::NotIrreducible { which: "f" });
        }
        let mut field = BaseField {
            prime,
            s,
            q,
            modulus: f,
            backend: if s == 1 {
                Backend::Prime
            } else {
                Backend::Digits
            },
        };
        if s > 1 && q <= TABLE_LIMIT {
            field.backend = field.build_tables();
        }
        Ok(field)
    }

    /// The prime field itself, with the formal modulus `y`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    fn build_tables(&self) -> Backend {
        let q = self.q as usize;
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        let mut neg = vec![0u32; q];
        let mut inv = vec![0u32; q];
        for a in 0..q {
            let ea = FqElem(a as u64);
            neg[a] = self.digits_neg(ea).0 as u32;
            for b in 0..q {
                let eb = FqElem(b as u64);
                add[a * q + b] = self.digits_add(ea, eb).0 as u32;
                mul[a * q + b] = self.digits_mul(ea, eb).0 as u32;
            }
        }
        for a in 1..q {
            let b = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .expect("field has inverses");
            inv[a] = b as u32;
        }
        Backend::Table { add, mul, neg, inv }
    }

    pub fn p(&self) -> u64 {
        self.prime.p()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    pub fn coords(&self, a: FqElem) -> Vec<FpElem> {
        let p = self.p();
        let mut x = a.0;
        (0..self.s)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[FpElem]) -> FqElem {
        assert_eq!(
            coords.len(),
            self.s as usize,
            "F_q element needs s coordinates"
        );
        let p = self.p();
        FqElem(coords.iter().rev().fold(0u64, |acc, &c| {
            debug_assert!(c < p);
            acc * p + c
        }))
    }

    /// Embeds an `F_p` element as a constant.
    pub fn from_prime(&self, c: FpElem) -> FqElem {
        FqElem(c % self.p())
    }

    pub fn element(&self, index: u64) -> Result<FqElem> {
        if index >= self.q {
            return Err(Error::RangeOutOfBounds {
                lo: index,
                hi: index + 1,
                size: self.q,
            });
        }
        Ok(FqElem(index))
    }

    /// Whether the element lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: FqElem) -> bool {
        a.0 < self.p()
    }

    fn digits_add(&self, a: FqElem, b: FqElem) -> FqElem {
        let (x, y) = (self.coords(a), self.coords(b));
        let sum: Vec<u64> = x
            .iter()
            .zip(&y)
            .map(|(u, v)| self.prime.add(u, v))
            .collect();
        self.from_coords(&sum)
    }

    fn digits_neg(&self, a: FqElem) -> FqElem {
        let x: Vec<u64> = self.coords(a).iter().map(|u| self.prime.neg(u)).collect();
        self.from_coords(&x)
    }

    fn digits_mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let s = self.s as usize;
        let (x, y) = (self.coords(a), self.coords(b));
        let pf = &self.prime;
        let mut prod = vec![0u64; 2 * s - 1];
        for (i, u) in x.iter().enumerate() {
            if *u == 0 {
                continue;
            }
            for (j, v) in y.iter().enumerate() {
                prod[i + j] = pf.add(&prod[i + j], &pf.mul(u, v));
            }
        }
        for i in (s..2 * s - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..s {
                let t = pf.mul(&c, &self.modulus[j]);
                prod[i - s + j] = pf.sub(&prod[i - s + j], &t);
            }
            prod[i] = 0;
        }
        prod.truncate(s);
        self.from_coords(&prod)
    }
}

impl Field for BaseField {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    fn one(&self) -> FqElem {
        FqElem::ONE
    }
    #[inline]
    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }
    #[inline]
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        match &self.backend {
            Backend::Prime => FqElem(self.prime.add(&a.0, &b.0)),
            Backend::Table { add, .. } => FqElem(add[(a.0 * self.q + b.0) as usize] as u64),
            Backend::Digits => self.digits_add(*a, *b),
        }
    }
    #[inline]
    fn neg(&self, a: &FqElem) -> FqElem {
        match &self.backend {
            Backend::Prime => FqElem(self.prime.neg(&a.0)),
            Backend::Table { neg, .. } => FqElem(neg[a.0 as usize] as u64),
            Backend::Digits => self.digits_neg(*a),
        }
    }
    #[inline]
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        match &self.backend {
            Backend::Prime => FqElem(self.prime.mul(&a.0, &b.0)),
            Backend::Table { mul, .. } => FqElem(mul[(a.0 * self.q + b.0) as usize] as u64),
            Backend::Digits => self.digits_mul(*a, *b),
        }
    }
    fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.backend {
            Backend::Prime => FqElem(self.prime.inv(&a.0)?),
            Backend::Table { inv, .. } => FqElem(inv[a.0 as usize] as u64),
            Backend::Digits => self.pow(a, self.q as u128 - 2),
        })
    }
    fn size(&self) -> u128 {
        self.q as u128
    }
}
