//! Dense univariate polynomials over any [`Field`].
//!
//! Coefficients are stored constant term first with no trailing zeros, so the
//! zero polynomial is the empty vector and has no degree.

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

impl<E: Clone + PartialEq> Poly<E> {
    /// Builds a polynomial, trimming trailing zeros.
    pub fn new<F: Field<Elem = E>>(field: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant<F: Field<Elem = E>>(field: &F, c: E) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(field: &F) -> Self {
        Poly {
            coeffs: vec![field.one()],
        }
    }

    /// `x^n`.
    pub fn monomial<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut coeffs = vec![field.zero(); n + 1];
        coeffs[n] = field.one();
        Poly { coeffs }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut p = Self::monomial(field, n);
        p.coeffs[0] = field.sub(&p.coeffs[0], &field.one());
        Self::new(field, p.coeffs)
    }

    pub fn coeff<F: Field<Elem = E>>(&self, field: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.leading().is_some_and(|c| *c == field.one())
    }
}

pub fn add<F: Field>(field: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n)
        .map(|i| field.add(&a.coeff(field, i), &b.coeff(field, i)))
        .collect();
    Poly::new(field, coeffs)
}

pub fn sub<F: Field>(field: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let n = a.coeffs.len().max(b.coeffs.len());
    let coeffs = (0..n)
        .map(|i| field.sub(&a.coeff(field, i), &b.coeff(field, i)))
        .collect();
    Poly::new(field, coeffs)
}

pub fn scale<F: Field>(field: &F, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
    Poly::new(field, a.coeffs.iter().map(|x| field.mul(x, c)).collect())
}

pub fn mul<F: Field>(field: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(x, y));
        }
    }
    Poly::new(field, out)
}

/// Returns `(quotient, remainder)` with `a = quotient * b + remainder`.
pub fn divmod<F: Field>(
    field: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> Result<(Poly<F::Elem>, Poly<F::Elem>)> {
    let db = b.degree().ok_or(Error::DivisionByZero)?;
    let lead_inv = field.inv(b.leading().expect("nonzero"))?;
    let mut rem = a.coeffs.clone();
    let Some(da) = a.degree() else {
        return Ok((Poly::zero(), Poly::zero()));
    };
    if da < db {
        return Ok((Poly::zero(), a.clone()));
    }
    let mut quot = vec![field.zero(); da - db + 1];
    for i in (db..=da).rev() {
        let c = field.mul(&rem[i], &lead_inv);
        if field.is_zero(&c) {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            let t = field.mul(&c, bj);
            rem[i - db + j] = field.sub(&rem[i - db + j], &t);
        }
        quot[i - db] = c;
    }
    rem.truncate(db);
    Ok((Poly::new(field, quot), Poly::new(field, rem)))
}

pub fn rem<F: Field>(field: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Result<Poly<F::Elem>> {
    divmod(field, a, b).map(|(_, r)| r)
}

/// Exact division; errors if `b` does not divide `a`.
pub fn div_exact<F: Field>(
    field: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> Result<Poly<F::Elem>> {
    let (q, r) = divmod(field, a, b)?;
    if !r.is_zero() {
        return Err(Error::InternalInconsistency(
            "inexact polynomial division".into(),
        ));
    }
    Ok(q)
}

pub fn make_monic<F: Field>(field: &F, a: &Poly<F::Elem>) -> Poly<F::Elem> {
    match a.leading() {
        None => Poly::zero(),
        Some(l) => {
            let inv = field.inv(l).expect("leading coefficient is nonzero");
            scale(field, a, &inv)
        }
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd<F: Field>(field: &F, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = rem(field, &x, &y).expect("y is nonzero");
        x = y;
        y = r;
    }
    make_monic(field, &x)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` not normalized.
pub fn ext_gcd<F: Field>(
    field: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
) -> (Poly<F::Elem>, Poly<F::Elem>, Poly<F::Elem>) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(field), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one(field));
    while !r1.is_zero() {
        let (q, r) = divmod(field, &r0, &r1).expect("r1 is nonzero");
        let s = sub(field, &s0, &mul(field, &q, &s1));
        let t = sub(field, &t0, &mul(field, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

pub fn mulmod<F: Field>(
    field: &F,
    a: &Poly<F::Elem>,
    b: &Poly<F::Elem>,
    modulus: &Poly<F::Elem>,
) -> Result<Poly<F::Elem>> {
    rem(field, &mul(field, a, b), modulus)
}

pub fn powmod<F: Field>(
    field: &F,
    base: &Poly<F::Elem>,
    mut exp: u128,
    modulus: &Poly<F::Elem>,
) -> Result<Poly<F::Elem>> {
    let mut acc = rem(field, &Poly::one(field), modulus)?;
    let mut b = rem(field, base, modulus)?;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(field, &acc, &b, modulus)?;
        }
        exp >>= 1;
        if exp > 0 {
            b = mulmod(field, &b, &b, modulus)?;
        }
    }
    Ok(acc)
}

/// Rabin's test: `x^{Q^n} = x mod f` and `gcd(x^{Q^{n/l}} - x, f) = 1` for
/// every prime `l | n`, where `Q` is the field size and `n = deg f`.
pub fn is_irreducible<F: Field>(field: &F, f: &Poly<F::Elem>) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = make_monic(field, f);
    let q = field.size();
    let x = Poly::monomial(field, 1);
    // frob[i] = x^{Q^i} mod f
    let mut frob = vec![x.clone()];
    for i in 1..=n {
        let next = powmod(field, &frob[i - 1], q, &f).expect("f nonzero");
        frob.push(next);
    }
    if frob[n] != x {
        return false;
    }
    crate::arith::factor_u64(n as u64).primes().all(|l| {
        let h = sub(field, &frob[n / l as usize], &x);
        gcd(field, &h, &f).degree() == Some(0)
    })
}
