//! The tower `F_p ⊂ F_q = F_p[y]/(f) ⊂ F_{q^m} = F_q[z]/(g)`.
//!
//! Elements of `F_{q^m}` are length-`m` coordinate vectors over `F_q`. The
//! `q`-Frobenius is `F_q`-linear, so it is cached as an `m x m` matrix whose
//! column `i` holds the coordinates of `z^{iq}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, IntFactorization};
use crate::error::{Error, Result};
use crate::field::{BaseField, Field, FqElem, PrimeField};
use crate::poly::{self, Poly};

/// Default census cap on `q^m`.
pub const DEFAULT_SIZE_GUARD: u128 = 1 << 48;

/// An element of `F_{q^m}`: coordinates over `{1, z, ..., z^{m-1}}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqmElem(Vec<FqElem>);

impl FqmElem {
    pub fn coords(&self) -> &[FqElem] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<FqElem> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.0 == 0)
    }
}

/// Construction parameters; moduli left as `None` are found by a
/// deterministic scan starting at `seed`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerParams {
    pub p: u64,
    pub s: u32,
    pub m: usize,
    /// Full coefficient list of `f` over `F_p`, constant first.
    pub f: Option<Vec<u64>>,
    /// Full coefficient list of `g` as `F_q` indices, constant first.
    pub g: Option<Vec<u64>>,
    pub seed: u64,
    /// When set, building fails with `SizeGuardExceeded` if `q^m` exceeds it.
    pub size_guard: Option<u128>,
}

impl TowerParams {
    pub fn new(p: u64, s: u32, m: usize) -> Self {
        TowerParams {
            p,
            s,
            m,
            f: None,
            g: None,
            seed: 0,
            size_guard: None,
        }
    }

    /// Splits `q = p^s`.
    pub fn for_q(q: u64, m: usize) -> Result<Self> {
        let (p, s) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Ok(Self::new(p, s, m))
    }

    pub fn with_f(mut self, f: Vec<u64>) -> Self {
        self.f = Some(f);
        self
    }

    pub fn with_g(mut self, g: Vec<u64>) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_size_guard(mut self, guard: u128) -> Self {
        self.size_guard = Some(guard);
        self
    }

    pub fn build(&self) -> Result<TowerCtx> {
        TowerCtx::build(self)
    }

    /// Builds only `F_q`, choosing `f` as [`TowerCtx::build`] would.
    pub fn build_base(&self) -> Result<BaseField> {
        let TowerParams { p, s, .. } = *self;
        let prime = PrimeField::new(p)?;
        if s == 0 {
            return Err(Error::ZeroDegree);
        }
        p.checked_pow(s).ok_or(Error::FieldTooLarge)?;
        let f = match &self.f {
            Some(f) => {
                if f.len() != s as usize + 1 || f[s as usize] != 1 || f.iter().any(|&c| c >= p) {
                    return Err(Error::BadModulus {
                        which: "f",
                        expected: s as usize,
                    });
                }
                f.clone()
            }
            None if s == 1 => vec![0, 1],
            None => scan_irreducible(&prime, s as usize, self.seed, |i| i),
        };
        BaseField::new(p, f)
    }
}

/// JSON form of a tower: `{p, s, m, f, g, seed}` with moduli as index lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescription {
    pub p: u64,
    pub s: u32,
    pub m: usize,
    pub f: String,
    pub g: String,
    pub seed: u64,
}

impl TowerDescription {
    pub fn to_params(&self) -> Result<TowerParams> {
        Ok(TowerParams::new(self.p, self.s, self.m)
            .with_f(parse_indices(&self.f)?)
            .with_g(parse_indices(&self.g)?)
            .with_seed(self.seed))
    }
}

/// Renders `[i0,i1,...]`.
pub fn format_indices(indices: impl IntoIterator<Item = u64>) -> String {
    let parts: Vec<String> = indices.into_iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn parse_indices(s: &str) -> Result<Vec<u64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [i0,i1,...], got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
        })
        .collect()
}

/// Immutable context for `F_{q^m}`; cheap to share across threads.
#[derive(Debug, Clone)]
pub struct TowerCtx {
    base: BaseField,
    m: usize,
    g: Vec<FqElem>,
    seed: u64,
    size: u64,
    // row-major m x m; column c = coordinates of z^{cq}
    frob: Vec<FqElem>,
    group_order: IntFactorization,
    size_guard: u128,
}

impl TowerCtx {
    pub fn build(params: &TowerParams) -> Result<Self> {
        let m = params.m;
        let base = params.build_base()?;
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = base.q();
        let size = (q as u128)
            .checked_pow(m as u32)
            .ok_or(Error::FieldTooLarge)?;
        if let Some(guard) = params.size_guard {
            if size > guard {
                return Err(Error::SizeGuardExceeded { size, guard });
            }
        }
        // q^m - 1 must be factorable by factor_u64
        if size > 1 << 63 {
            return Err(Error::FieldTooLarge);
        }
        let g: Vec<FqElem> = match &params.g {
            Some(g) => {
                if g.len() != m + 1 || g[m] != 1 || g.iter().any(|&c| c >= q) {
                    return Err(Error::BadModulus {
                        which: "g",
                        expected: m,
                    });
                }
                let g: Vec<FqElem> = g.iter().map(|&c| FqElem(c)).collect();
                if !poly::is_irreducible(&base, &Poly::new(&base, g.clone())) {
                    return Err(Error::NotIrreducible { which: "g" });
                }
                g
            }
            None => scan_irreducible(&base, m, params.seed, FqElem),
        };

        let mut ctx = TowerCtx {
            base,
            m,
            g,
            seed: params.seed,
            size: size as u64,
            frob: Vec::new(),
            group_order: arith::factor_u64(size as u64 - 1),
            size_guard: params.size_guard.unwrap_or(DEFAULT_SIZE_GUARD),
        };
        ctx.frob = ctx.compute_frobenius_matrix();
        Ok(ctx)
    }

    fn compute_frobenius_matrix(&self) -> Vec<FqElem> {
        let m = self.m;
        let zq = self.pow(&self.z(), self.q() as u128);
        let mut cols = Vec::with_capacity(m);
        let mut cur = self.one();
        for _ in 0..m {
            cols.push(cur.clone());
            cur = self.mul(&cur, &zq);
        }
        let mut frob = vec![FqElem::ZERO; m * m];
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col.0.iter().enumerate() {
                frob[r * m + c] = *v;
            }
        }
        frob
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn s(&self) -> u32 {
        self.base.s()
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Cap on `q^m` for exhaustive operations.
    pub fn size_guard(&self) -> u128 {
        self.size_guard
    }

    /// `q^m`.
    pub fn field_size(&self) -> u64 {
        self.size
    }

    /// `q^m - 1`, the order of the multiplicative group.
    pub fn group_order(&self) -> u64 {
        self.size - 1
    }

    pub fn group_order_factors(&self) -> &IntFactorization {
        &self.group_order
    }

    /// The modulus `g` as a polynomial over `F_q`.
    pub fn modulus(&self) -> Poly<FqElem> {
        Poly::new(&self.base, self.g.clone())
    }

    pub fn frobenius_matrix(&self) -> crate::linalg::Matrix<FqElem> {
        crate::linalg::Matrix::new(self.m, self.m, self.frob.clone())
    }

    pub fn description(&self) -> TowerDescription {
        TowerDescription {
            p: self.p(),
            s: self.s(),
            m: self.m,
            f: format_indices(self.base.modulus().iter().copied()),
            g: format_indices(self.g.iter().map(|c| c.0)),
            seed: self.seed,
        }
    }

    pub fn from_coords(&self, coords: Vec<FqElem>) -> FqmElem {
        assert_eq!(coords.len(), self.m, "F_q^m element needs m coordinates");
        FqmElem(coords)
    }

    /// Embeds `c ∈ F_q` as a constant.
    pub fn embed(&self, c: FqElem) -> FqmElem {
        let mut v = vec![FqElem::ZERO; self.m];
        v[0] = c;
        FqmElem(v)
    }

    /// The generator `z` of the extension (reduced, so `m = 1` works).
    pub fn z(&self) -> FqmElem {
        if self.m == 1 {
            return FqmElem(vec![self.base.neg(&self.g[0])]);
        }
        let mut v = vec![FqElem::ZERO; self.m];
        v[1] = FqElem::ONE;
        FqmElem(v)
    }

    /// Canonical index `sum idx(c_i) q^i`.
    pub fn index_of(&self, a: &FqmElem) -> u64 {
        let q = self.q();
        a.0.iter().rev().fold(0u64, |acc, c| acc * q + c.0)
    }

    pub fn element(&self, index: u64) -> Result<FqmElem> {
        if index >= self.size {
            return Err(Error::RangeOutOfBounds {
                lo: index,
                hi: index + 1,
                size: self.size,
            });
        }
        Ok(self.element_unchecked(index))
    }

    fn element_unchecked(&self, mut index: u64) -> FqmElem {
        let q = self.q();
        FqmElem(
            (0..self.m)
                .map(|_| {
                    let c = index % q;
                    index /= q;
                    FqElem(c)
                })
                .collect(),
        )
    }

    /// Elements with canonical index in `lo..hi`, in index order.
    pub fn enumerate(&self, lo: u64, hi: u64) -> Result<impl Iterator<Item = FqmElem> + '_> {
        if lo > hi || hi > self.size {
            return Err(Error::RangeOutOfBounds {
                lo,
                hi,
                size: self.size,
            });
        }
        Ok((lo..hi).map(move |i| self.element_unchecked(i)))
    }

    pub fn scale(&self, c: &FqElem, a: &FqmElem) -> FqmElem {
        FqmElem(a.0.iter().map(|x| self.base.mul(c, x)).collect())
    }

    /// `dst = src^q`, coordinates in and out.
    #[inline]
    pub fn frobenius_into(&self, src: &[FqElem], dst: &mut [FqElem]) {
        let m = self.m;
        for (r, out) in dst.iter_mut().enumerate().take(m) {
            let row = &self.frob[r * m..(r + 1) * m];
            let mut acc = FqElem::ZERO;
            for (a, b) in row.iter().zip(src) {
                if b.0 != 0 && a.0 != 0 {
                    acc = self.base.add(&acc, &self.base.mul(a, b));
                }
            }
            *out = acc;
        }
    }

    /// `α^q` via the cached Frobenius matrix.
    pub fn frobenius(&self, a: &FqmElem) -> FqmElem {
        let mut out = vec![FqElem::ZERO; self.m];
        self.frobenius_into(&a.0, &mut out);
        FqmElem(out)
    }

    /// `[α, α^q, ..., α^{q^{n-1}}]`.
    pub fn conjugates(&self, a: &FqmElem, n: usize) -> Vec<FqmElem> {
        let mut out = Vec::with_capacity(n);
        let mut cur = a.clone();
        for _ in 0..n {
            let next = self.frobenius(&cur);
            out.push(cur);
            cur = next;
        }
        out
    }

    /// Smallest `N >= 1` with `α^N = 1`, found by stripping prime factors
    /// from `q^m - 1` while the power stays 1.
    pub fn multiplicative_order(&self, a: &FqmElem) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let one = self.one();
        let mut order = self.group_order();
        for &(r, _) in &self.group_order.factors {
            while order % r == 0 && self.pow(a, (order / r) as u128) == one {
                order /= r;
            }
        }
        Ok(order)
    }

    /// Whether `α` has multiplicative order exactly `target` (a divisor of `q^m - 1`).
    pub fn has_order(&self, a: &FqmElem, target: u64) -> bool {
        if a.is_zero() {
            return false;
        }
        let one = self.one();
        if self.pow(a, target as u128) != one {
            return false;
        }
        arith::factor_u64(target)
            .primes()
            .all(|r| self.pow(a, (target / r) as u128) != one)
    }

    /// Smallest-index element of order `q^m - 1`.
    pub fn find_primitive_element(&self) -> FqmElem {
        let n = self.group_order();
        (1..self.size)
            .map(|i| self.element_unchecked(i))
            .find(|a| self.multiplicative_order(a).ok() == Some(n))
            .expect("the multiplicative group is cyclic")
    }

    /// Reduces a coefficient buffer of length `2m-1` modulo `g` in place.
    fn reduce(&self, buf: &mut Vec<FqElem>) {
        let m = self.m;
        let b = &self.base;
        for i in (m..buf.len()).rev() {
            let c = buf[i];
            if c.0 == 0 {
                continue;
            }
            for j in 0..m {
                if self.g[j].0 != 0 {
                    buf[i - m + j] = b.sub(&buf[i - m + j], &b.mul(&c, &self.g[j]));
                }
            }
            buf[i] = FqElem::ZERO;
        }
        buf.truncate(m);
    }
}

impl Field for TowerCtx {
    type Elem = FqmElem;

    fn zero(&self) -> FqmElem {
        FqmElem(vec![FqElem::ZERO; self.m])
    }

    fn one(&self) -> FqmElem {
        self.embed(FqElem::ONE)
    }

    fn is_zero(&self, a: &FqmElem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &FqmElem, b: &FqmElem) -> FqmElem {
        FqmElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| self.base.add(x, y))
                .collect(),
        )
    }

    fn neg(&self, a: &FqmElem) -> FqmElem {
        FqmElem(a.0.iter().map(|x| self.base.neg(x)).collect())
    }

    fn sub(&self, a: &FqmElem, b: &FqmElem) -> FqmElem {
        FqmElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| self.base.sub(x, y))
                .collect(),
        )
    }

    fn mul(&self, a: &FqmElem, b: &FqmElem) -> FqmElem {
        let m = self.m;
        let base = &self.base;
        let mut buf = vec![FqElem::ZERO; 2 * m - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.0 == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.0 != 0 {
                    buf[i + j] = base.add(&buf[i + j], &base.mul(x, y));
                }
            }
        }
        self.reduce(&mut buf);
        FqmElem(buf)
    }

    /// Extended Euclid on the coordinate polynomial against `g`.
    fn inv(&self, a: &FqmElem) -> Result<FqmElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let base = &self.base;
        let pa = Poly::new(base, a.0.clone());
        let (gcd, s, _) = poly::ext_gcd(base, &pa, &self.modulus());
        if gcd.degree() != Some(0) {
            return Err(Error::InternalInconsistency(
                "modulus shares a factor with a nonzero element".into(),
            ));
        }
        let c = base.inv(&gcd.coeffs()[0])?;
        let s = poly::scale(base, &s, &c);
        let mut coords = s.into_coeffs();
        coords.resize(self.m, FqElem::ZERO);
        Ok(FqmElem(coords))
    }

    fn size(&self) -> u128 {
        self.size as u128
    }
}

/// First monic irreducible of degree `n` in canonical index order, scanning
/// cyclically from `seed`.
fn scan_irreducible<F: Field>(
    field: &F,
    n: usize,
    seed: u64,
    elem: impl Fn(u64) -> F::Elem,
) -> Vec<F::Elem> {
    let base = field.size();
    let count = base.checked_pow(n as u32).unwrap_or(u128::MAX);
    let start = seed as u128 % count;
    (0..count)
        .map(|k| (start + k) % count)
        .map(|mut idx| {
            let mut coeffs: Vec<F::Elem> = (0..n)
                .map(|_| {
                    let d = (idx % base) as u64;
                    idx /= base;
                    elem(d)
                })
                .collect();
            coeffs.push(field.one());
            coeffs
        })
        .find(|c| poly::is_irreducible(field, &Poly::new(field, c.clone())))
        .expect("irreducible polynomials exist in every degree")
}

impl fmt::Display for TowerCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F_{{{}^{}}} over F_{} (p={}, s={}, f={}, g={})",
            self.q(),
            self.m,
            self.q(),
            self.p(),
            self.s(),
            format_indices(self.base.modulus().iter().copied()),
            format_indices(self.g.iter().map(|c| c.0))
        )
    }
}
