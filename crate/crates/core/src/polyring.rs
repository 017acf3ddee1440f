//! Polynomials over `F_q`: factoring `x^m - 1` through `q`-cyclotomic cosets,
//! cyclotomic polynomials, the polynomial totient `Φ_q`, and divisor
//! enumeration by degree.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{BaseField, Field, FqElem};
use crate::poly::{self, Poly};
use crate::tower::{format_indices, parse_indices, TowerParams};

pub type PolyFq = Poly<FqElem>;

/// Serializes as `[i0,i1,...,id]`, constant first.
pub fn poly_to_string(f: &PolyFq) -> String {
    format_indices(f.coeffs().iter().map(|c| c.0))
}

pub fn poly_from_string(base: &BaseField, s: &str) -> Result<PolyFq> {
    let idx = parse_indices(s)?;
    let coeffs = idx
        .into_iter()
        .map(|i| base.element(i))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(base, coeffs))
}

/// Human-readable form such as `x^4+2x^2+1`. Coefficients outside the prime
/// subfield are written as polynomials in `y`, e.g. `(y+1)x`.
pub fn render_poly(base: &BaseField, f: &PolyFq) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate().rev() {
        if c.0 == 0 {
            continue;
        }
        let coeff = render_coeff(base, *c);
        let mono = match i {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{i}"),
        };
        terms.push(match (coeff.as_str(), mono.is_empty()) {
            (c, true) => c.to_string(),
            ("1", false) => mono,
            (c, false) => format!("{c}{mono}"),
        });
    }
    terms.join("+")
}

fn render_coeff(base: &BaseField, c: FqElem) -> String {
    if base.is_prime_subfield(c) {
        return c.0.to_string();
    }
    let coords = base.coords(c);
    let mut terms = Vec::new();
    for (j, a) in coords.iter().enumerate().rev() {
        if *a == 0 {
            continue;
        }
        let mono = match j {
            0 => String::new(),
            1 => "y".into(),
            _ => format!("y^{j}"),
        };
        terms.push(match (*a, mono.is_empty()) {
            (a, true) => a.to_string(),
            (1, false) => mono,
            (a, false) => format!("{a}{mono}"),
        });
    }
    format!("({})", terms.join("+"))
}

/// Multiset of monic irreducible factors in canonical order
/// (degree, then coefficient indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(PolyFq, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub poly: String,
    pub mult: u32,
}

impl Factorization {
    /// Sorts into canonical order; merges nothing (duplicates are a caller bug).
    pub fn new(mut factors: Vec<(PolyFq, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|(a, _), (b, _)| (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())));
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(PolyFq, u32)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of degree times multiplicity.
    pub fn degree(&self) -> usize {
        self.factors
            .iter()
            .map(|(f, e)| f.degree().unwrap_or(0) * *e as usize)
            .sum()
    }

    pub fn product(&self, base: &BaseField) -> PolyFq {
        self.factors.iter().fold(Poly::one(base), |acc, (f, e)| {
            (0..*e).fold(acc, |acc, _| poly::mul(base, &acc, f))
        })
    }

    /// Sub-multiset with the given exponents (same order as `factors()`).
    pub fn with_exponents(&self, exps: &[u32]) -> Factorization {
        assert_eq!(exps.len(), self.factors.len());
        Factorization {
            factors: self
                .factors
                .iter()
                .zip(exps)
                .filter(|(_, &e)| e > 0)
                .map(|((f, _), &e)| (f.clone(), e))
                .collect(),
        }
    }

    pub fn to_entries(&self) -> Vec<FactorEntry> {
        self.factors
            .iter()
            .map(|(f, e)| FactorEntry {
                poly: poly_to_string(f),
                mult: *e,
            })
            .collect()
    }

    pub fn from_entries(base: &BaseField, entries: &[FactorEntry]) -> Result<Self> {
        let factors = entries
            .iter()
            .map(|e| Ok((poly_from_string(base, &e.poly)?, e.mult)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Factorization::new(factors))
    }

    pub fn render(&self, base: &BaseField) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(f, e)| {
                let body = format!("({})", render_poly(base, f));
                if *e == 1 {
                    body
                } else {
                    format!("{body}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| format!("{}^{}", poly_to_string(p), e))
            .collect();
        write!(f, "{}", entries.join(" * "))
    }
}

/// Orbit of a residue under multiplication by `q` modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicCoset {
    pub modulus: u64,
    pub representative: u64,
    pub members: Vec<u64>,
}

pub fn cyclotomic_cosets(q: u64, modulus: u64) -> Result<Vec<CyclotomicCoset>> {
    if modulus == 0 || arith::gcd(q, modulus) != 1 {
        return Err(Error::NotCoprime { q, modulus });
    }
    let mut seen = vec![false; modulus as usize];
    let mut cosets = Vec::new();
    for r in 0..modulus {
        if seen[r as usize] {
            continue;
        }
        let mut members = Vec::new();
        let mut x = r;
        while !seen[x as usize] {
            seen[x as usize] = true;
            members.push(x);
            x = arith::mul_mod(x, q, modulus);
        }
        members.sort_unstable();
        cosets.push(CyclotomicCoset {
            modulus,
            representative: r,
            members,
        });
    }
    Ok(cosets)
}

/// `m = m' p^e` with `p ∤ m'`; returns `(m', p^e)`.
fn split_p_part(p: u64, m: usize) -> Result<(u64, u32)> {
    if m == 0 {
        return Err(Error::PreconditionViolated("m must be at least 1".into()));
    }
    let mut m_prime = m as u64;
    let mut mult = 1u32;
    while m_prime % p == 0 {
        m_prime /= p;
        mult = mult
            .checked_mul(p as u32)
            .ok_or(Error::Overflow("multiplicity"))?;
    }
    Ok((m_prime, mult))
}

/// Factors `x^m - 1` over `F_q`. With `m = m' p^e`, each coset `C` mod `m'`
/// yields `prod_{i in C} (x - ζ^i)` of multiplicity `p^e`, where `ζ` has
/// order `m'` in `F_{q^r}`, `r = ord_{m'}(q)`. When `F_{q^r}` is too large
/// to build, falls back to [`factor_by_cyclotomic_split`].
pub fn factor_xm_minus_1(base: &BaseField, m: usize) -> Result<Factorization> {
    let p = base.p();
    let q = base.q();
    let (m_prime, mult) = split_p_part(p, m)?;
    let r = arith::order_mod(q % m_prime.max(1), m_prime) as usize;
    let aux = match TowerParams::new(p, base.s(), r)
        .with_f(base.modulus().to_vec())
        .build()
    {
        Ok(aux) => aux,
        Err(Error::FieldTooLarge) => return factor_by_cyclotomic_split(base, m),
        Err(e) => return Err(e),
    };
    let gen = aux.find_primitive_element();
    let zeta = aux.pow(&gen, ((aux.group_order()) / m_prime) as u128);

    let mut factors = Vec::new();
    for coset in cyclotomic_cosets(q, m_prime)? {
        let mut acc: Poly<_> = Poly::one(&aux);
        for &i in &coset.members {
            let root = aux.pow(&zeta, i as u128);
            let lin = Poly::new(&aux, vec![aux.neg(&root), aux.one()]);
            acc = poly::mul(&aux, &acc, &lin);
        }
        let coeffs = acc
            .coeffs()
            .iter()
            .map(|c| {
                let coords = c.coords();
                if coords[1..].iter().any(|x| x.0 != 0) {
                    return Err(Error::InternalInconsistency(format!(
                        "minimal polynomial coefficient outside F_q for coset {:?}",
                        coset.members
                    )));
                }
                Ok(coords[0])
            })
            .collect::<Result<Vec<_>>>()?;
        factors.push((Poly::new(base, coeffs), mult));
    }
    Ok(Factorization::new(factors))
}

/// Factors `x^m - 1` as `prod_{d | m'} Q_d^{p^e}`, splitting each `Q_d` into
/// its `φ(d)/ord_d(q)` irreducible factors of degree `ord_d(q)` by
/// equal-degree factorization. Needs no extension field. The random splits
/// are seeded from `(q, m)`, and the sorted result does not depend on them.
pub fn factor_by_cyclotomic_split(base: &BaseField, m: usize) -> Result<Factorization> {
    let q = base.q();
    let (m_prime, mult) = split_p_part(base.p(), m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(q.rotate_left(32) ^ m as u64);
    let mut factors = Vec::new();
    for d in arith::divisors(m_prime) {
        let qd = cyclotomic_poly(base, d)?;
        let r = arith::order_mod(q % d, d) as usize;
        for f in equal_degree_split(base, qd, r, &mut rng)? {
            factors.push((f, mult));
        }
    }
    Ok(Factorization::new(factors))
}

/// Cantor-Zassenhaus: splits a squarefree monic `f` whose irreducible
/// factors all have degree `r`.
fn equal_degree_split(
    base: &BaseField,
    f: PolyFq,
    r: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<PolyFq>> {
    let n = f.degree().unwrap_or(0);
    if n <= r {
        return Ok(vec![f]);
    }
    let q = base.q();
    loop {
        let a = Poly::new(base, (0..n).map(|_| FqElem(rng.gen_range(0..q))).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^{(q^r - 1)/2} = (a^{1 + q + ... + q^{r-1}})^{(q-1)/2}
            let mut conj = a.clone();
            let mut norm = a.clone();
            for _ in 1..r {
                conj = poly::powmod(base, &conj, q as u128, &f)?;
                norm = poly::mulmod(base, &norm, &conj, &f)?;
            }
            let h = poly::powmod(base, &norm, ((q - 1) / 2) as u128, &f)?;
            poly::sub(base, &h, &Poly::one(base))
        } else {
            // absolute trace to F_2
            let bits = r * base.s() as usize;
            let mut sq = a.clone();
            let mut tr = a.clone();
            for _ in 1..bits {
                sq = poly::mulmod(base, &sq, &sq, &f)?;
                tr = poly::add(base, &tr, &sq);
            }
            tr
        };
        let g = poly::gcd(base, &f, &b);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = poly::div_exact(base, &f, &g)?;
            let mut out = equal_degree_split(base, g, r, rng)?;
            out.extend(equal_degree_split(base, h, r, rng)?);
            return Ok(out);
        }
    }
}

/// `Q_d` over `F_q` from the Möbius product of `x^{d'} - 1`.
pub fn cyclotomic_poly(base: &BaseField, d: u64) -> Result<PolyFq> {
    let p = base.p();
    if d == 0 || d % p == 0 {
        return Err(Error::CharDividesIndex { p, d });
    }
    let mut num = Poly::one(base);
    let mut den = Poly::one(base);
    for dp in arith::divisors(d) {
        let term = Poly::x_pow_minus_one(base, dp as usize);
        match arith::mobius(d / dp) {
            1 => num = poly::mul(base, &num, &term),
            -1 => den = poly::mul(base, &den, &term),
            _ => {}
        }
    }
    poly::div_exact(base, &num, &den)
}

/// `Φ_q` of a factored polynomial: `prod q^{d(e-1)} (q^d - 1)`.
pub fn phi_q(q: u64, fact: &Factorization) -> Result<u64> {
    let overflow = || Error::Overflow("phi_q");
    fact.factors.iter().try_fold(1u64, |acc, (f, e)| {
        let d = f.degree().unwrap_or(0) as u32;
        let qd = q.checked_pow(d).ok_or_else(overflow)?;
        let lift = q.checked_pow(d * (e - 1)).ok_or_else(overflow)?;
        acc.checked_mul(qd - 1)
            .and_then(|x| x.checked_mul(lift))
            .ok_or_else(overflow)
    })
}

/// All monic divisors of degree `target`, as exponent sub-tuples in
/// lexicographic order of the exponent vector.
pub fn divisors_by_degree(fact: &Factorization, target: usize) -> Vec<Factorization> {
    let degs: Vec<usize> = fact
        .factors
        .iter()
        .map(|(f, _)| f.degree().unwrap_or(0))
        .collect();
    let maxes: Vec<u32> = fact.factors.iter().map(|(_, e)| *e).collect();
    // remaining[i] = max degree reachable from factors i..
    let mut remaining = vec![0usize; degs.len() + 1];
    for i in (0..degs.len()).rev() {
        remaining[i] = remaining[i + 1] + degs[i] * maxes[i] as usize;
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; degs.len()];
    fn walk(
        i: usize,
        left: usize,
        degs: &[usize],
        maxes: &[u32],
        remaining: &[usize],
        exps: &mut Vec<u32>,
        fact: &Factorization,
        out: &mut Vec<Factorization>,
    ) {
        if i == degs.len() {
            if left == 0 {
                out.push(fact.with_exponents(exps));
            }
            return;
        }
        if left > remaining[i] {
            return;
        }
        for e in 0..=maxes[i] {
            let used = degs[i] * e as usize;
            if used > left {
                break;
            }
            exps[i] = e;
            walk(i + 1, left - used, degs, maxes, remaining, exps, fact, out);
        }
        exps[i] = 0;
    }
    walk(
        0, target, &degs, &maxes, &remaining, &mut exps, fact, &mut out,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> BaseField {
        BaseField::prime(p).unwrap()
    }

    #[test]
    fn cyclotomic_split_agrees_with_cosets() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25] {
            let base = TowerParams::for_q(q, 1).unwrap().build_base().unwrap();
            for m in 1..=24 {
                assert_eq!(
                    factor_by_cyclotomic_split(&base, m).unwrap(),
                    factor_xm_minus_1(&base, m).unwrap(),
                    "q={q} m={m}"
                );
            }
        }
    }

    #[test]
    fn large_splitting_field_falls_back() {
        // ord_29(8) = 28 and 8^28 = 2^84
        let base = TowerParams::for_q(8, 1).unwrap().build_base().unwrap();
        let fact = factor_xm_minus_1(&base, 29).unwrap();
        assert_eq!(fact.product(&base), Poly::x_pow_minus_one(&base, 29));
        let degrees: Vec<usize> = fact
            .factors()
            .iter()
            .map(|(f, _)| f.degree().unwrap())
            .collect();
        assert_eq!(degrees, vec![1, 28]);
    }

    fn polys(f: &Factorization) -> Vec<(String, u32)> {
        let mut v: Vec<_> = f
            .factors()
            .iter()
            .map(|(p, e)| (poly_to_string(p), *e))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn cosets() {
        let c = cyclotomic_cosets(2, 5).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].members, vec![0]);
        assert_eq!(c[1].members, vec![1, 2, 3, 4]);
        assert_eq!(cyclotomic_cosets(7, 1).unwrap()[0].members, vec![0]);
        let total: usize = cyclotomic_cosets(3, 40)
            .unwrap()
            .iter()
            .map(|c| c.members.len())
            .sum();
        assert_eq!(total, 40);
        assert_eq!(
            cyclotomic_cosets(2, 6).unwrap_err(),
            Error::NotCoprime { q: 2, modulus: 6 }
        );
    }

    #[test]
    fn factor_examples() {
        let f2 = fp(2);
        let f = factor_xm_minus_1(&f2, 10).unwrap();
        assert_eq!(
            polys(&f),
            vec![("[1,1,1,1,1]".into(), 2), ("[1,1]".into(), 2)]
        );
        assert_eq!(f.render(&f2), "(x+1)^2 * (x^4+x^3+x^2+x+1)^2");

        let f = factor_xm_minus_1(&fp(3), 6).unwrap();
        assert_eq!(polys(&f), vec![("[1,1]".into(), 3), ("[2,1]".into(), 3)]);

        let f5 = fp(5);
        let f = factor_xm_minus_1(&f5, 6).unwrap();
        assert_eq!(
            polys(&f),
            vec![
                ("[1,1,1]".into(), 1),
                ("[1,1]".into(), 1),
                ("[1,4,1]".into(), 1),
                ("[4,1]".into(), 1)
            ]
        );

        let f = factor_xm_minus_1(&fp(7), 1).unwrap();
        assert_eq!(polys(&f), vec![("[6,1]".into(), 1)]);
    }

    #[test]
    fn factorizations_multiply_back_over_extension_bases() {
        for (p, f) in [(2u64, vec![1, 1, 0, 1]), (3, vec![1, 0, 1])] {
            let base = BaseField::new(p, f).unwrap();
            for m in 1..=12 {
                let fact = factor_xm_minus_1(&base, m).unwrap();
                assert_eq!(fact.product(&base), Poly::x_pow_minus_one(&base, m));
                assert_eq!(fact.degree(), m);
                for (g, _) in fact.factors() {
                    assert!(poly::is_irreducible(&base, g));
                }
            }
        }
    }

    #[test]
    fn cyclotomic_polys() {
        let f2 = fp(2);
        assert_eq!(poly_to_string(&cyclotomic_poly(&f2, 1).unwrap()), "[1,1]");
        assert_eq!(poly_to_string(&cyclotomic_poly(&f2, 3).unwrap()), "[1,1,1]");
        assert_eq!(
            cyclotomic_poly(&f2, 6).unwrap_err(),
            Error::CharDividesIndex { p: 2, d: 6 }
        );
        let f5 = fp(5);
        let prod = arith::divisors(12)
            .into_iter()
            .fold(Poly::one(&f5), |acc, d| {
                poly::mul(&f5, &acc, &cyclotomic_poly(&f5, d).unwrap())
            });
        assert_eq!(prod, Poly::x_pow_minus_one(&f5, 12));
    }

    #[test]
    fn phi_values() {
        let f2 = fp(2);
        assert_eq!(phi_q(2, &factor_xm_minus_1(&f2, 3).unwrap()).unwrap(), 3);
        assert_eq!(phi_q(5, &Factorization::new(vec![])).unwrap(), 1);
        let big = Factorization::new(vec![(Poly::x_pow_minus_one(&f2, 1), 70)]);
        assert_eq!(phi_q(2, &big).unwrap_err(), Error::Overflow("phi_q"));
    }

    #[test]
    fn phi_matches_unit_count() {
        // units of F_q[x]/(x^m - 1) counted by gcd with every residue
        for (p, m) in [(2u64, 3usize), (2, 6), (3, 4), (2, 10), (5, 3)] {
            let base = fp(p);
            let modulus = Poly::x_pow_minus_one(&base, m);
            let total = p.pow(m as u32);
            let units = (0..total)
                .filter(|&idx| {
                    let c: Vec<FqElem> =
                        (0..m).map(|i| FqElem(idx / p.pow(i as u32) % p)).collect();
                    poly::gcd(&base, &Poly::new(&base, c), &modulus).degree() == Some(0)
                })
                .count() as u64;
            let fact = factor_xm_minus_1(&base, m).unwrap();
            assert_eq!(phi_q(p, &fact).unwrap(), units, "p={p} m={m}");
        }
    }

    #[test]
    fn divisor_enumeration() {
        let f2 = fp(2);
        let f = factor_xm_minus_1(&f2, 10).unwrap();
        assert!(divisors_by_degree(&f, 7).is_empty());
        let trivial = divisors_by_degree(&f, 0);
        assert_eq!(trivial.len(), 1);
        assert!(trivial[0].is_empty());
        let total: usize = (0..=10).map(|d| divisors_by_degree(&f, d).len()).sum();
        assert_eq!(total, 9);

        let f7 = fp(7);
        let f = factor_xm_minus_1(&f7, 4).unwrap();
        let divs = divisors_by_degree(&f, 3);
        let mut got: Vec<String> = divs
            .iter()
            .map(|d| poly_to_string(&d.product(&f7)))
            .collect();
        got.sort();
        // (x-1)(x^2+1) and (x+1)(x^2+1)
        assert_eq!(got, vec!["[1,1,1,1]", "[6,1,6,1]"]);
    }

    #[test]
    fn entries_round_trip() {
        let f2 = fp(2);
        let f = factor_xm_minus_1(&f2, 10).unwrap();
        assert_eq!(
            Factorization::from_entries(&f2, &f.to_entries()).unwrap(),
            f
        );
    }
}
