//! k-normality of elements of `F_{q^m}` over `F_q`.
//!
//! `α` is k-normal when its conjugates `α, α^q, ..., α^{q^{m-1}}` span an
//! `F_q`-subspace of dimension `m - k`. Four equivalent characterizations are
//! implemented independently and cross-checked in [`Mode::Verify`]:
//!
//! * span: row-reduce the conjugate coordinate vectors over `F_q`;
//! * gcd: `k = deg gcd(x^m - 1, g_α)` over `F_{q^m}`;
//! * rank: `m - k` is the rank of the circulant conjugate matrix `A_α` over `F_{q^m}`;
//! * ord: `m - k = deg Ord(α)`, the monic generator of the annihilator of `α`
//!   under `f·α = Σ a_i α^{q^i}`.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{Field, FqElem};
use crate::linalg::{self, EchelonBasis, Matrix};
use crate::poly::{self, Poly};
use crate::polyring::{self, Factorization, PolyFq};
use crate::tower::{FqmElem, TowerCtx};

/// `f·α = Σ a_i α^{q^i}`.
pub fn apply_module_action(ctx: &TowerCtx, f: &PolyFq, alpha: &FqmElem) -> FqmElem {
    let mut acc = ctx.zero();
    let mut conj = alpha.clone();
    for (i, a) in f.coeffs().iter().enumerate() {
        if i > 0 {
            conj = ctx.frobenius(&conj);
        }
        if a.0 != 0 {
            acc = ctx.add(&acc, &ctx.scale(a, &conj));
        }
    }
    acc
}

/// `Ord(α)`: start from `x^m - 1` and lower each factor's multiplicity
/// while the quotient still annihilates `α`.
pub fn ord_poly(ctx: &TowerCtx, alpha: &FqmElem, fact: &Factorization) -> PolyFq {
    let base = ctx.base();
    let mut exps: Vec<u32> = fact.factors().iter().map(|(_, e)| *e).collect();
    for i in 0..exps.len() {
        while exps[i] > 0 {
            exps[i] -= 1;
            let candidate = fact.with_exponents(&exps).product(base);
            if !apply_module_action(ctx, &candidate, alpha).is_zero() {
                exps[i] += 1;
                break;
            }
        }
    }
    fact.with_exponents(&exps).product(base)
}

/// `g_α(x) = Σ_{i<m} α^{q^i} x^{m-1-i}` over `F_{q^m}`.
pub fn g_alpha(ctx: &TowerCtx, alpha: &FqmElem) -> Poly<FqmElem> {
    let mut coeffs = ctx.conjugates(alpha, ctx.m());
    coeffs.reverse();
    Poly::new(ctx, coeffs)
}

pub fn k_via_gcd(ctx: &TowerCtx, alpha: &FqmElem) -> usize {
    let xm1 = Poly::x_pow_minus_one(ctx, ctx.m());
    let g = poly::gcd(ctx, &xm1, &g_alpha(ctx, alpha));
    g.degree().expect("gcd with x^m - 1 is nonzero")
}

/// `F_q`-dimension of the span of the conjugates.
pub fn span_dimension(ctx: &TowerCtx, alpha: &FqmElem) -> usize {
    let m = ctx.m();
    let base = ctx.base();
    let mut basis = EchelonBasis::new(m);
    let mut cur = alpha.coords().to_vec();
    let mut next = vec![FqElem::ZERO; m];
    for i in 0..m {
        basis.insert(base, cur.clone());
        if basis.is_full() || i + 1 == m {
            break;
        }
        ctx.frobenius_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    basis.rank()
}

pub fn k_via_span(ctx: &TowerCtx, alpha: &FqmElem) -> usize {
    ctx.m() - span_dimension(ctx, alpha)
}

/// The circulant `A_α` with `A[r][c] = α^{q^{(c - r) mod m}}`.
pub fn conjugate_matrix(ctx: &TowerCtx, alpha: &FqmElem) -> Matrix<FqmElem> {
    let m = ctx.m();
    let conj = ctx.conjugates(alpha, m);
    Matrix::from_fn(m, m, |r, c| conj[(c + m - r) % m].clone())
}

pub fn k_via_rank(ctx: &TowerCtx, alpha: &FqmElem) -> usize {
    ctx.m() - linalg::rank(ctx, &conjugate_matrix(ctx, alpha))
}

pub fn k_via_ord(ctx: &TowerCtx, alpha: &FqmElem, fact: &Factorization) -> usize {
    ctx.m() - ord_poly(ctx, alpha, fact).degree().expect("Ord is monic")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Span method only.
    Fast,
    /// All four methods, which must agree.
    Verify,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KNormalityReport {
    pub element: FqmElem,
    pub k: usize,
    /// Computed in verify mode only.
    pub ord_poly: Option<PolyFq>,
    pub gcd_deg: usize,
    pub span_dim: usize,
    pub matrix_rank: usize,
}

pub fn classify(
    ctx: &TowerCtx,
    alpha: &FqmElem,
    fact: &Factorization,
    mode: Mode,
) -> Result<KNormalityReport> {
    let m = ctx.m();
    let span = k_via_span(ctx, alpha);
    match mode {
        Mode::Fast => Ok(KNormalityReport {
            element: alpha.clone(),
            k: span,
            ord_poly: None,
            gcd_deg: span,
            span_dim: m - span,
            matrix_rank: m - span,
        }),
        Mode::Verify => {
            let gcd = k_via_gcd(ctx, alpha);
            let rank = k_via_rank(ctx, alpha);
            let ord = ord_poly(ctx, alpha, fact);
            let ord_k = m - ord.degree().expect("Ord is monic");
            if !(gcd == span && rank == span && ord_k == span) {
                return Err(Error::MethodDisagreement {
                    gcd,
                    span,
                    rank,
                    ord: ord_k,
                });
            }
            Ok(KNormalityReport {
                element: alpha.clone(),
                k: span,
                ord_poly: Some(ord),
                gcd_deg: gcd,
                span_dim: m - span,
                matrix_rank: m - rank,
            })
        }
    }
}

/// Weighted divisor-degree profile: entry `j` is `Σ weight(h)` over monic
/// divisors `h | x^m - 1` of degree `j`, where `weight` is multiplicative and
/// `weight(P^t)` is supplied per factor.
fn divisor_profile(
    fact: &Factorization,
    weight: impl Fn(usize, u32) -> Option<u128>,
) -> Result<Vec<u128>> {
    let overflow = || Error::Overflow("divisor profile");
    let mut profile = vec![1u128];
    for (f, e) in fact.factors() {
        let d = f.degree().unwrap_or(0);
        let mut next = vec![0u128; profile.len() + d * *e as usize];
        for (j, &v) in profile.iter().enumerate() {
            if v == 0 {
                continue;
            }
            for t in 0..=*e {
                let w = if t == 0 {
                    1
                } else {
                    weight(d, t).ok_or_else(overflow)?
                };
                let add = v.checked_mul(w).ok_or_else(overflow)?;
                let slot = &mut next[j + d * t as usize];
                *slot = slot.checked_add(add).ok_or_else(overflow)?;
            }
        }
        profile = next;
    }
    Ok(profile)
}

/// `n_k = Σ_{h | x^m-1, deg h = m-k} Φ_q(h)` for every `k = 0..=m`.
pub fn formula_counts(q: u64, fact: &Factorization) -> Result<Vec<u64>> {
    let m = fact.degree();
    let profile = divisor_profile(fact, |d, t| {
        let qd = (q as u128).checked_pow(d as u32)?;
        let lift = (q as u128).checked_pow(d as u32 * (t - 1))?;
        (qd - 1).checked_mul(lift)
    })?;
    (0..=m)
        .map(|k| u64::try_from(profile[m - k]).map_err(|_| Error::Overflow("n_k")))
        .collect()
}

pub fn count_k_normal_formula(q: u64, fact: &Factorization, k: usize) -> Result<u64> {
    let m = fact.degree();
    if k > m {
        return Err(Error::PreconditionViolated(format!("k={k} exceeds m={m}")));
    }
    Ok(formula_counts(q, fact)?[k])
}

/// `c_{m-k}` for every `k`: the number of monic divisors of degree `m - k`.
pub fn divisor_counts(fact: &Factorization) -> Result<Vec<u64>> {
    let m = fact.degree();
    let profile = divisor_profile(fact, |_, _| Some(1))?;
    (0..=m)
        .map(|k| u64::try_from(profile[m - k]).map_err(|_| Error::Overflow("c_{m-k}")))
        .collect()
}

/// Closed form `(q - 1) q^{m-k-1}` valid when `m` is a power of the characteristic.
pub fn saygi_count(q: u64, m: usize, k: usize) -> Result<u64> {
    let (p, _) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    let mut r = m as u64;
    while r > 1 && r % p == 0 {
        r /= p;
    }
    if m == 0 || r != 1 {
        return Err(Error::PreconditionViolated(format!(
            "m={m} is not a power of the characteristic {p}"
        )));
    }
    if k >= m {
        return Err(Error::PreconditionViolated(format!(
            "k={k} must be below m={m}"
        )));
    }
    q.checked_pow((m - k - 1) as u32)
        .and_then(|x| x.checked_mul(q - 1))
        .ok_or(Error::Overflow("saygi_count"))
}

/// Exact nonnegative rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: u64,
    pub den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0);
        let g = arith::gcd(num, den).max(1);
        Rational {
            num: num / g,
            den: den / g,
        }
    }

    /// Integer when exact, otherwise two decimals rounded half up.
    pub fn render(&self) -> String {
        if self.num % self.den == 0 {
            return (self.num / self.den).to_string();
        }
        render_2dp(self.num as u128, self.den as u128)
    }

    pub fn render_2dp(&self) -> String {
        render_2dp(self.num as u128, self.den as u128)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn render_2dp(num: u128, den: u128) -> String {
    let scaled = num * 100;
    let mut hundredths = scaled / den;
    if 2 * (scaled % den) >= den {
        hundredths += 1;
    }
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// `Φ_q(x^m - 1) / q^k`.
pub fn lower_bound(q: u64, fact: &Factorization, k: usize) -> Result<Rational> {
    let phi = polyring::phi_q(q, fact)?;
    let den = q
        .checked_pow(k as u32)
        .ok_or(Error::Overflow("lower bound denominator"))?;
    Ok(Rational::new(phi, den))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub q: u64,
    pub m: usize,
    pub k: usize,
    pub formula_count: u64,
    pub lower_bound_num: u64,
    pub lower_bound_den: u64,
    pub saygi_count: Option<u64>,
    pub divisor_count: u64,
}

impl BoundEvaluation {
    pub fn bound(&self) -> Rational {
        Rational::new(self.lower_bound_num, self.lower_bound_den)
    }

    /// `n_k >= Φ_q(x^m-1)/q^k` whenever `n_k > 0`.
    pub fn is_sound(&self) -> bool {
        self.formula_count == 0
            || self.formula_count as u128 * self.lower_bound_den as u128
                >= self.lower_bound_num as u128
    }
}

pub fn evaluate_bounds(q: u64, fact: &Factorization) -> Result<Vec<BoundEvaluation>> {
    let m = fact.degree();
    let counts = formula_counts(q, fact)?;
    let divisors = divisor_counts(fact)?;
    (0..=m)
        .map(|k| {
            let bound = lower_bound(q, fact, k)?;
            Ok(BoundEvaluation {
                q,
                m,
                k,
                formula_count: counts[k],
                lower_bound_num: bound.num,
                lower_bound_den: bound.den,
                saygi_count: if k < m {
                    saygi_count(q, m, k).ok()
                } else {
                    None
                },
                divisor_count: divisors[k],
            })
        })
        .collect()
}

/// Why k-normal elements are guaranteed to exist for a given `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `k ∈ {0, 1, m-1, m}`.
    Always,
    /// `m | q^m - 1`.
    DividesCase,
    /// `√m < d` and `k >= m - d - b + 1`.
    GcdCase,
    /// Every prime divisor of `m` divides `p(q - 1)`.
    Reis,
    None,
}

impl Provenance {
    pub fn guaranteed(self) -> bool {
        self != Provenance::None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceVerdict {
    pub q: u64,
    pub m: usize,
    /// `gcd(q^m - 1, m)`.
    pub d: u64,
    /// Largest prime dividing `m` but not `q^m - 1`.
    pub b: Option<u64>,
    pub reis: bool,
    pub per_k: Vec<Provenance>,
}

impl ExistenceVerdict {
    pub fn guaranteed(&self, k: usize) -> bool {
        self.per_k.get(k).is_some_and(|p| p.guaranteed())
    }
}

/// Sufficient conditions for existence of k-normal elements. All divisibility
/// tests reduce `q^m` modulo small moduli, so any `u64` pair works.
pub fn existence_verdict(q: u64, m: usize) -> Result<ExistenceVerdict> {
    let (p, _) = arith::prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if m < 2 {
        return Err(Error::PreconditionViolated("m must be at least 2".into()));
    }
    let mu = m as u64;
    // (q^m - 1) mod n
    let qm1_mod = |n: u64| (arith::pow_mod(q, mu, n) + n - 1) % n;
    let divides = qm1_mod(mu) == 0;
    let d = arith::gcd(qm1_mod(mu), mu);
    let m_primes: Vec<u64> = arith::factor_u64(mu).primes().collect();
    let b = m_primes.iter().rev().copied().find(|&r| qm1_mod(r) != 0);
    let reis = m_primes.iter().all(|&r| r == p || (q - 1) % r == 0);
    let gcd_threshold = match b {
        Some(b) if !divides && (mu as u128) < (d as u128) * (d as u128) => {
            Some((mu as i128 - d as i128 - b as i128 + 1).max(0) as usize)
        }
        _ => None,
    };
    let per_k = (0..=m)
        .map(|k| {
            if k <= 1 || k + 1 >= m {
                Provenance::Always
            } else if divides {
                Provenance::DividesCase
            } else if gcd_threshold.is_some_and(|t| k >= t) {
                Provenance::GcdCase
            } else if reis {
                Provenance::Reis
            } else {
                Provenance::None
            }
        })
        .collect();
    Ok(ExistenceVerdict {
        q,
        m,
        d,
        b,
        reis,
        per_k,
    })
}

fn check_census_size(ctx: &TowerCtx) -> Result<()> {
    let size = ctx.field_size() as u128;
    let guard = ctx.size_guard();
    if size > guard {
        return Err(Error::SizeGuardExceeded { size, guard });
    }
    Ok(())
}

/// Smallest-index k-normal element, or `None` if there is none.
pub fn find_k_normal(ctx: &TowerCtx, k: usize) -> Result<Option<FqmElem>> {
    check_census_size(ctx)?;
    if k > ctx.m() {
        return Err(Error::PreconditionViolated(format!(
            "k={k} exceeds m={}",
            ctx.m()
        )));
    }
    Ok(ctx
        .enumerate(0, ctx.field_size())?
        .find(|a| k_via_span(ctx, a) == k))
}

fn check_order_target(ctx: &TowerCtx, target: u64) -> Result<()> {
    let n = ctx.group_order();
    if target == 0 || n % target != 0 {
        return Err(Error::NotADivisor {
            target,
            group_order: n,
        });
    }
    Ok(())
}

/// Whether `α` is normal and of multiplicative order exactly `target`.
pub fn is_order_normal(ctx: &TowerCtx, alpha: &FqmElem, target: u64) -> bool {
    k_via_span(ctx, alpha) == 0 && ctx.has_order(alpha, target)
}

/// Smallest-index normal element of multiplicative order exactly `target`.
pub fn find_order_normal(ctx: &TowerCtx, target: u64) -> Result<Option<FqmElem>> {
    check_census_size(ctx)?;
    check_order_target(ctx, target)?;
    Ok(ctx
        .enumerate(1, ctx.field_size())?
        .find(|a| is_order_normal(ctx, a, target)))
}

pub fn count_order_normal(ctx: &TowerCtx, target: u64) -> Result<u64> {
    check_census_size(ctx)?;
    check_order_target(ctx, target)?;
    Ok(ctx
        .enumerate(1, ctx.field_size())?
        .filter(|a| is_order_normal(ctx, a, target))
        .count() as u64)
}

/// `(q^m - 1)/(q - 1)`, the order of a (q-1)-primitive element.
pub fn q1_primitive_order(ctx: &TowerCtx) -> u64 {
    ctx.group_order() / (ctx.q() - 1)
}
