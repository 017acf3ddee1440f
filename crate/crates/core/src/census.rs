//! Exhaustive classification of every element of `F_{q^m}`.
//!
//! The per-k counts are checked against the divisor-sum formula; a mismatch is
//! a hard error. Work is split into contiguous index ranges, one per worker,
//! and merged by addition, so the result does not depend on the worker count.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FqElem;
use crate::knormal::{self, ExistenceVerdict, Mode, Provenance};
use crate::linalg::EchelonBasis;
use crate::polyring::{self, Factorization};
use crate::tower::{FqmElem, TowerCtx, TowerDescription};

/// Fields at most this large are verified exhaustively in verify mode.
pub const EXHAUSTIVE_VERIFY_LIMIT: u64 = 4096;
/// Random sample size for verify mode on larger fields.
pub const VERIFY_SAMPLE: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusOptions {
    pub workers: usize,
    pub mode: Mode,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            workers: 1,
            mode: Mode::Fast,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub k: usize,
    pub count: u64,
    pub bound_num: u64,
    pub bound_den: u64,
    pub divisor_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceSummary {
    pub d: u64,
    pub b: Option<u64>,
    pub per_k: Vec<Provenance>,
}

impl From<&ExistenceVerdict> for ExistenceSummary {
    fn from(v: &ExistenceVerdict) -> Self {
        ExistenceSummary {
            d: v.d,
            b: v.b,
            per_k: v.per_k.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub tower: TowerDescription,
    pub counts: Vec<u64>,
    pub formula_counts: Vec<u64>,
    pub bounds: Vec<BoundRow>,
    /// Absent for `m = 1`, where the existence theorems do not apply.
    pub existence: Option<ExistenceSummary>,
    pub primitive_normal: u64,
    pub q1_primitive_normal: u64,
    /// Elements cross-checked by all four methods (verify mode only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

#[derive(Debug, Default, Clone)]
struct Tally {
    counts: Vec<u64>,
    primitive_normal: u64,
    q1_primitive_normal: u64,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.primitive_normal += other.primitive_normal;
        self.q1_primitive_normal += other.q1_primitive_normal;
    }
}

fn census_range(ctx: &TowerCtx, lo: u64, hi: u64) -> Tally {
    let m = ctx.m();
    let q = ctx.q();
    let base = ctx.base();
    let n = ctx.group_order();
    let q1 = knormal::q1_primitive_order(ctx);
    let mut tally = Tally {
        counts: vec![0; m + 1],
        ..Tally::default()
    };
    let mut basis = EchelonBasis::new(m);
    let mut cur = vec![FqElem::ZERO; m];
    let mut next = vec![FqElem::ZERO; m];
    for index in lo..hi {
        let mut rest = index;
        let mut alpha = Vec::with_capacity(m);
        for _ in 0..m {
            alpha.push(FqElem(rest % q));
            rest /= q;
        }
        cur.copy_from_slice(&alpha);
        basis.clear();
        for i in 0..m {
            basis.insert(base, cur.clone());
            if basis.is_full() || i + 1 == m {
                break;
            }
            ctx.frobenius_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        let k = m - basis.rank();
        tally.counts[k] += 1;
        if k == 0 {
            let order = ctx
                .multiplicative_order(&ctx.from_coords(alpha))
                .expect("normal elements are nonzero");
            if order == n {
                tally.primitive_normal += 1;
            }
            if order == q1 {
                tally.q1_primitive_normal += 1;
            }
        }
    }
    tally
}

/// Four-way agreement on every element (small fields) or a seeded sample.
/// Returns the number of elements checked.
pub fn verify_four_way(ctx: &TowerCtx, fact: &Factorization) -> Result<u64> {
    let elements: Vec<FqmElem> = if ctx.field_size() <= EXHAUSTIVE_VERIFY_LIMIT {
        ctx.enumerate(0, ctx.field_size())?.collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed() ^ 0x6b6e_6f72_6d61_6c00);
        (0..VERIFY_SAMPLE)
            .map(|_| ctx.element(rng.gen_range(0..ctx.field_size())))
            .collect::<Result<_>>()?
    };
    for a in &elements {
        knormal::classify(ctx, a, fact, Mode::Verify)?;
    }
    Ok(elements.len() as u64)
}

pub fn census(ctx: &TowerCtx, fact: &Factorization, opts: CensusOptions) -> Result<CensusReport> {
    let size = ctx.field_size();
    if size as u128 > ctx.size_guard() {
        return Err(Error::SizeGuardExceeded {
            size: size as u128,
            guard: ctx.size_guard(),
        });
    }
    if fact.degree() != ctx.m() {
        return Err(Error::PreconditionViolated(
            "factorization does not match the extension degree".into(),
        ));
    }
    let start = Instant::now();
    let workers = opts.workers.max(1);
    let chunk = size.div_ceil(workers as u64);
    let tallies: Vec<Tally> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let lo = (w * chunk).min(size);
                let hi = ((w + 1) * chunk).min(size);
                s.spawn(move || census_range(ctx, lo, hi))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("census worker panicked"))
            .collect()
    });
    let mut total = Tally {
        counts: vec![0; ctx.m() + 1],
        ..Tally::default()
    };
    for t in &tallies {
        total.merge(t);
    }

    let q = ctx.q();
    let formula_counts = knormal::formula_counts(q, fact)?;
    for (k, (&c, &f)) in total.counts.iter().zip(&formula_counts).enumerate() {
        if c != f {
            return Err(Error::FormulaCensusMismatch {
                k,
                census: c,
                formula: f,
            });
        }
    }
    let sum: u64 = total.counts.iter().sum();
    if sum != size || total.counts[ctx.m()] != 1 {
        return Err(Error::InternalInconsistency(format!(
            "census counts sum to {sum}, field has {size} elements"
        )));
    }

    let verified = match opts.mode {
        Mode::Fast => None,
        Mode::Verify => Some(verify_four_way(ctx, fact)?),
    };

    let divisor_counts = knormal::divisor_counts(fact)?;
    let bounds = (0..=ctx.m())
        .map(|k| {
            let b = knormal::lower_bound(q, fact, k)?;
            Ok(BoundRow {
                k,
                count: total.counts[k],
                bound_num: b.num,
                bound_den: b.den,
                divisor_count: divisor_counts[k],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let existence = if ctx.m() >= 2 {
        Some(ExistenceSummary::from(&knormal::existence_verdict(
            q,
            ctx.m(),
        )?))
    } else {
        None
    };

    Ok(CensusReport {
        tower: ctx.description(),
        counts: total.counts,
        formula_counts,
        bounds,
        existence,
        primitive_normal: total.primitive_normal,
        q1_primitive_normal: total.q1_primitive_normal,
        verified,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
        workers: Some(workers),
    })
}

impl CensusReport {
    pub fn q(&self) -> u64 {
        self.tower.p.pow(self.tower.s)
    }

    pub fn m(&self) -> usize {
        self.tower.m
    }

    /// Drops run-dependent fields so output depends only on the field.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self.workers = None;
        self
    }

    pub fn phi(&self) -> u64 {
        self.counts[0]
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Rows `k = 0..m-1`: `k,count,bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,count,bound\n");
        for row in &self.bounds[..self.m()] {
            let b = knormal::Rational::new(row.bound_num, row.bound_den);
            out.push_str(&format!("{},{},{}\n", row.k, row.count, b.render()));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let (q, m) = (self.q(), self.m());
        let mut out = format!(
            "F_{{{}}}/F_{{{}}} (q={q}, m={m})\n\n| k | # of k-normal elements | Φ_q(x^m-1)/q^k |\n|---|---|---|\n",
            (q as u128).pow(m as u32),
            q
        );
        for row in &self.bounds[..m] {
            let b = knormal::Rational::new(row.bound_num, row.bound_den);
            out.push_str(&format!("| {} | {} | {} |\n", row.k, row.count, b.render()));
        }
        out.push_str(&format!(
            "\n# of (q-1)-primitive normal elements = {}\n",
            self.q1_primitive_normal
        ));
        out
    }
}

/// Convenience: factor `x^m - 1` for the tower and run the census.
pub fn census_of(ctx: &TowerCtx, opts: CensusOptions) -> Result<CensusReport> {
    let fact = polyring::factor_xm_minus_1(ctx.base(), ctx.m())?;
    census(ctx, &fact, opts)
}
