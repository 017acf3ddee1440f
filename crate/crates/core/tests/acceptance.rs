//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use knormal::census::{self, CensusReport};
use knormal::knormal::{self as kn, Provenance, Rational};
use knormal::normal_basis::{self, frobenius_in_normal};
use knormal::polyring::factor_xm_minus_1;
use knormal::reference::{self, CellStatus, GoldenTable, PUBLISHED};
use knormal::{TowerCtx, TowerParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Fixture {
    tables: Vec<GoldenTable>,
    timings: Vec<(u64, usize, Duration)>,
    failures: Vec<String>,
}

impl Fixture {
    fn build() -> Self {
        let mut tables = Vec::new();
        let mut timings = Vec::new();
        let mut failures = Vec::new();
        for t in &PUBLISHED {
            let start = Instant::now();
            match reference::arbitrate(t, 1) {
                Ok(g) => {
                    timings.push((t.q, t.m, start.elapsed()));
                    tables.push(g);
                }
                Err(e) => failures.push(format!("(q={}, m={}): {e}", t.q, t.m)),
            }
        }
        Fixture {
            tables,
            timings,
            failures,
        }
    }

    fn table(&self, q: u64, m: usize) -> Result<&GoldenTable, String> {
        self.tables
            .iter()
            .find(|g| g.q == q && g.m == m)
            .ok_or_else(|| format!("no census for (q={q}, m={m})"))
    }

    fn census(&self, q: u64, m: usize) -> Result<&CensusReport, String> {
        self.table(q, m).map(|g| &g.census)
    }
}

fn criterion_1(fx: &Fixture) -> Check {
    ensure(fx.failures.is_empty(), || fx.failures.join("; "))?;
    for g in &fx.tables {
        ensure(g.census.counts == g.census.formula_counts, || {
            format!("(q={}, m={}) census != formula", g.q, g.m)
        })?;
    }
    let total: Duration = fx.timings.iter().map(|t| t.2).sum();
    let big = fx
        .timings
        .iter()
        .find(|t| (t.0, t.1) == (8, 6))
        .ok_or("missing (8,6)")?
        .2;
    ensure(big <= Duration::from_secs(60), || {
        format!("(8,6) took {big:?}")
    })?;
    ensure(total < Duration::from_secs(300), || {
        format!("total {total:?}")
    })?;
    Ok(format!(
        "8 fields, (8,6) in {:.1}s, total {:.1}s",
        big.as_secs_f64(),
        total.as_secs_f64()
    ))
}

fn criterion_2(fx: &Fixture) -> Check {
    let expected: [(u64, usize, &[Option<u64>]); 7] = [
        (
            9,
            5,
            &[Some(51200), Some(6400), Some(1280), Some(160), Some(8)],
        ),
        (
            8,
            6,
            &[
                Some(225792),
                Some(28224),
                Some(7560),
                Some(441),
                Some(119),
                Some(7),
            ],
        ),
        (
            3,
            6,
            &[Some(324), Some(216), Some(108), Some(60), Some(16), Some(4)],
        ),
        (
            5,
            6,
            &[
                Some(9216),
                Some(4608),
                Some(1344),
                Some(384),
                Some(64),
                Some(8),
            ],
        ),
        (17, 3, &[Some(4608), Some(288), Some(16)]),
        (
            2,
            10,
            &[
                Some(480),
                Some(240),
                Some(240),
                Some(0),
                None,
                Some(15),
                Some(15),
                Some(0),
                Some(2),
                Some(1),
            ],
        ),
        (7, 4, &[Some(1728), Some(576), Some(84), None]),
    ];
    let mut cells = 0;
    for (q, m, row) in expected {
        let c = fx.census(q, m)?;
        for (k, want) in row.iter().enumerate() {
            if let Some(want) = want {
                ensure(c.counts[k] == *want, || {
                    format!("(q={q}, m={m}) k={k}: {} != {want}", c.counts[k])
                })?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} published cells reproduced"))
}

fn criterion_3(fx: &Fixture) -> Check {
    let cases: [(u64, usize, usize, u64, u64); 6] = [
        (2, 10, 4, 30, 35),
        (7, 4, 3, 12, 16),
        (2, 3, 0, 3, 4),
        (2, 3, 1, 3, 4),
        (2, 3, 2, 1, 2),
        (2, 3, 3, 1, 1),
    ];
    let mut errata = Vec::new();
    for (q, m, k, computed, published) in cases {
        let g = fx.table(q, m)?;
        let row = &g.rows[k];
        ensure(
            row.computed_count == computed && row.formula_count == computed,
            || {
                format!(
                    "(q={q}, m={m}) k={k}: computed {} formula {}",
                    row.computed_count, row.formula_count
                )
            },
        )?;
        ensure(row.published_count == published, || {
            format!("published cell for k={k} changed")
        })?;
        let want = if computed == published {
            CellStatus::Agree
        } else {
            CellStatus::Erratum
        };
        ensure(row.count_status == want, || {
            format!("(q={q}, m={m}) k={k} status")
        })?;
        ensure(g.computed_row_sum == g.field_size, || {
            format!("(q={q}, m={m}) sum != q^m")
        })?;
        if want == CellStatus::Erratum {
            errata.push(format!("({q},{m},k={k}) {published}->{computed}"));
        }
    }
    let recorded: usize = fx.tables.iter().map(|g| g.errata().count()).sum();
    ensure(recorded == errata.len(), || {
        format!("{recorded} errata recorded, expected {}", errata.len())
    })?;
    Ok(format!("errata {}", errata.join(", ")))
}

fn criterion_4(fx: &Fixture) -> Check {
    for (q, m, want) in [
        (9, 5, 5750),
        (8, 6, 20124),
        (5, 6, 642),
        (17, 3, 288),
        (7, 4, 112),
    ] {
        let g = fx.table(q, m)?;
        ensure(g.q1_primitive_normal.computed == want, || {
            format!(
                "(q={q}, m={m}) footer {} != {want}",
                g.q1_primitive_normal.computed
            )
        })?;
        ensure(g.q1_primitive_normal.status == CellStatus::Agree, || {
            "status".into()
        })?;
    }
    let mut arbitrated = Vec::new();
    for (q, m) in [(2, 3), (2, 10), (3, 6)] {
        let f = &fx.table(q, m)?.q1_primitive_normal;
        arbitrated.push(format!(
            "({q},{m}) published {} computed {}",
            f.published, f.computed
        ));
    }
    Ok(format!(
        "5 footers exact; arbitrated {}",
        arbitrated.join(", ")
    ))
}

fn criterion_5(fx: &Fixture) -> Check {
    let mut checked = 0;
    for g in &fx.tables {
        let c = &g.census;
        for row in &c.bounds {
            if row.count > 0 {
                ensure(
                    row.count as u128 * row.bound_den as u128 >= row.bound_num as u128,
                    || format!("(q={}, m={}) k={} violates bound", g.q, g.m, row.k),
                )?;
                checked += 1;
            }
        }
    }
    let b = &fx.census(9, 5)?.bounds[1];
    let spot1 = Rational::new(b.bound_num, b.bound_den);
    ensure(spot1 == Rational::new(51200, 9), || format!("{spot1:?}"))?;
    ensure(spot1.render_2dp() == "5688.89", || spot1.render_2dp())?;
    let b = &fx.census(2, 10)?.bounds[8];
    let spot2 = Rational::new(b.bound_num, b.bound_den);
    ensure(spot2 == Rational::new(15, 8), || format!("{spot2:?}"))?;
    ensure(spot2.render_2dp() == "1.88", || spot2.render_2dp())?;
    Ok(format!(
        "{checked} nonzero rows sound; 51200/9 -> 5688.89, 15/8 = 1.875 -> 1.88"
    ))
}

fn criterion_6(fx: &Fixture) -> Check {
    let mut flagged = 0;
    for g in &fx.tables {
        let v = kn::existence_verdict(g.q, g.m).map_err(|e| e.to_string())?;
        for (k, p) in v.per_k.iter().enumerate() {
            if p.guaranteed() {
                flagged += 1;
                ensure(g.census.counts[k] > 0, || {
                    format!("(q={}, m={}) k={k} flagged {p:?} but count 0", g.q, g.m)
                })?;
            }
        }
    }
    let v = kn::existence_verdict(5, 6).map_err(|e| e.to_string())?;
    ensure(
        v.per_k[2..=3].iter().all(|&p| p == Provenance::DividesCase),
        || format!("{v:?}"),
    )?;
    let v = kn::existence_verdict(8, 6).map_err(|e| e.to_string())?;
    ensure(
        v.per_k[2..=4].iter().all(|&p| p == Provenance::GcdCase),
        || format!("{v:?}"),
    )?;
    let v = kn::existence_verdict(3, 6).map_err(|e| e.to_string())?;
    ensure(
        v.per_k[2..=4].iter().all(|&p| p == Provenance::Reis),
        || format!("{v:?}"),
    )?;
    let v = kn::existence_verdict(2, 10).map_err(|e| e.to_string())?;
    ensure(
        v.per_k[2..=8].iter().all(|&p| p == Provenance::None),
        || format!("{v:?}"),
    )?;
    Ok(format!("{flagged} flagged (q,m,k) all populated"))
}

fn criterion_7() -> Check {
    let mut exhaustive = 0;
    let mut sampled = 0;
    for t in &PUBLISHED {
        let ctx = TowerParams::for_q(t.q, t.m)
            .and_then(|p| p.build())
            .map_err(|e| e.to_string())?;
        let fact = factor_xm_minus_1(ctx.base(), ctx.m()).map_err(|e| e.to_string())?;
        let n = census::verify_four_way(&ctx, &fact)
            .map_err(|e| format!("(q={}, m={}): {e}", t.q, t.m))?;
        if ctx.field_size() <= census::EXHAUSTIVE_VERIFY_LIMIT {
            ensure(n == ctx.field_size(), || "not exhaustive".into())?;
            exhaustive += n;
        } else {
            ensure(n == census::VERIFY_SAMPLE as u64, || {
                "wrong sample size".into()
            })?;
            sampled += n;
        }
    }
    Ok(format!(
        "{exhaustive} exhaustive + {sampled} sampled elements, no disagreement"
    ))
}

fn criterion_8(fx: &Fixture) -> Check {
    let mut q1_fields = Vec::new();
    for g in &fx.tables {
        let c = &g.census;
        ensure(c.primitive_normal >= 1, || {
            format!("(q={}, m={}) no primitive normal", g.q, g.m)
        })?;
        if knormal::arith::gcd(g.m as u64, g.q - 1) == 1 {
            ensure(c.q1_primitive_normal >= 1, || {
                format!("(q={}, m={}) no (q-1)-primitive normal", g.q, g.m)
            })?;
            q1_fields.push(format!("({},{})", g.q, g.m));
        }
    }
    ensure(q1_fields.len() == 5, || {
        format!("coprime fields {q1_fields:?}")
    })?;
    Ok(format!(
        "primitive normal in all 8; (q-1)-primitive normal in {}",
        q1_fields.join(" ")
    ))
}

fn criterion_9() -> Check {
    for (q, m) in [(3u64, 3usize), (2, 4), (5, 5)] {
        let base = knormal::BaseField::prime(q).map_err(|e| e.to_string())?;
        let fact = factor_xm_minus_1(&base, m).map_err(|e| e.to_string())?;
        let counts = kn::formula_counts(q, &fact).map_err(|e| e.to_string())?;
        for k in 0..m {
            let closed = (q - 1) * q.pow((m - k - 1) as u32);
            ensure(counts[k] == closed, || {
                format!("(q={q}, m={m}) k={k}: {} != {closed}", counts[k])
            })?;
            let s = kn::saygi_count(q, m, k).map_err(|e| e.to_string())?;
            ensure(s == closed, || "saygi_count".into())?;
        }
    }
    Ok("(3,3) (2,4) (5,5) agree for every k".into())
}

fn nb_round_trip(ctx: &TowerCtx) -> Result<(), String> {
    let alpha = kn::find_k_normal(ctx, 0)
        .map_err(|e| e.to_string())?
        .ok_or("no normal element")?;
    let nb = normal_basis::build_normal_basis(ctx, &alpha).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.field_size());
    for _ in 0..1000 {
        let beta = ctx
            .element(rng.gen_range(0..ctx.field_size()))
            .map_err(|e| e.to_string())?;
        let coords = nb.to_normal_coords(ctx, &beta);
        ensure(nb.from_normal_coords(ctx, &coords) == beta, || {
            "round trip".into()
        })?;
        ensure(
            nb.from_normal_coords(ctx, &frobenius_in_normal(&coords)) == ctx.frobenius(&beta),
            || "shift diagram".into(),
        )?;
    }
    Ok(())
}

fn criterion_10() -> Check {
    for t in &PUBLISHED {
        let ctx = TowerParams::for_q(t.q, t.m)
            .and_then(|p| p.build())
            .map_err(|e| e.to_string())?;
        nb_round_trip(&ctx).map_err(|e| format!("(q={}, m={}): {e}", t.q, t.m))?;
    }
    let ctx = TowerParams::for_q(2, 3)
        .and_then(|p| p.build())
        .map_err(|e| e.to_string())?;
    let mut accepted = 0;
    for a in ctx.enumerate(0, 8).map_err(|e| e.to_string())? {
        let k = kn::k_via_span(&ctx, &a);
        match normal_basis::build_normal_basis(&ctx, &a) {
            Ok(_) if k == 0 => accepted += 1,
            Err(knormal::Error::NotNormal(j)) if j == k && k > 0 => {}
            other => return Err(format!("index {} k={k}: {other:?}", ctx.index_of(&a))),
        }
    }
    ensure(accepted == 3, || format!("{accepted} accepted in F_8"))?;
    Ok("1000 elements per field; 3 normal elements of F_8 accepted".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let fx = Fixture::build();
    let results: Vec<(usize, &str, Check)> = vec![
        (1, "dual-oracle census equals formula", criterion_1(&fx)),
        (2, "published counts reproduced", criterion_2(&fx)),
        (3, "erratum arbitration", criterion_3(&fx)),
        (4, "(q-1)-primitive normal footers", criterion_4(&fx)),
        (5, "lower-bound soundness", criterion_5(&fx)),
        (6, "existence soundness", criterion_6(&fx)),
        (7, "four-way characterization agreement", criterion_7()),
        (8, "primitive normal existence", criterion_8(&fx)),
        (9, "closed form when m is a power of p", criterion_9()),
        (10, "normal-basis properties", criterion_10()),
    ];
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {n:>2}: {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n:>2}: {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
