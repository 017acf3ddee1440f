//! Counting formulas against independent enumerations.

use std::collections::BTreeMap;

use knormal::arith;
use knormal::knormal as kn;
use knormal::polyring::{divisors_by_degree, factor_xm_minus_1, phi_q};
use knormal::{Factorization, TowerParams};

fn fact(q: u64, m: usize) -> Factorization {
    let base = TowerParams::for_q(q, 1).unwrap().build_base().unwrap();
    factor_xm_minus_1(&base, m).unwrap()
}

const PRIME_POWERS: [u64; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27];

#[test]
fn formula_counts_equal_divisor_enumeration() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for m in 1..=16 {
            let f = fact(q, m);
            let counts = kn::formula_counts(q, &f).unwrap();
            let divisors = kn::divisor_counts(&f).unwrap();
            for k in 0..=m {
                let hs = divisors_by_degree(&f, m - k);
                let total: u64 = hs.iter().map(|h| phi_q(q, h).unwrap()).sum();
                assert_eq!(counts[k], total, "q={q} m={m} k={k}");
                assert_eq!(divisors[k], hs.len() as u64, "q={q} m={m} k={k}");
            }
            let sum: u128 = counts.iter().map(|&c| c as u128).sum();
            assert_eq!(sum, (q as u128).pow(m as u32), "q={q} m={m}");
        }
    }
}

#[test]
fn roots_of_unity_in_the_extension() {
    // x^m - 1 has gcd(q^m - 1, m) distinct roots in F_{q^m}; they are the roots of
    // the factors whose degree divides m. Over F_q itself only gcd(q - 1, m') are linear.
    for q in PRIME_POWERS {
        let (p, _) = arith::prime_power(q).unwrap();
        for m in 1..=30usize {
            let f = fact(q, m);
            let mu = m as u64;
            let d = arith::gcd((arith::pow_mod(q, mu, mu) + mu - 1) % mu, mu);
            let roots: usize = f
                .factors()
                .iter()
                .map(|(g, _)| g.degree().unwrap())
                .filter(|deg| m % deg == 0)
                .sum();
            assert_eq!(roots as u64, d, "q={q} m={m}");

            let mut m_prime = mu;
            while m_prime % p == 0 {
                m_prime /= p;
            }
            let linear = f
                .factors()
                .iter()
                .filter(|(g, _)| g.degree() == Some(1))
                .count();
            assert_eq!(linear as u64, arith::gcd(q - 1, m_prime), "q={q} m={m}");
        }
    }
}

#[test]
fn existence_verdicts_are_sound() {
    let mut flagged = 0;
    for q in PRIME_POWERS {
        for m in 2..=24usize {
            let f = fact(q, m);
            let Ok(counts) = kn::formula_counts(q, &f) else {
                continue;
            };
            let v = kn::existence_verdict(q, m).unwrap();
            for (k, p) in v.per_k.iter().enumerate() {
                if p.guaranteed() {
                    flagged += 1;
                    assert!(counts[k] > 0, "q={q} m={m} k={k} flagged {p:?} but n_k = 0");
                }
            }
        }
    }
    assert!(flagged > 1000);
}

#[test]
fn bounds_are_sound() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for m in 1..=16 {
            for row in kn::evaluate_bounds(q, &fact(q, m)).unwrap() {
                assert!(row.is_sound(), "q={q} m={m} k={}", row.k);
            }
        }
    }
}

#[test]
fn closed_form_when_m_is_a_power_of_p() {
    for (q, m) in [
        (2u64, 2usize),
        (2, 4),
        (2, 8),
        (3, 3),
        (3, 9),
        (4, 4),
        (5, 5),
        (9, 3),
        (7, 7),
    ] {
        let counts = kn::formula_counts(q, &fact(q, m)).unwrap();
        for k in 0..m {
            assert_eq!(
                kn::saygi_count(q, m, k).unwrap(),
                counts[k],
                "q={q} m={m} k={k}"
            );
        }
    }
}

#[test]
fn every_order_occurs_phi_times() {
    for (q, m) in [(2u64, 4usize), (3, 3), (4, 2), (5, 2), (2, 6)] {
        let ctx = TowerParams::for_q(q, m).unwrap().build().unwrap();
        let mut by_order: BTreeMap<u64, u64> = BTreeMap::new();
        for a in ctx.enumerate(1, ctx.field_size()).unwrap() {
            *by_order
                .entry(ctx.multiplicative_order(&a).unwrap())
                .or_default() += 1;
        }
        let n = ctx.group_order();
        let expected: BTreeMap<u64, u64> = arith::divisors(n)
            .into_iter()
            .map(|d| (d, arith::euler_phi(d)))
            .collect();
        assert_eq!(by_order, expected, "q={q} m={m}");
    }
}

#[test]
fn order_searches_agree_with_census() {
    let ctx = TowerParams::for_q(3, 4).unwrap().build().unwrap();
    let n = ctx.group_order();
    let census = knormal::census::census_of(&ctx, Default::default()).unwrap();
    assert_eq!(
        kn::count_order_normal(&ctx, n).unwrap(),
        census.primitive_normal
    );
    let q1 = kn::q1_primitive_order(&ctx);
    assert_eq!(
        kn::count_order_normal(&ctx, q1).unwrap(),
        census.q1_primitive_normal
    );
    let found = kn::find_order_normal(&ctx, n).unwrap().unwrap();
    assert!(kn::is_order_normal(&ctx, &found, n));
    assert!(kn::find_order_normal(&ctx, 7).is_err());
}
