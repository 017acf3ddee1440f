//! Integer plumbing: modular arithmetic, deterministic primality, factorization.
//!
//! Everything here is 64-bit with 128-bit intermediates.

use serde::{Deserialize, Serialize};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// `base^exp` as u128, or `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

// First twelve primes: a complete witness set for n < 3.3e24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct IntFactorization {
    pub factors: Vec<(u64, u32)>,
}

impl IntFactorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Trial division to 10^6, then Pollard rho (Brent) on the cofactor.
pub fn factor_u64(n: u64) -> IntFactorization {
    assert!(n >= 1, "factor_u64 requires n >= 1");
    let mut primes = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && d * d <= rest {
        while rest % d == 0 {
            primes.push(d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        split_into(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    IntFactorization { factors }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let mut c = 1;
    let d = loop {
        if let Some(d) = pollard_brent(n, c) {
            break d;
        }
        c += 1;
    };
    split_into(d, out);
    split_into(n / d, out);
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let block = 128u64;
    let mut y = 2u64;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..block.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += block;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Decomposes `q = p^s`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factor_u64(q);
    match f.factors.as_slice() {
        [(p, s)] => Some((*p, *s)),
        _ => None,
    }
}

pub fn mobius(n: u64) -> i32 {
    let f = factor_u64(n);
    if f.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factor_u64(n).factors {
        let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
        for &d in &ds {
            let mut pk = 1;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        ds = next;
    }
    ds.sort_unstable();
    ds
}

/// Multiplicative order of `a` modulo `n`; requires `gcd(a, n) = 1`.
pub fn order_mod(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    assert_eq!(gcd(a % n, n), 1, "order_mod requires coprime arguments");
    let mut ord = euler_phi(n);
    for (p, _) in factor_u64(ord).factors {
        while ord % p == 0 && pow_mod(a, ord / p, n) == 1 {
            ord /= p;
        }
    }
    ord
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_multiply_back() {
        assert_eq!(
            factor_u64(262143).factors,
            vec![(3, 3), (7, 1), (19, 1), (73, 1)]
        );
        assert_eq!(factor_u64(1023).factors, vec![(3, 1), (11, 1), (31, 1)]);
        assert!(factor_u64(1).factors.is_empty());
    }

    #[test]
    fn factors_large_semiprime() {
        // two primes above the trial-division limit
        let (a, b) = (1_000_000_007u64, 998_244_353u64);
        let f = factor_u64(a * b);
        assert_eq!(f.factors, vec![(b, 1), (a, 1)]);
        let n = (1u64 << 61) - 1;
        assert_eq!(factor_u64(n).factors, vec![(n, 1)]);
    }

    #[test]
    fn primality_edge_cases() {
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(4));
        assert!(is_prime(2) && is_prime(3) && is_prime(37));
        // strong pseudoprime to bases 2..=37 would be needed to fool it; Carmichael numbers don't
        assert!(!is_prime(561) && !is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(17), Some((17, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn small_number_theory() {
        assert_eq!(order_mod(2, 5), 4);
        assert_eq!(order_mod(5, 6), 2);
        assert_eq!(order_mod(3, 1), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn factorization_matches_trial_division() {
        for n in 1..3000u64 {
            let f = factor_u64(n);
            assert_eq!(f.product(), n as u128);
            assert!(f.primes().all(is_prime));
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }
}
