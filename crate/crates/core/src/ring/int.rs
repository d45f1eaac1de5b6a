//! Integer helpers: Bézout coefficients, primality with recorded witnesses,
//! and small-divisor enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Trial division is used up to this bound on the candidate divisor.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

const MILLER_RABIN_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Evidence for the primality of an integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum PrimalityEvidence {
    /// No divisor in `2..=bound`, and `bound^2 >= |n|`.
    TrialDivision { bound: u64 },
    /// Deterministic Miller-Rabin for `|n| < 2^64` with the listed bases.
    MillerRabin { bases: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primality {
    Prime(PrimalityEvidence),
    Composite { factor: BigInt },
    /// Not a prime candidate at all (|n| < 2).
    NotCandidate,
    /// Passed a probabilistic test only.
    Probable,
}

/// Bézout coefficients `(g, u, v)` with `u*a + v*b = g`, `g >= 0`.
///
/// Among all solutions the one with smallest `|u|` is returned (ties go to
/// the negative `u`), so results are reproducible across callers.
pub fn bezout(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    let (mut g, mut u, mut v) = (e.gcd, e.x, e.y);
    if g.is_negative() {
        g = -g;
        u = -u;
        v = -v;
    }
    if g.is_zero() {
        return (g, u, v);
    }
    // Solutions: u + t*(b/g), v - t*(a/g).
    let step_u = b / &g;
    let step_v = a / &g;
    if !step_u.is_zero() {
        let m = step_u.abs();
        let mut r = u.mod_floor(&m);
        let mut t = (&r - &u) / &step_u;
        let alt = &r - &m;
        if alt.abs() <= r.abs() {
            t = (&alt - &u) / &step_u;
            r = alt;
        }
        u = r;
        v = &v - &t * &step_v;
    }
    (g, u, v)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin(n: u64, bases: &[u64]) -> bool {
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in bases {
        let a = a % n;
        if a == 0 {
            continue;
        }
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Smallest prime factor of `n` found by trial division up to `limit`.
fn trial_factor(n: &BigInt, limit: u64) -> Option<BigInt> {
    let mut d = 2u64;
    while d <= limit {
        let dd = BigInt::from(d);
        if &(&dd * &dd) > n {
            return None;
        }
        if (n % &dd).is_zero() {
            return Some(dd);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    None
}

/// Decides primality of `|n|`.
pub fn primality(n: &BigInt) -> Primality {
    let n = n.abs();
    if n < BigInt::from(2) {
        return Primality::NotCandidate;
    }
    if let Some(f) = trial_factor(&n, TRIAL_DIVISION_LIMIT) {
        if f != n {
            return Primality::Composite { factor: f };
        }
    }
    let limit = BigInt::from(TRIAL_DIVISION_LIMIT);
    if &limit * &limit >= n {
        let bound = n.sqrt().to_u64().unwrap_or(TRIAL_DIVISION_LIMIT);
        return Primality::Prime(PrimalityEvidence::TrialDivision { bound });
    }
    match n.to_u64() {
        Some(small) => {
            if miller_rabin(small, &MILLER_RABIN_BASES) {
                Primality::Prime(PrimalityEvidence::MillerRabin {
                    bases: MILLER_RABIN_BASES.to_vec(),
                })
            } else {
                // Composite, but no factor below the trial bound.
                Primality::Composite { factor: n.clone() }
            }
        }
        None => Primality::Probable,
    }
}

/// Re-checks recorded primality evidence for `|n|`.
pub fn check_primality_evidence(n: &BigInt, evidence: &PrimalityEvidence) -> bool {
    let n = n.abs();
    if n < BigInt::from(2) {
        return false;
    }
    match evidence {
        PrimalityEvidence::TrialDivision { bound } => {
            let b = BigInt::from(*bound);
            if &(&b + 1u32) * &(&b + 1u32) <= n {
                return false;
            }
            trial_factor(&n, *bound).is_none_or(|f| f == n)
        }
        PrimalityEvidence::MillerRabin { bases } => match n.to_u64() {
            Some(small) => bases.as_slice() == MILLER_RABIN_BASES && miller_rabin(small, bases),
            None => false,
        },
    }
}

/// Exponent of the prime `p` in `n` (n nonzero), and the cofactor.
pub fn valuation(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut n = n.clone();
    let mut e = 0;
    if n.is_zero() || p.abs() <= BigInt::one() {
        return (0, n);
    }
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (e, n);
        }
        n = q;
        e += 1;
    }
}

/// All positive divisors of `|n|`, when `|n|` is small enough to factor by
/// trial division.
pub fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let limit = BigInt::from(TRIAL_DIVISION_LIMIT);
    if n > &limit * &limit {
        return None;
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    while n > BigInt::one() {
        let p = trial_factor(&n, TRIAL_DIVISION_LIMIT).unwrap_or_else(|| n.clone());
        let (e, rest) = valuation(&n, &p);
        factors.push((p, e));
        n = rest;
    }
    let mut divisors = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divisors.len() * (e as usize + 1));
        for d in &divisors {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divisors = next;
    }
    divisors.sort();
    Some(divisors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn bezout_textbook_values() {
        let (g, u, v) = bezout(&big(2), &big(3));
        assert_eq!((g, u.clone(), v.clone()), (big(1), big(-1), big(1)));
        let (g, u, v) = bezout(&big(11), &big(13));
        assert_eq!(g, big(1));
        assert_eq!(u * 11 + v * 13, big(1));
    }

    #[test]
    fn primality_small_and_large() {
        assert!(matches!(primality(&big(11)), Primality::Prime(_)));
        assert!(matches!(primality(&big(-7)), Primality::Prime(_)));
        assert!(matches!(primality(&big(1)), Primality::NotCandidate));
        assert_eq!(primality(&big(91)), Primality::Composite { factor: big(7) });
        // 2^61 - 1 is a Mersenne prime beyond the trial-division range.
        let m61 = big((1i64 << 61) - 1);
        match primality(&m61) {
            Primality::Prime(ev) => assert!(check_primality_evidence(&m61, &ev)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn evidence_rejects_composites() {
        let ev = PrimalityEvidence::TrialDivision { bound: 10 };
        assert!(check_primality_evidence(&big(97), &ev));
        assert!(!check_primality_evidence(&big(91), &ev));
        assert!(!check_primality_evidence(&big(1009), &ev));
    }

    #[test]
    fn divisors_of_twelve() {
        let d = positive_divisors(&big(-12)).unwrap();
        assert_eq!(d, [1, 2, 3, 4, 6, 12].map(big).to_vec());
    }
}
