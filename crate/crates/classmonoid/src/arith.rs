//! Exact integer utilities: deterministic primality, trial-division
//! factorization, Euler's totient, factorial products and the universal
//! divisibility of difference products.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

use crate::error::Error;
use crate::Result;

/// Largest trial divisor attempted before a factorization is declared
/// out of desk scale.
const TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin primality test, valid for all `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This base set is proven sufficient for every n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a machine integer by trial division.
pub fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize_u64 requires n >= 1");
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0u32;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorization of an arbitrary-precision integer.
///
/// Trial division up to 10^7, then a deterministic primality test on the
/// cofactor. Inputs whose factorization needs more work are rejected:
/// this crate only ever factors root differences and their gcds, which
/// stay desk-scale.
pub fn factorize(n: &BigUint) -> Result<BTreeMap<BigUint, u32>> {
    if n.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut rem = n.clone();
    let mut out = BTreeMap::new();
    let mut d = 2u64;
    while rem > BigUint::one() {
        if d > TRIAL_DIVISION_LIMIT {
            break;
        }
        let db = BigUint::from(d);
        if (&db * &db) > rem {
            break;
        }
        if (&rem % &db).is_zero() {
            let mut e = 0u32;
            while (&rem % &db).is_zero() {
                rem /= &db;
                e += 1;
            }
            out.insert(db, e);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rem > BigUint::one() {
        match rem.to_u64() {
            Some(r) if is_prime_u64(r) => {
                *out.entry(rem).or_insert(0) += 1;
            }
            Some(_) => {
                return Err(Error::BeyondDeskScale(format!(
                    "cofactor {rem} resists trial division"
                )));
            }
            None => {
                return Err(Error::BeyondDeskScale(format!(
                    "cofactor {rem} exceeds 64 bits"
                )));
            }
        }
    }
    Ok(out)
}

/// Merge prime factorizations (multiplies the underlying integers).
pub fn merge_factorizations(
    parts: impl IntoIterator<Item = BTreeMap<BigUint, u32>>,
) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    for part in parts {
        for (p, e) in part {
            *out.entry(p).or_insert(0) += e;
        }
    }
    out
}

/// Euler's totient from a prime factorization.
pub fn totient_from_factors(factors: &BTreeMap<BigUint, u32>) -> BigUint {
    let mut phi = BigUint::one();
    for (p, &e) in factors {
        phi *= p - BigUint::one();
        phi *= p.pow(e - 1);
    }
    phi
}

/// Euler's totient, exact, by trial-division factorization.
pub fn totient(m: &BigUint) -> Result<BigUint> {
    if m.is_zero() {
        return Err(Error::InvalidInput("totient requires m >= 1".into()));
    }
    Ok(totient_from_factors(&factorize(m)?))
}

/// `rho(m) = prod_{1 <= i < j <= m+1} (j - i) = 1! 2! ... m!`,
/// the universal divisor of an (m+1)-point difference product.
pub fn rho(m: u32) -> Result<BigUint> {
    if m < 1 {
        return Err(Error::InvalidInput("rho requires m >= 1".into()));
    }
    let mut factorial = BigUint::one();
    let mut acc = BigUint::one();
    for k in 1..=m {
        factorial *= BigUint::from(k);
        acc *= &factorial;
    }
    Ok(acc)
}

/// Whether `prod_{i<j} (j - i)` divides `prod_{i<j} (values[j] - values[i])`.
///
/// Used as a test oracle: the divisibility holds for every integer tuple.
pub fn vandermonde_divisibility(values: &[BigInt]) -> Result<bool> {
    let m = values.len();
    if m < 2 {
        return Err(Error::InvalidInput(
            "vandermonde divisibility needs at least 2 values".into(),
        ));
    }
    let mut lhs = BigInt::one();
    let mut rhs = BigInt::one();
    for i in 0..m {
        for j in (i + 1)..m {
            lhs *= BigInt::from((j - i) as u64);
            rhs *= &values[j] - &values[i];
        }
    }
    Ok((rhs % lhs).is_zero())
}

/// Product of the first `k` primes.
pub fn primorial(k: u32) -> BigUint {
    let mut acc = BigUint::one();
    let mut found = 0u32;
    let mut candidate = 2u64;
    while found < k {
        if is_prime_u64(candidate) {
            acc *= BigUint::from(candidate);
            found += 1;
        }
        candidate += 1;
    }
    acc
}

/// Primes up to `limit`, inclusive.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&p| is_prime_u64(p)).collect()
}

/// Positive gcd of two big integers, gcd(0, 0) = 0.
pub fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}
