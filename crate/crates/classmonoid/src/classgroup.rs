//! Closed-form order and structure of the ideal class group.
//!
//! The order formula: for span `a_n - a_1 >= 4`,
//! `|Cl(R)| = phi(Delta)/2^{n-1} * prod_{l<=n-2} phi(Delta_l)/Delta_l`,
//! and `|Cl(R)| = 1` below that span. The structure theorems: for n = 2
//! the quotient `(Z/(b-a))^x / {+-1}`; for n = 3 the quotient `G / HK`
//! of `G = (Z/(b-a)(c-a))^x x (Z/(c-b)(c-a))^x` by the four sign pairs
//! `H` and the divisibility-defined subgroup `K`, with a simpler
//! three-factor quotient when `Delta_1 = 1`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

use crate::abelian::{
    quotient_structure, unit_dlog, unit_group_factors, AbelianStructure, CyclicFactor,
};
use crate::arith::{factorize, merge_factorizations, totient_from_factors};
use crate::error::Error;
use crate::roots::{delta_profile, RootConfig};
use crate::Result;

/// Prime factorization of `Delta` assembled from the pairwise
/// differences, so nothing larger than a single difference is ever
/// trial-divided.
pub fn delta_factorization(cfg: &RootConfig) -> Result<BTreeMap<BigUint, u32>> {
    let parts: Result<Vec<_>> = cfg
        .differences()
        .iter()
        .map(|d| factorize(&d.to_biguint().expect("differences are positive")))
        .collect();
    Ok(merge_factorizations(parts?))
}

/// Exponent of `p` in `m` by repeated division.
fn valuation(m: &BigUint, p: &BigUint) -> u32 {
    let mut m = m.clone();
    let mut e = 0;
    while (&m % p).is_zero() {
        m /= p;
        e += 1;
    }
    e
}

/// Euler's totient of a divisor of `Delta`, factored against the primes
/// of `Delta` (every prime of `Delta_l` divides some difference).
fn totient_of_delta_divisor(m: &BigUint, delta_primes: &BTreeMap<BigUint, u32>) -> BigUint {
    let factors: BTreeMap<BigUint, u32> = delta_primes
        .keys()
        .filter_map(|p| {
            let e = valuation(m, p);
            (e > 0).then(|| (p.clone(), e))
        })
        .collect();
    totient_from_factors(&factors)
}

/// `|Cl(R)|` by the closed formula. Every division is checked exact.
pub fn cl_order_formula(cfg: &RootConfig) -> Result<BigUint> {
    let n = cfg.n();
    if cfg.span() < BigInt::from(4) {
        return Ok(BigUint::one());
    }
    let profile = delta_profile(cfg);
    let delta_primes = delta_factorization(cfg)?;
    let mut numerator = totient_from_factors(&delta_primes);
    let mut denominator = BigUint::one() << (n - 1);
    for l in 1..=(n - 2) {
        let dl = profile.delta_l(l);
        numerator *= totient_of_delta_divisor(dl, &delta_primes);
        denominator *= dl;
    }
    let (q, r) = numerator.div_rem(&denominator);
    if !r.is_zero() {
        return Err(Error::Inexact(
            "class number formula divided inexactly".into(),
        ));
    }
    Ok(q)
}

fn modulus_u64(value: &BigInt, what: &str) -> Result<u64> {
    value.to_u64().ok_or_else(|| {
        Error::BeyondDeskScale(format!("{what} = {value} exceeds 64 bits"))
    })
}

/// Structure of `Cl(R)` for `n = 2`: trivial when `b - a <= 2`, else the
/// invariant factors of `(Z/(b-a))^x / {+-1}`.
pub fn cl_structure_n2(cfg: &RootConfig) -> Result<AbelianStructure> {
    if cfg.n() != 2 {
        return Err(Error::UnsupportedDegree {
            op: "cl_structure_n2",
            n: cfg.n(),
        });
    }
    let m = modulus_u64(&cfg.diff(0, 1), "b - a")?;
    if m <= 2 {
        return Ok(AbelianStructure::trivial());
    }
    let factors = unit_group_factors(m)?;
    let orders: Vec<BigUint> = factors.iter().map(|f| BigUint::from(f.order)).collect();
    let minus_one = unit_dlog(m, &factors, m - 1)?;
    quotient_structure(&orders, &[minus_one])
}

/// The data defining the cubic kernel `N = HK` inside
/// `G = (Z/(b-a)(c-a))^x x (Z/(c-b)(c-a))^x`.
#[derive(Debug, Clone)]
pub struct CubicKernel {
    pub modulus_u: u64,
    pub modulus_v: u64,
    /// The four sign pairs.
    pub h: Vec<(u64, u64)>,
    /// All elements of `K`, enumerated from its divisibility conditions.
    pub k: Vec<(u64, u64)>,
}

/// Enumerates `H` and `K` for a cubic configuration with span >= 4.
///
/// `K` consists of pairs `(u, v)` with `b-a | u-1`, `c-b | v-1` and
/// `c-a | u(v-1)/(c-b) - (u-1)/(b-a)`; writing `u = 1 + r(b-a)` and
/// `v = 1 + s(c-b)` the last condition pins `s = r / u mod (c-a)`, so one
/// pass over `r` enumerates `K` exactly.
pub fn cubic_kernel(cfg: &RootConfig) -> Result<CubicKernel> {
    if cfg.n() != 3 {
        return Err(Error::UnsupportedDegree {
            op: "cubic_kernel",
            n: cfg.n(),
        });
    }
    let ba = modulus_u64(&cfg.diff(0, 1), "b - a")?;
    let cb = modulus_u64(&cfg.diff(1, 2), "c - b")?;
    let ca = modulus_u64(&cfg.diff(0, 2), "c - a")?;
    let m1 = ba
        .checked_mul(ca)
        .ok_or_else(|| Error::BeyondDeskScale("(b-a)(c-a) exceeds 64 bits".into()))?;
    let m2 = cb
        .checked_mul(ca)
        .ok_or_else(|| Error::BeyondDeskScale("(c-b)(c-a) exceeds 64 bits".into()))?;
    let h = vec![
        (1 % m1, 1 % m2),
        (1 % m1, (m2 - 1) % m2),
        ((m1 - 1) % m1, 1 % m2),
        ((m1 - 1) % m1, (m2 - 1) % m2),
    ];
    let mut k = Vec::new();
    for r in 0..ca {
        let u = (1 + r as u128 * ba as u128 % m1 as u128) as u64 % m1;
        if num_integer::gcd(u, m1) != 1 {
            continue;
        }
        // s = r / u mod (c-a)
        let u_inv = inv_mod_u64(u % ca, ca)?;
        let s = (r as u128 * u_inv as u128 % ca as u128) as u64;
        let v = (1 + s as u128 * cb as u128 % m2 as u128) as u64 % m2;
        if num_integer::gcd(v, m2) != 1 {
            return Err(Error::Inexact(
                "kernel element has a non-unit second coordinate".into(),
            ));
        }
        k.push((u, v));
    }
    Ok(CubicKernel {
        modulus_u: m1,
        modulus_v: m2,
        h,
        k,
    })
}

fn inv_mod_u64(a: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::InvalidInput(format!(
            "{a} is not invertible modulo {m}"
        )));
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

fn pair_dlog(
    m1: u64,
    f1: &[CyclicFactor],
    m2: u64,
    f2: &[CyclicFactor],
    pair: (u64, u64),
) -> Result<Vec<BigUint>> {
    let mut coords = unit_dlog(m1, f1, pair.0)?;
    coords.extend(unit_dlog(m2, f2, pair.1)?);
    Ok(coords)
}

/// Structure of `Cl(R)` for `n = 3`: trivial when `c - a <= 3`, else the
/// invariant factors of `G / HK`.
pub fn cl_structure_n3(cfg: &RootConfig) -> Result<AbelianStructure> {
    if cfg.n() != 3 {
        return Err(Error::UnsupportedDegree {
            op: "cl_structure_n3",
            n: cfg.n(),
        });
    }
    if cfg.span() < BigInt::from(4) {
        return Ok(AbelianStructure::trivial());
    }
    let kernel = cubic_kernel(cfg)?;
    let f1 = unit_group_factors(kernel.modulus_u)?;
    let f2 = unit_group_factors(kernel.modulus_v)?;
    let mut orders: Vec<BigUint> = f1.iter().map(|f| BigUint::from(f.order)).collect();
    orders.extend(f2.iter().map(|f| BigUint::from(f.order)));
    let mut generators = Vec::new();
    for &pair in kernel.h.iter().chain(&kernel.k) {
        generators.push(pair_dlog(
            kernel.modulus_u,
            &f1,
            kernel.modulus_v,
            &f2,
            pair,
        )?);
    }
    quotient_structure(&orders, &generators)
}

/// The simplified cubic structure for `Delta_1 = 1`: the quotient of
/// `(Z/(b-a))^x x (Z/(c-b))^x x (Z/(c-a))^x` by the four sign triples
/// with positive product.
pub fn cl_structure_n3_coprime(cfg: &RootConfig) -> Result<AbelianStructure> {
    if cfg.n() != 3 {
        return Err(Error::UnsupportedDegree {
            op: "cl_structure_n3_coprime",
            n: cfg.n(),
        });
    }
    if cfg.span() < BigInt::from(4) {
        return Err(Error::InvalidInput(
            "simplified cubic structure requires span >= 4".into(),
        ));
    }
    let profile = delta_profile(cfg);
    if !profile.delta_l(1).is_one() {
        return Err(Error::InvalidInput(
            "simplified cubic structure requires Delta_1 = 1".into(),
        ));
    }
    let moduli = [
        modulus_u64(&cfg.diff(0, 1), "b - a")?,
        modulus_u64(&cfg.diff(1, 2), "c - b")?,
        modulus_u64(&cfg.diff(0, 2), "c - a")?,
    ];
    let factors: Vec<Vec<CyclicFactor>> = moduli
        .iter()
        .map(|&m| unit_group_factors(m))
        .collect::<Result<_>>()?;
    let orders: Vec<BigUint> = factors
        .iter()
        .flatten()
        .map(|f| BigUint::from(f.order))
        .collect();
    // H' is generated by (1, -1, -1) and (-1, 1, -1)
    let sign_triples = [[1i64, -1, -1], [-1, 1, -1]];
    let mut generators = Vec::new();
    for triple in sign_triples {
        let mut coords = Vec::new();
        for (idx, &m) in moduli.iter().enumerate() {
            let x = if triple[idx] == 1 { 1 % m } else { (m - 1) % m };
            coords.extend(unit_dlog(m, &factors[idx], x)?);
        }
        generators.push(coords);
    }
    quotient_structure(&orders, &generators)
}
