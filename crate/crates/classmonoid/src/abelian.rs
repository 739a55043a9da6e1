//! Finite abelian group structure: invariant factors, quotients of
//! products of cyclic groups by explicit subgroups (via Smith normal
//! form of the relation matrix), cyclic decomposition of unit groups
//! `(Z/m)^x` with discrete logarithms, and structure recovery from a
//! raw Cayley table.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::collections::HashMap;

use crate::arith::factorize_u64;
use crate::error::Error;
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;
use crate::Result;

/// Invariant factor presentation `Z/d_1 x Z/d_2 x ...` with
/// `d_1 | d_2 | ...`, every factor at least 2; the empty sequence is the
/// trivial group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianStructure {
    invariant_factors: Vec<BigUint>,
}

impl AbelianStructure {
    pub fn trivial() -> Self {
        AbelianStructure {
            invariant_factors: Vec::new(),
        }
    }

    pub fn new(invariant_factors: Vec<BigUint>) -> Result<Self> {
        for w in invariant_factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::InvalidInput(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if invariant_factors.iter().any(|d| *d < BigUint::from(2u32)) {
            return Err(Error::InvalidInput(
                "invariant factors must be at least 2".into(),
            ));
        }
        Ok(AbelianStructure { invariant_factors })
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    pub fn order(&self) -> BigUint {
        self.invariant_factors.iter().product::<BigUint>().max(BigUint::one())
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn from_u64(factors: &[u64]) -> Result<Self> {
        AbelianStructure::new(factors.iter().map(|&d| BigUint::from(d)).collect())
    }
}

impl std::fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Structure of `(prod Z/c_i) / <generators>`.
///
/// The quotient is the cokernel of the relation matrix whose columns are
/// `c_i e_i` plus the generator vectors; its Smith normal form diagonal,
/// with units dropped, is the invariant factor list.
pub fn quotient_structure(
    cyclic_orders: &[BigUint],
    subgroup_generators: &[Vec<BigUint>],
) -> Result<AbelianStructure> {
    let k = cyclic_orders.len();
    if k == 0 {
        return Ok(AbelianStructure::trivial());
    }
    for g in subgroup_generators {
        if g.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                got: g.len(),
            });
        }
    }
    let mut m = IntMatrix::zero(k, k + subgroup_generators.len());
    for i in 0..k {
        m[(i, i)] = BigInt::from(cyclic_orders[i].clone());
    }
    for (j, g) in subgroup_generators.iter().enumerate() {
        for i in 0..k {
            m[(i, k + j)] = BigInt::from(g[i].clone());
        }
    }
    let snf = smith_normal_form(&m);
    let mut factors = Vec::new();
    for d in snf.diagonal() {
        let d = d.to_biguint().ok_or_else(|| {
            Error::Inexact("relation matrix of full rank yields positive diagonal".into())
        })?;
        if d > BigUint::one() {
            factors.push(d);
        }
    }
    AbelianStructure::new(factors)
}

/// One cyclic factor of a unit group `(Z/m)^x`: a generator (lifted to a
/// residue mod `m`) of known order.
#[derive(Debug, Clone)]
pub struct CyclicFactor {
    pub order: u64,
    pub generator: u64,
}

/// Cyclic decomposition of `(Z/m)^x` by CRT over the prime powers of
/// `m`: one factor per odd prime power, `(Z/4)^x = Z/2`, and
/// `(Z/2^k)^x = Z/2 x Z/2^{k-2}` generated by `-1` and `5` for k >= 3.
pub fn unit_group_factors(m: u64) -> Result<Vec<CyclicFactor>> {
    if m == 0 {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let mut factors = Vec::new();
    if m <= 2 {
        return Ok(factors);
    }
    for (p, e) in factorize_u64(m) {
        let pe = p.pow(e);
        let cofactor = m / pe;
        // lift x mod pe to a residue mod m that is 1 mod the cofactor
        let lift = |x: u64| -> Result<u64> {
            Ok(crt_pair(x, pe, 1, cofactor)?)
        };
        if p == 2 {
            match e {
                1 => {}
                2 => factors.push(CyclicFactor {
                    order: 2,
                    generator: lift(3)?,
                }),
                _ => {
                    factors.push(CyclicFactor {
                        order: 2,
                        generator: lift(pe - 1)?,
                    });
                    factors.push(CyclicFactor {
                        order: pe / 4,
                        generator: lift(5)?,
                    });
                }
            }
        } else {
            let g = primitive_root_mod_prime_power(p, e)?;
            factors.push(CyclicFactor {
                order: (p - 1) * p.pow(e - 1),
                generator: lift(g)?,
            });
        }
    }
    Ok(factors)
}

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

fn inv_mod(a: u64, m: u64) -> Result<u64> {
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

/// Solves `x = a mod m`, `x = b mod n` for coprime `m`, `n`.
fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> Result<u64> {
    if n == 1 {
        return Ok(a % m);
    }
    if m == 1 {
        return Ok(b % n);
    }
    let m_inv = inv_mod(m % n, n)?;
    let diff = ((b as i128 - (a % n) as i128).rem_euclid(n as i128)) as u64;
    let t = mulmod(diff, m_inv, n);
    Ok(a + m * t)
}

fn primitive_root_mod_prime_power(p: u64, e: u32) -> Result<u64> {
    let phi_p = p - 1;
    let prime_factors: Vec<u64> = factorize_u64(phi_p).into_iter().map(|(q, _)| q).collect();
    let mut g = 0;
    for candidate in 2..p {
        if prime_factors
            .iter()
            .all(|&q| powmod(candidate, phi_p / q, p) != 1)
        {
            g = candidate;
            break;
        }
    }
    if g == 0 {
        return Err(Error::Inexact("no primitive root found".into()));
    }
    if e == 1 {
        return Ok(g);
    }
    // g lifts to a primitive root mod p^e unless g^(p-1) = 1 mod p^2
    let p2 = p * p;
    if powmod(g, p - 1, p2) == 1 {
        g += p;
    }
    Ok(g)
}

/// Baby-step giant-step discrete log of `x` in the cyclic group generated
/// by `g` of order `d` modulo `m`.
fn bsgs_dlog(g: u64, d: u64, x: u64, m: u64) -> Result<u64> {
    let step = (d as f64).sqrt().ceil() as u64 + 1;
    let mut baby: HashMap<u64, u64> = HashMap::with_capacity(step as usize);
    let mut cur = 1u64 % m;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = mulmod(cur, g, m);
    }
    let giant = inv_mod(powmod(g, step, m), m)?;
    let mut y = x % m;
    for i in 0..=step {
        if let Some(&j) = baby.get(&y) {
            return Ok((i * step + j) % d);
        }
        y = mulmod(y, giant, m);
    }
    Err(Error::InvalidInput(format!(
        "{x} is not a power of the generator modulo {m}"
    )))
}

/// Coordinates of a unit `x` in the cyclic decomposition of `(Z/m)^x`.
pub fn unit_dlog(m: u64, factors: &[CyclicFactor], x: u64) -> Result<Vec<BigUint>> {
    let x = x % m;
    if m == 0 || num_integer::gcd(x, m) != 1 {
        return Err(Error::InvalidInput(format!(
            "{x} is not a unit modulo {m}"
        )));
    }
    let mut coords = Vec::with_capacity(factors.len());
    let mut idx = 0usize;
    for (p, e) in factorize_u64(m) {
        let pe = p.pow(e);
        let xe = x % pe;
        if p == 2 {
            match e {
                1 => {}
                2 => {
                    coords.push(BigUint::from(if xe == 3 { 1u64 } else { 0 }));
                    idx += 1;
                }
                _ => {
                    let sign = if xe % 4 == 3 { 1u64 } else { 0 };
                    coords.push(BigUint::from(sign));
                    let y = if sign == 1 { pe - xe } else { xe };
                    let order = pe / 4;
                    coords.push(BigUint::from(bsgs_dlog(5 % pe, order, y, pe)?));
                    idx += 2;
                }
            }
        } else {
            let f = &factors[idx];
            let g_mod_pe = f.generator % pe;
            coords.push(BigUint::from(bsgs_dlog(g_mod_pe, f.order, xe, pe)?));
            idx += 1;
        }
    }
    Ok(coords)
}

/// Invariant factors of a finite abelian group given by its Cayley
/// table: repeatedly split off a cyclic subgroup of maximal order (its
/// generator spans a direct summand) and recurse on the quotient.
pub fn structure_from_cayley_table(table: &[Vec<usize>], identity: usize) -> AbelianStructure {
    let k = table.len();
    if k <= 1 {
        return AbelianStructure::trivial();
    }
    let order_of = |g: usize| -> u64 {
        let mut x = g;
        let mut ord = 1u64;
        while x != identity {
            x = table[x][g];
            ord += 1;
        }
        ord
    };
    let (gen, max_order) = (0..k)
        .map(|g| (g, order_of(g)))
        .max_by_key(|&(_, o)| o)
        .expect("nonempty group");
    // cosets of <gen>
    let mut cyclic = Vec::new();
    let mut x = identity;
    loop {
        cyclic.push(x);
        x = table[x][gen];
        if x == identity {
            break;
        }
    }
    let mut coset_of = vec![usize::MAX; k];
    let mut reps = Vec::new();
    for e in 0..k {
        if coset_of[e] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(e);
        for &h in &cyclic {
            coset_of[table[e][h]] = c;
        }
    }
    let q = reps.len();
    debug_assert_eq!(q as u64 * max_order, k as u64);
    let mut quotient = vec![vec![0usize; q]; q];
    for a in 0..q {
        for b in 0..q {
            quotient[a][b] = coset_of[table[reps[a]][reps[b]]];
        }
    }
    let rest = structure_from_cayley_table(&quotient, coset_of[identity]);
    let mut factors = rest.invariant_factors;
    factors.push(BigUint::from(max_order));
    AbelianStructure { invariant_factors: factors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bu(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn quotient_examples() {
        // Z/8 with no relations
        let s = quotient_structure(&[bu(8)], &[]).unwrap();
        assert_eq!(s.invariant_factors(), &[bu(8)]);

        // Klein four modulo the diagonal
        let s = quotient_structure(&[bu(2), bu(2)], &[vec![bu(1), bu(1)]]).unwrap();
        assert_eq!(s.invariant_factors(), &[bu(2)]);

        // sorting into a divisibility chain
        let s = quotient_structure(&[bu(4), bu(2)], &[]).unwrap();
        assert_eq!(s.invariant_factors(), &[bu(2), bu(4)]);
    }

    #[test]
    fn quotient_order_consistency() {
        // |(Z/6 x Z/4) / <(3, 2)>|: the generator has order 2
        let s = quotient_structure(&[bu(6), bu(4)], &[vec![bu(3), bu(2)]]).unwrap();
        assert_eq!(s.order(), bu(12));
    }

    #[test]
    fn unit_groups_small() {
        // (Z/8)^x = Z/2 x Z/2
        let f = unit_group_factors(8).unwrap();
        let mut orders: Vec<u64> = f.iter().map(|c| c.order).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 2]);

        // (Z/15)^x = Z/2 x Z/4
        let f = unit_group_factors(15).unwrap();
        let mut orders: Vec<u64> = f.iter().map(|c| c.order).collect();
        orders.sort();
        assert_eq!(orders, vec![2, 4]);

        assert!(unit_group_factors(1).unwrap().is_empty());
        assert!(unit_group_factors(2).unwrap().is_empty());
    }

    #[test]
    fn unit_group_generators_have_stated_order() {
        for m in [3u64, 4, 5, 8, 9, 12, 15, 16, 24, 36, 97, 100] {
            let factors = unit_group_factors(m).unwrap();
            let phi: u64 = factors.iter().map(|f| f.order).product();
            let expected = crate::arith::totient(&BigUint::from(m))
                .unwrap()
                .to_u64()
                .unwrap();
            assert_eq!(phi, expected, "orders multiply to phi({m})");
            for f in &factors {
                assert_eq!(powmod(f.generator, f.order, m), 1);
                for (q, _) in factorize_u64(f.order) {
                    assert_ne!(
                        powmod(f.generator, f.order / q, m),
                        1,
                        "generator order is exact mod {m}"
                    );
                }
            }
        }
    }

    #[test]
    fn dlog_roundtrip() {
        for m in [5u64, 8, 15, 16, 21, 40, 100] {
            let factors = unit_group_factors(m).unwrap();
            for x in 1..m {
                if num_integer::gcd(x, m) != 1 {
                    continue;
                }
                let coords = unit_dlog(m, &factors, x).unwrap();
                // rebuild x from the coordinates
                let mut y = 1u64;
                for (f, c) in factors.iter().zip(&coords) {
                    y = mulmod(y, powmod(f.generator, c.to_u64().unwrap(), m), m);
                }
                assert_eq!(y, x, "dlog roundtrip mod {m}");
            }
        }
    }

    #[test]
    fn structure_from_tables() {
        // cyclic of order 4: indices with table[i][j] = (i + j) mod 4
        let table: Vec<Vec<usize>> = (0..4)
            .map(|i| (0..4).map(|j| (i + j) % 4).collect())
            .collect();
        let s = structure_from_cayley_table(&table, 0);
        assert_eq!(s.invariant_factors(), &[bu(4)]);

        // Klein four
        let table: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        let s = structure_from_cayley_table(&table, 0);
        assert_eq!(s.invariant_factors(), &[bu(2), bu(2)]);

        // Z/2 x Z/4 as pairs (a, b), index = a * 4 + b
        let idx = |a: usize, b: usize| a * 4 + b;
        let mut table = vec![vec![0usize; 8]; 8];
        for a1 in 0..2 {
            for b1 in 0..4 {
                for a2 in 0..2 {
                    for b2 in 0..4 {
                        table[idx(a1, b1)][idx(a2, b2)] = idx((a1 + a2) % 2, (b1 + b2) % 4);
                    }
                }
            }
        }
        let s = structure_from_cayley_table(&table, 0);
        assert_eq!(s.invariant_factors(), &[bu(2), bu(4)]);

        // trivial group
        let s = structure_from_cayley_table(&[vec![0]], 0);
        assert!(s.is_trivial());
    }
}
