//! Root configurations and their arithmetic invariants.
//!
//! A [`RootConfig`] holds the strictly increasing integers
//! `a_1 < ... < a_n` defining `chi(x) = (x-a_1)...(x-a_n)` and
//! `R = Z[x]/(chi)`. This module computes the difference-product
//! invariants `Delta_S`, `Delta_l`, `Delta`, the residue count `A(p)`,
//! membership in the evaluation image `phi(R)` and in the overring `R'`,
//! and the unit group of `R`.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime_u64, rho};
use crate::error::Error;
use crate::Result;

/// Strictly increasing distinct integers `a_1 < a_2 < ... < a_n`, n >= 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootConfig {
    roots: Vec<BigInt>,
}

impl RootConfig {
    pub fn new(roots: Vec<BigInt>) -> Result<Self> {
        if roots.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 roots, got {}",
                roots.len()
            )));
        }
        for w in roots.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidInput(format!(
                    "roots must be strictly increasing, saw {} before {}",
                    w[0], w[1]
                )));
            }
        }
        debug_assert_eq!(
            roots.iter().collect::<std::collections::HashSet<_>>().len(),
            roots.len(),
            "strict increase implies distinctness"
        );
        Ok(RootConfig { roots })
    }

    pub fn from_i64(roots: &[i64]) -> Result<Self> {
        RootConfig::new(roots.iter().map(|&r| BigInt::from(r)).collect())
    }

    pub fn n(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[BigInt] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &BigInt {
        &self.roots[i]
    }

    /// `a_j - a_i` for `i < j`; always positive.
    pub fn diff(&self, i: usize, j: usize) -> BigInt {
        debug_assert!(i < j);
        &self.roots[j] - &self.roots[i]
    }

    /// `a_n - a_1`.
    pub fn span(&self) -> BigInt {
        &self.roots[self.n() - 1] - &self.roots[0]
    }

    /// All pairwise differences `a_j - a_i`, `i < j`, in row-major order.
    pub fn differences(&self) -> Vec<BigInt> {
        let n = self.n();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(self.diff(i, j));
            }
        }
        out
    }

    /// Shift every root by `c`; an isomorphism of the underlying ring.
    pub fn translated(&self, c: &BigInt) -> RootConfig {
        RootConfig {
            roots: self.roots.iter().map(|r| r + c).collect(),
        }
    }
}

impl std::fmt::Display for RootConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.roots.iter().join(","))
    }
}

/// The invariants `Delta_1 | Delta_2 | ... | Delta_{n-1} = Delta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaProfile {
    /// `Delta = prod_{i<j} (a_j - a_i)`, positive.
    pub delta: BigUint,
    /// `deltas[l-1] = Delta_l` for `1 <= l <= n-1`, each positive.
    pub deltas: Vec<BigUint>,
}

impl DeltaProfile {
    /// `Delta_l`, 1-indexed as in the defining gcd.
    pub fn delta_l(&self, l: usize) -> &BigUint {
        &self.deltas[l - 1]
    }
}

/// Sub-Vandermonde product `Delta_S = prod_{i<j in S} (a_j - a_i)` for a
/// subset `S` of root indices; positive because the roots increase.
pub fn delta_subset(cfg: &RootConfig, subset: &[usize]) -> BigUint {
    let mut acc = BigInt::one();
    for (pos, &i) in subset.iter().enumerate() {
        for &j in &subset[pos + 1..] {
            acc *= cfg.diff(i.min(j), i.max(j));
        }
    }
    debug_assert!(acc.is_positive());
    acc.to_biguint().expect("positive product")
}

/// Computes `Delta` and all `Delta_l = gcd_{|S| = l+1} Delta_S`.
///
/// Subset enumeration with incremental gcd and early exit once the gcd
/// reaches 1; exact and cheap at desk scale (n stays small).
pub fn delta_profile(cfg: &RootConfig) -> DeltaProfile {
    let n = cfg.n();
    let mut deltas = Vec::with_capacity(n - 1);
    for l in 1..n {
        let mut g = BigUint::zero();
        for subset in (0..n).combinations(l + 1) {
            g = g.gcd(&delta_subset(cfg, &subset));
            if g.is_one() {
                break;
            }
        }
        deltas.push(g);
    }
    let delta = deltas[n - 2].clone();
    DeltaProfile { delta, deltas }
}

/// `A(p)`: the number of distinct residues of the roots modulo `p`,
/// equivalently the number of maximal ideals of `R` with residue field
/// of size `p`. Requires `p` prime.
pub fn residue_class_count(cfg: &RootConfig, p: u64) -> Result<usize> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let pb = BigInt::from(p);
    let mut residues: Vec<BigInt> = cfg.roots().iter().map(|a| a.mod_floor(&pb)).collect();
    residues.sort();
    residues.dedup();
    Ok(residues.len())
}

/// Test oracle for the equivalence `p | Delta_l  <=>  A(p) <= l`.
pub fn check_delta_ap_equivalence(cfg: &RootConfig, p: u64, l: usize) -> Result<bool> {
    if l < 1 || l > cfg.n() - 1 {
        return Err(Error::InvalidInput(format!(
            "l must be in 1..={}, got {l}",
            cfg.n() - 1
        )));
    }
    let profile = delta_profile(cfg);
    let divides = (profile.delta_l(l) % BigUint::from(p)).is_zero();
    let ap = residue_class_count(cfg, p)?;
    Ok(divides == (ap <= l))
}

/// Whether some `f in Z[x]` takes the prescribed values at the roots,
/// i.e. whether the tuple lies in the evaluation image `phi(R)`.
///
/// Decision procedure: the tuple is interpolated by an integer polynomial
/// iff every leading Newton divided difference over the nodes is an
/// integer (reducing any integer witness mod `chi` leaves an integer
/// polynomial of degree < n, and divided differences of integer
/// polynomials at integer nodes are integers).
pub fn interpolation_member(cfg: &RootConfig, values: &[BigInt]) -> Result<bool> {
    let n = cfg.n();
    if values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: values.len(),
        });
    }
    let mut level: Vec<BigRational> = values
        .iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect();
    for k in 1..n {
        for i in 0..(n - k) {
            let denom = BigRational::from_integer(cfg.diff(i, i + k));
            level[i] = (&level[i + 1] - &level[i]) / denom;
        }
        level.truncate(n - k);
        if !level[0].is_integer() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership in the overring
/// `R' = { b in Z^n : (a_j - a_i) | (b_j - b_i) for all i < j }`.
pub fn rprime_member(cfg: &RootConfig, values: &[BigInt]) -> Result<bool> {
    let n = cfg.n();
    if values.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: values.len(),
        });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !((&values[j] - &values[i]) % cfg.diff(i, j)).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A vector of signs in `{+1, -1}^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector {
    entries: Vec<i8>,
}

impl SignVector {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidInput("sign entries must be +1 or -1".into()));
        }
        Ok(SignVector { entries })
    }

    /// Signs from a bitmask; bit `i` set means entry `i` is `-1`.
    pub fn from_mask(mask: u32, n: usize) -> Self {
        SignVector {
            entries: (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.entries[i]
    }

    pub fn negated(&self) -> SignVector {
        SignVector {
            entries: self.entries.iter().map(|&e| -e).collect(),
        }
    }

    pub fn componentwise_product(&self, other: &SignVector) -> SignVector {
        debug_assert_eq!(self.len(), other.len());
        SignVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a * b)
                .collect(),
        }
    }

    /// Indices carrying `-1` (the set `J` of the fixed-point bound).
    pub fn negative_indices(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| (e == -1).then_some(i))
            .collect()
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.entries.iter().map(|&e| BigInt::from(e)).collect()
    }
}

/// The unit group `R^x` under the identification of `R` with `phi(R)`:
/// all sign vectors interpolated by an integer polynomial.
///
/// Returned in mask order (all `+1` first), deterministic.
pub fn unit_group(cfg: &RootConfig) -> Vec<SignVector> {
    let n = cfg.n();
    let mut out = Vec::new();
    for mask in 0..(1u32 << n) {
        let sv = SignVector::from_mask(mask, n);
        let member = interpolation_member(cfg, &sv.to_bigints()).expect("length matches");
        if member {
            out.push(sv);
        }
    }
    out
}

/// Every prime dividing `Delta_l` read off a root configuration without
/// factoring anything larger than the pairwise differences.
pub fn delta_l_divides_rho_check(cfg: &RootConfig) -> bool {
    let profile = delta_profile(cfg);
    for l in 1..cfg.n() {
        let r = rho(l as u32).expect("l >= 1");
        if !(profile.delta_l(l) % r).is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(roots: &[i64]) -> RootConfig {
        RootConfig::from_i64(roots).unwrap()
    }

    #[test]
    fn constructor_validates() {
        assert!(RootConfig::from_i64(&[0]).is_err());
        assert!(RootConfig::from_i64(&[3, 1]).is_err());
        assert!(RootConfig::from_i64(&[1, 1]).is_err());
        assert!(RootConfig::from_i64(&[-5, 0, 7]).is_ok());
    }

    #[test]
    fn delta_profile_examples() {
        // direct evaluation of the defining products and gcds
        let p = delta_profile(&cfg(&[0, 2, 6]));
        assert_eq!(p.delta, BigUint::from(48u32));
        assert_eq!(*p.delta_l(1), BigUint::from(2u32)); // gcd(2, 4, 6)
        assert_eq!(*p.delta_l(2), BigUint::from(48u32));

        let p = delta_profile(&cfg(&[0, 1, 2, 4]));
        assert_eq!(*p.delta_l(1), BigUint::one());
        assert_eq!(*p.delta_l(2), BigUint::from(2u32)); // gcd(2, 12, 16, 6)
        assert_eq!(*p.delta_l(3), BigUint::from(48u32));

        let p = delta_profile(&cfg(&[0, 1]));
        assert_eq!(p.delta, BigUint::one());
        assert_eq!(*p.delta_l(1), BigUint::one());
    }

    #[test]
    fn delta_chain_divides() {
        for roots in [
            vec![0i64, 2, 6],
            vec![0, 1, 2, 4],
            vec![-7, 0, 5, 12, 30],
            vec![0, 6, 12, 18],
        ] {
            let p = delta_profile(&cfg(&roots));
            for w in p.deltas.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "Delta_l | Delta_l+1 in {roots:?}");
            }
        }
    }

    #[test]
    fn rho_divides_delta_l() {
        for roots in [
            vec![0i64, 2, 6],
            vec![3, 14, 15, 92, 653],
            vec![-100, -3, 0, 41],
        ] {
            assert!(delta_l_divides_rho_check(&cfg(&roots)));
        }
    }

    #[test]
    fn residue_counts() {
        let c = cfg(&[0, 2, 6]);
        assert_eq!(residue_class_count(&c, 2).unwrap(), 1);
        assert_eq!(residue_class_count(&c, 3).unwrap(), 2);
        assert_eq!(residue_class_count(&cfg(&[0, 1, 2]), 5).unwrap(), 3);
        assert!(matches!(
            residue_class_count(&c, 4),
            Err(Error::NotPrime(4))
        ));
    }

    #[test]
    fn delta_ap_equivalence_examples() {
        let c = cfg(&[0, 2, 6]);
        assert!(check_delta_ap_equivalence(&c, 2, 1).unwrap());
        assert!(check_delta_ap_equivalence(&c, 3, 1).unwrap());
        assert!(check_delta_ap_equivalence(&cfg(&[0, 1]), 7, 1).unwrap());
    }

    #[test]
    fn delta_ap_equivalence_sweep() {
        let configs = [
            vec![0i64, 2, 6],
            vec![0, 1, 2, 4],
            vec![-30, 0, 30, 60, 90],
            vec![0, 4, 8, 20],
        ];
        for roots in configs {
            let c = cfg(&roots);
            for p in crate::arith::primes_up_to(100) {
                for l in 1..c.n() {
                    assert!(
                        check_delta_ap_equivalence(&c, p, l).unwrap(),
                        "failed at roots {roots:?}, p = {p}, l = {l}"
                    );
                }
            }
        }
    }

    #[test]
    fn interpolation_examples() {
        let c = cfg(&[0, 2, 4]);
        // no integer polynomial takes these values
        let vals: Vec<BigInt> = [0, 2, 8].iter().map(|&v| BigInt::from(v)).collect();
        assert!(!interpolation_member(&c, &vals).unwrap());
        // ... but the pairwise congruences all hold
        assert!(rprime_member(&c, &vals).unwrap());

        let ones: Vec<BigInt> = vec![BigInt::one(); 3];
        assert!(interpolation_member(&c, &ones).unwrap());

        // n = 2: membership is exactly the single congruence
        let c2 = cfg(&[0, 5]);
        let vals: Vec<BigInt> = [3, 13].iter().map(|&v| BigInt::from(v)).collect();
        assert!(interpolation_member(&c2, &vals).unwrap()); // f = 3 + 2x
    }

    #[test]
    fn rprime_examples() {
        let c = cfg(&[0, 2, 4]);
        let vals: Vec<BigInt> = [0, 1, 0].iter().map(|&v| BigInt::from(v)).collect();
        assert!(!rprime_member(&c, &vals).unwrap());
        let constant: Vec<BigInt> = vec![BigInt::from(9); 3];
        assert!(rprime_member(&c, &constant).unwrap());
    }

    /// Independent oracle: solve the Vandermonde system over Q and test
    /// whether the unique interpolant of degree < n has integer
    /// coefficients (equivalent to phi(R)-membership since chi is monic).
    fn interpolant_has_integer_coeffs(c: &RootConfig, values: &[BigInt]) -> bool {
        let n = c.n();
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..n)
                    .map(|k| BigRational::from_integer(c.root(i).pow(k as u32)))
                    .collect();
                row.push(BigRational::from_integer(values[i].clone()));
                row
            })
            .collect();
        // Gaussian elimination
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !m[r][col].is_zero())
                .expect("Vandermonde is invertible");
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for k in col..=n {
                m[col][k] = &m[col][k] / &p;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=n {
                        m[r][k] = &m[r][k] - &f * &m[col][k];
                    }
                }
            }
        }
        (0..n).all(|r| m[r][n].is_integer())
    }

    #[test]
    fn interpolation_agrees_with_vandermonde_oracle() {
        let configs = [cfg(&[0, 2, 4]), cfg(&[0, 1, 3]), cfg(&[-2, 0, 3, 7])];
        for c in &configs {
            for tuple in (0..c.n()).map(|_| -3i64..=3).multi_cartesian_product() {
                let vals: Vec<BigInt> = tuple.iter().map(|&v| BigInt::from(v)).collect();
                assert_eq!(
                    interpolation_member(c, &vals).unwrap(),
                    interpolant_has_integer_coeffs(c, &vals),
                    "mismatch at {c} values {tuple:?}"
                );
            }
        }
    }

    #[test]
    fn interpolation_implies_rprime() {
        let c = cfg(&[0, 3, 7]);
        for v0 in -4i64..=4 {
            for v1 in -4i64..=4 {
                for v2 in -4i64..=4 {
                    let vals: Vec<BigInt> =
                        [v0, v1, v2].iter().map(|&v| BigInt::from(v)).collect();
                    if interpolation_member(&c, &vals).unwrap() {
                        assert!(rprime_member(&c, &vals).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn n2_membership_is_congruence() {
        let c = cfg(&[-3, 4]);
        for v0 in -10i64..=10 {
            for v1 in -10i64..=10 {
                let vals: Vec<BigInt> = vec![BigInt::from(v0), BigInt::from(v1)];
                assert_eq!(
                    interpolation_member(&c, &vals).unwrap(),
                    rprime_member(&c, &vals).unwrap()
                );
            }
        }
    }

    #[test]
    fn unit_group_generic_and_exceptional() {
        // span >= 4: only the global signs
        let u = unit_group(&cfg(&[0, 2, 5]));
        assert_eq!(u.len(), 2);
        assert_eq!(u[0].entries(), &[1, 1, 1]);
        assert_eq!(u[1].entries(), &[-1, -1, -1]);

        // span 2, n = 3: every sign vector
        assert_eq!(unit_group(&cfg(&[0, 1, 2])).len(), 8);

        // span 3, n = 4: first and last sign agree
        let u = unit_group(&cfg(&[0, 1, 2, 3]));
        assert_eq!(u.len(), 8);
        for sv in &u {
            assert_eq!(sv.sign(0), sv.sign(3));
        }
    }

    #[test]
    fn unit_group_closure() {
        let c = cfg(&[0, 1, 3]);
        let u = unit_group(&c);
        assert!(u.iter().any(|s| s.entries().iter().all(|&e| e == 1)));
        for a in &u {
            assert!(u.contains(&a.negated()));
            for b in &u {
                assert!(u.contains(&a.componentwise_product(b)));
            }
        }
    }

    #[test]
    fn translation_preserves_profile() {
        let c = cfg(&[0, 4, 9]);
        let shifted = c.translated(&BigInt::from(-17));
        assert_eq!(delta_profile(&c), delta_profile(&shifted));
    }
}
