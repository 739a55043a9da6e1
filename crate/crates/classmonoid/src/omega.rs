//! Upper-triangular canonical forms for integer matrices with split
//! characteristic polynomial, and the orbit counts built on them.
//!
//! `Omega` is the set of upper-triangular integer matrices with diagonal
//! `(a_1, ..., a_n)`; `Omega_0` is the fundamental domain with
//! `0 <= c_ij < a_j - a_i`. Every matrix with characteristic polynomial
//! `chi` triangularizes into `Omega`, every `Omega` matrix reduces to a
//! unique `Omega_0` representative under unipotent conjugation, and the
//! sign-diagonal group acts on the result. Orbits of that action are in
//! bijection with the ideal class monoid, which is what the counting
//! routines below enumerate.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashSet;

use crate::budget::Budget;
use crate::error::Error;
use crate::matrix::{primitive_extend, IntMatrix, Unimodular};
use crate::roots::{RootConfig, SignVector};
use crate::Result;

/// Upper-triangular matrix with diagonal `(a_1, ..., a_n)`, stored as its
/// strictly-upper entries in row-major order
/// `(c_12, c_13, ..., c_1n, c_23, ...)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OmegaMatrix {
    n: usize,
    upper: Vec<BigInt>,
}

/// Index of entry `(i, j)`, `i < j`, in the row-major strictly-upper list.
fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // entries before row i: (n-1) + (n-2) + ... + (n-i)
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl OmegaMatrix {
    pub fn new(cfg: &RootConfig, upper: Vec<BigInt>) -> Result<Self> {
        let n = cfg.n();
        let expected = n * (n - 1) / 2;
        if upper.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: upper.len(),
            });
        }
        Ok(OmegaMatrix { n, upper })
    }

    /// Extracts the upper-triangular data from a full matrix, verifying
    /// membership in `Omega` (diagonal equals the roots in order).
    pub fn from_int_matrix(m: &IntMatrix, cfg: &RootConfig) -> Result<Self> {
        let n = cfg.n();
        if !m.is_square() || m.n() != n {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        if !m.is_upper_triangular() {
            return Err(Error::InvalidInput("matrix is not upper triangular".into()));
        }
        for i in 0..n {
            if m[(i, i)] != *cfg.root(i) {
                return Err(Error::InvalidInput(format!(
                    "diagonal entry {} differs from root {}",
                    m[(i, i)],
                    cfg.root(i)
                )));
            }
        }
        let mut upper = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                upper.push(m[(i, j)].clone());
            }
        }
        Ok(OmegaMatrix { n, upper })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[BigInt] {
        &self.upper
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.upper[upper_index(self.n, i, j)]
    }

    pub fn to_int_matrix(&self, cfg: &RootConfig) -> IntMatrix {
        let n = self.n;
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = cfg.root(i).clone();
            for j in (i + 1)..n {
                m[(i, j)] = self.entry(i, j).clone();
            }
        }
        m
    }

    /// Membership in the fundamental domain `Omega_0`:
    /// `0 <= c_ij < a_j - a_i` for all `i < j`.
    pub fn is_reduced(&self, cfg: &RootConfig) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let c = self.entry(i, j);
                if c.is_negative() || *c >= cfg.diff(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// Entry-wise sign conjugation `P T P^{-1}` for `P = diag(signs)`:
    /// `c_ij` becomes `eps_i eps_j c_ij`.
    pub fn sign_conjugated(&self, signs: &SignVector) -> OmegaMatrix {
        debug_assert_eq!(signs.len(), self.n);
        let mut upper = self.upper.clone();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if signs.sign(i) * signs.sign(j) == -1 {
                    let k = upper_index(self.n, i, j);
                    upper[k] = -&upper[k];
                }
            }
        }
        OmegaMatrix { n: self.n, upper }
    }
}

/// Canonical representative of a `Z`-conjugacy class: the lexicographically
/// smallest `Omega_0` matrix over the sign-diagonal orbit, reading the
/// strictly-upper entries row-major. Equal labels <=> conjugate matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLabel {
    upper: Vec<BigInt>,
}

impl ClassLabel {
    pub fn upper(&self) -> &[BigInt] {
        &self.upper
    }

    pub fn to_omega(&self, cfg: &RootConfig) -> OmegaMatrix {
        OmegaMatrix {
            n: cfg.n(),
            upper: self.upper.clone(),
        }
    }

    pub fn to_int_matrix(&self, cfg: &RootConfig) -> IntMatrix {
        self.to_omega(cfg).to_int_matrix(cfg)
    }
}

/// Result of triangularizing a matrix into `Omega`.
pub struct Triangularization {
    pub omega: OmegaMatrix,
    /// Unimodular `U` with `U A U^{-1}` equal to the triangular form.
    pub transform: Unimodular,
}

/// Conjugates `A` into upper-triangular form with diagonal exactly
/// `(a_1, ..., a_n)`, in that order.
///
/// Recursive construction: a primitive eigenvector for `a_1` extends to a
/// basis, conjugation by that basis pushes the problem to the lower-right
/// block, and the block recursion lifts back.
pub fn triangularize(a: &IntMatrix, cfg: &RootConfig) -> Result<Triangularization> {
    if !a.char_poly_matches(cfg) {
        return Err(Error::CharPolyMismatch);
    }
    let u = triangularize_unchecked(a, cfg.roots())?;
    let omega = OmegaMatrix::from_int_matrix(&u.conjugate(a), cfg)?;
    Ok(Triangularization {
        omega,
        transform: u,
    })
}

fn triangularize_unchecked(a: &IntMatrix, roots: &[BigInt]) -> Result<Unimodular> {
    let n = roots.len();
    debug_assert_eq!(a.n(), n);
    if n == 1 {
        return Ok(Unimodular::identity(1));
    }
    // primitive eigenvector for the first root
    let mut shifted = a.clone();
    for i in 0..n {
        shifted[(i, i)] = &a[(i, i)] - &roots[0];
    }
    let v = shifted
        .primitive_right_kernel()
        .ok_or(Error::CharPolyMismatch)?;
    let basis = primitive_extend(&v)?;
    // In the new basis the matrix is [[a_1, *], [0, block]].
    let conj = basis.inverse().mul(a).mul(basis.matrix());
    debug_assert_eq!(conj[(0, 0)], roots[0]);
    let mut block = IntMatrix::zero(n - 1, n - 1);
    for i in 1..n {
        debug_assert!(conj[(i, 0)].is_zero());
        for j in 1..n {
            block[(i - 1, j - 1)] = conj[(i, j)].clone();
        }
    }
    let sub = triangularize_unchecked(&block, &roots[1..])?;
    // lift the block transform to n dimensions
    let mut lift_mat = IntMatrix::identity(n);
    let mut lift_inv = IntMatrix::identity(n);
    for i in 1..n {
        for j in 1..n {
            lift_mat[(i, j)] = sub.matrix()[(i - 1, j - 1)].clone();
            lift_inv[(i, j)] = sub.inverse()[(i - 1, j - 1)].clone();
        }
    }
    let lift = Unimodular::from_parts(lift_mat, lift_inv)?;
    // first conjugate by basis^{-1}, then by the lifted block transform
    let first = Unimodular::from_parts(basis.inverse().clone(), basis.matrix().clone())?;
    Ok(first.then(&lift))
}

/// Result of reducing an `Omega` matrix into `Omega_0`.
pub struct Reduction {
    pub omega: OmegaMatrix,
    /// Unipotent `U` with `U T U^{-1}` equal to the reduced form.
    pub transform: Unimodular,
}

/// Unique `Omega_0` representative of the unipotent conjugation orbit.
///
/// Sweeps rows bottom-up and columns left-to-right within each row; at
/// entry `(i, j)` conjugation by `I + t E_ij` shifts `c_ij` by
/// `t (a_j - a_i)` and only disturbs entries above and to the right.
pub fn reduce_to_omega0(t: &OmegaMatrix, cfg: &RootConfig) -> Reduction {
    let n = t.n();
    let mut m = t.to_int_matrix(cfg);
    let mut transform = Unimodular::identity(n);
    for i in (0..n.saturating_sub(1)).rev() {
        for j in (i + 1)..n {
            let diff = cfg.diff(i, j);
            let shift = -m[(i, j)].div_floor(&diff);
            if shift.is_zero() {
                continue;
            }
            apply_unipotent(&mut m, i, j, &shift);
            transform.add_multiple_of_row(i, j, &shift);
        }
    }
    let omega = OmegaMatrix::from_int_matrix(&m, cfg).expect("reduction stays in Omega");
    debug_assert!(omega.is_reduced(cfg));
    Reduction { omega, transform }
}

/// In-place conjugation of an upper-triangular matrix by `I + t E_ij`:
/// row `i` += t * row `j`, then column `j` -= t * column `i`.
fn apply_unipotent(m: &mut IntMatrix, i: usize, j: usize, t: &BigInt) {
    let n = m.n();
    for k in j..n {
        let term = t * &m[(j, k)];
        m[(i, k)] += term;
    }
    for r in 0..=i {
        let term = t * &m[(r, i)];
        m[(r, j)] -= term;
    }
}

/// Reduction without conjugator tracking, for enumeration loops.
fn reduce_only(t: &OmegaMatrix, cfg: &RootConfig) -> OmegaMatrix {
    let n = t.n();
    let mut m = t.to_int_matrix(cfg);
    for i in (0..n.saturating_sub(1)).rev() {
        for j in (i + 1)..n {
            let diff = cfg.diff(i, j);
            let shift = -m[(i, j)].div_floor(&diff);
            if !shift.is_zero() {
                apply_unipotent(&mut m, i, j, &shift);
            }
        }
    }
    OmegaMatrix::from_int_matrix(&m, cfg).expect("reduction stays in Omega")
}

/// Canonical label of an `Omega` matrix: lexicographic minimum of the
/// `Omega_0` reductions over the `2^{n-1}` sign conjugations fixing the
/// first sign (global negation acts trivially on conjugation).
pub fn label_of_omega(t: &OmegaMatrix, cfg: &RootConfig) -> ClassLabel {
    let n = t.n();
    let mut best: Option<Vec<BigInt>> = None;
    for mask in 0..(1u32 << (n - 1)) {
        let signs = SignVector::from_mask(mask << 1, n);
        let reduced = reduce_only(&t.sign_conjugated(&signs), cfg);
        match &best {
            Some(b) if *b <= reduced.upper => {}
            _ => best = Some(reduced.upper),
        }
    }
    ClassLabel {
        upper: best.expect("at least one sign vector"),
    }
}

/// Canonical label of an arbitrary matrix with characteristic polynomial
/// `chi`, together with a conjugator realizing it.
pub struct Canonicalization {
    pub label: ClassLabel,
    /// Unimodular `U` with `U A U^{-1}` equal to the label matrix.
    pub transform: Unimodular,
}

pub fn canonicalize(a: &IntMatrix, cfg: &RootConfig) -> Result<Canonicalization> {
    let tri = triangularize(a, cfg)?;
    let n = cfg.n();
    let mut best: Option<(ClassLabel, Unimodular)> = None;
    for mask in 0..(1u32 << (n - 1)) {
        let signs = SignVector::from_mask(mask << 1, n);
        let sign_conj = Unimodular::from_signs(signs.entries());
        let conjugated = tri.omega.sign_conjugated(&signs);
        let reduction = reduce_to_omega0(&conjugated, cfg);
        let candidate = ClassLabel {
            upper: reduction.omega.upper.clone(),
        };
        let better = match &best {
            Some((b, _)) => candidate < *b,
            None => true,
        };
        if better {
            let total = tri
                .transform
                .then(&sign_conj)
                .then(&reduction.transform);
            best = Some((candidate, total));
        }
    }
    let (label, transform) = best.expect("nonempty sign orbit");
    Ok(Canonicalization { label, transform })
}

/// Canonical label of a matrix with characteristic polynomial `chi`.
pub fn canonical_label(a: &IntMatrix, cfg: &RootConfig) -> Result<ClassLabel> {
    let tri = triangularize(a, cfg)?;
    Ok(label_of_omega(&tri.omega, cfg))
}

/// Iterator over all of `Omega_0` (a mixed-radix odometer over the
/// upper entries with radix `a_j - a_i`).
pub struct Omega0Iter {
    n: usize,
    radices: Vec<BigInt>,
    current: Option<Vec<BigInt>>,
}

impl Omega0Iter {
    fn new(cfg: &RootConfig) -> Self {
        let n = cfg.n();
        let mut radices = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                radices.push(cfg.diff(i, j));
            }
        }
        Omega0Iter {
            n,
            radices,
            current: Some(vec![BigInt::zero(); n * (n - 1) / 2]),
        }
    }
}

impl Iterator for Omega0Iter {
    type Item = OmegaMatrix;

    fn next(&mut self) -> Option<OmegaMatrix> {
        let current = self.current.as_mut()?;
        let item = OmegaMatrix {
            n: self.n,
            upper: current.clone(),
        };
        // advance the odometer
        let mut pos = 0;
        loop {
            if pos == current.len() {
                self.current = None;
                break;
            }
            current[pos] += 1;
            if current[pos] < self.radices[pos] {
                break;
            }
            current[pos] = BigInt::zero();
            pos += 1;
        }
        Some(item)
    }
}

/// Enumerates `Omega_0` after a budget check; `|Omega_0| = Delta`.
pub fn enumerate_omega0(cfg: &RootConfig, budget: &Budget) -> Result<Omega0Iter> {
    let profile = crate::roots::delta_profile(cfg);
    budget.check(&profile.delta)?;
    Ok(Omega0Iter::new(cfg))
}

/// Tag distinguishing proved counts from the conjectural quartic formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Proved,
    Conjectural,
}

/// `|ICM(R)|` by exhaustive enumeration of `Omega_0` and canonical
/// labelling; exact for any degree, but costs `Delta * 2^{n-1}`
/// reductions.
pub fn icm_order_bruteforce(cfg: &RootConfig, budget: &Budget) -> Result<BigUint> {
    let mut labels: HashSet<ClassLabel> = HashSet::new();
    for t in enumerate_omega0(cfg, budget)? {
        labels.insert(label_of_omega(&t, cfg));
    }
    Ok(BigUint::from(labels.len()))
}

/// Distinct canonical labels of `Omega_0`, sorted: one per ideal class.
pub fn icm_class_labels(cfg: &RootConfig, budget: &Budget) -> Result<Vec<ClassLabel>> {
    let mut labels: HashSet<ClassLabel> = HashSet::new();
    for t in enumerate_omega0(cfg, budget)? {
        labels.insert(label_of_omega(&t, cfg));
    }
    let mut out: Vec<ClassLabel> = labels.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Number of classes in `Omega_0 / U_n` fixed by conjugation with
/// `diag(signs)`: counts reduced matrices whose sign conjugate reduces
/// back to themselves.
pub fn fix_count(cfg: &RootConfig, signs: &SignVector, budget: &Budget) -> Result<BigUint> {
    if signs.len() != cfg.n() {
        return Err(Error::LengthMismatch {
            expected: cfg.n(),
            got: signs.len(),
        });
    }
    let mut count: u64 = 0;
    for t in enumerate_omega0(cfg, budget)? {
        let conjugated = reduce_only(&t.sign_conjugated(signs), cfg);
        if conjugated == t {
            count += 1;
        }
    }
    Ok(BigUint::from(count))
}

/// The fixed-point upper bound
/// `2^{|J|(n-|J|)} * prod_{i<j in J} (a_j - a_i) * prod_{i<j not in J} (a_j - a_i)`
/// where `J` is the set of negative signs.
pub fn fix_bound(cfg: &RootConfig, signs: &SignVector) -> BigUint {
    let n = cfg.n();
    let negatives = signs.negative_indices();
    let j_size = negatives.len();
    let in_j = |i: usize| negatives.contains(&i);
    let mut bound = BigInt::one() << (j_size * (n - j_size));
    for i in 0..n {
        for j in (i + 1)..n {
            if in_j(i) == in_j(j) {
                bound *= cfg.diff(i, j);
            }
        }
    }
    bound.to_biguint().expect("positive")
}

/// `|ICM(R)|` by Burnside's lemma: average the fixed-point counts of the
/// `2^n` sign matrices acting on `Omega_0 / U_n`.
pub fn icm_order_burnside(cfg: &RootConfig, budget: &Budget) -> Result<BigUint> {
    let n = cfg.n();
    let mut total = BigUint::zero();
    // P and -P act identically, so sum over half the group and double
    for mask in 0..(1u32 << (n - 1)) {
        let signs = SignVector::from_mask(mask << 1, n);
        total += fix_count(cfg, &signs, budget)?;
    }
    total *= BigUint::from(2u32);
    let group_order = BigUint::from(1u32) << n;
    let (q, r) = total.div_rem(&group_order);
    if !r.is_zero() {
        return Err(Error::Inexact(
            "Burnside sum not divisible by group order".into(),
        ));
    }
    Ok(q)
}

fn all_even(values: &[&BigInt]) -> BigInt {
    if values.iter().all(|v| v.is_even()) {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// Closed-form `|ICM(R)|` for degrees 2 and 3 (proved) and 4
/// (conjectural, tagged as such).
pub fn icm_order_formula(cfg: &RootConfig) -> Result<(BigUint, Provenance)> {
    let n = cfg.n();
    let value = match n {
        2 => {
            let g = cfg.diff(0, 1);
            let floor_half = g.div_floor(&BigInt::from(2));
            floor_half + BigInt::one()
        }
        3 => {
            let d12 = cfg.diff(0, 1);
            let d13 = cfg.diff(0, 2);
            let d23 = cfg.diff(1, 2);
            let delta = &d12 * &d13 * &d23;
            let sum = delta
                + &d23 * (BigInt::one() + all_even(&[&d12]) + all_even(&[&d13]))
                + &d13 * (BigInt::one() + all_even(&[&d12]) + all_even(&[&d23]))
                + &d12 * (BigInt::one() + all_even(&[&d13]) + all_even(&[&d23]));
            let (q, r) = sum.div_rem(&BigInt::from(4));
            if !r.is_zero() {
                return Err(Error::Inexact("cubic count not divisible by 4".into()));
            }
            q
        }
        4 => {
            let d = |i: usize, j: usize| cfg.diff(i, j);
            let (d12, d13, d14) = (d(0, 1), d(0, 2), d(0, 3));
            let (d23, d24, d34) = (d(1, 2), d(1, 3), d(2, 3));
            let one = BigInt::one;
            let delta = &d12 * &d13 * &d14 * &d23 * &d24 * &d34;
            let sum = delta
                + (one() + all_even(&[&d12]) + all_even(&[&d13]) + all_even(&[&d14]))
                    * &d23
                    * &d24
                    * &d34
                + (one() + all_even(&[&d12]) + all_even(&[&d23]) + all_even(&[&d24]))
                    * &d13
                    * &d14
                    * &d34
                + (one() + all_even(&[&d13]) + all_even(&[&d23]) + all_even(&[&d34]))
                    * &d12
                    * &d14
                    * &d24
                + (one() + all_even(&[&d14]) + all_even(&[&d24]) + all_even(&[&d34]))
                    * &d12
                    * &d23
                    * &d13
                + (one()
                    + all_even(&[&d23])
                    + all_even(&[&d13])
                    + all_even(&[&d24])
                    + all_even(&[&d14])
                    + all_even(&[&d14, &d23])
                    + all_even(&[&d24, &d13]))
                    * &d12
                    * &d34
                + (one()
                    + all_even(&[&d12])
                    + all_even(&[&d14])
                    + all_even(&[&d23])
                    + all_even(&[&d34])
                    + all_even(&[&d12, &d34])
                    + all_even(&[&d14, &d23]))
                    * &d13
                    * &d24
                + (one()
                    + all_even(&[&d12])
                    + all_even(&[&d13])
                    + all_even(&[&d24])
                    + all_even(&[&d34])
                    + all_even(&[&d24, &d13])
                    + all_even(&[&d12, &d34]))
                    * &d14
                    * &d23;
            let (q, r) = sum.div_rem(&BigInt::from(8));
            if !r.is_zero() {
                return Err(Error::Inexact("quartic count not divisible by 8".into()));
            }
            q
        }
        _ => {
            return Err(Error::UnsupportedDegree {
                op: "icm_order_formula",
                n,
            })
        }
    };
    let provenance = if n == 4 {
        Provenance::Conjectural
    } else {
        Provenance::Proved
    };
    Ok((
        value.to_biguint().expect("counts are positive"),
        provenance,
    ))
}

/// How an ICM order was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcmMethod {
    Formula,
    Burnside,
    BruteForce,
}

impl IcmMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            IcmMethod::Formula => "formula",
            IcmMethod::Burnside => "burnside",
            IcmMethod::BruteForce => "bruteforce",
        }
    }
}

/// Dispatches to the cheapest available route: the proved formulas for
/// degrees 2 and 3, brute force otherwise.
pub fn icm_order_auto(
    cfg: &RootConfig,
    budget: &Budget,
) -> Result<(BigUint, IcmMethod, Provenance)> {
    match cfg.n() {
        2 | 3 => {
            let (v, p) = icm_order_formula(cfg)?;
            Ok((v, IcmMethod::Formula, p))
        }
        _ => {
            let v = icm_order_bruteforce(cfg, budget)?;
            Ok((v, IcmMethod::BruteForce, Provenance::Proved))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::delta_profile;

    fn cfg(roots: &[i64]) -> RootConfig {
        RootConfig::from_i64(roots).unwrap()
    }

    fn om(c: &RootConfig, upper: &[i64]) -> OmegaMatrix {
        OmegaMatrix::new(c, upper.iter().map(|&v| BigInt::from(v)).collect()).unwrap()
    }

    #[test]
    fn upper_index_layout() {
        assert_eq!(upper_index(3, 0, 1), 0);
        assert_eq!(upper_index(3, 0, 2), 1);
        assert_eq!(upper_index(3, 1, 2), 2);
        assert_eq!(upper_index(4, 0, 3), 2);
        assert_eq!(upper_index(4, 1, 2), 3);
        assert_eq!(upper_index(4, 2, 3), 5);
    }

    #[test]
    fn reduce_n2_examples() {
        let c = cfg(&[0, 3]);
        let r = reduce_to_omega0(&om(&c, &[7]), &c);
        assert_eq!(*r.omega.entry(0, 1), BigInt::from(1)); // 7 mod 3
        let r = reduce_to_omega0(&om(&c, &[2]), &c);
        assert_eq!(*r.omega.entry(0, 1), BigInt::from(2));
        assert_eq!(*r.transform.matrix(), IntMatrix::identity(2));
    }

    #[test]
    fn reduce_lands_in_omega0_and_conjugates() {
        let c = cfg(&[0, 1, 3]);
        let t = om(&c, &[5, -2, 4]);
        let r = reduce_to_omega0(&t, &c);
        assert!(r.omega.is_reduced(&c));
        let lhs = r.transform.conjugate(&t.to_int_matrix(&c));
        assert_eq!(lhs, r.omega.to_int_matrix(&c));
    }

    /// Brute-force oracle: search all unipotent conjugations with small
    /// entries; every one that lands in Omega_0 must equal the sweep's
    /// output (the representative is unique).
    #[test]
    fn reduce_agrees_with_unipotent_box_search() {
        let c = cfg(&[0, 1, 3]);
        let t = om(&c, &[5, -2, 4]);
        let reduced = reduce_to_omega0(&t, &c).omega;
        let t_full = t.to_int_matrix(&c);
        let mut found = 0;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                for d in -10i64..=10 {
                    let u = IntMatrix::from_i64_rows(&[&[1, a, b], &[0, 1, d], &[0, 0, 1]]);
                    let uinv =
                        IntMatrix::from_i64_rows(&[&[1, -a, a * d - b], &[0, 1, -d], &[0, 0, 1]]);
                    assert_eq!(u.mul(&uinv), IntMatrix::identity(3));
                    let conj = u.mul(&t_full).mul(&uinv);
                    if let Ok(o) = OmegaMatrix::from_int_matrix(&conj, &c) {
                        if o.is_reduced(&c) {
                            assert_eq!(o, reduced, "Omega_0 representative is unique");
                            found += 1;
                        }
                    }
                }
            }
        }
        assert!(found >= 1, "the box contains a witness");
    }

    #[test]
    fn reduce_is_idempotent_and_unipotent_invariant() {
        let c = cfg(&[0, 2, 7]);
        let t = om(&c, &[9, -13, 4]);
        let once = reduce_to_omega0(&t, &c).omega;
        let twice = reduce_to_omega0(&once, &c).omega;
        assert_eq!(once, twice);
        // conjugate by an arbitrary unipotent, reduce again
        let u = Unimodular::from_parts(
            IntMatrix::from_i64_rows(&[&[1, 4, -2], &[0, 1, 3], &[0, 0, 1]]),
            IntMatrix::from_i64_rows(&[&[1, -4, 14], &[0, 1, -3], &[0, 0, 1]]),
        )
        .unwrap();
        let moved = OmegaMatrix::from_int_matrix(&u.conjugate(&t.to_int_matrix(&c)), &c).unwrap();
        assert_eq!(reduce_to_omega0(&moved, &c).omega, once);
    }

    #[test]
    fn triangularize_fixes_omega_members() {
        let c = cfg(&[0, 1, 3]);
        let t = om(&c, &[1, 2, 0]).to_int_matrix(&c);
        let tri = triangularize(&t, &c).unwrap();
        assert_eq!(*tri.transform.matrix(), IntMatrix::identity(3));
        assert_eq!(tri.omega.to_int_matrix(&c), t);
    }

    #[test]
    fn triangularize_companion_matrices() {
        // companion of x(x-3)
        let c = cfg(&[0, 3]);
        let a = IntMatrix::from_i64_rows(&[&[0, 0], &[1, 3]]);
        let tri = triangularize(&a, &c).unwrap();
        assert_eq!(tri.transform.conjugate(&a), tri.omega.to_int_matrix(&c));

        // companion of x(x-1)(x-3) = x^3 - 4x^2 + 3x
        let c = cfg(&[0, 1, 3]);
        let a = IntMatrix::from_i64_rows(&[&[0, 0, 0], &[1, 0, -3], &[0, 1, 4]]);
        assert!(a.char_poly_matches(&c));
        let tri = triangularize(&a, &c).unwrap();
        assert_eq!(tri.transform.conjugate(&a), tri.omega.to_int_matrix(&c));
        for i in 0..3 {
            assert_eq!(tri.omega.to_int_matrix(&c)[(i, i)], *c.root(i));
        }
    }

    #[test]
    fn triangularize_rejects_wrong_char_poly() {
        let c = cfg(&[0, 3]);
        let a = IntMatrix::from_i64_rows(&[&[1, 0], &[0, 2]]);
        assert!(matches!(
            triangularize(&a, &c),
            Err(Error::CharPolyMismatch)
        ));
    }

    #[test]
    fn labels_separate_and_merge_n2() {
        let c = cfg(&[0, 5]);
        // entries 2 and 3 are sign-conjugate (3 = -2 mod 5)
        let l2 = label_of_omega(&om(&c, &[2]), &c);
        let l3 = label_of_omega(&om(&c, &[3]), &c);
        assert_eq!(l2, l3);
        // entries 1 and 2 are in different classes
        let l1 = label_of_omega(&om(&c, &[1]), &c);
        assert_ne!(l1, l2);
    }

    #[test]
    fn label_constant_on_random_conjugates() {
        let c = cfg(&[0, 2, 5]);
        let t = om(&c, &[1, 3, 2]).to_int_matrix(&c);
        let base = canonical_label(&t, &c).unwrap();
        // build some unimodular conjugators from elementary operations
        let mut u = Unimodular::identity(3);
        u.add_multiple_of_row(0, 1, &BigInt::from(2));
        u.add_multiple_of_row(2, 0, &BigInt::from(-3));
        u.swap_rows(1, 2);
        u.negate_row(0);
        let conj = u.conjugate(&t);
        assert_eq!(canonical_label(&conj, &c).unwrap(), base);

        let can = canonicalize(&conj, &c).unwrap();
        assert_eq!(can.label, base);
        assert_eq!(
            can.transform.conjugate(&conj),
            can.label.to_int_matrix(&c),
            "returned conjugator realizes the label"
        );
    }

    #[test]
    fn omega0_enumeration_count_is_delta() {
        for roots in [vec![0i64, 5], vec![0, 2, 5], vec![0, 1, 2, 4]] {
            let c = cfg(&roots);
            let delta = delta_profile(&c).delta;
            let count = enumerate_omega0(&c, &Budget::default()).unwrap().count();
            assert_eq!(BigUint::from(count), delta);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let c = cfg(&[0, 100, 200]);
        let tiny = Budget::new(10);
        assert!(matches!(
            icm_order_bruteforce(&c, &tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn icm_counts_n2() {
        let b = Budget::default();
        // Delta = 1: single class
        assert_eq!(icm_order_bruteforce(&cfg(&[0, 1]), &b).unwrap(), 1u32.into());
        // b - a = 5: three classes
        assert_eq!(icm_order_bruteforce(&cfg(&[0, 5]), &b).unwrap(), 3u32.into());
        assert_eq!(icm_order_burnside(&cfg(&[0, 5]), &b).unwrap(), 3u32.into());
        assert_eq!(icm_order_burnside(&cfg(&[0, 2]), &b).unwrap(), 2u32.into());
    }

    #[test]
    fn icm_counts_n3() {
        let b = Budget::default();
        let c = cfg(&[0, 1, 3]);
        assert_eq!(icm_order_bruteforce(&c, &b).unwrap(), 4u32.into());
        assert_eq!(icm_order_burnside(&c, &b).unwrap(), 4u32.into());
        let (v, p) = icm_order_formula(&c).unwrap();
        assert_eq!(v, 4u32.into());
        assert_eq!(p, Provenance::Proved);
    }

    #[test]
    fn icm_formula_n4_matches_bruteforce() {
        let b = Budget::default();
        let c = cfg(&[0, 1, 2, 4]);
        let (formula, p) = icm_order_formula(&c).unwrap();
        assert_eq!(p, Provenance::Conjectural);
        assert_eq!(formula, icm_order_bruteforce(&c, &b).unwrap());
    }

    #[test]
    fn formula_rejects_other_degrees() {
        assert!(matches!(
            icm_order_formula(&cfg(&[0, 1, 2, 3, 4])),
            Err(Error::UnsupportedDegree { .. })
        ));
    }

    #[test]
    fn fix_counts_and_bounds() {
        let b = Budget::default();
        let c = cfg(&[0, 1, 3]);
        let delta = delta_profile(&c).delta;
        // identity fixes everything
        let all_plus = SignVector::from_mask(0, 3);
        assert_eq!(fix_count(&c, &all_plus, &b).unwrap(), delta);
        // single flipped first sign: the proved cubic fixed-point count
        let p1 = SignVector::from_mask(1, 3);
        assert_eq!(fix_count(&c, &p1, &b).unwrap(), 2u32.into());
        // bound respected for every sign vector
        for mask in 0..8u32 {
            let s = SignVector::from_mask(mask, 3);
            assert!(fix_count(&c, &s, &b).unwrap() <= fix_bound(&c, &s));
        }
    }

    #[test]
    fn n2_fix_counts_match_parity_cases() {
        let b = Budget::default();
        let c = cfg(&[0, 5]);
        let flip = SignVector::from_mask(1, 2);
        assert_eq!(fix_count(&c, &flip, &b).unwrap(), 1u32.into());
        let c = cfg(&[0, 2]);
        assert_eq!(fix_count(&c, &flip, &b).unwrap(), 2u32.into());
    }
}
