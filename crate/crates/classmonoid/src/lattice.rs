//! Fractional ideals of `R` as full-rank lattices in `Q^n`.
//!
//! The etale algebra `K = Q (x) R` splits as `Q^n` by evaluation at the
//! roots, so ring multiplication is componentwise. A fractional ideal is
//! a full-rank lattice stable under multiplication by
//! `(a_1, ..., a_n)`, stored as a positive denominator plus a column
//! Hermite basis: equality of ideals is equality of the stored data.
//!
//! This module implements the ideal product, the colon ideal `(I : J)`,
//! the Gorenstein invertibility test `(I : I) = R`, both directions of
//! the matrix <-> ideal correspondence, equivalence of ideals through
//! canonical matrix labels, and the brute-force construction of the
//! class group with its Cayley table.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::Error;
use crate::hnf::{column_hnf, hnf_determinant, solve_upper_triangular};
use crate::matrix::IntMatrix;
use crate::omega::{canonical_label, icm_class_labels, ClassLabel};
use crate::roots::RootConfig;
use crate::snf::smith_normal_form;
use crate::Result;

/// A fractional `R`-ideal: the lattice `(1/denominator) * basis * Z^n`,
/// with `basis` in column Hermite normal form and the denominator
/// minimal. Always full rank and stable under the root action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIdeal {
    cfg: RootConfig,
    denominator: BigInt,
    basis: IntMatrix,
}

impl LatticeIdeal {
    /// Builds the ideal generated (as a lattice) by `generators`, each a
    /// column vector of numerators over the common `denominator`.
    ///
    /// Fails if the generators do not span a full-rank lattice or the
    /// resulting lattice is not stable under the root action.
    pub fn from_generators(
        cfg: &RootConfig,
        denominator: BigInt,
        generators: &[Vec<BigInt>],
    ) -> Result<Self> {
        if denominator.is_zero() || denominator.is_negative() {
            return Err(Error::InvalidInput("denominator must be positive".into()));
        }
        let basis = column_hnf(cfg.n(), generators)?;
        let ideal = LatticeIdeal {
            cfg: cfg.clone(),
            denominator,
            basis,
        }
        .normalized();
        ideal.check_stable()?;
        Ok(ideal)
    }

    /// Divides out the gcd of the denominator and all basis entries.
    fn normalized(mut self) -> Self {
        let mut g = self.denominator.clone();
        let n = self.cfg.n();
        for i in 0..n {
            for j in i..n {
                g = g.gcd(&self.basis[(i, j)]);
            }
        }
        if !g.is_one() {
            for i in 0..n {
                for j in i..n {
                    let q = &self.basis[(i, j)] / &g;
                    self.basis[(i, j)] = q;
                }
            }
            self.denominator = &self.denominator / &g;
        }
        self
    }

    fn check_stable(&self) -> Result<()> {
        let n = self.cfg.n();
        for j in 0..n {
            let col = self.basis.column(j);
            let image: Vec<BigInt> = (0..n).map(|i| self.cfg.root(i) * &col[i]).collect();
            if solve_upper_triangular(&self.basis, &image).is_none() {
                return Err(Error::NotStable);
            }
        }
        Ok(())
    }

    pub fn config(&self) -> &RootConfig {
        &self.cfg
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// `phi(R)` itself: the lattice spanned by the Vandermonde columns
    /// `(a_1^k, ..., a_n^k)`, `k = 0..n-1`. Its index in `Z^n` is `Delta`.
    pub fn canonical_r_lattice(cfg: &RootConfig) -> Self {
        let n = cfg.n();
        let generators: Vec<Vec<BigInt>> = (0..n)
            .map(|k| cfg.roots().iter().map(|a| a.pow(k as u32)).collect())
            .collect();
        LatticeIdeal::from_generators(cfg, BigInt::one(), &generators)
            .expect("phi(R) is a full-rank stable lattice")
    }

    /// Index of the (denominator-cleared) basis lattice in `Z^n`.
    pub fn basis_determinant(&self) -> BigInt {
        hnf_determinant(&self.basis)
    }

    /// Whether `num / den` (componentwise) lies in the ideal.
    pub fn contains(&self, num: &[BigInt], den: &BigInt) -> bool {
        let scaled: Option<Vec<BigInt>> = num
            .iter()
            .map(|x| {
                let (q, r) = (&self.denominator * x).div_rem(den);
                r.is_zero().then_some(q)
            })
            .collect();
        match scaled {
            Some(v) => solve_upper_triangular(&self.basis, &v).is_some(),
            None => false,
        }
    }

    /// Whether `other` is a sublattice of `self`.
    pub fn contains_ideal(&self, other: &LatticeIdeal) -> bool {
        (0..self.cfg.n()).all(|j| {
            let col = other.basis.column(j);
            self.contains(&col, &other.denominator)
        })
    }

    /// Ideal product: the lattice generated by all componentwise products
    /// of basis vectors.
    pub fn product(&self, other: &LatticeIdeal) -> Result<LatticeIdeal> {
        if self.cfg != other.cfg {
            return Err(Error::InvalidInput(
                "ideal product requires the same root configuration".into(),
            ));
        }
        let n = self.cfg.n();
        let mut generators = Vec::with_capacity(n * n);
        for i in 0..n {
            let a = self.basis.column(i);
            for j in 0..n {
                let b = other.basis.column(j);
                generators.push((0..n).map(|k| &a[k] * &b[k]).collect());
            }
        }
        LatticeIdeal::from_generators(
            &self.cfg,
            &self.denominator * &other.denominator,
            &generators,
        )
    }

    /// Colon ideal `(self : other) = { k in K : k * other <= self }`.
    ///
    /// For each basis vector `b` of `other` the condition `k o b in self`
    /// is linear in `k`; stacking all of them gives an integer matrix `P`
    /// with `(self : other) = { k : P k in e Z }`, which a Smith normal
    /// form solves exactly. Zero components of an individual `b` impose
    /// no constraint for that vector, but a full-rank `other` constrains
    /// every coordinate overall.
    pub fn colon(&self, other: &LatticeIdeal) -> Result<LatticeIdeal> {
        if self.cfg != other.cfg {
            return Err(Error::InvalidInput(
                "colon requires the same root configuration".into(),
            ));
        }
        let n = self.cfg.n();
        // rows of the rational constraint matrix: for each basis column c
        // of `other`, (d_self / d_other) * B_self^{-1} * diag(c)
        let mut rational_rows: Vec<Vec<BigRational>> = Vec::with_capacity(n * n);
        let scale = BigRational::new(self.denominator.clone(), other.denominator.clone());
        for j in 0..n {
            let c = other.basis.column(j);
            // solve B X = diag(c) column by column, rationally
            let mut block: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];
            for (col, ck) in c.iter().enumerate() {
                let mut x = vec![BigRational::zero(); n];
                for i in (0..n).rev() {
                    let mut rhs = if i == col {
                        BigRational::from_integer(ck.clone())
                    } else {
                        BigRational::zero()
                    };
                    for t in (i + 1)..n {
                        rhs -= BigRational::from_integer(self.basis[(i, t)].clone()) * &x[t];
                    }
                    x[i] = rhs / BigRational::from_integer(self.basis[(i, i)].clone());
                }
                for i in 0..n {
                    block[i][col] = &x[i] * &scale;
                }
            }
            rational_rows.extend(block);
        }
        // clear denominators
        let mut e = BigInt::one();
        for row in &rational_rows {
            for x in row {
                e = e.lcm(x.denom());
            }
        }
        let p = IntMatrix::from_rows(
            rational_rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            let v = x * BigRational::from_integer(e.clone());
                            debug_assert!(v.is_integer());
                            v.to_integer()
                        })
                        .collect()
                })
                .collect(),
        )?;
        // { k : P k in e Z^{n^2} } = V diag(e / d_i) Z^n
        let snf = smith_normal_form(&p);
        let diag = snf.diagonal();
        if diag.iter().take(n).any(|d| d.is_zero()) {
            return Err(Error::RankDeficient);
        }
        let d_last = diag[n - 1].clone();
        let generators: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let factor = &e * (&d_last / &diag[i]);
                snf.v.column(i).iter().map(|x| x * &factor).collect()
            })
            .collect();
        LatticeIdeal::from_generators(&self.cfg, d_last, &generators)
    }

    /// Gorenstein invertibility criterion: `I` is invertible iff
    /// `(I : I) = R`.
    pub fn is_invertible(&self) -> Result<bool> {
        let endo = self.colon(self)?;
        Ok(endo == LatticeIdeal::canonical_r_lattice(&self.cfg))
    }

    /// The multiplication-by-`x` matrix of the ideal:
    /// `S = B^{-1} diag(a) B`, integral exactly when the lattice is
    /// stable, with characteristic polynomial `chi`.
    pub fn to_matrix(&self) -> Result<IntMatrix> {
        let n = self.cfg.n();
        let mut s = IntMatrix::zero(n, n);
        for j in 0..n {
            let col = self.basis.column(j);
            let image: Vec<BigInt> = (0..n).map(|i| self.cfg.root(i) * &col[i]).collect();
            let y = solve_upper_triangular(&self.basis, &image).ok_or(Error::NotStable)?;
            for i in 0..n {
                s[(i, j)] = y[i].clone();
            }
        }
        Ok(s)
    }

    /// Canonical label of the ideal class.
    pub fn class_label(&self) -> Result<ClassLabel> {
        canonical_label(&self.to_matrix()?, &self.cfg)
    }

    /// Linear equivalence `I = kJ`, decided through canonical labels of
    /// the corresponding matrix classes.
    pub fn equivalent(&self, other: &LatticeIdeal) -> Result<bool> {
        Ok(self.class_label()? == other.class_label()?)
    }

    /// Componentwise scaling by a unit `k` of `K = Q^n` (all entries
    /// nonzero); yields an equivalent ideal.
    pub fn scaled(&self, k: &[BigRational]) -> Result<LatticeIdeal> {
        let n = self.cfg.n();
        if k.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: k.len(),
            });
        }
        if k.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidInput("scaling must be a unit of K".into()));
        }
        let mut e = self.denominator.clone();
        for x in k {
            e = e.lcm(x.denom());
        }
        let generators: Vec<Vec<BigInt>> = (0..n)
            .map(|j| {
                let col = self.basis.column(j);
                (0..n)
                    .map(|i| {
                        let v = BigRational::new(&col[i] * &e, self.denominator.clone()) * &k[i];
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        LatticeIdeal::from_generators(&self.cfg, e, &generators)
    }
}

/// The fractional ideal corresponding to a matrix class: rows of the
/// coordinatization are left eigenvectors `r_i A = a_i r_i`, each
/// normalized to leading entry 1; the ideal is the column span.
pub fn matrix_to_ideal(a: &IntMatrix, cfg: &RootConfig) -> Result<LatticeIdeal> {
    if !a.char_poly_matches(cfg) {
        return Err(Error::CharPolyMismatch);
    }
    let n = cfg.n();
    let transpose = a.transpose();
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut shifted = transpose.clone();
        for d in 0..n {
            shifted[(d, d)] = &transpose[(d, d)] - cfg.root(i);
        }
        let r = shifted
            .primitive_right_kernel()
            .ok_or(Error::CharPolyMismatch)?;
        let lead = r
            .iter()
            .find(|x| !x.is_zero())
            .expect("kernel vector is nonzero")
            .clone();
        rows.push(
            r.into_iter()
                .map(|x| BigRational::new(x, lead.clone()))
                .collect(),
        );
    }
    let mut e = BigInt::one();
    for row in &rows {
        for x in row {
            e = e.lcm(x.denom());
        }
    }
    let generators: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let v = &rows[i][j] * BigRational::from_integer(e.clone());
                    debug_assert!(v.is_integer());
                    v.to_integer()
                })
                .collect()
        })
        .collect();
    LatticeIdeal::from_generators(cfg, e, &generators)
}

/// An ideal class as an element of the monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealClass {
    pub label: ClassLabel,
    pub invertible: bool,
}

/// Multiplication table of the invertible classes, indices into the
/// sorted label list.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    pub classes: Vec<IdealClass>,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl CayleyTable {
    pub fn order(&self) -> usize {
        self.classes.len()
    }

    /// Checks the group axioms visible at the table level:
    /// commutativity, the identity row and column, and each row being a
    /// permutation.
    pub fn validate(&self) -> Result<()> {
        let k = self.order();
        for i in 0..k {
            if self.table[self.identity][i] != i || self.table[i][self.identity] != i {
                return Err(Error::Inexact("identity row or column is wrong".into()));
            }
            for j in 0..k {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::Inexact("table is not commutative".into()));
                }
            }
            let mut seen = vec![false; k];
            for j in 0..k {
                seen[self.table[i][j]] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(Error::Inexact("a row is not a permutation".into()));
            }
        }
        Ok(())
    }
}

/// All ideal classes with their invertibility flags, sorted by label.
pub fn ideal_classes(cfg: &RootConfig, budget: &Budget) -> Result<Vec<(IdealClass, LatticeIdeal)>> {
    let labels = icm_class_labels(cfg, budget)?;
    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        let ideal = matrix_to_ideal(&label.to_int_matrix(cfg), cfg)?;
        let invertible = ideal.is_invertible()?;
        out.push((IdealClass { label, invertible }, ideal));
    }
    Ok(out)
}

/// Number of invertible classes: `|Cl(R)|` by exhaustive lattice
/// arithmetic.
pub fn invertible_class_count(cfg: &RootConfig, budget: &Budget) -> Result<u64> {
    Ok(ideal_classes(cfg, budget)?
        .iter()
        .filter(|(c, _)| c.invertible)
        .count() as u64)
}

/// Builds `Cl(R)` by brute force: enumerate classes, keep the invertible
/// ones, and close them under the ideal product.
pub fn class_group_bruteforce(cfg: &RootConfig, budget: &Budget) -> Result<CayleyTable> {
    let all = ideal_classes(cfg, budget)?;
    let invertible: Vec<(IdealClass, LatticeIdeal)> =
        all.into_iter().filter(|(c, _)| c.invertible).collect();
    let labels: Vec<ClassLabel> = invertible.iter().map(|(c, _)| c.label.clone()).collect();
    let r_label = LatticeIdeal::canonical_r_lattice(cfg).class_label()?;
    let identity = labels
        .binary_search(&r_label)
        .map_err(|_| Error::Inexact("class of R is not among the invertible classes".into()))?;
    let k = labels.len();
    let mut table = vec![vec![0usize; k]; k];
    for i in 0..k {
        for j in i..k {
            let product = invertible[i].1.product(&invertible[j].1)?;
            let label = product.class_label()?;
            let idx = labels.binary_search(&label).map_err(|_| {
                Error::Inexact("product of invertible classes left the group".into())
            })?;
            table[i][j] = idx;
            table[j][i] = idx;
        }
    }
    let out = CayleyTable {
        classes: invertible.into_iter().map(|(c, _)| c).collect(),
        table,
        identity,
    };
    out.validate()?;
    Ok(out)
}
