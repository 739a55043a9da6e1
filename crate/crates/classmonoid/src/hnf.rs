//! Column-style Hermite normal form for full-rank integer lattices.
//!
//! Convention: the basis matrix is upper triangular with positive pivots
//! on the diagonal and every entry to the right of a pivot reduced into
//! `[0, pivot)`. Column `j` of the basis is a generator. The form is
//! unique per lattice, so lattice equality is matrix equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::matrix::IntMatrix;
use crate::Result;

/// Hermite-reduces a generating set (columns, each of length `n`) of a
/// full-rank sublattice of `Z^n`. Fails on rank-deficient input.
pub fn column_hnf(n: usize, generators: &[Vec<BigInt>]) -> Result<IntMatrix> {
    for g in generators {
        if g.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: g.len(),
            });
        }
    }
    let mut active: Vec<Vec<BigInt>> = generators
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut basis: Vec<Option<Vec<BigInt>>> = vec![None; n];
    // Peel off pivots from the bottom row upward. The invariant is that
    // every active column is zero in all rows below `row`.
    for row in (0..n).rev() {
        loop {
            let mut nonzero: Vec<usize> = (0..active.len())
                .filter(|&c| !active[c][row].is_zero())
                .collect();
            match nonzero.len() {
                0 => {
                    if basis[row].is_none() {
                        return Err(Error::RankDeficient);
                    }
                    break;
                }
                1 => {
                    let mut col = active.swap_remove(nonzero[0]);
                    if col[row].is_negative() {
                        for x in col.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    basis[row] = Some(col);
                    break;
                }
                _ => {
                    // reduce all larger entries by the smallest one
                    nonzero.sort_by(|&a, &b| active[a][row].abs().cmp(&active[b][row].abs()));
                    let pivot = nonzero[0];
                    for &c in &nonzero[1..] {
                        let q = active[c][row].div_floor(&active[pivot][row]);
                        if q.is_zero() {
                            continue;
                        }
                        for r in 0..=row {
                            let term = &q * &active[pivot][r];
                            active[c][r] -= term;
                        }
                    }
                }
            }
        }
    }
    debug_assert!(active.iter().all(|c| c.iter().all(|x| x.is_zero())));
    let mut cols: Vec<Vec<BigInt>> = basis
        .into_iter()
        .map(|c| c.expect("checked per row"))
        .collect();
    // Normalize off-pivot entries: reduce entry (i, j), j > i, into
    // [0, pivot_i) using column i; work upward so finished rows stay put.
    for j in 0..n {
        for i in (0..j).rev() {
            let q = cols[j][i].div_floor(&cols[i][i]);
            if q.is_zero() {
                continue;
            }
            let col_i = cols[i].clone();
            for r in 0..=i {
                let term = &q * &col_i[r];
                cols[j][r] -= term;
            }
        }
    }
    let mut m = IntMatrix::zero(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            debug_assert!(i <= j || x.is_zero());
            m[(i, j)] = x.clone();
        }
    }
    debug_assert!(m.is_upper_triangular());
    Ok(m)
}

/// Product of the pivots: the index of the lattice in `Z^n`.
pub fn hnf_determinant(basis: &IntMatrix) -> BigInt {
    (0..basis.n()).map(|i| basis[(i, i)].clone()).product()
}

/// Solves `basis * y = v` by back-substitution; `Some(y)` iff the
/// solution is integral, i.e. iff `v` lies in the lattice spanned by the
/// columns of the (upper-triangular, invertible) basis.
pub fn solve_upper_triangular(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = basis.n();
    debug_assert_eq!(v.len(), n);
    let mut y = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let mut rhs = v[i].clone();
        for j in (i + 1)..n {
            rhs -= &basis[(i, j)] * &y[j];
        }
        let (q, r) = rhs.div_rem(&basis[(i, i)]);
        if !r.is_zero() {
            return None;
        }
        y[i] = q;
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn cols(data: &[&[i64]]) -> Vec<Vec<BigInt>> {
        data.iter()
            .map(|c| c.iter().map(|&v| bi(v)).collect())
            .collect()
    }

    #[test]
    fn hnf_of_identity_generators() {
        let h = column_hnf(2, &cols(&[&[1, 0], &[0, 1]])).unwrap();
        assert_eq!(h, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_shape_and_uniqueness() {
        // the lattice Z(1,1) + Z(0,5)
        let h1 = column_hnf(2, &cols(&[&[1, 1], &[0, 5]])).unwrap();
        // same lattice, different generators
        let h2 = column_hnf(2, &cols(&[&[1, 6], &[5, 0], &[-4, 1]])).unwrap();
        assert_eq!(h1, h2);
        assert_eq!(h1, IntMatrix::from_i64_rows(&[&[5, 1], &[0, 1]]));
        assert_eq!(hnf_determinant(&h1), bi(5));
    }

    #[test]
    fn hnf_reduces_off_pivot_entries() {
        let h = column_hnf(3, &cols(&[&[4, 0, 0], &[7, 2, 0], &[3, 1, 3]])).unwrap();
        for i in 0..3 {
            assert!(h[(i, i)].is_positive());
            for j in (i + 1)..3 {
                assert!(!h[(i, j)].is_negative() && h[(i, j)] < h[(i, i)]);
            }
        }
        assert_eq!(hnf_determinant(&h), bi(24));
    }

    #[test]
    fn hnf_rejects_rank_deficient() {
        assert!(matches!(
            column_hnf(2, &cols(&[&[1, 0], &[2, 0]])),
            Err(Error::RankDeficient)
        ));
        assert!(matches!(column_hnf(2, &[]), Err(Error::RankDeficient)));
    }

    #[test]
    fn membership_by_back_substitution() {
        let h = column_hnf(2, &cols(&[&[1, 1], &[0, 5]])).unwrap();
        // (1,1) and (0,5) are in the lattice, (1,0) and (0,1) are not
        assert!(solve_upper_triangular(&h, &[bi(1), bi(1)]).is_some());
        assert!(solve_upper_triangular(&h, &[bi(0), bi(5)]).is_some());
        assert!(solve_upper_triangular(&h, &[bi(1), bi(0)]).is_none());
        assert!(solve_upper_triangular(&h, &[bi(0), bi(1)]).is_none());
    }

    #[test]
    fn random_regenerations_share_hnf() {
        // recombine basis columns with unimodular coefficient patterns
        let base = cols(&[&[3, 0, 0], &[1, 4, 0], &[2, 2, 6]]);
        let h = column_hnf(3, &base).unwrap();
        let mixed = vec![
            base[0]
                .iter()
                .zip(&base[1])
                .map(|(a, b)| a + b)
                .collect::<Vec<_>>(),
            base[1].clone(),
            base[2]
                .iter()
                .zip(&base[0])
                .map(|(a, b)| a - &(b * &bi(7)))
                .collect::<Vec<_>>(),
            base[0].clone(),
        ];
        assert_eq!(column_hnf(3, &mixed).unwrap(), h);
    }
}
